use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    PrivateDit,
    Bipartite,
    Ghz,
    FixedBaseline,
}

impl Protocol {
    pub fn tag(&self) -> &'static str {
        match self {
            Protocol::PrivateDit => "private-dit",
            Protocol::Bipartite => "bipartite",
            Protocol::Ghz => "ghz",
            Protocol::FixedBaseline => "fixed-baseline",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "private-dit" => Ok(Protocol::PrivateDit),
            "bipartite" => Ok(Protocol::Bipartite),
            "ghz" => Ok(Protocol::Ghz),
            "fixed-baseline" => Ok(Protocol::FixedBaseline),
            other => Err(Error::InvalidParameter(format!("unknown protocol `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub d: usize,
    pub n_lines: usize,
    pub x: Option<usize>,
    pub resource: String,
}

/// A named snapshot of the global state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub state: DensityMatrix,
}

/// One leaf of the measurement tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub charlie_outcome: usize,
    pub probability: f64,
    pub receiver_outcomes: Vec<usize>,
    pub decoded: Option<usize>,
    pub fidelity: Option<f64>,
    pub state: Option<DensityMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub protocol: Protocol,
    pub params: ProtocolParams,
    pub stages: Vec<Stage>,
    pub branches: Vec<Branch>,
    /// `p(m_B, m_C)` indexed `[m_B][m_C]` (private dit only).
    pub joint_pmf: Option<Vec<Vec<f64>>>,
    pub metrics: BTreeMap<String, f64>,
}

impl ProtocolTranscript {
    pub fn stage(&self, name: &str) -> Option<&DensityMatrix> {
        self.stages.iter().find(|s| s.name == name).map(|s| &s.state)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub(crate) fn push_stage(&mut self, name: &str, state: &DensityMatrix) {
        self.stages.push(Stage {
            name: name.into(),
            state: state.clone(),
        });
    }
}
