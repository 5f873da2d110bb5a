use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Role tag of one tensor factor.
///
/// `Line(n)` is Alice's n-th transmission qudit (A_n) before it travels,
/// `B(n)` the same qudit once it reaches the n-th receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    A,
    APrime,
    Line(usize),
    B(usize),
    C,
    TargetExt,
    Named(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::A => write!(f, "A"),
            Label::APrime => write!(f, "A'"),
            Label::Line(n) => write!(f, "A{n}"),
            Label::B(n) => write!(f, "B{n}"),
            Label::C => write!(f, "C"),
            Label::TargetExt => write!(f, "T~"),
            Label::Named(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed = |rest: &str| rest.parse::<usize>().ok().filter(|n| *n > 0);
        Ok(match s {
            "A" => Label::A,
            "A'" => Label::APrime,
            "C" => Label::C,
            "T~" => Label::TargetExt,
            "" => return Err(Error::UnknownLabel(String::new())),
            _ => {
                if let Some(n) = s.strip_prefix('A').and_then(indexed) {
                    Label::Line(n)
                } else if let Some(n) = s.strip_prefix('B').and_then(indexed) {
                    Label::B(n)
                } else {
                    Label::Named(s.to_string())
                }
            }
        })
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered tensor factors. The first factor is the most significant one in
/// the Kronecker ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutRepr", into = "LayoutRepr")]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<Label>,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    dims: Vec<usize>,
    labels: Vec<Label>,
}

impl TryFrom<LayoutRepr> for SubsystemLayout {
    type Error = Error;
    fn try_from(r: LayoutRepr) -> Result<Self> {
        SubsystemLayout::new(r.dims, r.labels)
    }
}

impl From<SubsystemLayout> for LayoutRepr {
    fn from(l: SubsystemLayout) -> Self {
        LayoutRepr {
            dims: l.dims,
            labels: l.labels,
        }
    }
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>, labels: Vec<Label>) -> Result<Self> {
        if dims.len() != labels.len() {
            return Err(Error::InvalidLayout(format!(
                "{} dims but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if dims.is_empty() {
            return Err(Error::InvalidLayout("no subsystems".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidLayout("zero-dimensional factor".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidLayout(format!("duplicate label {l}")));
            }
        }
        Ok(Self { dims, labels })
    }

    pub fn from_pairs<I: IntoIterator<Item = (Label, usize)>>(pairs: I) -> Result<Self> {
        let (labels, dims) = pairs.into_iter().unzip();
        Self::new(dims, labels)
    }

    /// `n` factors of dimension `d` labelled `Named("0")`, `Named("1")`, ...
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(
            vec![d; n],
            (0..n).map(|i| Label::Named(i.to_string())).collect(),
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &Label) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.labels.contains(label)
    }

    /// Positions of `labels`, in the order given. Rejects unknown or repeated labels.
    pub fn positions(&self, labels: &[Label]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l)?;
            if out.contains(&p) {
                return Err(Error::InvalidLayout(format!("label {l} listed twice")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Layout made of the factors at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    pub fn concat(&self, other: &SubsystemLayout) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Self::new(dims, labels)
    }

    pub fn relabel(&self, from: &Label, to: Label) -> Result<Self> {
        let p = self.position(from)?;
        let mut labels = self.labels.clone();
        labels[p] = to;
        Self::new(self.dims.clone(), labels)
    }

    pub fn with_dim(&self, label: &Label, dim: usize) -> Result<Self> {
        let p = self.position(label)?;
        let mut dims = self.dims.clone();
        dims[p] = dim;
        Self::new(dims, self.labels.clone())
    }
}

impl fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}[{d}]"))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}
