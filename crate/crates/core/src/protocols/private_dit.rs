use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::resource::ResourceState;
use super::transcript::{Branch, Protocol, ProtocolParams, ProtocolTranscript};
use super::unitaries::phase_encoding_unitary;
use crate::control::CoincidenceChannel;
use crate::error::{Error, Result};
use crate::metrics::{helstrom_error, mutual_information};
use crate::tensor::{apply_operator, fourier_basis, partial_trace, projective_measure, trace_distance, DensityMatrix, Label};

/// Private transmission of `x ∈ Z_d`: Alice applies `U_x` to her half of the
/// resource, sends it through the coincidence channel to Bob, Charlie and Bob
/// measure in the Fourier basis and Bob decodes `(m_B + m_C) mod d`.
pub fn run_private_dit(d: usize, x: usize, resource: &ResourceState) -> Result<ProtocolTranscript> {
    resource.check_dim(d)?;
    let u = phase_encoding_unitary(x, d)?;
    let rho = resource.density()?;
    let encoded = apply_operator(u.matrix(), &rho, &[Label::A])?;
    let mut t = run_private_dit_encoded(d, x, &encoded, &resource.description())?;
    t.stages.insert(
        0,
        super::transcript::Stage {
            name: "resource".into(),
            state: rho,
        },
    );
    Ok(t)
}

/// Transcripts for every message `x = 0, …, d−1`.
pub fn run_private_dit_all(d: usize, resource: &ResourceState) -> Result<Vec<ProtocolTranscript>> {
    (0..d).map(|x| run_private_dit(d, x, resource)).collect()
}

/// The private-dit pipeline from an already encoded state on `A ⊗ C`.
pub fn run_private_dit_encoded(
    d: usize,
    x: usize,
    encoded: &DensityMatrix,
    resource: &str,
) -> Result<ProtocolTranscript> {
    if x >= d {
        return Err(Error::OutOfRange {
            what: "message",
            value: x,
            bound: d,
        });
    }
    if encoded.layout().dims() != [d, d] {
        return Err(Error::InvalidLayout(format!(
            "encoded state must be A ⊗ C with dimension {d} each, got {}",
            encoded.layout()
        )));
    }
    let k = CoincidenceChannel::new(d, 1)?;
    let after = k
        .apply(encoded, &[Label::A], &Label::C)?
        .relabel(&Label::A, Label::B(1))?;
    let fourier = fourier_basis(d)?;

    let mut branches = Vec::new();
    let mut joint = vec![vec![0.0; d]; d];
    let mut success = 0.0;
    for cb in projective_measure(&after, &fourier, &Label::C)? {
        let Some(bob_state) = cb.state else { continue };
        for bb in projective_measure(&bob_state, &fourier, &Label::B(1))? {
            let p = cb.probability * bb.probability;
            let decoded = (bb.outcome + cb.outcome) % d;
            joint[bb.outcome][cb.outcome] += p;
            if decoded == x {
                success += p;
            }
            branches.push(Branch {
                charlie_outcome: cb.outcome,
                probability: p,
                receiver_outcomes: vec![bb.outcome],
                decoded: Some(decoded),
                fidelity: None,
                state: None,
            });
        }
    }

    let mut metrics = BTreeMap::new();
    metrics.insert("success_probability".into(), success);
    for m in 0..d {
        metrics.insert(format!("charlie_pmf_{m}"), joint.iter().map(|r| r[m]).sum());
    }
    let mut t = ProtocolTranscript {
        protocol: Protocol::PrivateDit,
        params: ProtocolParams {
            d,
            n_lines: 1,
            x: Some(x),
            resource: resource.into(),
        },
        stages: Vec::new(),
        branches,
        joint_pmf: Some(joint),
        metrics,
    };
    t.push_stage("encoded", encoded);
    t.push_stage("after_channel", &after);
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwisePrivacy {
    pub x0: usize,
    pub x1: usize,
    pub charlie_trace_distance: f64,
    pub charlie_tv_distance: f64,
    pub helstrom_error: f64,
}

/// What Charlie alone can learn about `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub d: usize,
    pub max_charlie_trace_distance: f64,
    pub max_charlie_tv_distance: f64,
    /// Largest deviation of any Charlie outcome probability from `1/d`.
    pub max_charlie_pmf_deviation: f64,
    pub charlie_pmfs: Vec<Vec<f64>>,
    pub pairs: Vec<PairwisePrivacy>,
    /// `I(x; x̂)` in bits under a uniform prior, when every `x` occurs once.
    pub decode_mutual_information_bits: Option<f64>,
}

/// Compares Charlie's reduced states and outcome statistics across the
/// private-dit transcripts of different messages.
pub fn privacy_report(transcripts: &[ProtocolTranscript]) -> Result<PrivacyReport> {
    let first = transcripts
        .first()
        .ok_or_else(|| Error::InvalidParameter("no transcripts".into()))?;
    let d = first.params.d;
    let mut marginals = Vec::with_capacity(transcripts.len());
    let mut pmfs = Vec::with_capacity(transcripts.len());
    let mut xs = Vec::with_capacity(transcripts.len());
    for t in transcripts {
        if t.protocol != Protocol::PrivateDit || t.params.d != d || t.params.resource != first.params.resource {
            return Err(Error::InvalidParameter(
                "transcripts must be private-dit runs with one dimension and resource".into(),
            ));
        }
        let after = t
            .stage("after_channel")
            .ok_or_else(|| Error::InvalidParameter("transcript lacks the after_channel stage".into()))?;
        marginals.push(partial_trace(after, &[Label::C])?);
        let joint = t
            .joint_pmf
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("transcript lacks a joint pmf".into()))?;
        pmfs.push((0..d).map(|m| joint.iter().map(|r| r[m]).sum()).collect::<Vec<f64>>());
        xs.push(t.params.x.unwrap_or(0));
    }

    let mut pairs = Vec::new();
    for i in 0..transcripts.len() {
        for j in i + 1..transcripts.len() {
            let tv = pmfs[i].iter().zip(&pmfs[j]).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            pairs.push(PairwisePrivacy {
                x0: xs[i],
                x1: xs[j],
                charlie_trace_distance: trace_distance(&marginals[i], &marginals[j])?,
                charlie_tv_distance: tv,
                helstrom_error: helstrom_error(&marginals[i], &marginals[j], 0.5)?,
            });
        }
    }
    let uniform = 1.0 / d as f64;
    let max_dev = pmfs.iter().flatten().map(|p| (p - uniform).abs()).fold(0.0, f64::max);

    let mut sorted = xs.clone();
    sorted.sort_unstable();
    let decode_mi = if sorted == (0..d).collect::<Vec<_>>() {
        let mut table = vec![vec![0.0; d]; d];
        for (t, &x) in transcripts.iter().zip(&xs) {
            for b in &t.branches {
                if let Some(xh) = b.decoded {
                    table[x][xh] += b.probability / d as f64;
                }
            }
        }
        Some(mutual_information(&table)?)
    } else {
        None
    };

    Ok(PrivacyReport {
        d,
        max_charlie_trace_distance: pairs.iter().map(|p| p.charlie_trace_distance).fold(0.0, f64::max),
        max_charlie_tv_distance: pairs.iter().map(|p| p.charlie_tv_distance).fold(0.0, f64::max),
        max_charlie_pmf_deviation: max_dev,
        charlie_pmfs: pmfs,
        pairs,
        decode_mutual_information_bits: decode_mi,
    })
}
