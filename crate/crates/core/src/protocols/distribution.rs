use std::collections::BTreeMap;

use super::resource::ResourceState;
use super::transcript::{Branch, Protocol, ProtocolParams, ProtocolTranscript};
use super::unitaries::{clone_extend_unitary, correction_unitary};
use crate::control::CoincidenceChannel;
use crate::error::Result;
use crate::metrics::{concurrence_2qubit, ggm, is_maximally_entangled};
use crate::numeric::{checked_pow, policy};
use crate::tensor::{
    apply_operator, fourier_basis, projective_measure, reorder, states, DensityMatrix, Ket, Label, SubsystemLayout,
};

/// Establishes `|Φ+>` between Alice and Bob: Alice copies her half of the
/// resource onto `A'` in the computational basis, sends `A'` through the
/// coincidence channel, Charlie measures in the Fourier basis and Bob
/// applies the phase correction.
pub fn run_bipartite_establishment(d: usize, resource: &ResourceState) -> Result<ProtocolTranscript> {
    run_distribution(Protocol::Bipartite, d, 1, resource)
}

/// Distributes `GHZ_{N+1}` to Alice and `N` receivers over `N` lines
/// sharing one control.
pub fn run_ghz_distribution(d: usize, n_lines: usize, resource: &ResourceState) -> Result<ProtocolTranscript> {
    run_distribution(Protocol::Ghz, d, n_lines, resource)
}

fn run_distribution(protocol: Protocol, d: usize, n: usize, resource: &ResourceState) -> Result<ProtocolTranscript> {
    resource.check_dim(d)?;
    let dim = checked_pow(d, n + 2).unwrap_or(usize::MAX);
    policy().guard(dim)?;
    let k = CoincidenceChannel::new(d, n)?;
    let lines: Vec<Label> = (1..=n).map(Label::Line).collect();
    let receivers: Vec<Label> = (1..=n).map(Label::B).collect();

    let rho = resource.density()?;
    let ancilla_layout = SubsystemLayout::from_pairs(lines.iter().map(|l| (l.clone(), d)))?;
    let ancilla = DensityMatrix::from_ket(&Ket::basis(d.pow(n as u32), 0)?, ancilla_layout)?;
    let mut order = vec![Label::A];
    order.extend(lines.iter().cloned());
    order.push(Label::C);
    let padded = reorder(&rho.tensor(&ancilla)?, &order)?;

    let mut clone_on = vec![Label::A];
    clone_on.extend(lines.iter().cloned());
    let cloned = apply_operator(clone_extend_unitary(d, n)?.matrix(), &padded, &clone_on)?;

    let mut after = k.apply(&cloned, &lines, &Label::C)?;
    for (l, b) in lines.iter().zip(&receivers) {
        after = after.relabel(l, b.clone())?;
    }

    let tol = policy().spectral_tol;
    let mut metrics = BTreeMap::new();
    if let Some(psi) = after.as_pure(tol) {
        metrics.insert("ggm_pre_measurement".into(), ggm(&psi, after.layout())?);
    }

    let target = states::ghz(d, n + 1)?;
    let mut branches = Vec::new();
    let (mut mean_f, mut min_f) = (0.0, f64::INFINITY);
    let mut all_max = true;
    let mut mean_conc = 0.0;
    for cb in projective_measure(&after, &fourier_basis(d)?, &Label::C)? {
        let Some(state) = cb.state else { continue };
        let corrected = apply_operator(
            correction_unitary(cb.outcome, d)?.matrix(),
            &state,
            &[receivers[0].clone()],
        )?;
        let f = corrected.fidelity_with_pure(&target)?;
        mean_f += cb.probability * f;
        min_f = min_f.min(f);
        all_max &= match corrected.as_pure(tol) {
            Some(psi) => is_maximally_entangled(&psi, corrected.layout(), &[Label::A], tol)?,
            None => false,
        };
        if d == 2 && n == 1 {
            mean_conc += cb.probability * concurrence_2qubit(&corrected)?;
        }
        branches.push(Branch {
            charlie_outcome: cb.outcome,
            probability: cb.probability,
            receiver_outcomes: Vec::new(),
            decoded: None,
            fidelity: Some(f),
            state: Some(corrected),
        });
    }
    metrics.insert("mean_fidelity".into(), mean_f);
    metrics.insert("min_branch_fidelity".into(), min_f);
    metrics.insert("all_branches_maximally_entangled".into(), if all_max { 1.0 } else { 0.0 });
    if d == 2 && n == 1 {
        metrics.insert("mean_concurrence".into(), mean_conc);
    }

    let mut t = ProtocolTranscript {
        protocol,
        params: ProtocolParams {
            d,
            n_lines: n,
            x: None,
            resource: resource.description(),
        },
        stages: Vec::new(),
        branches,
        joint_pmf: None,
        metrics,
    };
    t.push_stage("resource", &rho);
    t.push_stage("cloned", &cloned);
    t.push_stage("after_channel", &after);
    Ok(t)
}
