use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::channel::{channels_equal, erasing_channel, vacuum_extend};
use crate::sampling::{random_amplitudes, random_density, random_unitary};
use crate::tensor::{states, DensityMatrix, Ket, Label, SubsystemLayout, Tensor};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn tc(d: usize) -> SubsystemLayout {
    SubsystemLayout::from_pairs([(Label::A, d), (Label::C, d)]).unwrap()
}

fn dist(a: &KrausChannel, b: &KrausChannel) -> f64 {
    channels_equal(a, b, 1e-10).unwrap().distance
}

fn e0_ext(d: usize) -> Vec<Complex64> {
    let mut a = vec![c(0.0); d];
    a[0] = c(1.0);
    a
}

#[test]
fn switch_of_identities_is_identity() {
    let id = KrausChannel::identity(3);
    let s = switch_two(&id, &id).unwrap();
    assert!(dist(&s, &KrausChannel::identity(6)) < 1e-14);
}

#[test]
fn switch_of_erasing_keeps_bell_state() {
    let s = switch_two(&erasing_channel(2, 0).unwrap(), &erasing_channel(2, 1).unwrap()).unwrap();
    let phi = DensityMatrix::from_ket(&states::phi_plus(2), tc(2)).unwrap();
    let out = s.apply(&phi, &[Label::A, Label::C]).unwrap();
    assert!(out.max_abs_diff(&phi) < 1e-14);
}

#[test]
fn switch_on_plus_plus() {
    let s = switch_two(&erasing_channel(2, 0).unwrap(), &erasing_channel(2, 1).unwrap()).unwrap();
    let plus = states::fourier_ket(2, 0).unwrap();
    let pp = DensityMatrix::from_ket(&plus.tensor(&plus), tc(2)).unwrap();
    let out = s.apply(&pp, &[Label::A, Label::C]).unwrap();
    let mut expect = states::phi_plus(2).projector().matrix() * c(0.5);
    expect[(0, 0)] += c(0.25);
    expect[(3, 3)] += c(0.25);
    assert!((out.matrix() - expect).camax() < 1e-14);
}

#[test]
fn switch_rejects_mismatched_dims() {
    let r = switch_two(&KrausChannel::identity(2), &KrausChannel::identity(3));
    assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
}

#[test]
fn choice_of_coincident_extensions_restricts_to_switch() {
    let e = coincident_extension(2, 0).unwrap();
    let f = coincident_extension(2, 1).unwrap();
    let ch = choice_two(&e, &f).unwrap();
    assert!(ch.trace_preservation_defect() < 1e-12);
    let restricted = restrict_to_target(&ch, 2, 2).unwrap();
    let s = switch_two(&erasing_channel(2, 0).unwrap(), &erasing_channel(2, 1).unwrap()).unwrap();
    assert!(dist(&restricted, &s) < 1e-12);
}

#[test]
fn choice_of_extended_identities_is_identity() {
    let id = vacuum_extend(&KrausChannel::identity(2), &[c(1.0)]).unwrap();
    let ch = choice_two(&id, &id).unwrap();
    assert!(dist(&ch, &KrausChannel::identity(6)) < 1e-14);
}

#[test]
fn choice_fixes_vacuum_with_control_zero() {
    let e = coincident_extension(2, 0).unwrap();
    let f = coincident_extension(2, 1).unwrap();
    let ch = choice_two(&e, &f).unwrap();
    let layout = SubsystemLayout::from_pairs([(Label::TargetExt, 3), (Label::C, 2)]).unwrap();
    let vac = Ket::basis(3, 2).unwrap().tensor(&Ket::basis(2, 0).unwrap());
    let rho = DensityMatrix::from_ket(&vac, layout).unwrap();
    let out = ch.apply(&rho, &[Label::TargetExt, Label::C]).unwrap();
    assert!(out.max_abs_diff(&rho) < 1e-14);
}

#[test]
fn cyclic_switch_at_two_is_switch_two() {
    let fam = erasing_family(2).unwrap();
    let cyc = cyclic_switch(&fam).unwrap();
    let s = switch_two(&fam[0], &fam[1]).unwrap();
    assert!(dist(&cyc, &s) < 1e-14);
}

#[test]
fn cyclic_switch_d3_kraus_count_and_dfs() {
    let cyc = cyclic_switch(&erasing_family(3).unwrap()).unwrap();
    assert_eq!(cyc.len(), 7);
    let phi = DensityMatrix::from_ket(&states::phi_x(3, 0).unwrap(), tc(3)).unwrap();
    let out = cyc.apply(&phi, &[Label::A, Label::C]).unwrap();
    assert!(out.max_abs_diff(&phi) < 1e-13);
}

#[test]
fn cyclic_switch_rejects_empty() {
    assert!(cyclic_switch(&[]).is_err());
}

#[test]
fn coincidence_of_order_choice_and_closed_form() {
    for d in 2..=4 {
        let order = cyclic_switch(&erasing_family(d).unwrap()).unwrap();
        let exts: Vec<_> = (0..d).map(|l| coincident_extension(d, l).unwrap()).collect();
        let choice = controlled_choice(&exts).unwrap();
        let k = k_closed_form(d).unwrap();
        assert!(dist(&order, &choice) < 1e-12, "d={d}");
        assert!(dist(&order, &k) < 1e-12, "d={d}");
    }
}

#[test]
fn controlled_choice_matches_choice_two_at_two() {
    let exts: Vec<_> = (0..2).map(|l| coincident_extension(2, l).unwrap()).collect();
    let multi = controlled_choice(&exts).unwrap();
    let two = restrict_to_target(&choice_two(&exts[0], &exts[1]).unwrap(), 2, 2).unwrap();
    assert!(dist(&multi, &two) < 1e-12);
}

#[test]
fn choice_depends_on_amplitudes() {
    // same erasing branches, amplitudes (1, 1)/√2 instead of <i|l>
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    let exts: Vec<_> = (0..2)
        .map(|l| vacuum_extend(&erasing_channel(2, l).unwrap(), &[h, h]).unwrap())
        .collect();
    let choice = controlled_choice(&exts).unwrap();
    let order = cyclic_switch(&erasing_family(2).unwrap()).unwrap();
    assert!(dist(&choice, &order) > 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 2..=3 {
        let exts: Vec<_> = (0..d)
            .map(|l| vacuum_extend(&erasing_channel(d, l).unwrap(), &random_amplitudes(&mut rng, d)).unwrap())
            .collect();
        let choice = controlled_choice(&exts).unwrap();
        let order = cyclic_switch(&erasing_family(d).unwrap()).unwrap();
        assert!(dist(&choice, &order) > 1e-6);
    }
}

#[test]
fn controlled_choice_rejects_unnormalized_amplitudes() {
    let base = erasing_channel(2, 0).unwrap();
    let good = vacuum_extend(&base, &e0_ext(2)).unwrap();
    let mut bad = good.clone();
    bad.amplitudes_mut()[0] = c(0.5);
    assert!(matches!(
        controlled_choice(&[good, bad]),
        Err(Error::InvalidAmplitudes(_))
    ));
}

#[test]
fn order_is_representation_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 2..=3 {
        let fam = erasing_family(d).unwrap();
        let mixed: Vec<_> = fam
            .iter()
            .map(|ch| ch.remixed(&random_unitary(&mut rng, ch.len())).unwrap())
            .collect();
        assert!(dist(&cyclic_switch(&fam).unwrap(), &cyclic_switch(&mixed).unwrap()) < 1e-12);
    }
}

#[test]
fn closed_form_fixes_all_phi_x() {
    for d in 2..=5 {
        let k = CoincidenceChannel::new(d, 1).unwrap();
        let kk = k_closed_form(d).unwrap();
        for x in 0..d {
            let phi = states::phi_x(d, x).unwrap();
            let rho = DensityMatrix::from_ket(&phi, tc(d)).unwrap();
            let out = k.apply(&rho, &[Label::A], &Label::C).unwrap();
            assert!(out.fidelity_with_pure(&phi).unwrap() > 1.0 - 1e-12);
            let out2 = kk.apply(&rho, &[Label::A, Label::C]).unwrap();
            assert!(out2.max_abs_diff(&out) < 1e-13);
        }
    }
}

#[test]
fn closed_form_kraus_count() {
    for d in 2..=4 {
        assert_eq!(k_closed_form(d).unwrap().len(), 1 + d * (d - 1));
    }
}

#[test]
fn multiline_reductions_and_oracle() {
    assert!(dist(&k_multiline(2, 1).unwrap(), &k_closed_form(2).unwrap()) < 1e-14);
    for n in 1..=2 {
        let closed = k_multiline(2, n).unwrap();
        let brute = multiline_enumeration(2, n).unwrap();
        assert!(dist(&closed, &brute) < 1e-12, "N={n}");
    }
    assert!(dist(&k_multiline(3, 1).unwrap(), &multiline_enumeration(3, 1).unwrap()) < 1e-12);
}

#[test]
fn spec_build_matches_closed_forms() {
    for (d, n) in [(2, 1), (2, 2), (3, 1)] {
        let k = k_multiline(d, n).unwrap();
        let order = ControlledChannelSpec::erasing(d, ControlMode::Order, n).unwrap().build().unwrap();
        let choice = ControlledChannelSpec::erasing(d, ControlMode::Choice, n).unwrap().build().unwrap();
        assert!(dist(&order, &k) < 1e-12, "order d={d} N={n}");
        assert!(dist(&choice, &k) < 1e-12, "choice d={d} N={n}");
    }
}

#[test]
fn spec_validation() {
    let mut spec = ControlledChannelSpec::erasing(2, ControlMode::Order, 1).unwrap();
    spec.mode = ControlMode::Choice;
    assert!(spec.build().is_err());
    spec.mode = ControlMode::Order;
    spec.branch_channels.pop();
    assert!(matches!(spec.build(), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn multiline_keeps_padded_ghz() {
    let ghz = states::ghz(2, 4).unwrap();
    let layout = SubsystemLayout::from_pairs([
        (Label::A, 2),
        (Label::Line(1), 2),
        (Label::Line(2), 2),
        (Label::C, 2),
    ])
    .unwrap();
    let rho = DensityMatrix::from_ket(&ghz, layout).unwrap();
    let kraus = k_multiline(2, 2).unwrap();
    let out = kraus.apply(&rho, &[Label::Line(1), Label::Line(2), Label::C]).unwrap();
    assert!(out.fidelity_with_pure(&ghz).unwrap() > 1.0 - 1e-12);
    let direct = CoincidenceChannel::new(2, 2)
        .unwrap()
        .apply(&rho, &[Label::Line(1), Label::Line(2)], &Label::C)
        .unwrap();
    assert!(direct.max_abs_diff(&out) < 1e-13);
}

#[test]
fn multiline_fixes_phased_ghz() {
    for d in 2..=3 {
        for n in 1..=3 {
            let k = CoincidenceChannel::new(d, n).unwrap();
            let phases: Vec<f64> = (0..d).map(|j| 0.7 * j as f64 + 0.1 * n as f64).collect();
            let psi = states::phased_ghz(d, n + 1, &phases).unwrap();
            let mut pairs: Vec<_> = (1..=n).map(|l| (Label::Line(l), d)).collect();
            pairs.push((Label::C, d));
            let rho = DensityMatrix::from_ket(&psi, SubsystemLayout::from_pairs(pairs).unwrap()).unwrap();
            let lines: Vec<_> = (1..=n).map(Label::Line).collect();
            let out = k.apply(&rho, &lines, &Label::C).unwrap();
            assert!(out.fidelity_with_pure(&psi).unwrap() > 1.0 - 1e-10, "d={d} N={n}");
        }
    }
}

#[test]
fn multiline_output_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (d, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let k = CoincidenceChannel::new(d, n).unwrap();
        let mut pairs: Vec<_> = (1..=n).map(|l| (Label::Line(l), d)).collect();
        pairs.push((Label::C, d));
        let layout = SubsystemLayout::from_pairs(pairs).unwrap();
        let lines: Vec<_> = (1..=n).map(Label::Line).collect();
        let dim = layout.total_dim();
        let diag: Vec<usize> = (0..d).map(|j| j * (dim - 1) / (d - 1)).collect();
        for _ in 0..20 {
            let rho = random_density(&mut rng, layout.clone(), dim).unwrap();
            let out = k.apply(&rho, &lines, &Label::C).unwrap();
            let m = out.matrix();
            for r in 0..dim {
                for col in 0..dim {
                    if !(diag.contains(&r) && diag.contains(&col)) {
                        assert!(m[(r, col)].norm() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn multiline_guard() {
    assert!(matches!(
        k_multiline_guarded(9, 3, 4096),
        Err(Error::ResourceGuard { dim: 6561, max: 4096 })
    ));
    assert!(k_multiline_guarded(2, 2, 8).is_ok());
    assert!(matches!(k_multiline(1, 1), Err(Error::InvalidDimension(_))));
}

#[test]
fn t_decomposition_of_coincident_extensions() {
    for d in 2..=3 {
        let exts: Vec<_> = (0..d).map(|l| coincident_extension(d, l).unwrap()).collect();
        let td = t_decomposition(&exts).unwrap();
        for (j, v) in td.v.iter().enumerate() {
            assert!((v.inner(&Ket::basis(d, j).unwrap()) - c(1.0)).norm() < 1e-12);
        }
        let p0 = k_closed_form(d).unwrap().kraus()[0].clone();
        assert!(td.t0.frobenius_distance(&p0) < 1e-12);
        assert!(dist(&td.to_channel().unwrap(), &controlled_choice(&exts).unwrap()) < 1e-12);
    }
}

#[test]
fn t_decomposition_subnormalized_vector() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let k = |r: usize, col: usize, w: f64| {
        let mut m = DMatrix::zeros(2, 2);
        m[(r, col)] = c(w);
        crate::tensor::Operator::from_matrix(m)
    };
    let b0 = KrausChannel::new(vec![k(0, 0, 1.0), k(0, 1, s), k(0, 1, s)]).unwrap();
    let e0 = vacuum_extend(&b0, &[c(0.0), c(1.0), c(0.0)]).unwrap();
    let e1 = coincident_extension(2, 1).unwrap();
    let td = t_decomposition(&[e0.clone(), e1.clone()]).unwrap();
    assert!((td.v[0].norm() - s).abs() < 1e-12);
    assert!(td.v[0].overlap_sq(&Ket::basis(2, 1).unwrap()) > 0.5 - 1e-12);
    let w = &td.remainder_weights[0];
    assert!(crate::tensor::spectral::hermitian_eigenvalues(w.matrix())
        .iter()
        .all(|&x| x > 0.4));
    assert!(dist(&td.to_channel().unwrap(), &controlled_choice(&[e0, e1]).unwrap()) < 1e-12);
}

#[test]
fn t_decomposition_random_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 2..=3 {
        for _ in 0..100 {
            let exts: Vec<_> = (0..d)
                .map(|l| vacuum_extend(&erasing_channel(d, l).unwrap(), &random_amplitudes(&mut rng, d)).unwrap())
                .collect();
            let td = t_decomposition(&exts).unwrap();
            assert!(td.v.iter().all(|v| v.norm() <= 1.0 + 1e-12));
            assert!(dist(&td.to_channel().unwrap(), &controlled_choice(&exts).unwrap()) < 1e-10);
        }
    }
}

#[test]
fn t_decomposition_rejects_non_erasing_branch() {
    let id = vacuum_extend(&KrausChannel::identity(2), &[c(1.0)]).unwrap();
    let e1 = coincident_extension(2, 1).unwrap();
    assert!(matches!(t_decomposition(&[id, e1]), Err(Error::InvalidChannel(_))));
}
