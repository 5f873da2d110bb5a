use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qswitch_lab::channel::{channels_equal, choi, erasing_channel, vacuum_extend, KrausChannel};
use qswitch_lab::control::{controlled_choice, CoincidenceChannel};
use qswitch_lab::sampling::{random_amplitudes, random_density, random_unitary};
use qswitch_lab::tensor::{
    fourier_basis, orthonormality_defect, partial_trace, projective_measure, DensityMatrix, Label, Operator,
    SubsystemLayout,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        ..ProptestConfig::default()
    }
}

/// Kraus operators from the blocks of a random `(d·r) × d` isometry.
fn random_channel(rng: &mut ChaCha8Rng, d: usize) -> KrausChannel {
    let r = rng.gen_range(1..=d + 1);
    let v = random_unitary(rng, d * r);
    let ops = (0..r)
        .map(|k| Operator::from_matrix(v.view((k * d, 0), (d, d)).into_owned()))
        .collect();
    KrausChannel::new(ops).unwrap()
}

fn pair(d: usize) -> SubsystemLayout {
    SubsystemLayout::from_pairs([(Label::A, d), (Label::C, d)]).unwrap()
}

fn dims() -> impl Strategy<Value = usize> {
    2usize..=4
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn random_channels_are_trace_preserving_with_psd_choi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 2..=4 {
            let ch = random_channel(&mut rng, d);
            prop_assert!(ch.trace_preservation_defect() < TOL);
            let c = choi(&ch);
            prop_assert!(c.min_eigenvalue() > -TOL);
            // tracing out the output leaves the identity
            let marg = c.output_marginal();
            let expect = DMatrix::<Complex64>::identity(d, d);
            prop_assert!((marg - expect).norm() < TOL);
        }
    }

    #[test]
    fn kraus_remix_leaves_channel_unchanged(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 2..=4 {
            let ch = random_channel(&mut rng, d);
            let u = random_unitary(&mut rng, ch.len());
            let mixed = ch.remixed(&u).unwrap();
            prop_assert!(channels_equal(&ch, &mixed, TOL).unwrap().equal);
        }
    }

    #[test]
    fn fourier_measurement_is_complete(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 2..=4 {
            let basis = fourier_basis(d).unwrap();
            prop_assert!(orthonormality_defect(&basis) < 1e-12);
            let rank = rng.gen_range(1..=d * d);
            let rho = random_density(&mut rng, pair(d), rank).unwrap();
            let branches = projective_measure(&rho, &basis, &Label::C).unwrap();
            prop_assert_eq!(branches.len(), d);
            // Σ_m p_m ρ_m reproduces the unmeasured marginal
            let mut avg = DMatrix::<Complex64>::zeros(d, d);
            let mut total = 0.0;
            for b in &branches {
                total += b.probability;
                if let Some(s) = &b.state {
                    avg += s.matrix().scale(b.probability);
                }
            }
            prop_assert!((total - 1.0).abs() < TOL);
            let marg = partial_trace(&rho, &[Label::A]).unwrap();
            prop_assert!((avg - marg.matrix()).norm() < TOL);
        }
    }

    #[test]
    fn coincidence_channel_preserves_trace_and_positivity(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 2..=4 {
            let mut pairs: Vec<_> = (1..=n).map(|l| (Label::Line(l), d)).collect();
            pairs.push((Label::C, d));
            let layout = SubsystemLayout::from_pairs(pairs).unwrap();
            let rank = rng.gen_range(1..=3);
            let rho = random_density(&mut rng, layout, rank).unwrap();
            let lines: Vec<_> = (1..=n).map(Label::Line).collect();
            let out = CoincidenceChannel::new(d, n).unwrap().apply(&rho, &lines, &Label::C).unwrap();
            prop_assert!((out.trace().re - 1.0).abs() < TOL);
            prop_assert!(out.min_eigenvalue() > -TOL);
        }
    }

    #[test]
    fn unitary_conjugation_keeps_a_state(d in dims(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, pair(d), 2).unwrap();
        let ch = KrausChannel::unitary(Operator::from_matrix(random_unitary(&mut rng, d))).unwrap();
        let out = ch.apply(&rho, &[Label::A]).unwrap();
        prop_assert!((out.purity() - rho.purity()).abs() < TOL);
        // the untouched factor's marginal is unchanged
        let before = partial_trace(&rho, &[Label::C]).unwrap();
        let after = partial_trace(&out, &[Label::C]).unwrap();
        prop_assert!(before.max_abs_diff(&after) < TOL);
        let _ = DensityMatrix::new(out.matrix().clone(), out.layout().clone()).unwrap();
    }
}

// each d = 4 case diagonalizes a 400 × 400 Choi matrix
proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn controlled_choice_with_any_amplitudes_is_a_channel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 2..=4 {
            let exts: Vec<_> = (0..d)
                .map(|l| vacuum_extend(&erasing_channel(d, l).unwrap(), &random_amplitudes(&mut rng, d)).unwrap())
                .collect();
            let ch = controlled_choice(&exts).unwrap();
            prop_assert!(ch.trace_preservation_defect() < TOL);
            prop_assert!(choi(&ch).min_eigenvalue() > -TOL);
        }
    }
}
