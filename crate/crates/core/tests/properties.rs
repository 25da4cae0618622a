use proptest::prelude::*;

use privrand::belldiag::{belldiag_gap_condition, belldiag_gap_margin_matrix};
use privrand::bounds::{alpha_iid_bound, ibit_witness_bound, ppt_repeater_bound, ppt_transposed_rate_bound, purity_form_bound};
use privrand::clodcc::{apply, apply_with, random_circuit, verify_unital, PartyMap};
use privrand::densop::{ops, Party, Register, SubsystemLayout};
use privrand::ensembles::{alpha_v, alpha_v_twisting, depolarize_register, werner, BellDiagParams, WernerParams};
use privrand::entropic::{mutual_information, von_neumann_entropy};
use privrand::random::{random_density, random_separable, rng_for};
use privrand::werner::{werner_gamma_spectrum, werner_mi, werner_mi_gamma, werner_mi_spectral};

fn abc(a: usize, c: usize, b: usize) -> SubsystemLayout {
    SubsystemLayout::new(vec![
        Register::new("A", a, Party::A),
        Register::new("C", c, Party::C),
        Register::new("B", b, Party::B),
    ])
    .unwrap()
}

fn simplex() -> impl Strategy<Value = BellDiagParams> {
    prop::array::uniform4(0.0f64..1.0)
        .prop_filter("non-degenerate", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| {
            let s: f64 = w.iter().sum();
            BellDiagParams::from_slice(&w.map(|x| x / s)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_keeps_trace_and_positivity(seed in any::<u64>(), da in 1usize..4, dc in 1usize..4, db in 1usize..4) {
        let rho = random_density(abc(da, dc, db), &mut rng_for(seed, 0));
        for drop in [&["A"][..], &["C"], &["A", "B"]] {
            let r = rho.partial_trace(drop).unwrap();
            let v = r.validate().unwrap();
            prop_assert!((v.trace - 1.0).abs() < 1e-12);
            prop_assert!(v.min_eigenvalue > -1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_involutive(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let rho = random_density(SubsystemLayout::bipartite(da, db), &mut rng_for(seed, 0));
        let once = ops::partial_transpose(rho.matrix(), rho.layout(), &["B"]).unwrap();
        let twice = ops::partial_transpose(&once, rho.layout(), &["B"]).unwrap();
        prop_assert_eq!(twice.max_abs_diff(rho.matrix()), 0.0);
    }

    #[test]
    fn entropy_bounds(seed in any::<u64>()) {
        let rho = random_density(abc(2, 2, 3), &mut rng_for(seed, 0));
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= 0.0 && s <= 12f64.log2() + 1e-12);
        prop_assert!(mutual_information(&rho, &["B"]).unwrap() >= -1e-10);
    }

    #[test]
    fn werner_closed_forms_match_spectrum(d in 2usize..7, alpha in 0.0f64..=1.0) {
        let (i, ig) = werner_mi_spectral(d, alpha).unwrap();
        prop_assert!((i - werner_mi(d, alpha).unwrap()).abs() < 1e-9);
        prop_assert!((ig - werner_mi_gamma(d, alpha).unwrap()).abs() < 1e-9);
        let s: f64 = werner_gamma_spectrum(d, alpha).unwrap().eigenvalues.iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
        prop_assert!(i >= -1e-9 && i <= 2.0 * (d as f64).log2() + 1e-9);
    }

    #[test]
    fn circuits_are_unital(seed in any::<u64>(), steps in 0usize..20) {
        let layout = abc(2, 3, 2);
        let mut rng = rng_for(seed, 0);
        let c = random_circuit(&layout, steps, &mut rng);
        prop_assert!(verify_unital(&c).unwrap().deviation <= 1e-10);
        let rho = random_density(layout, &mut rng);
        let a = apply(&c, &rho).unwrap();
        let b = apply_with(&c, &rho, PartyMap::MergeAB).unwrap();
        prop_assert!(a.state.matrix().max_abs_diff(b.state.matrix()) <= 1e-12);
    }

    #[test]
    fn ppt_bound_forms_agree(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let rho = random_separable(&SubsystemLayout::bipartite(2, 2), 3, &mut rng);
        let tilde = random_separable(&SubsystemLayout::bipartite(2, 3), 2, &mut rng);
        let a = ppt_repeater_bound(&rho, &tilde).unwrap().value;
        let b = purity_form_bound(&rho, &tilde).unwrap().value;
        let c = ppt_transposed_rate_bound(&rho, &tilde).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 && (a - c).abs() <= 1e-10);
    }

    #[test]
    fn bell_entropy_form_matches_matrices(p in simplex()) {
        prop_assume!(p.is_separable());
        let m = belldiag_gap_margin_matrix(&p).unwrap();
        prop_assert!((m - belldiag_gap_condition(&p).margin()).abs() <= 1e-9);
    }

    #[test]
    fn ibit_witness_bound_holds(eps in 0.0f64..0.5, d in 2usize..4) {
        let noisy = depolarize_register(&alpha_v(d).unwrap(), "A", eps).unwrap();
        let r = ibit_witness_bound(&noisy, &alpha_v_twisting(d).unwrap(), 1, eps).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn alpha_iid_decreasing(d in 12usize..5000) {
        prop_assert!(alpha_iid_bound(d + 1) < alpha_iid_bound(d));
        prop_assert_eq!(alpha_iid_bound(d) < 1.0, d > 32);
    }

    #[test]
    fn werner_ppt_iff_nonnegative(d in 2usize..5, alpha in -1.0f64..=1.0) {
        let rho = werner(WernerParams::new(d, alpha).unwrap());
        let ppt = rho.is_ppt(&["B"]).unwrap().ppt;
        if alpha.abs() > 1e-6 {
            prop_assert_eq!(ppt, alpha > 0.0);
        }
    }
}
