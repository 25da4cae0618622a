//! Values computed by an independent dense-matrix evaluation and frozen here.

use approx::assert_abs_diff_eq;
use privrand::belldiag::{belldiag_gap_condition, elementwise_inequality};
use privrand::bounds::{gap_condition, ibit_witness_bound, mi_form_bound, ppt_repeater_bound, transposed_noise_distance};
use privrand::ensembles::{alpha_v, alpha_v_twisting, depolarize_register, werner, BellDiagParams, WernerParams};
use privrand::werner::{critical_dimension, werner_mi, werner_mi_gamma};

// d, alpha, I, I_gamma, repeater bound of the pair (rho, rho)
const WERNER: &[(usize, f64, f64, f64, f64)] = &[
    (2, 1.0, 0.415037499278844, 0.207518749639422, 0.415037499278843),
    (3, 1.0, 0.584962500721156, 0.251629167387822, 0.503258334775644),
    (5, 1.0, 0.736965594166205, 0.253958094310438, 0.507916188620873),
    (3, 0.6, 0.0630344058337933, 0.0479969065549501, 0.0959938131099003),
    (4, 0.3, 0.00194180769531904, 0.00181465493562305, 0.0036293098712461),
    (7, 0.15, 3.75966279273499e-05, 3.69719485080466e-05, 7.39438970160933e-05),
];

#[test]
fn werner_information_values() {
    for &(d, a, i, ig, rep) in WERNER {
        assert_abs_diff_eq!(werner_mi(d, a).unwrap(), i, epsilon = 1e-12);
        assert_abs_diff_eq!(werner_mi_gamma(d, a).unwrap(), ig, epsilon = 1e-12);
        let rho = werner(WernerParams::new(d, a).unwrap());
        assert_abs_diff_eq!(ppt_repeater_bound(&rho, &rho).unwrap().value, rep, epsilon = 1e-10);
        assert_abs_diff_eq!(mi_form_bound(&rho).unwrap().value, rep, epsilon = 1e-9);
        let g = gap_condition(&rho).unwrap();
        assert_abs_diff_eq!(g.lhs, i, epsilon = 1e-10);
        assert_abs_diff_eq!(g.rhs, 2.0 * ig, epsilon = 1e-10);
    }
}

#[test]
fn critical_dimension_table() {
    let table = [
        (0.1, 51),
        (0.15, 34),
        (0.2, 26),
        (0.25, 21),
        (0.3, 17),
        (0.35, 14),
        (0.4, 13),
        (0.45, 11),
        (0.5, 10),
        (0.55, 9),
        (0.6, 8),
        (0.7, 6),
        (0.8, 5),
        (0.9, 4),
        (1.0, 3),
    ];
    for (a, d) in table {
        assert_eq!(critical_dimension(a, 200).unwrap().d_cri, Some(d), "alpha = {a}");
    }
}

#[test]
fn bell_diagonal_values() {
    let g = belldiag_gap_condition(&BellDiagParams::new(0.4, 0.3, 0.2, 0.1).unwrap());
    assert_abs_diff_eq!(g.lhs, 1.84643934467102, epsilon = 1e-12);
    assert_abs_diff_eq!(g.rhs, 1.69287868934203, epsilon = 1e-12);
    assert!(!g.holds);
    let e = elementwise_inequality(0.9).unwrap();
    assert_abs_diff_eq!(e.lhs, 0.13680278410054514, epsilon = 1e-14);
    assert_abs_diff_eq!(e.rhs, 0.21609640474436814, epsilon = 1e-14);
}

#[test]
fn alpha_v_values() {
    assert_abs_diff_eq!(transposed_noise_distance(&alpha_v(2).unwrap()).unwrap(), 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(transposed_noise_distance(&alpha_v(3).unwrap()).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
    let noisy = depolarize_register(&alpha_v(2).unwrap(), "A", 0.05).unwrap();
    let r = ibit_witness_bound(&noisy, &alpha_v_twisting(2).unwrap(), 1, 0.05).unwrap();
    assert_abs_diff_eq!(r.witness, 0.831339068503329, epsilon = 1e-12);
    assert!(r.pass);
}
