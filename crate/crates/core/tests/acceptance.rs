//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::path::Path;
use std::time::Instant;

use privrand::belldiag::{elementwise_inequality, random_search, SearchConfig};
use privrand::bounds::{
    alpha_iid_bound, ibit_witness_bound, ppt_repeater_bound, ppt_transposed_rate_bound, purity_form_bound,
    single_copy_distinguishability_check,
};
use privrand::clodcc::{apply, load_script, random_circuit, swap_input, untwist_and_measure, verify_unital};
use privrand::densop::{ops, trace_norm, Party, Register, SubsystemLayout};
use privrand::ensembles::{
    alpha_v, alpha_v_twisting, depolarize_register, max_entangled, private_state, private_to_independent, werner,
    TwistingSpec, WernerParams,
};
use privrand::entropic::{binary_entropy, localisable_randomness};
use privrand::random::{random_density, random_ppt, random_separable, random_unitary, rng_for};
use privrand::werner::{critical_dimension, werner_mi, werner_mi_gamma, werner_mi_spectral};
use privrand::Result;
use rand::Rng;

type Verdict = Result<(bool, String)>;

fn werner_limits() -> Verdict {
    let i = werner_mi(1000, 1.0)?;
    let g = werner_mi_gamma(1000, 1.0)?;
    Ok(((0.998..=1.0).contains(&i) && g <= 0.02, format!("I={i:.6} I_gamma={g:.6}")))
}

fn closed_form_vs_spectral() -> Verdict {
    let mut worst: f64 = 0.0;
    for d in 2..=8 {
        for k in 0..=20 {
            let a = k as f64 * 0.05;
            let (i, ig) = werner_mi_spectral(d, a)?;
            worst = worst.max((i - werner_mi(d, a)?).abs());
            worst = worst.max((ig - werner_mi_gamma(d, a)?).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |closed - spectral| = {worst:.3e}")))
}

fn critical_dimensions() -> Verdict {
    let c = critical_dimension(0.1, 200)?;
    let mut detail = format!("alpha=0.1: d_cri={:?} reported={:?}", c.d_cri, c.reported);
    if c.discrepancy() {
        detail.push_str(" DISCREPANCY margins:");
        for (d, m) in &c.margins {
            detail.push_str(&format!(" {d}:{m:.3e}"));
        }
    }
    let one = critical_dimension(1.0, 10)?;
    let m2 = one.margin_at(2).unwrap_or(f64::NAN);
    detail.push_str(&format!("; alpha=1: d_cri={:?}, margin at d=2 {m2:.2e}, equality at {:?}", one.d_cri, one.equality_at));
    let ok = c.d_cri.is_some() && one.d_cri == Some(3) && m2.abs() <= 1e-12 && one.equality_at.contains(&2);
    Ok((ok, detail))
}

fn alpha_v_transposed_norm() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut bounded = true;
    for d in 2..=8 {
        let a = alpha_v(d)?;
        let g = a.partial_transpose_default()?;
        let n = trace_norm(&(&g - &ops::maximally_mixed_matrix(a.dim())))?;
        bounded &= n <= 2.0 / d as f64;
        worst = worst.max((n - 1.0 / d as f64).abs());
    }
    Ok((bounded && worst <= 1e-9, format!("max |norm - 1/d| = {worst:.3e}")))
}

fn iid_thresholds() -> Verdict {
    let at32 = alpha_iid_bound(32);
    let below = (33..=128).all(|d| alpha_iid_bound(d) < 1.0);
    let mut worst: f64 = 0.0;
    for d in 3..=8 {
        let lr = localisable_randomness(&alpha_v(d)?, Party::A)?;
        worst = worst.max((lr.value.unwrap_or(f64::NAN) - 1.0).abs());
    }
    Ok((
        at32 == 1.0 && below && worst <= 1e-9,
        format!("bound(32)={at32:.12} below one on 33..128: {below}; max |R_A - 1| = {worst:.3e}"),
    ))
}

fn ibit_witness() -> Verdict {
    let a = alpha_v(2)?;
    let spec = alpha_v_twisting(2)?;
    let exact = untwist_and_measure(&a, &spec, 1)?;
    let noisy = depolarize_register(&a, "A", 0.05)?;
    let r = ibit_witness_bound(&noisy, &spec, 1, 0.05)?;
    let floor = 0.95 - binary_entropy(0.05)? - 1e-8;
    Ok((
        (exact.relative_entropy - 1.0).abs() <= 1e-10 && exact.relative_entropy >= 1.0 - 1e-8 && r.witness >= floor,
        format!(
            "exact={:.16} (|1 - exact| = {:.1e}) noisy={:.6} >= {:.6}",
            exact.relative_entropy,
            (1.0 - exact.relative_entropy).abs(),
            r.witness,
            floor
        ),
    ))
}

fn unitality() -> Verdict {
    let profiles = [(2, 2, 2), (2, 3, 2), (3, 2, 3), (2, 4, 2)];
    let mut worst: f64 = 0.0;
    for (i, (a, c, b)) in profiles.into_iter().enumerate() {
        let layout = SubsystemLayout::new(vec![
            Register::new("A", a, Party::A),
            Register::new("C", c, Party::C),
            Register::new("B", b, Party::B),
        ])?;
        let mut rng = rng_for(7, i as u64);
        for _ in 0..100 {
            worst = worst.max(verify_unital(&random_circuit(&layout, 15, &mut rng))?.deviation);
        }
    }
    Ok((worst <= 1e-10, format!("4 profiles x 100 circuits, max deviation {worst:.3e}")))
}

fn entanglement_swapping() -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/swap");
    let input = swap_input();
    let corrected = load_script(&dir.join("swap.prr"), input.layout())?;
    let ab = apply(&corrected, &input)?.state.marginal(&["A", "B"])?;
    let target = max_entangled(2)?.relabel(ab.layout().clone())?;
    let f = ab.fidelity(&target)?;
    let mut bare = corrected.clone();
    bare.steps.pop();
    let raw = apply(&bare, &input)?.state.marginal(&["A", "B"])?;
    let dev = ops::deviation_from_maximally_mixed(raw.matrix());
    Ok((f >= 1.0 - 1e-10 && dev <= 1e-10, format!("fidelity={f:.12} uncorrected deviation={dev:.3e}")))
}

fn private_to_independent_check() -> Verdict {
    let mut rng = rng_for(11, 0);
    let shield = SubsystemLayout::new(vec![Register::new("A'", 2, Party::A), Register::new("B'", 2, Party::B)])?;
    let mut worst: f64 = 0.0;
    for d in [2, 3, 4, 6] {
        for _ in 0..20 {
            let us = (0..d).map(|_| random_unitary(4, &mut rng)).collect();
            let spec = TwistingSpec::new(d, us, shield.clone())?;
            let sigma = random_density(shield.clone(), &mut rng);
            let gamma = private_state(&spec, &sigma)?;
            let idit = private_to_independent(&spec, &sigma, Party::A)?;
            worst = worst.max(idit.in_private_order()?.matrix().max_abs_diff(gamma.matrix()));
        }
    }
    Ok((worst <= 1e-12, format!("d in {{2,3,4,6}} x 20 twistings, max entry difference {worst:.3e}")))
}

fn single_copy_distinguishability() -> Verdict {
    let mut rng = rng_for(13, 0);
    let mut slack = f64::INFINITY;
    for _ in 0..50 {
        let alpha: f64 = rng.random_range(0.0..=1.0);
        let rho = werner(WernerParams::new(2, alpha)?);
        let c = random_circuit(rho.layout(), 10, &mut rng);
        let r = single_copy_distinguishability_check(&rho, &c, &["A", "B"])?;
        slack = slack.min(r.rhs + 1e-8 - r.lhs);
    }
    Ok((slack >= 0.0, format!("50 pairs, min slack {slack:.3e}")))
}

fn bell_diagonal() -> Verdict {
    let report = random_search(&SearchConfig::new(500_000, 42, true)?);
    let mut bad = 0usize;
    let n = 10_000;
    for k in 0..=n {
        let x = k as f64 / n as f64;
        if (1.0 / 3.0..=0.5).contains(&x) {
            continue;
        }
        if !elementwise_inequality(x)?.converse_holds {
            bad += 1;
        }
    }
    Ok((
        report.violations.is_empty() && bad == 0,
        format!(
            "{} samples, {} gaps (closest margin {:.6}); element-wise failures outside [1/3,1/2]: {bad}",
            report.evaluated,
            report.violations.len(),
            report.max_margin
        ),
    ))
}

fn bound_forms_agree() -> Verdict {
    let mut rng = rng_for(17, 0);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let (rho, tilde) = if i % 2 == 0 {
            let l = SubsystemLayout::bipartite(2, 2);
            (random_ppt(&l, &mut rng), random_ppt(&l, &mut rng))
        } else {
            (
                random_separable(&SubsystemLayout::bipartite(2, 3), 3, &mut rng),
                random_separable(&SubsystemLayout::bipartite(3, 2), 3, &mut rng),
            )
        };
        let a = ppt_repeater_bound(&rho, &tilde)?.value;
        let b = purity_form_bound(&rho, &tilde)?.value;
        let c = ppt_transposed_rate_bound(&rho, &tilde)?.value;
        worst = worst.max((a - b).abs()).max((a - c).abs());
    }
    Ok((worst <= 1e-10, format!("200 PPT pairs, max spread {worst:.3e}")))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("werner large-d limits", werner_limits),
        ("werner closed form vs eigendecomposition", closed_form_vs_spectral),
        ("werner critical dimension", critical_dimensions),
        ("alphaV transposed distance to noise", alpha_v_transposed_norm),
        ("alphaV i.i.d. bound thresholds", iid_thresholds),
        ("ibit untwist-and-measure witness", ibit_witness),
        ("protocol unitality", unitality),
        ("entanglement swapping", entanglement_swapping),
        ("private state as local independent state", private_to_independent_check),
        ("single-copy distinguishability", single_copy_distinguishability),
        ("bell-diagonal gap search", bell_diagonal),
        ("PPT bound forms agree", bound_forms_agree),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let ms = start.elapsed().as_millis();
        println!("{} {:>2} {name}: {detail} [{ms} ms]", if pass { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
