//! Property checks grouped by module, run by `prr verify`.

use serde::Serialize;

use crate::belldiag::{belldiag_gap_condition, belldiag_gap_margin_matrix, elementwise_scan, random_search, sample_params, SearchConfig};
use crate::bounds::{
    alpha_iid_bound, gap_condition, ideal_ibit_distance, iid_limitation_check, ibit_witness_bound, mi_form_bound,
    ppt_repeater_bound, ppt_transposed_rate_bound, purity_form_bound, repeater_input,
    single_copy_distinguishability_check,
};
use crate::clodcc::{
    apply, apply_with, entanglement_swap, random_circuit, verify_unital, PartyMap, ProtocolCircuit,
};
use crate::densop::{ops, trace_norm, ComplexMatrix, DensityOperator, Party, Register, SubsystemLayout};
use crate::ensembles::{
    alpha_v, alpha_v_twisting, bell_diagonal, bell_diagonal_gamma, depolarize_register, local_idit,
    private_state, private_to_independent, werner, TwistingSpec, WernerParams,
};
use crate::entropic::{
    localisable_randomness, marginal_entropy_matrix, mutual_information, relative_entropy_matrix,
    von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::random::{random_density, random_ppt, random_pure_vector, random_separable, random_unitary, rng_for, SeededRng};
use crate::werner::{critical_dimension, werner_mi, werner_mi_gamma, werner_mi_spectral};

pub const SUITES: [&str; 7] = ["densop", "ensembles", "entropic", "clodcc", "bounds", "werner", "belldiag"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{} {}::{} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.detail
        )
    }
}

struct Runner {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Runner {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            checks: Vec::new(),
        }
    }

    /// `f` returns the worst observed value and whether it is acceptable.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

fn worst(pass: bool, label: &str, v: f64) -> (bool, String) {
    (pass, format!("{label}={v:.3e}"))
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<Check>> {
    match name {
        "densop" => Ok(densop_suite(seed)),
        "ensembles" => Ok(ensembles_suite(seed)),
        "entropic" => Ok(entropic_suite(seed)),
        "clodcc" => Ok(clodcc_suite(seed)),
        "bounds" => Ok(bounds_suite(seed)),
        "werner" => Ok(werner_suite()),
        "belldiag" => Ok(belldiag_suite(seed)),
        "all" => Ok(SUITES.iter().flat_map(|s| run_suite(s, seed).expect("known suite")).collect()),
        other => Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
    }
}

fn two_by_three() -> SubsystemLayout {
    SubsystemLayout::bipartite(2, 3)
}

fn abc(da: usize, dc: usize, db: usize) -> SubsystemLayout {
    SubsystemLayout::new(vec![
        Register::new("A", da, Party::A),
        Register::new("C", dc, Party::C),
        Register::new("B", db, Party::B),
    ])
    .expect("distinct labels")
}

fn densop_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("densop");
    let mut rng = rng_for(seed, 1);
    let states: Vec<DensityOperator> = (0..30).map(|_| random_density(abc(2, 3, 2), &mut rng)).collect();
    r.check("random states are valid", || {
        let mut w: f64 = 0.0;
        for s in &states {
            let v = s.validate()?;
            w = w.max(v.hermiticity_deviation).max((v.trace - 1.0).abs()).max(-v.min_eigenvalue);
        }
        Ok(worst(w <= 1e-9, "max violation", w))
    });
    r.check("partial trace of a product recovers the factor", || {
        let mut w: f64 = 0.0;
        for s in states.iter().take(10) {
            let a = s.marginal(&["A"])?;
            let rest = s.marginal(&["C", "B"])?;
            let back = a.tensor(&rest)?.partial_trace(&["C", "B"])?;
            w = w.max(back.matrix().max_abs_diff(a.matrix()));
        }
        Ok(worst(w <= 1e-12, "max deviation", w))
    });
    r.check("partial transpose is an involution", || {
        let mut w: f64 = 0.0;
        for s in &states {
            let once = ops::partial_transpose(s.matrix(), s.layout(), &["B"])?;
            let twice = ops::partial_transpose(&once, s.layout(), &["B"])?;
            w = w.max(twice.max_abs_diff(s.matrix()));
        }
        Ok(worst(w == 0.0, "max deviation", w))
    });
    r.check("eigendecomposition reconstructs the matrix", || {
        let mut w: f64 = 0.0;
        for s in &states {
            let e = s.eigen()?;
            w = w.max(e.reconstruct().max_abs_diff(s.matrix()));
        }
        Ok(worst(w <= 1e-10, "max residual", w))
    });
    r.check("register permutation round trip", || {
        let mut w: f64 = 0.0;
        for s in &states {
            let p = s.permute_registers(&["B", "A", "C"])?;
            let back = p.permute_registers(&["A", "C", "B"])?;
            w = w.max(back.matrix().max_abs_diff(s.matrix()));
        }
        Ok(worst(w == 0.0, "max deviation", w))
    });
    r.check("trace distance is a metric on samples", || {
        let mut ok = true;
        for t in states.windows(3) {
            let ab = t[0].trace_distance(&t[1])?;
            let bc = t[1].trace_distance(&t[2])?;
            let ac = t[0].trace_distance(&t[2])?;
            ok &= (ab - t[1].trace_distance(&t[0])?).abs() < 1e-12 && ac <= ab + bc + 1e-12 && ab <= 2.0 + 1e-12;
        }
        Ok((ok, String::new()))
    });
    r.check("pure state fidelity is the overlap", || {
        let mut w: f64 = 0.0;
        for _ in 0..10 {
            let l = two_by_three();
            let a = DensityOperator::pure(&random_pure_vector(6, &mut rng), l.clone())?;
            let b = DensityOperator::pure(&random_pure_vector(6, &mut rng), l)?;
            let overlap = (a.matrix() * b.matrix()).trace().re;
            w = w.max((a.fidelity(&b)? - overlap).abs());
        }
        Ok(worst(w <= 1e-8, "max deviation", w))
    });
    r.checks
}

fn ensembles_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("ensembles");
    r.check("werner at alpha = 1/d is maximally mixed", || {
        let mut w: f64 = 0.0;
        for d in 2..=10 {
            let s = werner(WernerParams::new(d, 1.0 / d as f64)?);
            w = w.max(ops::deviation_from_maximally_mixed(s.matrix()));
        }
        Ok(worst(w <= 1e-12, "max deviation", w))
    });
    r.check("werner is PPT exactly when alpha >= 0", || {
        let mut ok = true;
        for d in 2..=4 {
            for k in -10..=10 {
                let a = k as f64 / 10.0;
                let s = werner(WernerParams::new(d, a)?);
                ok &= s.is_ppt(&["B"])?.ppt == (a >= 0.0);
            }
        }
        Ok((ok, String::new()))
    });
    r.check("bell-diagonal transpose closed form", || {
        let cfg = SearchConfig::new(50, seed, false)?;
        let mut w: f64 = 0.0;
        for i in 0..cfg.samples {
            let p = sample_params(&cfg, i);
            let s = bell_diagonal(p);
            let g = s.partial_transpose(&["B"])?;
            w = w.max(g.max_abs_diff(&bell_diagonal_gamma(p)));
        }
        Ok(worst(w <= 1e-15, "max deviation", w))
    });
    r.check("alphaV transposed distance to noise is 1/d", || {
        let mut w: f64 = 0.0;
        for d in 2..=8 {
            let a = alpha_v(d)?;
            let g = a.partial_transpose_default()?;
            let n = trace_norm(&(&g - &ops::maximally_mixed_matrix(a.dim())))?;
            w = w.max((n - 1.0 / d as f64).abs());
        }
        Ok(worst(w <= 1e-9, "max deviation", w))
    });
    r.check("alphaV is an untwisted plus state under its twisting", || {
        let mut w: f64 = 0.0;
        for d in 2..=5 {
            let spec = alpha_v_twisting(d)?;
            let sigma = DensityOperator::maximally_mixed(spec.target_layout.clone());
            w = w.max(local_idit(&spec, &sigma)?.matrix().max_abs_diff(alpha_v(d)?.matrix()));
        }
        Ok(worst(w <= 1e-14, "max deviation", w))
    });
    r.check("private states are local idits at either party", || {
        let mut rng = rng_for(seed, 2);
        let mut w: f64 = 0.0;
        for d in [2, 3, 4, 6] {
            for _ in 0..20 {
                let (spec, sigma) = random_twisting(d, &mut rng)?;
                let gamma = private_state(&spec, &sigma)?;
                for party in [Party::A, Party::B] {
                    let idit = private_to_independent(&spec, &sigma, party)?;
                    w = w.max(idit.in_private_order()?.matrix().max_abs_diff(gamma.matrix()));
                }
            }
        }
        Ok(worst(w <= 1e-12, "max deviation", w))
    });
    r.checks
}

/// Random unitaries on a qubit-qubit shield with a random shield state.
pub fn random_twisting(d: usize, rng: &mut SeededRng) -> Result<(TwistingSpec, DensityOperator)> {
    let shield = SubsystemLayout::new(vec![
        Register::new("A'", 2, Party::A),
        Register::new("B'", 2, Party::B),
    ])?;
    let us = (0..d).map(|_| random_unitary(4, rng)).collect();
    let spec = TwistingSpec::new(d, us, shield.clone())?;
    let sigma = random_density(shield, rng);
    Ok((spec, sigma))
}

fn entropic_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("entropic");
    let mut rng = rng_for(seed, 3);
    let states: Vec<DensityOperator> = (0..40).map(|_| random_density(abc(2, 2, 3), &mut rng)).collect();
    r.check("mutual information is non-negative", || {
        let mut w = f64::INFINITY;
        for s in &states {
            w = w.min(mutual_information(s, &["B"])?);
        }
        Ok(worst(w >= -1e-10, "min I", w))
    });
    r.check("Araki-Lieb and subadditivity", || {
        let mut ok = true;
        for s in &states {
            let ab = von_neumann_entropy(s)?;
            let a = marginal_entropy_matrix(s.matrix(), s.layout(), &["A"])?;
            let b = marginal_entropy_matrix(s.matrix(), s.layout(), &["C", "B"])?;
            ok &= (a - b).abs() <= ab + 1e-10 && ab <= a + b + 1e-10;
        }
        Ok((ok, String::new()))
    });
    r.check("pure states have zero entropy", || {
        let mut w: f64 = 0.0;
        for _ in 0..10 {
            let p = DensityOperator::pure(&random_pure_vector(12, &mut rng), abc(2, 2, 3))?;
            w = w.max(von_neumann_entropy(&p)?.abs());
        }
        Ok(worst(w <= 1e-10, "max S", w))
    });
    r.check("relative entropy to noise is log D - S", || {
        let mut w: f64 = 0.0;
        for s in &states {
            let d = relative_entropy_matrix(s.matrix(), &ops::maximally_mixed_matrix(s.dim()))?;
            w = w.max((d - ((s.dim() as f64).log2() - von_neumann_entropy(s)?)).abs());
        }
        Ok(worst(w <= 1e-10, "max deviation", w))
    });
    r.check("relative entropy is non-negative", || {
        let mut w = f64::INFINITY;
        for pair in states.windows(2) {
            w = w.min(relative_entropy_matrix(pair[0].matrix(), pair[1].matrix())?);
        }
        Ok(worst(w >= -1e-10, "min D", w))
    });
    r.check("alphaV localisable randomness is one bit", || {
        let mut w: f64 = 0.0;
        for d in 3..=8 {
            let lr = localisable_randomness(&alpha_v(d)?, Party::A)?;
            let v = lr.value.ok_or_else(|| Error::Hypothesis("not applicable".into()))?;
            w = w.max((v - 1.0).abs());
        }
        Ok(worst(w <= 1e-9, "max deviation", w))
    });
    r.checks
}

fn clodcc_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("clodcc");
    for (i, dims) in [(2, 2, 2), (2, 3, 2), (3, 2, 3)].into_iter().enumerate() {
        let layout = abc(dims.0, dims.1, dims.2);
        r.check(&format!("unitality {}x{}x{} (100 circuits)", dims.0, dims.1, dims.2), || {
            let mut rng = rng_for(seed, 10 + i as u64);
            let mut w: f64 = 0.0;
            for _ in 0..100 {
                let c = random_circuit(&layout, 12, &mut rng);
                w = w.max(verify_unital(&c)?.deviation);
            }
            Ok(worst(w <= 1e-10, "max deviation", w))
        });
    }
    r.check("merged A/B replay matches", || {
        let mut rng = rng_for(seed, 20);
        let layout = abc(2, 2, 2);
        let mut w: f64 = 0.0;
        for _ in 0..20 {
            let c = random_circuit(&layout, 12, &mut rng);
            let rho = random_density(layout.clone(), &mut rng);
            let fine = apply(&c, &rho)?;
            let merged = apply_with(&c, &rho, PartyMap::MergeAB)?;
            w = w.max(fine.state.matrix().max_abs_diff(merged.state.matrix()));
        }
        Ok(worst(w <= 1e-12, "max deviation", w))
    });
    r.check("entanglement swapping", || {
        let ok = entanglement_swap(true)?;
        let raw = entanglement_swap(false)?;
        let dev = ops::deviation_from_maximally_mixed(raw.ab.matrix());
        Ok((
            ok.fidelity >= 1.0 - 1e-10 && dev <= 1e-10 && (ok.eve.entropy() - 2.0).abs() < 1e-12,
            format!("fidelity={:.12} uncorrected_dev={dev:.3e} eve={:.6}", ok.fidelity, ok.eve.entropy()),
        ))
    });
    r.check("illegal steps are rejected", || {
        let layout = abc(2, 2, 2);
        let rho = DensityOperator::maximally_mixed(layout.clone());
        let cross = ProtocolCircuit::new(layout.clone()).unitary(Party::A, &["A", "B"], ComplexMatrix::identity(4));
        let wrong_owner = ProtocolCircuit::new(layout.clone()).send("A", Party::B, Party::C);
        let self_send = ProtocolCircuit::new(layout).send("A", Party::A, Party::A);
        let ok = apply(&cross, &rho).is_err() && apply(&wrong_owner, &rho).is_err() && apply(&self_send, &rho).is_err();
        Ok((ok, String::new()))
    });
    r.checks
}

fn bounds_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("bounds");
    r.check("three PPT bound forms agree (200 states)", || {
        let mut rng = rng_for(seed, 30);
        let mut w: f64 = 0.0;
        for i in 0..200 {
            let (a, b) = if i % 2 == 0 {
                (random_ppt(&SubsystemLayout::bipartite(2, 2), &mut rng), random_ppt(&SubsystemLayout::bipartite(2, 2), &mut rng))
            } else {
                (random_separable(&two_by_three(), 3, &mut rng), random_separable(&SubsystemLayout::bipartite(3, 2), 3, &mut rng))
            };
            let e19 = ppt_repeater_bound(&a, &b)?.value;
            let e5 = purity_form_bound(&a, &b)?.value;
            let c9 = ppt_transposed_rate_bound(&a, &b)?.value;
            w = w.max((e19 - e5).abs()).max((e19 - c9).abs());
        }
        Ok(worst(w <= 1e-10, "max spread", w))
    });
    r.check("mutual-information form matches for werner pairs", || {
        let mut w: f64 = 0.0;
        for d in 2..=4 {
            for k in 0..=10 {
                let s = werner(WernerParams::new(d, k as f64 / 10.0)?);
                w = w.max((mi_form_bound(&s)?.value - ppt_repeater_bound(&s, &s)?.value).abs());
            }
        }
        Ok(worst(w <= 1e-9, "max deviation", w))
    });
    r.check("single-copy distinguishability (50 circuits)", || {
        let mut rng = rng_for(seed, 31);
        let mut slack = f64::INFINITY;
        for _ in 0..50 {
            let a: f64 = rand::Rng::random_range(&mut rng, 0.0..=1.0);
            let s = werner(WernerParams::new(2, a)?);
            let c = random_circuit(s.layout(), 8, &mut rng);
            let res = single_copy_distinguishability_check(&s, &c, &["A", "B"])?;
            slack = slack.min(res.rhs + 1e-8 - res.lhs);
        }
        Ok(worst(slack >= 0.0, "min slack", slack))
    });
    r.check("ibit witness bound (depolarized and random ibits)", || {
        let mut rng = rng_for(seed, 32);
        let mut slack = f64::INFINITY;
        for d in [2, 3] {
            let a = alpha_v(d)?;
            let spec = alpha_v_twisting(d)?;
            for eps in [0.0, 0.01, 0.05, 0.1, 0.2] {
                let noisy = depolarize_register(&a, "A", eps)?;
                let res = ibit_witness_bound(&noisy, &spec, 1, eps)?;
                slack = slack.min(res.witness - res.bound + 1e-8);
            }
        }
        for m in [1u32, 2] {
            for _ in 0..5 {
                let (spec, sigma) = random_twisting(1 << m, &mut rng)?;
                let ibit = local_idit(&spec, &sigma)?;
                let p: f64 = rand::Rng::random_range(&mut rng, 0.0..0.2);
                let noisy = depolarize_register(&ibit, "A", p)?;
                let eps = ideal_ibit_distance(&noisy, &spec)?;
                let res = ibit_witness_bound(&noisy, &spec, m, eps)?;
                slack = slack.min(res.witness - res.bound + 1e-8);
            }
        }
        Ok(worst(slack >= 0.0, "min slack", slack))
    });
    r.check("alpha-iid bound decreasing with threshold 32", || {
        let mut ok = alpha_iid_bound(32) == 1.0;
        for d in 12..=256 {
            ok &= alpha_iid_bound(d + 1) < alpha_iid_bound(d);
            ok &= (alpha_iid_bound(d) < 1.0) == (d > 32);
        }
        Ok((ok, format!("bound(32)={}", alpha_iid_bound(32))))
    });
    r.check("i.i.d. purity limitation (20 circuits x 5 states)", || {
        let mut rng = rng_for(seed, 33);
        let mut slack = f64::INFINITY;
        for a in [0.35, 0.45, 0.5, 0.6, 0.65] {
            let s = werner(WernerParams::new(2, a)?);
            let layout = repeater_input(&s, &s)?.layout().clone();
            for _ in 0..20 {
                let c = random_circuit(&layout, 10, &mut rng);
                let res = iid_limitation_check(&s, &c)?;
                slack = slack.min(res.bound + 1e-8 - res.purity);
            }
        }
        Ok(worst(slack >= 0.0, "min slack", slack))
    });
    r.check("gap condition on symmetric werner", || {
        let g2 = gap_condition(&werner(WernerParams::new(2, 1.0)?))?;
        let g3 = gap_condition(&werner(WernerParams::new(3, 1.0)?))?;
        Ok((!g2.holds && g3.holds, format!("margin(2)={:.3e} margin(3)={:.6}", g2.margin, g3.margin)))
    });
    r.checks
}

fn werner_suite() -> Vec<Check> {
    let mut r = Runner::new("werner");
    r.check("closed form matches eigendecomposition (d 2..8)", || {
        let mut w: f64 = 0.0;
        for d in 2..=8 {
            for k in 0..=20 {
                let a = k as f64 * 0.05;
                let (i, ig) = werner_mi_spectral(d, a)?;
                w = w.max((i - werner_mi(d, a)?).abs()).max((ig - werner_mi_gamma(d, a)?).abs());
            }
        }
        Ok(worst(w <= 1e-9, "max deviation", w))
    });
    r.check("exact equality at d=2, alpha=1", || {
        let m = werner_mi(2, 1.0)? - 2.0 * werner_mi_gamma(2, 1.0)?;
        Ok(worst(m.abs() <= 1e-12, "margin", m))
    });
    r.check("large-d limits", || {
        let i = werner_mi(1000, 1.0)?;
        let g = werner_mi_gamma(1000, 1.0)?;
        Ok(((0.998..=1.0).contains(&i) && g <= 0.02, format!("I={i:.6} I_gamma={g:.6}")))
    });
    r.check("asymptotic envelope 2/d for d >= 50", || {
        let mut w = f64::NEG_INFINITY;
        for k in 0..=20 {
            let a = k as f64 * 0.05;
            let lim = 1.0 - crate::entropic::binary_entropy((1.0 - a) / 2.0)?;
            for d in 50..=200 {
                w = w.max((werner_mi(d, a)? - lim).abs() - 2.0 / d as f64);
            }
        }
        Ok(worst(w <= 0.0, "max excess", w))
    });
    r.check("critical dimensions", || {
        let mut parts = Vec::new();
        let mut ok = critical_dimension(1.0, 10)?.d_cri == Some(3);
        for a in [0.1, 0.2, 0.5] {
            let c = critical_dimension(a, 200)?;
            ok &= c.d_cri.is_some();
            parts.push(format!(
                "{a}:{}(reported {})",
                c.d_cri.map_or("none".into(), |d| d.to_string()),
                c.reported.map_or("-".into(), |d| d.to_string())
            ));
        }
        Ok((ok, parts.join(" ")))
    });
    r.checks
}

fn belldiag_suite(seed: u64) -> Vec<Check> {
    let mut r = Runner::new("belldiag");
    r.check("entropy form matches matrices (1000 samples)", || {
        let cfg = SearchConfig::new(1000, seed, true)?;
        let mut w: f64 = 0.0;
        for i in 0..cfg.samples {
            let p = sample_params(&cfg, i);
            w = w.max((belldiag_gap_margin_matrix(&p)? - belldiag_gap_condition(&p).margin()).abs());
        }
        Ok(worst(w <= 1e-9, "max deviation", w))
    });
    r.check("element-wise converse outside [1/3, 1/2]", || {
        let s = elementwise_scan(1e-4)?;
        let out = s.failures_outside(1.0 / 3.0, 0.5);
        let hull = s.failure_hull.map_or("none".into(), |(a, b)| format!("[{a:.4}, {b:.4}]"));
        Ok((out == 0, format!("failures outside={out} failure hull={hull}")))
    });
    r.check("separable search finds no gap (1e5 samples)", || {
        let rep = random_search(&SearchConfig::new(100_000, seed, true)?);
        Ok((
            rep.violations.is_empty(),
            format!("violations={} max_margin={:.6}", rep.violations.len(), rep.max_margin),
        ))
    });
    r.checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0).is_err());
    }

    #[test]
    fn werner_suite_passes() {
        let checks = run_suite("werner", 0).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{:?}", checks);
    }
}
