//! Gap condition for partially transposed Bell-diagonal two-qubit states,
//! the element-wise converse inequality and a seeded random search.
//!
//! For weights `p = (a₊, a₋, b₊, b₋)` the state `ρ_Bell^Γ` has a gap iff
//! `H(half-sums) < 2H(p) − 2`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ensembles::{bell_diagonal, bell_diagonal_gamma, BellDiagParams};
use crate::entropic::{eta_raw, mutual_information_matrix, shannon_entropy};
use crate::error::{Error, Result};
use crate::format::json_f64;
use crate::random::{flat_dirichlet, rng_for};
use crate::tolerance;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BellGap {
    pub holds: bool,
    /// `S(AB)` of the transposed state: Shannon entropy of the half-sums.
    pub lhs: f64,
    /// `2 S(AB)_{Bell} − 2`.
    pub rhs: f64,
}

impl BellGap {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Eigenvalues of `ρ_Bell^Γ`.
pub fn half_sums(p: &BellDiagParams) -> [f64; 4] {
    let (ap, am, bp, bm) = (p.a_plus, p.a_minus, p.b_plus, p.b_minus);
    [
        0.5 * (ap + am + bp - bm),
        0.5 * (ap + am - bp + bm),
        0.5 * (ap - am + bp + bm),
        0.5 * (-ap + am + bp + bm),
    ]
}

pub fn belldiag_gap_condition(p: &BellDiagParams) -> BellGap {
    let lhs = shannon_entropy(&half_sums(p));
    let rhs = 2.0 * shannon_entropy(&p.weights()) - 2.0;
    BellGap {
        holds: rhs - lhs > tolerance::STRICT_MARGIN,
        lhs,
        rhs,
    }
}

/// `I(A:B)_{ρ^Γ} − 2 I(A:B)_ρ` from the explicit matrices; equals
/// [`BellGap::margin`]. Meaningful for separable weights only.
pub fn belldiag_gap_margin_matrix(p: &BellDiagParams) -> Result<f64> {
    let bell = bell_diagonal(*p);
    let cut = ["B"];
    let g = bell_diagonal_gamma(*p);
    let i_g = mutual_information_matrix(&g, bell.layout(), &cut)?;
    let i = mutual_information_matrix(bell.matrix(), bell.layout(), &cut)?;
    Ok(i_g - 2.0 * i)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Elementwise {
    pub x: f64,
    /// `2η(x/2) − x`
    pub lhs: f64,
    /// `η((1−x)/2)`
    pub rhs: f64,
    pub converse_holds: bool,
}

pub fn elementwise_inequality(x: f64) -> Result<Elementwise> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x must lie in [0, 1], got {x}")));
    }
    let lhs = 2.0 * eta_raw(x / 2.0) - x;
    let rhs = eta_raw((1.0 - x) / 2.0);
    Ok(Elementwise {
        x,
        lhs,
        rhs,
        converse_holds: lhs <= rhs + 1e-12,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementwiseScan {
    pub step: f64,
    pub points: usize,
    /// Grid points where the converse inequality fails.
    pub failures: Vec<f64>,
    /// Smallest interval containing every failure.
    pub failure_hull: Option<(f64, f64)>,
}

impl ElementwiseScan {
    pub fn failures_outside(&self, lo: f64, hi: f64) -> usize {
        self.failures.iter().filter(|&&x| x < lo || x > hi).count()
    }
}

/// Evaluates the inequality at `k·step` for every `k` up to `1/step`.
pub fn elementwise_scan(step: f64) -> Result<ElementwiseScan> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter(format!("step must lie in (0, 1], got {step}")));
    }
    let n = (1.0 / step).round() as usize;
    let mut failures = Vec::new();
    for k in 0..=n {
        let x = (k as f64 * step).min(1.0);
        if !elementwise_inequality(x)?.converse_holds {
            failures.push(x);
        }
    }
    let failure_hull = match (failures.first(), failures.last()) {
        (Some(&a), Some(&b)) => Some((a, b)),
        _ => None,
    };
    Ok(ElementwiseScan {
        step,
        points: n + 1,
        failures,
        failure_hull,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchConfig {
    pub samples: u64,
    pub seed: u64,
    pub separable_only: bool,
}

impl SearchConfig {
    pub fn new(samples: u64, seed: u64, separable_only: bool) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        Ok(Self {
            samples,
            seed,
            separable_only,
        })
    }
}

/// Sample `index` of the search: flat Dirichlet weights, redrawn from the
/// same stream until all are at most 1/2 when `separable_only` is set.
pub fn sample_params(cfg: &SearchConfig, index: u64) -> BellDiagParams {
    let mut rng = rng_for(cfg.seed, index);
    loop {
        let w = flat_dirichlet(4, &mut rng);
        if cfg.separable_only && w.iter().any(|&x| x > 0.5) {
            continue;
        }
        return BellDiagParams::from_slice(&w).expect("dirichlet draw lies on the simplex");
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub index: u64,
    pub params: [f64; 4],
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub evaluated: u64,
    pub violations: Vec<Violation>,
    /// Largest `rhs − lhs` seen; negative when no sample came close.
    pub max_margin: f64,
    pub runtime_ms: Option<u128>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "index": v.index,
                    "params": v.params.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
                    "lhs": json_f64(v.lhs),
                    "rhs": json_f64(v.rhs),
                })
            })
            .collect();
        let mut out = json!({
            "samples": self.config.samples,
            "seed": self.config.seed,
            "separable_only": self.config.separable_only,
            "evaluated": self.evaluated,
            "violation_count": self.violations.len(),
            "violations": violations,
            "max_margin": json_f64(self.max_margin),
        });
        if let Some(ms) = self.runtime_ms {
            out["runtime_ms"] = json!(ms);
        }
        out
    }
}

/// Independent of thread count: each sample owns its random stream.
pub fn random_search(cfg: &SearchConfig) -> SearchReport {
    let evaluated: Vec<(u64, BellDiagParams, BellGap)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let p = sample_params(cfg, i);
            (i, p, belldiag_gap_condition(&p))
        })
        .collect();
    let max_margin = evaluated
        .iter()
        .map(|(_, _, g)| g.margin())
        .fold(f64::NEG_INFINITY, f64::max);
    let violations = evaluated
        .iter()
        .filter(|(_, _, g)| g.holds)
        .map(|(i, p, g)| Violation {
            index: *i,
            params: p.weights(),
            lhs: g.lhs,
            rhs: g.rhs,
        })
        .collect();
    SearchReport {
        config: *cfg,
        evaluated: evaluated.len() as u64,
        violations,
        max_margin,
        runtime_ms: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(w: [f64; 4]) -> BellDiagParams {
        BellDiagParams::from_slice(&w).unwrap()
    }

    #[test]
    fn gap_examples() {
        let g = belldiag_gap_condition(&p([0.25; 4]));
        assert!(!g.holds);
        assert!((g.lhs - 2.0).abs() < 1e-12 && (g.rhs - 2.0).abs() < 1e-12);
        let g = belldiag_gap_condition(&p([0.5, 0.5, 0.0, 0.0]));
        assert!(!g.holds);
        assert!((g.lhs - 1.0).abs() < 1e-12 && g.rhs.abs() < 1e-12);
    }

    #[test]
    fn entropy_form_matches_matrices() {
        let cfg = SearchConfig::new(200, 3, true).unwrap();
        for i in 0..cfg.samples {
            let q = sample_params(&cfg, i);
            let m = belldiag_gap_margin_matrix(&q).unwrap();
            assert!((m - belldiag_gap_condition(&q).margin()).abs() < 1e-9);
        }
    }

    #[test]
    fn elementwise_examples() {
        let e = elementwise_inequality(0.0).unwrap();
        assert!(e.converse_holds && e.lhs == 0.0 && (e.rhs - 0.5).abs() < 1e-15);
        let e = elementwise_inequality(0.2).unwrap();
        assert!(e.converse_holds);
        assert!((e.lhs - 0.464385618977).abs() < 1e-11);
        assert!((e.rhs - 0.528771237955).abs() < 1e-11);
        assert!(!elementwise_inequality(0.4).unwrap().converse_holds);
        assert!(elementwise_inequality(1.5).is_err());
    }

    #[test]
    fn elementwise_failures_sit_inside_third_half() {
        let s = elementwise_scan(1e-3).unwrap();
        assert_eq!(s.points, 1001);
        assert_eq!(s.failures_outside(1.0 / 3.0, 0.5), 0);
        let (lo, hi) = s.failure_hull.unwrap();
        assert!((lo - 0.334).abs() < 1e-9 && (hi - 0.499).abs() < 1e-9);
    }

    #[test]
    fn search_shape_and_determinism() {
        let cfg = SearchConfig::new(10, 1, false).unwrap();
        let r = random_search(&cfg);
        assert_eq!(r.evaluated, 10);
        let a = serde_json::to_string(&random_search(&cfg).to_json()).unwrap();
        let b = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(SearchConfig::new(0, 1, false).is_err());
    }

    #[test]
    fn separable_search_finds_nothing() {
        let cfg = SearchConfig::new(20_000, 42, true).unwrap();
        let r = random_search(&cfg);
        assert!(r.violations.is_empty());
        assert!(r.max_margin < 0.0);
    }

    #[test]
    fn sampler_is_centred() {
        let cfg = SearchConfig::new(20_000, 5, false).unwrap();
        let mut mean = [0.0; 4];
        for i in 0..cfg.samples {
            for (m, w) in mean.iter_mut().zip(sample_params(&cfg, i).weights()) {
                *m += w / cfg.samples as f64;
            }
        }
        assert!(mean.iter().all(|m| (m - 0.25).abs() < 0.01));
    }
}
