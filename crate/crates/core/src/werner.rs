//! Closed-form Werner analysis: spectra, mutual informations, the gap
//! condition and the critical dimension.
//!
//! `α` is the weight difference between the symmetric and antisymmetric
//! projectors, `α = 1 − 2θ`. At `α = 1/d` the state is maximally mixed and
//! both sides of the gap condition vanish.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::densop::Spectrum;
use crate::ensembles::{werner, WernerParams};
use crate::entropic::{binary_entropy, matrix_entropy, mutual_information};
use crate::error::{Error, Result};
use crate::format::g12;
use crate::tolerance;

pub const DEFAULT_D_MAX: usize = 200;

fn check(d: usize, alpha: f64) -> Result<()> {
    WernerParams::new(d, alpha).map(|_| ())
}

/// Eigenvalues of the partial transpose: `α/d` once and
/// `(d−α)/(d(d²−1))` with multiplicity `d²−1`.
pub fn werner_gamma_spectrum(d: usize, alpha: f64) -> Result<Spectrum> {
    check(d, alpha)?;
    let df = d as f64;
    let rest = (df - alpha) / (df * (df * df - 1.0));
    let mut ev = vec![rest; d * d];
    ev[0] = alpha / df;
    Ok(Spectrum::exact(ev))
}

/// `I(A:B)` of the Werner state in bits.
pub fn werner_mi(d: usize, alpha: f64) -> Result<f64> {
    check(d, alpha)?;
    let df = d as f64;
    let log = (2.0 * df).log2() - (1.0 - alpha) / 2.0 * (df - 1.0).log2() - (1.0 + alpha) / 2.0 * (df + 1.0).log2();
    Ok(log - binary_entropy((1.0 - alpha) / 2.0)?)
}

/// `I(A:B)` of the partial transpose; defined for `α ∈ [0, 1]`, with
/// `α log α → 0` at the origin.
pub fn werner_mi_gamma(d: usize, alpha: f64) -> Result<f64> {
    check(d, alpha)?;
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "partial transpose of an entangled Werner state (alpha = {alpha}) is not a state"
        )));
    }
    let df = d as f64;
    let dd = df * df - 1.0;
    let head = (df * (df - alpha) / dd).log2();
    let tail = if alpha == 0.0 {
        0.0
    } else {
        alpha / df * (alpha * dd / (df - alpha)).log2()
    };
    Ok(head + tail)
}

/// Both mutual informations from an explicit eigendecomposition.
pub fn werner_mi_spectral(d: usize, alpha: f64) -> Result<(f64, f64)> {
    let rho = werner(WernerParams::new(d, alpha)?);
    let cut = ["B"];
    let i = mutual_information(&rho, &cut)?;
    let g = rho.partial_transpose(&cut)?;
    let s_gamma = matrix_entropy(&g)?;
    // the partial transpose keeps the maximally mixed marginals
    let i_gamma = 2.0 * (d as f64).log2() - s_gamma;
    Ok((i, i_gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapClass {
    Gap,
    Equality,
    None,
}

impl GapClass {
    pub fn of(margin: f64) -> Self {
        if margin > tolerance::STRICT_MARGIN {
            GapClass::Gap
        } else if margin.abs() <= tolerance::STRICT_MARGIN {
            GapClass::Equality
        } else {
            GapClass::None
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WernerPoint {
    pub d: usize,
    pub alpha: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "I_gamma")]
    pub i_gamma: f64,
    pub gap_holds: bool,
    /// `I − 2 I_gamma`
    pub margin: f64,
    /// `α = 1/d`, where the state is maximally mixed.
    pub degenerate: bool,
}

impl WernerPoint {
    pub fn evaluate(d: usize, alpha: f64) -> Result<Self> {
        let i = werner_mi(d, alpha)?;
        let i_gamma = werner_mi_gamma(d, alpha)?;
        let margin = i - 2.0 * i_gamma;
        Ok(Self {
            d,
            alpha,
            i,
            i_gamma,
            gap_holds: margin > tolerance::STRICT_MARGIN,
            margin,
            degenerate: (alpha * d as f64 - 1.0).abs() <= 1e-12,
        })
    }

    pub fn class(&self) -> GapClass {
        GapClass::of(self.margin)
    }
}

/// Reference critical dimensions that the computed ones are compared against.
pub const REPORTED_CRITICAL_DIMENSIONS: &[(f64, usize)] = &[(0.1, 51), (0.2, 5), (0.5, 2)];

pub fn reported_critical_dimension(alpha: f64) -> Option<usize> {
    REPORTED_CRITICAL_DIMENSIONS
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-12)
        .map(|&(_, d)| d)
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalDimension {
    pub alpha: f64,
    pub d_max: usize,
    /// Smallest `d` with a strict gap, `None` if there is none up to `d_max`.
    pub d_cri: Option<usize>,
    pub reported: Option<usize>,
    /// Dimensions where both sides agree within the strict margin.
    pub equality_at: Vec<usize>,
    /// `(d, margin)` for every scanned `d`.
    pub margins: Vec<(usize, f64)>,
}

impl CriticalDimension {
    pub fn discrepancy(&self) -> bool {
        matches!(self.reported, Some(r) if Some(r) != self.d_cri)
    }

    pub fn margin_at(&self, d: usize) -> Option<f64> {
        self.margins.iter().find(|(k, _)| *k == d).map(|&(_, m)| m)
    }
}

/// Checks every `d ∈ [2, d_max]`; the margin is not monotone in `d`.
pub fn critical_dimension(alpha: f64, d_max: usize) -> Result<CriticalDimension> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if d_max < 2 {
        return Err(Error::InvalidParameter(format!("d_max must be at least 2, got {d_max}")));
    }
    let mut margins = Vec::with_capacity(d_max - 1);
    let mut d_cri = None;
    let mut equality_at = Vec::new();
    for d in 2..=d_max {
        let p = WernerPoint::evaluate(d, alpha)?;
        match p.class() {
            GapClass::Gap if d_cri.is_none() => d_cri = Some(d),
            GapClass::Equality => equality_at.push(d),
            _ => {}
        }
        margins.push((d, p.margin));
    }
    Ok(CriticalDimension {
        alpha,
        d_max,
        d_cri,
        reported: reported_critical_dimension(alpha),
        equality_at,
        margins,
    })
}

/// `0.1, 0.15, …, 1.0`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..19).map(|k| round_grid(0.1 + 0.05 * k as f64)).collect()
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Every `(α, d)` pair, sorted by `α` then `d`.
pub fn werner_scan(alphas: &[f64], d_min: usize, d_max: usize) -> Result<Vec<WernerPoint>> {
    if d_min < 2 || d_min > d_max {
        return Err(Error::InvalidParameter(format!("empty dimension range [{d_min}, {d_max}]")));
    }
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    let grid: Vec<(f64, usize)> = alphas
        .iter()
        .flat_map(|&a| (d_min..=d_max).map(move |d| (a, d)))
        .collect();
    grid.par_iter().map(|&(a, d)| WernerPoint::evaluate(d, a)).collect()
}

pub const CSV_HEADER: &str = "alpha,d,I,I_gamma,two_I_gamma,margin,gap,degenerate";

pub fn write_scan_csv<W: Write>(rows: &[WernerPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            g12(p.alpha),
            p.d,
            g12(p.i),
            g12(p.i_gamma),
            g12(2.0 * p.i_gamma),
            g12(p.margin),
            p.gap_holds,
            p.degenerate
        )?;
    }
    Ok(())
}

pub const DCRI_HEADER: &str = "alpha,d_max,d_cri,reported,discrepancy,equality_at";

pub fn write_dcri_csv<W: Write>(rows: &[CriticalDimension], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DCRI_HEADER}")?;
    for c in rows {
        let opt = |v: Option<usize>| v.map_or_else(|| "none".to_string(), |d| d.to_string());
        let eq: Vec<String> = c.equality_at.iter().map(|d| d.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            g12(c.alpha),
            c.d_max,
            opt(c.d_cri),
            c.reported.map_or_else(String::new, |d| d.to_string()),
            c.discrepancy(),
            eq.join(" ")
        )?;
    }
    Ok(())
}
