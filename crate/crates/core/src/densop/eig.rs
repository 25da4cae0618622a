//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the real symmetric Jacobi rotation, so the
//! combined plane transform `W` satisfies `(W† A W)_pq = 0`.

use serde::Serialize;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

const MAX_SWEEPS: usize = 100;

/// Real eigenvalues sorted in descending order, with the worst eigen-pair
/// residual of the decomposition that produced them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    /// Closed-form spectra have no residual.
    pub fn exact(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self {
            eigenvalues,
            residual: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn is_accepted(&self) -> bool {
        self.residual <= tolerance::SPECTRUM_RESIDUAL
    }

    /// Eigenvalues clamped to `[0, 1]`, the form fed to entropy functions.
    pub fn clamped(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&x| x.clamp(0.0, 1.0)).collect()
    }
}

/// Full eigendecomposition `M = V diag(λ) V†`; column `k` of `vectors`
/// belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub residual: f64,
}

impl EigenDecomposition {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            eigenvalues: self.values.clone(),
            residual: self.residual,
        }
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, k)]).collect()
    }

    /// `Σ λ_k v_k v_k†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| self.vectors[(r, k)] * self.vectors[(c, k)].conj() * self.values[k])
                .sum()
        })
    }
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > tolerance::HERMITIAN {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);
    let threshold = tolerance::JACOBI_OFF_DIAGONAL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let residual = residual(m, &values, &vectors);
    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
    })
}

/// Spectrum only; the eigenvectors are still formed to report the residual.
pub fn spectrum_of(m: &ComplexMatrix) -> Result<Spectrum> {
    Ok(eig_hermitian(m)?.spectrum())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let pc = phase.conj();
    // W on the (p, q) plane: column p = (c, -s·conj(e)), column q = (s, c·conj(e)).
    let wqp = -pc * s;
    let wqq = pc * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * wqp;
        a[(k, q)] = akp * s + akq * wqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * wqp.conj();
        a[(q, k)] = apk * s + aqk * wqq.conj();
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * wqp;
        v[(k, q)] = vkp * s + vkq * wqq;
    }
}

fn residual(m: &ComplexMatrix, values: &[f64], vectors: &ComplexMatrix) -> f64 {
    let n = values.len();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let vk: Vec<C64> = (0..n).map(|r| vectors[(r, k)]).collect();
        let mv = m.mul_vec(&vk);
        let err = mv
            .iter()
            .zip(&vk)
            .map(|(a, b)| (a - b * values[k]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err);
    }
    worst
}
