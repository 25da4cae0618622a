use serde::Serialize;

use super::eig::{eig_hermitian, EigenDecomposition, Spectrum};
use super::layout::SubsystemLayout;
use super::matrix::{ComplexMatrix, C64};
use super::ops;
use crate::error::{Error, Result};
use crate::tolerance;

/// Hermitian, positive semidefinite, unit-trace matrix together with the
/// register layout it lives on.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

/// Result of checking the density-operator invariants.
#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub hermiticity_deviation: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

impl DensityOperator {
    /// Validates every invariant before accepting the matrix.
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        let rho = Self { matrix, layout };
        rho.validate()?;
        Ok(rho)
    }

    /// For results of operations that preserve the invariants (partial trace,
    /// unitary conjugation, pinching) on already validated input.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(matrix.rows(), layout.total_dim());
        Self { matrix, layout }
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(psi: &[C64], layout: SubsystemLayout) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerance::TRACE {
            return Err(Error::BadTrace(norm));
        }
        Self::new(ComplexMatrix::projector(psi), layout)
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self::from_parts_unchecked(ops::maximally_mixed_matrix(n), layout)
    }

    pub fn validate(&self) -> Result<Validation> {
        let m = &self.matrix;
        if !m.is_square() || m.rows() != self.layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on a layout of dimension {}",
                m.rows(),
                m.cols(),
                self.layout.total_dim()
            )));
        }
        if let Some((k, _)) = m
            .data()
            .iter()
            .enumerate()
            .find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / m.cols(),
                col: k % m.cols(),
            });
        }
        let herm = m.hermiticity_deviation();
        if herm > tolerance::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > tolerance::TRACE {
            return Err(Error::BadTrace(trace));
        }
        let min = eig_hermitian(m)?.spectrum().min();
        if min < -tolerance::PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Validation {
            hermiticity_deviation: herm,
            trace,
            min_eigenvalue: min,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Same matrix on a layout with identical dimensions but new labels or parties.
    pub fn relabel(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.dims() != self.layout.dims() {
            return Err(Error::DimensionMismatch(format!(
                "cannot relabel dims {:?} as {:?}",
                self.layout.dims(),
                layout.dims()
            )));
        }
        Ok(Self::from_parts_unchecked(self.matrix.clone(), layout))
    }

    /// `self ⊗ other`, layouts concatenated in operand order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::from_parts_unchecked(self.matrix.kron(&other.matrix), layout))
    }

    pub fn partial_trace<S: AsRef<str>>(&self, drop: &[S]) -> Result<Self> {
        let (m, l) = ops::partial_trace(&self.matrix, &self.layout, drop)?;
        Ok(Self::from_parts_unchecked(m, l))
    }

    /// Marginal on the named registers (kept in layout order).
    pub fn marginal<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        self.layout.resolve(keep)?;
        let drop = self.layout.complement(keep);
        self.partial_trace(&drop)
    }

    /// `ρ^Γ` with transposition on the named registers. The result is
    /// Hermitian but positive only for PPT states, hence a plain matrix.
    pub fn partial_transpose<S: AsRef<str>>(&self, cut: &[S]) -> Result<ComplexMatrix> {
        ops::partial_transpose(&self.matrix, &self.layout, cut)
    }

    /// Partial transpose on the default cut (registers not owned by the
    /// first register's party).
    pub fn partial_transpose_default(&self) -> Result<ComplexMatrix> {
        self.partial_transpose(&self.layout.default_cut())
    }

    /// `ρ^Γ` as a density operator, which exists exactly when `ρ` is PPT.
    pub fn partial_transpose_state<S: AsRef<str>>(&self, cut: &[S]) -> Result<Self> {
        Self::new(self.partial_transpose(cut)?, self.layout.clone())
    }

    pub fn is_ppt<S: AsRef<str>>(&self, cut: &[S]) -> Result<PptReport> {
        let gamma = self.partial_transpose(cut)?;
        let min = eig_hermitian(&gamma)?.spectrum().min();
        Ok(PptReport {
            ppt: min >= -tolerance::PSD,
            min_eigenvalue: min,
        })
    }

    pub fn permute_registers<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (m, l) = ops::permute_registers(&self.matrix, &self.layout, order)?;
        Ok(Self::from_parts_unchecked(m, l))
    }

    pub fn apply_unitary<S: AsRef<str>>(&self, targets: &[S], u: &ComplexMatrix) -> Result<Self> {
        let dev = u.unitarity_deviation();
        if dev > tolerance::UNITARY {
            return Err(Error::NotUnitary(dev));
        }
        let m = ops::apply_local_unitary(&self.matrix, &self.layout, targets, u)?;
        Ok(Self::from_parts_unchecked(m, self.layout.clone()))
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        eig_hermitian(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(self.eigen()?.spectrum())
    }

    /// Convex combination `(1−p)·self + p·other` on the same layout.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        if self.layout.dims() != other.layout.dims() {
            return Err(Error::DimensionMismatch("mixing states of different shapes".into()));
        }
        let m = &self.matrix.scale_real(1.0 - p) + &other.matrix.scale_real(p);
        Ok(Self::from_parts_unchecked(m, self.layout.clone()))
    }

    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        ops::trace_distance(&self.matrix, &other.matrix)
    }

    /// Uhlmann fidelity `(Tr √(√σ ρ √σ))²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("fidelity of different dimensions".into()));
        }
        let e = other.eigen()?;
        let n = self.dim();
        let sqrt_vals: Vec<f64> = e.values.iter().map(|&x| floored_sqrt(x)).collect();
        let sqrt_sigma = ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| e.vectors[(r, k)] * e.vectors[(c, k)].conj() * sqrt_vals[k])
                .sum()
        });
        let inner = sqrt_sigma.matmul(&self.matrix)?.matmul(&sqrt_sigma)?.hermitian_part();
        let s = eig_hermitian(&inner)?.spectrum();
        let root: f64 = s.eigenvalues.iter().map(|&x| floored_sqrt(x)).sum();
        Ok(root * root)
    }
}

/// Round-off eigenvalues would otherwise contribute `√1e-16 = 1e-8`.
fn floored_sqrt(x: f64) -> f64 {
    if x <= tolerance::LOG_FLOOR {
        0.0
    } else {
        x.sqrt()
    }
}
