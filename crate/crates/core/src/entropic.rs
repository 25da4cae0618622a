//! Entropies, mutual information and relative entropy, all in bits.

use serde::Serialize;

use crate::densop::{eig_hermitian, ops, ComplexMatrix, DensityOperator, Party, Spectrum, SubsystemLayout};
use crate::error::{Error, Result};
use crate::tolerance;

/// Spectrum with the residual acceptance check applied.
pub fn accepted_spectrum(m: &ComplexMatrix) -> Result<Spectrum> {
    let s = eig_hermitian(m)?.spectrum();
    if !s.is_accepted() {
        return Err(Error::Residual(s.residual));
    }
    Ok(s)
}

fn xlog2x(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x.max(tolerance::LOG_FLOOR).log2()
}

/// `−Σ λ log₂ λ` over eigenvalues clamped to `[0, 1]`.
pub fn entropy_of_eigenvalues(eigenvalues: &[f64]) -> f64 {
    let s: f64 = -eigenvalues.iter().map(|&x| xlog2x(x)).sum::<f64>();
    s.max(0.0)
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    entropy_of_eigenvalues(p)
}

/// Entropy of a PSD unit-trace matrix, e.g. the partial transpose of a PPT state.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(entropy_of_eigenvalues(&accepted_spectrum(m)?.eigenvalues))
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// Entropy of the marginal of a matrix on the named registers.
pub fn marginal_entropy_matrix<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    keep: &[S],
) -> Result<f64> {
    layout.resolve(keep)?;
    let drop = layout.complement(keep);
    let (reduced, _) = ops::partial_trace(m, layout, &drop)?;
    matrix_entropy(&reduced)
}

fn check_cut<S: AsRef<str>>(layout: &SubsystemLayout, cut: &[S]) -> Result<Vec<String>> {
    layout.resolve(cut)?;
    let rest = layout.complement(cut);
    if cut.is_empty() || rest.is_empty() {
        return Err(Error::InvalidParameter(
            "a bipartition needs registers on both sides".into(),
        ));
    }
    Ok(rest)
}

/// `I(X:Y)` for a matrix with `Y` the named registers and `X` the rest.
pub fn mutual_information_matrix<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    cut: &[S],
) -> Result<f64> {
    let rest = check_cut(layout, cut)?;
    let s_xy = matrix_entropy(m)?;
    let s_x = marginal_entropy_matrix(m, layout, &rest)?;
    let s_y = marginal_entropy_matrix(m, layout, cut)?;
    Ok(s_x + s_y - s_xy)
}

/// `I(X:Y)` where `Y` is the named registers and `X` the rest of the layout.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityOperator, cut: &[S]) -> Result<f64> {
    mutual_information_matrix(rho.matrix(), rho.layout(), cut)
}

/// `S(rest | given) = S(all) − S(given)`.
pub fn conditional_entropy<S: AsRef<str>>(rho: &DensityOperator, given: &[S]) -> Result<f64> {
    check_cut(rho.layout(), given)?;
    let s_all = von_neumann_entropy(rho)?;
    let s_given = marginal_entropy_matrix(rho.matrix(), rho.layout(), given)?;
    Ok(s_all - s_given)
}

/// `D(ρ‖σ)` for PSD unit-trace matrices. Returns `f64::INFINITY` when the
/// support of `ρ` is not contained in the support of `σ`.
pub fn relative_entropy_matrix(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy of {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    let er = eig_hermitian(rho)?;
    let es = eig_hermitian(sigma)?;
    let n = rho.rows();
    let lam: Vec<f64> = er.values.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    let mu: Vec<f64> = es.values.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    // overlap[i][j] = |⟨r_i|s_j⟩|²
    let overlap = er.vectors.dagger().matmul(&es.vectors)?;
    let mut cross = 0.0;
    for (j, &m) in mu.iter().enumerate() {
        let weight: f64 = (0..n).map(|i| lam[i] * overlap[(i, j)].norm_sqr()).sum();
        if m < tolerance::SUPPORT_EIGENVALUE {
            if weight > tolerance::SUPPORT_WEIGHT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * m.log2();
    }
    let neg_entropy: f64 = lam.iter().map(|&x| xlog2x(x)).sum();
    Ok((neg_entropy - cross).max(0.0))
}

pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    relative_entropy_matrix(rho.matrix(), sigma.matrix())
}

/// `D(p‖q)` for probability vectors, with the same infinite sentinel.
pub fn classical_relative_entropy(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch("distributions of different length".into()));
    }
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a <= tolerance::SUPPORT_WEIGHT {
            continue;
        }
        if b < tolerance::SUPPORT_EIGENVALUE {
            return Ok(f64::INFINITY);
        }
        d += a * (a / b).log2();
    }
    Ok(d.max(0.0))
}

fn check_unit_interval(x: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{what} argument {x} outside [0, 1]")));
    }
    Ok(())
}

/// `h(p) = −p log p − (1−p) log(1−p)`
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit_interval(p, "binary entropy")?;
    Ok(eta_raw(p) + eta_raw(1.0 - p))
}

/// `η(x) = −x log x`
pub fn eta(x: f64) -> Result<f64> {
    check_unit_interval(x, "eta")?;
    Ok(eta_raw(x))
}

pub(crate) fn eta_raw(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// `G(ρ) = log₂ dim − S(ρ)`
pub fn global_purity(rho: &DensityOperator) -> Result<f64> {
    Ok((rho.dim() as f64).log2() - von_neumann_entropy(rho)?)
}

/// `log₂ dim − S` for a PSD unit-trace matrix.
pub fn global_purity_matrix(m: &ComplexMatrix) -> Result<f64> {
    Ok((m.rows() as f64).log2() - matrix_entropy(m)?)
}

/// Randomness localisable at one party, available only when the
/// conditional entropy of the other side given that party is positive.
#[derive(Clone, Debug, Serialize)]
pub struct LocalisableRandomness {
    pub party: Party,
    /// `G(ρ)` when the hypothesis holds.
    pub value: Option<f64>,
    pub global_purity: f64,
    /// `S(all) − S(party)`: the hypothesis that is enforced.
    pub conditional_entropy: f64,
    /// `S(all) − S(other side)`: the transposed reading, reported only.
    pub conditional_entropy_swapped: f64,
}

impl LocalisableRandomness {
    pub fn is_applicable(&self) -> bool {
        self.value.is_some()
    }
}

/// Randomness localisable at `at` by closed local operations and dephasing
/// communication. Returns `value: None` outside the positive
/// conditional-entropy regime instead of extrapolating.
pub fn localisable_randomness(rho: &DensityOperator, at: Party) -> Result<LocalisableRandomness> {
    let own = rho.layout().owned_by(at);
    let other = check_cut(rho.layout(), &own)?;
    let s_all = von_neumann_entropy(rho)?;
    let s_own = marginal_entropy_matrix(rho.matrix(), rho.layout(), &own)?;
    let s_other = marginal_entropy_matrix(rho.matrix(), rho.layout(), &other)?;
    let g = (rho.dim() as f64).log2() - s_all;
    let cond = s_all - s_own;
    Ok(LocalisableRandomness {
        party: at,
        value: (cond > tolerance::STRICT_MARGIN).then_some(g),
        global_purity: g,
        conditional_entropy: cond,
        conditional_entropy_swapped: s_all - s_other,
    })
}

/// Entropic summary across a bipartition `X:Y`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub i_ab: f64,
    /// `S(AB) − S(A)`
    pub s_b_given_a: f64,
    /// `S(AB) − S(B)`
    pub s_a_given_b: f64,
}

/// Report with `B` the named registers and `A` the rest.
pub fn entropy_report<S: AsRef<str>>(rho: &DensityOperator, cut: &[S]) -> Result<EntropyReport> {
    let rest = check_cut(rho.layout(), cut)?;
    let s_ab = von_neumann_entropy(rho)?;
    let s_a = marginal_entropy_matrix(rho.matrix(), rho.layout(), &rest)?;
    let s_b = marginal_entropy_matrix(rho.matrix(), rho.layout(), cut)?;
    Ok(EntropyReport {
        s_ab,
        s_a,
        s_b,
        i_ab: s_a + s_b - s_ab,
        s_b_given_a: s_ab - s_a,
        s_a_given_b: s_ab - s_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densop::{Register, C64};
    use crate::ensembles::{alpha_v, max_entangled, symmetric_werner};

    fn qubit(k: usize) -> DensityOperator {
        crate::ensembles::basis_state("A", 2, Party::A, k).unwrap()
    }

    #[test]
    fn entropy_of_basic_states() {
        for d in 1..6 {
            let mm = DensityOperator::maximally_mixed(SubsystemLayout::single("A", d, Party::A));
            assert!((von_neumann_entropy(&mm).unwrap() - (d as f64).log2()).abs() < 1e-12);
        }
        assert!(von_neumann_entropy(&max_entangled(3).unwrap()).unwrap().abs() < 1e-12);
        let s = von_neumann_entropy(&symmetric_werner(2).unwrap()).unwrap();
        assert!((s - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let psi = max_entangled(2).unwrap();
        assert!((mutual_information(&psi, &["B"]).unwrap() - 2.0).abs() < 1e-12);
        let prod = qubit(0).tensor(&qubit(1).relabel(SubsystemLayout::single("B", 2, Party::B)).unwrap()).unwrap();
        assert!(mutual_information(&prod, &["B"]).unwrap().abs() < 1e-12);
        let w = symmetric_werner(2).unwrap();
        let want = 1.0 + (2.0f64 / 3.0).log2();
        assert!((mutual_information(&w, &["B"]).unwrap() - want).abs() < 1e-12);
        assert!(mutual_information(&w, &["A", "B"]).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let psi = max_entangled(2).unwrap();
        assert!(relative_entropy(&psi, &psi).unwrap().abs() < 1e-10);
        let mm = DensityOperator::maximally_mixed(SubsystemLayout::bipartite(2, 2));
        assert!((relative_entropy(&psi, &mm).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(relative_entropy(&qubit(0), &qubit(1)).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&qubit(0), &mm).is_err());
    }

    #[test]
    fn scalar_functions() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        let h14 = 2.0 - 0.75 * 3f64.log2();
        assert!((binary_entropy(0.25).unwrap() - h14).abs() < 1e-15);
        assert!((eta(0.125).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(eta(0.0).unwrap(), 0.0);
        assert!(eta(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn localisable_randomness_examples() {
        let w = symmetric_werner(2).unwrap();
        let r = localisable_randomness(&w, Party::A).unwrap();
        assert!((r.value.unwrap() - (2.0 - 3f64.log2())).abs() < 1e-12);
        assert!((r.conditional_entropy - (3f64.log2() - 1.0)).abs() < 1e-12);
        for d in 3..=5 {
            let a = alpha_v(d).unwrap();
            let ra = localisable_randomness(&a, Party::A).unwrap();
            assert!((ra.value.unwrap() - 1.0).abs() < 1e-9);
            let rb = localisable_randomness(&a, Party::B).unwrap();
            assert!((rb.value.unwrap() - 1.0).abs() < 1e-9);
        }
        let mm = DensityOperator::maximally_mixed(SubsystemLayout::bipartite(3, 3));
        assert!(localisable_randomness(&mm, Party::A).unwrap().value.unwrap().abs() < 1e-12);
        let psi = max_entangled(2).unwrap();
        assert!(localisable_randomness(&psi, Party::A).unwrap().value.is_none());
    }

    #[test]
    fn report_is_consistent() {
        let l = SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("B", 3, Party::B),
        ])
        .unwrap();
        let m = ComplexMatrix::from_fn(6, 6, |r, c| {
            if r == c {
                C64::new(1.0 / 6.0, 0.0)
            } else {
                C64::new(0.01 * (r + c) as f64, 0.005 * (r as f64 - c as f64))
            }
        });
        let rho = DensityOperator::new(m, l).unwrap();
        let rep = entropy_report(&rho, &["B"]).unwrap();
        assert!((rep.i_ab - (rep.s_a + rep.s_b - rep.s_ab)).abs() < 1e-12);
        assert!(rep.s_ab <= 6f64.log2() + 1e-9);
        let d = relative_entropy_matrix(
            rho.matrix(),
            &rho.partial_trace(&["B"]).unwrap().tensor(&rho.partial_trace(&["A"]).unwrap()).unwrap().into_matrix(),
        )
        .unwrap();
        assert!((d - rep.i_ab).abs() < 1e-10);
    }
}
