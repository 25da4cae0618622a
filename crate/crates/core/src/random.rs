//! Seeded sampling of unitaries, states and simplex points.
//!
//! Every sampler takes an explicit generator; [`rng_for`] derives an
//! independent ChaCha stream per (seed, index) so parallel sampling is
//! reproducible regardless of thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::densop::{ComplexMatrix, DensityOperator, SubsystemLayout, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_for(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix (the implied `R` has a positive real diagonal).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..n).map(|_| gaussian_complex(rng)).collect())
        .collect();
    for k in 0..n {
        for j in 0..k {
            let proj: C64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
            let qj = cols[j].clone();
            for (x, q) in cols[k].iter_mut().zip(&qj) {
                *x -= proj * q;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

pub fn random_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Full-rank Ginibre state `G G† / Tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(layout: SubsystemLayout, rng: &mut R) -> DensityOperator {
    let n = layout.total_dim();
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    let gg = g.matmul(&g.dagger()).expect("square").hermitian_part();
    let tr = gg.trace().re;
    DensityOperator::from_parts_unchecked(gg.scale_real(1.0 / tr), layout)
}

/// Ginibre state of reduced rank `rank`.
pub fn random_density_rank<R: Rng + ?Sized>(layout: SubsystemLayout, rank: usize, rng: &mut R) -> DensityOperator {
    let n = layout.total_dim();
    let g = ComplexMatrix::from_fn(n, rank.max(1), |_, _| gaussian_complex(rng));
    let gg = g.matmul(&g.dagger()).expect("shapes agree").hermitian_part();
    let tr = gg.trace().re;
    DensityOperator::from_parts_unchecked(gg.scale_real(1.0 / tr), layout)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    g.hermitian_part()
}

/// Uniform point on the probability simplex with `k` vertices (flat Dirichlet).
pub fn flat_dirichlet<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `Σ_k w_k ρ_A^k ⊗ ρ_B^k` with flat Dirichlet weights and Ginibre
/// factors on `layout`'s two registers; PPT by construction.
pub fn random_separable<R: Rng + ?Sized>(layout: &SubsystemLayout, terms: usize, rng: &mut R) -> DensityOperator {
    let regs = layout.registers();
    assert_eq!(regs.len(), 2, "random_separable needs a bipartite layout");
    let la = SubsystemLayout::new(vec![regs[0].clone()]).expect("one register");
    let lb = SubsystemLayout::new(vec![regs[1].clone()]).expect("one register");
    let w = flat_dirichlet(terms, rng);
    let mut m = ComplexMatrix::zeros(layout.total_dim(), layout.total_dim());
    for wk in w {
        let a = random_density(la.clone(), rng);
        let b = random_density(lb.clone(), rng);
        m = &m + &a.matrix().kron(b.matrix()).scale_real(wk);
    }
    DensityOperator::from_parts_unchecked(m, layout.clone())
}

/// Ginibre states on two registers, redrawn until PPT.
pub fn random_ppt<R: Rng + ?Sized>(layout: &SubsystemLayout, rng: &mut R) -> DensityOperator {
    let cut = layout.default_cut();
    loop {
        let rho = random_density(layout.clone(), rng);
        if rho.is_ppt(&cut).map(|r| r.ppt).unwrap_or(false) {
            return rho;
        }
    }
}
