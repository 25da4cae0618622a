//! Layout-aware operations on raw matrices. The [`DensityOperator`] methods
//! delegate here; code that handles non-positive operators (partial
//! transposes of entangled states, differences of states) uses these directly.
//!
//! [`DensityOperator`]: super::DensityOperator

use super::eig::spectrum_of;
use super::layout::{IndexMap, SubsystemLayout};
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

fn check_square(m: &ComplexMatrix, layout: &SubsystemLayout) -> Result<()> {
    if !m.is_square() || m.rows() != layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not match layout of dimension {}",
            m.rows(),
            m.cols(),
            layout.total_dim()
        )));
    }
    Ok(())
}

/// Traces out the registers in `drop`; the remaining registers keep their order.
pub fn partial_trace<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    drop: &[S],
) -> Result<(ComplexMatrix, SubsystemLayout)> {
    check_square(m, layout)?;
    let dropped = layout.resolve(drop)?;
    let keep: Vec<usize> = (0..layout.len()).filter(|i| !dropped.contains(i)).collect();
    let out_layout = layout.select(&keep);
    let map = IndexMap::new(&layout.dims());
    let (kept_idx, traced_idx) = map.split(&keep);
    let n = m.rows();
    let dk = out_layout.total_dim();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..n {
        let row = m.row(i);
        let ti = traced_idx[i];
        let ki = kept_idx[i];
        for (j, z) in row.iter().enumerate() {
            if traced_idx[j] == ti {
                out[(ki, kept_idx[j])] += z;
            }
        }
    }
    Ok((out, out_layout))
}

/// Transposes the named registers only. A pure index permutation, so it is an
/// exact involution.
pub fn partial_transpose<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    cut: &[S],
) -> Result<ComplexMatrix> {
    check_square(m, layout)?;
    let regs = layout.resolve(cut)?;
    let map = IndexMap::new(&layout.dims());
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut ii = i;
            let mut jj = j;
            for &r in &regs {
                let di = map.digit(i, r);
                let dj = map.digit(j, r);
                let s = map.strides[r];
                ii = ii - di * s + dj * s;
                jj = jj - dj * s + di * s;
            }
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorders the tensor factors so that `order[k]` becomes the k-th register.
pub fn permute_registers<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    order: &[S],
) -> Result<(ComplexMatrix, SubsystemLayout)> {
    check_square(m, layout)?;
    let pos = layout.resolve(order)?;
    if pos.len() != layout.len() {
        return Err(Error::InvalidParameter(
            "a register permutation must name every register once".into(),
        ));
    }
    let regs = pos.iter().map(|&p| layout.registers()[p].clone()).collect();
    let new_layout = SubsystemLayout::new(regs)?;
    let old_map = IndexMap::new(&layout.dims());
    let new_map = IndexMap::new(&new_layout.dims());
    let n = m.rows();
    // new index of each old index
    let perm: Vec<usize> = (0..n)
        .map(|old| {
            pos.iter()
                .enumerate()
                .map(|(k, &p)| old_map.digit(old, p) * new_map.strides[k])
                .sum()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(perm[i], perm[j])] = m[(i, j)];
        }
    }
    Ok((out, new_layout))
}

/// `(U ⊗ 𝟙) M (U ⊗ 𝟙)†` with `U` acting on `targets` (in the given order).
pub fn apply_local_unitary<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[S],
    u: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_square(m, layout)?;
    let pos = layout.resolve(targets)?;
    let dt: usize = pos.iter().map(|&p| layout.registers()[p].dim).product();
    if u.rows() != dt || u.cols() != dt {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but targets have dimension {dt}",
            u.rows(),
            u.cols()
        )));
    }
    let map = IndexMap::new(&layout.dims());
    let n = m.rows();
    // sub-index of each full index over the targets, in the order given
    let tgt: Vec<usize> = (0..n)
        .map(|i| pos.iter().fold(0, |acc, &p| acc * layout.registers()[p].dim + map.digit(i, p)))
        .collect();
    // full index with the target digits zeroed
    let base: Vec<usize> = (0..n)
        .map(|i| i - pos.iter().map(|&p| map.digit(i, p) * map.strides[p]).sum::<usize>())
        .collect();
    let offsets: Vec<usize> = (0..dt)
        .map(|t| {
            let mut rem = t;
            let mut off = 0;
            for &p in pos.iter().rev() {
                let d = layout.registers()[p].dim;
                off += (rem % d) * map.strides[p];
                rem /= d;
            }
            off
        })
        .collect();

    let left = |x: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let ti = tgt[i];
            let bi = base[i];
            let urow = u.row(ti);
            for (t, &uz) in urow.iter().enumerate() {
                if uz == ZERO {
                    continue;
                }
                let src = x.row(bi + offsets[t]);
                let dst = &mut out.data_mut()[i * n..(i + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += uz * s;
                }
            }
        }
        out
    };
    // U M U† = U (U M)† for Hermitian M; use the general form to stay exact for any M.
    let um = left(m);
    let um_dag = um.dagger();
    let u_um_dag = left(&um_dag);
    Ok(u_um_dag.dagger())
}

/// Pinching `Σ_k P_k M P_k` in the computational basis of one register.
pub fn pinch(m: &ComplexMatrix, layout: &SubsystemLayout, register: &str) -> Result<ComplexMatrix> {
    check_square(m, layout)?;
    let r = layout.index_of(register)?;
    let map = IndexMap::new(&layout.dims());
    let n = m.rows();
    let digits: Vec<usize> = (0..n).map(|i| map.digit(i, r)).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if digits[i] == digits[j] {
            m[(i, j)]
        } else {
            ZERO
        }
    }))
}

/// `P_k M P_k` for a single outcome `k` of a register.
pub fn project(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    register: &str,
    outcome: usize,
) -> Result<ComplexMatrix> {
    check_square(m, layout)?;
    let r = layout.index_of(register)?;
    let map = IndexMap::new(&layout.dims());
    let n = m.rows();
    let digits: Vec<usize> = (0..n).map(|i| map.digit(i, r)).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if digits[i] == outcome && digits[j] == outcome {
            m[(i, j)]
        } else {
            ZERO
        }
    }))
}

/// Computational-basis outcome distribution of the named registers.
pub fn readout_distribution<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    registers: &[S],
) -> Result<Vec<f64>> {
    check_square(m, layout)?;
    let pos = layout.resolve(registers)?;
    let map = IndexMap::new(&layout.dims());
    let d: usize = pos.iter().map(|&p| layout.registers()[p].dim).product();
    let mut p = vec![0.0; d];
    for i in 0..m.rows() {
        let k = pos
            .iter()
            .fold(0, |acc, &q| acc * layout.registers()[q].dim + map.digit(i, q));
        p[k] += m[(i, i)].re;
    }
    Ok(p)
}

/// `‖M‖₁ = Σ|λ|` for Hermitian `M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let s = spectrum_of(m)?;
    Ok(s.eigenvalues.iter().map(|x| x.abs()).sum())
}

/// `‖a − b‖₁`, without the factor ½; ranges over `[0, 2]` for states.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch("trace distance of different shapes".into()));
    }
    trace_norm(&(a - b))
}

/// Maximally mixed operator `𝟙/n`.
pub fn maximally_mixed_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale_real(1.0 / n as f64)
}

/// Largest entry-wise deviation from `𝟙/n`.
pub fn deviation_from_maximally_mixed(m: &ComplexMatrix) -> f64 {
    m.max_abs_diff(&maximally_mixed_matrix(m.rows()))
}

/// Computational basis vector `|k⟩` of dimension `n`.
pub fn basis_vector(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densop::{Party, Register};

    fn layout3() -> SubsystemLayout {
        SubsystemLayout::new(vec![
            Register::new("X", 2, Party::A),
            Register::new("Y", 3, Party::B),
            Register::new("Z", 2, Party::C),
        ])
        .unwrap()
    }

    fn sample(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |r, c| C64::new((r * 7 + c * 3) as f64 % 5.0, (r as f64) - (c as f64)))
    }

    #[test]
    fn local_unitary_matches_explicit_embedding() {
        let l = layout3();
        let m = sample(12);
        // U on Y (3-dim): cyclic shift
        let u = ComplexMatrix::from_fn(3, 3, |r, c| if r == (c + 1) % 3 { C64::new(1.0, 0.0) } else { ZERO });
        let full = ComplexMatrix::identity(2).kron(&u).kron(&ComplexMatrix::identity(2));
        let expected = full.matmul(&m).unwrap().matmul(&full.dagger()).unwrap();
        let got = apply_local_unitary(&m, &l, &["Y"], &u).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn local_unitary_on_reordered_targets() {
        let l = layout3();
        let m = sample(12);
        let a = ComplexMatrix::from_fn(2, 2, |r, c| C64::new(r as f64, c as f64 + 1.0));
        let b = ComplexMatrix::from_fn(2, 2, |r, c| C64::new(1.0 + (r * c) as f64, -(r as f64)));
        // operator on (Z, X) = b ⊗ a in target order Z, X means Z gets b and X gets a
        let got = apply_local_unitary(&m, &l, &["Z", "X"], &b.kron(&a)).unwrap();
        let full = a.kron(&ComplexMatrix::identity(3)).kron(&b);
        let expected = full.matmul(&m).unwrap().matmul(&full.dagger()).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::diagonal(&[0.25, 0.75]);
        let b = ComplexMatrix::diagonal(&[0.5, 0.3, 0.2]);
        let c = ComplexMatrix::diagonal(&[0.9, 0.1]);
        let m = a.kron(&b).kron(&c);
        let (ac, l) = partial_trace(&m, &layout3(), &["Y"]).unwrap();
        assert_eq!(l.labels(), vec!["X", "Z"]);
        assert!(ac.max_abs_diff(&a.kron(&c)) < 1e-15);
    }

    #[test]
    fn permutation_roundtrip() {
        let l = layout3();
        let m = sample(12);
        let (p, pl) = permute_registers(&m, &l, &["Z", "X", "Y"]).unwrap();
        let (back, bl) = permute_registers(&p, &pl, &["X", "Y", "Z"]).unwrap();
        assert_eq!(bl, l);
        assert_eq!(back, m);
    }

    #[test]
    fn pinch_and_readout() {
        let l = SubsystemLayout::bipartite(2, 2);
        let m = ComplexMatrix::from_fn(4, 4, |_, _| C64::new(0.25, 0.0));
        let p = pinch(&m, &l, "A").unwrap();
        assert_eq!(p[(0, 2)], ZERO);
        assert_eq!(p[(0, 1)], C64::new(0.25, 0.0));
        let dist = readout_distribution(&m, &l, &["B"]).unwrap();
        assert_eq!(dist, vec![0.5, 0.5]);
    }
}
