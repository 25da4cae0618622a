//! Constructors for the state families and structured unitaries.
//!
//! Layout conventions: bipartite states live on registers `A`, `B`;
//! shields on `A'`, `B'`; the control of a local idit is the first register.

use std::f64::consts::PI;

use serde::Serialize;

use crate::densop::{ops, ComplexMatrix, DensityOperator, Party, Register, SubsystemLayout, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerance;

pub fn maximally_mixed(layout: SubsystemLayout) -> DensityOperator {
    DensityOperator::maximally_mixed(layout)
}

/// `|+⟩ = Σ|i⟩/√d`
pub fn plus_vector(d: usize) -> Vec<C64> {
    vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d]
}

/// `|ψ₊⟩ = Σ|ii⟩/√d`
pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidParameter(format!("dimension {d} below {min}")));
    }
    Ok(())
}

/// `|+⟩⟨+|` on a single register `A`.
pub fn plus_state(d: usize) -> Result<DensityOperator> {
    check_dim(d, 1)?;
    Ok(DensityOperator::from_parts_unchecked(
        ComplexMatrix::projector(&plus_vector(d)),
        SubsystemLayout::single("A", d, Party::A),
    ))
}

/// `|ψ₊⟩⟨ψ₊|` on registers `A`, `B`.
pub fn max_entangled(d: usize) -> Result<DensityOperator> {
    check_dim(d, 1)?;
    Ok(DensityOperator::from_parts_unchecked(
        ComplexMatrix::projector(&max_entangled_vector(d)),
        SubsystemLayout::bipartite(d, d),
    ))
}

/// `V = Σ|ij⟩⟨ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = ONE;
        }
    }
    v
}

/// Werner parameters with `α = 1 − 2θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WernerParams {
    pub d: usize,
    pub alpha: f64,
}

impl WernerParams {
    pub fn new(d: usize, alpha: f64) -> Result<Self> {
        check_dim(d, 2)?;
        if !(-1.0..=1.0).contains(&alpha) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [-1, 1]")));
        }
        Ok(Self { d, alpha })
    }

    pub fn from_theta(d: usize, theta: f64) -> Result<Self> {
        Self::new(d, 1.0 - 2.0 * theta)
    }

    pub fn theta(&self) -> f64 {
        (1.0 - self.alpha) / 2.0
    }

    /// `Tr(ρV) = α`, and a Werner state is separable exactly when this is
    /// non-negative (equivalently when it is PPT).
    pub fn is_separable(&self) -> bool {
        self.alpha >= 0.0
    }
}

/// `(1−θ)ρ_s + θρ_a` with `ρ_s = (I+V)/(d²+d)`, `ρ_a = (I−V)/(d²−d)`.
pub fn werner(p: WernerParams) -> DensityOperator {
    let d = p.d as f64;
    let sym = (1.0 + p.alpha) / 2.0 / (d * d + d);
    let anti = (1.0 - p.alpha) / 2.0 / (d * d - d);
    let id_coef = sym + anti;
    let v_coef = sym - anti;
    let mut m = swap_operator(p.d).scale_real(v_coef);
    for i in 0..m.rows() {
        m[(i, i)] += id_coef;
    }
    DensityOperator::from_parts_unchecked(m, SubsystemLayout::bipartite(p.d, p.d))
}

/// `ρ_s = (I+V)/(d²+d)`, the `α = 1` Werner state.
pub fn symmetric_werner(d: usize) -> Result<DensityOperator> {
    Ok(werner(WernerParams::new(d, 1.0)?))
}

/// Weights of `ψ₊, ψ₋, φ₊, φ₋` in a two-qubit Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellDiagParams {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl BellDiagParams {
    pub fn new(a_plus: f64, a_minus: f64, b_plus: f64, b_minus: f64) -> Result<Self> {
        let p = Self {
            a_plus,
            a_minus,
            b_plus,
            b_minus,
        };
        let w = p.weights();
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(format!("negative Bell weight in {w:?}")));
        }
        let s: f64 = w.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("Bell weights sum to {s}")));
        }
        Ok(p)
    }

    pub fn from_slice(w: &[f64]) -> Result<Self> {
        match w {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => Err(Error::InvalidParameter(format!("need 4 Bell weights, got {}", w.len()))),
        }
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.a_plus, self.a_minus, self.b_plus, self.b_minus]
    }

    /// All weights at most 1/2.
    pub fn is_separable(&self) -> bool {
        self.weights().iter().all(|&x| x <= 0.5)
    }
}

fn bell_matrix(diag_outer: f64, anti_outer: f64, diag_inner: f64, anti_inner: f64) -> ComplexMatrix {
    let h = 0.5;
    ComplexMatrix::from_real(
        4,
        4,
        &[
            h * diag_outer, 0.0, 0.0, h * anti_outer,
            0.0, h * diag_inner, h * anti_inner, 0.0,
            0.0, h * anti_inner, h * diag_inner, 0.0,
            h * anti_outer, 0.0, 0.0, h * diag_outer,
        ],
    )
    .expect("4x4 literal")
}

pub fn bell_diagonal(p: BellDiagParams) -> DensityOperator {
    let m = bell_matrix(
        p.a_plus + p.a_minus,
        p.a_plus - p.a_minus,
        p.b_plus + p.b_minus,
        p.b_plus - p.b_minus,
    );
    DensityOperator::from_parts_unchecked(m, SubsystemLayout::bipartite(2, 2))
}

/// Closed form of the partial transpose of [`bell_diagonal`]: the two
/// anti-diagonal couplings trade places. Positive only inside the
/// separable region, hence returned as a matrix.
pub fn bell_diagonal_gamma(p: BellDiagParams) -> ComplexMatrix {
    bell_matrix(
        p.a_plus + p.a_minus,
        p.b_plus - p.b_minus,
        p.b_plus + p.b_minus,
        p.a_plus - p.a_minus,
    )
}

/// `(X^a Z^b ⊗ I)|ψ₊⟩`, indexed by `a·d + b`.
pub fn generalized_bell_basis(d: usize) -> Vec<Vec<C64>> {
    let amp = 1.0 / (d as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut v = vec![ZERO; d * d];
            for j in 0..d {
                let phase = C64::from_polar(amp, 2.0 * PI * (b * j) as f64 / d as f64);
                v[((j + a) % d) * d + j] = phase;
            }
            out.push(v);
        }
    }
    out
}

/// Layout `A (2, party A) | A' (d, party A) | B' (d, party B)`.
pub fn alpha_v_layout(d: usize) -> SubsystemLayout {
    SubsystemLayout::new(vec![
        Register::new("A", 2, Party::A),
        Register::new("A'", d, Party::A),
        Register::new("B'", d, Party::B),
    ])
    .expect("distinct labels")
}

/// Twisting `|0⟩⟨0| ⊗ 𝟙 + |1⟩⟨1| ⊗ V` on `A'B'` that turns `|+⟩⊗𝟙/d²`
/// into [`alpha_v`].
pub fn alpha_v_twisting(d: usize) -> Result<TwistingSpec> {
    check_dim(d, 2)?;
    let regs = alpha_v_layout(d).registers()[1..].to_vec();
    TwistingSpec::new(
        2,
        vec![ComplexMatrix::identity(d * d), swap_operator(d)],
        SubsystemLayout::new(regs)?,
    )
}

/// `α_{V,d} = ½ [[I/d², V/d²], [V/d², I/d²]]`.
pub fn alpha_v(d: usize) -> Result<DensityOperator> {
    check_dim(d, 2)?;
    let n = d * d;
    let scale = 0.5 / n as f64;
    let v = swap_operator(d);
    let m = ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (br, bc) = (r / n, c / n);
        let (ir, ic) = (r % n, c % n);
        let block = if br == bc {
            if ir == ic {
                ONE
            } else {
                ZERO
            }
        } else {
            v[(ir, ic)]
        };
        block * scale
    });
    Ok(DensityOperator::from_parts_unchecked(m, alpha_v_layout(d)))
}

/// Prime factors of `d` in ascending order, with multiplicity.
pub fn prime_factors(mut d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        while d % p == 0 {
            out.push(p);
            d /= p;
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// Mixed-radix digits of `i` over `radices`, first radix most significant.
pub fn mixed_radix_digits(mut i: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (k, &r) in radices.iter().enumerate().rev() {
        digits[k] = i % r;
        i /= r;
    }
    digits
}

fn from_mixed_radix(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&dg, &r)| acc * r + dg)
}

/// `|j⟩ ↦ |j ⊕ i⟩` with digit-wise addition modulo the prime factors of `d`.
pub fn shift_index(i: usize, j: usize, d: usize) -> usize {
    let radices = prime_factors(d);
    let di = mixed_radix_digits(i, &radices);
    let dj = mixed_radix_digits(j, &radices);
    let sum: Vec<usize> = di
        .iter()
        .zip(&dj)
        .zip(&radices)
        .map(|((a, b), r)| (a + b) % r)
        .collect();
    from_mixed_radix(&sum, &radices)
}

/// Shift by `i` on `C^d`: `⊗_l S_{l[i], d_l}`.
pub fn shift_operator(i: usize, d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        s[(shift_index(i, j, d), j)] = ONE;
    }
    s
}

/// Controlled shift `τ = Σ|i⟩⟨i| ⊗ S_i` on `C^d ⊗ C^d`, control first.
/// For composite `d` the shift acts digit-wise over the ascending prime
/// factorisation, so `τ |+⟩|0⟩ = |ψ₊⟩` for every `d`.
pub fn controlled_shift(d: usize) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            t[(i * d + shift_index(i, j, d), i * d + j)] = ONE;
        }
    }
    t
}

/// Unitaries `U_x` on `target_layout`, one per control value.
#[derive(Clone, Debug)]
pub struct TwistingSpec {
    pub control_dim: usize,
    pub unitaries: Vec<ComplexMatrix>,
    pub target_layout: SubsystemLayout,
}

impl TwistingSpec {
    pub fn new(control_dim: usize, unitaries: Vec<ComplexMatrix>, target_layout: SubsystemLayout) -> Result<Self> {
        if unitaries.len() != control_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries for control dimension {control_dim}",
                unitaries.len()
            )));
        }
        let n = target_layout.total_dim();
        for u in &unitaries {
            if u.rows() != n || u.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "twisting unitary is {}x{}, target dimension {n}",
                    u.rows(),
                    u.cols()
                )));
            }
            let dev = u.unitarity_deviation();
            if dev > tolerance::UNITARY {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Self {
            control_dim,
            unitaries,
            target_layout,
        })
    }

    pub fn trivial(control_dim: usize, target_layout: SubsystemLayout) -> Self {
        let n = target_layout.total_dim();
        Self {
            control_dim,
            unitaries: vec![ComplexMatrix::identity(n); control_dim],
            target_layout,
        }
    }

    /// `Σ_x |x⟩⟨x| ⊗ U_x` on control ⊗ target.
    pub fn controlled_unitary(&self) -> ComplexMatrix {
        let n = self.target_layout.total_dim();
        let big = self.control_dim * n;
        let mut u = ComplexMatrix::zeros(big, big);
        for (x, ux) in self.unitaries.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    u[(x * n + r, x * n + c)] = ux[(r, c)];
                }
            }
        }
        u
    }

    fn check_target(&self, sigma: &DensityOperator) -> Result<()> {
        if sigma.layout().dims() != self.target_layout.dims() {
            return Err(Error::DimensionMismatch(format!(
                "shield dims {:?} do not match twisting target {:?}",
                sigma.layout().dims(),
                self.target_layout.dims()
            )));
        }
        Ok(())
    }
}

/// `Σ_{x,y} c_x c̄_y |x⟩⟨y| ⊗ U_x σ U_y†` over the support of `c`.
fn twisted_state(
    control_amps: &[(usize, C64)],
    control_total: usize,
    unitaries: &[&ComplexMatrix],
    sigma: &ComplexMatrix,
) -> ComplexMatrix {
    let n = sigma.rows();
    let left: Vec<ComplexMatrix> = unitaries
        .iter()
        .map(|u| u.matmul(sigma).expect("square"))
        .collect();
    let right: Vec<ComplexMatrix> = unitaries.iter().map(|u| u.dagger()).collect();
    let mut out = ComplexMatrix::zeros(control_total * n, control_total * n);
    for (a, &(x, cx)) in control_amps.iter().enumerate() {
        for (b, &(y, cy)) in control_amps.iter().enumerate() {
            let block = left[a].matmul(&right[b]).expect("square");
            let coef = cx * cy.conj();
            for r in 0..n {
                for c in 0..n {
                    out[(x * n + r, y * n + c)] = coef * block[(r, c)];
                }
            }
        }
    }
    out
}

/// Private state `Σ_{ij} (1/d)|ii⟩⟨jj| ⊗ U_i σ U_j†` on `A B` followed by the
/// shield registers of `sigma`.
pub fn private_state(spec: &TwistingSpec, sigma: &DensityOperator) -> Result<DensityOperator> {
    spec.check_target(sigma)?;
    let d = spec.control_dim;
    check_dim(d, 1)?;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let amps: Vec<(usize, C64)> = (0..d).map(|i| (i * d + i, amp)).collect();
    let us: Vec<&ComplexMatrix> = spec.unitaries.iter().collect();
    let m = twisted_state(&amps, d * d, &us, sigma.matrix());
    let layout = SubsystemLayout::bipartite(d, d).concat(sigma.layout())?;
    Ok(DensityOperator::from_parts_unchecked(m, layout))
}

/// Private state through the single-control form: the controlled unitary
/// `Σ|i⟩⟨i|_A ⊗ I_B ⊗ U_i` applied to `|ψ₊⟩⟨ψ₊| ⊗ σ` by explicit matrix
/// products. Independent of [`private_state`] and used to cross-check it.
pub fn private_state_single_control(spec: &TwistingSpec, sigma: &DensityOperator) -> Result<DensityOperator> {
    spec.check_target(sigma)?;
    let d = spec.control_dim;
    let psi = max_entangled(d)?;
    let input = psi.tensor(sigma)?;
    let ctrl = spec.controlled_unitary();
    // Reorder control ⊗ target into A ⊗ B ⊗ target by inserting I_B.
    let n = spec.target_layout.total_dim();
    let mut big = ComplexMatrix::zeros(d * d * n, d * d * n);
    for a in 0..d {
        for b in 0..d {
            for r in 0..n {
                for c in 0..n {
                    big[((a * d + b) * n + r, (a * d + b) * n + c)] = ctrl[(a * n + r, a * n + c)];
                }
            }
        }
    }
    let m = input.matrix().conjugate_by(&big)?;
    Ok(DensityOperator::from_parts_unchecked(m, input.layout().clone()))
}

/// Independent state `U(|+⟩⟨+|_A ⊗ |+⟩⟨+|_B ⊗ σ)U†` with
/// `U = Σ|ij⟩⟨ij| ⊗ U_{ij}`; `unitaries[i·d_B + j] = U_{ij}`.
pub fn independent_state(
    d_a: usize,
    d_b: usize,
    unitaries: &[ComplexMatrix],
    sigma: &DensityOperator,
) -> Result<DensityOperator> {
    check_dim(d_a, 1)?;
    check_dim(d_b, 1)?;
    let spec = TwistingSpec::new(d_a * d_b, unitaries.to_vec(), sigma.layout().clone())?;
    spec.check_target(sigma)?;
    let total = d_a * d_b;
    let amp = C64::new(1.0 / (total as f64).sqrt(), 0.0);
    let amps: Vec<(usize, C64)> = (0..total).map(|x| (x, amp)).collect();
    let us: Vec<&ComplexMatrix> = spec.unitaries.iter().collect();
    let m = twisted_state(&amps, total, &us, sigma.matrix());
    let layout = SubsystemLayout::bipartite(d_a, d_b).concat(sigma.layout())?;
    Ok(DensityOperator::from_parts_unchecked(m, layout))
}

/// Local idit with the control on register `A`: `Σ (1/d)|i⟩⟨j| ⊗ U_i σ U_j†`.
pub fn local_idit(spec: &TwistingSpec, sigma: &DensityOperator) -> Result<DensityOperator> {
    local_idit_at(Register::new("A", spec.control_dim, Party::A), spec, sigma)
}

/// Local idit with an explicitly named control register.
pub fn local_idit_at(control: Register, spec: &TwistingSpec, sigma: &DensityOperator) -> Result<DensityOperator> {
    spec.check_target(sigma)?;
    if control.dim != spec.control_dim {
        return Err(Error::DimensionMismatch(format!(
            "control register has dimension {}, twisting expects {}",
            control.dim, spec.control_dim
        )));
    }
    let d = spec.control_dim;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let amps: Vec<(usize, C64)> = (0..d).map(|x| (x, amp)).collect();
    let us: Vec<&ComplexMatrix> = spec.unitaries.iter().collect();
    let m = twisted_state(&amps, d, &us, sigma.matrix());
    let layout = SubsystemLayout::new(vec![control])?.concat(sigma.layout())?;
    Ok(DensityOperator::from_parts_unchecked(m, layout))
}

/// A local idit together with the data it was built from.
#[derive(Clone, Debug)]
pub struct LocalIdit {
    pub control: String,
    pub spec: TwistingSpec,
    pub sigma: DensityOperator,
    pub state: DensityOperator,
}

impl LocalIdit {
    /// The state with registers reordered as `A, B, A', B', ...`, the order
    /// used by [`private_state`].
    pub fn in_private_order(&self) -> Result<DensityOperator> {
        let mut order: Vec<String> = vec!["A".into(), "B".into()];
        order.extend(
            self.state
                .layout()
                .labels()
                .into_iter()
                .filter(|l| *l != "A" && *l != "B")
                .map(String::from),
        );
        self.state.permute_registers(&order)
    }
}

/// Rewrites a private state as a local idit whose random dit sits on the
/// control party: the singlet is produced by the controlled shift from
/// `|+⟩` on the control and `|0⟩` on the other side, and the twisting
/// becomes `W_i = S_i ⊗ U_i` on (other side, shield).
pub fn private_to_independent(
    spec: &TwistingSpec,
    sigma: &DensityOperator,
    control_party: Party,
) -> Result<LocalIdit> {
    spec.check_target(sigma)?;
    let d = spec.control_dim;
    check_dim(d, 1)?;
    let (control, other) = match control_party {
        Party::A => (Register::new("A", d, Party::A), Register::new("B", d, Party::B)),
        Party::B => (Register::new("B", d, Party::B), Register::new("A", d, Party::A)),
        p => {
            return Err(Error::InvalidParameter(format!(
                "random dit must sit at A or B, not {p}"
            )))
        }
    };
    let mut zero = vec![ZERO; d];
    zero[0] = ONE;
    let zero_state = DensityOperator::from_parts_unchecked(
        ComplexMatrix::projector(&zero),
        SubsystemLayout::new(vec![other])?,
    );
    let shield = zero_state.tensor(sigma)?;
    let unitaries: Vec<ComplexMatrix> = (0..d)
        .map(|i| shift_operator(i, d).kron(&spec.unitaries[i]))
        .collect();
    let w = TwistingSpec::new(d, unitaries, shield.layout().clone())?;
    let state = local_idit_at(control.clone(), &w, &shield)?;
    Ok(LocalIdit {
        control: control.label,
        spec: w,
        sigma: shield,
        state,
    })
}

/// `(1−p)ρ + p (I/d_c ⊗ Tr_c ρ)` where `c` is the named register: the
/// register is depolarised while the rest is left as is.
pub fn depolarize_register(rho: &DensityOperator, register: &str, p: f64) -> Result<DensityOperator> {
    let reg = rho.layout().register(register)?.clone();
    let rest = rho.partial_trace(&[register])?;
    let noise = DensityOperator::maximally_mixed(SubsystemLayout::new(vec![reg])?);
    let noisy = noise.tensor(&rest)?.permute_registers(&rho.layout().labels())?;
    rho.mix(&noisy, p)
}

/// Computational-basis projector onto `|k⟩` as a state on one register.
pub fn basis_state(label: &str, d: usize, party: Party, k: usize) -> Result<DensityOperator> {
    if k >= d {
        return Err(Error::InvalidParameter(format!("basis index {k} out of range for dimension {d}")));
    }
    let v = ops::basis_vector(d, k);
    Ok(DensityOperator::from_parts_unchecked(
        ComplexMatrix::projector(&v),
        SubsystemLayout::single(label, d, party),
    ))
}
