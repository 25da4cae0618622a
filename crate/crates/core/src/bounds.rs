//! Upper bounds on repeated private randomness and finite-copy witnesses.
//!
//! The asymptotic rates themselves are suprema over unbounded protocol
//! families and are never computed. Every report says whether its value
//! is an upper bound or a witness, and lists the hypotheses it checked.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::clodcc::{apply, untwist_and_measure, ProtocolCircuit};
use crate::densop::{ops, trace_norm, ComplexMatrix, DensityOperator, Party, Register, SubsystemLayout};
use crate::ensembles::{local_idit, TwistingSpec};
use crate::entropic::{
    binary_entropy, classical_relative_entropy, eta_raw, global_purity, global_purity_matrix,
    mutual_information_matrix, relative_entropy_matrix,
};
use crate::error::{Error, Result};
use crate::format::{json_f64, round_json};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    #[serde(rename = "upper bound")]
    UpperBound,
    #[serde(rename = "witness")]
    Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideCondition {
    pub name: String,
    pub satisfied: bool,
    pub value: Option<f64>,
}

impl SideCondition {
    pub fn new(name: impl Into<String>, satisfied: bool, value: Option<f64>) -> Self {
        Self {
            name: name.into(),
            satisfied,
            value,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub formula_id: String,
    pub inputs: BTreeMap<String, Value>,
    pub value: f64,
    pub side_conditions: Vec<SideCondition>,
    pub provenance: String,
    pub kind: BoundKind,
}

impl BoundReport {
    fn new(formula_id: &str, kind: BoundKind, provenance: &str, value: f64) -> Self {
        Self {
            formula_id: formula_id.to_string(),
            inputs: BTreeMap::new(),
            value,
            side_conditions: Vec::new(),
            provenance: provenance.to_string(),
            kind,
        }
    }

    fn input(mut self, key: &str, v: Value) -> Self {
        self.inputs.insert(key.to_string(), v);
        self
    }

    fn condition(mut self, c: SideCondition) -> Self {
        self.side_conditions.push(c);
        self
    }

    /// All recorded hypotheses hold.
    pub fn applicable(&self) -> bool {
        self.side_conditions.iter().all(|c| c.satisfied)
    }

    /// JSON with floats at 12 significant digits and `"inf"` for infinity.
    pub fn to_json(&self) -> Value {
        let conds: Vec<Value> = self
            .side_conditions
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "satisfied": c.satisfied,
                    "value": c.value.map(json_f64),
                })
            })
            .collect();
        json!({
            "formula_id": self.formula_id,
            "inputs": round_json(serde_json::to_value(&self.inputs).expect("map of values")),
            "value": json_f64(self.value),
            "side_conditions": conds,
            "provenance": self.provenance,
            "kind": self.kind,
            "applicable": self.applicable(),
        })
    }
}

/// Canonical formula identifiers, with the accepted aliases.
pub const FORMULAS: [&str; 8] = [
    "ppt-repeater",
    "purity-form",
    "mi-form",
    "transposed-rate",
    "iid-norm",
    "iid-entropy",
    "alpha-iid",
    "gap",
];

pub fn canonical_formula(id: &str) -> Option<&'static str> {
    FORMULAS.iter().find(|name| **name == id).copied()
}

fn ppt_condition(name: &str, rho: &DensityOperator) -> Result<SideCondition> {
    let r = rho.is_ppt(&rho.layout().default_cut())?;
    Ok(SideCondition::new(name, r.ppt, Some(r.min_eigenvalue)))
}

fn gamma(rho: &DensityOperator) -> Result<ComplexMatrix> {
    rho.partial_transpose_default()
}

fn dims_json(rho: &DensityOperator) -> Value {
    json!(rho.layout().dims())
}

/// `D(ρ^Γ ‖ 𝟙/D)` with the partial transpose on the default cut.
pub fn transposed_relative_entropy(rho: &DensityOperator) -> Result<f64> {
    let g = gamma(rho)?;
    relative_entropy_matrix(&g, &ops::maximally_mixed_matrix(rho.dim()))
}

/// `D(ρ^Γ‖𝟙/|AC₁|) + D(ρ̃^Γ‖𝟙/|C₂B|)`, an upper bound on repeated
/// randomness when both inputs are PPT.
pub fn ppt_repeater_bound(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<BoundReport> {
    let value = transposed_relative_entropy(rho)? + transposed_relative_entropy(rho_tilde)?;
    Ok(BoundReport::new(
        "ppt-repeater",
        BoundKind::UpperBound,
        "sum of relative entropies of the partially transposed inputs to the maximally mixed state; valid for PPT inputs",
        value,
    )
    .input("dims", dims_json(rho))
    .input("dims_tilde", dims_json(rho_tilde))
    .condition(ppt_condition("ppt(rho)", rho)?)
    .condition(ppt_condition("ppt(rho_tilde)", rho_tilde)?))
}

/// `G(ρ^Γ) + G(ρ̃^Γ)` with `G = log dim − S`.
pub fn purity_form_bound(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<BoundReport> {
    let value = global_purity_matrix(&gamma(rho)?)? + global_purity_matrix(&gamma(rho_tilde)?)?;
    Ok(BoundReport::new(
        "purity-form",
        BoundKind::UpperBound,
        "sum of global purities of the partially transposed inputs; valid for PPT inputs",
        value,
    )
    .input("dims", dims_json(rho))
    .input("dims_tilde", dims_json(rho_tilde))
    .condition(ppt_condition("ppt(rho)", rho)?)
    .condition(ppt_condition("ppt(rho_tilde)", rho_tilde)?))
}

/// `G(ρ^Γ)` of a single, possibly composite, input.
pub fn transposed_purity(rho: &DensityOperator) -> Result<f64> {
    global_purity_matrix(&gamma(rho)?)
}

fn marginals_condition(rho: &DensityOperator) -> Result<SideCondition> {
    let cut = rho.layout().default_cut();
    let rest = rho.layout().complement(&cut);
    let a = rho.marginal(&rest)?;
    let b = rho.marginal(&cut)?;
    let dev = ops::deviation_from_maximally_mixed(a.matrix()).max(ops::deviation_from_maximally_mixed(b.matrix()));
    Ok(SideCondition::new(
        "maximally mixed marginals",
        dev <= tolerance::MAXIMALLY_MIXED,
        Some(dev),
    ))
}

/// `2 I(A:B)_{ρ^Γ}` for two copies of the same input. Equals the PPT
/// repeater bound when both marginals are maximally mixed.
pub fn mi_form_bound(rho: &DensityOperator) -> Result<BoundReport> {
    let g = gamma(rho)?;
    let value = 2.0 * mutual_information_matrix(&g, rho.layout(), &rho.layout().default_cut())?;
    Ok(BoundReport::new(
        "mi-form",
        BoundKind::UpperBound,
        "twice the mutual information of the partial transpose; equals the PPT repeater bound for two copies of a state with maximally mixed marginals",
        value,
    )
    .input("dims", dims_json(rho))
    .condition(ppt_condition("ppt(rho)", rho)?)
    .condition(marginals_condition(rho)?))
}

/// Strict comparison `I(A:B)_ρ > 2 I(A:B)_{ρ^Γ}`.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub side_conditions: Vec<SideCondition>,
}

pub fn gap_condition(rho: &DensityOperator) -> Result<GapReport> {
    let cut = rho.layout().default_cut();
    let lhs = mutual_information_matrix(rho.matrix(), rho.layout(), &cut)?;
    let rhs = 2.0 * mutual_information_matrix(&gamma(rho)?, rho.layout(), &cut)?;
    let margin = lhs - rhs;
    Ok(GapReport {
        holds: margin > tolerance::STRICT_MARGIN,
        lhs,
        rhs,
        margin,
        side_conditions: vec![marginals_condition(rho)?, ppt_condition("ppt(rho)", rho)?],
    })
}

/// Gap condition as a report; the value is the margin `lhs − rhs`.
pub fn gap_report(rho: &DensityOperator) -> Result<BoundReport> {
    let g = gap_condition(rho)?;
    let mut r = BoundReport::new(
        "gap",
        BoundKind::Witness,
        "margin between the mutual information and twice the mutual information of the partial transpose; positive margin certifies randomness beyond the PPT repeater bound",
        g.margin,
    )
    .input("dims", dims_json(rho))
    .input("lhs", json!(g.lhs))
    .input("rhs", json!(g.rhs))
    .input("holds", json!(g.holds));
    r.side_conditions = g.side_conditions;
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishabilityCheck {
    /// `D(M(ρ) ‖ M(𝟙/D))`
    pub lhs: f64,
    /// `D(ρ^Γ ‖ 𝟙/D)`
    pub rhs: f64,
    pub pass: bool,
}

/// A measurement realised by a circuit followed by computational-basis
/// readout of `readout` can distinguish a PPT state from noise no better
/// than its partial transpose is distinguishable from noise.
pub fn single_copy_distinguishability_check<S: AsRef<str>>(
    rho: &DensityOperator,
    circuit: &ProtocolCircuit,
    readout: &[S],
) -> Result<DistinguishabilityCheck> {
    let ppt = rho.is_ppt(&rho.layout().default_cut())?;
    if !ppt.ppt {
        return Err(Error::Hypothesis(format!(
            "input is not PPT (min eigenvalue of the partial transpose {:.3e})",
            ppt.min_eigenvalue
        )));
    }
    let out = apply(circuit, rho)?.state;
    let noise = apply(circuit, &DensityOperator::maximally_mixed(rho.layout().clone()))?.state;
    let p = ops::readout_distribution(out.matrix(), out.layout(), readout)?;
    let q = ops::readout_distribution(noise.matrix(), noise.layout(), readout)?;
    let lhs = classical_relative_entropy(&p, &q)?;
    let rhs = transposed_relative_entropy(rho)?;
    Ok(DistinguishabilityCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + tolerance::SPECTRUM_RESIDUAL,
    })
}

/// `‖ρ^Γ − 𝟙/D‖₁` on the default cut.
pub fn transposed_noise_distance(rho: &DensityOperator) -> Result<f64> {
    let g = gamma(rho)?;
    trace_norm(&(&g - &ops::maximally_mixed_matrix(rho.dim())))
}

/// `‖ρ^Γ − 𝟙/|AC₁|‖₁ + ‖ρ̃^Γ − 𝟙/|C₂B|‖₁`, bounding the distance of any
/// repeater output from noise.
pub fn iid_norm_bound(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<f64> {
    Ok(transposed_noise_distance(rho)? + transposed_noise_distance(rho_tilde)?)
}

pub fn iid_norm_report(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<BoundReport> {
    let a = transposed_noise_distance(rho)?;
    let b = transposed_noise_distance(rho_tilde)?;
    Ok(BoundReport::new(
        "iid-norm",
        BoundKind::UpperBound,
        "sum of trace distances of the partially transposed inputs from the maximally mixed state; bounds the output distance from noise",
        a + b,
    )
    .input("dims", dims_json(rho))
    .input("dims_tilde", dims_json(rho_tilde))
    .input("norm", json!(a))
    .input("norm_tilde", json!(b)))
}

const INV_E: f64 = 1.0 / std::f64::consts::E;

/// `2n·log₂ d + η(2n)` with `n = ‖ρ^Γ − 𝟙/D‖₁`; `local_dim` is `d`.
pub fn iid_entropy_bound(rho: &DensityOperator, local_dim: usize) -> Result<BoundReport> {
    let n = transposed_noise_distance(rho)?;
    let x = 2.0 * n;
    let value = x * (local_dim as f64).log2() + eta_raw(x);
    Ok(BoundReport::new(
        "iid-entropy",
        BoundKind::UpperBound,
        "continuity bound on the global purity of any output of two copies, from the distance of the partial transpose to noise",
        value,
    )
    .input("dims", dims_json(rho))
    .input("local_dim", json!(local_dim))
    .input("norm", json!(n))
    .condition(SideCondition::new("norm <= 1/e", n <= INV_E, Some(n)))
    .condition(SideCondition::new("2*norm <= 1/e", x <= INV_E, Some(x))))
}

/// `4 log₂ d / d + η(4/d)`.
pub fn alpha_iid_bound(d: usize) -> f64 {
    let d = d as f64;
    4.0 * d.log2() / d + eta_raw(4.0 / d)
}

pub fn alpha_iid_report(d: usize) -> BoundReport {
    BoundReport::new(
        "alpha-iid",
        BoundKind::UpperBound,
        "bound on i.i.d. repeated randomness of the swap-twisted ibit family; below one exactly when d > 32",
        alpha_iid_bound(d),
    )
    .input("d", json!(d))
    .condition(SideCondition::new("d > 11", d > 11, None))
}

#[derive(Clone, Debug, Serialize)]
pub struct IidLimitationCheck {
    pub purity: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `ρ_{AC₁} ⊗ ρ̃_{C₂B}` on registers `A, C1, C2, B`.
pub fn repeater_input(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<DensityOperator> {
    let two = |r: &DensityOperator| -> Result<(usize, usize)> {
        match r.layout().dims()[..] {
            [a, b] => Ok((a, b)),
            _ => Err(Error::DimensionMismatch(format!(
                "repeater inputs must have two registers, got {:?}",
                r.layout().dims()
            ))),
        }
    };
    let (a, c1) = two(rho)?;
    let (c2, b) = two(rho_tilde)?;
    let left = rho.relabel(SubsystemLayout::new(vec![
        Register::new("A", a, Party::A),
        Register::new("C1", c1, Party::C),
    ])?)?;
    let right = rho_tilde.relabel(SubsystemLayout::new(vec![
        Register::new("C2", c2, Party::C),
        Register::new("B", b, Party::B),
    ])?)?;
    left.tensor(&right)
}

/// Runs `circuit` on `ρ ⊗ ρ`, discards whatever C holds at the end and
/// compares the global purity of the rest with [`iid_entropy_bound`].
pub fn iid_limitation_check(rho: &DensityOperator, circuit: &ProtocolCircuit) -> Result<IidLimitationCheck> {
    let dims = rho.layout().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(format!("expected a d x d state, got {dims:?}")));
    }
    let bound = iid_entropy_bound(rho, dims[0])?;
    let norm = bound.inputs["norm"].as_f64().expect("norm recorded");
    if norm > INV_E {
        return Err(Error::Hypothesis(format!(
            "distance of the partial transpose from noise is {norm:.6}, above 1/e"
        )));
    }
    let input = repeater_input(rho, rho)?;
    let out = apply(circuit, &input)?.state;
    let held_by_c = out.layout().owned_by(Party::C);
    let ab = if held_by_c.is_empty() {
        out
    } else {
        out.partial_trace(&held_by_c)?
    };
    let purity = global_purity(&ab)?;
    Ok(IidLimitationCheck {
        purity,
        bound: bound.value,
        pass: purity.abs() <= bound.value + tolerance::SPECTRUM_RESIDUAL,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IbitWitnessCheck {
    pub witness: f64,
    pub bound: f64,
    /// `‖ρ − α_m‖₁` to the closest ideal ibit with the same twisting.
    pub distance: f64,
    pub pass: bool,
}

/// The ideal local ibit sharing `spec` whose shield is the untwisted
/// shield of `state`.
pub fn ideal_ibit(state: &DensityOperator, spec: &TwistingSpec) -> Result<DensityOperator> {
    let labels = state.layout().labels();
    let untwisted = ops::apply_local_unitary(state.matrix(), state.layout(), &labels, &spec.controlled_unitary().dagger())?;
    let (shield, shield_layout) = ops::partial_trace(&untwisted, state.layout(), &[labels[0]])?;
    let sigma = DensityOperator::from_parts_unchecked(shield, shield_layout).relabel(spec.target_layout.clone())?;
    local_idit(spec, &sigma)
}

/// `‖ρ − ideal_ibit(ρ)‖₁`.
pub fn ideal_ibit_distance(state: &DensityOperator, spec: &TwistingSpec) -> Result<f64> {
    let ideal = ideal_ibit(state, spec)?;
    trace_norm(&(state.matrix() - ideal.matrix()))
}

/// Lower bound `(1−ε)m − h(ε)` on the distinguishability of an
/// `ε`-approximate local idit from noise, witnessed by untwisting and a
/// Fourier measurement. The ideal reference shares the twisting and uses
/// the untwisted shield of `state`.
pub fn ibit_witness_bound(state: &DensityOperator, spec: &TwistingSpec, m: u32, epsilon: f64) -> Result<IbitWitnessCheck> {
    let outcome = untwist_and_measure(state, spec, m)?;
    let distance = ideal_ibit_distance(state, spec)?;
    if distance > epsilon + tolerance::EQUALITY {
        return Err(Error::Hypothesis(format!(
            "state is {distance:.6} from the ideal ibit, declared epsilon {epsilon}"
        )));
    }
    let bound = (1.0 - epsilon) * m as f64 - binary_entropy(epsilon)?;
    Ok(IbitWitnessCheck {
        witness: outcome.relative_entropy,
        bound,
        distance,
        pass: outcome.relative_entropy >= bound - tolerance::SPECTRUM_RESIDUAL,
    })
}

/// `G(ρ^Γ ⊗ ρ̃^Γ)` evaluated on the actual tensor product; for PPT inputs it
/// bounds the repeated randomness of `ρ ⊗ ρ̃`.
pub fn ppt_transposed_rate_bound(rho: &DensityOperator, rho_tilde: &DensityOperator) -> Result<BoundReport> {
    let c1 = ppt_condition("ppt(rho)", rho)?;
    let c2 = ppt_condition("ppt(rho_tilde)", rho_tilde)?;
    if !c1.satisfied || !c2.satisfied {
        return Err(Error::Hypothesis("both inputs must be PPT".into()));
    }
    let pair = repeater_input(rho, rho_tilde)?;
    let g = pair.partial_transpose(&["C1", "B"])?;
    let value = global_purity_matrix(&g)?;
    let reference = ppt_repeater_bound(rho, rho_tilde)?.value;
    if (value - reference).abs() > tolerance::EQUALITY {
        return Err(Error::Hypothesis(format!(
            "tensor evaluation {value} disagrees with the summed relative entropies {reference}"
        )));
    }
    Ok(BoundReport::new(
        "transposed-rate",
        BoundKind::UpperBound,
        "global purity of the tensor product of partial transposes; for PPT inputs the repeated randomness is at most this value",
        value,
    )
    .input("dims", dims_json(rho))
    .input("dims_tilde", dims_json(rho_tilde))
    .input("ppt_repeater_value", json!(reference))
    .condition(c1)
    .condition(c2))
}
