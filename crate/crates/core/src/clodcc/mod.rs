//! Closed local operations and dephasing-channel communication.
//!
//! A circuit is a list of local unitaries, local dephasings and sends. A
//! send pinches the register in the computational basis and hands it to
//! another party; nothing is ever traced out, so every circuit is a unital
//! channel on the full layout. When Eve's record is requested, the state is
//! split into classical branches at every send, which keeps her joint
//! outcome distribution exact.

mod protocols;
mod script;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::densop::{ops, ComplexMatrix, DensityOperator, Party, SubsystemLayout};
use crate::entropic::shannon_entropy;
use crate::error::{Error, Result};
use crate::tolerance;

pub use protocols::{
    dephase_via_relay, entanglement_swap, fourier_matrix, random_circuit, swap_circuit, swap_input,
    untwist_and_measure, SwapOutcome, UntwistOutcome,
};
pub use script::{load_script, parse_matrix, parse_script, read_matrix_file, write_matrix};

#[derive(Clone, Debug)]
pub enum ProtocolStep {
    Unitary {
        party: Party,
        targets: Vec<String>,
        matrix: ComplexMatrix,
    },
    Dephase {
        register: String,
    },
    Send {
        register: String,
        from: Party,
        to: Party,
    },
}

#[derive(Clone, Debug)]
pub struct ProtocolCircuit {
    pub layout: SubsystemLayout,
    pub steps: Vec<ProtocolStep>,
    pub record_eve: bool,
}

impl ProtocolCircuit {
    pub fn new(layout: SubsystemLayout) -> Self {
        Self {
            layout,
            steps: Vec::new(),
            record_eve: false,
        }
    }

    pub fn with_eve(mut self) -> Self {
        self.record_eve = true;
        self
    }

    pub fn unitary<S: AsRef<str>>(mut self, party: Party, targets: &[S], matrix: ComplexMatrix) -> Self {
        self.steps.push(ProtocolStep::Unitary {
            party,
            targets: targets.iter().map(|s| s.as_ref().to_string()).collect(),
            matrix,
        });
        self
    }

    pub fn dephase(mut self, register: &str) -> Self {
        self.steps.push(ProtocolStep::Dephase {
            register: register.to_string(),
        });
        self
    }

    pub fn send(mut self, register: &str, from: Party, to: Party) -> Self {
        self.steps.push(ProtocolStep::Send {
            register: register.to_string(),
            from,
            to,
        });
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// How parties are grouped when checking locality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartyMap {
    /// A, B and C are separate laboratories.
    Fine,
    /// A and B act as one laboratory. A send between them is then a
    /// dephasing realised by relaying through C.
    MergeAB,
}

impl PartyMap {
    fn lab(self, p: Party) -> Party {
        match (self, p) {
            (PartyMap::MergeAB, Party::B) => Party::A,
            _ => p,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SendRecord {
    pub register: String,
    pub from: Party,
    pub to: Party,
    pub dim: usize,
}

/// Eve's classical copies of every transmitted register.
#[derive(Clone, Debug, Serialize)]
pub struct EveLedger {
    pub sends: Vec<SendRecord>,
    /// Joint outcome distribution, keyed by the sequence of sent values.
    pub distribution: Vec<(Vec<usize>, f64)>,
}

impl EveLedger {
    pub fn entropy(&self) -> f64 {
        let p: Vec<f64> = self.distribution.iter().map(|(_, p)| *p).collect();
        shannon_entropy(&p)
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    pub state: DensityOperator,
    pub eve: Option<EveLedger>,
}

struct Branch {
    record: Vec<usize>,
    matrix: ComplexMatrix,
}

/// Branches lighter than this are dropped from Eve's ledger.
const BRANCH_FLOOR: f64 = 1e-15;

pub fn apply(circuit: &ProtocolCircuit, rho: &DensityOperator) -> Result<ProtocolOutcome> {
    apply_with(circuit, rho, PartyMap::Fine)
}

/// Runs the circuit under the given party grouping. The output layout
/// carries the final register ownership.
pub fn apply_with(circuit: &ProtocolCircuit, rho: &DensityOperator, map: PartyMap) -> Result<ProtocolOutcome> {
    if rho.layout().dims() != circuit.layout.dims() || rho.layout().labels() != circuit.layout.labels() {
        return Err(Error::DimensionMismatch(format!(
            "circuit layout {:?} does not match state layout {:?}",
            circuit.layout.labels(),
            rho.layout().labels()
        )));
    }
    let mut layout = circuit.layout.clone();
    let mut branches = vec![Branch {
        record: Vec::new(),
        matrix: rho.matrix().clone(),
    }];
    let mut sends = Vec::new();

    for (k, step) in circuit.steps.iter().enumerate() {
        match step {
            ProtocolStep::Unitary { party, targets, matrix } => {
                if targets.is_empty() {
                    return Err(Error::Protocol(format!("step {k}: unitary without targets")));
                }
                layout.resolve(targets)?;
                for t in targets {
                    let owner = layout.register(t)?.party;
                    if map.lab(owner) != map.lab(*party) {
                        return Err(Error::Protocol(format!(
                            "step {k}: party {party} applies a unitary to `{t}`, which is held by {owner}"
                        )));
                    }
                }
                let dev = matrix.unitarity_deviation();
                if dev > tolerance::UNITARY {
                    return Err(Error::NotUnitary(dev));
                }
                for b in branches.iter_mut() {
                    b.matrix = ops::apply_local_unitary(&b.matrix, &layout, targets, matrix)?;
                }
            }
            ProtocolStep::Dephase { register } => {
                layout.index_of(register)?;
                for b in branches.iter_mut() {
                    b.matrix = ops::pinch(&b.matrix, &layout, register)?;
                }
            }
            ProtocolStep::Send { register, from, to } => {
                let reg = layout.register(register)?.clone();
                if from == to {
                    return Err(Error::Protocol(format!("step {k}: party {from} sends `{register}` to itself")));
                }
                if map.lab(reg.party) != map.lab(*from) {
                    return Err(Error::Protocol(format!(
                        "step {k}: {from} sends `{register}`, which is held by {}",
                        reg.party
                    )));
                }
                if circuit.record_eve {
                    let mut next = Vec::with_capacity(branches.len() * reg.dim);
                    for b in &branches {
                        for outcome in 0..reg.dim {
                            let m = ops::project(&b.matrix, &layout, register, outcome)?;
                            if m.trace().re > BRANCH_FLOOR {
                                let mut record = b.record.clone();
                                record.push(outcome);
                                next.push(Branch { record, matrix: m });
                            }
                        }
                    }
                    branches = next;
                } else {
                    for b in branches.iter_mut() {
                        b.matrix = ops::pinch(&b.matrix, &layout, register)?;
                    }
                }
                sends.push(SendRecord {
                    register: register.clone(),
                    from: *from,
                    to: *to,
                    dim: reg.dim,
                });
                layout = layout.with_party(register, *to)?;
            }
        }
    }

    let n = layout.total_dim();
    let mut total = ComplexMatrix::zeros(n, n);
    for b in &branches {
        total = &total + &b.matrix;
    }
    let eve = circuit.record_eve.then(|| {
        let mut dist: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for b in &branches {
            *dist.entry(b.record.clone()).or_insert(0.0) += b.matrix.trace().re;
        }
        EveLedger {
            sends,
            distribution: dist.into_iter().collect(),
        }
    });
    Ok(ProtocolOutcome {
        state: DensityOperator::from_parts_unchecked(total, layout),
        eve,
    })
}

/// Pinching of one register, as a state-level operation.
pub fn dephase(rho: &DensityOperator, register: &str) -> Result<DensityOperator> {
    let m = ops::pinch(rho.matrix(), rho.layout(), register)?;
    Ok(DensityOperator::from_parts_unchecked(m, rho.layout().clone()))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct UnitalityReport {
    pub deviation: f64,
    pub pass: bool,
}

/// Runs the circuit on `𝟙/D` and measures the largest entry deviation of
/// the output from `𝟙/D`.
pub fn verify_unital(circuit: &ProtocolCircuit) -> Result<UnitalityReport> {
    let mm = DensityOperator::maximally_mixed(circuit.layout.clone());
    let out = apply(circuit, &mm)?;
    let deviation = ops::deviation_from_maximally_mixed(out.state.matrix());
    Ok(UnitalityReport {
        deviation,
        pass: deviation <= tolerance::EQUALITY,
    })
}

/// The same check for an arbitrary map on matrices. Used with channels
/// that are deliberately outside the operation class.
pub fn verify_channel_unital(
    layout: &SubsystemLayout,
    channel: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
) -> Result<UnitalityReport> {
    let mm = ops::maximally_mixed_matrix(layout.total_dim());
    let out = channel(&mm)?;
    if out.rows() != mm.rows() || out.cols() != mm.cols() {
        return Err(Error::DimensionMismatch("channel changed the dimension".into()));
    }
    let deviation = out.max_abs_diff(&mm);
    Ok(UnitalityReport {
        deviation,
        pass: deviation <= tolerance::EQUALITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densop::{Register, C64};
    use crate::random::{random_density, random_unitary, rng_for};

    fn abc() -> SubsystemLayout {
        SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("C", 2, Party::C),
            Register::new("B", 2, Party::B),
        ])
        .unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let mut rng = rng_for(1, 0);
        let rho = random_density(abc(), &mut rng);
        let out = apply(&ProtocolCircuit::new(abc()), &rho).unwrap();
        assert_eq!(out.state.matrix(), rho.matrix());
    }

    #[test]
    fn dephase_examples() {
        let plus = crate::ensembles::plus_state(2).unwrap();
        let d = dephase(&plus, "A").unwrap();
        assert!(ops::deviation_from_maximally_mixed(d.matrix()) < 1e-15);
        let diag = DensityOperator::new(ComplexMatrix::diagonal(&[0.3, 0.7]), plus.layout().clone()).unwrap();
        assert_eq!(dephase(&diag, "A").unwrap().matrix(), diag.matrix());
        let mut rng = rng_for(2, 0);
        for _ in 0..20 {
            let rho = random_density(abc(), &mut rng);
            let once = dephase(&rho, "C").unwrap();
            let twice = dephase(&once, "C").unwrap();
            assert!(once.matrix().max_abs_diff(twice.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn cross_party_unitary_rejected() {
        let mut rng = rng_for(3, 0);
        let u = random_unitary(4, &mut rng);
        let c = ProtocolCircuit::new(abc()).unitary(Party::A, &["A", "C"], u.clone());
        let rho = DensityOperator::maximally_mixed(abc());
        assert!(matches!(apply(&c, &rho), Err(Error::Protocol(_))));
        // allowed once C has been sent to A
        let c = ProtocolCircuit::new(abc())
            .send("C", Party::C, Party::A)
            .unitary(Party::A, &["A", "C"], u);
        let out = apply(&c, &rho).unwrap();
        assert_eq!(out.state.layout().register("C").unwrap().party, Party::A);
    }

    #[test]
    fn send_checks_ownership_and_self_sends() {
        let rho = DensityOperator::maximally_mixed(abc());
        let wrong_owner = ProtocolCircuit::new(abc()).send("A", Party::B, Party::C);
        assert!(apply(&wrong_owner, &rho).is_err());
        let self_send = ProtocolCircuit::new(abc()).send("A", Party::A, Party::A);
        assert!(apply(&self_send, &rho).is_err());
        let non_unitary = ProtocolCircuit::new(abc()).unitary(Party::A, &["A"], ComplexMatrix::diagonal(&[1.0, 0.5]));
        assert!(matches!(apply(&non_unitary, &rho), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn eve_ledger_matches_readout() {
        let mut rng = rng_for(4, 0);
        let rho = random_density(abc(), &mut rng);
        let c = ProtocolCircuit::new(abc()).send("C", Party::C, Party::B).with_eve();
        let out = apply(&c, &rho).unwrap();
        let eve = out.eve.unwrap();
        let p = ops::readout_distribution(rho.matrix(), rho.layout(), &["C"]).unwrap();
        assert_eq!(eve.distribution.len(), 2);
        for ((rec, q), pk) in eve.distribution.iter().zip(&p) {
            assert_eq!(rec.len(), 1);
            assert!((q - pk).abs() < 1e-14);
        }
        let plain = apply(&ProtocolCircuit::new(abc()).send("C", Party::C, Party::B), &rho).unwrap();
        assert!(plain.state.matrix().max_abs_diff(out.state.matrix()) < 1e-15);
    }

    #[test]
    fn non_unital_channel_detected() {
        let l = abc();
        let amplitude_damp = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            // |1⟩ → |0⟩ on the first register
            let n = m.rows();
            let half = n / 2;
            let mut out = m.clone();
            for i in 0..half {
                for j in 0..half {
                    out[(i, j)] += m[(i + half, j + half)];
                    out[(i + half, j + half)] = C64::new(0.0, 0.0);
                }
            }
            Ok(out)
        };
        let rep = verify_channel_unital(&l, amplitude_damp).unwrap();
        assert!(!rep.pass);
        let dephase_only = verify_unital(&ProtocolCircuit::new(l).dephase("B")).unwrap();
        assert!(dephase_only.pass);
    }
}
