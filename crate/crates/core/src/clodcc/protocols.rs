use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{apply, EveLedger, ProtocolCircuit, ProtocolStep};
use crate::densop::{ops, ComplexMatrix, DensityOperator, Party, Register, SubsystemLayout, C64};
use crate::ensembles::{max_entangled, max_entangled_vector, TwistingSpec};
use crate::entropic::classical_relative_entropy;
use crate::error::{Error, Result};
use crate::random::random_unitary;

/// `F_{jk} = ω^{jk}/√d`; its first column is `|+⟩`.
pub fn fourier_matrix(d: usize) -> ComplexMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| C64::from_polar(norm, 2.0 * PI * (j * k) as f64 / d as f64))
}

fn swap_layout() -> SubsystemLayout {
    SubsystemLayout::new(vec![
        Register::new("A", 2, Party::A),
        Register::new("C1", 2, Party::C),
        Register::new("C2", 2, Party::C),
        Register::new("B", 2, Party::B),
    ])
    .expect("distinct labels")
}

/// `|ψ₊⟩_{A C1} ⊗ |ψ₊⟩_{C2 B}` on qubits.
pub fn swap_input() -> DensityOperator {
    let psi = ComplexMatrix::projector(&max_entangled_vector(2));
    DensityOperator::from_parts_unchecked(psi.kron(&psi), swap_layout())
}

fn bell_measurement_unitary() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    let had = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2");
    let cnot = crate::ensembles::controlled_shift(2);
    &had.kron(&ComplexMatrix::identity(2)) * &cnot
}

/// `Σ_{mn} |mn⟩⟨mn| ⊗ Z^m X^n` on (C1, C2, B).
fn pauli_correction() -> ComplexMatrix {
    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2");
    let z = ComplexMatrix::diagonal(&[1.0, -1.0]);
    let id = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(8, 8);
    for m in 0..2 {
        for n in 0..2 {
            let zm = if m == 1 { &z } else { &id };
            let xn = if n == 1 { &x } else { &id };
            let block = zm * xn;
            let off = (m * 2 + n) * 2;
            for r in 0..2 {
                for c in 0..2 {
                    out[(off + r, off + c)] = block[(r, c)];
                }
            }
        }
    }
    out
}

/// Bell measurement at C, both outcomes sent to B, Pauli correction at B.
pub fn swap_circuit(with_correction: bool) -> ProtocolCircuit {
    let c = ProtocolCircuit::new(swap_layout())
        .with_eve()
        .unitary(Party::C, &["C1", "C2"], bell_measurement_unitary())
        .send("C1", Party::C, Party::B)
        .send("C2", Party::C, Party::B);
    if with_correction {
        c.unitary(Party::B, &["C1", "C2", "B"], pauli_correction())
    } else {
        c
    }
}

#[derive(Clone, Debug)]
pub struct SwapOutcome {
    pub state: DensityOperator,
    pub ab: DensityOperator,
    pub fidelity: f64,
    pub eve: EveLedger,
}

pub fn entanglement_swap(with_correction: bool) -> Result<SwapOutcome> {
    let out = apply(&swap_circuit(with_correction), &swap_input())?;
    let ab = out.state.marginal(&["A", "B"])?;
    let target = max_entangled(2)?.relabel(ab.layout().clone())?;
    let fidelity = ab.fidelity(&target)?;
    Ok(SwapOutcome {
        state: out.state,
        ab,
        fidelity,
        eve: out.eve.expect("swap circuit records Eve"),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UntwistOutcome {
    pub m: u32,
    pub distribution: Vec<f64>,
    /// `D(p ‖ uniform)` in bits.
    pub relative_entropy: f64,
}

/// Undoes the twisting, then measures the first register in the Fourier
/// basis. The shield is ignored only when reading out.
pub fn untwist_and_measure(state: &DensityOperator, spec: &TwistingSpec, m: u32) -> Result<UntwistOutcome> {
    let d = 1usize << m;
    if spec.control_dim != d {
        return Err(Error::DimensionMismatch(format!(
            "{m} bits need a control of dimension {d}, twisting has {}",
            spec.control_dim
        )));
    }
    let layout = state.layout();
    let regs = layout.registers();
    if regs.is_empty() || regs[0].dim != d || layout.total_dim() != d * spec.target_layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} do not match control {d} and target {:?}",
            layout.dims(),
            spec.target_layout.dims()
        )));
    }
    let labels: Vec<&str> = layout.labels();
    let control = labels[0];
    let untwist = spec.controlled_unitary().dagger();
    let m1 = ops::apply_local_unitary(state.matrix(), layout, &labels, &untwist)?;
    let m2 = ops::apply_local_unitary(&m1, layout, &[control], &fourier_matrix(d).dagger())?;
    let distribution = ops::readout_distribution(&m2, layout, &[control])?;
    let uniform = vec![1.0 / d as f64; d];
    let relative_entropy = classical_relative_entropy(&distribution, &uniform)?;
    Ok(UntwistOutcome {
        m,
        distribution,
        relative_entropy,
    })
}

/// Dephasing of a register held by `holder`, realised by sending it to
/// `relay` and back.
pub fn dephase_via_relay(register: &str, holder: Party, relay: Party) -> [ProtocolStep; 2] {
    [
        ProtocolStep::Send {
            register: register.to_string(),
            from: holder,
            to: relay,
        },
        ProtocolStep::Send {
            register: register.to_string(),
            from: relay,
            to: holder,
        },
    ]
}

const PARTIES: [Party; 3] = [Party::A, Party::B, Party::C];

/// Random legal circuit: local unitaries on one or two registers of one
/// party, local dephasings, and sends to a different party.
pub fn random_circuit<R: Rng + ?Sized>(layout: &SubsystemLayout, steps: usize, rng: &mut R) -> ProtocolCircuit {
    let mut owners: Vec<Party> = layout.registers().iter().map(|r| r.party).collect();
    let labels: Vec<String> = layout.labels().into_iter().map(String::from).collect();
    let dims = layout.dims();
    let mut circuit = ProtocolCircuit::new(layout.clone());
    for _ in 0..steps {
        match rng.random_range(0..3) {
            0 => {
                let reg = rng.random_range(0..labels.len());
                let party = owners[reg];
                let mut same: Vec<usize> = (0..labels.len()).filter(|&i| owners[i] == party).collect();
                same.shuffle(rng);
                let count = rng.random_range(1..=same.len().min(2));
                let targets: Vec<String> = same[..count].iter().map(|&i| labels[i].clone()).collect();
                let dim: usize = same[..count].iter().map(|&i| dims[i]).product();
                let u = random_unitary(dim, rng);
                circuit = circuit.unitary(party, &targets, u);
            }
            1 => {
                let reg = rng.random_range(0..labels.len());
                circuit = circuit.dephase(&labels[reg]);
            }
            _ => {
                let reg = rng.random_range(0..labels.len());
                let from = owners[reg];
                let others: Vec<Party> = PARTIES.iter().copied().filter(|&p| p != from).collect();
                let to = others[rng.random_range(0..others.len())];
                circuit = circuit.send(&labels[reg], from, to);
                owners[reg] = to;
            }
        }
    }
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clodcc::{apply_with, verify_unital, PartyMap};
    use crate::densop::trace_norm;
    use crate::ensembles::{alpha_v, depolarize_register, swap_operator};
    use crate::entropic::binary_entropy;
    use crate::random::{random_density, rng_for};

    #[test]
    fn swap_with_and_without_correction() {
        let ok = entanglement_swap(true).unwrap();
        assert!(ok.fidelity >= 1.0 - 1e-10);
        assert!((ok.eve.entropy() - 2.0).abs() < 1e-12);
        let raw = entanglement_swap(false).unwrap();
        assert!(ops::deviation_from_maximally_mixed(raw.ab.matrix()) <= 1e-10);
    }

    fn alpha_spec(d: usize) -> TwistingSpec {
        let target = SubsystemLayout::new(vec![
            Register::new("A'", d, Party::A),
            Register::new("B'", d, Party::B),
        ])
        .unwrap();
        TwistingSpec::new(2, vec![ComplexMatrix::identity(d * d), swap_operator(d)], target).unwrap()
    }

    #[test]
    fn untwisting_exact_and_noisy_ibit() {
        let a = alpha_v(2).unwrap();
        let out = untwist_and_measure(&a, &alpha_spec(2), 1).unwrap();
        assert!((out.relative_entropy - 1.0).abs() < 1e-12);
        let eps = 0.01;
        let noisy = depolarize_register(&a, "A", eps).unwrap();
        assert!(trace_norm(&(noisy.matrix() - a.matrix())).unwrap() <= eps + 1e-12);
        let w = untwist_and_measure(&noisy, &alpha_spec(2), 1).unwrap();
        assert!(w.relative_entropy >= (1.0 - eps) - binary_entropy(eps).unwrap());
        let mm = DensityOperator::maximally_mixed(a.layout().clone());
        let z = untwist_and_measure(&mm, &alpha_spec(2), 1).unwrap();
        assert!(z.relative_entropy.abs() < 1e-12);
        assert!(untwist_and_measure(&a, &alpha_spec(2), 2).is_err());
    }

    #[test]
    fn random_circuits_are_unital_and_replay_merged() {
        let layout = SubsystemLayout::new(vec![
            Register::new("A", 2, Party::A),
            Register::new("C", 3, Party::C),
            Register::new("B", 2, Party::B),
        ])
        .unwrap();
        let mut rng = rng_for(9, 0);
        for _ in 0..10 {
            let c = random_circuit(&layout, 20, &mut rng);
            assert!(verify_unital(&c).unwrap().pass);
            let rho = random_density(layout.clone(), &mut rng);
            let fine = apply(&c, &rho).unwrap();
            let merged = apply_with(&c, &rho, PartyMap::MergeAB).unwrap();
            assert!(fine.state.matrix().max_abs_diff(merged.state.matrix()) <= 1e-12);
            assert!((fine.state.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn fourier_first_column_is_plus() {
        let f = fourier_matrix(4);
        assert!(f.unitarity_deviation() < 1e-14);
        for r in 0..4 {
            assert!((f[(r, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }
}
