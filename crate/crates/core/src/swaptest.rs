//! Swap-test similarity between two amplitude-encoded vectors.
//!
//! Register layout inside the `2n + 1` qubit state (qubit 0 least significant):
//!
//! | qubits        | role                        |
//! |---------------|-----------------------------|
//! | `0`           | ancilla (measured)          |
//! | `1 ..= n`     | `|ψ⟩`, the online RSS vector |
//! | `n+1 ..= 2n`  | `|φ⟩`, a fingerprint vector  |
//!
//! The ancilla reads 1 with probability `½(1 − |⟨φ|ψ⟩|²)`, so the similarity
//! `|⟨φ|ψ⟩|²` is `1 − 2·p₁`, or `1 − 2·ones/k` from `k` shots.

use crate::encoding::{rotation_tree_circuit, AmplitudeVector};
use crate::error::{Error, Result};
use crate::statevector::{sample_binomial, Gate, RngStream, StateVector};

/// Index of the measured ancilla.
pub const ANCILLA: usize = 0;

#[derive(Clone, Debug, PartialEq)]
pub struct SwapTestCircuit {
    register_qubits: usize,
    gates: Vec<Gate>,
}

impl SwapTestCircuit {
    /// State preparation for both registers, then H, controlled-SWAP, H on the
    /// ancilla.
    pub fn new(psi: &AmplitudeVector, phi: &AmplitudeVector) -> Result<Self> {
        if psi.len() != phi.len() {
            return Err(Error::DimensionMismatch {
                left: psi.len(),
                right: phi.len(),
            });
        }
        let n = psi.num_qubits();
        let psi_qubits: Vec<usize> = (1..=n).collect();
        let phi_qubits: Vec<usize> = (n + 1..=2 * n).collect();

        let mut gates = rotation_tree_circuit(psi)?.gates_at(1);
        gates.extend(rotation_tree_circuit(phi)?.gates_at(n + 1));
        gates.push(Gate::H(ANCILLA));
        gates.push(Gate::CSwap {
            control: ANCILLA,
            a: psi_qubits,
            b: phi_qubits,
        });
        gates.push(Gate::H(ANCILLA));
        Ok(Self {
            register_qubits: n,
            gates,
        })
    }

    pub fn register_qubits(&self) -> usize {
        self.register_qubits
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.register_qubits + 1
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Final state before measurement.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::new(self.total_qubits())?;
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(state)
    }

    /// Exact probability that the ancilla reads 1.
    pub fn match_probability(&self) -> Result<f64> {
        self.simulate()?.qubit_one_probability(ANCILLA)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateMode {
    Exact,
    Sampled,
}

/// A similarity value together with how it was obtained.
///
/// Sampled values are `1 − 2·ones_count/shots` and are not clamped, so shot
/// noise can push them slightly outside `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityEstimate {
    pub value: f64,
    pub mode: EstimateMode,
    /// 0 in exact mode.
    pub shots: u64,
    pub ones_count: u64,
    pub stream: Option<RngStream>,
}

impl SimilarityEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            mode: EstimateMode::Exact,
            shots: 0,
            ones_count: 0,
            stream: None,
        }
    }

    pub fn from_counts(ones_count: u64, shots: u64, stream: RngStream) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self {
            value: 1.0 - 2.0 * ones_count as f64 / shots as f64,
            mode: EstimateMode::Sampled,
            shots,
            ones_count,
            stream: Some(stream),
        })
    }
}

pub fn exact_match_probability(psi: &AmplitudeVector, phi: &AmplitudeVector) -> Result<f64> {
    SwapTestCircuit::new(psi, phi)?.match_probability()
}

/// `|⟨φ|ψ⟩|²` from the simulated circuit.
pub fn exact_similarity(psi: &AmplitudeVector, phi: &AmplitudeVector) -> Result<f64> {
    let p1 = exact_match_probability(psi, phi)?;
    Ok((1.0 - 2.0 * p1).clamp(0.0, 1.0))
}

/// Finite-shot estimate: one Binomial(`shots`, p₁) draw on `stream`.
pub fn estimate_similarity(
    psi: &AmplitudeVector,
    phi: &AmplitudeVector,
    shots: u64,
    stream: &RngStream,
) -> Result<SimilarityEstimate> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p1 = exact_match_probability(psi, phi)?;
    estimate_from_probability(p1, shots, stream)
}

/// Sample an estimate from an already computed ancilla probability.
pub fn estimate_from_probability(
    p1: f64,
    shots: u64,
    stream: &RngStream,
) -> Result<SimilarityEstimate> {
    let ones = sample_binomial(shots, p1, stream)?;
    SimilarityEstimate::from_counts(ones, shots, *stream)
}

/// `(Σ ψᵢ φᵢ)²` computed directly; the reference the circuit is checked against.
pub fn classical_dot_oracle(psi: &[f64], phi: &[f64]) -> Result<f64> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            left: psi.len(),
            right: phi.len(),
        });
    }
    let dot: f64 = psi.iter().zip(phi).map(|(a, b)| a * b).sum();
    Ok(dot * dot)
}
