//! Dense statevector simulator.
//!
//! An `n`-qubit register is stored as `2^n` complex amplitudes indexed by the
//! computational basis state.
//!
//! **Qubit ordering:** qubit 0 is the least-significant bit of the basis index.
//! Basis index `0b110` on three qubits therefore has qubit 0 = 0, qubit 1 = 1,
//! qubit 2 = 1.
//!
//! Only the gates needed for swap-test fingerprint matching are provided:
//! Hadamard, Pauli-X, the real rotation `U(θ)` (optionally multi-controlled)
//! and a native controlled-SWAP over register pairs.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Tolerance on `Σ|a|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Seed plus stream selector for a reproducible random sequence.
///
/// Identical `(seed, stream_id)` pairs always yield the same draws, so work
/// keyed by stream id is independent of scheduling order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// A gate instruction understood by [`StateVector::apply`].
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    U {
        qubit: usize,
        theta: f64,
    },
    /// `U(θ)` on `target`, applied only where every `(qubit, value)` control matches.
    ControlledU {
        controls: Vec<(usize, bool)>,
        target: usize,
        theta: f64,
    },
    /// Swap `a[i]` with `b[i]` for all `i` when `control` is 1.
    CSwap {
        control: usize,
        a: Vec<usize>,
        b: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(num_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&num_qubits) {
        Ok(())
    } else {
        Err(Error::Size(num_qubits))
    }
}

impl StateVector {
    /// The all-zero basis state `|0…0⟩`.
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Load amplitudes directly. The length must be a power of two (at least 2)
    /// and the vector must have unit norm within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::from_amplitudes_with_tolerance(amplitudes, NORM_TOLERANCE)
    }

    pub(crate) fn from_amplitudes_with_tolerance(
        amplitudes: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidAmplitudes(format!(
                "length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_size(num_qubits)?;
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidAmplitudes("non-finite amplitude".into()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex {
                index,
                num_qubits: self.num_qubits,
            })
        }
    }

    /// Apply a 2x2 matrix `[[m00, m01], [m10, m11]]` to `target` on the
    /// subspace where `(index & mask) == value`.
    fn apply_single(&mut self, target: usize, mask: usize, value: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 || i & mask != value {
                continue;
            }
            let j = i | bit;
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[j];
            self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_single(qubit, 0, 0, [[h, h], [h, -h]]);
        Ok(())
    }

    pub fn apply_x(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                self.amplitudes.swap(i, i | bit);
            }
        }
        Ok(())
    }

    /// Real rotation `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn apply_u(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.apply_controlled_u(&[], qubit, theta)
    }

    pub fn apply_controlled_u(
        &mut self,
        controls: &[(usize, bool)],
        target: usize,
        theta: f64,
    ) -> Result<()> {
        self.check_qubit(target)?;
        if !theta.is_finite() {
            return Err(Error::QubitArgs(format!(
                "rotation angle {theta} is not finite"
            )));
        }
        let mut mask = 0usize;
        let mut value = 0usize;
        for &(q, on) in controls {
            self.check_qubit(q)?;
            let bit = 1usize << q;
            if q == target || mask & bit != 0 {
                return Err(Error::QubitArgs(format!(
                    "control qubit {q} repeated or equal to target"
                )));
            }
            mask |= bit;
            if on {
                value |= bit;
            }
        }
        let (s, c) = (theta / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        let s = Complex64::new(s, 0.0);
        self.apply_single(target, mask, value, [[c, -s], [s, c]]);
        Ok(())
    }

    /// Controlled-SWAP: where `control` is 1, exchange qubit `targets_a[i]`
    /// with `targets_b[i]` for every `i`. Implemented as a basis permutation.
    pub fn apply_cswap(
        &mut self,
        control: usize,
        targets_a: &[usize],
        targets_b: &[usize],
    ) -> Result<()> {
        if targets_a.len() != targets_b.len() {
            return Err(Error::QubitArgs(format!(
                "swap registers differ in length ({} vs {})",
                targets_a.len(),
                targets_b.len()
            )));
        }
        let mut seen = 0usize;
        for &q in std::iter::once(&control).chain(targets_a).chain(targets_b) {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(Error::QubitArgs(format!("qubit {q} used more than once")));
            }
            seen |= 1 << q;
        }

        let control_bit = 1usize << control;
        let pairs: Vec<(usize, usize)> = targets_a
            .iter()
            .zip(targets_b)
            .map(|(&a, &b)| (a, b))
            .collect();
        for i in 0..self.amplitudes.len() {
            if i & control_bit == 0 {
                continue;
            }
            let j = swap_bits(i, &pairs);
            // the permutation is an involution; visit each pair once
            if j > i {
                self.amplitudes.swap(i, j);
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => self.apply_hadamard(*q),
            Gate::X(q) => self.apply_x(*q),
            Gate::U { qubit, theta } => self.apply_u(*qubit, *theta),
            Gate::ControlledU {
                controls,
                target,
                theta,
            } => self.apply_controlled_u(controls, *target, *theta),
            Gate::CSwap { control, a, b } => self.apply_cswap(*control, a, b),
        }
    }

    /// Probability of reading 1 on `qubit`.
    pub fn qubit_one_probability(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let p: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Number of 1 outcomes in `shots` independent measurements of `qubit`.
    ///
    /// Draws from the exact marginal of `qubit` (a single Binomial draw is
    /// equivalent to `shots` Bernoulli trials); the state is not collapsed.
    pub fn sample_qubit(&self, qubit: usize, shots: u64, stream: &RngStream) -> Result<u64> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let p = self.qubit_one_probability(qubit)?;
        sample_binomial(shots, p, stream)
    }
}

pub(crate) fn sample_binomial(shots: u64, p: f64, stream: &RngStream) -> Result<u64> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let dist = Binomial::new(shots, p.clamp(0.0, 1.0))
        .map_err(|e| Error::QubitArgs(format!("binomial parameters: {e}")))?;
    Ok(dist.sample(&mut stream.rng()))
}

fn swap_bits(index: usize, pairs: &[(usize, usize)]) -> usize {
    let mut out = index;
    for &(a, b) in pairs {
        let bit_a = (index >> a) & 1;
        let bit_b = (index >> b) & 1;
        if bit_a != bit_b {
            out ^= (1 << a) | (1 << b);
        }
    }
    out
}
