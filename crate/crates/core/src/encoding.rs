//! RSS readings to normalized amplitude vectors, and amplitude vectors to
//! quantum registers.
//!
//! The dBm map is a linear shift: a present reading `r` becomes `r - floor`,
//! a missing AP becomes 0, and the result is L2-normalized then zero-padded to
//! a power-of-two length (at least 2, so a single AP still occupies one qubit).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::{Gate, StateVector, NORM_TOLERANCE};

/// Default RSS floor in dBm.
pub const DEFAULT_FLOOR_DBM: f64 = -100.0;

/// Norm tolerance accepted by [`prepare_state`].
pub const PREP_TOLERANCE: f64 = 1e-6;

/// One RSS scan: a reading in dBm per AP, `None` where the AP was not heard.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRssVector {
    pub readings: Vec<Option<f64>>,
}

impl RawRssVector {
    pub fn new(readings: Vec<Option<f64>>) -> Self {
        Self { readings }
    }
}

/// Unit-norm, nonnegative, power-of-two length vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector {
    values: Vec<f64>,
    source_dim: usize,
}

/// Padded length for `n` source entries: next power of two, minimum 2.
pub fn padded_len(n: usize) -> usize {
    n.next_power_of_two().max(2)
}

impl AmplitudeVector {
    /// Validate `values` (finite, nonnegative, unit norm within 1e-9) and pad
    /// with zeros to the next power of two.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let norm = validate_entries(&values)?;
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self::pad(values))
    }

    /// Scale `values` to unit norm first. Fails on an all-zero input.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let norm = validate_entries(&values)?;
        if norm == 0.0 {
            return Err(Error::DegenerateVector);
        }
        let scale = norm.sqrt().recip();
        Ok(Self::pad(values.into_iter().map(|v| v * scale).collect()))
    }

    fn pad(mut values: Vec<f64>) -> Self {
        let source_dim = values.len();
        values.resize(padded_len(source_dim), 0.0);
        Self { values, source_dim }
    }

    /// Padded values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Qubits needed to hold this vector (`log2` of the padded length).
    pub fn num_qubits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }
}

/// Returns the sum of squares.
fn validate_entries(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidAmplitudes("empty vector".into()));
    }
    if values.len() > 1 << crate::statevector::MAX_QUBITS {
        return Err(Error::InvalidAmplitudes(format!(
            "{} entries exceed the simulator limit",
            values.len()
        )));
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::InvalidAmplitudes(format!("entry {i} is not finite")));
        }
        if *v < 0.0 {
            return Err(Error::InvalidAmplitudes(format!(
                "entry {i} is negative ({v})"
            )));
        }
    }
    Ok(values.iter().map(|v| v * v).sum())
}

pub fn rss_to_amplitudes(raw: &RawRssVector, floor: f64) -> Result<AmplitudeVector> {
    if raw.readings.is_empty() {
        return Err(Error::InvalidAmplitudes("no AP readings".into()));
    }
    if !floor.is_finite() {
        return Err(Error::InvalidConfig(format!("floor {floor} is not finite")));
    }
    let mut shifted = Vec::with_capacity(raw.readings.len());
    for (ap, reading) in raw.readings.iter().enumerate() {
        let v = match *reading {
            None => 0.0,
            Some(r) if !r.is_finite() => {
                return Err(Error::InvalidReading {
                    ap,
                    value: r,
                    reason: "not finite",
                })
            }
            Some(r) if r < floor => {
                return Err(Error::InvalidReading {
                    ap,
                    value: r,
                    reason: "below the floor",
                })
            }
            Some(r) => r - floor,
        };
        shifted.push(v);
    }
    if shifted.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateVector);
    }
    AmplitudeVector::normalized(shifted)
}

/// Load `vec` directly as register amplitudes: basis `|i⟩` gets `values[i]`.
pub fn prepare_state(vec: &AmplitudeVector) -> Result<StateVector> {
    let amps = vec
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    StateVector::from_amplitudes_with_tolerance(amps, PREP_TOLERANCE)
}

/// Angle `θ` with `U(θ)|0⟩ = a|0⟩ + b|1⟩` for nonnegative `(a, b)`.
///
/// Equals `2·atan(b/a)`, and `π` when `a = 0`.
pub fn single_qubit_prep_angle(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 {
        return Err(Error::InvalidAmplitudes(format!(
            "prep amplitudes ({a}, {b}) must be finite and nonnegative"
        )));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegenerateVector);
    }
    Ok(2.0 * b.atan2(a))
}

/// Conditional-rotation tree that prepares a nonnegative amplitude vector
/// from `|0…0⟩`.
///
/// Qubit indices in `gates` are register-local (0 = least significant); use
/// [`PrepCircuit::gates_at`] to place the register inside a larger one.
#[derive(Clone, Debug, PartialEq)]
pub struct PrepCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl PrepCircuit {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gates with every qubit index shifted by `offset`.
    pub fn gates_at(&self, offset: usize) -> Vec<Gate> {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::U { qubit, theta } => Gate::U {
                    qubit: qubit + offset,
                    theta: *theta,
                },
                Gate::ControlledU {
                    controls,
                    target,
                    theta,
                } => Gate::ControlledU {
                    controls: controls.iter().map(|&(q, v)| (q + offset, v)).collect(),
                    target: target + offset,
                    theta: *theta,
                },
                other => other.clone(),
            })
            .collect()
    }

    /// Rotation angles in emission order.
    pub fn angles(&self) -> Vec<f64> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::U { theta, .. } | Gate::ControlledU { theta, .. } => Some(*theta),
                _ => None,
            })
            .collect()
    }

    /// Run the circuit on a fresh `|0…0⟩` register.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::new(self.num_qubits)?;
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(state)
    }
}

type Controls = Vec<(usize, bool)>;

/// Build the rotation tree for `vec`.
///
/// The most significant qubit is rotated first, splitting the mass between the
/// lower and upper halves of the index range; each lower qubit is then rotated
/// conditioned on the already-fixed higher qubits. A node with zero mass gets
/// no further gates.
pub fn rotation_tree_circuit(vec: &AmplitudeVector) -> Result<PrepCircuit> {
    let values = vec.values();
    let num_qubits = vec.num_qubits();
    let total: f64 = values.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::DegenerateVector);
    }
    let mut gates = Vec::new();
    // (prefix bits fixed so far, highest-first), range start, range length
    let mut frontier: Vec<(Controls, usize, usize)> = vec![(Vec::new(), 0, values.len())];
    for level in 0..num_qubits {
        let target = num_qubits - 1 - level;
        let mut next = Vec::new();
        for (controls, start, len) in frontier {
            let half = len / 2;
            let left: f64 = values[start..start + half].iter().map(|v| v * v).sum();
            let right: f64 = values[start + half..start + len]
                .iter()
                .map(|v| v * v)
                .sum();
            if left + right == 0.0 {
                continue;
            }
            let theta = 2.0 * right.sqrt().atan2(left.sqrt());
            gates.push(if controls.is_empty() {
                Gate::U {
                    qubit: target,
                    theta,
                }
            } else {
                Gate::ControlledU {
                    controls: controls.clone(),
                    target,
                    theta,
                }
            });
            for (bit, sub_start, mass) in [(false, start, left), (true, start + half, right)] {
                if mass > 0.0 {
                    let mut c = controls.clone();
                    c.push((target, bit));
                    next.push((c, sub_start, half));
                }
            }
        }
        frontier = next;
    }
    Ok(PrepCircuit { num_qubits, gates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn amps(raw: &[Option<f64>]) -> Result<AmplitudeVector> {
        rss_to_amplitudes(&RawRssVector::new(raw.to_vec()), DEFAULT_FLOOR_DBM)
    }

    #[test]
    fn rss_map_examples() {
        let v = amps(&[Some(-60.0), Some(-40.0)]).unwrap();
        // (40, 60) / sqrt(40² + 60²)
        let norm = (40.0f64 * 40.0 + 60.0 * 60.0).sqrt();
        assert!((v.values()[0] - 40.0 / norm).abs() < 1e-12);
        assert!((v.values()[1] - 60.0 / norm).abs() < 1e-12);
        assert!((v.values()[0] - 0.5547).abs() < 1e-4);
        assert!((v.values()[1] - 0.8321).abs() < 1e-4);

        let v = amps(&[Some(-50.0); 4]).unwrap();
        for x in v.values() {
            assert!((x - 0.5).abs() < 1e-15);
        }

        assert!(matches!(amps(&[None, None]), Err(Error::DegenerateVector)));
        assert!(matches!(
            amps(&[Some(-100.0), None]),
            Err(Error::DegenerateVector)
        ));
    }

    #[test]
    fn rss_map_rejects_bad_readings() {
        assert!(matches!(
            amps(&[Some(-101.0), Some(-50.0)]),
            Err(Error::InvalidReading { ap: 0, .. })
        ));
        assert!(amps(&[Some(f64::NAN)]).is_err());
        assert!(amps(&[]).is_err());
    }

    #[test]
    fn padding_and_missing() {
        let v = amps(&[Some(-70.0), None, Some(-40.0)]).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v.source_dim(), 3);
        assert_eq!(v.values()[1], 0.0);
        assert_eq!(v.values()[3], 0.0);

        let single = amps(&[Some(-70.0)]).unwrap();
        assert_eq!(single.values(), &[1.0, 0.0]);
        assert_eq!(single.num_qubits(), 1);
    }

    #[test]
    fn amplitude_vector_validation() {
        assert!(matches!(
            AmplitudeVector::new(vec![1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(AmplitudeVector::new(vec![-1.0, 0.0]).is_err());
        assert!(AmplitudeVector::new(vec![]).is_err());
        assert!(matches!(
            AmplitudeVector::normalized(vec![0.0, 0.0]),
            Err(Error::DegenerateVector)
        ));
        let v = AmplitudeVector::normalized(vec![3.0, 4.0]).unwrap();
        assert!((v.values()[0] - 0.6).abs() < 1e-15 && (v.values()[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn prepare_state_examples() {
        let v = AmplitudeVector::normalized(vec![0.39, 0.92]).unwrap();
        let s = prepare_state(&v).unwrap();
        assert_eq!(s.num_qubits(), 1);
        assert!((s.amplitudes()[0].re - 0.39).abs() < 1e-3);
        assert!((s.amplitudes()[1].re - 0.92).abs() < 1e-3);

        let s = prepare_state(&AmplitudeVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(s, StateVector::new(2).unwrap());

        let uniform = prepare_state(&AmplitudeVector::new(vec![0.5; 4]).unwrap()).unwrap();
        let mut hh = StateVector::new(2).unwrap();
        hh.apply_hadamard(0).unwrap();
        hh.apply_hadamard(1).unwrap();
        for (a, b) in uniform.amplitudes().iter().zip(hh.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn prep_angle_examples() {
        let theta = single_qubit_prep_angle(0.39, 0.92).unwrap();
        assert!((theta - 2.0 * (0.92f64 / 0.39).atan()).abs() < 1e-15);
        // 2·atan(0.92/0.39) = 2.33969…
        assert!((theta - 2.3397).abs() < 1e-4);
        assert_eq!(single_qubit_prep_angle(1.0, 0.0).unwrap(), 0.0);
        assert!((single_qubit_prep_angle(0.0, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(
            single_qubit_prep_angle(0.0, 0.0),
            Err(Error::DegenerateVector)
        ));
        assert!(single_qubit_prep_angle(-0.1, 0.9).is_err());
    }

    #[test]
    fn rotation_tree_single_qubit() {
        let v = AmplitudeVector::normalized(vec![0.39, 0.92]).unwrap();
        let circuit = rotation_tree_circuit(&v).unwrap();
        assert_eq!(circuit.gates().len(), 1);
        match &circuit.gates()[0] {
            Gate::U { qubit: 0, theta } => {
                assert!((theta - single_qubit_prep_angle(0.39, 0.92).unwrap()).abs() < 1e-12)
            }
            g => panic!("unexpected gate {g:?}"),
        }
    }

    #[test]
    fn rotation_tree_basis_vector_has_zero_angles() {
        let v = AmplitudeVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let circuit = rotation_tree_circuit(&v).unwrap();
        assert!(!circuit.angles().is_empty());
        assert!(circuit.angles().iter().all(|&a| a == 0.0));
        assert_eq!(circuit.simulate().unwrap(), StateVector::new(2).unwrap());
    }

    #[test]
    fn rotation_tree_uniform_matches_direct_load() {
        let v = AmplitudeVector::new(vec![0.5; 4]).unwrap();
        let built = rotation_tree_circuit(&v).unwrap().simulate().unwrap();
        let direct = prepare_state(&v).unwrap();
        for (a, b) in built.amplitudes().iter().zip(direct.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn rotation_tree_skips_zero_subtrees() {
        // mass only in the upper half: the lower subtree gets no gate
        let v = AmplitudeVector::new(vec![0.0, 0.0, 0.6, 0.8]).unwrap();
        let circuit = rotation_tree_circuit(&v).unwrap();
        assert_eq!(circuit.gates().len(), 2);
        let built = circuit.simulate().unwrap();
        assert!((built.amplitudes()[2].re - 0.6).abs() < 1e-12);
        assert!((built.amplitudes()[3].re - 0.8).abs() < 1e-12);
    }

    #[test]
    fn gates_at_offsets_every_qubit() {
        let v = AmplitudeVector::new(vec![0.5; 4]).unwrap();
        let shifted = rotation_tree_circuit(&v).unwrap().gates_at(3);
        for g in shifted {
            match g {
                Gate::U { qubit, .. } => assert!(qubit >= 3),
                Gate::ControlledU {
                    controls, target, ..
                } => {
                    assert!(target >= 3 && controls.iter().all(|&(q, _)| q >= 3))
                }
                _ => unreachable!(),
            }
        }
    }
}
