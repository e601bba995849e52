//! Fingerprint database and nearest-fingerprint localization, classical or
//! via the swap test.

use std::collections::HashSet;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoding::AmplitudeVector;
use crate::error::{Error, Result};
use crate::statevector::RngStream;
use crate::swaptest::{estimate_from_probability, exact_match_probability, exact_similarity};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub id: u32,
    /// feet
    pub x: f64,
    /// feet
    pub y: f64,
}

impl Location {
    pub fn new(id: u32, x: f64, y: f64) -> Self {
        Self { id, x, y }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FingerprintEntry {
    pub location: Location,
    pub vector: AmplitudeVector,
}

/// Immutable set of calibrated locations sharing one padded vector dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct FingerprintDb {
    ap_count: usize,
    entries: Vec<FingerprintEntry>,
}

impl FingerprintDb {
    pub fn new(ap_count: usize, entries: Vec<FingerprintEntry>) -> Result<Self> {
        if ap_count == 0 {
            return Err(Error::InvalidConfig("ap_count must be at least 1".into()));
        }
        let dim = crate::encoding::padded_len(ap_count);
        let mut ids = HashSet::new();
        for e in &entries {
            if e.vector.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: e.vector.len(),
                });
            }
            if !ids.insert(e.location.id) {
                return Err(Error::DuplicateLocationId(e.location.id));
            }
        }
        Ok(Self { ap_count, entries })
    }

    pub fn ap_count(&self) -> usize {
        self.ap_count
    }

    /// Padded vector length shared by every entry.
    pub fn dim(&self) -> usize {
        crate::encoding::padded_len(self.ap_count)
    }

    pub fn entries(&self) -> &[FingerprintEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestSample {
    pub truth: Location,
    pub vector: AmplitudeVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchMode {
    Classical,
    QuantumExact,
    /// `shots` swap-test repetitions per fingerprint; the comparison against
    /// location `id` draws from `RngStream { seed, stream_id: id }`.
    QuantumShots {
        shots: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Localization {
    pub location: Location,
    /// One score per db entry, in db order.
    pub scores: Vec<f64>,
}

impl Localization {
    /// Whether the best score is strictly greater than every other score.
    pub fn has_distinct_best(&self) -> bool {
        let best = self
            .scores
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        self.scores.iter().filter(|&&s| s == best).count() == 1
    }
}

/// `(Σ aᵢbᵢ)²`.
pub fn classical_cosine_similarity(a: &AmplitudeVector, b: &AmplitudeVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let dot: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();
    Ok((dot * dot).min(1.0))
}

/// Per-location similarity under `mode`.
pub fn score(entry: &FingerprintEntry, sample: &AmplitudeVector, mode: MatchMode) -> Result<f64> {
    match mode {
        MatchMode::Classical => classical_cosine_similarity(sample, &entry.vector),
        MatchMode::QuantumExact => exact_similarity(sample, &entry.vector),
        MatchMode::QuantumShots { shots, seed } => {
            let p1 = exact_match_probability(sample, &entry.vector)?;
            let stream = RngStream::new(seed, u64::from(entry.location.id));
            Ok(estimate_from_probability(p1, shots, &stream)?.value)
        }
    }
}

/// Highest-scoring fingerprint location; ties go to the lowest location id.
pub fn localize(db: &FingerprintDb, sample: &TestSample, mode: MatchMode) -> Result<Localization> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    if sample.vector.len() != db.dim() {
        return Err(Error::DimensionMismatch {
            left: db.dim(),
            right: sample.vector.len(),
        });
    }
    if let MatchMode::QuantumShots { shots: 0, .. } = mode {
        return Err(Error::ZeroShots);
    }
    let scores = db
        .entries()
        .iter()
        .map(|e| score(e, &sample.vector, mode))
        .collect::<Result<Vec<_>>>()?;

    let best = select_best(db, &scores);
    Ok(Localization {
        location: db.entries()[best].location,
        scores,
    })
}

/// Index of the highest score, ties broken by lowest location id.
/// `scores` must be in db order and non-empty.
pub fn select_best(db: &FingerprintDb, scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, (s, e)) in scores.iter().zip(db.entries()).enumerate() {
        let (bs, be) = (scores[best], &db.entries()[best]);
        if *s > bs || (*s == bs && e.location.id < be.location.id) {
            best = i;
        }
    }
    best
}

/// Euclidean distance in feet.
pub fn distance_error(estimated: &Location, truth: &Location) -> f64 {
    (estimated.x - truth.x).hypot(estimated.y - truth.y)
}

/// Seed for the shot streams of test sample `index` under a master seed.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Space/time accounting for matching one sample against `m` fingerprints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceCost {
    /// `2·⌈log₂N⌉ + 1`, with at least one qubit per register.
    pub qubits_per_match: usize,
    /// One swap test per fingerprint location.
    pub circuit_runs: usize,
    /// Reals stored by the classical matcher, `N·m`.
    pub classical_space: usize,
}

pub fn resource_cost(ap_count: usize, location_count: usize) -> Result<ResourceCost> {
    if ap_count == 0 || location_count == 0 {
        return Err(Error::InvalidConfig(
            "resource cost needs at least one AP and one location".into(),
        ));
    }
    let register = ap_count.next_power_of_two().trailing_zeros().max(1) as usize;
    Ok(ResourceCost {
        qubits_per_match: 2 * register + 1,
        circuit_runs: location_count,
        classical_space: ap_count * location_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> AmplitudeVector {
        AmplitudeVector::normalized(v.to_vec()).unwrap()
    }

    fn entry(id: u32, v: &[f64]) -> FingerprintEntry {
        FingerprintEntry {
            location: Location::new(id, id as f64, 0.0),
            vector: unit(v),
        }
    }

    fn sample(v: &[f64]) -> TestSample {
        TestSample {
            truth: Location::new(999, 0.0, 0.0),
            vector: unit(v),
        }
    }

    const MODES: [MatchMode; 3] = [
        MatchMode::Classical,
        MatchMode::QuantumExact,
        MatchMode::QuantumShots {
            shots: 4096,
            seed: 5,
        },
    ];

    #[test]
    fn single_location_worked_example() {
        let db = FingerprintDb::new(2, vec![entry(1, &[0.39, 0.92])]).unwrap();
        let out = localize(&db, &sample(&[0.24, 0.97]), MatchMode::QuantumExact).unwrap();
        assert_eq!(out.location.id, 1);
        // normalized pair: 0.97512; the unnormalized published pair gives 0.972
        assert!((out.scores[0] - 0.975119).abs() < 1e-6);
    }

    #[test]
    fn self_match_wins() {
        let db = FingerprintDb::new(
            4,
            vec![
                entry(3, &[0.1, 0.2, 0.3, 0.4]),
                entry(7, &[0.4, 0.3, 0.2, 0.1]),
                entry(9, &[0.25, 0.25, 0.4, 0.1]),
            ],
        )
        .unwrap();
        for mode in [MatchMode::Classical, MatchMode::QuantumExact] {
            let out = localize(&db, &sample(&[0.4, 0.3, 0.2, 0.1]), mode).unwrap();
            assert_eq!(out.location.id, 7);
            assert!((out.scores[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let db = FingerprintDb::new(2, vec![entry(8, &[0.6, 0.8]), entry(2, &[0.6, 0.8])]).unwrap();
        for mode in MODES {
            if let MatchMode::QuantumShots { .. } = mode {
                continue;
            }
            let out = localize(&db, &sample(&[0.8, 0.6]), mode).unwrap();
            assert_eq!(out.location.id, 2);
            assert!(!out.has_distinct_best());
        }
    }

    #[test]
    fn localize_errors() {
        let empty = FingerprintDb::new(2, vec![]).unwrap();
        assert!(matches!(
            localize(&empty, &sample(&[1.0, 0.0]), MatchMode::Classical),
            Err(Error::EmptyDatabase)
        ));
        let db = FingerprintDb::new(2, vec![entry(1, &[1.0, 0.0])]).unwrap();
        assert!(matches!(
            localize(&db, &sample(&[1.0, 0.0, 0.0, 0.0]), MatchMode::QuantumExact),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            localize(
                &db,
                &sample(&[1.0, 0.0]),
                MatchMode::QuantumShots { shots: 0, seed: 1 }
            ),
            Err(Error::ZeroShots)
        ));
    }

    #[test]
    fn db_validation() {
        assert!(matches!(
            FingerprintDb::new(2, vec![entry(1, &[1.0, 0.0]), entry(1, &[0.0, 1.0])]),
            Err(Error::DuplicateLocationId(1))
        ));
        assert!(matches!(
            FingerprintDb::new(4, vec![entry(1, &[1.0, 0.0])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shot_mode_is_reproducible() {
        let db = FingerprintDb::new(
            2,
            vec![
                entry(1, &[0.39, 0.92]),
                entry(2, &[0.3, 0.95]),
                entry(3, &[0.9, 0.4]),
            ],
        )
        .unwrap();
        let mode = MatchMode::QuantumShots {
            shots: 64,
            seed: 77,
        };
        let s = sample(&[0.24, 0.97]);
        assert_eq!(
            localize(&db, &s, mode).unwrap(),
            localize(&db, &s, mode).unwrap()
        );
    }

    #[test]
    fn distances() {
        let p = |x, y| Location::new(0, x, y);
        assert_eq!(distance_error(&p(0.0, 0.0), &p(3.0, 4.0)), 5.0);
        assert_eq!(distance_error(&p(2.5, 2.5), &p(2.5, 2.5)), 0.0);
        assert_eq!(distance_error(&p(1.0, 1.0), &p(1.0, 9.0)), 8.0);
    }

    #[test]
    fn cosine_examples() {
        let a = unit(&[0.39, 0.92]);
        assert!((classical_cosine_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            classical_cosine_similarity(&unit(&[1.0, 0.0]), &unit(&[0.0, 1.0])).unwrap(),
            0.0
        );
        // raw published pair: (0.39·0.24 + 0.92·0.97)² = 0.97220
        let raw = |v: &[f64]| AmplitudeVector::new(v.to_vec());
        assert!(raw(&[0.39, 0.92]).is_err());
        let b = unit(&[0.24, 0.97]);
        let expect = (0.39 * 0.24 + 0.92 * 0.97f64).powi(2) / (0.9985 * 0.9985);
        assert!((classical_cosine_similarity(&a, &b).unwrap() - expect).abs() < 1e-12);
        assert!(classical_cosine_similarity(&a, &unit(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn resource_costs() {
        let rc = |n, m| resource_cost(n, m).unwrap();
        assert_eq!(
            rc(4, 24),
            ResourceCost {
                qubits_per_match: 5,
                circuit_runs: 24,
                classical_space: 96
            }
        );
        assert_eq!(
            rc(1, 1),
            ResourceCost {
                qubits_per_match: 3,
                circuit_runs: 1,
                classical_space: 1
            }
        );
        assert_eq!(
            rc(256, 100),
            ResourceCost {
                qubits_per_match: 17,
                circuit_runs: 100,
                classical_space: 25600
            }
        );
        assert_eq!(rc(5, 1).qubits_per_match, 7);
        assert!(resource_cost(0, 3).is_err());
    }

    #[test]
    fn sample_seeds_differ_per_index() {
        assert_eq!(sample_seed(42, 0), sample_seed(42, 0));
        assert_ne!(sample_seed(42, 0), sample_seed(42, 1));
        assert_ne!(sample_seed(42, 0), sample_seed(43, 0));
    }
}
