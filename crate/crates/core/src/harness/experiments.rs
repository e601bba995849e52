//! Shot sweep, error CDF and classical/quantum comparison runs.
//!
//! In shot mode the `seed` of [`MatchMode::QuantumShots`] is a master seed:
//! test sample `i` uses `sample_seed(seed, i)` and its comparison against
//! location `id` draws from stream `id`, so results do not depend on
//! evaluation order.

use crate::error::{Error, Result};
use crate::fingerprint::{
    distance_error, localize, sample_seed, select_best, FingerprintDb, Location, MatchMode,
    TestSample,
};
use crate::statevector::RngStream;
use crate::swaptest::{estimate_from_probability, exact_match_probability};

/// Default shot list for sweeps.
pub const DEFAULT_SHOT_LIST: [u64; 6] = [16, 64, 256, 1024, 4096, 16384];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalizationRow {
    pub truth: Location,
    pub estimate: Location,
    pub error_ft: f64,
    /// The winning score was strictly above all others.
    pub distinct_best: bool,
}

/// Mode actually used for sample `index`.
pub fn mode_for_sample(mode: MatchMode, index: usize) -> MatchMode {
    match mode {
        MatchMode::QuantumShots { shots, seed } => MatchMode::QuantumShots {
            shots,
            seed: sample_seed(seed, index as u64),
        },
        other => other,
    }
}

fn check_inputs(db: &FingerprintDb, samples: &[TestSample]) -> Result<()> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput("no test samples"));
    }
    Ok(())
}

pub fn localize_all(
    db: &FingerprintDb,
    samples: &[TestSample],
    mode: MatchMode,
) -> Result<Vec<LocalizationRow>> {
    check_inputs(db, samples)?;
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let out = localize(db, s, mode_for_sample(mode, i))?;
            Ok(LocalizationRow {
                truth: s.truth,
                estimate: out.location,
                error_ft: distance_error(&out.location, &s.truth),
                distinct_best: out.has_distinct_best(),
            })
        })
        .collect()
}

pub fn localization_errors(
    db: &FingerprintDb,
    samples: &[TestSample],
    mode: MatchMode,
) -> Result<Vec<f64>> {
    Ok(localize_all(db, samples, mode)?
        .into_iter()
        .map(|r| r.error_ft)
        .collect())
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdfRow {
    pub error_ft: f64,
    pub cum_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdfReport {
    pub rows: Vec<CdfRow>,
}

/// Sorted errors with cumulative fraction `i/n` on the `i`-th row.
pub fn cdf_from_errors(errors: &[f64]) -> Result<CdfReport> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("no errors for CDF"));
    }
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let rows = sorted
        .into_iter()
        .enumerate()
        .map(|(i, error_ft)| CdfRow {
            error_ft,
            cum_fraction: (i + 1) as f64 / n,
        })
        .collect();
    Ok(CdfReport { rows })
}

pub fn run_cdf(db: &FingerprintDb, samples: &[TestSample], mode: MatchMode) -> Result<CdfReport> {
    cdf_from_errors(&localization_errors(db, samples, mode)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    /// `None` is the exact (infinite-shot) reference.
    pub shots: Option<u64>,
    pub median_error_ft: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn median_at(&self, shots: Option<u64>) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.shots == shots)
            .map(|r| r.median_error_ft)
    }
}

/// Ancilla-1 probability for every (sample, fingerprint) pair.
pub fn match_probabilities(db: &FingerprintDb, samples: &[TestSample]) -> Result<Vec<Vec<f64>>> {
    samples
        .iter()
        .map(|s| {
            if s.vector.len() != db.dim() {
                return Err(Error::DimensionMismatch {
                    left: db.dim(),
                    right: s.vector.len(),
                });
            }
            db.entries()
                .iter()
                .map(|e| exact_match_probability(&s.vector, &e.vector))
                .collect()
        })
        .collect()
}

/// Errors pooled over samples and seeds for each entry of `shot_list`, plus
/// the exact reference (`None`) first.
///
/// Equivalent to [`localization_errors`] with `QuantumShots { shots, seed }`
/// for each seed, but simulates each (sample, fingerprint) circuit only once.
pub fn sweep_errors(
    db: &FingerprintDb,
    samples: &[TestSample],
    shot_list: &[u64],
    seeds: &[u64],
) -> Result<Vec<(Option<u64>, Vec<f64>)>> {
    if shot_list.is_empty() {
        return Err(Error::EmptyInput("empty shot list"));
    }
    if seeds.is_empty() {
        return Err(Error::EmptyInput("no seeds"));
    }
    if shot_list.contains(&0) {
        return Err(Error::ZeroShots);
    }
    check_inputs(db, samples)?;
    let probs = match_probabilities(db, samples)?;
    let error_for = |i: usize, scores: &[f64]| {
        let best = &db.entries()[select_best(db, scores)];
        distance_error(&best.location, &samples[i].truth)
    };

    let exact: Vec<f64> = probs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let scores: Vec<f64> = row
                .iter()
                .map(|p| (1.0 - 2.0 * p).clamp(0.0, 1.0))
                .collect();
            error_for(i, &scores)
        })
        .collect();
    let mut out = vec![(None, exact)];

    for &shots in shot_list {
        let mut errors = Vec::with_capacity(seeds.len() * samples.len());
        for &seed in seeds {
            for (i, row) in probs.iter().enumerate() {
                let sample_seed = sample_seed(seed, i as u64);
                let scores = row
                    .iter()
                    .zip(db.entries())
                    .map(|(&p, e)| {
                        let stream = RngStream::new(sample_seed, u64::from(e.location.id));
                        estimate_from_probability(p, shots, &stream).map(|est| est.value)
                    })
                    .collect::<Result<Vec<_>>>()?;
                errors.push(error_for(i, &scores));
            }
        }
        out.push((Some(shots), errors));
    }
    Ok(out)
}

/// Median error per shot count over all samples and seeds, with the exact
/// reference row (`inf` in files) first.
pub fn run_shot_sweep(
    db: &FingerprintDb,
    samples: &[TestSample],
    shot_list: &[u64],
    seeds: &[u64],
) -> Result<SweepReport> {
    let rows = sweep_errors(db, samples, shot_list, seeds)?
        .into_iter()
        .map(|(shots, errors)| SweepRow {
            shots,
            median_error_ft: median(&errors).expect("non-empty"),
        })
        .collect();
    Ok(SweepReport { rows })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareReport {
    pub samples: usize,
    /// Samples where both modes had a unique best score.
    pub distinct: usize,
    pub agreements: usize,
    pub distinct_agreements: usize,
}

impl CompareReport {
    /// Agreement over samples with distinct best scores (1.0 when there are none).
    pub fn agreement_rate(&self) -> f64 {
        if self.distinct == 0 {
            1.0
        } else {
            self.distinct_agreements as f64 / self.distinct as f64
        }
    }
}

/// How often two modes pick the same location.
pub fn compare_modes(
    db: &FingerprintDb,
    samples: &[TestSample],
    a: MatchMode,
    b: MatchMode,
) -> Result<CompareReport> {
    let ra = localize_all(db, samples, a)?;
    let rb = localize_all(db, samples, b)?;
    let mut report = CompareReport {
        samples: ra.len(),
        distinct: 0,
        agreements: 0,
        distinct_agreements: 0,
    };
    for (x, y) in ra.iter().zip(&rb) {
        let same = x.estimate.id == y.estimate.id;
        let distinct = x.distinct_best && y.distinct_best;
        report.agreements += usize::from(same);
        report.distinct += usize::from(distinct);
        report.distinct_agreements += usize::from(same && distinct);
    }
    Ok(report)
}
