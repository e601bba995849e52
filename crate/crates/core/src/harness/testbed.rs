//! Synthetic RSS testbed: log-distance path loss with Gaussian shadowing.
//!
//! `RSS(d) = P₁ − 10·γ·log₁₀(max(d, 1 ft)) + N(0, σ²)`, clipped at the floor.
//! APs sit at the area corners (extra APs are spread along the perimeter);
//! fingerprint and test positions are uniform over the area.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::encoding::{rss_to_amplitudes, RawRssVector};
use crate::error::{Error, Result};
use crate::fingerprint::{FingerprintDb, FingerprintEntry, Location, TestSample};

use super::format::quantize_sig9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestPlacement {
    /// Independent uniform positions.
    Uniform,
    /// Test sample `i` reuses fingerprint position `i mod train_count`.
    AtFingerprints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestbedConfig {
    pub area_x_ft: f64,
    pub area_y_ft: f64,
    pub ap_count: usize,
    pub train_count: usize,
    pub test_count: usize,
    pub path_loss_exponent: f64,
    pub tx_power_at_1ft_dbm: f64,
    pub shadowing_sigma_db: f64,
    pub rss_floor_dbm: f64,
    pub seed: u64,
    pub test_placement: TestPlacement,
}

impl Default for TestbedConfig {
    fn default() -> Self {
        Self {
            area_x_ft: 89.0,
            area_y_ft: 56.0,
            ap_count: 4,
            train_count: 24,
            test_count: 24,
            path_loss_exponent: 3.0,
            tx_power_at_1ft_dbm: -30.0,
            shadowing_sigma_db: 4.0,
            rss_floor_dbm: -100.0,
            seed: 0,
            test_placement: TestPlacement::Uniform,
        }
    }
}

impl TestbedConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.area_x_ft) || !positive(self.area_y_ft) {
            return bad("area dimensions must be positive");
        }
        if self.ap_count == 0 || self.train_count == 0 || self.test_count == 0 {
            return bad("ap_count, train_count and test_count must be at least 1");
        }
        if self.train_count > u32::MAX as usize || self.test_count > u32::MAX as usize {
            return bad("too many locations");
        }
        if !positive(self.path_loss_exponent) {
            return bad("path-loss exponent must be positive");
        }
        if !(self.shadowing_sigma_db.is_finite() && self.shadowing_sigma_db >= 0.0) {
            return bad("shadowing sigma must be nonnegative");
        }
        if !self.tx_power_at_1ft_dbm.is_finite() || !self.rss_floor_dbm.is_finite() {
            return bad("tx power and floor must be finite");
        }
        if self.tx_power_at_1ft_dbm <= self.rss_floor_dbm {
            return bad("tx power must be above the floor");
        }
        Ok(())
    }
}

/// One row of a fingerprint or sample file.
#[derive(Clone, Debug, PartialEq)]
pub struct RssRecord {
    pub loc_id: u32,
    pub x_ft: f64,
    pub y_ft: f64,
    /// dBm per AP, `None` when missing.
    pub readings: Vec<Option<f64>>,
}

impl RssRecord {
    pub fn location(&self) -> Location {
        Location::new(self.loc_id, self.x_ft, self.y_ft)
    }
}

pub fn records_to_db(ap_count: usize, records: &[RssRecord], floor: f64) -> Result<FingerprintDb> {
    let entries = records
        .iter()
        .map(|r| {
            Ok(FingerprintEntry {
                location: r.location(),
                vector: rss_to_amplitudes(&RawRssVector::new(r.readings.clone()), floor)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FingerprintDb::new(ap_count, entries)
}

pub fn records_to_samples(records: &[RssRecord], floor: f64) -> Result<Vec<TestSample>> {
    records
        .iter()
        .map(|r| {
            Ok(TestSample {
                truth: r.location(),
                vector: rss_to_amplitudes(&RawRssVector::new(r.readings.clone()), floor)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Testbed {
    pub config: TestbedConfig,
    pub access_points: Vec<(f64, f64)>,
    pub fingerprints: Vec<RssRecord>,
    pub samples: Vec<RssRecord>,
}

impl Testbed {
    pub fn db(&self) -> Result<FingerprintDb> {
        records_to_db(
            self.config.ap_count,
            &self.fingerprints,
            self.config.rss_floor_dbm,
        )
    }

    pub fn test_samples(&self) -> Result<Vec<TestSample>> {
        records_to_samples(&self.samples, self.config.rss_floor_dbm)
    }
}

/// AP positions: the four corners first, then evenly along the perimeter
/// starting from the middle of the bottom edge.
pub fn access_point_positions(area_x: f64, area_y: f64, count: usize) -> Vec<(f64, f64)> {
    let corners = [(0.0, 0.0), (area_x, 0.0), (area_x, area_y), (0.0, area_y)];
    let mut out: Vec<(f64, f64)> = corners.iter().copied().take(count).collect();
    let extra = count.saturating_sub(4);
    let perimeter = 2.0 * (area_x + area_y);
    for j in 0..extra {
        let t = (area_x / 2.0 + perimeter * j as f64 / extra as f64) % perimeter;
        out.push(perimeter_point(area_x, area_y, t));
    }
    out
}

/// Point at arc length `t` along the boundary, counter-clockwise from the origin.
fn perimeter_point(area_x: f64, area_y: f64, t: f64) -> (f64, f64) {
    if t < area_x {
        (t, 0.0)
    } else if t < area_x + area_y {
        (area_x, t - area_x)
    } else if t < 2.0 * area_x + area_y {
        (area_x - (t - area_x - area_y), area_y)
    } else {
        (0.0, area_y - (t - 2.0 * area_x - area_y))
    }
}

/// Received power in dBm at distance `d` feet, before shadowing.
pub fn mean_rss_dbm(tx_power_at_1ft: f64, exponent: f64, distance_ft: f64) -> f64 {
    tx_power_at_1ft - 10.0 * exponent * distance_ft.max(1.0).log10()
}

pub fn generate_testbed(config: &TestbedConfig) -> Result<Testbed> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let aps = access_point_positions(config.area_x_ft, config.area_y_ft, config.ap_count);

    let position = |rng: &mut ChaCha8Rng| {
        (
            quantize_sig9(rng.random_range(0.0..=config.area_x_ft)),
            quantize_sig9(rng.random_range(0.0..=config.area_y_ft)),
        )
    };
    let train: Vec<(f64, f64)> = (0..config.train_count)
        .map(|_| position(&mut rng))
        .collect();
    let test: Vec<(f64, f64)> = match config.test_placement {
        TestPlacement::Uniform => (0..config.test_count).map(|_| position(&mut rng)).collect(),
        TestPlacement::AtFingerprints => (0..config.test_count)
            .map(|i| train[i % train.len()])
            .collect(),
    };

    let shadowing = Normal::new(0.0, config.shadowing_sigma_db)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let scan = |rng: &mut ChaCha8Rng, id: usize, (x, y): (f64, f64)| {
        let readings = aps
            .iter()
            .map(|&(ax, ay)| {
                let mean = mean_rss_dbm(
                    config.tx_power_at_1ft_dbm,
                    config.path_loss_exponent,
                    (x - ax).hypot(y - ay),
                );
                let rss = mean + shadowing.sample(rng);
                Some(quantize_sig9(rss.max(config.rss_floor_dbm)))
            })
            .collect();
        RssRecord {
            loc_id: id as u32 + 1,
            x_ft: x,
            y_ft: y,
            readings,
        }
    };
    let fingerprints = train
        .iter()
        .enumerate()
        .map(|(i, &p)| scan(&mut rng, i, p))
        .collect();
    let samples = test
        .iter()
        .enumerate()
        .map(|(i, &p)| scan(&mut rng, i, p))
        .collect();

    Ok(Testbed {
        config: config.clone(),
        access_points: aps,
        fingerprints,
        samples,
    })
}
