//! Synthetic renewable capacity-factor traces and scarcity detection.
//!
//! Solar: a clear-sky diurnal envelope (seasonal daylight window, zero at
//! night) times a persistent daily attenuation. Wind: a first-order
//! autoregressive level clamped to [0, 1], slow enough to produce
//! multi-day lulls. Both are rescaled onto a target annual mean and are
//! fully determined by their seed.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::demand::HOURS;
use crate::math;
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableTechnology {
    Wind,
    Solar,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileError {
    WrongLength { got: usize, expected: usize },
    OutOfRange { index: usize, value: f64 },
    TargetUnreachable { target: f64, achieved: f64 },
    InvalidTarget(f64),
    InvalidParameter(&'static str),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::WrongLength { got, expected } => {
                write!(f, "trace has {got} rows, expected {expected}")
            }
            ProfileError::OutOfRange { index, value } => {
                write!(f, "capacity factor {value} at hour {index} outside [0, 1]")
            }
            ProfileError::TargetUnreachable { target, achieved } => {
                write!(
                    f,
                    "target mean {target} unreachable for this daylight model (best {achieved:.4})"
                )
            }
            ProfileError::InvalidTarget(t) => {
                write!(f, "target mean {t} must lie strictly between 0 and 0.5")
            }
            ProfileError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

/// One year of hourly capacity factors in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityFactorTrace {
    pub technology: VariableTechnology,
    values: Vec<f64>,
}

impl CapacityFactorTrace {
    pub fn new(technology: VariableTechnology, values: Vec<f64>) -> Result<Self, ProfileError> {
        if values.len() != HOURS {
            return Err(ProfileError::WrongLength {
                got: values.len(),
                expected: HOURS,
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                return Err(ProfileError::OutOfRange {
                    index: i,
                    value: *v,
                });
            }
        }
        Ok(CapacityFactorTrace { technology, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Solar synthesis controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolarParams {
    /// Half-swing of daylight hours around 12 across the year.
    pub daylight_swing_hours: f64,
    /// Depth of cloud attenuation: 0 = always clear sky.
    pub attenuation_depth: f64,
    /// Day-to-day persistence of cloud cover, in [0, 1).
    pub attenuation_persistence: f64,
}

impl Default for SolarParams {
    fn default() -> Self {
        SolarParams {
            daylight_swing_hours: 2.2,
            attenuation_depth: 0.55,
            attenuation_persistence: 0.6,
        }
    }
}

/// Wind synthesis controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindParams {
    /// Hour-to-hour persistence of the AR(1) level, in [0, 1).
    pub persistence: f64,
    /// Stationary standard deviation of the level before clamping.
    pub stationary_sd: f64,
    /// Amplitude of the late-afternoon pickup typical of coastal sites.
    pub afternoon_boost: f64,
}

impl Default for WindParams {
    fn default() -> Self {
        WindParams {
            persistence: 0.99,
            stationary_sd: 0.06,
            afternoon_boost: 0.10,
        }
    }
}

/// Synthesize a solar trace whose annual mean lands within half a
/// percentage point of `target_mean`. Night hours are exactly zero.
pub fn synth_solar(target_mean: f64, seed: u64) -> Result<CapacityFactorTrace, ProfileError> {
    synth_solar_with(target_mean, &SolarParams::default(), seed)
}

pub fn synth_solar_with(
    target_mean: f64,
    params: &SolarParams,
    seed: u64,
) -> Result<CapacityFactorTrace, ProfileError> {
    if !(target_mean > 0.0 && target_mean < 0.5) {
        return Err(ProfileError::InvalidTarget(target_mean));
    }
    if !(0.0..1.0).contains(&params.attenuation_persistence)
        || !(0.0..=1.0).contains(&params.attenuation_depth)
        || !(0.0..6.0).contains(&params.daylight_swing_hours)
    {
        return Err(ProfileError::InvalidParameter("solar shape"));
    }

    let mut rng = SeededRng::new(seed);
    let mut raw = Vec::with_capacity(HOURS);
    let mut cloud = 0.5;
    for day in 0..365 {
        // Southern-hemisphere summer solstice near day 355.
        let daylight = 12.0
            + params.daylight_swing_hours
                * math::cos(2.0 * math::PI * (day as f64 - 355.0) / 365.0);
        let sunrise = 12.0 - daylight / 2.0;
        let sunset = 12.0 + daylight / 2.0;
        cloud = params.attenuation_persistence * cloud
            + (1.0 - params.attenuation_persistence) * rng.uniform();
        let attenuation = 1.0 - params.attenuation_depth * cloud;
        for hour in 0..24 {
            let t = hour as f64 + 0.5;
            let v = if t > sunrise && t < sunset {
                let x = math::sin(math::PI * (t - sunrise) / daylight);
                math::powf(x, 1.1) * attenuation
            } else {
                0.0
            };
            raw.push(v);
        }
    }

    // Scale onto the target mean; clamping at 1.0 may drag the mean down,
    // so rescale a few times against the clamped result.
    let mut scale = target_mean / mean(&raw);
    let mut values = Vec::new();
    for _ in 0..6 {
        values = raw.iter().map(|v| (v * scale).min(1.0)).collect();
        let m = mean(&values);
        if (m - target_mean).abs() < 1e-6 {
            break;
        }
        scale *= target_mean / m;
    }
    let achieved = mean(&values);
    if (achieved - target_mean).abs() > 0.005 {
        return Err(ProfileError::TargetUnreachable {
            target: target_mean,
            achieved,
        });
    }
    CapacityFactorTrace::new(VariableTechnology::Solar, values)
}

/// Synthesize a wind trace whose annual mean lands within half a
/// percentage point of `target_mean`.
pub fn synth_wind(target_mean: f64, seed: u64) -> Result<CapacityFactorTrace, ProfileError> {
    synth_wind_with(target_mean, &WindParams::default(), seed)
}

pub fn synth_wind_with(
    target_mean: f64,
    params: &WindParams,
    seed: u64,
) -> Result<CapacityFactorTrace, ProfileError> {
    if !(target_mean > 0.0 && target_mean < 1.0) {
        return Err(ProfileError::InvalidTarget(target_mean));
    }
    if !(0.0..1.0).contains(&params.persistence)
        || !(params.stationary_sd > 0.0)
        || !(0.0..1.0).contains(&params.afternoon_boost)
    {
        return Err(ProfileError::InvalidParameter("wind shape"));
    }

    let phi = params.persistence;
    let sigma = params.stationary_sd * math::sqrt(1.0 - phi * phi);
    let mut rng = SeededRng::new(seed);
    let mut level = params.stationary_sd * rng.normal();
    let mut deviations = Vec::with_capacity(HOURS);
    for h in 0..HOURS {
        level = phi * level + sigma * rng.normal();
        let t = (h % 24) as f64;
        let d = (t - 17.0) / 3.0;
        let pickup = params.afternoon_boost * math::exp(-0.5 * d * d);
        deviations.push(level + pickup);
    }

    // The clamp biases the mean, so place the offset by bisection.
    let clamped_mean = |offset: f64| {
        deviations
            .iter()
            .map(|d| (offset + d).clamp(0.0, 1.0))
            .sum::<f64>()
            / HOURS as f64
    };
    let (mut lo, mut hi) = (-1.0, 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if clamped_mean(mid) < target_mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let offset = 0.5 * (lo + hi);
    let values: Vec<f64> = deviations
        .iter()
        .map(|d| (offset + d).clamp(0.0, 1.0))
        .collect();
    let achieved = mean(&values);
    if (achieved - target_mean).abs() > 0.005 {
        return Err(ProfileError::TargetUnreachable {
            target: target_mean,
            achieved,
        });
    }
    CapacityFactorTrace::new(VariableTechnology::Wind, values)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// A maximal contiguous run of hours where demand minus renewable supply
/// exceeds the threshold. `end_hour` is inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DroughtPeriod {
    pub start_hour: usize,
    pub end_hour: usize,
    pub mean_deficit_mw: f64,
}

impl DroughtPeriod {
    pub fn len_hours(&self) -> usize {
        self.end_hour - self.start_hour + 1
    }
}

/// Find maximal disjoint periods with `demand - renewable > threshold`.
/// The deficit reported is the mean of `demand - renewable` over the
/// period. Traces must have equal length.
pub fn detect_droughts(
    renewable_mw: &[f64],
    demand_mw: &[f64],
    threshold_mw: f64,
) -> Vec<DroughtPeriod> {
    assert_eq!(
        renewable_mw.len(),
        demand_mw.len(),
        "renewable and demand traces must have equal length"
    );
    let mut periods = Vec::new();
    let mut start = None;
    let mut acc = 0.0;
    for h in 0..demand_mw.len() {
        let deficit = demand_mw[h] - renewable_mw[h];
        if deficit > threshold_mw {
            if start.is_none() {
                start = Some(h);
                acc = 0.0;
            }
            acc += deficit;
        } else if let Some(s) = start.take() {
            periods.push(DroughtPeriod {
                start_hour: s,
                end_hour: h - 1,
                mean_deficit_mw: acc / (h - s) as f64,
            });
        }
    }
    if let Some(s) = start {
        let end = demand_mw.len() - 1;
        periods.push(DroughtPeriod {
            start_hour: s,
            end_hour: end,
            mean_deficit_mw: acc / (end - s + 1) as f64,
        });
    }
    periods
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solar_hits_target_mean_with_dark_nights() {
        let t = synth_solar(0.265, 42).unwrap();
        assert!((t.mean() - 0.265).abs() < 0.005);
        for day in 0..365 {
            assert_eq!(t.values()[day * 24], 0.0, "midnight of day {day}");
            assert_eq!(t.values()[day * 24 + 23], 0.0);
        }
        assert!(t.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn solar_is_deterministic_per_seed() {
        assert_eq!(synth_solar(0.265, 5).unwrap(), synth_solar(0.265, 5).unwrap());
        assert_ne!(synth_solar(0.265, 5).unwrap(), synth_solar(0.265, 6).unwrap());
    }

    #[test]
    fn solar_rejects_silly_targets() {
        assert!(matches!(
            synth_solar(0.0, 1),
            Err(ProfileError::InvalidTarget(_))
        ));
        assert!(matches!(
            synth_solar(0.5, 1),
            Err(ProfileError::InvalidTarget(_))
        ));
        // within (0, 0.5) but beyond what a day/night envelope can deliver
        assert!(matches!(
            synth_solar(0.49, 1),
            Err(ProfileError::TargetUnreachable { .. })
        ));
    }

    #[test]
    fn wind_hits_target_mean_within_bounds() {
        let t = synth_wind(0.326, 42).unwrap();
        assert!((t.mean() - 0.326).abs() < 0.005);
        assert!(t.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn wind_is_deterministic_per_seed() {
        assert_eq!(synth_wind(0.326, 5).unwrap(), synth_wind(0.326, 5).unwrap());
        assert_ne!(synth_wind(0.326, 5).unwrap(), synth_wind(0.326, 6).unwrap());
    }

    #[test]
    fn wind_is_strongly_autocorrelated() {
        let t = synth_wind(0.326, 13).unwrap();
        let v = t.values();
        let m = t.mean();
        let var: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
        let lag = 24;
        let cov: f64 = (0..v.len() - lag)
            .map(|i| (v[i] - m) * (v[i + lag] - m))
            .sum();
        let rho = cov / var;
        assert!(rho > 0.5, "daily autocorrelation {rho}");
    }

    #[test]
    fn trace_validation_reports_distinct_errors() {
        let short = alloc::vec![0.5; 100];
        assert!(matches!(
            CapacityFactorTrace::new(VariableTechnology::Wind, short),
            Err(ProfileError::WrongLength { got: 100, .. })
        ));
        let mut bad = alloc::vec![0.5; HOURS];
        bad[77] = 1.5;
        assert!(matches!(
            CapacityFactorTrace::new(VariableTechnology::Wind, bad),
            Err(ProfileError::OutOfRange { index: 77, .. })
        ));
    }

    #[test]
    fn droughts_are_maximal_disjoint_runs() {
        let demand = alloc::vec![10.0; 12];
        let mut renewable = alloc::vec![10.0; 12];
        // deficits at hours 2-4 and 7, threshold 3
        renewable[2] = 5.0;
        renewable[3] = 2.0;
        renewable[4] = 6.0;
        renewable[7] = 0.0;
        let periods = detect_droughts(&renewable, &demand, 3.0);
        assert_eq!(periods.len(), 2);
        assert_eq!((periods[0].start_hour, periods[0].end_hour), (2, 4));
        assert!((periods[0].mean_deficit_mw - (5.0 + 8.0 + 4.0) / 3.0).abs() < 1e-12);
        assert_eq!((periods[1].start_hour, periods[1].end_hour), (7, 7));
        assert_eq!(periods[1].len_hours(), 1);
        // boundary: exactly at threshold is not a drought
        let none = detect_droughts(&alloc::vec![7.0; 5], &alloc::vec![10.0; 5], 3.0);
        assert!(none.is_empty());
    }

    #[test]
    fn drought_hour_count_matches_pointwise_oracle() {
        let t = synth_wind(0.3, 21).unwrap();
        let renewable: Vec<f64> = t.values().iter().map(|v| v * 20_000.0).collect();
        let demand = alloc::vec![9_000.0; HOURS];
        let threshold = 2_000.0;
        let periods = detect_droughts(&renewable, &demand, threshold);
        let from_periods: usize = periods.iter().map(|p| p.len_hours()).sum();
        let pointwise = (0..HOURS)
            .filter(|&h| demand[h] - renewable[h] > threshold)
            .count();
        assert_eq!(from_periods, pointwise);
        // disjoint and maximal
        for w in periods.windows(2) {
            assert!(w[0].end_hour + 1 < w[1].start_hour);
        }
    }

    #[test]
    fn drought_detection_is_scale_invariant() {
        let t = synth_wind(0.3, 22).unwrap();
        let renewable: Vec<f64> = t.values().iter().map(|v| v * 20_000.0).collect();
        let demand = alloc::vec![9_000.0; HOURS];
        let base = detect_droughts(&renewable, &demand, 2_000.0);
        let c = 3.7;
        let r2: Vec<f64> = renewable.iter().map(|v| v * c).collect();
        let d2: Vec<f64> = demand.iter().map(|v| v * c).collect();
        let scaled = detect_droughts(&r2, &d2, 2_000.0 * c);
        assert_eq!(base.len(), scaled.len());
        for (a, b) in base.iter().zip(&scaled) {
            assert_eq!((a.start_hour, a.end_hour), (b.start_hour, b.end_hour));
        }
    }
}
