//! Annual demand trajectories, scenario envelopes, and synthesis of an
//! hourly load trace matching annual-energy and peak targets.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::fleet::HOURS_PER_YEAR;
use crate::math;
use crate::rng::SeededRng;

pub const HOURS: usize = 8760;

#[derive(Debug, Clone, PartialEq)]
pub enum DemandError {
    InvalidRate(f64),
    NonPositive(String),
    SpanMismatch { left: usize, right: usize },
    StartMismatch { left: i32, right: i32 },
    PeakBelowBaseload { peak_gw: f64, min_feasible_gw: f64 },
    Empty,
}

impl fmt::Display for DemandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemandError::InvalidRate(r) => {
                write!(f, "growth rate {r} must be greater than -1")
            }
            DemandError::NonPositive(what) => write!(f, "{what} must be positive"),
            DemandError::SpanMismatch { left, right } => {
                write!(f, "trajectory spans differ: {left} vs {right} years")
            }
            DemandError::StartMismatch { left, right } => {
                write!(f, "trajectory start years differ: {left} vs {right}")
            }
            DemandError::PeakBelowBaseload {
                peak_gw,
                min_feasible_gw,
            } => write!(
                f,
                "peak {peak_gw} GW is below the {min_feasible_gw:.2} GW implied by annual energy"
            ),
            DemandError::Empty => write!(f, "trajectory has no values"),
        }
    }
}

/// Annual energy by calendar year, TWh. Contiguous from `start_year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualDemandTrajectory {
    pub start_year: i32,
    pub values_twh: Vec<f64>,
}

impl AnnualDemandTrajectory {
    pub fn new(start_year: i32, values_twh: Vec<f64>) -> Result<Self, DemandError> {
        if values_twh.is_empty() {
            return Err(DemandError::Empty);
        }
        if values_twh.iter().any(|v| !(*v > 0.0)) {
            return Err(DemandError::NonPositive("annual energy".into()));
        }
        Ok(AnnualDemandTrajectory {
            start_year,
            values_twh,
        })
    }

    pub fn year_span(&self) -> (i32, i32) {
        (
            self.start_year,
            self.start_year + self.values_twh.len() as i32 - 1,
        )
    }

    pub fn value_at(&self, year: i32) -> Option<f64> {
        let idx = year.checked_sub(self.start_year)?;
        if idx < 0 {
            return None;
        }
        self.values_twh.get(idx as usize).copied()
    }
}

/// Compound extrapolation: value(k) = base * (1 + rate)^k for k = 0..=years.
pub fn extrapolate(
    base_twh: f64,
    annual_rate: f64,
    years: u32,
    start_year: i32,
) -> Result<AnnualDemandTrajectory, DemandError> {
    if !(base_twh > 0.0) {
        return Err(DemandError::NonPositive("base energy".into()));
    }
    if annual_rate <= -1.0 {
        return Err(DemandError::InvalidRate(annual_rate));
    }
    let values = (0..=years)
        .map(|k| base_twh * math::powi(1.0 + annual_rate, k as i32))
        .collect();
    AnnualDemandTrajectory::new(start_year, values)
}

/// Per-year low/high band between two trajectories covering the same span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandEnvelope {
    pub start_year: i32,
    pub low_twh: Vec<f64>,
    pub high_twh: Vec<f64>,
}

impl DemandEnvelope {
    pub fn gap_at(&self, year: i32) -> Option<f64> {
        let idx = usize::try_from(year.checked_sub(self.start_year)?).ok()?;
        Some(self.high_twh.get(idx)? - self.low_twh.get(idx)?)
    }
}

/// Pointwise min/max of two trajectories. Errors when the spans differ.
pub fn envelope(
    a: &AnnualDemandTrajectory,
    b: &AnnualDemandTrajectory,
) -> Result<DemandEnvelope, DemandError> {
    if a.start_year != b.start_year {
        return Err(DemandError::StartMismatch {
            left: a.start_year,
            right: b.start_year,
        });
    }
    if a.values_twh.len() != b.values_twh.len() {
        return Err(DemandError::SpanMismatch {
            left: a.values_twh.len(),
            right: b.values_twh.len(),
        });
    }
    let low = a
        .values_twh
        .iter()
        .zip(&b.values_twh)
        .map(|(x, y)| x.min(*y))
        .collect();
    let high = a
        .values_twh
        .iter()
        .zip(&b.values_twh)
        .map(|(x, y)| x.max(*y))
        .collect();
    Ok(DemandEnvelope {
        start_year: a.start_year,
        low_twh: low,
        high_twh: high,
    })
}

/// A named demand scenario: annual energy today, compound growth, and the
/// peak the system must carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandScenario {
    pub name: String,
    pub base_energy_twh: f64,
    pub annual_growth_rate: f64,
    pub peak_gw: f64,
}

impl DemandScenario {
    pub fn validate(&self) -> Result<(), DemandError> {
        if !(self.base_energy_twh > 0.0) {
            return Err(DemandError::NonPositive("base energy".into()));
        }
        if self.annual_growth_rate <= -1.0 {
            return Err(DemandError::InvalidRate(self.annual_growth_rate));
        }
        let min_feasible = self.base_energy_twh / 8.76;
        if self.peak_gw < min_feasible {
            return Err(DemandError::PeakBelowBaseload {
                peak_gw: self.peak_gw,
                min_feasible_gw: min_feasible,
            });
        }
        Ok(())
    }
}

/// Shape controls for the synthetic hourly trace: a winter-peaking seasonal
/// swing times a double-peaked working-day profile plus seeded noise, then
/// an affine rescale onto the annual-energy and peak targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandShape {
    /// Relative amplitude of the seasonal swing (peak near mid-year).
    pub seasonal_amplitude: f64,
    /// Height of the morning peak relative to the daily base.
    pub morning_peak: f64,
    /// Height of the evening peak relative to the daily base.
    pub evening_peak: f64,
    /// Stationary standard deviation of multiplicative noise.
    pub noise_sd: f64,
    /// Hour-to-hour persistence of the noise, in [0, 1). Persistent noise
    /// behaves like weather-driven load swings, so the annual peak becomes
    /// a rare cold-snap evening instead of an everyday occurrence.
    pub noise_persistence: f64,
}

impl Default for DemandShape {
    fn default() -> Self {
        DemandShape {
            seasonal_amplitude: 0.12,
            morning_peak: 0.22,
            evening_peak: 0.30,
            noise_sd: 0.04,
            noise_persistence: 0.9,
        }
    }
}

/// Hourly load in MW for one simulated year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyDemandTrace {
    values_mw: Vec<f64>,
}

impl HourlyDemandTrace {
    pub fn new(values_mw: Vec<f64>) -> Result<Self, DemandError> {
        if values_mw.len() != HOURS {
            return Err(DemandError::SpanMismatch {
                left: values_mw.len(),
                right: HOURS,
            });
        }
        if values_mw.iter().any(|v| !(*v >= 0.0)) {
            return Err(DemandError::NonPositive("hourly demand".into()));
        }
        Ok(HourlyDemandTrace { values_mw })
    }

    pub fn values(&self) -> &[f64] {
        &self.values_mw
    }

    pub fn annual_twh(&self) -> f64 {
        self.values_mw.iter().sum::<f64>() / 1e6
    }

    pub fn peak_mw(&self) -> f64 {
        self.values_mw.iter().cloned().fold(0.0, f64::max)
    }
}

/// Synthesize one year of hourly demand hitting `annual_twh` (within 0.1%)
/// and `peak_gw` (within 0.5%). Identical seeds give identical traces.
pub fn synthesize_hourly(
    annual_twh: f64,
    peak_gw: f64,
    shape: &DemandShape,
    seed: u64,
) -> Result<HourlyDemandTrace, DemandError> {
    if !(annual_twh > 0.0) {
        return Err(DemandError::NonPositive("annual energy".into()));
    }
    if !(peak_gw > 0.0) {
        return Err(DemandError::NonPositive("peak".into()));
    }
    let mean_target_mw = annual_twh * 1e6 / HOURS_PER_YEAR;
    let peak_target_mw = peak_gw * 1000.0;
    if peak_target_mw < mean_target_mw * (1.0 - 1e-9) {
        return Err(DemandError::PeakBelowBaseload {
            peak_gw,
            min_feasible_gw: mean_target_mw / 1000.0,
        });
    }

    let mut rng = SeededRng::new(seed);
    let mut raw = Vec::with_capacity(HOURS);
    let phi = shape.noise_persistence.clamp(0.0, 0.999);
    let innovation_sd = shape.noise_sd * math::sqrt(1.0 - phi * phi);
    let mut noise_level = shape.noise_sd * rng.normal();
    for h in 0..HOURS {
        let day = (h / 24) as f64;
        let hour = (h % 24) as f64;
        // Southern-hemisphere winter peak: maximum near day 172.
        let seasonal =
            1.0 + shape.seasonal_amplitude * math::cos(2.0 * math::PI * (day - 172.0) / 365.0);
        let morning = shape.morning_peak * gauss_bump(hour, 7.5, 2.0);
        let evening = shape.evening_peak * gauss_bump(hour, 19.0, 2.4);
        let overnight_dip = -0.18 * gauss_bump(hour, 3.0, 3.0);
        let diurnal = 1.0 + morning + evening + overnight_dip;
        noise_level = phi * noise_level + innovation_sd * rng.normal();
        let noise = 1.0 + noise_level;
        raw.push(seasonal * diurnal * noise.max(0.0));
    }

    let raw_mean = raw.iter().sum::<f64>() / HOURS_PER_YEAR;
    let raw_peak = raw.iter().cloned().fold(0.0, f64::max);

    // Affine map a*x + b takes (raw_mean, raw_peak) onto the targets.
    let spread = raw_peak - raw_mean;
    let (a, b) = if spread.abs() < 1e-12 || (peak_target_mw - mean_target_mw).abs() < 1e-9 {
        (0.0, mean_target_mw)
    } else {
        let a = (peak_target_mw - mean_target_mw) / spread;
        (a, mean_target_mw - a * raw_mean)
    };
    let values: Vec<f64> = raw.iter().map(|x| (a * x + b).max(0.0)).collect();
    HourlyDemandTrace::new(values)
}

fn gauss_bump(x: f64, center: f64, width: f64) -> f64 {
    let d = (x - center) / width;
    math::exp(-0.5 * d * d)
}
