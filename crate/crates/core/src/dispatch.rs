//! Chronological merit-order dispatch against an hourly demand trace.
//!
//! Order per hour: wind and solar first, then baseload derated by its
//! availability, then storage discharge, then firm dispatchable capacity,
//! with any remainder recorded as unserved. Storage charges only from
//! wind and solar surplus, never from baseload or firm units.
//!
//! Storage flows are grid-side megawatts: the state of charge gains
//! `charge * eta_c` and loses `discharge / eta_d`, where the one-way
//! efficiencies are each the square root of the round-trip efficiency,
//! so their product recovers the round-trip figure. The starting state
//! of charge is a caller-supplied fraction; [`DEFAULT_INITIAL_SOC`] is
//! half full.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::demand::HourlyDemandTrace;
use crate::fleet::HOURS_PER_YEAR;
use crate::math;
use crate::profiles::CapacityFactorTrace;

pub const DEFAULT_INITIAL_SOC: f64 = 0.5;

/// Installed capacities seen by the dispatcher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationMix {
    pub baseload_gw: f64,
    /// Mean availability applied to baseload nameplate, in [0, 1].
    pub baseload_availability: f64,
    pub wind_gw: f64,
    pub solar_gw: f64,
    pub storage_power_gw: f64,
    pub storage_energy_gwh: f64,
    pub firm_gw: f64,
    /// AC-to-AC round-trip efficiency of storage, in (0, 1].
    pub storage_round_trip_efficiency: f64,
}

impl GenerationMix {
    pub fn validate(&self) -> Result<(), DispatchError> {
        let caps = [
            self.baseload_gw,
            self.wind_gw,
            self.solar_gw,
            self.storage_power_gw,
            self.storage_energy_gwh,
            self.firm_gw,
        ];
        if caps.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(DispatchError::InvalidMix("capacities must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.baseload_availability) {
            return Err(DispatchError::InvalidMix("baseload availability outside [0, 1]"));
        }
        if !(self.storage_round_trip_efficiency > 0.0
            && self.storage_round_trip_efficiency <= 1.0)
        {
            return Err(DispatchError::InvalidMix("round-trip efficiency outside (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DispatchError {
    LengthMismatch {
        series: &'static str,
        got: usize,
        expected: usize,
    },
    InvalidMix(&'static str),
    InvalidInitialSoc(f64),
    EmptyHorizon,
}

impl fmt::Display for DispatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispatchError::LengthMismatch {
                series,
                got,
                expected,
            } => write!(f, "{series} trace has {got} hours, expected {expected}"),
            DispatchError::InvalidMix(what) => write!(f, "invalid generation mix: {what}"),
            DispatchError::InvalidInitialSoc(v) => {
                write!(f, "initial state of charge {v} outside [0, 1]")
            }
            DispatchError::EmptyHorizon => write!(f, "dispatch horizon is empty"),
        }
    }
}

/// Hour-by-hour dispatch outcome. All series are megawatts except
/// `soc_mwh`, the storage state of charge at the end of each hour.
/// `wind_mw` and `solar_mw` are the available (pre-curtailment) output;
/// `curtailment_mw` absorbs the surplus, so for every hour
/// `wind + solar + baseload + discharge + firm + unserved
///  - charge - curtailment = demand`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchResult {
    pub demand_mw: Vec<f64>,
    pub wind_mw: Vec<f64>,
    pub solar_mw: Vec<f64>,
    pub baseload_mw: Vec<f64>,
    pub charge_mw: Vec<f64>,
    pub discharge_mw: Vec<f64>,
    pub firm_mw: Vec<f64>,
    pub unserved_mw: Vec<f64>,
    pub curtailment_mw: Vec<f64>,
    pub soc_mwh: Vec<f64>,
}

/// Aggregate scarcity measures for one dispatch run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnservedStats {
    pub total_mwh: f64,
    pub hours: usize,
    pub max_consecutive_hours: usize,
}

impl DispatchResult {
    pub fn len(&self) -> usize {
        self.demand_mw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demand_mw.is_empty()
    }

    fn sum_twh(series: &[f64]) -> f64 {
        series.iter().sum::<f64>() / 1.0e6
    }

    pub fn wind_twh(&self) -> f64 {
        Self::sum_twh(&self.wind_mw)
    }

    pub fn solar_twh(&self) -> f64 {
        Self::sum_twh(&self.solar_mw)
    }

    pub fn baseload_twh(&self) -> f64 {
        Self::sum_twh(&self.baseload_mw)
    }

    pub fn firm_twh(&self) -> f64 {
        Self::sum_twh(&self.firm_mw)
    }

    pub fn curtailed_twh(&self) -> f64 {
        Self::sum_twh(&self.curtailment_mw)
    }

    pub fn demand_twh(&self) -> f64 {
        Self::sum_twh(&self.demand_mw)
    }

    /// Share of the period the firm fleet would have produced at full
    /// output, as a percentage.
    pub fn firm_utilization_percent(&self, firm_gw: f64) -> f64 {
        if firm_gw <= 0.0 {
            return 0.0;
        }
        let possible_mwh = firm_gw * 1000.0 * self.len() as f64;
        100.0 * self.firm_mw.iter().sum::<f64>() / possible_mwh
    }

    pub fn unserved_stats(&self) -> UnservedStats {
        let mut total = 0.0;
        let mut hours = 0;
        let mut run = 0;
        let mut max_run = 0;
        for &u in &self.unserved_mw {
            if u > 0.0 {
                total += u;
                hours += 1;
                run += 1;
                if run > max_run {
                    max_run = run;
                }
            } else {
                run = 0;
            }
        }
        UnservedStats {
            total_mwh: total,
            hours,
            max_consecutive_hours: max_run,
        }
    }

    /// Largest absolute hourly violation of the supply-demand identity,
    /// in megawatts. Zero up to float rounding for any valid run.
    pub fn max_balance_error_mw(&self) -> f64 {
        let mut worst = 0.0f64;
        for h in 0..self.len() {
            let lhs = self.wind_mw[h] + self.solar_mw[h] + self.baseload_mw[h]
                + self.discharge_mw[h]
                + self.firm_mw[h]
                + self.unserved_mw[h]
                - self.charge_mw[h]
                - self.curtailment_mw[h];
            let err = math::abs(lhs - self.demand_mw[h]);
            if err > worst {
                worst = err;
            }
        }
        worst
    }
}

/// Dispatch over an arbitrary horizon. All traces must have equal,
/// non-zero length; one entry is one hour. `initial_soc` is the starting
/// state of charge as a fraction of storage energy capacity.
pub fn simulate_horizon(
    demand_mw: &[f64],
    wind_cf: &[f64],
    solar_cf: &[f64],
    mix: &GenerationMix,
    initial_soc: f64,
) -> Result<DispatchResult, DispatchError> {
    mix.validate()?;
    if !(0.0..=1.0).contains(&initial_soc) {
        return Err(DispatchError::InvalidInitialSoc(initial_soc));
    }
    let n = demand_mw.len();
    if n == 0 {
        return Err(DispatchError::EmptyHorizon);
    }
    if wind_cf.len() != n {
        return Err(DispatchError::LengthMismatch {
            series: "wind",
            got: wind_cf.len(),
            expected: n,
        });
    }
    if solar_cf.len() != n {
        return Err(DispatchError::LengthMismatch {
            series: "solar",
            got: solar_cf.len(),
            expected: n,
        });
    }

    let wind_cap = mix.wind_gw * 1000.0;
    let solar_cap = mix.solar_gw * 1000.0;
    let baseload_avail = mix.baseload_gw * 1000.0 * mix.baseload_availability;
    let storage_power = mix.storage_power_gw * 1000.0;
    let storage_cap = mix.storage_energy_gwh * 1000.0;
    let firm_cap = mix.firm_gw * 1000.0;
    let eta = math::sqrt(mix.storage_round_trip_efficiency);

    let mut out = DispatchResult {
        demand_mw: demand_mw.to_vec(),
        wind_mw: Vec::with_capacity(n),
        solar_mw: Vec::with_capacity(n),
        baseload_mw: Vec::with_capacity(n),
        charge_mw: Vec::with_capacity(n),
        discharge_mw: Vec::with_capacity(n),
        firm_mw: Vec::with_capacity(n),
        unserved_mw: Vec::with_capacity(n),
        curtailment_mw: Vec::with_capacity(n),
        soc_mwh: Vec::with_capacity(n),
    };

    let mut soc = initial_soc * storage_cap;
    for h in 0..n {
        let wind = wind_cap * wind_cf[h];
        let solar = solar_cap * solar_cf[h];
        let renewable = wind + solar;
        let demand = demand_mw[h];

        let (baseload, charge, discharge, firm, unserved, curtailed);
        if renewable >= demand {
            // Surplus hour: store what fits, shed the rest.
            let surplus = renewable - demand;
            let headroom = (storage_cap - soc) / eta;
            charge = surplus.min(storage_power).min(headroom);
            soc += charge * eta;
            curtailed = surplus - charge;
            baseload = 0.0;
            discharge = 0.0;
            firm = 0.0;
            unserved = 0.0;
        } else {
            let mut residual = demand - renewable;
            baseload = residual.min(baseload_avail);
            residual -= baseload;
            discharge = residual.min(storage_power).min(soc * eta);
            soc -= discharge / eta;
            residual -= discharge;
            firm = residual.min(firm_cap);
            residual -= firm;
            unserved = residual;
            charge = 0.0;
            curtailed = 0.0;
        }

        out.wind_mw.push(wind);
        out.solar_mw.push(solar);
        out.baseload_mw.push(baseload);
        out.charge_mw.push(charge);
        out.discharge_mw.push(discharge);
        out.firm_mw.push(firm);
        out.unserved_mw.push(unserved);
        out.curtailment_mw.push(curtailed);
        out.soc_mwh.push(soc);
    }
    Ok(out)
}

/// Dispatch one full year; traces must cover exactly 8760 hours.
pub fn simulate_year(
    demand: &HourlyDemandTrace,
    wind: &CapacityFactorTrace,
    solar: &CapacityFactorTrace,
    mix: &GenerationMix,
    initial_soc: f64,
) -> Result<DispatchResult, DispatchError> {
    let n = HOURS_PER_YEAR as usize;
    debug_assert_eq!(demand.values().len(), n);
    simulate_horizon(demand.values(), wind.values(), solar.values(), mix, initial_soc)
}
