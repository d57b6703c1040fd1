//! Capacity sizing, firm-floor gap accounting, multi-year build
//! scheduling with shortfall catch-up, site reassignment, and replanning.
//!
//! Scheduling conventions: program years for commissioning run from
//! `start + 1` through `start + horizon`. The firm program commissions
//! over a window sized by the nominal rate (target / nominal years);
//! any initial gap is recovered first at the maximum annual rate, and
//! the remainder is spread uniformly across the rest of the window.
//! Wind, solar and battery additions are uniform across the whole
//! horizon starting after a one-year lead.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::fleet::{DispatchClass, Fleet};
use crate::math;

pub const FIRM_TECHNOLOGY: &str = "ocgt";
pub const WIND_TECHNOLOGY: &str = "wind";
pub const SOLAR_TECHNOLOGY: &str = "solar";
pub const STORAGE_TECHNOLOGY: &str = "battery";
/// Wind, solar and battery procurement is assumed to deliver from the
/// first program year onward.
pub const RENEWABLE_LEAD_YEARS: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityUnit {
    Gw,
    Gwh,
}

impl fmt::Display for CapacityUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityUnit::Gw => write!(f, "GW"),
            CapacityUnit::Gwh => write!(f, "GWh"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildEntry {
    pub year: i32,
    pub technology: String,
    pub capacity: f64,
    pub unit: CapacityUnit,
    pub site_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildSchedule {
    pub start_year: i32,
    pub horizon_years: u32,
    pub entries: Vec<BuildEntry>,
}

impl BuildSchedule {
    pub fn empty(start_year: i32, horizon_years: u32) -> Self {
        BuildSchedule {
            start_year,
            horizon_years,
            entries: Vec::new(),
        }
    }

    pub fn total(&self, technology: &str) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.technology == technology)
            .map(|e| e.capacity)
            .sum()
    }

    pub fn annual_total(&self, year: i32, technology: &str) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.year == year && e.technology == technology)
            .map(|e| e.capacity)
            .sum()
    }

    /// Capacity commissioned up to and including `year`.
    pub fn cumulative_total(&self, year: i32, technology: &str) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.year <= year && e.technology == technology)
            .map(|e| e.capacity)
            .sum()
    }

    pub fn merge(mut self, other: BuildSchedule) -> BuildSchedule {
        self.entries.extend(other.entries);
        self.entries.sort_by(|a, b| {
            (a.year, a.technology.as_str()).cmp(&(b.year, b.technology.as_str()))
        });
        self
    }

    /// Check entry-level invariants against per-technology lead times.
    pub fn validate(&self, lead_times: &[(&str, u32)]) -> Result<(), PlanError> {
        for e in &self.entries {
            if !(e.capacity > 0.0) {
                return Err(PlanError::Invalid("schedule entry with non-positive capacity"));
            }
            let last = self.start_year + self.horizon_years as i32;
            if e.year <= self.start_year || e.year > last {
                return Err(PlanError::Invalid("schedule entry outside planning horizon"));
            }
            if let Some((_, lead)) = lead_times.iter().find(|(t, _)| *t == e.technology) {
                if e.year < self.start_year + *lead as i32 {
                    return Err(PlanError::Invalid(
                        "schedule entry commissions before its technology lead time",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// End-state quantities and pacing for the transition program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramTargets {
    pub horizon_years: u32,
    pub firm_target_gw: f64,
    pub wind_gw: f64,
    pub solar_gw: f64,
    pub storage_gwh: f64,
    /// Minimum firm-capable capacity the system must keep, anchored to
    /// peak demand under reference conditions.
    pub firm_floor_gw: f64,
    /// Steady-state commissioning pace for firm capacity.
    pub nominal_firm_rate_gw: f64,
    /// Ceiling on firm commissioning in any single year (catch-up).
    pub max_firm_rate_gw: f64,
}

impl Default for ProgramTargets {
    fn default() -> Self {
        ProgramTargets {
            horizon_years: 25,
            firm_target_gw: 15.0,
            wind_gw: 49.0,
            solar_gw: 14.0,
            storage_gwh: 24.0,
            firm_floor_gw: 35.0,
            nominal_firm_rate_gw: 0.75,
            max_firm_rate_gw: 2.5,
        }
    }
}

impl ProgramTargets {
    pub fn validate(&self) -> Result<(), PlanError> {
        if self.horizon_years < 1 {
            return Err(PlanError::Invalid("horizon must cover at least one year"));
        }
        let quantities = [
            self.firm_target_gw,
            self.wind_gw,
            self.solar_gw,
            self.storage_gwh,
            self.firm_floor_gw,
        ];
        if quantities.iter().any(|q| !q.is_finite() || *q < 0.0) {
            return Err(PlanError::Invalid("targets must be finite and non-negative"));
        }
        if !(self.nominal_firm_rate_gw > 0.0) || !(self.max_firm_rate_gw > 0.0) {
            return Err(PlanError::Invalid("build rates must be positive"));
        }
        if self.max_firm_rate_gw < self.nominal_firm_rate_gw {
            return Err(PlanError::Invalid("maximum rate below nominal rate"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanError {
    GapExceedsTarget { gap_gw: f64, target_gw: f64 },
    LeadBeyondHorizon { lead_years: u32, horizon_years: u32 },
    WindowBeyondHorizon { needed_years: u32, available_years: u32 },
    ZeroEaf,
    Invalid(&'static str),
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::GapExceedsTarget { gap_gw, target_gw } => write!(
                f,
                "initial gap {gap_gw} GW exceeds the firm build target {target_gw} GW; raise the target or lower the floor"
            ),
            PlanError::LeadBeyondHorizon {
                lead_years,
                horizon_years,
            } => write!(
                f,
                "lead time {lead_years} y leaves no commissioning year inside the {horizon_years} y horizon"
            ),
            PlanError::WindowBeyondHorizon {
                needed_years,
                available_years,
            } => write!(
                f,
                "firm program needs {needed_years} commissioning years but only {available_years} remain in the horizon"
            ),
            PlanError::ZeroEaf => write!(f, "replacement sizing requires a positive availability factor"),
            PlanError::Invalid(what) => write!(f, "{what}"),
        }
    }
}

/// Capacity of new always-available plant delivering the same annual
/// energy as the retiring capacity did at its historical capacity factor.
pub fn replacement_capacity(
    decommissioned_gw: f64,
    legacy_cf: f64,
    new_eaf: f64,
) -> Result<f64, PlanError> {
    if !(new_eaf > 0.0) {
        return Err(PlanError::ZeroEaf);
    }
    Ok(decommissioned_gw * legacy_cf / new_eaf)
}

/// How firm-capable capacity is counted against the floor.
///
/// `Derated` counts baseload, storage and firm classes at nameplate times
/// their availability for the year (technologies with constant 1.0
/// availability, such as hydro, pumped storage and peakers, stay at
/// nameplate). `DeratedExcludingStorage` additionally drops the storage
/// class on the grounds that its energy runs out during multi-day
/// shortfalls; this is the accounting under which the 2024 baseline
/// shortfall against a 35 GW floor exceeds 10 GW. `Nameplate` ignores
/// availability entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorConvention {
    Nameplate,
    #[default]
    Derated,
    DeratedExcludingStorage,
}

/// Firm-capable capacity in `year` under the given accounting convention.
pub fn effective_firm_capacity_gw(fleet: &Fleet, year: i32, convention: FloorConvention) -> f64 {
    let mut total = 0.0;
    for plant in fleet.plants() {
        if !plant.active_in(year) {
            continue;
        }
        let Some(tech) = fleet.technology(&plant.technology) else {
            continue;
        };
        let include = match tech.dispatch_class {
            DispatchClass::Baseload | DispatchClass::FirmDispatchable => true,
            DispatchClass::Storage => convention != FloorConvention::DeratedExcludingStorage,
            DispatchClass::Variable => false,
        };
        if !include {
            continue;
        }
        let factor = match convention {
            FloorConvention::Nameplate => 1.0,
            _ => fleet
                .availability_model(&plant.technology)
                .map(|m| m.value(plant.age_in(year) as f64, year as f64))
                .unwrap_or(1.0),
        };
        total += plant.nameplate_mw / 1000.0 * factor;
    }
    total
}

/// Shortfall against the firm-capacity floor, clamped at zero.
pub fn firm_floor_gap(
    fleet: &Fleet,
    year: i32,
    floor_gw: f64,
    convention: FloorConvention,
) -> f64 {
    let effective = effective_firm_capacity_gw(fleet, year, convention);
    (floor_gw - effective).max(0.0)
}

fn push_split(
    entries: &mut Vec<BuildEntry>,
    year: i32,
    technology: &str,
    capacity: f64,
    unit: CapacityUnit,
    max_unit: f64,
) {
    let mut left = capacity;
    while left > 0.0 {
        let chunk = if max_unit > 0.0 { left.min(max_unit) } else { left };
        entries.push(BuildEntry {
            year,
            technology: technology.to_string(),
            capacity: chunk,
            unit,
            site_id: None,
        });
        left -= chunk;
        if left <= 1e-12 {
            break;
        }
    }
}

/// Plan the firm-capacity program: recover `initial_gap_gw` as early as
/// the lead time allows at the maximum rate, then spread the remainder
/// uniformly across the rest of the nominal commissioning window. Annual
/// additions are split into units no larger than `firm_unit_max_gw`.
pub fn build_program(
    targets: &ProgramTargets,
    initial_gap_gw: f64,
    firm_lead_years: u32,
    start_year: i32,
    firm_unit_max_gw: f64,
) -> Result<BuildSchedule, PlanError> {
    targets.validate()?;
    if !(initial_gap_gw >= 0.0) {
        return Err(PlanError::Invalid("initial gap must be non-negative"));
    }
    if initial_gap_gw > targets.firm_target_gw {
        return Err(PlanError::GapExceedsTarget {
            gap_gw: initial_gap_gw,
            target_gw: targets.firm_target_gw,
        });
    }
    let mut schedule = BuildSchedule::empty(start_year, targets.horizon_years);
    if targets.firm_target_gw == 0.0 {
        return Ok(schedule);
    }
    if firm_lead_years >= targets.horizon_years {
        return Err(PlanError::LeadBeyondHorizon {
            lead_years: firm_lead_years,
            horizon_years: targets.horizon_years,
        });
    }

    let window_len =
        math::ceil(targets.firm_target_gw / targets.nominal_firm_rate_gw) as u32;
    let available = targets.horizon_years - firm_lead_years;
    if window_len > available {
        return Err(PlanError::WindowBeyondHorizon {
            needed_years: window_len,
            available_years: available,
        });
    }
    let first = start_year + firm_lead_years as i32;
    let last = first + window_len as i32 - 1;

    // Catch-up phase at the maximum rate.
    let mut year = first;
    let mut gap_left = initial_gap_gw;
    while gap_left > 1e-12 {
        if year > last {
            return Err(PlanError::WindowBeyondHorizon {
                needed_years: window_len + 1,
                available_years: available,
            });
        }
        let add = gap_left.min(targets.max_firm_rate_gw);
        push_split(
            &mut schedule.entries,
            year,
            FIRM_TECHNOLOGY,
            add,
            CapacityUnit::Gw,
            firm_unit_max_gw,
        );
        gap_left -= add;
        year += 1;
    }

    // Uniform remainder over what is left of the window.
    let remainder = targets.firm_target_gw - initial_gap_gw;
    if remainder > 1e-12 {
        let years_left = (last - year + 1).max(1) as f64;
        let rate = remainder / years_left;
        while year <= last {
            push_split(
                &mut schedule.entries,
                year,
                FIRM_TECHNOLOGY,
                rate,
                CapacityUnit::Gw,
                firm_unit_max_gw,
            );
            year += 1;
        }
    }
    Ok(schedule)
}

/// Uniform wind, solar and battery additions reaching the end state by
/// the horizon's final year, starting after a one-year lead.
pub fn renewable_buildout(targets: &ProgramTargets, start_year: i32) -> Result<BuildSchedule, PlanError> {
    targets.validate()?;
    let mut schedule = BuildSchedule::empty(start_year, targets.horizon_years);
    let n = targets.horizon_years as i32;
    for (technology, end_state, unit) in [
        (WIND_TECHNOLOGY, targets.wind_gw, CapacityUnit::Gw),
        (SOLAR_TECHNOLOGY, targets.solar_gw, CapacityUnit::Gw),
        (STORAGE_TECHNOLOGY, targets.storage_gwh, CapacityUnit::Gwh),
    ] {
        if end_state <= 0.0 {
            continue;
        }
        let rate = end_state / n as f64;
        for k in 0..n {
            schedule.entries.push(BuildEntry {
                year: start_year + RENEWABLE_LEAD_YEARS as i32 + k,
                technology: technology.to_string(),
                capacity: rate,
                unit,
                site_id: None,
            });
        }
    }
    schedule.entries.sort_by(|a, b| {
        (a.year, a.technology.as_str()).cmp(&(b.year, b.technology.as_str()))
    });
    Ok(schedule)
}

/// A decommissioned plant's site and how much capacity it can host.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetiredSite {
    pub site_id: String,
    pub nameplate_gw: f64,
    pub retirement_year: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteAssignment {
    pub site_id: String,
    pub year: i32,
    pub technology: String,
    pub capacity_gw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteAssignments {
    pub assignments: Vec<SiteAssignment>,
    /// Whole units that fit no site; reported for greenfield siting.
    pub unassigned: Vec<BuildEntry>,
}

impl SiteAssignments {
    pub fn assigned_gw(&self) -> f64 {
        self.assignments.iter().map(|a| a.capacity_gw).sum()
    }

    pub fn unassigned_gw(&self) -> f64 {
        self.unassigned.iter().map(|e| e.capacity).sum()
    }
}

/// Place new firm units on retired sites, greedily filling the largest
/// remaining headroom first. Units are never split across sites, and a
/// site only becomes available in its retirement year. Capacities are
/// gigawatts.
pub fn assign_sites(retired: &[RetiredSite], new_firm: &[BuildEntry]) -> SiteAssignments {
    let mut headroom: Vec<(String, i32, f64)> = retired
        .iter()
        .map(|s| (s.site_id.clone(), s.retirement_year, s.nameplate_gw))
        .collect();
    // Deterministic tie-breaking regardless of input order.
    headroom.sort_by(|a, b| a.0.cmp(&b.0));

    let mut entries: Vec<&BuildEntry> = new_firm.iter().collect();
    entries.sort_by(|a, b| (a.year, a.technology.as_str()).cmp(&(b.year, b.technology.as_str())));

    let mut out = SiteAssignments {
        assignments: Vec::new(),
        unassigned: Vec::new(),
    };
    for entry in entries {
        let mut best: Option<usize> = None;
        for (i, (_, retire_year, room)) in headroom.iter().enumerate() {
            if *retire_year > entry.year || *room + 1e-12 < entry.capacity {
                continue;
            }
            match best {
                Some(j) if headroom[j].2 >= *room => {}
                _ => best = Some(i),
            }
        }
        match best {
            Some(i) => {
                headroom[i].2 -= entry.capacity;
                out.assignments.push(SiteAssignment {
                    site_id: headroom[i].0.clone(),
                    year: entry.year,
                    technology: entry.technology.clone(),
                    capacity_gw: entry.capacity,
                });
            }
            None => out.unassigned.push(entry.clone()),
        }
    }
    out
}

/// Observed state used to revise a plan mid-program.
#[derive(Debug, Clone)]
pub struct Observations<'a> {
    /// First year whose additions may still be changed by new orders.
    pub as_of_year: i32,
    /// The fleet as it currently stands, including already-commissioned
    /// program additions and any revised availability models.
    pub fleet: &'a Fleet,
    /// Latest projected annual energy for the horizon's final year.
    pub projected_end_energy_twh: f64,
    /// The projection the original floor was anchored to.
    pub reference_end_energy_twh: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplanOutcome {
    pub schedule: BuildSchedule,
    /// Floor shortfall that no feasible schedule could close, in GW.
    pub residual_gap_gw: f64,
    /// The demand-scaled floor the revision was planned against.
    pub effective_floor_gw: f64,
}

/// Revise the firm program against observed conditions. Entries already
/// commissioned or in construction (before `as_of_year + lead`) are kept
/// verbatim; later entries are re-derived with the same catch-up rule
/// against the updated floor gap. The floor scales with the ratio of the
/// projected to the reference end-state energy, keeping it anchored to
/// peak demand. When even the maximum rate cannot close the gap within
/// the horizon, the schedule holds the maximum pace and the outcome
/// reports the residual.
pub fn replan(
    current: &BuildSchedule,
    observed: &Observations<'_>,
    targets: &ProgramTargets,
    firm_lead_years: u32,
    firm_unit_max_gw: f64,
) -> Result<ReplanOutcome, PlanError> {
    targets.validate()?;
    if !(observed.reference_end_energy_twh > 0.0) {
        return Err(PlanError::Invalid("reference energy must be positive"));
    }
    let committed_before = observed.as_of_year + firm_lead_years as i32;
    let mut schedule = BuildSchedule::empty(current.start_year, targets.horizon_years);
    schedule.entries = current
        .entries
        .iter()
        .filter(|e| e.year < committed_before)
        .cloned()
        .collect();
    let committed_firm: f64 = schedule
        .entries
        .iter()
        .filter(|e| e.technology == FIRM_TECHNOLOGY)
        .map(|e| e.capacity)
        .sum();

    let effective_floor = targets.firm_floor_gw * observed.projected_end_energy_twh
        / observed.reference_end_energy_twh;
    // Gap once everything already ordered is on line.
    let committed_future: f64 = schedule
        .entries
        .iter()
        .filter(|e| e.technology == FIRM_TECHNOLOGY && e.year >= observed.as_of_year)
        .map(|e| e.capacity)
        .sum();
    let gap_now = firm_floor_gap(
        observed.fleet,
        observed.as_of_year,
        effective_floor,
        FloorConvention::default(),
    );
    let open_gap = (gap_now - committed_future).max(0.0);

    let remaining_target = (targets.firm_target_gw - committed_firm).max(0.0);
    let catch_up = open_gap.min(remaining_target);
    let residual = (open_gap - remaining_target).max(0.0);

    let first = committed_before.max(current.start_year + firm_lead_years as i32);
    let window_len =
        math::ceil(targets.firm_target_gw / targets.nominal_firm_rate_gw) as i32;
    let nominal_last = current.start_year + firm_lead_years as i32 + window_len - 1;
    let horizon_last = current.start_year + targets.horizon_years as i32;
    let last = nominal_last.min(horizon_last).max(first);

    let mut year = first;
    let mut gap_left = catch_up;
    while gap_left > 1e-12 && year <= horizon_last {
        let add = gap_left.min(targets.max_firm_rate_gw);
        push_split(
            &mut schedule.entries,
            year,
            FIRM_TECHNOLOGY,
            add,
            CapacityUnit::Gw,
            firm_unit_max_gw,
        );
        gap_left -= add;
        year += 1;
    }
    let remainder = (remaining_target - catch_up + gap_left).max(0.0);
    if remainder > 1e-12 && year <= last {
        let years_left = (last - year + 1) as f64;
        let rate = remainder / years_left;
        while year <= last {
            push_split(
                &mut schedule.entries,
                year,
                FIRM_TECHNOLOGY,
                rate,
                CapacityUnit::Gw,
                firm_unit_max_gw,
            );
            year += 1;
        }
    }
    schedule.entries.sort_by(|a, b| {
        (a.year, a.technology.as_str()).cmp(&(b.year, b.technology.as_str()))
    });
    Ok(ReplanOutcome {
        schedule,
        residual_gap_gw: residual + gap_left,
        effective_floor_gw: effective_floor,
    })
}
