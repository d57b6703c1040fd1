//! Scenario orchestration: fleet loading, seeded year simulation, build
//! planning with site reuse, pathway costing, and plot-data emission.
//! Everything here is a pure function of the configuration; all output
//! lands in the directory the caller passes in.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use firmplan_core::costing::{
    baseload_coal_portfolio, baseload_nuclear_portfolio, compare_pathways, renewable_portfolio,
    PathwayComparison,
};
use firmplan_core::demand::{
    envelope, synthesize_hourly, AnnualDemandTrajectory, HourlyDemandTrace,
};
use firmplan_core::dispatch::{simulate_year, DispatchResult};
use firmplan_core::fleet::{DispatchClass, Fleet};
use firmplan_core::planner::{
    assign_sites, build_program, effective_firm_capacity_gw, firm_floor_gap, renewable_buildout,
    BuildEntry, BuildSchedule, FloorConvention, RetiredSite, FIRM_TECHNOLOGY, SOLAR_TECHNOLOGY,
    STORAGE_TECHNOLOGY, WIND_TECHNOLOGY,
};
use firmplan_core::profiles::{synth_solar, synth_wind, CapacityFactorTrace, VariableTechnology};

use crate::config::ScenarioConfig;
use crate::error::{runtime, validation, CliError};
use crate::formats;
use crate::report::{
    EnvelopeReport, PlanReport, RunReport, Warning, YearSummary, SCHEMA_VERSION,
};

pub fn load_fleet(cfg: &ScenarioConfig) -> Result<Fleet, CliError> {
    match &cfg.fleet.dataset {
        Some(path) => formats::read_fleet_csv(path),
        None => Ok(firmplan_core::baseline::bundled_fleet()),
    }
}

/// One simulated year: its summary plus the full hourly result.
pub struct SimulatedYear {
    pub summary: YearSummary,
    pub result: DispatchResult,
}

pub fn simulate_years(cfg: &ScenarioConfig) -> Result<Vec<SimulatedYear>, CliError> {
    let mix = cfg.mix.to_mix();
    let shape = cfg.demand.shape.to_shape();
    let demand_file: Option<HourlyDemandTrace> = cfg
        .demand
        .trace
        .as_deref()
        .map(formats::read_demand_trace)
        .transpose()?;
    let wind_file: Option<CapacityFactorTrace> = cfg
        .renewables
        .wind_trace
        .as_deref()
        .map(|p| formats::read_cf_trace(p, VariableTechnology::Wind))
        .transpose()?;
    let solar_file: Option<CapacityFactorTrace> = cfg
        .renewables
        .solar_trace
        .as_deref()
        .map(|p| formats::read_cf_trace(p, VariableTechnology::Solar))
        .transpose()?;

    let mut out = Vec::with_capacity(cfg.simulation.years as usize);
    for k in 0..cfg.simulation.years {
        let (demand_seed, wind_seed, solar_seed) = cfg.simulation.seeds_for(k);
        let demand = match &demand_file {
            Some(t) => t.clone(),
            None => synthesize_hourly(cfg.demand.annual_twh, cfg.demand.peak_gw, &shape, demand_seed)
                .map_err(|e| runtime(format!("demand synthesis (year {k}): {e}")))?,
        };
        let wind = match &wind_file {
            Some(t) => t.clone(),
            None => synth_wind(cfg.renewables.wind_mean_cf, wind_seed)
                .map_err(|e| runtime(format!("wind synthesis (year {k}): {e}")))?,
        };
        let solar = match &solar_file {
            Some(t) => t.clone(),
            None => synth_solar(cfg.renewables.solar_mean_cf, solar_seed)
                .map_err(|e| runtime(format!("solar synthesis (year {k}): {e}")))?,
        };
        let result = simulate_year(&demand, &wind, &solar, &mix, cfg.mix.initial_soc)
            .map_err(|e| runtime(format!("dispatch (year {k}): {e}")))?;
        let unserved = result.unserved_stats();
        out.push(SimulatedYear {
            summary: YearSummary {
                year_index: k,
                demand_seed,
                demand_twh: result.demand_twh(),
                peak_mw: demand.peak_mw(),
                wind_twh: result.wind_twh(),
                solar_twh: result.solar_twh(),
                baseload_twh: result.baseload_twh(),
                firm_twh: result.firm_twh(),
                curtailed_twh: result.curtailed_twh(),
                firm_utilization_percent: result.firm_utilization_percent(mix.firm_gw),
                unserved_mwh: unserved.total_mwh,
                unserved_hours: unserved.hours,
                max_consecutive_unserved_hours: unserved.max_consecutive_hours,
                max_balance_error_mw: result.max_balance_error_mw(),
            },
            result,
        });
    }
    Ok(out)
}

fn convention_name(c: FloorConvention) -> &'static str {
    match c {
        FloorConvention::Nameplate => "nameplate",
        FloorConvention::Derated => "derated",
        FloorConvention::DeratedExcludingStorage => "derated_excluding_storage",
    }
}

/// Sites freed by retirements inside the planning window. Only thermal
/// baseload sites are offered for reuse; their grid connection and yard
/// are what the new firm units inherit.
fn retired_sites(fleet: &Fleet, start_year: i32, horizon_years: u32) -> Vec<RetiredSite> {
    let last = start_year + horizon_years as i32;
    fleet
        .plants()
        .iter()
        .filter(|p| {
            p.decommission_year > start_year
                && p.decommission_year <= last
                && fleet
                    .technology(&p.technology)
                    .map(|t| t.dispatch_class == DispatchClass::Baseload)
                    .unwrap_or(false)
        })
        .map(|p| RetiredSite {
            site_id: p.site_id.clone(),
            nameplate_gw: p.nameplate_mw / 1000.0,
            retirement_year: p.decommission_year,
        })
        .collect()
}

pub fn build_plan(
    cfg: &ScenarioConfig,
    fleet: &Fleet,
) -> Result<(PlanReport, BuildSchedule), CliError> {
    let targets = cfg.targets.to_targets();
    let start = cfg.plan.start_year;
    let convention = cfg.plan.floor_convention;
    let effective = effective_firm_capacity_gw(fleet, start, convention);
    let gap = firm_floor_gap(fleet, start, targets.firm_floor_gw, convention);

    let firm = build_program(
        &targets,
        gap,
        cfg.plan.firm_lead_years,
        start,
        cfg.plan.firm_unit_max_gw,
    )
    .map_err(|e| validation(format!("firm program: {e}")))?;
    let renewables = renewable_buildout(&targets, start)
        .map_err(|e| validation(format!("renewable buildout: {e}")))?;
    let mut schedule = firm.merge(renewables);

    let sites = retired_sites(fleet, start, targets.horizon_years);
    let firm_entries: Vec<BuildEntry> = schedule
        .entries
        .iter()
        .filter(|e| e.technology == FIRM_TECHNOLOGY)
        .cloned()
        .collect();
    let assignments = assign_sites(&sites, &firm_entries);
    for a in &assignments.assignments {
        if let Some(entry) = schedule.entries.iter_mut().find(|e| {
            e.year == a.year
                && e.technology == a.technology
                && e.capacity == a.capacity_gw
                && e.site_id.is_none()
        }) {
            entry.site_id = Some(a.site_id.clone());
        }
    }

    let mut totals = BTreeMap::new();
    for tech in [
        FIRM_TECHNOLOGY,
        WIND_TECHNOLOGY,
        SOLAR_TECHNOLOGY,
        STORAGE_TECHNOLOGY,
    ] {
        totals.insert(tech.to_string(), schedule.total(tech));
    }

    let plan = PlanReport {
        start_year: start,
        floor_convention: convention_name(convention).into(),
        firm_floor_gw: targets.firm_floor_gw,
        effective_firm_capacity_gw: effective,
        initial_gap_gw: gap,
        totals,
        entries: schedule.entries.clone(),
        site_assignments: assignments,
    };
    Ok((plan, schedule))
}

pub fn cost_comparison(cfg: &ScenarioConfig) -> Result<PathwayComparison, CliError> {
    let assumptions = cfg.costs.to_assumptions();
    let targets = cfg.targets.to_targets();
    compare_pathways(
        &baseload_coal_portfolio(cfg.costs.baseload_replacement_gw),
        &baseload_nuclear_portfolio(cfg.costs.baseload_replacement_gw),
        &renewable_portfolio(
            targets.wind_gw,
            targets.solar_gw,
            targets.storage_gwh,
            targets.firm_target_gw,
        ),
        targets.nominal_firm_rate_gw,
        &assumptions,
    )
    .map_err(|e| validation(format!("cost comparison: {e}")))
}

/// Trim two trajectories to their overlapping years.
pub fn overlap(
    a: &AnnualDemandTrajectory,
    b: &AnnualDemandTrajectory,
) -> Result<(AnnualDemandTrajectory, AnnualDemandTrajectory), CliError> {
    let (a0, a1) = a.year_span();
    let (b0, b1) = b.year_span();
    let start = a0.max(b0);
    let end = a1.min(b1);
    if start > end {
        return Err(validation(format!(
            "trajectories do not overlap ({a0}-{a1} vs {b0}-{b1})"
        )));
    }
    let slice = |t: &AnnualDemandTrajectory| {
        let values: Vec<f64> = (start..=end).map(|y| t.value_at(y).unwrap()).collect();
        AnnualDemandTrajectory::new(start, values)
            .map_err(|e| validation(format!("trajectory overlap: {e}")))
    };
    Ok((slice(a)?, slice(b)?))
}

pub fn envelope_report(cfg: &ScenarioConfig) -> Result<Option<EnvelopeReport>, CliError> {
    let Some(t) = &cfg.demand.trajectories else {
        return Ok(None);
    };
    let actual = formats::read_trajectory_csv(&t.actual)?;
    let forecast = formats::read_trajectory_csv(&t.forecast)?;
    let (a, b) = overlap(&actual, &forecast)?;
    let band = envelope(&a, &b).map_err(|e| validation(format!("demand envelope: {e}")))?;
    let idx = t.anchor_year - band.start_year;
    if idx < 0 || idx as usize >= band.low_twh.len() {
        return Err(validation(format!(
            "anchor year {} outside trajectory overlap",
            t.anchor_year
        )));
    }
    let gap = band.gap_at(t.anchor_year).expect("index checked above");
    Ok(Some(EnvelopeReport {
        anchor_year: t.anchor_year,
        low_twh: band.low_twh[idx as usize],
        high_twh: band.high_twh[idx as usize],
        gap_twh: gap,
    }))
}

pub struct RunOutputs {
    pub report: RunReport,
    pub schedule: BuildSchedule,
}

pub fn assemble_run(cfg: &ScenarioConfig) -> Result<RunOutputs, CliError> {
    let fleet = load_fleet(cfg)?;
    let sims = simulate_years(cfg)?;
    let (plan, schedule) = build_plan(cfg, &fleet)?;
    let costs = cost_comparison(cfg)?;
    let envelope = envelope_report(cfg)?;

    let mut warnings = Vec::new();
    for s in &sims {
        let y = &s.summary;
        if y.unserved_hours > 0 {
            warnings.push(Warning::new(
                "load_shedding",
                format!(
                    "year {} (seed {}): {:.1} MWh unserved over {} hours (longest run {} h)",
                    y.year_index,
                    y.demand_seed,
                    y.unserved_mwh,
                    y.unserved_hours,
                    y.max_consecutive_unserved_hours
                ),
            ));
        }
    }
    let unassigned = plan.site_assignments.unassigned_gw();
    if unassigned > 1e-9 {
        warnings.push(Warning::new(
            "unassigned_capacity",
            format!(
                "{unassigned:.2} GW of firm units fit no retired site and need greenfield siting"
            ),
        ));
    }

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        scenario: cfg.name.clone(),
        years: sims.into_iter().map(|s| s.summary).collect(),
        plan,
        costs,
        envelope,
        warnings,
    };
    Ok(RunOutputs { report, schedule })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_run_outputs(
    out_dir: &Path,
    outputs: &RunOutputs,
) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(out_dir)?;
    let report_path = out_dir.join("report.json");
    write_file(&report_path, &crate::report::to_json_bytes(&outputs.report))?;
    let schedule_path = out_dir.join("schedule.csv");
    formats::write_schedule_csv(&schedule_path, &outputs.schedule)?;
    let years_path = out_dir.join("dispatch_years.csv");
    write_file(
        &years_path,
        crate::report::years_csv(&outputs.report.years).as_bytes(),
    )?;
    Ok(vec![report_path, schedule_path, years_path])
}

/// Plot-ready CSV series: the retirement curve, fleet availability by
/// year, the demand envelope (when trajectories are configured), and the
/// firm-utilization duration curve from the simulated years.
pub fn emit_plots(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(out_dir)?;
    let fleet = load_fleet(cfg)?;
    let base = cfg.fleet.base_year();
    let horizon = cfg.targets.horizon_years.max(30);
    let mut written = Vec::new();

    let retired = fleet.cumulative_retired_gw(base, horizon, None);
    let mut s = String::from("years_out,calendar_year,cumulative_retired_gw\n");
    for (k, gw) in retired.iter().enumerate() {
        s.push_str(&format!("{},{},{}\n", k, base + k as i32, gw));
    }
    let path = out_dir.join("retirement_curve.csv");
    write_file(&path, s.as_bytes())?;
    written.push(path);

    let coal = fleet.filter_technology("coal");
    let nuclear = fleet.filter_technology("nuclear");
    let mut s = String::from("year,coal_eaf,nuclear_eaf,fleet_eaf\n");
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    for year in 2002..=(base + horizon as i32) {
        s.push_str(&format!(
            "{},{},{},{}\n",
            year,
            cell(coal.eaf(year, None)),
            cell(nuclear.eaf(year, None)),
            cell(fleet.eaf(year, None)),
        ));
    }
    let path = out_dir.join("fleet_eaf.csv");
    write_file(&path, s.as_bytes())?;
    written.push(path);

    if let Some(t) = &cfg.demand.trajectories {
        let actual = formats::read_trajectory_csv(&t.actual)?;
        let forecast = formats::read_trajectory_csv(&t.forecast)?;
        let (a, b) = overlap(&actual, &forecast)?;
        let band = envelope(&a, &b).map_err(|e| validation(format!("demand envelope: {e}")))?;
        let mut s = String::from("year,low_twh,high_twh,gap_twh\n");
        for (i, (low, high)) in band.low_twh.iter().zip(&band.high_twh).enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                band.start_year + i as i32,
                low,
                high,
                high - low
            ));
        }
        let path = out_dir.join("demand_envelope.csv");
        write_file(&path, s.as_bytes())?;
        written.push(path);
    }

    let sims = simulate_years(cfg)?;
    let mut firm: Vec<f64> = sims
        .iter()
        .flat_map(|s| s.result.firm_mw.iter().copied())
        .collect();
    firm.sort_by(|a, b| b.partial_cmp(a).expect("dispatch output is finite"));
    let n = firm.len() as f64;
    let mut s = String::from("rank,exceedance_percent,firm_mw\n");
    for (i, mw) in firm.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{}\n",
            i + 1,
            100.0 * (i as f64 + 1.0) / n,
            mw
        ));
    }
    let path = out_dir.join("firm_utilization_duration.csv");
    write_file(&path, s.as_bytes())?;
    written.push(path);

    Ok(written)
}
