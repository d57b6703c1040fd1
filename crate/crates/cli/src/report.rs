//! Report structures and their JSON/CSV/plain-table renderings. JSON
//! reports carry a schema_version and are byte-stable for identical
//! inputs: field order is fixed, maps are ordered, and nothing in them
//! derives from time or environment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use firmplan_core::costing::{CapitalCost, PathwayComparison, PathwayCost};
use firmplan_core::planner::{BuildEntry, SiteAssignments};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
}

impl Warning {
    pub fn new(code: &str, message: String) -> Self {
        Warning {
            code: code.into(),
            message,
        }
    }
}

/// One simulated year's dispatch outcome.
#[derive(Debug, Clone, Serialize)]
pub struct YearSummary {
    pub year_index: u32,
    pub demand_seed: u64,
    pub demand_twh: f64,
    pub peak_mw: f64,
    pub wind_twh: f64,
    pub solar_twh: f64,
    pub baseload_twh: f64,
    pub firm_twh: f64,
    pub curtailed_twh: f64,
    pub firm_utilization_percent: f64,
    pub unserved_mwh: f64,
    pub unserved_hours: usize,
    pub max_consecutive_unserved_hours: usize,
    pub max_balance_error_mw: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanReport {
    pub start_year: i32,
    pub floor_convention: String,
    pub firm_floor_gw: f64,
    pub effective_firm_capacity_gw: f64,
    pub initial_gap_gw: f64,
    /// End-state additions per technology.
    pub totals: BTreeMap<String, f64>,
    pub entries: Vec<BuildEntry>,
    pub site_assignments: SiteAssignments,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub anchor_year: i32,
    pub low_twh: f64,
    pub high_twh: f64,
    pub gap_twh: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: String,
    pub years: Vec<YearSummary>,
    pub plan: PlanReport,
    pub costs: PathwayComparison,
    pub envelope: Option<EnvelopeReport>,
    pub warnings: Vec<Warning>,
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

fn unit_label(cost: &CapitalCost) -> &'static str {
    match cost {
        CapitalCost::PerKw(_) => "USD/kW",
        CapitalCost::PerKwh(_) => "USD/kWh",
    }
}

fn pathway_rows(out: &mut String, p: &PathwayCost) {
    let _ = writeln!(
        out,
        "{:<12} {:>10} {:>12} {:>10} {:>10} {:>9} {:>9}",
        p.label,
        "",
        "",
        format!("{:.1}", p.total_capex_busd),
        format!("{:.2}", p.annual_capex_busd),
        format!("{:.2}", p.usd_per_mwh),
        format!("{:.2}", p.zar_per_kwh),
    );
    for line in &p.lines {
        let _ = writeln!(
            out,
            "  {:<10} {:>6.1} {:<3} {:>7.0} {:<7} {:>10}",
            line.technology,
            line.capacity,
            line.unit.to_string(),
            line.unit_capital_cost.value(),
            unit_label(&line.unit_capital_cost),
            format!("{:.3}", line.capex_busd),
        );
    }
}

/// Aligned plain-text cost table mirroring the three-pathway layout.
pub fn cost_table(cmp: &PathwayComparison) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>10} {:>12} {:>10} {:>10} {:>9} {:>9}",
        "pathway", "", "", "capex B", "B/yr", "USD/MWh", "ZAR/kWh"
    );
    for p in [&cmp.coal, &cmp.nuclear, &cmp.renewable] {
        pathway_rows(&mut out, p);
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "capex delta (coal - renewable): {:.1} B USD",
        cmp.capex_delta_busd
    );
    let _ = writeln!(
        out,
        "unit-cost advantage: {:.1}% on capital, {:.1}% with fuel",
        cmp.unit_cost_advantage_percent, cmp.unit_cost_advantage_with_fuel_percent
    );
    let _ = writeln!(
        out,
        "firm program: {:.0} M USD/yr ({:.1}% of renewable annual capital)",
        cmp.firm_program_annual_busd * 1000.0,
        cmp.firm_program_share_percent
    );
    let f = &cmp.fuel;
    let _ = writeln!(
        out,
        "fuel: coal {:.2} B/yr -> firm {:.2} B/yr; savings {:.2} B ({:.1}%) incremental, {:.2} B ({:.1}%) literal",
        f.coal_fuel_busd,
        f.firm_fuel_busd,
        f.incremental.absolute_busd,
        f.incremental.percent,
        f.literal.absolute_busd,
        f.literal.percent
    );
    for note in &cmp.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn years_table(years: &[YearSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4} {:>6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>8} {:>10} {:>6}",
        "year",
        "seed",
        "demand",
        "wind",
        "solar",
        "baseload",
        "firm",
        "curtail",
        "firm%",
        "unserved",
        "hours"
    );
    for y in years {
        let _ = writeln!(
            out,
            "{:>4} {:>6} {:>9.2} {:>9.2} {:>9.2} {:>9.2} {:>9.3} {:>9.2} {:>8.2} {:>10.1} {:>6}",
            y.year_index,
            y.demand_seed,
            y.demand_twh,
            y.wind_twh,
            y.solar_twh,
            y.baseload_twh,
            y.firm_twh,
            y.curtailed_twh,
            y.firm_utilization_percent,
            y.unserved_mwh,
            y.unserved_hours
        );
    }
    out
}

pub fn years_csv(years: &[YearSummary]) -> String {
    let mut out = String::from(
        "year_index,demand_seed,demand_twh,peak_mw,wind_twh,solar_twh,baseload_twh,firm_twh,curtailed_twh,firm_utilization_percent,unserved_mwh,unserved_hours,max_consecutive_unserved_hours,max_balance_error_mw\n",
    );
    for y in years {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            y.year_index,
            y.demand_seed,
            y.demand_twh,
            y.peak_mw,
            y.wind_twh,
            y.solar_twh,
            y.baseload_twh,
            y.firm_twh,
            y.curtailed_twh,
            y.firm_utilization_percent,
            y.unserved_mwh,
            y.unserved_hours,
            y.max_consecutive_unserved_hours,
            y.max_balance_error_mw
        );
    }
    out
}

pub fn plan_table(plan: &PlanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "program from {} | floor {:.1} GW ({}) | firm-capable {:.2} GW | gap {:.2} GW",
        plan.start_year,
        plan.firm_floor_gw,
        plan.floor_convention,
        plan.effective_firm_capacity_gw,
        plan.initial_gap_gw
    );
    for (tech, total) in &plan.totals {
        let _ = writeln!(out, "  {tech:<10} {total:>7.2} total additions");
    }
    let assigned = plan.site_assignments.assigned_gw();
    let unassigned = plan.site_assignments.unassigned_gw();
    let _ = writeln!(
        out,
        "siting: {assigned:.2} GW on retired sites, {unassigned:.2} GW needs greenfield sites"
    );
    let _ = writeln!(out, "schedule entries: {}", plan.entries.len());
    out
}

pub fn findings_table(findings: &[crate::config::Finding]) -> String {
    if findings.is_empty() {
        return "configuration valid\n".into();
    }
    let mut out = String::new();
    for f in findings {
        let _ = writeln!(out, "{:<22} {}", f.code, f.message);
    }
    out
}

pub fn findings_csv(findings: &[crate::config::Finding]) -> String {
    let mut out = String::from("code,message\n");
    for f in findings {
        let msg = f.message.replace('"', "\"\"");
        let _ = writeln!(out, "{},\"{}\"", f.code, msg);
    }
    out
}

pub fn run_summary_table(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", report.scenario);
    out.push_str(&years_table(&report.years));
    out.push('\n');
    out.push_str(&plan_table(&report.plan));
    out.push('\n');
    out.push_str(&cost_table(&report.costs));
    if let Some(env) = &report.envelope {
        let _ = writeln!(
            out,
            "demand envelope at {}: {:.1} to {:.1} TWh (gap {:.1})",
            env.anchor_year, env.low_twh, env.high_twh, env.gap_twh
        );
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning[{}]: {}", w.code, w.message);
    }
    out
}
