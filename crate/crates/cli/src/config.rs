//! Scenario configuration. One TOML document; every physical quantity
//! carries its unit in the key name. Relative paths resolve against the
//! directory containing the config file, so a scenario and its datasets
//! travel together. Omitted keys fall back to the built-in baseline
//! scenario values.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use firmplan_core::costing::{CapitalCost, CostAssumptions};
use firmplan_core::demand::DemandShape;
use firmplan_core::dispatch::{GenerationMix, DEFAULT_INITIAL_SOC};
use firmplan_core::planner::{FloorConvention, ProgramTargets};

use crate::error::{validation, CliError};
use crate::formats;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub fleet: FleetConfig,
    pub demand: DemandConfig,
    pub renewables: RenewablesConfig,
    pub mix: MixConfig,
    pub simulation: SimulationConfig,
    pub targets: TargetsConfig,
    pub plan: PlanConfig,
    pub costs: CostsConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "baseline".into(),
            fleet: FleetConfig::default(),
            demand: DemandConfig::default(),
            renewables: RenewablesConfig::default(),
            mix: MixConfig::default(),
            simulation: SimulationConfig::default(),
            targets: TargetsConfig::default(),
            plan: PlanConfig::default(),
            costs: CostsConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FleetConfig {
    /// Fleet dataset CSV; omitted means the bundled 2022 dataset.
    pub dataset: Option<PathBuf>,
    /// Base year retirement curves are measured from.
    pub base_year: Option<i32>,
}

impl FleetConfig {
    pub fn base_year(&self) -> i32 {
        self.base_year.unwrap_or(firmplan_core::baseline::BASE_YEAR)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemandConfig {
    pub annual_twh: f64,
    pub peak_gw: f64,
    pub growth_rate_per_year: f64,
    /// Hourly demand CSV (8760 rows, MW); omitted means synthesis.
    pub trace: Option<PathBuf>,
    pub shape: ShapeConfig,
    pub trajectories: Option<TrajectoriesConfig>,
}

impl Default for DemandConfig {
    fn default() -> Self {
        DemandConfig {
            annual_twh: 222.0,
            peak_gw: 35.0,
            growth_rate_per_year: -0.005,
            trace: None,
            shape: ShapeConfig::default(),
            trajectories: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShapeConfig {
    pub seasonal_amplitude: f64,
    pub morning_peak: f64,
    pub evening_peak: f64,
    pub noise_sd: f64,
    pub noise_persistence: f64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        let s = DemandShape::default();
        ShapeConfig {
            seasonal_amplitude: s.seasonal_amplitude,
            morning_peak: s.morning_peak,
            evening_peak: s.evening_peak,
            noise_sd: s.noise_sd,
            noise_persistence: s.noise_persistence,
        }
    }
}

impl ShapeConfig {
    pub fn to_shape(&self) -> DemandShape {
        DemandShape {
            seasonal_amplitude: self.seasonal_amplitude,
            morning_peak: self.morning_peak,
            evening_peak: self.evening_peak,
            noise_sd: self.noise_sd,
            noise_persistence: self.noise_persistence,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoriesConfig {
    /// Historical annual generation, two-column CSV (year, twh).
    pub actual: PathBuf,
    /// Forecast trajectory the envelope is measured against.
    pub forecast: PathBuf,
    /// Year the envelope gap is reported at.
    #[serde(default = "default_anchor_year")]
    pub anchor_year: i32,
}

fn default_anchor_year() -> i32 {
    2022
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenewablesConfig {
    pub wind_mean_cf: f64,
    pub solar_mean_cf: f64,
    /// Capacity-factor CSVs (8760 rows in [0,1]); omitted means synthesis.
    /// The key names the technology; file contents carry no type tag.
    pub wind_trace: Option<PathBuf>,
    pub solar_trace: Option<PathBuf>,
}

impl Default for RenewablesConfig {
    fn default() -> Self {
        RenewablesConfig {
            wind_mean_cf: 0.326,
            solar_mean_cf: 0.265,
            wind_trace: None,
            solar_trace: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixConfig {
    pub baseload_gw: f64,
    pub baseload_availability: f64,
    pub wind_gw: f64,
    pub solar_gw: f64,
    pub storage_power_gw: f64,
    pub storage_energy_gwh: f64,
    pub storage_round_trip_efficiency: f64,
    pub firm_gw: f64,
    pub initial_soc: f64,
}

impl Default for MixConfig {
    fn default() -> Self {
        MixConfig {
            baseload_gw: 12.9,
            baseload_availability: 0.70,
            wind_gw: 49.0,
            solar_gw: 14.0,
            storage_power_gw: 6.0,
            storage_energy_gwh: 24.0,
            storage_round_trip_efficiency: 0.85,
            firm_gw: 15.0,
            initial_soc: DEFAULT_INITIAL_SOC,
        }
    }
}

impl MixConfig {
    pub fn to_mix(&self) -> GenerationMix {
        GenerationMix {
            baseload_gw: self.baseload_gw,
            baseload_availability: self.baseload_availability,
            wind_gw: self.wind_gw,
            solar_gw: self.solar_gw,
            storage_power_gw: self.storage_power_gw,
            storage_energy_gwh: self.storage_energy_gwh,
            firm_gw: self.firm_gw,
            storage_round_trip_efficiency: self.storage_round_trip_efficiency,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    /// Number of synthetic years to dispatch; year k derives its seeds
    /// from base_seed + k.
    pub years: u32,
    pub base_seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            years: 3,
            base_seed: 1,
        }
    }
}

impl SimulationConfig {
    /// (demand, wind, solar) seeds for simulated year `k`.
    pub fn seeds_for(&self, k: u32) -> (u64, u64, u64) {
        let s = self.base_seed + k as u64;
        (s, s * 101, s * 211)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TargetsConfig {
    pub horizon_years: u32,
    pub firm_target_gw: f64,
    pub wind_gw: f64,
    pub solar_gw: f64,
    pub storage_gwh: f64,
    pub firm_floor_gw: f64,
    pub nominal_firm_rate_gw: f64,
    pub max_firm_rate_gw: f64,
}

impl Default for TargetsConfig {
    fn default() -> Self {
        let t = ProgramTargets::default();
        TargetsConfig {
            horizon_years: t.horizon_years,
            firm_target_gw: t.firm_target_gw,
            wind_gw: t.wind_gw,
            solar_gw: t.solar_gw,
            storage_gwh: t.storage_gwh,
            firm_floor_gw: t.firm_floor_gw,
            nominal_firm_rate_gw: t.nominal_firm_rate_gw,
            max_firm_rate_gw: t.max_firm_rate_gw,
        }
    }
}

impl TargetsConfig {
    pub fn to_targets(&self) -> ProgramTargets {
        ProgramTargets {
            horizon_years: self.horizon_years,
            firm_target_gw: self.firm_target_gw,
            wind_gw: self.wind_gw,
            solar_gw: self.solar_gw,
            storage_gwh: self.storage_gwh,
            firm_floor_gw: self.firm_floor_gw,
            nominal_firm_rate_gw: self.nominal_firm_rate_gw,
            max_firm_rate_gw: self.max_firm_rate_gw,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    pub start_year: i32,
    pub firm_lead_years: u32,
    pub firm_unit_max_gw: f64,
    pub floor_convention: FloorConvention,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            start_year: 2024,
            firm_lead_years: 3,
            firm_unit_max_gw: 1.5,
            floor_convention: FloorConvention::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostsConfig {
    /// Like-for-like baseload pathway size (25 GW replaces the retiring
    /// coal energy at a 70% availability assumption).
    pub baseload_replacement_gw: f64,
    pub fx_rate_zar_per_usd: f64,
    pub horizon_years: u32,
    pub coal_fuel_usd_per_mwh: f64,
    pub gas_price_usd_per_gj: f64,
    pub firm_fuel_intensity_gj_per_mwh: f64,
    pub annual_system_energy_twh: f64,
    pub coal_generation_twh: f64,
    pub firm_generation_twh: f64,
    pub baseline_dispatchable_fuel_busd: f64,
    pub discount_rate: f64,
    pub fixed_om_share: f64,
    pub unit_capital_usd_per_kw: BTreeMap<String, f64>,
    pub unit_capital_usd_per_kwh: BTreeMap<String, f64>,
}

impl Default for CostsConfig {
    fn default() -> Self {
        let a = CostAssumptions::default();
        let mut per_kw = BTreeMap::new();
        let mut per_kwh = BTreeMap::new();
        for (tech, cost) in &a.unit_capital_costs {
            match cost {
                CapitalCost::PerKw(v) => per_kw.insert(tech.clone(), *v),
                CapitalCost::PerKwh(v) => per_kwh.insert(tech.clone(), *v),
            };
        }
        CostsConfig {
            baseload_replacement_gw: 25.0,
            fx_rate_zar_per_usd: a.fx_rate,
            horizon_years: a.horizon_years,
            coal_fuel_usd_per_mwh: a.coal_fuel_usd_per_mwh,
            gas_price_usd_per_gj: a.gas_price_usd_per_gj,
            firm_fuel_intensity_gj_per_mwh: a.firm_fuel_intensity_gj_per_mwh,
            annual_system_energy_twh: a.annual_system_energy_twh,
            coal_generation_twh: a.coal_generation_twh,
            firm_generation_twh: a.firm_generation_twh,
            baseline_dispatchable_fuel_busd: a.baseline_dispatchable_fuel_busd,
            discount_rate: a.discount_rate,
            fixed_om_share: a.fixed_om_share,
            unit_capital_usd_per_kw: per_kw,
            unit_capital_usd_per_kwh: per_kwh,
        }
    }
}

impl CostsConfig {
    pub fn to_assumptions(&self) -> CostAssumptions {
        let mut costs = BTreeMap::new();
        for (tech, v) in &self.unit_capital_usd_per_kw {
            costs.insert(tech.clone(), CapitalCost::PerKw(*v));
        }
        for (tech, v) in &self.unit_capital_usd_per_kwh {
            costs.insert(tech.clone(), CapitalCost::PerKwh(*v));
        }
        CostAssumptions {
            unit_capital_costs: costs,
            fx_rate: self.fx_rate_zar_per_usd,
            horizon_years: self.horizon_years,
            coal_fuel_usd_per_mwh: self.coal_fuel_usd_per_mwh,
            gas_price_usd_per_gj: self.gas_price_usd_per_gj,
            firm_fuel_intensity_gj_per_mwh: self.firm_fuel_intensity_gj_per_mwh,
            annual_system_energy_twh: self.annual_system_energy_twh,
            coal_generation_twh: self.coal_generation_twh,
            firm_generation_twh: self.firm_generation_twh,
            baseline_dispatchable_fuel_busd: self.baseline_dispatchable_fuel_busd,
            discount_rate: self.discount_rate,
            fixed_om_share: self.fixed_om_share,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: ScenarioConfig = toml::from_str(&text)
            .map_err(|e| validation(format!("{}: {e}", path.display())))?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let anchor = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        if let Some(p) = self.fleet.dataset.as_mut() {
            anchor(p);
        }
        if let Some(p) = self.demand.trace.as_mut() {
            anchor(p);
        }
        if let Some(t) = self.demand.trajectories.as_mut() {
            anchor(&mut t.actual);
            anchor(&mut t.forecast);
        }
        if let Some(p) = self.renewables.wind_trace.as_mut() {
            anchor(p);
        }
        if let Some(p) = self.renewables.solar_trace.as_mut() {
            anchor(p);
        }
        if let Some(p) = self.output.directory.as_mut() {
            anchor(p);
        }
    }
}

/// A validation finding: machine-readable code plus human text.
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub code: String,
    pub message: String,
}

fn finding(findings: &mut Vec<Finding>, code: &str, message: String) {
    findings.push(Finding {
        code: code.into(),
        message,
    });
}

/// Check the whole configuration, collecting every finding instead of
/// stopping at the first. Empty result means the scenario is runnable.
/// Reads referenced files but writes nothing.
pub fn validate(cfg: &ScenarioConfig) -> Vec<Finding> {
    let mut out = Vec::new();

    if let Some(path) = &cfg.fleet.dataset {
        if !path.exists() {
            finding(
                &mut out,
                "missing_file",
                format!("fleet dataset not found: {}", path.display()),
            );
        } else if let Err(e) = formats::read_fleet_csv(path) {
            finding(&mut out, "fleet_parse", e.to_string());
        }
    }

    let d = &cfg.demand;
    if !(d.annual_twh > 0.0) || !(d.peak_gw > 0.0) {
        finding(
            &mut out,
            "demand_invalid",
            format!(
                "annual energy and peak must be positive, found {} TWh / {} GW",
                d.annual_twh, d.peak_gw
            ),
        );
    } else if d.peak_gw * 8.76 < d.annual_twh {
        finding(
            &mut out,
            "demand_infeasible",
            format!(
                "peak {} GW is below the implied average {:.2} GW for {} TWh/yr",
                d.peak_gw,
                d.annual_twh / 8.76,
                d.annual_twh
            ),
        );
    }
    if d.growth_rate_per_year <= -1.0 {
        finding(
            &mut out,
            "demand_invalid",
            format!("growth rate must exceed -100%/yr, found {}", d.growth_rate_per_year),
        );
    }
    if let Some(path) = &d.trace {
        if !path.exists() {
            finding(
                &mut out,
                "missing_file",
                format!("demand trace not found: {}", path.display()),
            );
        } else if let Err(e) = formats::read_demand_trace(path) {
            finding(&mut out, "trace_parse", e.to_string());
        }
    }
    if let Some(t) = &d.trajectories {
        for (label, path) in [("actual", &t.actual), ("forecast", &t.forecast)] {
            if !path.exists() {
                finding(
                    &mut out,
                    "missing_file",
                    format!("{label} trajectory not found: {}", path.display()),
                );
            } else if let Err(e) = formats::read_trajectory_csv(path) {
                finding(&mut out, "trajectory_parse", e.to_string());
            }
        }
    }

    let r = &cfg.renewables;
    if !(r.wind_mean_cf > 0.0 && r.wind_mean_cf < 1.0) {
        finding(
            &mut out,
            "profile_target_invalid",
            format!("wind mean capacity factor must lie in (0, 1), found {}", r.wind_mean_cf),
        );
    }
    if !(r.solar_mean_cf > 0.0 && r.solar_mean_cf < 0.5) {
        finding(
            &mut out,
            "profile_target_invalid",
            format!(
                "solar mean capacity factor must lie in (0, 0.5), found {}",
                r.solar_mean_cf
            ),
        );
    }
    for (tech, path) in [
        (firmplan_core::profiles::VariableTechnology::Wind, &r.wind_trace),
        (firmplan_core::profiles::VariableTechnology::Solar, &r.solar_trace),
    ] {
        if let Some(path) = path {
            if !path.exists() {
                finding(
                    &mut out,
                    "missing_file",
                    format!("capacity-factor trace not found: {}", path.display()),
                );
            } else if let Err(e) = formats::read_cf_trace(path, tech) {
                finding(&mut out, "trace_parse", e.to_string());
            }
        }
    }

    if let Err(e) = cfg.mix.to_mix().validate() {
        finding(&mut out, "mix_invalid", e.to_string());
    }
    if !(0.0..=1.0).contains(&cfg.mix.initial_soc) {
        finding(
            &mut out,
            "mix_invalid",
            format!("initial state of charge outside [0, 1]: {}", cfg.mix.initial_soc),
        );
    }

    if cfg.simulation.years == 0 {
        finding(
            &mut out,
            "simulation_invalid",
            "simulation must cover at least one year".into(),
        );
    }

    if let Err(e) = cfg.targets.to_targets().validate() {
        finding(&mut out, "targets_invalid", e.to_string());
    }
    if !(cfg.plan.firm_unit_max_gw > 0.0) {
        finding(
            &mut out,
            "plan_invalid",
            format!("firm unit size must be positive, found {}", cfg.plan.firm_unit_max_gw),
        );
    }

    if let Err(e) = cfg.costs.to_assumptions().validate() {
        finding(&mut out, "costs_invalid", e.to_string());
    }
    if !(cfg.costs.baseload_replacement_gw >= 0.0) {
        finding(
            &mut out,
            "costs_invalid",
            format!(
                "baseload replacement capacity must be non-negative, found {}",
                cfg.costs.baseload_replacement_gw
            ),
        );
    }

    out
}
