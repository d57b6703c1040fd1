//! Command line for the transition-planning toolkit.
//!
//! Exit codes: 0 on success, 2 when the configuration or input data fail
//! validation, 1 when a run breaks after validation passed. All
//! randomness flows from config-declared seeds, so identical invocations
//! produce identical outputs.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use firmplan::config::{self, ScenarioConfig};
use firmplan::error::{self, CliError};
use firmplan::report::{self, PlanReport, YearSummary, SCHEMA_VERSION};
use firmplan::{formats, scenario};

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "firmplan",
    version,
    about = "Transition planning for an aging thermal fleet: retirements, hourly dispatch, build scheduling and pathway costs"
)]
struct Cli {
    /// Scenario configuration (TOML); omitted runs the built-in baseline.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for written files (run, emit-plots). Falls back to the
    /// config value, then $FIRMPLAN_OUT, then ./out.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Override the simulation base seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Stdout format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the configuration and its referenced files; print findings.
    Validate,
    /// Dispatch the configured mix over the simulated years.
    Simulate,
    /// Derive the build schedule and site assignments.
    Plan,
    /// Price the replacement pathways against each other.
    Costs,
    /// Full pipeline; writes report.json, schedule.csv, dispatch_years.csv.
    Run,
    /// Write plot-ready CSV series into the output directory.
    EmitPlots,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.simulation.base_seed = seed;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &ScenarioConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output.directory.clone())
        .or_else(|| std::env::var_os("FIRMPLAN_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn require_valid(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let findings = config::validate(cfg);
    if findings.is_empty() {
        return Ok(());
    }
    let mut msg = String::from("configuration failed validation:");
    for f in &findings {
        let _ = write!(msg, "\n  [{}] {}", f.code, f.message);
    }
    Err(CliError::Validation(msg))
}

fn emit(text: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::io::stdout()
        .write_all(text.as_ref())
        .map_err(|e| error::runtime(format!("cannot write to stdout: {e}")))
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    emit(report::to_json_bytes(value))
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    schema_version: u32,
    scenario: &'a str,
    years: &'a [YearSummary],
}

#[derive(Serialize)]
struct PlanOutput<'a> {
    schema_version: u32,
    scenario: &'a str,
    plan: &'a PlanReport,
}

#[derive(Serialize)]
struct CostsOutput<'a> {
    schema_version: u32,
    scenario: &'a str,
    costs: &'a firmplan_core::costing::PathwayComparison,
}

#[derive(Serialize)]
struct FindingsOutput<'a> {
    schema_version: u32,
    scenario: &'a str,
    findings: &'a [config::Finding],
}

#[derive(Serialize)]
struct FilesOutput<'a> {
    schema_version: u32,
    scenario: &'a str,
    files: &'a [PathBuf],
}

fn costs_csv(cmp: &firmplan_core::costing::PathwayComparison) -> String {
    let mut out = String::from("pathway,technology,capacity,unit,unit_capital_cost_usd,capex_busd\n");
    for p in [&cmp.coal, &cmp.nuclear, &cmp.renewable] {
        for l in &p.lines {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.label,
                l.technology,
                l.capacity,
                l.unit,
                l.unit_capital_cost.value(),
                l.capex_busd
            );
        }
        let _ = writeln!(out, "{},total,,,,{}", p.label, p.total_capex_busd);
    }
    out
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Cmd::Validate => {
            let findings = config::validate(&cfg);
            match cli.format {
                OutputFormat::Table => emit(report::findings_table(&findings))?,
                OutputFormat::Json => emit_json(&FindingsOutput {
                    schema_version: SCHEMA_VERSION,
                    scenario: &cfg.name,
                    findings: &findings,
                })?,
                OutputFormat::Csv => emit(report::findings_csv(&findings))?,
            }
            if findings.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "{} validation finding(s)",
                    findings.len()
                )))
            }
        }
        Cmd::Simulate => {
            require_valid(&cfg)?;
            let sims = scenario::simulate_years(&cfg)?;
            let years: Vec<YearSummary> = sims.into_iter().map(|s| s.summary).collect();
            match cli.format {
                OutputFormat::Table => emit(report::years_table(&years)),
                OutputFormat::Json => emit_json(&SimulateOutput {
                    schema_version: SCHEMA_VERSION,
                    scenario: &cfg.name,
                    years: &years,
                }),
                OutputFormat::Csv => emit(report::years_csv(&years)),
            }
        }
        Cmd::Plan => {
            require_valid(&cfg)?;
            let fleet = scenario::load_fleet(&cfg)?;
            let (plan, schedule) = scenario::build_plan(&cfg, &fleet)?;
            match cli.format {
                OutputFormat::Table => emit(report::plan_table(&plan)),
                OutputFormat::Json => emit_json(&PlanOutput {
                    schema_version: SCHEMA_VERSION,
                    scenario: &cfg.name,
                    plan: &plan,
                }),
                OutputFormat::Csv => emit(formats::schedule_csv_string(&schedule)),
            }
        }
        Cmd::Costs => {
            require_valid(&cfg)?;
            let cmp = scenario::cost_comparison(&cfg)?;
            match cli.format {
                OutputFormat::Table => emit(report::cost_table(&cmp)),
                OutputFormat::Json => emit_json(&CostsOutput {
                    schema_version: SCHEMA_VERSION,
                    scenario: &cfg.name,
                    costs: &cmp,
                }),
                OutputFormat::Csv => emit(costs_csv(&cmp)),
            }
        }
        Cmd::Run => {
            require_valid(&cfg)?;
            let outputs = scenario::assemble_run(&cfg)?;
            let dir = out_dir(&cli, &cfg);
            let files = scenario::write_run_outputs(&dir, &outputs)?;
            match cli.format {
                OutputFormat::Table => {
                    let mut text = report::run_summary_table(&outputs.report);
                    for f in &files {
                        let _ = writeln!(text, "wrote {}", f.display());
                    }
                    emit(text)
                }
                OutputFormat::Json => emit_json(&outputs.report),
                OutputFormat::Csv => emit(report::years_csv(&outputs.report.years)),
            }
        }
        Cmd::EmitPlots => {
            require_valid(&cfg)?;
            let dir = out_dir(&cli, &cfg);
            let files = scenario::emit_plots(&cfg, &dir)?;
            match cli.format {
                OutputFormat::Json => emit_json(&FilesOutput {
                    schema_version: SCHEMA_VERSION,
                    scenario: &cfg.name,
                    files: &files,
                }),
                _ => {
                    let mut text = String::new();
                    for f in &files {
                        let _ = writeln!(text, "{}", f.display());
                    }
                    emit(text)
                }
            }
        }
    }
}
