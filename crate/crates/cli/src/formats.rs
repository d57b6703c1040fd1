//! File formats: fleet datasets, hourly traces, annual trajectories and
//! build schedules. All CSV, UTF-8. Errors carry the offending line.

use std::fs;
use std::path::Path;

use firmplan_core::baseline;
use firmplan_core::demand::{AnnualDemandTrajectory, HourlyDemandTrace, HOURS};
use firmplan_core::fleet::{Fleet, Plant, DEFAULT_SERVICE_LIFE_YEARS};
use firmplan_core::planner::{BuildEntry, BuildSchedule, CapacityUnit};
use firmplan_core::profiles::{CapacityFactorTrace, ProfileError, VariableTechnology};

use crate::error::{validation, CliError};

pub const FLEET_HEADER: [&str; 6] = [
    "name",
    "technology",
    "nameplate_mw",
    "commission_year",
    "decommission_year",
    "site_id",
];

pub const SCHEDULE_HEADER: [&str; 5] = ["year", "technology", "capacity", "unit", "site_id"];

fn open_reader(path: &Path, headers: bool) -> Result<csv::Reader<fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| validation(format!("cannot open {}: {e}", path.display())))
}

fn check_header(
    rdr: &mut csv::Reader<fs::File>,
    expected: &[&str],
    path: &Path,
) -> Result<(), CliError> {
    let got = rdr
        .headers()
        .map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let got: Vec<&str> = got.iter().collect();
    if got != expected {
        return Err(validation(format!(
            "{}: header must be exactly '{}', found '{}'",
            path.display(),
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn field(rec: &csv::StringRecord, idx: usize) -> &str {
    rec.get(idx).unwrap_or("")
}

fn parse_num<T: core::str::FromStr>(
    raw: &str,
    what: &str,
    path: &Path,
    line: u64,
) -> Result<T, CliError> {
    raw.parse().map_err(|_| {
        validation(format!(
            "{} line {line}: {what} is not a number: '{raw}'",
            path.display()
        ))
    })
}

/// Plants from a fleet dataset CSV, attached to the default technology
/// registry and availability models. A blank decommission year means
/// commission year plus the default service life.
pub fn read_fleet_csv(path: &Path) -> Result<Fleet, CliError> {
    let mut rdr = open_reader(path, true)?;
    check_header(&mut rdr, &FLEET_HEADER, path)?;
    let mut plants = Vec::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| validation(format!("{}: {e}", path.display())))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != FLEET_HEADER.len() {
            return Err(validation(format!(
                "{} line {line}: expected {} fields, found {}",
                path.display(),
                FLEET_HEADER.len(),
                rec.len()
            )));
        }
        let commission_year: i32 = parse_num(field(&rec, 3), "commission_year", path, line)?;
        let decommission_raw = field(&rec, 4);
        let decommission_year = if decommission_raw.is_empty() {
            commission_year + DEFAULT_SERVICE_LIFE_YEARS
        } else {
            parse_num(decommission_raw, "decommission_year", path, line)?
        };
        plants.push(Plant {
            name: field(&rec, 0).to_string(),
            technology: field(&rec, 1).to_string(),
            nameplate_mw: parse_num(field(&rec, 2), "nameplate_mw", path, line)?,
            commission_year,
            decommission_year,
            site_id: field(&rec, 5).to_string(),
        });
    }
    Fleet::new(
        plants,
        baseline::default_technologies(),
        baseline::default_availability(),
    )
    .map_err(|e| validation(format!("{}: {e}", path.display())))
}

/// Single-column hourly series: one value per row, exactly 8760 rows.
/// Leading lines starting with '#' carry optional metadata and are
/// skipped; blank lines are ignored.
fn read_hourly_column(path: &Path) -> Result<(Vec<f64>, Vec<u64>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot open {}: {e}", path.display())))?;
    let mut values = Vec::with_capacity(HOURS);
    let mut lines = Vec::with_capacity(HOURS);
    for (i, raw) in text.lines().enumerate() {
        let line = (i + 1) as u64;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        values.push(parse_num(s, "hourly value", path, line)?);
        lines.push(line);
    }
    if values.len() != HOURS {
        return Err(validation(format!(
            "{}: expected {HOURS} hourly rows, found {}",
            path.display(),
            values.len()
        )));
    }
    Ok((values, lines))
}

/// Hourly demand in MW.
pub fn read_demand_trace(path: &Path) -> Result<HourlyDemandTrace, CliError> {
    let (values, lines) = read_hourly_column(path)?;
    if let Some(i) = values.iter().position(|v| !(*v >= 0.0)) {
        return Err(validation(format!(
            "{} line {}: demand must be non-negative MW, found {}",
            path.display(),
            lines[i],
            values[i]
        )));
    }
    HourlyDemandTrace::new(values).map_err(|e| validation(format!("{}: {e}", path.display())))
}

/// Hourly capacity factors in [0, 1]. The technology comes from the
/// configuration key naming the file (wind_trace / solar_trace), not from
/// the file contents.
pub fn read_cf_trace(
    path: &Path,
    technology: VariableTechnology,
) -> Result<CapacityFactorTrace, CliError> {
    let (values, lines) = read_hourly_column(path)?;
    CapacityFactorTrace::new(technology, values).map_err(|e| match e {
        ProfileError::OutOfRange { index, value } => validation(format!(
            "{} line {}: capacity factor must lie in [0, 1], found {value}",
            path.display(),
            lines[index]
        )),
        other => validation(format!("{}: {other}", path.display())),
    })
}

/// Two-column annual trajectory: header 'year,twh', consecutive years.
pub fn read_trajectory_csv(path: &Path) -> Result<AnnualDemandTrajectory, CliError> {
    let mut rdr = open_reader(path, true)?;
    check_header(&mut rdr, &["year", "twh"], path)?;
    let mut start_year: Option<i32> = None;
    let mut values = Vec::new();
    for result in rdr.records() {
        let rec = result.map_err(|e| validation(format!("{}: {e}", path.display())))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let year: i32 = parse_num(field(&rec, 0), "year", path, line)?;
        let value: f64 = parse_num(field(&rec, 1), "twh", path, line)?;
        match start_year {
            None => start_year = Some(year),
            Some(start) => {
                let expected = start + values.len() as i32;
                if year != expected {
                    return Err(validation(format!(
                        "{} line {line}: years must be consecutive, expected {expected}, found {year}",
                        path.display()
                    )));
                }
            }
        }
        values.push(value);
    }
    let start = start_year
        .ok_or_else(|| validation(format!("{}: trajectory has no rows", path.display())))?;
    AnnualDemandTrajectory::new(start, values)
        .map_err(|e| validation(format!("{}: {e}", path.display())))
}

pub fn schedule_csv_string(schedule: &BuildSchedule) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SCHEDULE_HEADER).expect("in-memory write");
    for e in &schedule.entries {
        w.write_record([
            e.year.to_string(),
            e.technology.clone(),
            format!("{}", e.capacity),
            e.unit.to_string(),
            e.site_id.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub fn write_schedule_csv(path: &Path, schedule: &BuildSchedule) -> Result<(), CliError> {
    fs::write(path, schedule_csv_string(schedule))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn read_schedule_csv(
    path: &Path,
    start_year: i32,
    horizon_years: u32,
) -> Result<BuildSchedule, CliError> {
    let mut rdr = open_reader(path, true)?;
    check_header(&mut rdr, &SCHEDULE_HEADER, path)?;
    let mut schedule = BuildSchedule::empty(start_year, horizon_years);
    for result in rdr.records() {
        let rec = result.map_err(|e| validation(format!("{}: {e}", path.display())))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let unit_raw = field(&rec, 3);
        let unit = match unit_raw.to_ascii_lowercase().as_str() {
            "gw" => CapacityUnit::Gw,
            "gwh" => CapacityUnit::Gwh,
            _ => {
                return Err(validation(format!(
                    "{} line {line}: unit must be GW or GWh, found '{unit_raw}'",
                    path.display()
                )))
            }
        };
        let site = field(&rec, 4);
        schedule.entries.push(BuildEntry {
            year: parse_num(field(&rec, 0), "year", path, line)?,
            technology: field(&rec, 1).to_string(),
            capacity: parse_num(field(&rec, 2), "capacity", path, line)?,
            unit,
            site_id: (!site.is_empty()).then(|| site.to_string()),
        });
    }
    Ok(schedule)
}
