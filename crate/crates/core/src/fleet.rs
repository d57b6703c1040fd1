//! Generating fleet: named units, technology classes, availability models,
//! and the retirement arithmetic derived from them.
//!
//! Not modeled: unit commitment, outage draws, partial mothballing. A plant
//! is fully on the books from its commissioning year up to (excluding) its
//! decommissioning year.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub const HOURS_PER_YEAR: f64 = 8760.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispatchClass {
    Variable,
    Baseload,
    Storage,
    FirmDispatchable,
}

impl fmt::Display for DispatchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DispatchClass::Variable => "variable",
            DispatchClass::Baseload => "baseload",
            DispatchClass::Storage => "storage",
            DispatchClass::FirmDispatchable => "firm_dispatchable",
        };
        f.write_str(s)
    }
}

/// A technology shared by plants: dispatch class, capital cost and build
/// characteristics. `unit_capital_cost` is USD per kW, except for storage
/// technologies where it is USD per kWh of energy capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechnologyClass {
    pub id: String,
    pub dispatch_class: DispatchClass,
    pub unit_capital_cost: f64,
    pub construction_lead_time_years: u32,
    pub unit_size_min_mw: f64,
    pub unit_size_max_mw: f64,
}

impl TechnologyClass {
    pub fn validate(&self) -> Result<(), FleetError> {
        if self.id.is_empty() {
            return Err(FleetError::Invalid("technology id is empty".to_owned()));
        }
        if !(self.unit_capital_cost >= 0.0) {
            return Err(FleetError::Invalid(alloc::format!(
                "technology {}: unit capital cost must be >= 0",
                self.id
            )));
        }
        if !(self.unit_size_min_mw > 0.0 && self.unit_size_min_mw <= self.unit_size_max_mw) {
            return Err(FleetError::Invalid(alloc::format!(
                "technology {}: unit size bounds must satisfy 0 < min <= max",
                self.id
            )));
        }
        Ok(())
    }
}

/// A named generating unit. Capacity is nameplate MW; the unit is active in
/// years `commission_year..decommission_year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plant {
    pub name: String,
    pub technology: String,
    pub nameplate_mw: f64,
    pub commission_year: i32,
    pub decommission_year: i32,
    pub site_id: String,
}

impl Plant {
    pub fn active_in(&self, year: i32) -> bool {
        self.commission_year <= year && year < self.decommission_year
    }

    pub fn age_in(&self, year: i32) -> i32 {
        year - self.commission_year
    }

    fn validate(&self) -> Result<(), FleetError> {
        if self.name.is_empty() {
            return Err(FleetError::Invalid("plant name is empty".to_owned()));
        }
        if !(self.nameplate_mw > 0.0) {
            return Err(FleetError::Invalid(alloc::format!(
                "plant {}: nameplate must be > 0 MW",
                self.name
            )));
        }
        if self.decommission_year <= self.commission_year {
            return Err(FleetError::Invalid(alloc::format!(
                "plant {}: decommission year must follow commission year",
                self.name
            )));
        }
        Ok(())
    }
}

/// Default service life applied when a dataset omits a decommission year.
pub const DEFAULT_SERVICE_LIFE_YEARS: i32 = 50;

/// Axis an availability curve is indexed on: plant age in years, or
/// calendar year (fleet-wide performance trend).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EafBasis {
    Age,
    Year,
}

/// Energy availability factor model. Piecewise-linear between anchors,
/// flat before the first anchor, linearly extrapolated past the last
/// (continuing the final segment's slope), clamped to [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EafModel {
    Constant(f64),
    Piecewise {
        basis: EafBasis,
        anchors: Vec<(f64, f64)>,
    },
}

impl EafModel {
    pub fn constant(value: f64) -> Result<Self, FleetError> {
        let m = EafModel::Constant(value);
        m.validate()?;
        Ok(m)
    }

    /// Two-anchor convenience: linear decline from `start` to `end`.
    pub fn linear_decline(
        basis: EafBasis,
        start: (f64, f64),
        end: (f64, f64),
    ) -> Result<Self, FleetError> {
        let m = EafModel::Piecewise {
            basis,
            anchors: alloc::vec![start, end],
        };
        m.validate()?;
        Ok(m)
    }

    pub fn piecewise(basis: EafBasis, anchors: Vec<(f64, f64)>) -> Result<Self, FleetError> {
        let m = EafModel::Piecewise { basis, anchors };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), FleetError> {
        match self {
            EafModel::Constant(v) => {
                if !(0.0..=1.0).contains(v) {
                    return Err(FleetError::Invalid(
                        "constant availability must lie in [0, 1]".to_owned(),
                    ));
                }
            }
            EafModel::Piecewise { anchors, .. } => {
                if anchors.is_empty() {
                    return Err(FleetError::Invalid(
                        "piecewise availability needs at least one anchor".to_owned(),
                    ));
                }
                for w in anchors.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(FleetError::Invalid(
                            "availability anchors must be strictly increasing on their axis"
                                .to_owned(),
                        ));
                    }
                    if w[1].1 > w[0].1 {
                        return Err(FleetError::Invalid(
                            "availability must be non-increasing across anchors".to_owned(),
                        ));
                    }
                }
                for (_, v) in anchors {
                    if !(0.0..=1.0).contains(v) {
                        return Err(FleetError::Invalid(
                            "availability anchors must lie in [0, 1]".to_owned(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Availability for a plant of `age` years in calendar `year`.
    pub fn value(&self, age: f64, year: f64) -> f64 {
        match self {
            EafModel::Constant(v) => *v,
            EafModel::Piecewise { basis, anchors } => {
                let x = match basis {
                    EafBasis::Age => age,
                    EafBasis::Year => year,
                };
                eval_piecewise(anchors, x)
            }
        }
    }
}

fn eval_piecewise(anchors: &[(f64, f64)], x: f64) -> f64 {
    let first = anchors[0];
    let last = anchors[anchors.len() - 1];
    let raw = if x <= first.0 {
        first.1
    } else if x >= last.0 {
        if anchors.len() == 1 {
            last.1
        } else {
            let prev = anchors[anchors.len() - 2];
            let slope = (last.1 - prev.1) / (last.0 - prev.0);
            last.1 + slope * (x - last.0)
        }
    } else {
        let mut out = last.1;
        for w in anchors.windows(2) {
            if x >= w[0].0 && x <= w[1].0 {
                let t = (x - w[0].0) / (w[1].0 - w[0].0);
                out = w[0].1 + t * (w[1].1 - w[0].1);
                break;
            }
        }
        out
    };
    raw.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FleetError {
    Invalid(String),
    UnknownTechnology { plant: String, technology: String },
    MissingAvailabilityModel { technology: String },
    DuplicatePlantName(String),
    DuplicateSiteId(String),
    ZeroCapacity,
}

impl fmt::Display for FleetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FleetError::Invalid(msg) => write!(f, "invalid fleet data: {msg}"),
            FleetError::UnknownTechnology { plant, technology } => {
                write!(f, "plant {plant} references unknown technology {technology}")
            }
            FleetError::MissingAvailabilityModel { technology } => {
                write!(f, "technology {technology} has no availability model")
            }
            FleetError::DuplicatePlantName(n) => write!(f, "duplicate plant name {n}"),
            FleetError::DuplicateSiteId(s) => write!(f, "duplicate site id {s}"),
            FleetError::ZeroCapacity => write!(f, "capacity must be positive"),
        }
    }
}

/// Statistics over plant ages, unweighted by capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgeStats {
    pub mean_years: f64,
    pub min_years: i32,
    pub max_years: i32,
    pub count: usize,
}

/// A validated collection of plants plus the technology registry and
/// availability models they reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fleet {
    plants: Vec<Plant>,
    technologies: BTreeMap<String, TechnologyClass>,
    availability: BTreeMap<String, EafModel>,
}

impl Fleet {
    pub fn new(
        plants: Vec<Plant>,
        technologies: Vec<TechnologyClass>,
        availability: BTreeMap<String, EafModel>,
    ) -> Result<Self, FleetError> {
        let mut tech_map = BTreeMap::new();
        for t in technologies {
            t.validate()?;
            if tech_map.insert(t.id.clone(), t).is_some() {
                return Err(FleetError::Invalid("duplicate technology id".to_owned()));
            }
        }
        for m in availability.values() {
            m.validate()?;
        }
        let mut names = BTreeMap::new();
        let mut sites = BTreeMap::new();
        for p in &plants {
            p.validate()?;
            if names.insert(p.name.clone(), ()).is_some() {
                return Err(FleetError::DuplicatePlantName(p.name.clone()));
            }
            if sites.insert(p.site_id.clone(), ()).is_some() {
                return Err(FleetError::DuplicateSiteId(p.site_id.clone()));
            }
            if !tech_map.contains_key(&p.technology) {
                return Err(FleetError::UnknownTechnology {
                    plant: p.name.clone(),
                    technology: p.technology.clone(),
                });
            }
            if !availability.contains_key(&p.technology) {
                return Err(FleetError::MissingAvailabilityModel {
                    technology: p.technology.clone(),
                });
            }
        }
        Ok(Fleet {
            plants,
            technologies: tech_map,
            availability,
        })
    }

    pub fn plants(&self) -> &[Plant] {
        &self.plants
    }

    pub fn technologies(&self) -> impl Iterator<Item = &TechnologyClass> {
        self.technologies.values()
    }

    pub fn technology(&self, id: &str) -> Option<&TechnologyClass> {
        self.technologies.get(id)
    }

    pub fn availability_model(&self, technology: &str) -> Option<&EafModel> {
        self.availability.get(technology)
    }

    fn class_of(&self, plant: &Plant) -> DispatchClass {
        self.technologies[&plant.technology].dispatch_class
    }

    fn selected<'a>(
        &'a self,
        class: Option<DispatchClass>,
    ) -> impl Iterator<Item = &'a Plant> + 'a {
        self.plants
            .iter()
            .filter(move |p| class.is_none_or(|c| self.class_of(p) == c))
    }

    /// Active nameplate in GW at `year`, optionally restricted to one
    /// dispatch class.
    pub fn capacity_gw(&self, year: i32, class: Option<DispatchClass>) -> f64 {
        self.selected(class)
            .filter(|p| p.active_in(year))
            .map(|p| p.nameplate_mw)
            .sum::<f64>()
            / 1000.0
    }

    /// Cumulative nameplate (GW) decommissioned in `(start, start + k]` for
    /// k = 0..=horizon. Entry 0 is always 0; the series is non-decreasing.
    pub fn cumulative_retired_gw(
        &self,
        start_year: i32,
        horizon_years: u32,
        class: Option<DispatchClass>,
    ) -> Vec<f64> {
        let mut series = Vec::with_capacity(horizon_years as usize + 1);
        for k in 0..=horizon_years {
            let end = start_year + k as i32;
            let total: f64 = self
                .selected(class)
                .filter(|p| p.decommission_year > start_year && p.decommission_year <= end)
                .map(|p| p.nameplate_mw)
                .sum();
            // the empty sum is -0.0; keep the series cleanly non-negative
            series.push(if total > 0.0 { total / 1000.0 } else { 0.0 });
        }
        series
    }

    /// Capacity-weighted availability over plants active at `year`.
    /// `None` when nothing is active in the selection.
    pub fn eaf(&self, year: i32, class: Option<DispatchClass>) -> Option<f64> {
        let mut cap = 0.0;
        let mut weighted = 0.0;
        for p in self.selected(class).filter(|p| p.active_in(year)) {
            let model = &self.availability[&p.technology];
            let a = model.value(p.age_in(year) as f64, year as f64);
            cap += p.nameplate_mw;
            weighted += p.nameplate_mw * a;
        }
        (cap > 0.0).then(|| weighted / cap)
    }

    /// Age statistics over plants active at `year`, after dropping any
    /// plants named in `exclude`.
    pub fn age_stats(&self, year: i32, exclude: &[&str]) -> Option<AgeStats> {
        let ages: Vec<i32> = self
            .plants
            .iter()
            .filter(|p| p.active_in(year) && !exclude.contains(&p.name.as_str()))
            .map(|p| p.age_in(year))
            .collect();
        if ages.is_empty() {
            return None;
        }
        let sum: i64 = ages.iter().map(|&a| a as i64).sum();
        Some(AgeStats {
            mean_years: sum as f64 / ages.len() as f64,
            min_years: *ages.iter().min().unwrap(),
            max_years: *ages.iter().max().unwrap(),
            count: ages.len(),
        })
    }

    /// New fleet containing only plants of one technology, keeping the
    /// registry entries they need.
    pub fn filter_technology(&self, technology: &str) -> Fleet {
        let plants: Vec<Plant> = self
            .plants
            .iter()
            .filter(|p| p.technology == technology)
            .cloned()
            .collect();
        Fleet {
            plants,
            technologies: self.technologies.clone(),
            availability: self.availability.clone(),
        }
    }
}

/// Capacity factor in percent from annual energy (TWh) and capacity (GW).
pub fn capacity_factor(energy_twh: f64, capacity_gw: f64) -> Result<f64, FleetError> {
    if !(capacity_gw > 0.0) {
        return Err(FleetError::ZeroCapacity);
    }
    Ok(100.0 * (energy_twh * 1000.0) / (capacity_gw * HOURS_PER_YEAR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline;

    fn tech(id: &str, class: DispatchClass) -> TechnologyClass {
        TechnologyClass {
            id: id.into(),
            dispatch_class: class,
            unit_capital_cost: 1000.0,
            construction_lead_time_years: 2,
            unit_size_min_mw: 10.0,
            unit_size_max_mw: 5000.0,
        }
    }

    fn plant(name: &str, mw: f64, from: i32, to: i32) -> Plant {
        Plant {
            name: name.into(),
            technology: "coal".into(),
            nameplate_mw: mw,
            commission_year: from,
            decommission_year: to,
            site_id: alloc::format!("site_{name}"),
        }
    }

    fn small_fleet() -> Fleet {
        let mut avail = BTreeMap::new();
        avail.insert("coal".into(), EafModel::constant(0.6).unwrap());
        Fleet::new(
            alloc::vec![plant("a", 1000.0, 1980, 2030), plant("b", 2000.0, 1990, 2040)],
            alloc::vec![tech("coal", DispatchClass::Baseload)],
            avail,
        )
        .unwrap()
    }

    #[test]
    fn capacity_counts_active_plants_only() {
        let f = small_fleet();
        assert_eq!(f.capacity_gw(1985, None), 1.0);
        assert_eq!(f.capacity_gw(2000, None), 3.0);
        assert_eq!(f.capacity_gw(2030, None), 2.0); // a retires in 2030
        assert_eq!(f.capacity_gw(2045, None), 0.0);
        assert_eq!(f.capacity_gw(2000, Some(DispatchClass::Variable)), 0.0);
    }

    #[test]
    fn cumulative_retired_starts_at_zero_and_is_monotone() {
        let f = small_fleet();
        let series = f.cumulative_retired_gw(2022, 20, None);
        assert_eq!(series.len(), 21);
        assert_eq!(series[0], 0.0);
        for w in series.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert_eq!(series[7], 0.0); // 2029: nothing gone yet
        assert_eq!(series[8], 1.0); // 2030: plant a
        assert_eq!(series[18], 3.0); // 2040: plant b too
    }

    #[test]
    fn retirement_conserves_nameplate() {
        let f = small_fleet();
        let start = 2022;
        let series = f.cumulative_retired_gw(start, 25, None);
        let at_start = f.capacity_gw(start, None);
        for (k, retired) in series.iter().enumerate() {
            let cap = f.capacity_gw(start + k as i32, None);
            assert!(
                (retired + cap - at_start).abs() < 1e-12,
                "year +{k}: {retired} + {cap} != {at_start}"
            );
        }
    }

    #[test]
    fn piecewise_eaf_interpolates_and_extrapolates() {
        let m =
            EafModel::linear_decline(EafBasis::Year, (2002.0, 0.80), (2022.0, 0.53)).unwrap();
        assert!((m.value(0.0, 2002.0) - 0.80).abs() < 1e-12);
        assert!((m.value(0.0, 2022.0) - 0.53).abs() < 1e-12);
        assert!((m.value(0.0, 2012.0) - 0.665).abs() < 1e-12);
        // flat before the first anchor
        assert!((m.value(0.0, 1990.0) - 0.80).abs() < 1e-12);
        // linear continuation after the last anchor
        let slope = (0.53 - 0.80) / 20.0;
        assert!((m.value(0.0, 2024.0) - (0.53 + 2.0 * slope)).abs() < 1e-12);
        // clamped at zero far out
        assert_eq!(m.value(0.0, 2100.0), 0.0);
    }

    #[test]
    fn eaf_model_rejects_bad_anchors() {
        assert!(EafModel::constant(1.2).is_err());
        assert!(EafModel::piecewise(EafBasis::Age, alloc::vec![]).is_err());
        assert!(EafModel::piecewise(
            EafBasis::Age,
            alloc::vec![(10.0, 0.8), (10.0, 0.7)]
        )
        .is_err());
        assert!(EafModel::piecewise(
            EafBasis::Age,
            alloc::vec![(10.0, 0.5), (20.0, 0.7)]
        )
        .is_err());
    }

    #[test]
    fn fleet_rejects_unknown_technology_and_missing_model() {
        let mut avail = BTreeMap::new();
        avail.insert("coal".into(), EafModel::constant(0.6).unwrap());
        let mut p = plant("x", 100.0, 2000, 2050);
        p.technology = "fusion".into();
        let err = Fleet::new(
            alloc::vec![p],
            alloc::vec![tech("coal", DispatchClass::Baseload)],
            avail.clone(),
        )
        .unwrap_err();
        assert!(matches!(err, FleetError::UnknownTechnology { .. }));

        let err = Fleet::new(
            alloc::vec![plant("y", 100.0, 2000, 2050)],
            alloc::vec![
                tech("coal", DispatchClass::Baseload),
                tech("gas", DispatchClass::FirmDispatchable),
            ],
            BTreeMap::new(),
        )
        .unwrap_err();
        assert!(matches!(err, FleetError::MissingAvailabilityModel { .. }));
    }

    #[test]
    fn fleet_rejects_duplicates() {
        let mut avail = BTreeMap::new();
        avail.insert("coal".into(), EafModel::constant(0.6).unwrap());
        let mut b = plant("a", 500.0, 1991, 2041);
        b.site_id = "site_other".into();
        let err = Fleet::new(
            alloc::vec![plant("a", 1000.0, 1980, 2030), b],
            alloc::vec![tech("coal", DispatchClass::Baseload)],
            avail,
        )
        .unwrap_err();
        assert!(matches!(err, FleetError::DuplicatePlantName(_)));
    }

    #[test]
    fn capacity_factor_matches_reference_values() {
        // 2022 system statistics: energy over nameplate-hours.
        assert!((capacity_factor(176.6, 39.8).unwrap() - 50.7).abs() < 0.1);
        assert!((capacity_factor(10.1, 1.9).unwrap() - 60.7).abs() < 0.1);
        assert!((capacity_factor(14.0, 3.3).unwrap() - 48.4).abs() < 0.1);
        assert!((capacity_factor(9.7, 3.4).unwrap() - 32.6).abs() < 0.1);
        assert!((capacity_factor(6.5, 2.8).unwrap() - 26.5).abs() < 0.1);
        assert!((capacity_factor(3.6, 3.4).unwrap() - 12.1).abs() < 0.1);
        assert!(capacity_factor(1.0, 0.0).is_err());
    }

    #[test]
    fn baseline_capacity_and_milestones() {
        let f = baseline::bundled_fleet();
        // coal 39.8 + nuclear 1.9 + hydro 0.6
        assert!((f.capacity_gw(2022, Some(DispatchClass::Baseload)) - 42.3).abs() < 1e-9);
        let coal = f.filter_technology("coal");
        assert!((coal.capacity_gw(2022, None) - 39.8).abs() < 1e-9);

        // Retirement milestones over the whole fleet, program start 2022.
        let series = f.cumulative_retired_gw(2022, 25, None);
        assert!((series[15] - 28.0).abs() <= 1.0, "+15y: {}", series[15]);
        assert!((series[25] - 35.5).abs() <= 1.0, "+25y: {}", series[25]);
    }

    #[test]
    fn baseline_age_statistics() {
        let coal = baseline::bundled_fleet().filter_technology("coal");
        let all = coal.age_stats(2023, &[]).unwrap();
        assert_eq!(all.count, 15);
        assert!((all.mean_years - 36.0).abs() <= 1.0);

        let older = coal
            .age_stats(2023, &[baseline::NEWEST_COAL_UNITS[0], baseline::NEWEST_COAL_UNITS[1]])
            .unwrap();
        assert_eq!(older.count, 13);
        assert!((older.mean_years - 41.0).abs() <= 1.0);
        assert_eq!(older.min_years, 22);
        assert_eq!(older.max_years, 57);
    }

    #[test]
    fn baseline_availability_anchors() {
        let coal = baseline::bundled_fleet().filter_technology("coal");
        assert!((coal.eaf(2002, None).unwrap() - 0.80).abs() < 1e-9);
        assert!((coal.eaf(2022, None).unwrap() - 0.53).abs() < 1e-9);
        // continued decline beyond the last anchor
        assert!(coal.eaf(2024, None).unwrap() < 0.53);
    }
}
