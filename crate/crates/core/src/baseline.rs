//! Bundled 2022 baseline dataset: the coal fleet and the other utility
//! plants it operates alongside, with the calibrated availability trends.
//!
//! Per-unit figures are illustrative. They are calibrated so the aggregate
//! statistics hold exactly: 39.8 GW of coal across 15 stations (990 MW to
//! 4.8 GW, mean 2.65 GW), mean unit age 36 years in 2023 (41 years with the
//! two newest stations excluded, range 22 to 57), cumulative retirements of
//! 28 GW fifteen years after 2022 and 35.5 GW after twenty-five, and a
//! fleet availability trend falling from 0.80 in 2002 to 0.53 in 2022.
//! Individual nameplate ratings and dates deviate from the utility's
//! published unit data; edit `data/fleet_2022.csv` in the companion crate
//! to study a different fleet.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::fleet::{DispatchClass, EafBasis, EafModel, Fleet, Plant, TechnologyClass};

/// Base year of the dataset: capacities and demand statistics describe
/// this calendar year.
pub const BASE_YEAR: i32 = 2022;

/// The two most recently built coal stations (9.6 GW combined). They are
/// kept through the planning horizon rather than replaced.
pub const NEWEST_COAL_UNITS: [&str; 2] = ["Medupi", "Kusile"];

/// name, technology, nameplate MW, commission year, decommission year.
/// Decommission years follow the published-plan shape: 50-year lives with
/// modest schedule adjustments (overdue units carried a few years into the
/// program, the late-1980s cohort brought forward slightly).
const PLANTS: &[(&str, &str, f64, i32, i32)] = &[
    ("Komati", "coal", 990.0, 1966, 2024),
    ("Camden", "coal", 1520.0, 1968, 2025),
    ("Hendrina", "coal", 1860.0, 1970, 2026),
    ("Arnot", "coal", 2100.0, 1975, 2027),
    ("Grootvlei", "coal", 1170.0, 1978, 2028),
    ("Kriel", "coal", 2720.0, 1980, 2030),
    ("Matla", "coal", 2760.0, 1983, 2033),
    ("Duvha", "coal", 2780.0, 1984, 2034),
    ("Tutuka", "coal", 2830.0, 1988, 2036),
    ("Lethabo", "coal", 3360.0, 1989, 2037),
    ("Matimba", "coal", 2910.0, 1991, 2037),
    ("Kendal", "coal", 3000.0, 1993, 2037),
    ("Majuba", "coal", 2200.0, 2001, 2047),
    ("Medupi", "coal", 4800.0, 2019, 2069),
    ("Kusile", "coal", 4800.0, 2020, 2070),
    ("Koeberg", "nuclear", 1900.0, 1984, 2044),
    ("Gariep", "hydro", 360.0, 1971, 2100),
    ("Vanderkloof", "hydro", 240.0, 1977, 2100),
    ("Drakensberg", "pumped_storage", 1000.0, 1981, 2100),
    ("Palmiet", "pumped_storage", 400.0, 1988, 2100),
    ("Ingula", "pumped_storage", 1300.0, 2017, 2100),
    ("Ankerlig", "ocgt", 1340.0, 2007, 2057),
    ("Gourikwa", "ocgt", 740.0, 2007, 2057),
    ("Dedisa", "ocgt", 650.0, 2015, 2065),
    ("Avon", "ocgt", 670.0, 2016, 2066),
    ("Wind_IPP_Fleet", "wind", 3400.0, 2016, 2046),
    ("Solar_IPP_Fleet", "solar", 2800.0, 2016, 2051),
];

/// Technology registry with overnight capital costs (USD/kW, USD/kWh for
/// storage), construction lead times and unit size envelopes.
pub fn default_technologies() -> Vec<TechnologyClass> {
    let t = |id: &str, class, cost, lead, min, max| TechnologyClass {
        id: id.to_string(),
        dispatch_class: class,
        unit_capital_cost: cost,
        construction_lead_time_years: lead,
        unit_size_min_mw: min,
        unit_size_max_mw: max,
    };
    alloc::vec![
        t("coal", DispatchClass::Baseload, 6876.0, 12, 990.0, 4800.0),
        t("nuclear", DispatchClass::Baseload, 7406.0, 14, 900.0, 2000.0),
        t("hydro", DispatchClass::Baseload, 3083.0, 6, 100.0, 1500.0),
        t("pumped_storage", DispatchClass::Storage, 150.0, 8, 100.0, 1500.0),
        t("battery", DispatchClass::Storage, 400.0, 1, 10.0, 2000.0),
        t("wind", DispatchClass::Variable, 2098.0, 1, 50.0, 1000.0),
        t("solar", DispatchClass::Variable, 1448.0, 1, 10.0, 1000.0),
        t("ocgt", DispatchClass::FirmDispatchable, 867.0, 3, 100.0, 1500.0),
    ]
}

/// Availability models. Coal follows the measured fleet-wide decline
/// (0.80 in 2002 to 0.53 in 2022, extrapolated onward); nuclear follows
/// its own observed slide (0.85 in 2016 to 0.65 in 2023). Everything else
/// is treated as fully available and shaped by traces or dispatch instead.
pub fn default_availability() -> BTreeMap<alloc::string::String, EafModel> {
    let mut map = BTreeMap::new();
    map.insert(
        "coal".to_string(),
        EafModel::linear_decline(EafBasis::Year, (2002.0, 0.80), (2022.0, 0.53)).unwrap(),
    );
    map.insert(
        "nuclear".to_string(),
        EafModel::linear_decline(EafBasis::Year, (2016.0, 0.85), (2023.0, 0.65)).unwrap(),
    );
    for id in ["hydro", "pumped_storage", "battery", "wind", "solar", "ocgt"] {
        map.insert(id.to_string(), EafModel::Constant(1.0));
    }
    map
}

/// The full bundled fleet.
pub fn bundled_fleet() -> Fleet {
    let plants: Vec<Plant> = PLANTS
        .iter()
        .map(|&(name, tech, mw, from, to)| Plant {
            name: name.to_string(),
            technology: tech.to_string(),
            nameplate_mw: mw,
            commission_year: from,
            decommission_year: to,
            site_id: {
                let mut s = alloc::string::String::from("site_");
                s.push_str(&name.to_lowercase());
                s
            },
        })
        .collect();
    Fleet::new(plants, default_technologies(), default_availability())
        .expect("bundled dataset is valid")
}
