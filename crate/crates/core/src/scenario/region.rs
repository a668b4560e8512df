use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{bundled, parse_num, read_text, records, ScenarioError};

/// The eight world regions results are aggregated into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    CentrallyPlannedAsia,
    EuropeFormerSovietUnion,
    LatinAmerica,
    SubSaharanAfrica,
    NorthAmerica,
    OceaniaPacificAsia,
    MiddleEastNorthAfrica,
    SouthAsia,
}

impl Region {
    pub const ALL: [Region; 8] = [
        Region::CentrallyPlannedAsia,
        Region::EuropeFormerSovietUnion,
        Region::LatinAmerica,
        Region::SubSaharanAfrica,
        Region::NorthAmerica,
        Region::OceaniaPacificAsia,
        Region::MiddleEastNorthAfrica,
        Region::SouthAsia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::CentrallyPlannedAsia => "Centrally Planned Asia",
            Region::EuropeFormerSovietUnion => "Europe & Former Soviet Union",
            Region::LatinAmerica => "Latin America",
            Region::SubSaharanAfrica => "Sub-Saharan Africa",
            Region::NorthAmerica => "North America",
            Region::OceaniaPacificAsia => "Oceania & Pacific Asia",
            Region::MiddleEastNorthAfrica => "Middle East & North Africa",
            Region::SouthAsia => "South Asia",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| ScenarioError::UnknownRegion(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryInfo {
    pub name: String,
    /// Persons in 2010, the base year for population multipliers.
    pub population_2010: f64,
}

/// Countries known to the simulator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountryTable {
    countries: BTreeMap<String, CountryInfo>,
}

impl CountryTable {
    pub const HEADER: [&'static str; 3] = ["country", "name", "population_2010"];

    pub fn parse(path: &Path, text: &[u8]) -> Result<Self, ScenarioError> {
        let mut countries = BTreeMap::new();
        for rec in records(path, text, &Self::HEADER)? {
            let (line, rec) = rec?;
            let code = rec[0].to_string();
            let info = CountryInfo {
                name: rec[1].to_string(),
                population_2010: parse_num(path, line, &rec[2], "population_2010")?,
            };
            if countries.insert(code.clone(), info).is_some() {
                return Err(ScenarioError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("duplicate country {code}"),
                });
            }
        }
        Ok(Self { countries })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::parse(path, &read_text(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(
            Path::new("<bundled countries.csv>"),
            bundled::COUNTRIES_CSV.as_bytes(),
        )
        .expect("bundled country table parses")
    }

    pub fn contains(&self, code: &str) -> bool {
        self.countries.contains_key(code)
    }

    pub fn get(&self, code: &str) -> Option<&CountryInfo> {
        self.countries.get(code)
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.countries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CountryInfo)> {
        self.countries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.countries.is_empty()
    }
}

/// Country code to region.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionMap {
    map: BTreeMap<String, Region>,
}

impl RegionMap {
    pub const HEADER: [&'static str; 2] = ["country", "region"];

    pub fn parse(path: &Path, text: &[u8]) -> Result<Self, ScenarioError> {
        let mut map = BTreeMap::new();
        for rec in records(path, text, &Self::HEADER)? {
            let (line, rec) = rec?;
            let region: Region =
                rec[1]
                    .parse()
                    .map_err(|e: ScenarioError| ScenarioError::Parse {
                        path: path.to_path_buf(),
                        line,
                        message: e.to_string(),
                    })?;
            if map.insert(rec[0].to_string(), region).is_some() {
                return Err(ScenarioError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("country {} mapped twice", &rec[0]),
                });
            }
        }
        Ok(Self { map })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::parse(path, &read_text(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(
            Path::new("<bundled regions.csv>"),
            bundled::REGIONS_CSV.as_bytes(),
        )
        .expect("bundled region map parses")
    }

    pub fn region_of(&self, country: &str) -> Result<Region, ScenarioError> {
        self.map
            .get(country)
            .copied()
            .ok_or_else(|| ScenarioError::UnknownCountry(country.to_string()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Every country of `table` has a region, and every mapped country is
    /// in `table`.
    pub fn check_total(&self, table: &CountryTable) -> Result<(), ScenarioError> {
        let missing: Vec<&str> = table
            .codes()
            .filter(|c| !self.map.contains_key(*c))
            .collect();
        if !missing.is_empty() {
            return Err(ScenarioError::Coverage(format!(
                "countries without a region: {}",
                missing.join(", ")
            )));
        }
        let extra: Vec<&str> = self
            .map
            .keys()
            .map(String::as_str)
            .filter(|c| !table.contains(c))
            .collect();
        if !extra.is_empty() {
            return Err(ScenarioError::Coverage(format!(
                "region map lists unknown countries: {}",
                extra.join(", ")
            )));
        }
        Ok(())
    }
}

/// Convenience wrapper matching the free-function style of the other modules.
pub fn region_of(map: &RegionMap, country: &str) -> Result<Region, ScenarioError> {
    map.region_of(country)
}
