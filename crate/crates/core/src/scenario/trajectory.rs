use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::region::CountryTable;
use super::schedule::{eta_at, EfficiencySchedule};
use super::{bundled, parse_num, read_text, records, ScenarioError};
use crate::demand::SocioState;
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub year: i32,
    pub gdp_per_cap: f64,
    pub population_multiplier: f64,
    pub household_size: f64,
}

/// Socioeconomic anchors of one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryTrajectory {
    pub country: String,
    anchors: Vec<Anchor>,
}

impl CountryTrajectory {
    /// Anchors are sorted by year; duplicates, non-positive values and
    /// single-anchor trajectories are rejected.
    pub fn new(country: &str, mut anchors: Vec<Anchor>) -> Result<Self, ScenarioError> {
        let err = |message: String| ScenarioError::Trajectory {
            country: country.to_string(),
            message,
        };
        anchors.sort_by_key(|a| a.year);
        if anchors.len() < 2 {
            return Err(err("needs at least two anchors".into()));
        }
        for w in anchors.windows(2) {
            if w[0].year == w[1].year {
                return Err(err(format!("year {} listed twice", w[0].year)));
            }
        }
        for a in &anchors {
            for (name, v) in [
                ("gdp_per_cap", a.gdp_per_cap),
                ("pop_multiplier", a.population_multiplier),
                ("household_size", a.household_size),
            ] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(err(format!(
                        "year {}: {name} must be positive, got {v}",
                        a.year
                    )));
                }
            }
        }
        Ok(Self {
            country: country.to_string(),
            anchors,
        })
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    pub fn first_year(&self) -> i32 {
        self.anchors[0].year
    }

    pub fn last_year(&self) -> i32 {
        self.anchors[self.anchors.len() - 1].year
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocioAtYear {
    pub socio: SocioState,
    pub population_multiplier: f64,
}

/// Socioeconomic state at `year`: GDP per capita interpolated in log space,
/// population multiplier and household size linearly, efficiency from `eff`.
pub fn socio_at(
    traj: &CountryTrajectory,
    year: i32,
    eff: &EfficiencySchedule,
) -> Result<SocioAtYear, ScenarioError> {
    let (first, last) = (traj.first_year(), traj.last_year());
    if year < first || year > last {
        return Err(ScenarioError::YearOutOfRange {
            country: traj.country.clone(),
            year,
            first,
            last,
        });
    }
    let a = &traj.anchors;
    let i = a.partition_point(|x| x.year <= year);
    let (gdp, pop, hh) = if a[i - 1].year == year {
        let x = a[i - 1];
        (x.gdp_per_cap, x.population_multiplier, x.household_size)
    } else {
        let (x0, x1) = (a[i - 1], a[i]);
        let f = f64::from(year - x0.year) / f64::from(x1.year - x0.year);
        (
            (x0.gdp_per_cap.ln() + (x1.gdp_per_cap.ln() - x0.gdp_per_cap.ln()) * f).exp(),
            x0.population_multiplier + (x1.population_multiplier - x0.population_multiplier) * f,
            x0.household_size + (x1.household_size - x0.household_size) * f,
        )
    };
    Ok(SocioAtYear {
        socio: SocioState {
            gdp_per_cap: gdp,
            household_size: hh,
            eta_efficiency: eta_at(eff, year).eta,
        },
        population_multiplier: pop,
    })
}

/// Bundled socioeconomic pathways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SspPreset {
    Ssp2,
    Ssp3,
    Ssp5,
}

impl SspPreset {
    pub const ALL: [SspPreset; 3] = [SspPreset::Ssp2, SspPreset::Ssp3, SspPreset::Ssp5];

    pub fn name(self) -> &'static str {
        match self {
            SspPreset::Ssp2 => "ssp2",
            SspPreset::Ssp3 => "ssp3",
            SspPreset::Ssp5 => "ssp5",
        }
    }

    fn csv(self) -> &'static str {
        match self {
            SspPreset::Ssp2 => bundled::SSP2_CSV,
            SspPreset::Ssp3 => bundled::SSP3_CSV,
            SspPreset::Ssp5 => bundled::SSP5_CSV,
        }
    }
}

impl fmt::Display for SspPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SspPreset {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SspPreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ScenarioError::UnknownPreset {
                kind: "ssp",
                name: s.to_string(),
                expected: SspPreset::ALL.map(|p| p.name()).join(", "),
            })
    }
}

/// Trajectories of every country in one pathway.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectorySet {
    pub name: String,
    by_country: BTreeMap<String, CountryTrajectory>,
}

impl TrajectorySet {
    pub const HEADER: [&'static str; 5] = [
        "country",
        "year",
        "gdp_per_cap",
        "pop_multiplier",
        "household_size",
    ];

    pub fn parse(name: &str, path: &Path, text: &[u8]) -> Result<Self, ScenarioError> {
        let mut rows: BTreeMap<String, Vec<Anchor>> = BTreeMap::new();
        for rec in records(path, text, &Self::HEADER)? {
            let (line, rec) = rec?;
            let anchor = Anchor {
                year: parse_num(path, line, &rec[1], "year")?,
                gdp_per_cap: parse_num(path, line, &rec[2], "gdp_per_cap")?,
                population_multiplier: parse_num(path, line, &rec[3], "pop_multiplier")?,
                household_size: parse_num(path, line, &rec[4], "household_size")?,
            };
            rows.entry(rec[0].to_string()).or_default().push(anchor);
        }
        let by_country = rows
            .into_iter()
            .map(|(c, anchors)| Ok((c.clone(), CountryTrajectory::new(&c, anchors)?)))
            .collect::<Result<_, ScenarioError>>()?;
        Ok(Self {
            name: name.to_string(),
            by_country,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let name = path.file_stem().map_or_else(
            || "custom".to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        Self::parse(&name, path, &read_text(path)?)
    }

    pub fn bundled(preset: SspPreset) -> Self {
        let label = format!("<bundled {}.csv>", preset.name());
        Self::parse(preset.name(), Path::new(&label), preset.csv().as_bytes())
            .expect("bundled trajectories parse")
    }

    pub fn get(&self, country: &str) -> Result<&CountryTrajectory, ScenarioError> {
        self.by_country
            .get(country)
            .ok_or_else(|| ScenarioError::UnknownCountry(country.to_string()))
    }

    pub fn len(&self) -> usize {
        self.by_country.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_country.is_empty()
    }

    pub fn countries(&self) -> impl Iterator<Item = &str> {
        self.by_country.keys().map(String::as_str)
    }

    /// Every country of `table` has a trajectory covering `[first, last]`.
    pub fn check_coverage(
        &self,
        table: &CountryTable,
        first: i32,
        last: i32,
    ) -> Result<(), ScenarioError> {
        for code in table.codes() {
            let t = self.get(code).map_err(|_| {
                ScenarioError::Coverage(format!(
                    "trajectory set {} has no entry for {code}",
                    self.name
                ))
            })?;
            if t.first_year() > first || t.last_year() < last {
                return Err(ScenarioError::YearOutOfRange {
                    country: code.to_string(),
                    year: if t.first_year() > first { first } else { last },
                    first: t.first_year(),
                    last: t.last_year(),
                });
            }
        }
        Ok(())
    }

    /// World population and population-weighted GDP per capita at `year`.
    pub fn global_aggregates(
        &self,
        table: &CountryTable,
        year: i32,
    ) -> Result<(f64, f64), ScenarioError> {
        let eff = EfficiencySchedule::default();
        let mut pop = CompensatedSum::new();
        let mut gdp = CompensatedSum::new();
        for (code, info) in table.iter() {
            let s = socio_at(self.get(code)?, year, &eff)?;
            let p = info.population_2010 * s.population_multiplier;
            pop.add(p);
            gdp.add(p * s.socio.gdp_per_cap);
        }
        let pop = pop.value();
        Ok((pop, if pop > 0.0 { gdp.value() / pop } else { 0.0 }))
    }
}
