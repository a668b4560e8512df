//! Per-country socioeconomic trajectories, efficiency and warming schedules,
//! and the country-to-region map.

mod region;
mod schedule;
mod trajectory;

use std::path::PathBuf;

use thiserror::Error;

pub use region::{region_of, CountryInfo, CountryTable, Region, RegionMap};
pub use schedule::{
    eta_at, warming_at, EfficiencyAtYear, EfficiencySchedule, WarmingPreset, WarmingSchedule,
};
pub use trajectory::{socio_at, Anchor, CountryTrajectory, SocioAtYear, SspPreset, TrajectorySet};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown country {0:?}")]
    UnknownCountry(String),
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("country {country}: year {year} outside trajectory range [{first}, {last}]")]
    YearOutOfRange {
        country: String,
        year: i32,
        first: i32,
        last: i32,
    },
    #[error("country {country}: {message}")]
    Trajectory { country: String, message: String },
    #[error("warming schedule {name}: {message}")]
    Warming { name: String, message: String },
    #[error("efficiency schedule: {0}")]
    Efficiency(String),
    #[error("unknown {kind} preset {name:?} (expected one of {expected})")]
    UnknownPreset {
        kind: &'static str,
        name: String,
        expected: String,
    },
    #[error("{0}")]
    Coverage(String),
}

fn read_text(path: &std::path::Path) -> Result<Vec<u8>, ScenarioError> {
    std::fs::read(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Iterate data records of a small CSV with a fixed header, yielding the
/// 1-based line number with each record.
fn records<'a>(
    path: &'a std::path::Path,
    text: &'a [u8],
    header: &'a [&'a str],
) -> Result<impl Iterator<Item = Result<(u64, csv::StringRecord), ScenarioError>> + 'a, ScenarioError>
{
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text);
    let got = rdr.headers().map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: e.to_string(),
    })?;
    if got.iter().ne(header.iter().copied()) {
        return Err(ScenarioError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("header must be `{}`", header.join(",")),
        });
    }
    Ok(rdr.into_records().map(move |r| {
        r.map_err(|e| ScenarioError::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })
        .and_then(|rec| {
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != header.len() {
                Err(ScenarioError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("expected {} columns", header.len()),
                })
            } else {
                Ok((line, rec))
            }
        })
    }))
}

fn parse_num<T: std::str::FromStr>(
    path: &std::path::Path,
    line: u64,
    raw: &str,
    name: &str,
) -> Result<T, ScenarioError> {
    raw.parse().map_err(|_| ScenarioError::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid {name} {raw:?}"),
    })
}

/// Reference data compiled into the library.
pub mod bundled {
    pub const COUNTRIES_CSV: &str = include_str!("../../data/countries.csv");
    pub const REGIONS_CSV: &str = include_str!("../../data/regions.csv");
    pub const SSP2_CSV: &str = include_str!("../../data/trajectories/ssp2.csv");
    pub const SSP3_CSV: &str = include_str!("../../data/trajectories/ssp3.csv");
    pub const SSP5_CSV: &str = include_str!("../../data/trajectories/ssp5.csv");
}
