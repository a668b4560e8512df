//! Report files. Floats are written with Rust's shortest round-trip
//! formatting, so the bytes depend only on the values.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{CellYearResult, Dataset, EngineError, ReportTables, RunConfig, RunOutput};

pub const CAPACITY_FILE: &str = "capacity_by_region_year.csv";
pub const MATCH_FILE: &str = "match_by_region_year.csv";
pub const FLEX_FILE: &str = "flex_curve_by_year.csv";
pub const CELL_RESULTS_FILE: &str = "cell_results.csv";
pub const MANIFEST_REPORT_FILE: &str = "run_manifest.txt";

pub const CAPACITY_HEADER: [&str; 8] = [
    "year",
    "region",
    "interpolated",
    "n_cells",
    "ac_households",
    "annual_load_kwh",
    "capacity_w",
    "added_capacity_w",
];
pub const MATCH_HEADER: [&str; 8] = [
    "year",
    "region",
    "interpolated",
    "annual_load_kwh",
    "direct_matched_kwh",
    "direct_fraction",
    "storage_matched_kwh",
    "storage_fraction",
];
pub const FLEX_HEADER: [&str; 6] = [
    "year",
    "region",
    "interpolated",
    "window_h",
    "matched_kwh",
    "fraction",
];
pub const CELL_RESULTS_HEADER: [&str; 12] = [
    "year",
    "cell_id",
    "country",
    "region",
    "population",
    "ac_households",
    "annual_load_kwh",
    "capacity_w",
    "direct_fraction",
    "storage_fraction",
    "direct_matched_kwh",
    "storage_matched_kwh",
];

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> EngineError + '_ {
    move |source| EngineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> EngineError + '_ {
    move |e| EngineError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    }
}

/// Write a CSV of `rows` under `header`.
fn write_csv<const N: usize>(
    path: &Path,
    header: &[&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<(), EngineError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

fn write_capacity(path: &Path, t: &ReportTables) -> Result<(), EngineError> {
    write_csv(
        path,
        &CAPACITY_HEADER,
        t.rows.iter().map(|r| {
            [
                r.year.to_string(),
                r.group.clone(),
                flag(r.interpolated),
                r.n_cells.to_string(),
                r.ac_households.to_string(),
                r.annual_load_kwh.to_string(),
                r.capacity_w.to_string(),
                r.added_capacity_w.to_string(),
            ]
        }),
    )
}

fn write_match(path: &Path, t: &ReportTables) -> Result<(), EngineError> {
    write_csv(
        path,
        &MATCH_HEADER,
        t.rows.iter().map(|r| {
            [
                r.year.to_string(),
                r.group.clone(),
                flag(r.interpolated),
                r.annual_load_kwh.to_string(),
                r.direct_matched_kwh.to_string(),
                r.direct_fraction().to_string(),
                r.storage_matched_kwh.to_string(),
                r.storage_fraction().to_string(),
            ]
        }),
    )
}

/// Flexibility curve rows: one per group, year and window.
pub fn write_flex_curve(path: &Path, t: &ReportTables) -> Result<(), EngineError> {
    write_csv(
        path,
        &FLEX_HEADER,
        t.rows.iter().flat_map(|r| {
            t.windows.iter().enumerate().map(move |(i, w)| {
                [
                    r.year.to_string(),
                    r.group.clone(),
                    flag(r.interpolated),
                    w.to_string(),
                    r.flex_matched_kwh[i].to_string(),
                    r.flex_fraction(i).to_string(),
                ]
            })
        }),
    )
}

pub fn write_cell_results(path: &Path, results: &[CellYearResult]) -> Result<(), EngineError> {
    write_csv(
        path,
        &CELL_RESULTS_HEADER,
        results.iter().map(|r| {
            [
                r.year.to_string(),
                r.cell_id.to_string(),
                r.country.clone(),
                r.region.name().to_string(),
                r.population.to_string(),
                r.ac_households.to_string(),
                r.annual_load_kwh.to_string(),
                r.capacity_w.to_string(),
                r.direct_fraction.to_string(),
                r.storage_fraction.to_string(),
                r.direct_matched_kwh.to_string(),
                r.storage_matched_kwh.to_string(),
            ]
        }),
    )
}

/// Manifest lines: tool version, config hash and settings, data checksums.
pub fn manifest_text(cfg: &RunConfig, data: &Dataset, out: &RunOutput) -> String {
    let mut s = String::new();
    s.push_str(&format!("tool_version = {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("config_hash = {}\n", cfg.hash()));
    for line in cfg.canonical_model_text().lines() {
        s.push_str(&format!("config.{line}\n"));
    }
    s.push_str(&format!("cells = {}\n", data.cells.len()));
    s.push_str(&format!(
        "synthetic_weather_cells = {}\n",
        data.synthetic_weather
    ));
    let simulated: Vec<String> = cfg
        .years
        .simulated()
        .iter()
        .map(|y| y.to_string())
        .collect();
    s.push_str(&format!("years_simulated = {}\n", simulated.join(",")));
    s.push_str(&format!("cell_year_results = {}\n", out.cell_results.len()));
    for (name, sum) in &data.checksums {
        s.push_str(&format!("sha256.{name} = {sum}\n"));
    }
    s
}

/// Write every report into `dir`, creating it if needed. Returns the paths
/// written.
pub fn write_reports(
    dir: &Path,
    cfg: &RunConfig,
    data: &Dataset,
    out: &RunOutput,
) -> Result<Vec<PathBuf>, EngineError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let paths: Vec<PathBuf> = [
        CAPACITY_FILE,
        MATCH_FILE,
        FLEX_FILE,
        CELL_RESULTS_FILE,
        MANIFEST_REPORT_FILE,
    ]
    .iter()
    .map(|f| dir.join(f))
    .collect();
    write_capacity(&paths[0], &out.tables)?;
    write_match(&paths[1], &out.tables)?;
    write_flex_curve(&paths[2], &out.tables)?;
    write_cell_results(&paths[3], &out.cell_results)?;
    let mut f = fs::File::create(&paths[4]).map_err(io_err(&paths[4]))?;
    f.write_all(manifest_text(cfg, data, out).as_bytes())
        .map_err(io_err(&paths[4]))?;
    Ok(paths)
}
