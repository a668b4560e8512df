//! Scenario runs: every cell and simulated year through the demand, PV and
//! matching chain, then regional aggregation and report files.
//!
//! Each simulated year is independent: the cell climatology is shifted by
//! the year's warming offset and combined with that year's socioeconomic
//! state. Only the added-capacity column links consecutive years.

mod aggregate;
mod config;
mod dataset;
mod report;

use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::coupling::{
    cop_storage_hourly, direct_match, flexibility_curve, matched_energy, pv_series,
    simulate_storage, size_pv, CouplingError, FlexPoint, MatchReport, SizingResult, StorageOutcome,
    StorageSpec,
};
use crate::demand::{CopParams, DemandError, DemandParams, DemandSeries, SocioState};
use crate::geogrid::{apply_warming, GeoError, GridCell, HourlyWeather, WeatherSeries};
use crate::pvyield::{hourly_yield, PvConfigError, YieldSeries};
use crate::scenario::{
    eta_at, socio_at, warming_at, EfficiencySchedule, Region, ScenarioError, TrajectorySet,
    WarmingSchedule,
};

pub use aggregate::{aggregate, build_tables, GroupYear, ReportTables, WORLD};
pub use config::{
    parse_windows, sha256_hex, PvSettings, RunConfig, WarmingChoice, YearRange, FIRST_YEAR,
    LAST_YEAR, MODEL_KEYS, RUNTIME_KEYS,
};
pub use dataset::{Dataset, CELLS_FILE, COUNTRIES_FILE, MANIFEST_FILE, REGIONS_FILE};
pub use report::{
    manifest_text, write_cell_results, write_flex_curve, write_reports, CAPACITY_FILE,
    CAPACITY_HEADER, CELL_RESULTS_FILE, CELL_RESULTS_HEADER, FLEX_FILE, FLEX_HEADER,
    MANIFEST_REPORT_FILE, MATCH_FILE, MATCH_HEADER,
};

/// A failure inside the per-cell chain.
#[derive(Debug, Error)]
pub enum StageError {
    #[error("demand: {0}")]
    Demand(#[from] DemandError),
    #[error("pv: {0}")]
    Pv(#[from] PvConfigError),
    #[error("coupling: {0}")]
    Coupling(#[from] CouplingError),
    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("config key {key}: {message}")]
    Config { key: String, message: String },
    #[error("{path}:{line}: {message}")]
    ConfigFile {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Data(String),
    #[error("cell {cell_id}, year {year}: {source}")]
    Cell {
        cell_id: u64,
        year: i32,
        #[source]
        source: StageError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Model parameters shared by every cell-year of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub demand: DemandParams,
    /// `eta_carnot` is replaced by [`YearState::eta_carnot`].
    pub cop: CopParams,
    pub pv: PvSettings,
    /// `None` disables the storage simulation.
    pub storage: Option<StorageSpec>,
    pub windows: Vec<usize>,
}

impl ModelParams {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            demand: cfg.demand,
            cop: cfg.cop,
            pv: cfg.pv,
            storage: cfg.storage.then_some(cfg.storage_spec),
            windows: cfg.windows.clone(),
        }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::from_config(&RunConfig::default())
    }
}

/// Exogenous state of one country in one year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearState {
    pub year: i32,
    pub socio: SocioState,
    pub population_multiplier: f64,
    /// Warming offset, kelvin.
    pub delta_t: f64,
    pub eta_carnot: f64,
}

/// Per-cell, per-year outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CellYearResult {
    pub cell_id: u64,
    pub year: i32,
    pub country: String,
    pub region: Region,
    /// Population after the year's multiplier.
    pub population: f64,
    pub ac_households: f64,
    pub annual_load_kwh: f64,
    pub capacity_w: f64,
    /// 0 when there is no load.
    pub direct_fraction: f64,
    /// Equal to `direct_fraction` when storage is disabled.
    pub storage_fraction: f64,
    pub direct_matched_kwh: f64,
    pub storage_matched_kwh: f64,
    /// Matched energy per configured window, kWh.
    pub flex_matched_kwh: Vec<f64>,
}

/// Everything computed for one cell-year, including hourly series.
#[derive(Debug, Clone)]
pub struct CellYearDetail {
    pub result: CellYearResult,
    pub demand: DemandSeries,
    pub yield_series: YieldSeries,
    pub sizing: SizingResult,
    pub pv_kwh: Vec<f64>,
    pub report: MatchReport,
    pub storage: Option<StorageOutcome>,
}

/// Full chain for one cell-year, keeping the hourly series.
pub fn simulate_cell_year(
    cell: &GridCell,
    region: Region,
    weather: &HourlyWeather,
    state: &YearState,
    params: &ModelParams,
) -> Result<CellYearDetail, EngineError> {
    let wrap = |source: StageError| EngineError::Cell {
        cell_id: cell.cell_id,
        year: state.year,
        source,
    };
    simulate_inner(cell, region, weather, state, params).map_err(wrap)
}

fn simulate_inner(
    cell: &GridCell,
    region: Region,
    weather: &HourlyWeather,
    state: &YearState,
    params: &ModelParams,
) -> Result<CellYearDetail, StageError> {
    let warmed = apply_warming(weather, state.delta_t);
    let temperature = warmed.temperature();
    let cop = CopParams {
        eta_carnot: state.eta_carnot,
        ..params.cop
    };
    let population = cell.population * state.population_multiplier;
    let demand =
        DemandSeries::compute(temperature, population, &state.socio, &params.demand, &cop)?;

    let pv_cfg = params.pv.for_latitude(cell.latitude);
    pv_cfg.validate()?;
    let yield_series = hourly_yield(&warmed, cell.latitude, cell.longitude, &pv_cfg);
    let sizing = size_pv(&demand.hourly_kwh, &yield_series.yield_norm)?;
    let pv_kwh = pv_series(sizing.capacity_w, &yield_series.yield_norm);

    let load = sizing.annual_load_kwh;
    let direct_matched = matched_energy(&demand.hourly_kwh, &pv_kwh);
    let flex_curve = flexibility_curve(&demand.hourly_kwh, &pv_kwh, &params.windows)?;

    let storage = match &params.storage {
        Some(spec) => {
            let cop_storage = cop_storage_hourly(temperature, &cop, spec);
            Some(simulate_storage(
                &demand.hourly_kwh,
                &pv_kwh,
                &demand.cop_hourly,
                &cop_storage,
                spec,
                demand.ac_households,
                params.demand.t_base,
            )?)
        }
        None => None,
    };
    let storage_matched = storage.as_ref().map_or(direct_matched, |s| s.served_kwh);

    let fraction = |matched: f64| if load > 0.0 { matched / load } else { 0.0 };
    let report = MatchReport {
        direct_fraction: if load > 0.0 {
            direct_match(&demand.hourly_kwh, &pv_kwh)?
        } else {
            0.0
        },
        storage_fraction: fraction(storage_matched),
        flex_curve: flex_curve.clone(),
        capacity_w: sizing.capacity_w,
    };
    let result = CellYearResult {
        cell_id: cell.cell_id,
        year: state.year,
        country: cell.country.clone(),
        region,
        population,
        ac_households: demand.ac_households,
        annual_load_kwh: load,
        capacity_w: sizing.capacity_w,
        direct_fraction: report.direct_fraction,
        storage_fraction: report.storage_fraction,
        direct_matched_kwh: direct_matched,
        storage_matched_kwh: storage_matched,
        flex_matched_kwh: flex_curve
            .iter()
            .map(|p: &FlexPoint| p.matched_kwh)
            .collect(),
    };
    Ok(CellYearDetail {
        result,
        demand,
        yield_series,
        sizing,
        pv_kwh,
        report,
        storage,
    })
}

/// Full chain for one cell-year, summarized.
pub fn run_cell_year(
    cell: &GridCell,
    region: Region,
    weather: &HourlyWeather,
    state: &YearState,
    params: &ModelParams,
) -> Result<CellYearResult, EngineError> {
    simulate_cell_year(cell, region, weather, state, params).map(|d| d.result)
}

/// Trajectories and schedules of one scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub trajectories: TrajectorySet,
    pub warming: WarmingSchedule,
    pub efficiency: EfficiencySchedule,
}

impl Scenario {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, EngineError> {
        let trajectories = match &cfg.trajectories_file {
            Some(path) => TrajectorySet::load(path)?,
            None => TrajectorySet::bundled(cfg.ssp),
        };
        Ok(Self {
            trajectories,
            warming: cfg.warming.schedule()?,
            efficiency: cfg.efficiency,
        })
    }

    pub fn year_state(&self, country: &str, year: i32) -> Result<YearState, ScenarioError> {
        let s = socio_at(self.trajectories.get(country)?, year, &self.efficiency)?;
        Ok(YearState {
            year,
            socio: s.socio,
            population_multiplier: s.population_multiplier,
            delta_t: warming_at(&self.warming, year),
            eta_carnot: eta_at(&self.efficiency, year).eta_ca,
        })
    }

    /// Every country of `data` has a trajectory over `years`.
    pub fn check_covers(&self, data: &Dataset, years: &YearRange) -> Result<(), EngineError> {
        for country in data.cell_countries() {
            let t = self.trajectories.get(country)?;
            for year in [years.start, years.end] {
                if year < t.first_year() || year > t.last_year() {
                    return Err(ScenarioError::YearOutOfRange {
                        country: country.to_string(),
                        year,
                        first: t.first_year(),
                        last: t.last_year(),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }
}

/// Results of a run, in memory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Sorted by year, then `cell_id`.
    pub cell_results: Vec<CellYearResult>,
    pub tables: ReportTables,
}

fn with_pool<T: Send>(
    workers: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, EngineError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    Ok(pool.install(job))
}

/// Simulate `years` for every cell of `data`.
///
/// Cell-years are evaluated in parallel; results come back in a fixed order
/// so every reduction downstream is independent of the worker count.
pub fn simulate_years(
    data: &Dataset,
    scenario: &Scenario,
    params: &ModelParams,
    years: &[i32],
    workers: Option<usize>,
) -> Result<Vec<CellYearResult>, EngineError> {
    let jobs: Vec<(i32, usize)> = years
        .iter()
        .flat_map(|&y| (0..data.cells.len()).map(move |i| (y, i)))
        .collect();
    with_pool(workers, || {
        jobs.par_iter()
            .map(|&(year, i)| {
                let cell = &data.cells[i];
                let state =
                    scenario
                        .year_state(&cell.country, year)
                        .map_err(|e| EngineError::Cell {
                            cell_id: cell.cell_id,
                            year,
                            source: e.into(),
                        })?;
                run_cell_year(cell, data.regions[i], &data.weather[i], &state, params)
            })
            .collect::<Result<Vec<_>, _>>()
    })?
}

/// Run a configured scenario over a loaded dataset.
pub fn run(cfg: &RunConfig, data: &Dataset) -> Result<RunOutput, EngineError> {
    cfg.validate()?;
    let scenario = Scenario::from_config(cfg)?;
    scenario.check_covers(data, &cfg.years)?;
    let params = ModelParams::from_config(cfg);
    let simulated = cfg.years.simulated();
    let cell_results = simulate_years(data, &scenario, &params, &simulated, cfg.workers)?;
    let per_year: Vec<(i32, Vec<GroupYear>)> = simulated
        .iter()
        .map(|&year| {
            let rows = cell_results.iter().filter(|r| r.year == year);
            aggregate(rows, &data.region_map).map(|t| (year, t))
        })
        .collect::<Result<_, _>>()?;
    let tables = build_tables(per_year, &cfg.years, &params.windows);
    Ok(RunOutput {
        cell_results,
        tables,
    })
}
