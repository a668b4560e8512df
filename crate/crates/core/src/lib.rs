//! Gridded residential cooling demand and photovoltaic matching.
//!
//! The pipeline for one grid cell and one simulated year is:
//!
//! 1. shift the cell's hourly climatology by the year's warming offset
//!    ([`geogrid::apply_warming`]);
//! 2. compute annual cooling electricity from degree days, income and
//!    household counts, then spread it over the year with cooling degree
//!    hours and an hourly Carnot COP ([`demand`]);
//! 3. build a normalized PV yield series from the same weather
//!    ([`pvyield`]);
//! 4. size PV so annual production equals annual cooling load, then measure
//!    hourly matching, coarser flexibility windows and an ice-storage
//!    dispatch ([`coupling`]).
//!
//! [`engine`] runs that pipeline over every cell and year of a scenario and
//! aggregates the results by region; [`scenario`] supplies socioeconomic
//! trajectories, efficiency and warming schedules and the region map.

// Range checks are written `!(x >= 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod demand;
pub mod engine;
pub mod geogrid;
pub mod numeric;
pub mod pvyield;
pub mod scenario;

pub use coupling::{MatchReport, SizingResult, StorageSpec};
pub use demand::{CopParams, DemandParams, DemandSeries, SocioState};
pub use engine::{CellYearResult, RunConfig};
pub use geogrid::{GridCell, HourlyWeather, WarmedWeather, WeatherSeries, HOURS_PER_YEAR};
pub use pvyield::{PvConfig, SolarPosition, YieldSeries};
pub use scenario::{EfficiencySchedule, Region, RegionMap, WarmingSchedule};
