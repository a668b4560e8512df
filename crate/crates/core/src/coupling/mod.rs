//! PV sizing against cooling demand and hourly match metrics.

mod matching;
mod sizing;
mod storage;

use thiserror::Error;

pub use matching::{direct_match, flexibility_curve, matched_energy, FlexPoint, DEFAULT_WINDOWS};
pub use sizing::{pv_series, size_pv, SizingResult};
pub use storage::{
    cop_storage_hourly, simulate_storage, StorageLedger, StorageOutcome, StorageSpec, StorageState,
};

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("annual demand {demand_kwh} kWh but the site produces no PV energy")]
    ZeroYield { demand_kwh: f64 },
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("flexibility window {0} outside [1, {max}]", max = crate::geogrid::HOURS_PER_YEAR)]
    Window(usize),
    #[error("invalid storage parameter {name} = {value}: {rule}")]
    StorageParam {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
}

/// Hourly PV/cooling match summary for one cell-year.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub direct_fraction: f64,
    pub storage_fraction: f64,
    pub flex_curve: Vec<FlexPoint>,
    pub capacity_w: f64,
}
