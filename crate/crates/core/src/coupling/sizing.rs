use super::CouplingError;
use crate::numeric;

/// PV capacity whose annual production equals the annual cooling load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizingResult {
    /// Rated W.
    pub capacity_w: f64,
    pub annual_load_kwh: f64,
    /// kWh per rated W.
    pub annual_yield_per_w: f64,
}

pub fn size_pv(hourly_demand: &[f64], yield_norm: &[f64]) -> Result<SizingResult, CouplingError> {
    if hourly_demand.len() != yield_norm.len() {
        return Err(CouplingError::LengthMismatch(
            hourly_demand.len(),
            yield_norm.len(),
        ));
    }
    let load = numeric::sum(hourly_demand);
    let per_w = numeric::sum(yield_norm);
    let capacity_w = if load == 0.0 {
        0.0
    } else if per_w > 0.0 {
        load / per_w
    } else {
        return Err(CouplingError::ZeroYield { demand_kwh: load });
    };
    Ok(SizingResult {
        capacity_w,
        annual_load_kwh: load,
        annual_yield_per_w: per_w,
    })
}

/// Hourly PV production in kWh for a given capacity.
pub fn pv_series(capacity_w: f64, yield_norm: &[f64]) -> Vec<f64> {
    yield_norm.iter().map(|y| capacity_w * y).collect()
}
