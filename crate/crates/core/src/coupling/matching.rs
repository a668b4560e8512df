use super::CouplingError;
use crate::geogrid::HOURS_PER_YEAR;
use crate::numeric::{self, CompensatedSum};

/// Window lengths (hours) reported when none are configured.
pub const DEFAULT_WINDOWS: [usize; 11] = [1, 2, 3, 6, 12, 24, 48, 168, 720, 2190, 8760];

/// `Σ min(demand, pv)`: energy served directly by simultaneous PV.
pub fn matched_energy(demand: &[f64], pv: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(demand.iter().zip(pv).map(|(d, p)| d.min(*p)));
    acc.value()
}

/// Share of demand met hour by hour; 1 when there is no demand.
pub fn direct_match(demand: &[f64], pv: &[f64]) -> Result<f64, CouplingError> {
    if demand.len() != pv.len() {
        return Err(CouplingError::LengthMismatch(demand.len(), pv.len()));
    }
    let total = numeric::sum(demand);
    if total == 0.0 {
        return Ok(1.0);
    }
    Ok(matched_energy(demand, pv) / total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlexPoint {
    pub window_hours: usize,
    /// Demand energy met when PV may be shifted freely inside each window.
    pub matched_kwh: f64,
    pub fraction: f64,
}

/// Match fraction when the year is cut into consecutive `n`-hour blocks and
/// surplus PV may serve any demand inside its block. A trailing partial
/// block is kept.
pub fn flexibility_curve(
    demand: &[f64],
    pv: &[f64],
    windows: &[usize],
) -> Result<Vec<FlexPoint>, CouplingError> {
    if demand.len() != pv.len() {
        return Err(CouplingError::LengthMismatch(demand.len(), pv.len()));
    }
    let total = numeric::sum(demand);
    windows
        .iter()
        .map(|&n| {
            if n == 0 || n > HOURS_PER_YEAR {
                return Err(CouplingError::Window(n));
            }
            let mut acc = CompensatedSum::new();
            for (d, p) in demand.chunks(n).zip(pv.chunks(n)) {
                acc.add(numeric::sum(d).min(numeric::sum(p)));
            }
            let matched = acc.value();
            Ok(FlexPoint {
                window_hours: n,
                matched_kwh: matched,
                fraction: if total == 0.0 { 1.0 } else { matched / total },
            })
        })
        .collect()
}
