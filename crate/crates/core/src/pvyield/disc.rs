//! DISC direct-normal irradiance from global horizontal irradiance.
//!
//! Quasi-physical correlation: the clearness index and a pressure-corrected
//! Kasten air mass select a piecewise polynomial for the direct-beam
//! transmittance.

use super::SolarPosition;

pub const REFERENCE_PRESSURE_PA: f64 = 101_325.0;
/// Above this zenith the beam is set to zero.
pub const MAX_ZENITH_DEG: f64 = 87.0;
const MIN_COS_ZENITH: f64 = 0.065;
const MAX_AIRMASS: f64 = 12.0;
/// Solar constant the DISC correlation was fitted with, W/m².
pub const DISC_SOLAR_CONSTANT: f64 = 1370.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscOutput {
    /// Direct normal irradiance, W/m².
    pub dni: f64,
    pub clearness_index: f64,
    /// Pressure-corrected air mass.
    pub airmass: f64,
}

/// Kasten (1966) relative air mass.
pub fn relative_airmass(zenith_deg: f64) -> f64 {
    1.0 / (zenith_deg.to_radians().cos() + 0.15 * (93.885 - zenith_deg).powf(-1.253))
}

/// Extraterrestrial normal irradiance rescaled to [`DISC_SOLAR_CONSTANT`].
fn disc_extraterrestrial(pos: &SolarPosition) -> f64 {
    pos.extraterrestrial_normal * DISC_SOLAR_CONSTANT / super::SOLAR_CONSTANT
}

pub fn clearness_index(ghi: f64, pos: &SolarPosition) -> f64 {
    let cos_z = pos.cos_zenith().max(MIN_COS_ZENITH);
    (ghi / (disc_extraterrestrial(pos) * cos_z)).clamp(0.0, 1.0)
}

pub fn disc(ghi: f64, pos: &SolarPosition, pressure: f64) -> DiscOutput {
    let kt = clearness_index(ghi, pos);
    if !(ghi > 0.0) || pos.zenith >= MAX_ZENITH_DEG {
        return DiscOutput {
            dni: 0.0,
            clearness_index: kt,
            airmass: f64::NAN,
        };
    }
    let am = (relative_airmass(pos.zenith) * pressure / REFERENCE_PRESSURE_PA).min(MAX_AIRMASS);

    let (kt2, kt3) = (kt * kt, kt * kt * kt);
    let (a, b, c) = if kt <= 0.6 {
        (
            0.512 - 1.56 * kt + 2.286 * kt2 - 2.222 * kt3,
            0.37 + 0.962 * kt,
            -0.28 + 0.932 * kt - 2.048 * kt2,
        )
    } else {
        (
            -5.743 + 21.77 * kt - 27.49 * kt2 + 11.56 * kt3,
            41.4 - 118.5 * kt + 66.05 * kt2 + 31.9 * kt3,
            -47.01 + 184.2 * kt - 222.0 * kt2 + 73.81 * kt3,
        )
    };
    let delta_kn = a + b * (c * am).exp();
    let knc =
        0.866 - 0.122 * am + 0.0121 * am.powi(2) - 0.000653 * am.powi(3) + 1.4e-5 * am.powi(4);
    let kn = knc - delta_kn;

    let etr = disc_extraterrestrial(pos);
    let beam_cap = ghi / pos.cos_zenith();
    let dni = (kn * etr).clamp(0.0, etr).min(beam_cap);
    DiscOutput {
        dni,
        clearness_index: kt,
        airmass: am,
    }
}

/// Direct normal irradiance, W/m²; zero at night and near the horizon.
pub fn disc_dni(ghi: f64, pos: &SolarPosition, pressure: f64) -> f64 {
    disc(ghi, pos, pressure).dni
}
