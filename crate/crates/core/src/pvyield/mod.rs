//! Normalized PV energy yield per rated watt.
//!
//! Per hour: sun position, DISC beam/diffuse split, isotropic-sky
//! transposition onto a fixed plane, a wind-dependent cell temperature and a
//! linear power temperature coefficient, followed by a flat system derate.

mod disc;
mod solar;

use thiserror::Error;

use crate::geogrid::{WeatherSeries, HOURS_PER_YEAR};

pub use disc::{
    clearness_index, disc, disc_dni, relative_airmass, DiscOutput, DISC_SOLAR_CONSTANT,
    MAX_ZENITH_DEG,
};
pub use solar::{
    declination, extraterrestrial_normal, solar_position, SolarPosition, SOLAR_CONSTANT,
};

/// Reference cell temperature for the power temperature coefficient, kelvin.
pub const T_REF_K: f64 = 298.15;
/// Irradiance at which a module produces its rated power, W/m².
pub const STC_IRRADIANCE: f64 = 1000.0;
/// Hourly yield ceiling as a multiple of the derated 1-sun output.
pub const YIELD_HEADROOM: f64 = 1.25;

#[derive(Debug, Error, PartialEq)]
#[error("invalid PV parameter {name} = {value}: {rule}")]
pub struct PvConfigError {
    pub name: &'static str,
    pub value: f64,
    pub rule: &'static str,
}

/// Fixed-array configuration of one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvConfig {
    /// Degrees from horizontal.
    pub tilt: f64,
    /// Surface azimuth, degrees clockwise from north.
    pub azimuth: f64,
    /// Flat loss factor applied to every hour.
    pub derate: f64,
    /// Power temperature coefficient, 1/K.
    pub gamma_p: f64,
    pub albedo: f64,
    pub cell_temp_a: f64,
    /// s/m.
    pub cell_temp_b: f64,
}

impl PvConfig {
    /// Tilt equal to |latitude|, facing the equator.
    pub fn for_latitude(latitude: f64) -> Self {
        Self {
            tilt: latitude.abs().min(90.0),
            azimuth: if latitude >= 0.0 { 180.0 } else { 0.0 },
            derate: 0.90,
            gamma_p: -0.0045,
            albedo: 0.2,
            cell_temp_a: -3.56,
            cell_temp_b: -0.075,
        }
    }

    pub fn validate(&self) -> Result<(), PvConfigError> {
        let check = |name, value: f64, ok: bool, rule| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(PvConfigError { name, value, rule })
            }
        };
        check(
            "tilt",
            self.tilt,
            (0.0..=90.0).contains(&self.tilt),
            "must lie in [0, 90]",
        )?;
        check(
            "azimuth",
            self.azimuth,
            (0.0..360.0).contains(&self.azimuth),
            "must lie in [0, 360)",
        )?;
        check(
            "derate",
            self.derate,
            self.derate > 0.0 && self.derate <= 1.0,
            "must lie in (0, 1]",
        )?;
        check(
            "albedo",
            self.albedo,
            (0.0..=1.0).contains(&self.albedo),
            "must lie in [0, 1]",
        )?;
        check("gamma_p", self.gamma_p, true, "must be finite")?;
        check("cell_temp_a", self.cell_temp_a, true, "must be finite")?;
        check("cell_temp_b", self.cell_temp_b, true, "must be finite")?;
        Ok(())
    }
}

/// Hourly energy per rated watt, kWh/W.
#[derive(Debug, Clone, PartialEq)]
pub struct YieldSeries {
    pub yield_norm: Vec<f64>,
}

impl YieldSeries {
    pub fn annual(&self) -> f64 {
        crate::numeric::sum(&self.yield_norm)
    }
}

/// Cosine of the angle of incidence on a tilted plane.
pub fn cos_aoi(pos: &SolarPosition, tilt: f64, surface_azimuth: f64) -> f64 {
    let (z, t) = (pos.zenith.to_radians(), tilt.to_radians());
    z.cos() * t.cos() + z.sin() * t.sin() * (pos.azimuth - surface_azimuth).to_radians().cos()
}

/// Plane-of-array irradiance, W/m²: beam + isotropic sky diffuse + ground
/// reflection.
pub fn poa_irradiance(ghi: f64, dni: f64, pos: &SolarPosition, cfg: &PvConfig) -> f64 {
    let cos_z = pos.cos_zenith().max(0.0);
    // The horizontal beam component can never exceed the measured global.
    let beam_h = (dni * cos_z).min(ghi).max(0.0);
    let dhi = ghi - beam_h;
    if cfg.tilt == 0.0 {
        // beam_h + dhi, without the rounding of the sum
        return ghi;
    }
    let dni = if cos_z > 0.0 { beam_h / cos_z } else { 0.0 };
    let cos_tilt = cfg.tilt.to_radians().cos();
    let beam = dni * cos_aoi(pos, cfg.tilt, cfg.azimuth).max(0.0);
    let sky = dhi * (1.0 + cos_tilt) / 2.0;
    let ground = ghi * cfg.albedo * (1.0 - cos_tilt) / 2.0;
    beam + sky + ground
}

/// Module cell temperature, kelvin: `T_amb + POA * exp(a + b * wind)`.
pub fn cell_temperature(poa: f64, t_amb: f64, wind: f64, cfg: &PvConfig) -> f64 {
    t_amb + poa.max(0.0) * (cfg.cell_temp_a + cfg.cell_temp_b * wind).exp()
}

/// Energy per rated watt in one hour, kWh/W, before the ceiling.
pub fn hourly_energy_per_watt(poa: f64, t_cell: f64, cfg: &PvConfig) -> f64 {
    let power = (poa / STC_IRRADIANCE) * (1.0 + cfg.gamma_p * (t_cell - T_REF_K)) * cfg.derate;
    power.max(0.0) * 1e-3
}

/// Normalized yield series for one site.
pub fn hourly_yield<W: WeatherSeries + ?Sized>(
    weather: &W,
    latitude: f64,
    longitude: f64,
    cfg: &PvConfig,
) -> YieldSeries {
    let ceiling = cfg.derate * YIELD_HEADROOM * 1e-3;
    let (temp, ghi, wind, pressure) = (
        weather.temperature(),
        weather.ghi(),
        weather.wind_speed(),
        weather.pressure(),
    );
    let yield_norm = (0..HOURS_PER_YEAR)
        .map(|h| {
            let pos = solar_position(latitude, longitude, h);
            if !pos.is_up() {
                return 0.0;
            }
            let dni = disc_dni(ghi[h], &pos, pressure[h]);
            let poa = poa_irradiance(ghi[h], dni, &pos, cfg);
            let t_cell = cell_temperature(poa, temp[h], wind[h], cfg);
            hourly_energy_per_watt(poa, t_cell, cfg).min(ceiling)
        })
        .collect();
    YieldSeries { yield_norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geogrid::{apply_warming, synth_weather, SynthProfile};

    fn sun(zenith: f64, azimuth: f64) -> SolarPosition {
        SolarPosition {
            zenith,
            azimuth,
            extraterrestrial_normal: 1367.0,
        }
    }

    #[test]
    fn defaults_follow_hemisphere() {
        let north = PvConfig::for_latitude(33.4);
        assert_eq!((north.tilt, north.azimuth), (33.4, 180.0));
        let south = PvConfig::for_latitude(-25.0);
        assert_eq!((south.tilt, south.azimuth), (25.0, 0.0));
        assert!(north.validate().is_ok());
        assert!(PvConfig {
            azimuth: 360.0,
            ..north
        }
        .validate()
        .is_err());
        assert!(PvConfig {
            derate: 0.0,
            ..north
        }
        .validate()
        .is_err());
    }

    #[test]
    fn horizontal_plane_sees_ghi() {
        let cfg = PvConfig {
            tilt: 0.0,
            ..PvConfig::for_latitude(0.0)
        };
        for (ghi, dni, z) in [
            (600.0, 500.0, 40.0),
            (123.4, 0.0, 70.0),
            (900.0, 850.0, 10.0),
        ] {
            assert_eq!(poa_irradiance(ghi, dni, &sun(z, 120.0), &cfg), ghi);
        }
    }

    #[test]
    fn vertical_plane_diffuse_only() {
        let cfg = PvConfig {
            tilt: 90.0,
            albedo: 0.0,
            ..PvConfig::for_latitude(0.0)
        };
        let poa = poa_irradiance(300.0, 0.0, &sun(50.0, 180.0), &cfg);
        assert!((poa - 150.0).abs() < 1e-9);
    }

    #[test]
    fn co_azimuthal_hand_calculation() {
        // ghi 600, dni 500, zenith 40, tilt 30, sun and panel both due south.
        let cfg = PvConfig {
            tilt: 30.0,
            ..PvConfig::for_latitude(30.0)
        };
        let poa = poa_irradiance(600.0, 500.0, &sun(40.0, 180.0), &cfg);
        let beam = 500.0 * 10f64.to_radians().cos();
        let dhi = 600.0 - 500.0 * 40f64.to_radians().cos();
        let sky = dhi * (1.0 + 30f64.to_radians().cos()) / 2.0;
        let ground = 600.0 * 0.2 * (1.0 - 30f64.to_radians().cos()) / 2.0;
        assert!((poa - (beam + sky + ground)).abs() < 1e-9);
        assert!((poa - 702.885).abs() < 1e-3, "{poa}");
    }

    #[test]
    fn cell_temperature_model() {
        let cfg = PvConfig::for_latitude(0.0);
        assert_eq!(cell_temperature(0.0, 300.0, 3.0, &cfg), 300.0);
        let rise = cell_temperature(1000.0, 300.0, 0.0, &cfg) - 300.0;
        assert!((rise - 1000.0 * (-3.56f64).exp()).abs() < 1e-9);
        assert!((rise - 28.4).abs() < 0.05);
        let calm = cell_temperature(1000.0, 300.0, 0.76, &cfg) - 300.0;
        let windy = cell_temperature(1000.0, 300.0, 10.0, &cfg) - 300.0;
        assert!((windy / calm - 0.5).abs() < 1e-3, "{}", windy / calm);
    }

    #[test]
    fn energy_at_reference_and_hot() {
        let cfg = PvConfig::for_latitude(0.0);
        assert!((hourly_energy_per_watt(1000.0, T_REF_K, &cfg) - 0.90e-3).abs() < 1e-18);
        let hot = hourly_energy_per_watt(1000.0, 333.15, &cfg);
        assert!((hot - 0.90 * (1.0 - 0.0045 * 35.0) * 1e-3).abs() < 1e-15);
        assert!((hot - 7.58e-4).abs() < 1e-6);
    }

    #[test]
    fn night_is_zero_and_bounded() {
        for profile in SynthProfile::ALL {
            let w = synth_weather(1, profile);
            let lat = profile.latitude();
            let cfg = PvConfig::for_latitude(lat);
            let y = hourly_yield(&w, lat, 0.0, &cfg);
            for (h, &v) in y.yield_norm.iter().enumerate() {
                assert!(v >= 0.0 && v <= cfg.derate * 1.25e-3);
                if solar_position(lat, 0.0, h).zenith >= 90.0 {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn warming_lowers_clear_sky_yield() {
        let w = synth_weather(0, SynthProfile::Constant);
        let cfg = PvConfig::for_latitude(0.0);
        let base = hourly_yield(&w, 0.0, 0.0, &cfg).annual();
        let warm = hourly_yield(&apply_warming(&w, 5.0), 0.0, 0.0, &cfg).annual();
        assert!(base > 0.0);
        assert!(warm < base);
    }
}
