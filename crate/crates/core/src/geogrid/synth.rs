//! Deterministic synthetic climatologies for tests, benchmarks and demos.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GeoError, HourlyWeather, DAYS_PER_YEAR, HOURS_PER_YEAR};
use crate::pvyield::solar_position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthProfile {
    Equatorial,
    Subtropical,
    Temperate,
    Constant,
}

impl SynthProfile {
    pub const ALL: [SynthProfile; 4] = [
        SynthProfile::Equatorial,
        SynthProfile::Subtropical,
        SynthProfile::Temperate,
        SynthProfile::Constant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SynthProfile::Equatorial => "equatorial",
            SynthProfile::Subtropical => "subtropical",
            SynthProfile::Temperate => "temperate",
            SynthProfile::Constant => "constant",
        }
    }

    /// Nominal latitude the preset's sun path is computed for.
    pub fn latitude(self) -> f64 {
        self.preset().latitude
    }

    fn preset(self) -> Preset {
        match self {
            SynthProfile::Equatorial => Preset {
                latitude: 2.0,
                t_mean: 300.5,
                t_seasonal: 0.6,
                t_diurnal: 3.5,
                anomaly_sd: 0.5,
                cloud: (0.75, 1.0),
                wind: 2.5,
                pressure: 100_800.0,
            },
            SynthProfile::Subtropical => Preset {
                latitude: 25.0,
                t_mean: 296.0,
                t_seasonal: 7.0,
                t_diurnal: 6.0,
                anomaly_sd: 1.2,
                cloud: (0.65, 1.0),
                wind: 3.0,
                pressure: 101_200.0,
            },
            SynthProfile::Temperate => Preset {
                latitude: 45.0,
                t_mean: 284.0,
                t_seasonal: 12.0,
                t_diurnal: 5.0,
                anomaly_sd: 2.0,
                cloud: (0.45, 1.0),
                wind: 4.0,
                pressure: 101_325.0,
            },
            SynthProfile::Constant => Preset {
                latitude: 0.0,
                t_mean: 300.0,
                t_seasonal: 0.0,
                t_diurnal: 0.0,
                anomaly_sd: 0.0,
                cloud: (1.0, 1.0),
                wind: 2.0,
                pressure: 101_325.0,
            },
        }
    }
}

impl fmt::Display for SynthProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthProfile {
    type Err = GeoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SynthProfile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GeoError::UnknownProfile(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Preset {
    latitude: f64,
    t_mean: f64,
    t_seasonal: f64,
    t_diurnal: f64,
    /// Standard deviation of the day-to-day AR(1) temperature anomaly.
    anomaly_sd: f64,
    /// Range of the daily clear-sky transmission factor.
    cloud: (f64, f64),
    wind: f64,
    pressure: f64,
}

/// Day of year (0-based) of the seasonal temperature peak, northern hemisphere.
const SEASONAL_PEAK_DAY: f64 = 200.0;
/// Hour of day of the diurnal temperature peak.
const DIURNAL_PEAK_HOUR: f64 = 15.0;
const ANOMALY_PERSISTENCE: f64 = 0.7;

/// Haurwitz clear-sky global horizontal irradiance, W/m².
fn clear_sky_ghi(cos_zenith: f64) -> f64 {
    if cos_zenith <= 0.0 {
        0.0
    } else {
        1098.0 * cos_zenith * (-0.057 / cos_zenith).exp()
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Generate one synthetic year for `profile`; identical for identical seeds.
pub fn synth_weather(seed: u64, profile: SynthProfile) -> HourlyWeather {
    let p = profile.preset();
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (profile as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));

    let mut temperature = Vec::with_capacity(HOURS_PER_YEAR);
    let mut ghi = Vec::with_capacity(HOURS_PER_YEAR);
    let mut wind_speed = Vec::with_capacity(HOURS_PER_YEAR);
    let mut pressure = Vec::with_capacity(HOURS_PER_YEAR);

    let innovation_sd = p.anomaly_sd * (1.0 - ANOMALY_PERSISTENCE * ANOMALY_PERSISTENCE).sqrt();
    let mut anomaly = if p.anomaly_sd > 0.0 {
        p.anomaly_sd * standard_normal(&mut rng)
    } else {
        0.0
    };
    let hemisphere = if p.latitude < 0.0 { -1.0 } else { 1.0 };

    for day in 0..DAYS_PER_YEAR {
        let cloud = if p.cloud.0 < p.cloud.1 {
            rng.random_range(p.cloud.0..p.cloud.1)
        } else {
            p.cloud.0
        };
        let seasonal = hemisphere
            * p.t_seasonal
            * (2.0 * PI * (day as f64 - SEASONAL_PEAK_DAY) / DAYS_PER_YEAR as f64).cos();
        // Clear days swing more than overcast ones.
        let diurnal = p.t_diurnal * (0.5 + 0.5 * cloud / p.cloud.1.max(1e-9));
        let gust = if profile == SynthProfile::Constant {
            0.0
        } else {
            rng.random_range(-0.5..0.5)
        };
        for hod in 0..24 {
            let hour = day * 24 + hod;
            let t = p.t_mean
                + seasonal
                + anomaly
                + diurnal * (2.0 * PI * (hod as f64 - DIURNAL_PEAK_HOUR) / 24.0).cos();
            temperature.push(t);

            // The constant preset repeats the equinox day at its latitude.
            let sun_hour = if profile == SynthProfile::Constant {
                79 * 24 + hod
            } else {
                hour
            };
            let cos_z = solar_position(p.latitude, 0.0, sun_hour)
                .zenith
                .to_radians()
                .cos();
            ghi.push(cloud * clear_sky_ghi(cos_z));

            let daytime_boost = if cos_z > 0.0 { 1.0 + 0.3 * cos_z } else { 1.0 };
            wind_speed.push((p.wind + gust) * daytime_boost);
            pressure.push(p.pressure);
        }
        if p.anomaly_sd > 0.0 {
            anomaly = ANOMALY_PERSISTENCE * anomaly + innovation_sd * standard_normal(&mut rng);
        }
    }

    HourlyWeather::new(temperature, ghi, wind_speed, pressure)
        .expect("synthetic presets stay inside the weather sanity bands")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geogrid::WeatherSeries;

    const MONTH_DAYS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

    fn monthly_means(t: &[f64]) -> Vec<f64> {
        let mut start = 0;
        MONTH_DAYS
            .iter()
            .map(|d| {
                let n = d * 24;
                let m = t[start..start + n].iter().sum::<f64>() / n as f64;
                start += n;
                m
            })
            .collect()
    }

    fn seasonal_range(t: &[f64]) -> f64 {
        let m = monthly_means(t);
        m.iter().cloned().fold(f64::MIN, f64::max) - m.iter().cloned().fold(f64::MAX, f64::min)
    }

    #[test]
    fn deterministic() {
        for profile in SynthProfile::ALL {
            assert_eq!(synth_weather(11, profile), synth_weather(11, profile));
        }
        assert_ne!(
            synth_weather(1, SynthProfile::Temperate),
            synth_weather(2, SynthProfile::Temperate)
        );
    }

    #[test]
    fn constant_profile() {
        let w = synth_weather(5, SynthProfile::Constant);
        assert!(w.temperature().iter().all(|&t| t == w.temperature()[0]));
        let first_day = &w.ghi()[..24];
        for day in w.ghi().chunks(24) {
            assert_eq!(day, first_day);
        }
        assert!(first_day[12] > 900.0);
        assert_eq!(first_day[0], 0.0);
    }

    #[test]
    fn equatorial_has_flat_seasons() {
        for seed in 0..10 {
            let w = synth_weather(seed, SynthProfile::Equatorial);
            assert!(seasonal_range(w.temperature()) < 3.0);
        }
    }

    #[test]
    fn temperate_has_strong_seasons() {
        let w = synth_weather(0, SynthProfile::Temperate);
        assert!(seasonal_range(w.temperature()) > 15.0);
    }

    #[test]
    fn ghi_follows_the_sun() {
        let w = synth_weather(9, SynthProfile::Subtropical);
        for (h, &g) in w.ghi().iter().enumerate() {
            let z = solar_position(25.0, 0.0, h).zenith;
            if z >= 90.0 {
                assert_eq!(g, 0.0, "hour {h}");
            }
        }
        let noon = w.ghi()[172 * 24 + 12];
        assert!(noon > 600.0, "{noon}");
    }

    #[test]
    fn profile_names_parse() {
        for p in SynthProfile::ALL {
            assert_eq!(p.name().parse::<SynthProfile>().unwrap(), p);
        }
        assert!("polar".parse::<SynthProfile>().is_err());
    }
}
