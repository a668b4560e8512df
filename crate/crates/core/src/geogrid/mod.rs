//! Grid cells, hourly weather climatologies and their ingestion.
//!
//! Every weather series covers one non-leap year of 8760 hours in the
//! cell's local solar time: hour 0 is Jan 1 00:00-01:00 and the sun
//! crosses the meridian at hour-of-day 12.

mod io;
mod synth;

use std::path::PathBuf;

use thiserror::Error;

use crate::numeric::CompensatedSum;

pub use io::{
    load_cells, load_manifest, load_weather_block, parse_cells, write_cells, write_weather_block,
    WeatherSource, CELLS_HEADER, WEATHER_HEADER,
};
pub use synth::{synth_weather, SynthProfile};

pub const HOURS_PER_YEAR: usize = 8760;
pub const DAYS_PER_YEAR: usize = 365;

/// Sanity band for temperatures in kelvin; catches files written in Celsius.
pub const TEMPERATURE_BAND_K: (f64, f64) = (150.0, 350.0);

/// Largest cooling offset accepted by [`apply_warming`].
pub const MIN_WARMING_K: f64 = -5.0;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("duplicate cell_id {0}")]
    DuplicateCell(u64),
    #[error("cell {cell_id}: {field} {value} out of range [{min}, {max}]")]
    OutOfRange {
        cell_id: u64,
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("cell {cell_id}: invalid country code {code:?}")]
    InvalidCountry { cell_id: u64, code: String },
    #[error("{series} has {len} values, expected a multiple of {HOURS_PER_YEAR}")]
    Length { series: &'static str, len: usize },
    #[error("{series} hour {hour}: value {value} violates {rule}")]
    InvalidValue {
        series: &'static str,
        hour: usize,
        value: f64,
        rule: &'static str,
    },
    #[error("unknown synthetic weather profile {0:?} (expected equatorial, subtropical, temperate or constant)")]
    UnknownProfile(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// One geographic census/climate cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub cell_id: u64,
    /// Degrees north, in [-90, 90].
    pub latitude: f64,
    /// Degrees east, in [-180, 180).
    pub longitude: f64,
    /// ISO-3166 alpha-3 code.
    pub country: String,
    /// Persons; real-valued because rasters are aggregated onto cells.
    pub population: f64,
}

impl GridCell {
    pub fn new(
        cell_id: u64,
        latitude: f64,
        longitude: f64,
        country: impl Into<String>,
        population: f64,
    ) -> Result<Self, GeoError> {
        let cell = Self {
            cell_id,
            latitude,
            longitude,
            country: country.into(),
            population,
        };
        cell.validate()?;
        Ok(cell)
    }

    pub fn validate(&self) -> Result<(), GeoError> {
        let range = |field, value: f64, min, max, upper_open: bool| {
            let above = if upper_open {
                value >= max
            } else {
                value > max
            };
            if !value.is_finite() || value < min || above {
                Err(GeoError::OutOfRange {
                    cell_id: self.cell_id,
                    field,
                    value,
                    min,
                    max,
                })
            } else {
                Ok(())
            }
        };
        range("latitude", self.latitude, -90.0, 90.0, false)?;
        range("longitude", self.longitude, -180.0, 180.0, true)?;
        range("population", self.population, 0.0, f64::INFINITY, false)?;
        let code_ok =
            self.country.len() == 3 && self.country.bytes().all(|b| b.is_ascii_uppercase());
        if !code_ok {
            return Err(GeoError::InvalidCountry {
                cell_id: self.cell_id,
                code: self.country.clone(),
            });
        }
        Ok(())
    }
}

/// Read access to the four hourly weather series.
pub trait WeatherSeries {
    /// Kelvin.
    fn temperature(&self) -> &[f64];
    /// Global horizontal irradiance, W/m².
    fn ghi(&self) -> &[f64];
    /// m/s.
    fn wind_speed(&self) -> &[f64];
    /// Pa.
    fn pressure(&self) -> &[f64];
}

/// An 8760-hour weather climatology for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyWeather {
    temperature: Vec<f64>,
    ghi: Vec<f64>,
    wind_speed: Vec<f64>,
    pressure: Vec<f64>,
}

impl HourlyWeather {
    pub fn new(
        temperature: Vec<f64>,
        ghi: Vec<f64>,
        wind_speed: Vec<f64>,
        pressure: Vec<f64>,
    ) -> Result<Self, GeoError> {
        let (t_min, t_max) = TEMPERATURE_BAND_K;
        check_series("temperature", &temperature, "[150, 350] K", |v| {
            (t_min..=t_max).contains(&v)
        })?;
        check_series("ghi", &ghi, ">= 0", |v| v >= 0.0)?;
        check_series("wind_speed", &wind_speed, ">= 0", |v| v >= 0.0)?;
        check_series("pressure", &pressure, "> 0", |v| v > 0.0)?;
        Ok(Self {
            temperature,
            ghi,
            wind_speed,
            pressure,
        })
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.temperature, self.ghi, self.wind_speed, self.pressure)
    }
}

fn check_series(
    series: &'static str,
    values: &[f64],
    rule: &'static str,
    ok: impl Fn(f64) -> bool,
) -> Result<(), GeoError> {
    if values.len() != HOURS_PER_YEAR {
        return Err(GeoError::Length {
            series,
            len: values.len(),
        });
    }
    match values.iter().position(|&v| !(v.is_finite() && ok(v))) {
        Some(hour) => Err(GeoError::InvalidValue {
            series,
            hour,
            value: values[hour],
            rule,
        }),
        None => Ok(()),
    }
}

impl WeatherSeries for HourlyWeather {
    fn temperature(&self) -> &[f64] {
        &self.temperature
    }
    fn ghi(&self) -> &[f64] {
        &self.ghi
    }
    fn wind_speed(&self) -> &[f64] {
        &self.wind_speed
    }
    fn pressure(&self) -> &[f64] {
        &self.pressure
    }
}

/// A climatology with a uniform temperature offset applied.
#[derive(Debug, Clone)]
pub struct WarmedWeather<'a> {
    base: &'a HourlyWeather,
    delta_t: f64,
    temperature: Vec<f64>,
}

impl<'a> WarmedWeather<'a> {
    pub fn base(&self) -> &'a HourlyWeather {
        self.base
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }
}

impl WeatherSeries for WarmedWeather<'_> {
    fn temperature(&self) -> &[f64] {
        &self.temperature
    }
    fn ghi(&self) -> &[f64] {
        &self.base.ghi
    }
    fn wind_speed(&self) -> &[f64] {
        &self.base.wind_speed
    }
    fn pressure(&self) -> &[f64] {
        &self.base.pressure
    }
}

/// Shift every hourly temperature by `delta_t` kelvin.
///
/// # Panics
///
/// If `delta_t` is not finite or is below [`MIN_WARMING_K`]; warming tables
/// are validated when loaded, so this only fires on programmer error.
pub fn apply_warming(weather: &HourlyWeather, delta_t: f64) -> WarmedWeather<'_> {
    assert!(
        delta_t.is_finite() && delta_t >= MIN_WARMING_K,
        "warming offset {delta_t} K outside the accepted range"
    );
    WarmedWeather {
        base: weather,
        delta_t,
        temperature: weather.temperature.iter().map(|t| t + delta_t).collect(),
    }
}

/// Per-hour mean over `N` stacked years of 8760 hours each.
pub fn hourly_mean(series: &'static str, values: &[f64]) -> Result<Vec<f64>, GeoError> {
    if values.is_empty() || !values.len().is_multiple_of(HOURS_PER_YEAR) {
        return Err(GeoError::Length {
            series,
            len: values.len(),
        });
    }
    let years = values.len() / HOURS_PER_YEAR;
    Ok((0..HOURS_PER_YEAR)
        .map(|h| {
            let mut acc = CompensatedSum::new();
            acc.extend(values[h..].iter().step_by(HOURS_PER_YEAR).copied());
            acc.value() / years as f64
        })
        .collect())
}

/// Average each hour of the year across several whole years of data.
///
/// Inputs hold `N * 8760` values each, leap days already removed (see
/// [`strip_leap_day`]).
pub fn build_climatology(
    temperature: &[f64],
    ghi: &[f64],
    wind_speed: &[f64],
    pressure: &[f64],
) -> Result<HourlyWeather, GeoError> {
    HourlyWeather::new(
        hourly_mean("temperature", temperature)?,
        hourly_mean("ghi", ghi)?,
        hourly_mean("wind_speed", wind_speed)?,
        hourly_mean("pressure", pressure)?,
    )
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

/// Drop the 24 hours of Feb 29 from one calendar year of hourly values.
///
/// Non-leap years pass through unchanged.
pub fn strip_leap_day(year: i32, values: &[f64]) -> Vec<f64> {
    const FEB29_START: usize = (31 + 28) * 24;
    if is_leap_year(year) && values.len() == HOURS_PER_YEAR + 24 {
        values[..FEB29_START]
            .iter()
            .chain(&values[FEB29_START + 24..])
            .copied()
            .collect()
    } else {
        values.to_vec()
    }
}
