//! Shared test helpers: a straight-line reimplementation of the cell-year
//! chain and synthetic cell builders.
//!
//! The reference below is written from the model equations with plain loops
//! and hard-coded default parameters. It shares no code with the library
//! beyond reading the weather arrays.

#![allow(dead_code, clippy::manual_clamp)]

use std::f64::consts::PI;

use coolgrid::engine::{ModelParams, YearState};
use coolgrid::geogrid::{synth_weather, SynthProfile, WeatherSeries};
use coolgrid::scenario::{eta_at, socio_at, warming_at, Anchor, CountryTrajectory, WarmingPreset};
use coolgrid::{EfficiencySchedule, GridCell, HourlyWeather};

pub const WINDOWS: [usize; 11] = [1, 2, 3, 6, 12, 24, 48, 168, 720, 2190, 8760];

/// Fields reported for one cell-year.
#[derive(Debug, Clone)]
pub struct Reference {
    pub population: f64,
    pub ac_households: f64,
    pub annual_load_kwh: f64,
    pub capacity_w: f64,
    pub direct_fraction: f64,
    pub storage_fraction: f64,
    pub direct_matched_kwh: f64,
    pub storage_matched_kwh: f64,
    pub flex_matched_kwh: Vec<f64>,
}

/// Exogenous inputs of the reference, mirroring what the engine derives.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceYear {
    pub gdp: f64,
    pub household_size: f64,
    pub pop_multiplier: f64,
    pub eta: f64,
    pub eta_ca: f64,
    pub delta_t: f64,
}

/// Two-anchor trajectory evaluated by hand: log-linear GDP, linear
/// household size and population multiplier; efficiency and warming ramps
/// from 2000 to 2100.
pub fn reference_year(traj: &TwoAnchor, year: i32, warming_2100: f64) -> ReferenceYear {
    let f = (year - traj.y0) as f64 / (traj.y1 - traj.y0) as f64;
    let g = (year - 2000) as f64 / 100.0;
    let cop = 2.4 + (4.39 - 2.4) * g;
    ReferenceYear {
        gdp: (traj.gdp0.ln() * (1.0 - f) + traj.gdp1.ln() * f).exp(),
        household_size: traj.hh0 + (traj.hh1 - traj.hh0) * f,
        pop_multiplier: traj.pop0 + (traj.pop1 - traj.pop0) * f,
        eta: 2.4 / cop,
        eta_ca: 0.16 + (0.29 - 0.16) * g,
        delta_t: warming_2100 * g,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TwoAnchor {
    pub y0: i32,
    pub y1: i32,
    pub gdp0: f64,
    pub gdp1: f64,
    pub hh0: f64,
    pub hh1: f64,
    pub pop0: f64,
    pub pop1: f64,
}

impl TwoAnchor {
    pub fn library(&self, country: &str) -> CountryTrajectory {
        CountryTrajectory::new(
            country,
            vec![
                Anchor {
                    year: self.y0,
                    gdp_per_cap: self.gdp0,
                    population_multiplier: self.pop0,
                    household_size: self.hh0,
                },
                Anchor {
                    year: self.y1,
                    gdp_per_cap: self.gdp1,
                    population_multiplier: self.pop1,
                    household_size: self.hh1,
                },
            ],
        )
        .unwrap()
    }
}

/// The engine's year state for the same inputs, built from library calls.
pub fn library_year(traj: &TwoAnchor, year: i32, warming: WarmingPreset) -> YearState {
    let eff = EfficiencySchedule::default();
    let s = socio_at(&traj.library("AAA"), year, &eff).unwrap();
    YearState {
        year,
        socio: s.socio,
        population_multiplier: s.population_multiplier,
        delta_t: warming_at(&warming.schedule(), year),
        eta_carnot: eta_at(&eff, year).eta_ca,
    }
}

struct Sun {
    up: f64,
    zenith_deg: f64,
    east: f64,
    north: f64,
    etr: f64,
}

fn sun(lat: f64, h: usize) -> Sun {
    let n = (h / 24 + 1) as f64;
    let hod = (h % 24) as f64;
    let g = 2.0 * PI * (n + (hod - 12.0) / 24.0) / 365.0;
    let dec = 0.006918 - 0.399912 * g.cos() + 0.070257 * g.sin() - 0.006758 * (2.0 * g).cos()
        + 0.000907 * (2.0 * g).sin()
        - 0.002697 * (3.0 * g).cos()
        + 0.00148 * (3.0 * g).sin();
    let etr = 1367.0
        * (1.000110
            + 0.034221 * g.cos()
            + 0.001280 * g.sin()
            + 0.000719 * (2.0 * g).cos()
            + 0.000077 * (2.0 * g).sin());
    let w = (15.0 * (hod - 12.0)).to_radians();
    let phi = lat.to_radians();
    let up = dec.sin() * phi.sin() + dec.cos() * w.cos() * phi.cos();
    let up = up.clamp(-1.0, 1.0);
    Sun {
        up,
        zenith_deg: up.acos().to_degrees(),
        east: -dec.cos() * w.sin(),
        north: dec.sin() * phi.cos() - dec.cos() * w.cos() * phi.sin(),
        etr,
    }
}

fn disc(ghi: f64, s: &Sun, pressure: f64) -> f64 {
    if ghi <= 0.0 || s.zenith_deg >= 87.0 {
        return 0.0;
    }
    let i0 = s.etr * 1370.0 / 1367.0;
    let mut kt = ghi / (i0 * s.up.max(0.065));
    if kt > 1.0 {
        kt = 1.0;
    }
    let mut am = 1.0 / (s.up + 0.15 * (93.885 - s.zenith_deg).powf(-1.253)) * pressure / 101325.0;
    if am > 12.0 {
        am = 12.0;
    }
    let (a, b, c);
    if kt <= 0.6 {
        a = 0.512 - 1.56 * kt + 2.286 * kt * kt - 2.222 * kt * kt * kt;
        b = 0.37 + 0.962 * kt;
        c = -0.28 + 0.932 * kt - 2.048 * kt * kt;
    } else {
        a = -5.743 + 21.77 * kt - 27.49 * kt * kt + 11.56 * kt * kt * kt;
        b = 41.4 - 118.5 * kt + 66.05 * kt * kt + 31.9 * kt * kt * kt;
        c = -47.01 + 184.2 * kt - 222.0 * kt * kt + 73.81 * kt * kt * kt;
    }
    let knc = 0.866 - 0.122 * am + 0.0121 * am * am - 0.000653 * am * am * am
        + 1.4e-5 * am * am * am * am;
    let mut dni = (knc - (a + b * (c * am).exp())) * i0;
    if dni < 0.0 {
        dni = 0.0;
    }
    if dni > i0 {
        dni = i0;
    }
    if dni > ghi / s.up {
        dni = ghi / s.up;
    }
    dni
}

/// Hourly kWh per rated W for an equator-facing plane tilted at |lat|.
pub fn reference_yield(
    lat: f64,
    temp: &[f64],
    ghi: &[f64],
    wind: &[f64],
    pressure: &[f64],
) -> Vec<f64> {
    let tilt = lat.abs().to_radians();
    let az = if lat >= 0.0 { PI } else { 0.0 };
    let normal = (tilt.sin() * az.sin(), tilt.sin() * az.cos(), tilt.cos());
    let mut out = vec![0.0; temp.len()];
    for h in 0..temp.len() {
        let s = sun(lat, h);
        if s.zenith_deg >= 90.0 {
            continue;
        }
        let dni = disc(ghi[h], &s, pressure[h]);
        let poa = if lat == 0.0 {
            ghi[h]
        } else {
            let mut beam_h = dni * s.up;
            if beam_h > ghi[h] {
                beam_h = ghi[h];
            }
            let dhi = ghi[h] - beam_h;
            let cos_aoi = s.east * normal.0 + s.north * normal.1 + s.up * normal.2;
            let beam = if cos_aoi > 0.0 {
                beam_h / s.up * cos_aoi
            } else {
                0.0
            };
            beam + dhi * (1.0 + tilt.cos()) / 2.0 + ghi[h] * 0.2 * (1.0 - tilt.cos()) / 2.0
        };
        let t_cell = temp[h] + poa * (-3.56 - 0.075 * wind[h]).exp();
        let mut e = poa / 1000.0 * (1.0 - 0.0045 * (t_cell - 298.15)) * 0.9 * 1e-3;
        if e < 0.0 {
            e = 0.0;
        }
        if e > 0.9 * 1.25e-3 {
            e = 0.9 * 1.25e-3;
        }
        out[h] = e;
    }
    out
}

/// The whole chain with default parameters and storage enabled.
pub fn reference_cell_year(
    lat: f64,
    population: f64,
    weather: &HourlyWeather,
    y: &ReferenceYear,
    windows: &[usize],
) -> Reference {
    let t_base = 291.15;
    let temp: Vec<f64> = weather
        .temperature()
        .iter()
        .map(|t| t + y.delta_t)
        .collect();

    let mut cdd = 0.0;
    for d in 0..365 {
        let mut s = 0.0;
        for h in 0..24 {
            s += temp[d * 24 + h];
        }
        let mean = s / 24.0;
        if mean > t_base {
            cdd += mean - t_base;
        }
    }
    let smax = 1.0 - 0.949 * (-0.00187 * cdd).exp();
    let avail = 1.0 / (1.0 + (-0.304e-3 * y.gdp + 4.152).exp());
    let eh = cdd * (0.865 * y.gdp.max(1.0).ln() - 5.825).max(0.0);
    let pop = population * y.pop_multiplier;
    let owners = pop / y.household_size * avail * smax;
    let annual = owners * eh * y.eta;

    let cold = t_base - 5.0;
    let mut cop = vec![0.0; 8760];
    let mut weights = vec![0.0; 8760];
    let mut wsum = 0.0;
    for h in 0..8760 {
        cop[h] = y.eta_ca * cold / (temp[h].max(t_base) + 5.0 - cold);
        weights[h] = (temp[h] - t_base).max(0.0) / cop[h];
        wsum += weights[h];
    }
    let demand: Vec<f64> = if annual == 0.0 {
        vec![0.0; 8760]
    } else {
        weights.iter().map(|w| annual * w / wsum).collect()
    };

    let yield_norm = reference_yield(
        lat,
        &temp,
        weather.ghi(),
        weather.wind_speed(),
        weather.pressure(),
    );
    let load: f64 = demand.iter().sum();
    let ysum: f64 = yield_norm.iter().sum();
    let capacity = if load == 0.0 { 0.0 } else { load / ysum };
    let pv: Vec<f64> = yield_norm.iter().map(|v| v * capacity).collect();

    let mut direct = 0.0;
    for h in 0..8760 {
        direct += demand[h].min(pv[h]);
    }
    let mut flex = Vec::new();
    for &n in windows {
        let mut m = 0.0;
        let mut start = 0;
        while start < 8760 {
            let end = (start + n).min(8760);
            let d: f64 = demand[start..end].iter().sum();
            let p: f64 = pv[start..end].iter().sum();
            m += d.min(p);
            start = end;
        }
        flex.push(m);
    }

    let t_store = 273.15;
    let soc_max = owners * 1.0 * 1000.0 * 334.0 / 3600.0;
    let loss = 0.3 * 6.0 * (t_base - t_store) * owners * 1e-3;
    let cold_s = t_store - 5.0;
    let mut soc = 0.0;
    let mut served = 0.0;
    for h in 0..8760 {
        soc -= loss.min(soc);
        if pv[h] >= demand[h] {
            let cop_s = y.eta_ca * cold_s / (temp[h].max(t_store) + 5.0 - cold_s);
            let charge = ((pv[h] - demand[h]) * cop_s).min(soc_max - soc).max(0.0);
            soc += charge;
            served += demand[h];
        } else {
            let drawn = ((demand[h] - pv[h]) * cop[h]).min(soc);
            soc -= drawn;
            served += pv[h] + drawn / cop[h];
        }
    }

    let frac = |m: f64| if load > 0.0 { m / load } else { 0.0 };
    Reference {
        population: pop,
        ac_households: owners,
        annual_load_kwh: load,
        capacity_w: capacity,
        direct_fraction: frac(direct),
        storage_fraction: frac(served),
        direct_matched_kwh: direct,
        storage_matched_kwh: served,
        flex_matched_kwh: flex,
    }
}

/// Relative difference with an absolute floor for values near zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Deterministic pseudo-random numbers for building test cells.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(
            seed.wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407),
        )
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[(self.next_f64() * items.len() as f64) as usize % items.len()]
    }
}

/// A synthetic cell at its profile's latitude (or the mirrored one).
pub fn synthetic_cell(id: u64, rng: &mut Lcg) -> (GridCell, HourlyWeather, TwoAnchor) {
    let profile = rng.pick(&SynthProfile::ALL);
    let mut lat = profile.latitude();
    if rng.next_f64() < 0.3 {
        lat = -lat;
    }
    let cell = GridCell::new(
        id,
        lat,
        rng.range(-179.0, 179.0),
        "BRA",
        rng.range(0.0, 2e5),
    )
    .unwrap();
    let traj = TwoAnchor {
        y0: 2000,
        y1: 2100,
        gdp0: rng.range(500.0, 40_000.0),
        gdp1: rng.range(5_000.0, 120_000.0),
        hh0: rng.range(2.0, 6.0),
        hh1: rng.range(1.8, 4.0),
        pop0: rng.range(0.5, 1.2),
        pop1: rng.range(0.5, 2.5),
    };
    (cell, synth_weather(rng.next_f64().to_bits(), profile), traj)
}

pub fn default_params() -> ModelParams {
    ModelParams {
        windows: WINDOWS.to_vec(),
        ..ModelParams::default()
    }
}
