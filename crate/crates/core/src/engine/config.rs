//! Run configuration: a flat `key = value` file, with later assignments
//! overriding earlier ones.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::EngineError;
use crate::coupling::{StorageSpec, DEFAULT_WINDOWS};
use crate::demand::{CopParams, DemandParams};
use crate::geogrid::HOURS_PER_YEAR;
use crate::pvyield::PvConfig;
use crate::scenario::{eta_at, EfficiencySchedule, SspPreset, WarmingPreset, WarmingSchedule};

pub const FIRST_YEAR: i32 = 2000;
pub const LAST_YEAR: i32 = 2100;

/// Inclusive year range with a simulation stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
    pub stride: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32, stride: i32) -> Result<Self, String> {
        if !(FIRST_YEAR..=LAST_YEAR).contains(&start) || !(FIRST_YEAR..=LAST_YEAR).contains(&end) {
            return Err(format!("years must lie in [{FIRST_YEAR}, {LAST_YEAR}]"));
        }
        if end < start {
            return Err(format!("empty year range {start}:{end}"));
        }
        if stride < 1 {
            return Err(format!("stride must be at least 1, got {stride}"));
        }
        Ok(Self { start, end, stride })
    }

    /// Years that are simulated: every `stride`-th year from `start`, plus
    /// `end`.
    pub fn simulated(&self) -> Vec<i32> {
        let mut years: Vec<i32> = (self.start..=self.end)
            .step_by(self.stride as usize)
            .collect();
        if years.last() != Some(&self.end) {
            years.push(self.end);
        }
        years
    }

    /// Every year reported, simulated or interpolated.
    pub fn reported(&self) -> Vec<i32> {
        (self.start..=self.end).collect()
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.stride)
    }
}

impl FromStr for YearRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<i32>()
                .map_err(|_| format!("invalid year range {s:?}, expected start:end[:stride]"))
        };
        match parts.as_slice() {
            [y] => {
                let y = num(y)?;
                Self::new(y, y, 1)
            }
            [a, b] => Self::new(num(a)?, num(b)?, 1),
            [a, b, c] => Self::new(num(a)?, num(b)?, num(c)?),
            _ => Err(format!(
                "invalid year range {s:?}, expected start:end[:stride]"
            )),
        }
    }
}

/// Source of the warming offsets.
#[derive(Debug, Clone, PartialEq)]
pub enum WarmingChoice {
    Preset(WarmingPreset),
    /// Linear ramp from 0 in 2000 to this many kelvin in 2100.
    EndOfCentury(f64),
    File(PathBuf),
}

impl WarmingChoice {
    pub fn schedule(&self) -> Result<WarmingSchedule, EngineError> {
        match self {
            WarmingChoice::Preset(p) => Ok(p.schedule()),
            WarmingChoice::EndOfCentury(dt) => {
                WarmingSchedule::from_points(&format!("linear{dt}"), vec![(2000, 0.0), (2100, *dt)])
                    .map_err(EngineError::from)
            }
            WarmingChoice::File(path) => WarmingSchedule::load(path).map_err(EngineError::from),
        }
    }
}

/// Optional PV overrides; tilt and azimuth default to the cell's latitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvSettings {
    pub tilt: Option<f64>,
    pub azimuth: Option<f64>,
    pub derate: f64,
    pub gamma_p: f64,
    pub albedo: f64,
    pub cell_temp_a: f64,
    pub cell_temp_b: f64,
}

impl Default for PvSettings {
    fn default() -> Self {
        let base = PvConfig::for_latitude(0.0);
        Self {
            tilt: None,
            azimuth: None,
            derate: base.derate,
            gamma_p: base.gamma_p,
            albedo: base.albedo,
            cell_temp_a: base.cell_temp_a,
            cell_temp_b: base.cell_temp_b,
        }
    }
}

impl PvSettings {
    pub fn for_latitude(&self, latitude: f64) -> PvConfig {
        let base = PvConfig::for_latitude(latitude);
        PvConfig {
            tilt: self.tilt.unwrap_or(base.tilt),
            azimuth: self.azimuth.unwrap_or(base.azimuth),
            derate: self.derate,
            gamma_p: self.gamma_p,
            albedo: self.albedo,
            cell_temp_a: self.cell_temp_a,
            cell_temp_b: self.cell_temp_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub years: YearRange,
    pub ssp: SspPreset,
    pub warming: WarmingChoice,
    /// Replaces the bundled trajectories of `ssp` when set.
    pub trajectories_file: Option<PathBuf>,
    pub windows: Vec<usize>,
    pub storage: bool,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    pub demand: DemandParams,
    /// Temperature lifts of the COP model; `eta_carnot` is taken from the
    /// efficiency schedule each year.
    pub cop: CopParams,
    pub efficiency: EfficiencySchedule,
    pub pv: PvSettings,
    pub storage_spec: StorageSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("data/sample"),
            output_dir: PathBuf::from("out"),
            years: YearRange::new(2010, 2100, 10).expect("valid default range"),
            ssp: SspPreset::Ssp2,
            warming: WarmingChoice::Preset(WarmingPreset::Rcp45),
            trajectories_file: None,
            windows: DEFAULT_WINDOWS.to_vec(),
            storage: true,
            workers: None,
            demand: DemandParams::default(),
            cop: CopParams::default(),
            efficiency: EfficiencySchedule::default(),
            pv: PvSettings::default(),
            storage_spec: StorageSpec::default(),
        }
    }
}

/// Keys that change results, in canonical order.
pub const MODEL_KEYS: [&str; 34] = [
    "years",
    "ssp",
    "warming",
    "warming_file",
    "trajectories_file",
    "windows",
    "storage",
    "t_base",
    "smax_a",
    "smax_b",
    "avail_slope",
    "avail_intercept",
    "eh_log_coeff",
    "eh_const",
    "delta_t1",
    "delta_t2",
    "cop_2000",
    "cop_2100",
    "eta_ca_2000",
    "eta_ca_2100",
    "pv_tilt",
    "pv_azimuth",
    "pv_derate",
    "pv_gamma_p",
    "pv_albedo",
    "pv_cell_temp_a",
    "pv_cell_temp_b",
    "storage_volume_m3",
    "storage_latent_kj_per_kg",
    "storage_density_kg_per_m3",
    "storage_u_value_w_m2k",
    "storage_area_m2",
    "storage_t_storage",
    "storage_discharge_cop",
];

/// Keys that only affect where data is read, written or how fast.
pub const RUNTIME_KEYS: [&str; 3] = ["data_dir", "output_dir", "workers"];

fn parse_f64(key: &str, value: &str) -> Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{key}: expected a finite number, got {value:?}")),
    }
}

fn parse_auto(key: &str, value: &str) -> Result<Option<f64>, String> {
    if value == "auto" {
        Ok(None)
    } else {
        parse_f64(key, value).map(Some)
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{key}: expected on or off, got {value:?}")),
    }
}

fn opt_path(value: &str) -> Option<PathBuf> {
    if value.is_empty() || value == "none" {
        None
    } else {
        Some(PathBuf::from(value))
    }
}

/// Parse a comma-separated window list, sorted and deduplicated.
pub fn parse_windows(value: &str) -> Result<Vec<usize>, String> {
    let mut windows = value
        .split(',')
        .map(|w| {
            let w = w.trim();
            match w.parse::<usize>() {
                Ok(n) if (1..=HOURS_PER_YEAR).contains(&n) => Ok(n),
                _ => Err(format!(
                    "windows: {w:?} is not an hour count in [1, {HOURS_PER_YEAR}]"
                )),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    windows.sort_unstable();
    windows.dedup();
    Ok(windows)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |v| v.to_string())
}

fn fmt_path(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map_or_else(|| "none".to_string(), |p| p.display().to_string())
}

impl RunConfig {
    /// Assign one key. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), EngineError> {
        self.set_inner(key, value.trim())
            .map_err(|message| EngineError::Config {
                key: key.to_string(),
                message,
            })
    }

    fn set_inner(&mut self, key: &str, v: &str) -> Result<(), String> {
        let f = |v: &str| parse_f64(key, v);
        match key {
            "data_dir" => self.data_dir = PathBuf::from(v),
            "output_dir" => self.output_dir = PathBuf::from(v),
            "workers" => {
                self.workers = match v {
                    "auto" => None,
                    _ => match v.parse::<usize>() {
                        Ok(n) if n > 0 => Some(n),
                        _ => return Err(format!("expected a positive integer or auto, got {v:?}")),
                    },
                }
            }
            "years" => self.years = v.parse()?,
            "ssp" => {
                self.ssp = v
                    .parse()
                    .map_err(|e: crate::scenario::ScenarioError| e.to_string())?
            }
            "warming" => {
                self.warming = match v.parse::<WarmingPreset>() {
                    Ok(p) => WarmingChoice::Preset(p),
                    Err(e) => match v.parse::<f64>() {
                        Ok(dt) if dt.is_finite() && dt >= crate::geogrid::MIN_WARMING_K => {
                            WarmingChoice::EndOfCentury(dt)
                        }
                        _ => return Err(format!("{e}, or a warming in kelvin for 2100")),
                    },
                }
            }
            "warming_file" => {
                if let Some(p) = opt_path(v) {
                    self.warming = WarmingChoice::File(p);
                }
            }
            "trajectories_file" => self.trajectories_file = opt_path(v),
            "windows" => self.windows = parse_windows(v)?,
            "storage" => self.storage = parse_bool(key, v)?,
            "t_base" => self.demand.t_base = f(v)?,
            "smax_a" => self.demand.smax_a = f(v)?,
            "smax_b" => self.demand.smax_b = f(v)?,
            "avail_slope" => self.demand.avail_slope = f(v)?,
            "avail_intercept" => self.demand.avail_intercept = f(v)?,
            "eh_log_coeff" => self.demand.eh_log_coeff = f(v)?,
            "eh_const" => self.demand.eh_const = f(v)?,
            "delta_t1" => self.cop.delta_t1 = f(v)?,
            "delta_t2" => self.cop.delta_t2 = f(v)?,
            "cop_2000" => self.efficiency.cop_2000 = f(v)?,
            "cop_2100" => self.efficiency.cop_2100 = f(v)?,
            "eta_ca_2000" => self.efficiency.eta_ca_2000 = f(v)?,
            "eta_ca_2100" => self.efficiency.eta_ca_2100 = f(v)?,
            "pv_tilt" => self.pv.tilt = parse_auto(key, v)?,
            "pv_azimuth" => self.pv.azimuth = parse_auto(key, v)?,
            "pv_derate" => self.pv.derate = f(v)?,
            "pv_gamma_p" => self.pv.gamma_p = f(v)?,
            "pv_albedo" => self.pv.albedo = f(v)?,
            "pv_cell_temp_a" => self.pv.cell_temp_a = f(v)?,
            "pv_cell_temp_b" => self.pv.cell_temp_b = f(v)?,
            "storage_volume_m3" => self.storage_spec.volume_m3 = f(v)?,
            "storage_latent_kj_per_kg" => self.storage_spec.latent_kj_per_kg = f(v)?,
            "storage_density_kg_per_m3" => self.storage_spec.density_kg_per_m3 = f(v)?,
            "storage_u_value_w_m2k" => self.storage_spec.u_value_w_m2k = f(v)?,
            "storage_area_m2" => self.storage_spec.area_m2 = f(v)?,
            "storage_t_storage" => self.storage_spec.t_storage = f(v)?,
            "storage_discharge_cop" => self.storage_spec.discharge_cop = f(v)?,
            _ => return Err("unknown key".to_string()),
        }
        Ok(())
    }

    /// Apply `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, path: &Path, text: &str) -> Result<(), EngineError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| EngineError::ConfigFile {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "expected `key = value`".into(),
                })?;
            self.set(key.trim(), value)
                .map_err(|e| EngineError::ConfigFile {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })?;
        }
        Ok(())
    }

    /// Defaults overridden by the file at `path`.
    pub fn load(path: &Path) -> Result<Self, EngineError> {
        let text = std::fs::read_to_string(path).map_err(|source| EngineError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(path, &text)?;
        Ok(cfg)
    }

    /// Check every parameter group. `eta_carnot` is checked at both ends of
    /// the efficiency schedule.
    pub fn validate(&self) -> Result<(), EngineError> {
        let param = |key: &str, message: String| EngineError::Config {
            key: key.to_string(),
            message,
        };
        self.demand
            .validate()
            .map_err(|e| param("demand", e.to_string()))?;
        self.efficiency
            .validate()
            .map_err(|e| param("efficiency", e.to_string()))?;
        for year in [FIRST_YEAR, LAST_YEAR] {
            let cop = CopParams {
                eta_carnot: eta_at(&self.efficiency, year).eta_ca,
                ..self.cop
            };
            cop.validate().map_err(|e| param("cop", e.to_string()))?;
        }
        for lat in [-60.0, 0.0, 60.0] {
            self.pv
                .for_latitude(lat)
                .validate()
                .map_err(|e| param("pv", e.to_string()))?;
        }
        self.storage_spec
            .validate()
            .map_err(|e| param("storage", e.to_string()))?;
        if self.windows.is_empty() {
            return Err(param("windows", "at least one window is required".into()));
        }
        if self.workers == Some(0) {
            return Err(param("workers", "must be positive".into()));
        }
        Ok(())
    }

    fn value_of(&self, key: &str) -> String {
        let d = &self.demand;
        let e = &self.efficiency;
        let p = &self.pv;
        let s = &self.storage_spec;
        match key {
            "data_dir" => self.data_dir.display().to_string(),
            "output_dir" => self.output_dir.display().to_string(),
            "workers" => self
                .workers
                .map_or_else(|| "auto".into(), |n| n.to_string()),
            "years" => self.years.to_string(),
            "ssp" => self.ssp.to_string(),
            "warming" => match &self.warming {
                WarmingChoice::Preset(p) => p.to_string(),
                WarmingChoice::EndOfCentury(dt) => dt.to_string(),
                WarmingChoice::File(_) => "file".into(),
            },
            "warming_file" => match &self.warming {
                WarmingChoice::File(p) => p.display().to_string(),
                _ => "none".into(),
            },
            "trajectories_file" => fmt_path(&self.trajectories_file),
            "windows" => self
                .windows
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(","),
            "storage" => if self.storage { "on" } else { "off" }.into(),
            "t_base" => d.t_base.to_string(),
            "smax_a" => d.smax_a.to_string(),
            "smax_b" => d.smax_b.to_string(),
            "avail_slope" => d.avail_slope.to_string(),
            "avail_intercept" => d.avail_intercept.to_string(),
            "eh_log_coeff" => d.eh_log_coeff.to_string(),
            "eh_const" => d.eh_const.to_string(),
            "delta_t1" => self.cop.delta_t1.to_string(),
            "delta_t2" => self.cop.delta_t2.to_string(),
            "cop_2000" => e.cop_2000.to_string(),
            "cop_2100" => e.cop_2100.to_string(),
            "eta_ca_2000" => e.eta_ca_2000.to_string(),
            "eta_ca_2100" => e.eta_ca_2100.to_string(),
            "pv_tilt" => fmt_opt(p.tilt),
            "pv_azimuth" => fmt_opt(p.azimuth),
            "pv_derate" => p.derate.to_string(),
            "pv_gamma_p" => p.gamma_p.to_string(),
            "pv_albedo" => p.albedo.to_string(),
            "pv_cell_temp_a" => p.cell_temp_a.to_string(),
            "pv_cell_temp_b" => p.cell_temp_b.to_string(),
            "storage_volume_m3" => s.volume_m3.to_string(),
            "storage_latent_kj_per_kg" => s.latent_kj_per_kg.to_string(),
            "storage_density_kg_per_m3" => s.density_kg_per_m3.to_string(),
            "storage_u_value_w_m2k" => s.u_value_w_m2k.to_string(),
            "storage_area_m2" => s.area_m2.to_string(),
            "storage_t_storage" => s.t_storage.to_string(),
            "storage_discharge_cop" => s.discharge_cop.to_string(),
            _ => unreachable!("unlisted key {key}"),
        }
    }

    /// Result-relevant settings as `key = value` lines in canonical order.
    pub fn canonical_model_text(&self) -> String {
        MODEL_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.value_of(k)))
            .collect()
    }

    /// Every setting, readable back with [`RunConfig::apply_text`].
    pub fn to_config_text(&self) -> String {
        let mut text: String = RUNTIME_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.value_of(k)))
            .collect();
        for k in MODEL_KEYS {
            // `warming = file` is not a value; the file key carries it.
            if k == "warming" && matches!(self.warming, WarmingChoice::File(_)) {
                continue;
            }
            text.push_str(&format!("{k} = {}\n", self.value_of(k)));
        }
        text
    }

    /// SHA-256 of [`RunConfig::canonical_model_text`], lowercase hex.
    pub fn hash(&self) -> String {
        sha256_hex(self.canonical_model_text().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
