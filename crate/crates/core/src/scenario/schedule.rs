use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{parse_num, read_text, records, ScenarioError};
use crate::geogrid::MIN_WARMING_K;

pub const SCHEDULE_START: i32 = 2000;
pub const SCHEDULE_END: i32 = 2100;

/// AC efficiency improvement over the century.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencySchedule {
    pub cop_2000: f64,
    pub cop_2100: f64,
    pub eta_ca_2000: f64,
    pub eta_ca_2100: f64,
}

impl Default for EfficiencySchedule {
    fn default() -> Self {
        Self {
            cop_2000: 2.4,
            cop_2100: 4.39,
            eta_ca_2000: 0.16,
            eta_ca_2100: 0.29,
        }
    }
}

impl EfficiencySchedule {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = [
            self.cop_2000,
            self.cop_2100,
            self.eta_ca_2000,
            self.eta_ca_2100,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0);
        if !positive {
            return Err(ScenarioError::Efficiency(
                "all endpoints must be positive".into(),
            ));
        }
        if self.cop_2100 < self.cop_2000 || self.eta_ca_2100 < self.eta_ca_2000 {
            return Err(ScenarioError::Efficiency(
                "end values must not be below start values".into(),
            ));
        }
        if self.eta_ca_2100 > 1.0 {
            return Err(ScenarioError::Efficiency("eta_ca must not exceed 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyAtYear {
    /// Demand multiplier relative to the 2000 fleet, `cop_2000 / cop(year)`.
    pub eta: f64,
    /// Fraction of the Carnot COP reached by real units.
    pub eta_ca: f64,
    pub cop: f64,
}

/// Efficiency state at `year`, clamped to [2000, 2100].
pub fn eta_at(s: &EfficiencySchedule, year: i32) -> EfficiencyAtYear {
    let y = year.clamp(SCHEDULE_START, SCHEDULE_END);
    let f = f64::from(y - SCHEDULE_START) / f64::from(SCHEDULE_END - SCHEDULE_START);
    let cop = lerp(s.cop_2000, s.cop_2100, f);
    EfficiencyAtYear {
        eta: if y == SCHEDULE_START {
            1.0
        } else {
            s.cop_2000 / cop
        },
        eta_ca: lerp(s.eta_ca_2000, s.eta_ca_2100, f),
        cop,
    }
}

fn lerp(a: f64, b: f64, f: f64) -> f64 {
    if f == 0.0 {
        a
    } else if f == 1.0 {
        b
    } else {
        a + (b - a) * f
    }
}

/// Named end-of-century warming levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarmingPreset {
    Rcp3,
    Rcp45,
    Rcp60,
    Rcp85,
}

impl WarmingPreset {
    pub const ALL: [WarmingPreset; 4] = [
        WarmingPreset::Rcp3,
        WarmingPreset::Rcp45,
        WarmingPreset::Rcp60,
        WarmingPreset::Rcp85,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WarmingPreset::Rcp3 => "rcp3",
            WarmingPreset::Rcp45 => "rcp45",
            WarmingPreset::Rcp60 => "rcp60",
            WarmingPreset::Rcp85 => "rcp85",
        }
    }

    /// Warming reached in 2100, kelvin.
    pub fn delta_2100(self) -> f64 {
        match self {
            WarmingPreset::Rcp3 => 1.8,
            WarmingPreset::Rcp45 => 2.5,
            WarmingPreset::Rcp60 => 3.8,
            WarmingPreset::Rcp85 => 4.5,
        }
    }

    pub fn schedule(self) -> WarmingSchedule {
        WarmingSchedule::linear(self.name(), self.delta_2100())
    }
}

impl fmt::Display for WarmingPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WarmingPreset {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WarmingPreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ScenarioError::UnknownPreset {
                kind: "warming",
                name: s.to_string(),
                expected: WarmingPreset::ALL.map(|p| p.name()).join(", "),
            })
    }
}

/// Global mean temperature offset by year, kelvin.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmingSchedule {
    pub name: String,
    /// `(year, delta_k)` with strictly increasing years.
    points: Vec<(i32, f64)>,
}

impl WarmingSchedule {
    pub const HEADER: [&'static str; 2] = ["year", "delta_k"];

    /// Straight ramp from 0 in 2000 to `delta_2100` in 2100.
    pub fn linear(name: &str, delta_2100: f64) -> Self {
        Self {
            name: name.to_string(),
            points: vec![(SCHEDULE_START, 0.0), (SCHEDULE_END, delta_2100)],
        }
    }

    pub fn from_points(name: &str, mut points: Vec<(i32, f64)>) -> Result<Self, ScenarioError> {
        let err = |message: String| ScenarioError::Warming {
            name: name.to_string(),
            message,
        };
        if points.is_empty() {
            return Err(err("no entries".into()));
        }
        points.sort_by_key(|p| p.0);
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(err(format!("year {} listed twice", w[0].0)));
            }
        }
        for &(year, delta) in &points {
            if !delta.is_finite() || delta < MIN_WARMING_K {
                return Err(err(format!(
                    "year {year}: offset {delta} must be finite and at least {MIN_WARMING_K}"
                )));
            }
        }
        Ok(Self {
            name: name.to_string(),
            points,
        })
    }

    pub fn parse(path: &Path, text: &[u8]) -> Result<Self, ScenarioError> {
        let mut points = Vec::new();
        for rec in records(path, text, &Self::HEADER)? {
            let (line, rec) = rec?;
            points.push((
                parse_num(path, line, &rec[0], "year")?,
                parse_num(path, line, &rec[1], "delta_k")?,
            ));
        }
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        Self::from_points(&name, points)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::parse(path, &read_text(path)?)
    }

    pub fn points(&self) -> &[(i32, f64)] {
        &self.points
    }
}

/// Offset at `year`: 0 before 2000, linear between listed years, held at the
/// first and last listed values outside the table.
pub fn warming_at(ws: &WarmingSchedule, year: i32) -> f64 {
    if year < SCHEDULE_START {
        return 0.0;
    }
    let pts = &ws.points;
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if year <= first.0 {
        return first.1;
    }
    if year >= last.0 {
        return last.1;
    }
    let i = pts.partition_point(|p| p.0 <= year);
    let (y0, d0) = pts[i - 1];
    let (y1, d1) = pts[i];
    if year == y0 {
        return d0;
    }
    d0 + (d1 - d0) * f64::from(year - y0) / f64::from(y1 - y0)
}
