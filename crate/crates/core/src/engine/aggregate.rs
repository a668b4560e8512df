use std::collections::BTreeMap;

use super::{CellYearResult, EngineError, YearRange};
use crate::numeric::CompensatedSum;
use crate::scenario::{Region, RegionMap};

/// Label of the global row.
pub const WORLD: &str = "World";

/// Totals of one region (or the world) in one year.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupYear {
    pub year: i32,
    /// Region name or [`WORLD`].
    pub group: String,
    /// Linearly interpolated between simulated years.
    pub interpolated: bool,
    pub n_cells: usize,
    pub ac_households: f64,
    pub annual_load_kwh: f64,
    pub capacity_w: f64,
    /// Capacity increase over the previous reported year, floored at 0.
    pub added_capacity_w: f64,
    pub direct_matched_kwh: f64,
    pub storage_matched_kwh: f64,
    pub flex_matched_kwh: Vec<f64>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

impl GroupYear {
    fn empty(year: i32, group: &str, n_windows: usize) -> Self {
        Self {
            year,
            group: group.to_string(),
            interpolated: false,
            n_cells: 0,
            ac_households: 0.0,
            annual_load_kwh: 0.0,
            capacity_w: 0.0,
            added_capacity_w: 0.0,
            direct_matched_kwh: 0.0,
            storage_matched_kwh: 0.0,
            flex_matched_kwh: vec![0.0; n_windows],
        }
    }

    /// Load-weighted direct match, 0 without load.
    pub fn direct_fraction(&self) -> f64 {
        ratio(self.direct_matched_kwh, self.annual_load_kwh)
    }

    pub fn storage_fraction(&self) -> f64 {
        ratio(self.storage_matched_kwh, self.annual_load_kwh)
    }

    pub fn flex_fraction(&self, i: usize) -> f64 {
        ratio(self.flex_matched_kwh[i], self.annual_load_kwh)
    }
}

/// Compensated accumulator for one group.
struct Acc {
    n_cells: usize,
    households: CompensatedSum,
    load: CompensatedSum,
    capacity: CompensatedSum,
    direct: CompensatedSum,
    storage: CompensatedSum,
    flex: Vec<CompensatedSum>,
}

impl Acc {
    fn new(n_windows: usize) -> Self {
        Self {
            n_cells: 0,
            households: CompensatedSum::new(),
            load: CompensatedSum::new(),
            capacity: CompensatedSum::new(),
            direct: CompensatedSum::new(),
            storage: CompensatedSum::new(),
            flex: vec![CompensatedSum::new(); n_windows],
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        n_cells: usize,
        h: f64,
        load: f64,
        cap: f64,
        direct: f64,
        storage: f64,
        flex: &[f64],
    ) {
        self.n_cells += n_cells;
        self.households.add(h);
        self.load.add(load);
        self.capacity.add(cap);
        self.direct.add(direct);
        self.storage.add(storage);
        for (acc, v) in self.flex.iter_mut().zip(flex) {
            acc.add(*v);
        }
    }

    fn finish(&self, year: i32, group: &str) -> GroupYear {
        GroupYear {
            n_cells: self.n_cells,
            ac_households: self.households.value(),
            annual_load_kwh: self.load.value(),
            capacity_w: self.capacity.value(),
            direct_matched_kwh: self.direct.value(),
            storage_matched_kwh: self.storage.value(),
            flex_matched_kwh: self.flex.iter().map(CompensatedSum::value).collect(),
            ..GroupYear::empty(year, group, self.flex.len())
        }
    }
}

/// Region and world totals of one year's cell results.
///
/// Cells are reduced in `cell_id` order with compensated sums; the world
/// row sums the region rows. Only groups containing cells are returned,
/// regions first in their fixed order, then the world.
pub fn aggregate<'a, I>(results: I, rm: &RegionMap) -> Result<Vec<GroupYear>, EngineError>
where
    I: IntoIterator<Item = &'a CellYearResult>,
{
    let mut rows: Vec<&CellYearResult> = results.into_iter().collect();
    let Some(first) = rows.first() else {
        return Ok(Vec::new());
    };
    let (year, n_windows) = (first.year, first.flex_matched_kwh.len());
    if let Some(r) = rows
        .iter()
        .find(|r| r.year != year || r.flex_matched_kwh.len() != n_windows)
    {
        return Err(EngineError::Data(format!(
            "aggregate expects one year with {n_windows} windows; cell {} has year {} and {} windows",
            r.cell_id,
            r.year,
            r.flex_matched_kwh.len()
        )));
    }
    rows.sort_by_key(|r| r.cell_id);

    let mut by_region: BTreeMap<Region, Acc> = BTreeMap::new();
    for r in rows {
        let region = rm.region_of(&r.country)?;
        by_region
            .entry(region)
            .or_insert_with(|| Acc::new(n_windows))
            .add(
                1,
                r.ac_households,
                r.annual_load_kwh,
                r.capacity_w,
                r.direct_matched_kwh,
                r.storage_matched_kwh,
                &r.flex_matched_kwh,
            );
    }

    let mut out = Vec::with_capacity(by_region.len() + 1);
    let mut world = Acc::new(n_windows);
    for region in Region::ALL {
        if let Some(acc) = by_region.get(&region) {
            let row = acc.finish(year, region.name());
            world.add(
                row.n_cells,
                row.ac_households,
                row.annual_load_kwh,
                row.capacity_w,
                row.direct_matched_kwh,
                row.storage_matched_kwh,
                &row.flex_matched_kwh,
            );
            out.push(row);
        }
    }
    out.push(world.finish(year, WORLD));
    Ok(out)
}

/// Report rows for every year of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTables {
    pub windows: Vec<usize>,
    /// Sorted by year; within a year in [`aggregate`] order.
    pub rows: Vec<GroupYear>,
}

fn lerp(a: f64, b: f64, f: f64) -> f64 {
    a + (b - a) * f
}

fn interpolate(a: &GroupYear, b: &GroupYear, year: i32) -> GroupYear {
    let f = f64::from(year - a.year) / f64::from(b.year - a.year);
    GroupYear {
        year,
        group: a.group.clone(),
        interpolated: true,
        n_cells: a.n_cells,
        ac_households: lerp(a.ac_households, b.ac_households, f),
        annual_load_kwh: lerp(a.annual_load_kwh, b.annual_load_kwh, f),
        capacity_w: lerp(a.capacity_w, b.capacity_w, f),
        added_capacity_w: 0.0,
        direct_matched_kwh: lerp(a.direct_matched_kwh, b.direct_matched_kwh, f),
        storage_matched_kwh: lerp(a.storage_matched_kwh, b.storage_matched_kwh, f),
        flex_matched_kwh: a
            .flex_matched_kwh
            .iter()
            .zip(&b.flex_matched_kwh)
            .map(|(x, y)| lerp(*x, *y, f))
            .collect(),
    }
}

/// Fill the years between simulated ones by linear interpolation and set
/// the added-capacity column.
///
/// `per_year` holds the [`aggregate`] output of each simulated year in
/// ascending order. The first reported year counts its whole capacity as
/// added.
pub fn build_tables(
    per_year: Vec<(i32, Vec<GroupYear>)>,
    years: &YearRange,
    windows: &[usize],
) -> ReportTables {
    let mut rows = Vec::new();
    for pair in per_year.windows(2) {
        let ((y0, r0), (y1, r1)) = (&pair[0], &pair[1]);
        rows.extend(r0.iter().cloned());
        for y in (y0 + 1)..*y1 {
            for a in r0 {
                if let Some(b) = r1.iter().find(|b| b.group == a.group) {
                    rows.push(interpolate(a, b, y));
                }
            }
        }
    }
    if let Some((_, last)) = per_year.last() {
        rows.extend(last.iter().cloned());
    }
    rows.retain(|r| r.year >= years.start && r.year <= years.end);

    let mut previous: BTreeMap<String, f64> = BTreeMap::new();
    for row in &mut rows {
        let prev = previous
            .insert(row.group.clone(), row.capacity_w)
            .unwrap_or(0.0);
        row.added_capacity_w = (row.capacity_w - prev).max(0.0);
    }
    ReportTables {
        windows: windows.to_vec(),
        rows,
    }
}
