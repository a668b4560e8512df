//! Loading and cross-checking a data directory.
//!
//! Layout:
//!
//! ```text
//! <data_dir>/cells.csv              cell_id,lat,lon,country,population
//! <data_dir>/weather/manifest.csv   cell_id,source
//! <data_dir>/countries.csv          optional, replaces the bundled table
//! <data_dir>/regions.csv            optional, replaces the bundled map
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use super::config::sha256_hex;
use super::EngineError;
use crate::geogrid::{load_cells, load_manifest, GridCell, HourlyWeather, WeatherSource};
use crate::scenario::{CountryTable, Region, RegionMap};

pub const CELLS_FILE: &str = "cells.csv";
pub const MANIFEST_FILE: &str = "weather/manifest.csv";
pub const COUNTRIES_FILE: &str = "countries.csv";
pub const REGIONS_FILE: &str = "regions.csv";

/// A validated set of cells with their weather and region assignments.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data_dir: PathBuf,
    /// Sorted by `cell_id`.
    pub cells: Vec<GridCell>,
    /// Parallel to `cells`.
    pub weather: Vec<HourlyWeather>,
    /// Parallel to `cells`.
    pub regions: Vec<Region>,
    pub countries: CountryTable,
    pub region_map: RegionMap,
    /// `(path relative to data_dir, sha256)` of every file read, sorted.
    pub checksums: Vec<(String, String)>,
    /// Weather sources that were generated rather than read.
    pub synthetic_weather: usize,
}

fn checksum(data_dir: &Path, path: &Path) -> Result<(String, String), EngineError> {
    let bytes = std::fs::read(path).map_err(|source| EngineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .strip_prefix(data_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/");
    Ok((name, sha256_hex(&bytes)))
}

impl Dataset {
    pub fn load(data_dir: &Path) -> Result<Self, EngineError> {
        if !data_dir.is_dir() {
            return Err(EngineError::Data(format!(
                "data directory {} does not exist",
                data_dir.display()
            )));
        }
        let mut checksums = BTreeMap::new();
        let mut track = |path: &Path| -> Result<(), EngineError> {
            let (k, v) = checksum(data_dir, path)?;
            checksums.insert(k, v);
            Ok(())
        };

        let countries_path = data_dir.join(COUNTRIES_FILE);
        let countries = if countries_path.exists() {
            track(&countries_path)?;
            CountryTable::load(&countries_path)?
        } else {
            CountryTable::bundled()
        };
        let regions_path = data_dir.join(REGIONS_FILE);
        let region_map = if regions_path.exists() {
            track(&regions_path)?;
            RegionMap::load(&regions_path)?
        } else {
            RegionMap::bundled()
        };
        region_map.check_total(&countries)?;

        let cells_path = data_dir.join(CELLS_FILE);
        track(&cells_path)?;
        let mut cells = load_cells(&cells_path)?;
        cells.sort_by_key(|c| c.cell_id);

        let manifest_path = data_dir.join(MANIFEST_FILE);
        track(&manifest_path)?;
        let manifest: BTreeMap<u64, WeatherSource> =
            load_manifest(&manifest_path)?.into_iter().collect();

        let cell_ids: BTreeSet<u64> = cells.iter().map(|c| c.cell_id).collect();
        if let Some(extra) = manifest.keys().find(|id| !cell_ids.contains(id)) {
            return Err(EngineError::Data(format!(
                "{}: cell {extra} is not listed in {CELLS_FILE}",
                manifest_path.display()
            )));
        }

        let mut weather = Vec::with_capacity(cells.len());
        let mut regions = Vec::with_capacity(cells.len());
        let mut synthetic_weather = 0;
        for cell in &cells {
            if !countries.contains(&cell.country) {
                return Err(EngineError::Data(format!(
                    "cell {}: country {} is not in the country table",
                    cell.cell_id, cell.country
                )));
            }
            regions.push(region_map.region_of(&cell.country)?);
            let source = manifest.get(&cell.cell_id).ok_or_else(|| {
                EngineError::Data(format!(
                    "cell {} has no weather entry in {}",
                    cell.cell_id,
                    manifest_path.display()
                ))
            })?;
            match source {
                WeatherSource::File(path) => track(path)?,
                WeatherSource::Synth { .. } => synthetic_weather += 1,
            }
            weather.push(source.load()?);
        }

        Ok(Self {
            data_dir: data_dir.to_path_buf(),
            cells,
            weather,
            regions,
            countries,
            region_map,
            checksums: checksums.into_iter().collect(),
            synthetic_weather,
        })
    }

    /// Build a dataset in memory, with the bundled country table and map.
    pub fn from_parts(
        cells: Vec<GridCell>,
        weather: Vec<HourlyWeather>,
    ) -> Result<Self, EngineError> {
        if cells.len() != weather.len() {
            return Err(EngineError::Data(format!(
                "{} cells but {} weather series",
                cells.len(),
                weather.len()
            )));
        }
        let countries = CountryTable::bundled();
        let region_map = RegionMap::bundled();
        let mut pairs: Vec<(GridCell, HourlyWeather)> = cells.into_iter().zip(weather).collect();
        pairs.sort_by_key(|(c, _)| c.cell_id);
        for w in pairs.windows(2) {
            if w[0].0.cell_id == w[1].0.cell_id {
                return Err(crate::geogrid::GeoError::DuplicateCell(w[0].0.cell_id).into());
            }
        }
        let mut regions = Vec::with_capacity(pairs.len());
        for (cell, _) in &pairs {
            cell.validate()?;
            regions.push(region_map.region_of(&cell.country)?);
        }
        let (cells, weather) = pairs.into_iter().unzip();
        Ok(Self {
            data_dir: PathBuf::new(),
            cells,
            weather,
            regions,
            countries,
            region_map,
            checksums: Vec::new(),
            synthetic_weather: 0,
        })
    }

    pub fn index_of(&self, cell_id: u64) -> Option<usize> {
        self.cells
            .binary_search_by_key(&cell_id, |c| c.cell_id)
            .ok()
    }

    pub fn total_population(&self) -> f64 {
        crate::numeric::sum(&self.cells.iter().map(|c| c.population).collect::<Vec<_>>())
    }

    /// Distinct countries of the cells, sorted.
    pub fn cell_countries(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.cells.iter().map(|c| c.country.as_str()).collect();
        set.into_iter().collect()
    }
}
