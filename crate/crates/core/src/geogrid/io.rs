use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::{GeoError, GridCell, HourlyWeather, SynthProfile, HOURS_PER_YEAR};

pub const CELLS_HEADER: [&str; 5] = ["cell_id", "lat", "lon", "country", "population"];
pub const WEATHER_HEADER: [&str; 4] = ["temp_K", "ghi_Wm2", "wind_ms", "pressure_Pa"];
const MANIFEST_HEADER: [&str; 2] = ["cell_id", "source"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> GeoError + '_ {
    move |source| GeoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> GeoError {
    GeoError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn reader(text: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text)
}

fn check_header(
    path: &Path,
    rdr: &mut csv::Reader<&[u8]>,
    expected: &[&str],
) -> Result<(), GeoError> {
    let header = rdr
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(parse_err(
            path,
            1,
            format!("header must be `{}`", expected.join(",")),
        ));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(
    path: &Path,
    line: u64,
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T, GeoError> {
    let raw = record
        .get(idx)
        .ok_or_else(|| parse_err(path, line, format!("missing column {name}")))?;
    raw.parse()
        .map_err(|_| parse_err(path, line, format!("invalid {name} {raw:?}")))
}

fn read_file(path: &Path) -> Result<Vec<u8>, GeoError> {
    let mut buf = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(io_err(path))?;
    Ok(buf)
}

/// Load and validate a cells file (`cell_id,lat,lon,country,population`).
pub fn load_cells(path: &Path) -> Result<Vec<GridCell>, GeoError> {
    parse_cells(path, &read_file(path)?)
}

/// Parse cells from in-memory CSV text; `path` is used for diagnostics only.
pub fn parse_cells(path: &Path, text: &[u8]) -> Result<Vec<GridCell>, GeoError> {
    let mut rdr = reader(text);
    check_header(path, &mut rdr, &CELLS_HEADER)?;
    let mut seen = BTreeSet::new();
    let mut cells = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != CELLS_HEADER.len() {
            return Err(parse_err(path, line, "expected 5 columns"));
        }
        let cell_id: u64 = field(path, line, &record, 0, "cell_id")?;
        let cell = GridCell {
            cell_id,
            latitude: field(path, line, &record, 1, "lat")?,
            longitude: field(path, line, &record, 2, "lon")?,
            country: record[3].to_string(),
            population: field(path, line, &record, 4, "population")?,
        };
        cell.validate()?;
        if !seen.insert(cell_id) {
            return Err(GeoError::DuplicateCell(cell_id));
        }
        cells.push(cell);
    }
    Ok(cells)
}

pub fn write_cells(path: &Path, cells: &[GridCell]) -> Result<(), GeoError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "{}", CELLS_HEADER.join(","))?;
        for c in cells {
            writeln!(
                out,
                "{},{},{},{},{}",
                c.cell_id, c.latitude, c.longitude, c.country, c.population
            )?;
        }
        out.flush()
    };
    write().map_err(io_err(path))
}

/// Load one 8760-row weather block (`temp_K,ghi_Wm2,wind_ms,pressure_Pa`).
pub fn load_weather_block(path: &Path) -> Result<HourlyWeather, GeoError> {
    let text = read_file(path)?;
    let mut rdr = reader(&text);
    check_header(path, &mut rdr, &WEATHER_HEADER)?;
    let mut cols: [Vec<f64>; 4] = Default::default();
    for col in cols.iter_mut() {
        col.reserve(HOURS_PER_YEAR);
    }
    let mut last_line = 1;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        last_line = line;
        if record.len() != WEATHER_HEADER.len() {
            return Err(parse_err(path, line, "expected 4 columns"));
        }
        for (i, col) in cols.iter_mut().enumerate() {
            col.push(field(path, line, &record, i, WEATHER_HEADER[i])?);
        }
    }
    if cols[0].len() != HOURS_PER_YEAR {
        return Err(parse_err(
            path,
            last_line,
            format!("{} data rows, expected {HOURS_PER_YEAR}", cols[0].len()),
        ));
    }
    let [t, ghi, wind, p] = cols;
    HourlyWeather::new(t, ghi, wind, p).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn write_weather_block(path: &Path, weather: &HourlyWeather) -> Result<(), GeoError> {
    use super::WeatherSeries;
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "{}", WEATHER_HEADER.join(","))?;
        for h in 0..HOURS_PER_YEAR {
            writeln!(
                out,
                "{},{},{},{}",
                weather.temperature()[h],
                weather.ghi()[h],
                weather.wind_speed()[h],
                weather.pressure()[h]
            )?;
        }
        out.flush()
    };
    write().map_err(io_err(path))
}

/// Where a cell's weather block comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeatherSource {
    /// A CSV block, resolved relative to the manifest's directory.
    File(PathBuf),
    /// Deterministic synthetic weather, written `synth:<profile>:<seed>`.
    Synth { profile: SynthProfile, seed: u64 },
}

impl WeatherSource {
    pub fn load(&self) -> Result<HourlyWeather, GeoError> {
        match self {
            WeatherSource::File(path) => load_weather_block(path),
            WeatherSource::Synth { profile, seed } => Ok(super::synth_weather(*seed, *profile)),
        }
    }
}

/// Load a weather manifest (`cell_id,source`).
pub fn load_manifest(path: &Path) -> Result<Vec<(u64, WeatherSource)>, GeoError> {
    let text = read_file(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut rdr = reader(&text);
    check_header(path, &mut rdr, &MANIFEST_HEADER)?;
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell_id: u64 = field(path, line, &record, 0, "cell_id")?;
        let raw = record
            .get(1)
            .ok_or_else(|| parse_err(path, line, "missing column source"))?;
        let source = match raw.strip_prefix("synth:") {
            Some(spec) => {
                let (profile, seed) = spec
                    .split_once(':')
                    .ok_or_else(|| parse_err(path, line, "expected synth:<profile>:<seed>"))?;
                WeatherSource::Synth {
                    profile: profile
                        .parse()
                        .map_err(|e: GeoError| parse_err(path, line, e.to_string()))?,
                    seed: seed
                        .parse()
                        .map_err(|_| parse_err(path, line, format!("invalid seed {seed:?}")))?,
                }
            }
            None => WeatherSource::File(base.join(raw)),
        };
        if !seen.insert(cell_id) {
            return Err(GeoError::DuplicateCell(cell_id));
        }
        entries.push((cell_id, source));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<GridCell>, GeoError> {
        parse_cells(Path::new("cells.csv"), text.as_bytes())
    }

    #[test]
    fn two_valid_rows() {
        let cells = parse(
            "cell_id,lat,lon,country,population\n1,12.5,-3.25,BFA,1500.5\n2,-33.9,18.4,ZAF,0\n",
        )
        .unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(
            cells[0],
            GridCell {
                cell_id: 1,
                latitude: 12.5,
                longitude: -3.25,
                country: "BFA".into(),
                population: 1500.5
            }
        );
        assert_eq!(cells[1].population, 0.0);
    }

    #[test]
    fn latitude_out_of_range() {
        let err = parse("cell_id,lat,lon,country,population\n1,91,0,FIN,1\n").unwrap_err();
        assert!(
            matches!(
                err,
                GeoError::OutOfRange {
                    field: "latitude",
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn duplicate_id_named() {
        let err =
            parse("cell_id,lat,lon,country,population\n7,0,0,FIN,1\n8,0,0,FIN,1\n7,1,1,FIN,1\n")
                .unwrap_err();
        assert!(matches!(err, GeoError::DuplicateCell(7)));
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn parse_error_carries_line() {
        let err =
            parse("cell_id,lat,lon,country,population\n1,0,0,FIN,1\n2,zero,0,FIN,1\n").unwrap_err();
        match err {
            GeoError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("lat"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn wrong_header() {
        let err = parse("id,lat,lon,country,population\n").unwrap_err();
        assert!(matches!(err, GeoError::Parse { line: 1, .. }));
    }

    #[test]
    fn manifest_sources() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        std::fs::write(
            &path,
            "cell_id,source\n1,synth:temperate:42\n2,blocks/cell_2.csv\n",
        )
        .unwrap();
        let entries = load_manifest(&path).unwrap();
        assert_eq!(
            entries[0].1,
            WeatherSource::Synth {
                profile: SynthProfile::Temperate,
                seed: 42
            }
        );
        assert_eq!(
            entries[1].1,
            WeatherSource::File(dir.path().join("blocks/cell_2.csv"))
        );
    }

    #[test]
    fn manifest_bad_profile() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        std::fs::write(&path, "cell_id,source\n1,synth:arctic:1\n").unwrap();
        assert!(matches!(
            load_manifest(&path),
            Err(GeoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn weather_block_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        let w = super::super::synth_weather(3, SynthProfile::Subtropical);
        write_weather_block(&path, &w).unwrap();
        assert_eq!(load_weather_block(&path).unwrap(), w);
    }

    #[test]
    fn weather_block_short() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        std::fs::write(
            &path,
            "temp_K,ghi_Wm2,wind_ms,pressure_Pa\n300,0,1,101325\n",
        )
        .unwrap();
        let err = load_weather_block(&path).unwrap_err();
        assert!(err.to_string().contains("expected 8760"), "{err}");
    }
}
