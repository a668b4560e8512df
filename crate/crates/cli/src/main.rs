use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coolgrid::engine::{
    self, simulate_cell_year, write_flex_curve, write_reports, Dataset, EngineError, ModelParams,
    Scenario, YearRange, FLEX_FILE,
};
use coolgrid::RunConfig;

/// Gridded residential cooling demand, PV sizing and storage matching.
#[derive(Debug, Parser)]
#[command(name = "coolgrid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the data directory and scenario inputs, then print a summary
    Validate(Settings),
    /// Simulate every cell and year and write the report files
    Run(Settings),
    /// Print the full chain for one cell in one year
    Cell {
        /// Cell to inspect
        #[arg(long)]
        id: u64,
        /// Year to simulate
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        settings: Settings,
    },
    /// Write the flexibility-window curve for the selected years
    Flex(Settings),
    /// Print the version
    Version,
}

#[derive(Debug, Clone, Args)]
struct Settings {
    /// Key-value configuration file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Data directory with cells.csv and weather/manifest.csv
    #[arg(long, value_name = "DIR", env = "COOLGRID_DATA")]
    data: Option<PathBuf>,
    /// Socioeconomic pathway: ssp2, ssp3 or ssp5
    #[arg(long)]
    ssp: Option<String>,
    /// Warming preset (rcp3, rcp45, rcp60, rcp85) or kelvin reached in 2100
    #[arg(long)]
    warming: Option<String>,
    /// Years as start:end[:stride]
    #[arg(long, value_name = "RANGE", value_parser = parse_years)]
    years: Option<YearRange>,
    /// Comma-separated flexibility windows in hours
    #[arg(long, value_name = "LIST", value_parser = parse_windows)]
    windows: Option<Windows>,
    /// Ice storage simulation: on or off
    #[arg(long, value_name = "on|off")]
    storage: Option<String>,
    /// Output directory for reports
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Override any configuration key, e.g. --set t_base=292.15
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Clone)]
struct Windows(Vec<usize>);

fn parse_years(s: &str) -> Result<YearRange, String> {
    s.parse()
}

fn parse_windows(s: &str) -> Result<Windows, String> {
    engine::parse_windows(s).map(Windows)
}

/// A failure after argument parsing, with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let mut message = e.to_string();
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            let text = s.to_string();
            if !message.contains(&text) {
                message.push_str(&format!(": {text}"));
            }
            source = s.source();
        }
        Self { code: 1, message }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

impl Settings {
    /// Defaults, then the config file, then `--set`, then dedicated flags.
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            cfg.set(k.trim(), v).map_err(|e| usage(e.to_string()))?;
        }
        let flag = |cfg: &mut RunConfig, key: &str, value: &str| {
            cfg.set(key, value)
                .map_err(|e| usage(format!("--{}: {e}", key.replace('_', "-"))))
        };
        if let Some(d) = &self.data {
            cfg.data_dir = d.clone();
        }
        if let Some(v) = &self.ssp {
            flag(&mut cfg, "ssp", v)?;
        }
        if let Some(v) = &self.warming {
            flag(&mut cfg, "warming", v)?;
        }
        if let Some(y) = self.years {
            cfg.years = y;
        }
        if let Some(w) = &self.windows {
            cfg.windows = w.0.clone();
        }
        if let Some(v) = &self.storage {
            flag(&mut cfg, "storage", v)?;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        if let Some(n) = self.workers {
            cfg.workers = Some(n as usize);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load(cfg: &RunConfig) -> Result<(Dataset, Scenario), Failure> {
    let data = Dataset::load(&cfg.data_dir)?;
    let scenario = Scenario::from_config(cfg)?;
    scenario.check_covers(&data, &cfg.years)?;
    Ok((data, scenario))
}

fn validate(settings: &Settings) -> Result<(), Failure> {
    let cfg = settings.resolve()?;
    let (data, scenario) = load(&cfg)?;
    let regions: std::collections::BTreeSet<_> = data.regions.iter().collect();
    println!("data directory: {}", cfg.data_dir.display());
    println!("cells: {}", data.cells.len());
    println!("synthetic weather cells: {}", data.synthetic_weather);
    println!("population: {}", data.total_population());
    println!("countries used: {}", data.cell_countries().len());
    println!("regions used: {}", regions.len());
    println!("country table: {} countries", data.countries.len());
    println!(
        "trajectories: {} ({} countries)",
        scenario.trajectories.name,
        scenario.trajectories.len()
    );
    println!("warming: {}", scenario.warming.name);
    println!(
        "years: {} ({} simulated)",
        cfg.years,
        cfg.years.simulated().len()
    );
    println!("config hash: {}", cfg.hash());
    for (name, sum) in &data.checksums {
        println!("sha256 {name}: {sum}");
    }
    println!("ok");
    Ok(())
}

fn run(settings: &Settings) -> Result<(), Failure> {
    let cfg = settings.resolve()?;
    let (data, _) = load(&cfg)?;
    let out = engine::run(&cfg, &data)?;
    let paths = write_reports(&cfg.output_dir, &cfg, &data, &out)?;
    println!(
        "simulated {} cell-years ({} cells, {} years)",
        out.cell_results.len(),
        data.cells.len(),
        cfg.years.simulated().len()
    );
    for row in out
        .tables
        .rows
        .iter()
        .filter(|r| r.group == engine::WORLD && !r.interpolated)
    {
        println!(
            "{} World capacity_w={} direct_fraction={:.4} storage_fraction={:.4}",
            row.year,
            row.capacity_w,
            row.direct_fraction(),
            row.storage_fraction()
        );
    }
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cell(id: u64, year: i32, settings: &Settings) -> Result<(), Failure> {
    let mut cfg = settings.resolve()?;
    cfg.years = YearRange::new(year, year, 1).map_err(usage)?;
    let (data, scenario) = load(&cfg)?;
    let i = data.index_of(id).ok_or_else(|| Failure {
        code: 1,
        message: format!("cell {id} is not in the data set"),
    })?;
    let c = &data.cells[i];
    let state = scenario
        .year_state(&c.country, year)
        .map_err(|e| Failure::from(EngineError::from(e)))?;
    let d = simulate_cell_year(
        c,
        data.regions[i],
        &data.weather[i],
        &state,
        &ModelParams::from_config(&cfg),
    )?;
    let r = &d.result;
    println!(
        "cell {} ({}, {}) country {} region {}",
        c.cell_id, c.latitude, c.longitude, c.country, r.region
    );
    println!("year {year}");
    println!("  warming_k            {}", state.delta_t);
    println!("  gdp_per_cap          {}", state.socio.gdp_per_cap);
    println!("  household_size       {}", state.socio.household_size);
    println!("  efficiency_factor    {}", state.socio.eta_efficiency);
    println!("  eta_carnot           {}", state.eta_carnot);
    println!("demand");
    println!("  population           {}", r.population);
    println!("  cdd_annual           {}", d.demand.cdd_annual);
    println!("  ac_households        {}", d.demand.ac_households);
    println!("  annual_kwh           {}", d.demand.annual_kwh);
    println!(
        "  peak_hour_kwh        {}",
        d.demand.hourly_kwh.iter().cloned().fold(0.0, f64::max)
    );
    println!("sizing");
    println!("  capacity_w           {}", d.sizing.capacity_w);
    println!("  annual_yield_kwh_per_w {}", d.sizing.annual_yield_per_w);
    println!("match");
    println!("  direct_fraction      {}", d.report.direct_fraction);
    match &d.storage {
        Some(s) => {
            println!("  storage_fraction     {}", d.report.storage_fraction);
            println!("  storage_charged_kwh_th    {}", s.ledger.charged);
            println!("  storage_discharged_kwh_th {}", s.ledger.discharged);
            println!("  storage_losses_kwh_th     {}", s.ledger.losses);
        }
        None => println!("  storage              off"),
    }
    println!("flexibility");
    for p in &d.report.flex_curve {
        println!("  {:>5} h  {}", p.window_hours, p.fraction);
    }
    Ok(())
}

fn flex(settings: &Settings) -> Result<(), Failure> {
    let mut cfg = settings.resolve()?;
    cfg.storage = false;
    let (data, _) = load(&cfg)?;
    let out = engine::run(&cfg, &data)?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| {
        Failure::from(EngineError::Io {
            path: cfg.output_dir.clone(),
            source,
        })
    })?;
    let path = cfg.output_dir.join(FLEX_FILE);
    write_flex_curve(&path, &out.tables)?;
    print_flex_summary(&out.tables, &path);
    Ok(())
}

fn print_flex_summary(t: &engine::ReportTables, path: &Path) {
    for row in t
        .rows
        .iter()
        .filter(|r| r.group == engine::WORLD && !r.interpolated)
    {
        let curve: Vec<String> = t
            .windows
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{w}h={:.4}", row.flex_fraction(i)))
            .collect();
        println!("{} World {}", row.year, curve.join(" "));
    }
    println!("wrote {}", path.display());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate(s) => validate(s),
        Command::Run(s) => run(s),
        Command::Cell { id, year, settings } => cell(*id, *year, settings),
        Command::Flex(s) => flex(s),
        Command::Version => {
            println!("coolgrid {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
