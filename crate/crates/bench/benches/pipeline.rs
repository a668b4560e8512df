use std::hint::black_box;

use coolgrid::coupling::{
    cop_storage_hourly, flexibility_curve, pv_series, simulate_storage, size_pv, StorageSpec,
};
use coolgrid::engine::{simulate_cell_year, ModelParams, YearState};
use coolgrid::geogrid::{synth_weather, SynthProfile};
use coolgrid::pvyield::hourly_yield;
use coolgrid::{
    CopParams, DemandParams, DemandSeries, GridCell, PvConfig, Region, SocioState, WeatherSeries,
};
use criterion::{criterion_group, criterion_main, Criterion};

const SOCIO: SocioState = SocioState {
    gdp_per_cap: 20_000.0,
    household_size: 3.0,
    eta_efficiency: 0.8,
};

fn pipeline(c: &mut Criterion) {
    let weather = synth_weather(7, SynthProfile::Subtropical);
    let lat = SynthProfile::Subtropical.latitude();
    let pv_cfg = PvConfig::for_latitude(lat);
    let demand_params = DemandParams::default();
    let cop = CopParams::default();

    c.bench_function("hourly_yield", |b| {
        b.iter(|| hourly_yield(black_box(&weather), lat, 0.0, &pv_cfg))
    });

    c.bench_function("demand_series", |b| {
        b.iter(|| {
            DemandSeries::compute(
                black_box(weather.temperature()),
                1e5,
                &SOCIO,
                &demand_params,
                &cop,
            )
            .unwrap()
        })
    });

    let demand =
        DemandSeries::compute(weather.temperature(), 1e5, &SOCIO, &demand_params, &cop).unwrap();
    let yields = hourly_yield(&weather, lat, 0.0, &pv_cfg);
    let sizing = size_pv(&demand.hourly_kwh, &yields.yield_norm).unwrap();
    let pv = pv_series(sizing.capacity_w, &yields.yield_norm);
    let spec = StorageSpec::default();
    let cop_storage = cop_storage_hourly(weather.temperature(), &cop, &spec);

    c.bench_function("flexibility_curve", |b| {
        b.iter(|| {
            flexibility_curve(
                black_box(&demand.hourly_kwh),
                &pv,
                &coolgrid::coupling::DEFAULT_WINDOWS,
            )
            .unwrap()
        })
    });

    c.bench_function("simulate_storage", |b| {
        b.iter(|| {
            simulate_storage(
                black_box(&demand.hourly_kwh),
                &pv,
                &demand.cop_hourly,
                &cop_storage,
                &spec,
                demand.ac_households,
                demand_params.t_base,
            )
            .unwrap()
        })
    });

    let cell = GridCell::new(1, lat, 0.0, "ARE", 1e5).unwrap();
    let state = YearState {
        year: 2050,
        socio: SOCIO,
        population_multiplier: 1.2,
        delta_t: 1.5,
        eta_carnot: 0.2,
    };
    let params = ModelParams::default();
    c.bench_function("cell_year", |b| {
        b.iter(|| {
            simulate_cell_year(
                &cell,
                Region::MiddleEastNorthAfrica,
                black_box(&weather),
                &state,
                &params,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
