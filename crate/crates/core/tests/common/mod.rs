//! Shared generators for the randomized integration suites.
#![allow(dead_code)] // each test target uses a different subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mgsim_core::components::{BatterySpec, ConverterSpec, GensetSpec, PvSpec, WindSpec};
use mgsim_core::dispatch::{Resources, Strategy, SystemConfig};
use mgsim_core::economics::{FinanceSpec, PriceTable, UnitCosts};
use mgsim_core::series::{
    synthesize_from_monthly, synthesize_load, DailyShape, MonthlyProfile, Quantity, TimeSeries,
};

pub fn finance() -> FinanceSpec<f64> {
    FinanceSpec::new(0.0812, 0.02, 25).unwrap()
}

pub fn price_table() -> PriceTable<f64> {
    PriceTable {
        pv: UnitCosts { capital: 222.7, replacement: 222.7, om_per_year: 4.45, lifetime_years: Some(25.0) },
        wind: UnitCosts { capital: 1086.0, replacement: 1086.0, om_per_year: 44.0, lifetime_years: Some(20.0) },
        battery: UnitCosts { capital: 100.0, replacement: 100.0, om_per_year: 1.0, lifetime_years: Some(5.0) },
        genset: UnitCosts { capital: 500.0, replacement: 500.0, om_per_year: 0.03, lifetime_years: None },
        converter: UnitCosts { capital: 280.0, replacement: 280.0, om_per_year: 10.0, lifetime_years: Some(25.0) },
    }
}

pub fn khobar_resources(seed: u64) -> Resources<f64> {
    let ghi_months = [3.7, 4.5, 5.2, 5.9, 6.9, 7.6, 7.3, 6.9, 6.3, 5.2, 4.1, 3.5];
    let ghi = synthesize_from_monthly(
        &MonthlyProfile::from_daily_energy(Quantity::GhiKwM2, ghi_months).unwrap(),
        &DailyShape::solar_bell(6, 18).unwrap(),
        0.2,
        seed,
    )
    .unwrap()
    .scale_to_mean(5.6 / 24.0)
    .unwrap();
    let wind_months = [5.4, 5.7, 5.8, 5.6, 6.0, 6.4, 5.9, 5.5, 5.3, 5.0, 5.2, 5.5];
    let wind = synthesize_from_monthly(
        &MonthlyProfile::new(Quantity::WindMs, wind_months).unwrap(),
        &DailyShape::uniform(),
        0.25,
        seed + 1,
    )
    .unwrap()
    .scale_to_mean(5.61)
    .unwrap();
    let temp_months = [17.0, 18.5, 22.0, 27.0, 33.0, 36.0, 38.0, 37.5, 34.5, 30.0, 24.0, 19.0];
    let temp = synthesize_from_monthly(
        &MonthlyProfile::new(Quantity::TempC, temp_months).unwrap(),
        &DailyShape::uniform(),
        0.05,
        seed + 2,
    )
    .unwrap();
    Resources::new(ghi, wind, temp).unwrap()
}

pub fn khobar_load(seed: u64) -> TimeSeries<f64> {
    synthesize_load(2424.2, 390.41, &DailyShape::charging_station(), seed).unwrap()
}

/// Random resource year: arbitrary monthly climate, deterministic per seed.
pub fn random_resources(rng: &mut ChaCha8Rng) -> Resources<f64> {
    let seed = rng.gen();
    let mut ghi_months = [0.0; 12];
    let mut wind_months = [0.0; 12];
    let mut temp_months = [0.0; 12];
    for m in 0..12 {
        ghi_months[m] = rng.gen_range(2.5..8.0);
        wind_months[m] = rng.gen_range(3.0..8.0);
        temp_months[m] = rng.gen_range(10.0..40.0);
    }
    let ghi = synthesize_from_monthly(
        &MonthlyProfile::from_daily_energy(Quantity::GhiKwM2, ghi_months).unwrap(),
        &DailyShape::solar_bell(6, 18).unwrap(),
        rng.gen_range(0.05..0.3),
        seed,
    )
    .unwrap();
    let wind = synthesize_from_monthly(
        &MonthlyProfile::new(Quantity::WindMs, wind_months).unwrap(),
        &DailyShape::uniform(),
        rng.gen_range(0.05..0.3),
        seed + 1,
    )
    .unwrap();
    let temp = synthesize_from_monthly(
        &MonthlyProfile::new(Quantity::TempC, temp_months).unwrap(),
        &DailyShape::uniform(),
        0.05,
        seed + 2,
    )
    .unwrap();
    Resources::new(ghi, wind, temp).unwrap()
}

pub fn random_load(rng: &mut ChaCha8Rng) -> TimeSeries<f64> {
    let avg_daily = rng.gen_range(1200.0..3000.0);
    let peak = avg_daily / 24.0 * rng.gen_range(1.8..4.2);
    synthesize_load(avg_daily, peak, &DailyShape::charging_station(), rng.gen()).unwrap()
}

/// Arbitrary fleet, possibly degenerate (zero components allowed).
pub fn random_config(rng: &mut ChaCha8Rng, strategy: Strategy) -> SystemConfig<f64> {
    SystemConfig {
        n_pv: rng.gen_range(0..1500),
        n_wt: rng.gen_range(0..150),
        n_batt: rng.gen_range(0..2500),
        pv: PvSpec::default_unit(),
        wind: WindSpec::default_small_turbine(),
        battery: BatterySpec::default_unit(),
        genset: GensetSpec::with_rating(rng.gen_range(0.0..600.0)),
        converter: ConverterSpec::with_rating(rng.gen_range(0.0..550.0)),
        strategy,
        air_density: 1.225,
    }
}

/// Renewable-rich fleet with a backup genset, the regime where the two
/// dispatch strategies are meant to be compared.
pub fn renewable_rich_config(rng: &mut ChaCha8Rng, strategy: Strategy) -> SystemConfig<f64> {
    SystemConfig {
        n_pv: rng.gen_range(600..1600),
        n_wt: rng.gen_range(20..150),
        n_batt: rng.gen_range(600..2500),
        pv: PvSpec::default_unit(),
        wind: WindSpec::default_small_turbine(),
        battery: BatterySpec::default_unit(),
        genset: GensetSpec::with_rating(rng.gen_range(250.0..650.0)),
        converter: ConverterSpec::with_rating(rng.gen_range(300.0..550.0)),
        strategy,
        air_density: 1.225,
    }
}
