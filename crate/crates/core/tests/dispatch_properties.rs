//! Randomized whole-year dispatch properties: bus balance, state-of-charge
//! bounds, strategy fuel ordering, and monotonicity.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{khobar_load, khobar_resources, random_config, random_load, random_resources, renewable_rich_config};
use mgsim_core::dispatch::{simulate_year, verify_energy_balance, Strategy};
use mgsim_core::series::{Quantity, TimeSeries, HOURS_PER_YEAR};

#[test]
fn energy_balance_holds_across_randomized_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA1A);
    for case in 0..100 {
        let strategy = if case % 2 == 0 { Strategy::LoadFollowing } else { Strategy::CycleCharging };
        let cfg = random_config(&mut rng, strategy);
        let resources = random_resources(&mut rng);
        let load = random_load(&mut rng);
        let initial_soc = rng.gen_range(0.2..1.0);
        let result = simulate_year(&cfg, &resources, &load, initial_soc).unwrap();
        let residual = verify_energy_balance(&result);
        assert!(residual < 1e-6, "case {case}: residual {residual}");

        let (lo, hi) = cfg.battery.bounds_kwh(cfg.n_batt);
        for r in &result.records {
            assert!(r.soc_kwh >= lo - 1e-9 && r.soc_kwh <= hi + 1e-9, "case {case}: soc {}", r.soc_kwh);
            assert!(r.unmet_kw >= 0.0 && r.excess_kw >= 0.0 && r.loss_kw >= -1e-12);
        }
    }
}

#[test]
fn unmet_and_served_partition_the_load() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for _ in 0..10 {
        let cfg = random_config(&mut rng, Strategy::LoadFollowing);
        let resources = random_resources(&mut rng);
        let load = random_load(&mut rng);
        let result = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
        for (r, l) in result.records.iter().zip(load.values()) {
            assert!((r.load_kw - *l).abs() < 1e-12);
            assert!(r.unmet_kw <= *l + 1e-12);
        }
        let a = &result.aggregates;
        assert!((a.served_kwh + a.unmet_kwh - a.load_kwh).abs() < 1e-6);
    }
}

#[test]
fn load_following_never_burns_more_fuel_than_cycle_charging() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0E1);
    for case in 0..20 {
        let mut lf_cfg = random_config(&mut rng, Strategy::LoadFollowing);
        lf_cfg.genset.rated_kw = rng.gen_range(100.0..650.0);
        let mut cc_cfg = lf_cfg.clone();
        cc_cfg.strategy = Strategy::CycleCharging;
        let resources = random_resources(&mut rng);
        let load = random_load(&mut rng);
        let lf = simulate_year(&lf_cfg, &resources, &load, 1.0).unwrap();
        let cc = simulate_year(&cc_cfg, &resources, &load, 1.0).unwrap();
        assert!(
            lf.aggregates.fuel_l <= cc.aggregates.fuel_l + 1e-6,
            "case {case}: lf {} L, cc {} L",
            lf.aggregates.fuel_l,
            cc.aggregates.fuel_l
        );
    }
}

#[test]
fn adding_pv_never_increases_lf_fuel() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xADD5);
    for case in 0..8 {
        let mut cfg = renewable_rich_config(&mut rng, Strategy::LoadFollowing);
        cfg.n_pv = rng.gen_range(100..700);
        let resources = random_resources(&mut rng);
        let load = random_load(&mut rng);
        let mut last_fuel = f64::INFINITY;
        for extra in [0u32, 150, 400, 900] {
            let mut bigger = cfg.clone();
            bigger.n_pv = cfg.n_pv + extra;
            let result = simulate_year(&bigger, &resources, &load, 1.0).unwrap();
            assert!(
                result.aggregates.fuel_l <= last_fuel + 1e-6,
                "case {case}: fuel rose from {last_fuel} at +{extra} PV"
            );
            last_fuel = result.aggregates.fuel_l;
        }
    }
}

#[test]
fn unmet_is_antimonotone_in_every_capacity_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD014);
    for case in 0..6 {
        let cfg = random_config(&mut rng, Strategy::LoadFollowing);
        let resources = random_resources(&mut rng);
        let load = random_load(&mut rng);
        let baseline = simulate_year(&cfg, &resources, &load, 1.0).unwrap().aggregates.unmet_kwh;
        for dim in 0..5 {
            let mut bigger = cfg.clone();
            match dim {
                0 => bigger.n_pv += 200,
                1 => bigger.n_wt += 40,
                2 => bigger.n_batt += 300,
                3 => bigger.genset.rated_kw += 150.0,
                _ => bigger.converter.rated_kw += 100.0,
            }
            let unmet = simulate_year(&bigger, &resources, &load, 1.0).unwrap().aggregates.unmet_kwh;
            assert!(unmet <= baseline + 1e-6, "case {case} dim {dim}: {unmet} > {baseline}");
        }
    }
}

#[test]
fn dispatch_never_reads_prices() {
    // Scaling the fuel price changes nothing operational.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9A1E);
    let mut cfg = renewable_rich_config(&mut rng, Strategy::LoadFollowing);
    let resources = random_resources(&mut rng);
    let load = random_load(&mut rng);
    let a = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
    cfg.genset.fuel_price_per_l *= 100.0;
    let b = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
    assert_eq!(a.aggregates.renewable_fraction, b.aggregates.renewable_fraction);
    assert_eq!(a.aggregates.fuel_l, b.aggregates.fuel_l);
    for (x, y) in a.records.iter().zip(b.records.iter()) {
        assert_eq!(x, y);
    }
}

#[test]
fn simulation_is_deterministic() {
    let resources = khobar_resources(99);
    let load = khobar_load(99);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = renewable_rich_config(&mut rng, Strategy::CycleCharging);
    let a = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
    let b = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
    for (x, y) in a.records.iter().zip(b.records.iter()) {
        assert_eq!(x, y);
    }
}

#[test]
fn f32_path_stays_balanced_at_reduced_precision() {
    let ghi = TimeSeries::<f32>::new(Quantity::GhiKwM2, vec![0.4f32; HOURS_PER_YEAR]).unwrap();
    let wind = TimeSeries::<f32>::new(Quantity::WindMs, vec![6.0f32; HOURS_PER_YEAR]).unwrap();
    let temp = TimeSeries::<f32>::new(Quantity::TempC, vec![30.0f32; HOURS_PER_YEAR]).unwrap();
    let load = TimeSeries::<f32>::new(Quantity::LoadKw, vec![120.0f32; HOURS_PER_YEAR]).unwrap();
    let resources = mgsim_core::dispatch::Resources::new(ghi, wind, temp).unwrap();
    let cfg = mgsim_core::dispatch::SystemConfig::<f32> {
        n_pv: 700,
        n_wt: 60,
        n_batt: 1000,
        pv: mgsim_core::components::PvSpec::default_unit(),
        wind: mgsim_core::components::WindSpec::default_small_turbine(),
        battery: mgsim_core::components::BatterySpec::default_unit(),
        genset: mgsim_core::components::GensetSpec::with_rating(490.0),
        converter: mgsim_core::components::ConverterSpec::with_rating(331.0),
        strategy: Strategy::LoadFollowing,
        air_density: 1.225,
    };
    let result = simulate_year(&cfg, &resources, &load, 1.0).unwrap();
    let residual = verify_energy_balance(&result);
    assert!(residual < 1e-2, "f32 residual {residual}");
}
