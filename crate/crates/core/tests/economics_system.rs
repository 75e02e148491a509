//! Whole-system economics invariants on a simulated year.

mod common;

use common::{finance, khobar_load, khobar_resources, price_table};
use mgsim_core::components::{BatterySpec, ConverterSpec, GensetSpec, PvSpec, WindSpec};
use mgsim_core::dispatch::{simulate_year, Strategy, SystemConfig};
use mgsim_core::economics::{system_summary, PriceTable};

fn fleet() -> SystemConfig<f64> {
    SystemConfig {
        n_pv: 714,
        n_wt: 67,
        n_batt: 1059,
        pv: PvSpec::default_unit(),
        wind: WindSpec::default_small_turbine(),
        battery: BatterySpec::default_unit(),
        genset: GensetSpec::with_rating(490.0),
        converter: ConverterSpec::with_rating(331.0),
        strategy: Strategy::LoadFollowing,
        air_density: 1.225,
    }
}

fn doubled(prices: &PriceTable<f64>) -> PriceTable<f64> {
    let mut out = prices.clone();
    for costs in [&mut out.pv, &mut out.wind, &mut out.battery, &mut out.genset, &mut out.converter] {
        costs.capital *= 2.0;
        costs.replacement *= 2.0;
        costs.om_per_year *= 2.0;
    }
    out
}

#[test]
fn lcoe_closure_and_operating_identity() {
    let cfg = fleet();
    let dispatch = simulate_year(&cfg, &khobar_resources(42), &khobar_load(42), 1.0).unwrap();
    let fin = finance();
    let summary = system_summary(&cfg, &dispatch, &price_table(), &fin).unwrap();

    let closure = summary.lcoe_per_kwh * summary.served_kwh_per_year - summary.npc * summary.crf;
    assert!(closure.abs() < 1e-9 * summary.npc, "closure residual {closure}");

    let operating = (summary.npc - summary.system.capital_pv) * summary.crf;
    assert!((operating - summary.operating_cost_per_year).abs() < 1e-9 * operating.abs().max(1.0));

    // System row equals the column sums of the component rows.
    let mut capital = 0.0;
    let mut total = 0.0;
    for row in &summary.rows {
        capital += row.costs.capital_pv;
        total += row.costs.total_pv;
    }
    assert!((capital - summary.system.capital_pv).abs() < 1.0);
    assert!((total - summary.npc).abs() < 1.0);
}

#[test]
fn npc_and_lcoe_are_homogeneous_in_prices() {
    // Fuel price must double too: it scales the fuel column.
    let mut cfg = fleet();
    let dispatch = simulate_year(&cfg, &khobar_resources(7), &khobar_load(7), 1.0).unwrap();
    let fin = finance();
    let base = system_summary(&cfg, &dispatch, &price_table(), &fin).unwrap();

    cfg.genset.fuel_price_per_l *= 2.0;
    let scaled = system_summary(&cfg, &dispatch, &doubled(&price_table()), &fin).unwrap();

    assert!((scaled.npc - 2.0 * base.npc).abs() < 1e-6 * base.npc, "{} vs {}", scaled.npc, base.npc);
    assert!((scaled.lcoe_per_kwh - 2.0 * base.lcoe_per_kwh).abs() < 1e-9);
    assert!((scaled.operating_cost_per_year - 2.0 * base.operating_cost_per_year).abs() < 1e-6);
}
