//! Diesel genset with an affine fuel curve and a minimum-load floor.

use crate::float::Float;

#[derive(Debug, Clone)]
pub struct GensetSpec<T> {
    /// Rated electrical output [kW].
    pub rated_kw: T,
    /// Fraction of rating below which the engine will not run.
    pub min_load_ratio: T,
    /// Fuel curve intercept [L/h per rated kW].
    pub fuel_intercept_l_per_h_per_kw: T,
    /// Fuel curve slope [L per delivered kWh].
    pub fuel_slope_l_per_kwh: T,
    /// Operating life [h].
    pub lifetime_hours: T,
    /// Diesel price [$/L].
    pub fuel_price_per_l: T,
}

impl<T: Float> GensetSpec<T> {
    pub fn with_rating(rated_kw: T) -> Self {
        Self {
            rated_kw,
            min_load_ratio: T::of(0.25),
            fuel_intercept_l_per_h_per_kw: T::of(0.08145),
            fuel_slope_l_per_kwh: T::of(0.246),
            lifetime_hours: T::of(15_000.0),
            fuel_price_per_l: T::of(0.168),
        }
    }

    pub fn min_output_kw(&self) -> T {
        self.min_load_ratio * self.rated_kw
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GensetOutput<T> {
    pub delivered_kw: T,
    pub fuel_l_per_h: T,
    pub running: bool,
}

/// Runs the genset for one step. A zero request keeps the engine off;
/// otherwise the output is clamped between the minimum-load floor and the
/// rating, and fuel follows the affine curve on the delivered power.
pub fn genset_step<T: Float>(spec: &GensetSpec<T>, requested_kw: T) -> GensetOutput<T> {
    if requested_kw <= T::zero() || spec.rated_kw <= T::zero() {
        return GensetOutput { delivered_kw: T::zero(), fuel_l_per_h: T::zero(), running: false };
    }
    let delivered = requested_kw.max(spec.min_output_kw()).min(spec.rated_kw);
    let fuel = spec.fuel_intercept_l_per_h_per_kw * spec.rated_kw + spec.fuel_slope_l_per_kwh * delivered;
    GensetOutput { delivered_kw: delivered, fuel_l_per_h: fuel, running: true }
}
