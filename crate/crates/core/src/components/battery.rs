//! Aggregated battery bank: energy bookkeeping in kWh with the round-trip
//! efficiency split evenly between the charge and discharge directions.

use crate::error::{Error, Result};
use crate::float::Float;

/// Per-unit storage parameters.
#[derive(Debug, Clone)]
pub struct BatterySpec<T> {
    /// Nominal capacity of one unit [kWh].
    pub unit_capacity_kwh: T,
    /// Nominal voltage of one unit [V]; informational.
    pub nominal_voltage: T,
    /// Round-trip efficiency in (0, 1].
    pub roundtrip_efficiency: T,
    /// Lowest allowed state of charge, as a fraction of capacity.
    pub soc_min: T,
    /// Highest allowed state of charge, as a fraction of capacity.
    pub soc_max: T,
    /// Self-discharge per hour, as a fraction of stored energy.
    pub self_discharge_per_hour: T,
    /// Charge power limit of one unit [kW].
    pub max_charge_kw_per_unit: T,
    /// Discharge power limit of one unit [kW].
    pub max_discharge_kw_per_unit: T,
}

/// Stored energy of the whole bank [kWh].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryState<T> {
    pub stored_kwh: T,
}

impl<T: Float> BatterySpec<T> {
    /// A 2 kWh, 12 V unit at 97% round-trip efficiency with a 1C power
    /// limit and a 20% floor.
    pub fn default_unit() -> Self {
        Self {
            unit_capacity_kwh: T::of(2.0),
            nominal_voltage: T::of(12.0),
            roundtrip_efficiency: T::of(0.97),
            soc_min: T::of(0.20),
            soc_max: T::one(),
            self_discharge_per_hour: T::zero(),
            max_charge_kw_per_unit: T::of(2.0),
            max_discharge_kw_per_unit: T::of(2.0),
        }
    }

    /// Efficiency applied per direction so that a full round trip returns
    /// exactly the round-trip figure.
    pub fn one_way_efficiency(&self) -> T {
        self.roundtrip_efficiency.sqrt()
    }

    pub fn bank_capacity_kwh(&self, n_units: u32) -> T {
        self.unit_capacity_kwh * T::of(n_units as f64)
    }

    /// Allowed stored-energy window of the bank [kWh].
    pub fn bounds_kwh(&self, n_units: u32) -> (T, T) {
        let cap = self.bank_capacity_kwh(n_units);
        (self.soc_min * cap, self.soc_max * cap)
    }

    /// Bank state at the given state-of-charge fraction.
    pub fn initial_state(&self, n_units: u32, soc: T) -> Result<BatteryState<T>> {
        if soc < self.soc_min || soc > self.soc_max {
            return Err(Error::OutOfRange {
                context: "initial state of charge",
                value: soc.as_f64(),
                min: self.soc_min.as_f64(),
                max: self.soc_max.as_f64(),
            });
        }
        Ok(BatteryState { stored_kwh: self.bank_capacity_kwh(n_units) * soc })
    }

    fn check_state(&self, n_units: u32, state: BatteryState<T>) -> Result<T> {
        let (lo, hi) = self.bounds_kwh(n_units);
        let slack = T::of(1e-9).max(hi * T::of(1e-12));
        if state.stored_kwh < lo - slack || state.stored_kwh > hi + slack {
            return Err(Error::SocOutOfBounds {
                stored_kwh: state.stored_kwh.as_f64(),
                min_kwh: lo.as_f64(),
                max_kwh: hi.as_f64(),
            });
        }
        Ok(state.stored_kwh.max(lo).min(hi))
    }

    /// Largest terminal power [kW] the bank can absorb over `dt` hours,
    /// starting from `state`.
    pub fn max_charge_kw(&self, n_units: u32, state: BatteryState<T>, dt: T) -> T {
        if n_units == 0 || dt <= T::zero() {
            return T::zero();
        }
        let (_, hi) = self.bounds_kwh(n_units);
        let stored = self.after_self_discharge(state.stored_kwh, dt);
        let headroom = (hi - stored).max(T::zero());
        let rate = self.max_charge_kw_per_unit * T::of(n_units as f64);
        rate.min(headroom / (self.one_way_efficiency() * dt))
    }

    /// Largest terminal power [kW] the bank can deliver over `dt` hours,
    /// starting from `state`.
    pub fn max_discharge_kw(&self, n_units: u32, state: BatteryState<T>, dt: T) -> T {
        if n_units == 0 || dt <= T::zero() {
            return T::zero();
        }
        let (lo, _) = self.bounds_kwh(n_units);
        let stored = self.after_self_discharge(state.stored_kwh, dt);
        let available = (stored - lo).max(T::zero());
        let rate = self.max_discharge_kw_per_unit * T::of(n_units as f64);
        rate.min(available * self.one_way_efficiency() / dt)
    }

    fn after_self_discharge(&self, stored: T, dt: T) -> T {
        stored * (T::one() - self.self_discharge_per_hour * dt)
    }

    /// Advances the bank by `dt` hours under a signed terminal power
    /// request: positive offers charge, negative requests discharge.
    ///
    /// Returns the new state plus the terminal power actually accepted
    /// (charging) and delivered (discharging); both are clamped by the per
    /// unit power limits and the stored-energy window, so the result never
    /// leaves the allowed band.
    pub fn step(
        &self,
        n_units: u32,
        state: BatteryState<T>,
        net_dc_kw: T,
        dt: T,
    ) -> Result<(BatteryState<T>, T, T)> {
        let stored = self.check_state(n_units, state)?;
        if n_units == 0 || dt <= T::zero() {
            return Ok((BatteryState { stored_kwh: stored }, T::zero(), T::zero()));
        }
        let eta = self.one_way_efficiency();
        let after_sd = self.after_self_discharge(stored, dt);
        let (lo, hi) = self.bounds_kwh(n_units);

        if net_dc_kw > T::zero() {
            let accepted = net_dc_kw.min(self.max_charge_kw(n_units, state, dt));
            let stored_next = (after_sd + accepted * eta * dt).min(hi);
            Ok((BatteryState { stored_kwh: stored_next }, accepted, T::zero()))
        } else if net_dc_kw < T::zero() {
            let delivered = (-net_dc_kw).min(self.max_discharge_kw(n_units, state, dt));
            let stored_next = (after_sd - delivered * dt / eta).max(lo);
            Ok((BatteryState { stored_kwh: stored_next }, T::zero(), delivered))
        } else {
            Ok((BatteryState { stored_kwh: after_sd.max(lo) }, T::zero(), T::zero()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> BatterySpec<f64> {
        BatterySpec::default_unit()
    }

    #[test]
    fn charge_case_single_unit() {
        // 1.0 kWh + 0.5 kW * sqrt(0.97) * 1 h = 1.49244 kWh.
        let s = spec();
        let state = BatteryState { stored_kwh: 1.0 };
        let (next, accepted, delivered) = s.step(1, state, 0.5, 1.0).unwrap();
        assert!((next.stored_kwh - 1.4924428900898052).abs() < 1e-12, "{}", next.stored_kwh);
        assert_eq!(accepted, 0.5);
        assert_eq!(delivered, 0.0);
    }

    #[test]
    fn idle_step_without_self_discharge_is_identity() {
        let s = spec();
        let state = BatteryState { stored_kwh: 1.3 };
        let (next, a, d) = s.step(1, state, 0.0, 1.0).unwrap();
        assert_eq!(next.stored_kwh, 1.3);
        assert_eq!((a, d), (0.0, 0.0));
    }

    #[test]
    fn discharge_clamps_at_floor() {
        let s = spec();
        let state = BatteryState { stored_kwh: 0.6 };
        // Above the 0.4 kWh floor there is 0.2 kWh; a huge request clamps.
        let (next, _, delivered) = s.step(1, state, -50.0, 1.0).unwrap();
        assert!((next.stored_kwh - 0.4).abs() < 1e-12, "{}", next.stored_kwh);
        assert!((delivered - 0.2 * s.one_way_efficiency()).abs() < 1e-12);
    }

    #[test]
    fn charge_clamps_at_ceiling() {
        let s = spec();
        let state = BatteryState { stored_kwh: 1.9 };
        let (next, accepted, _) = s.step(1, state, 50.0, 1.0).unwrap();
        assert!((next.stored_kwh - 2.0).abs() < 1e-12);
        assert!((accepted - 0.1 / s.one_way_efficiency()).abs() < 1e-12);
    }

    #[test]
    fn power_limit_applies_per_unit() {
        let s = spec();
        // 100 units at 1C on 2 kWh: 200 kW cap. A half-hour step from the
        // floor has plenty of headroom, so the rate limit binds.
        let state = BatteryState { stored_kwh: 40.0 };
        let (_, accepted, _) = s.step(100, state, 1000.0, 0.5).unwrap();
        assert_eq!(accepted, 200.0);
        let full = BatteryState { stored_kwh: 200.0 };
        let (_, _, delivered) = s.step(100, full, -1000.0, 0.5).unwrap();
        assert_eq!(delivered, 200.0);
    }

    #[test]
    fn rejects_state_outside_bounds() {
        let s = spec();
        assert!(matches!(
            s.step(1, BatteryState { stored_kwh: 2.5 }, 0.0, 1.0),
            Err(Error::SocOutOfBounds { .. })
        ));
        assert!(matches!(
            s.step(1, BatteryState { stored_kwh: 0.1 }, 0.0, 1.0),
            Err(Error::SocOutOfBounds { .. })
        ));
    }

    #[test]
    fn round_trip_returns_roundtrip_efficiency() {
        let s = spec();
        let n = 5;
        let (lo, _) = s.bounds_kwh(n);
        let mut state = BatteryState { stored_kwh: lo };
        // Push in X kWh at the terminals over several hours.
        let x = 4.0;
        let (next, accepted, _) = s.step(n, state, x, 1.0).unwrap();
        assert_eq!(accepted, x);
        state = next;
        // Draw everything back out.
        let mut recovered = 0.0;
        for _ in 0..10 {
            let (next, _, delivered) = s.step(n, state, -100.0, 1.0).unwrap();
            recovered += delivered;
            state = next;
        }
        assert!((recovered - x * s.roundtrip_efficiency).abs() < 1e-9, "{recovered}");
        assert!((state.stored_kwh - lo).abs() < 1e-9);
    }

    #[test]
    fn energy_accounting_matches_terminal_flows() {
        let s = spec();
        let n = 3;
        let state = BatteryState { stored_kwh: 3.0 };
        let (next, accepted, _) = s.step(n, state, 1.5, 1.0).unwrap();
        assert!((next.stored_kwh - 3.0 - accepted * s.one_way_efficiency()).abs() < 1e-12);
        let (after, _, delivered) = s.step(n, next, -2.0, 1.0).unwrap();
        assert!((next.stored_kwh - after.stored_kwh - delivered / s.one_way_efficiency()).abs() < 1e-12);
    }

    #[test]
    fn bounds_hold_over_random_steps() {
        let s = spec();
        let n = 7;
        let (lo, hi) = s.bounds_kwh(n);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut state = s.initial_state(n, 0.6).unwrap();
        for _ in 0..100_000 {
            let net = rng.gen_range(-30.0..30.0);
            let (next, accepted, delivered) = s.step(n, state, net, 1.0).unwrap();
            assert!(next.stored_kwh >= lo - 1e-9 && next.stored_kwh <= hi + 1e-9);
            assert!(accepted >= 0.0 && delivered >= 0.0);
            assert!(accepted <= net.max(0.0) + 1e-12);
            assert!(delivered <= (-net).max(0.0) + 1e-12);
            state = next;
        }
    }

    #[test]
    fn self_discharge_decays_idle_bank() {
        let mut s = spec();
        s.self_discharge_per_hour = 0.001;
        let state = BatteryState { stored_kwh: 2.0 };
        let (next, _, _) = s.step(1, state, 0.0, 1.0).unwrap();
        assert!((next.stored_kwh - 1.998).abs() < 1e-12);
    }

    #[test]
    fn zero_units_is_inert() {
        let s = spec();
        let state = BatteryState { stored_kwh: 0.0 };
        let (next, a, d) = s.step(0, state, 10.0, 1.0).unwrap();
        assert_eq!((next.stored_kwh, a, d), (0.0, 0.0, 0.0));
    }
}
