//! Flat-plate PV array: rated output derated for real-world losses and
//! corrected for cell temperature.

use crate::float::Float;

/// Per-unit PV module parameters.
#[derive(Debug, Clone)]
pub struct PvSpec<T> {
    /// Nameplate rating of one unit [kW].
    pub unit_rating_kw: T,
    /// Derating factor covering soiling, wiring, and aging, in (0, 1].
    pub derating: T,
    /// Power temperature coefficient [1/C], negative for silicon.
    pub temp_coeff_per_c: T,
    /// Nominal operating cell temperature [C].
    pub noct_c: T,
    /// Cell temperature at standard test conditions [C].
    pub ref_cell_temp_c: T,
    /// Irradiance at standard test conditions [kW/m2].
    pub ref_irradiance_kw_m2: T,
}

impl<T: Float> PvSpec<T> {
    /// A 1 kW unit with typical crystalline-silicon parameters.
    pub fn default_unit() -> Self {
        Self {
            unit_rating_kw: T::one(),
            derating: T::of(0.8),
            temp_coeff_per_c: T::of(-0.0034),
            noct_c: T::of(43.0),
            ref_cell_temp_c: T::of(25.0),
            ref_irradiance_kw_m2: T::one(),
        }
    }
}

/// Cell temperature [C] from ambient temperature and plane-of-array
/// irradiance [W/m2], via the NOCT linear model.
pub fn cell_temperature<T: Float>(ambient_c: T, noct_c: T, irradiance_w_m2: T) -> T {
    ambient_c + (noct_c - T::of(20.0)) / T::of(800.0) * irradiance_w_m2
}

/// Array output [kW] of `n_units` identical units under the given
/// irradiance [kW/m2] and ambient temperature [C]. Clamped at zero: a very
/// hot cell cannot drive the array negative.
pub fn pv_power<T: Float>(spec: &PvSpec<T>, n_units: u32, ghi_kw_m2: T, ambient_c: T) -> T {
    if n_units == 0 || ghi_kw_m2 <= T::zero() {
        return T::zero();
    }
    let cell_c = cell_temperature(ambient_c, spec.noct_c, ghi_kw_m2 * T::of(1000.0));
    let temp_term = T::one() + spec.temp_coeff_per_c * (cell_c - spec.ref_cell_temp_c);
    let per_unit = spec.unit_rating_kw
        * spec.derating
        * (ghi_kw_m2 / spec.ref_irradiance_kw_m2)
        * temp_term;
    (T::of(n_units as f64) * per_unit).max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> PvSpec<f64> {
        PvSpec { derating: 1.0, ..PvSpec::default_unit() }
    }

    #[test]
    fn cell_temperature_zero_irradiance_is_ambient() {
        for noct in [40.0, 43.0, 47.0, 50.0] {
            assert_eq!(cell_temperature::<f64>(38.5, noct, 0.0), 38.5);
        }
    }

    #[test]
    fn cell_temperature_noct_case() {
        // (43 - 20) / 800 * 800 = 23 above ambient.
        assert!((cell_temperature::<f64>(25.0, 43.0, 800.0) - 48.0).abs() < 1e-12);
    }

    #[test]
    fn cell_temperature_vanishing_coefficient() {
        for g in [0.0, 250.0, 1000.0] {
            assert_eq!(cell_temperature::<f64>(30.0, 20.0, g), 30.0);
        }
    }

    #[test]
    fn stc_identity_yields_rating() {
        // Pick ambient so the cell lands exactly on the 25 C reference.
        let s = spec();
        let ambient = 25.0 - (43.0 - 20.0) / 800.0 * 1000.0;
        let p = pv_power(&s, 1, 1.0, ambient);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hot_cell_case() {
        // Ambient 30 C at 1 kW/m2: cell 58.75 C, output 0.88525 kW.
        let s = spec();
        let p = pv_power(&s, 1, 1.0, 30.0);
        assert!((p - 0.88525).abs() < 1e-10, "{p}");
    }

    #[test]
    fn zero_irradiance_zero_power() {
        assert_eq!(pv_power(&spec(), 10, 0.0, 45.0), 0.0);
    }

    #[test]
    fn output_scales_with_units_and_derating() {
        let mut s = spec();
        s.derating = 0.8;
        let one = pv_power(&s, 1, 0.7, 30.0);
        let many = pv_power(&s, 714, 0.7, 30.0);
        assert!((many - 714.0 * one).abs() < 1e-9 * many);
        assert!(one < pv_power(&spec(), 1, 0.7, 30.0));
    }

    #[test]
    fn linear_in_irradiance_at_fixed_cell_temperature() {
        // NOCT of 20 pins the cell to ambient regardless of irradiance.
        let mut s = spec();
        s.noct_c = 20.0;
        let p1 = pv_power(&s, 1, 0.25, 30.0);
        let p2 = pv_power(&s, 1, 0.5, 30.0);
        let p4 = pv_power(&s, 1, 1.0, 30.0);
        assert!((p2 - 2.0 * p1).abs() < 1e-12);
        assert!((p4 - 4.0 * p1).abs() < 1e-12);
    }

    #[test]
    fn nonincreasing_in_ambient_temperature() {
        let s = spec();
        let mut last = f64::INFINITY;
        for t in 0..60 {
            let p = pv_power(&s, 1, 0.8, t as f64);
            assert!(p <= last + 1e-15);
            last = p;
        }
    }

    #[test]
    fn clamped_at_zero_for_extreme_heat() {
        let mut s = spec();
        s.temp_coeff_per_c = -0.02;
        let p = pv_power(&s, 1, 1.0, 80.0);
        assert_eq!(p, 0.0);
    }
}
