//! Pollutant accounting for diesel combustion and grid purchases across
//! six tracked species.

use serde::Serialize;

use crate::float::Float;

/// The six tracked pollutant species.
pub const SPECIES: [&str; 6] = ["co2", "co", "uhc", "pm", "so2", "nox"];

/// Mass per species, in whatever unit the context defines (kg/yr in
/// reports, kg per activity unit in factor tables).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeciesAmounts<T> {
    pub co2: T,
    pub co: T,
    pub uhc: T,
    pub pm: T,
    pub so2: T,
    pub nox: T,
}

impl<T: Float> SpeciesAmounts<T> {
    pub fn zero() -> Self {
        Self { co2: T::zero(), co: T::zero(), uhc: T::zero(), pm: T::zero(), so2: T::zero(), nox: T::zero() }
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            co2: self.co2 * factor,
            co: self.co * factor,
            uhc: self.uhc * factor,
            pm: self.pm * factor,
            so2: self.so2 * factor,
            nox: self.nox * factor,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            co2: self.co2 + other.co2,
            co: self.co + other.co,
            uhc: self.uhc + other.uhc,
            pm: self.pm + other.pm,
            so2: self.so2 + other.so2,
            nox: self.nox + other.nox,
        }
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.co2, self.co, self.uhc, self.pm, self.so2, self.nox]
    }
}

/// Emission factors: kg per liter of diesel for the genset, kg per kWh
/// purchased for the grid.
#[derive(Debug, Clone)]
pub struct EmissionFactors<T> {
    pub genset_kg_per_l: SpeciesAmounts<T>,
    pub grid_kg_per_kwh: SpeciesAmounts<T>,
}

impl<T: Float> EmissionFactors<T> {
    /// Defaults for a small diesel genset and a fossil-heavy grid mix.
    pub fn default_factors() -> Self {
        Self {
            genset_kg_per_l: SpeciesAmounts {
                co2: T::of(2.618),
                co: T::of(0.0165),
                uhc: T::of(0.00072),
                pm: T::of(0.00010),
                so2: T::of(0.00641),
                nox: T::of(0.01551),
            },
            grid_kg_per_kwh: SpeciesAmounts {
                co2: T::of(0.632),
                co: T::zero(),
                uhc: T::zero(),
                pm: T::zero(),
                so2: T::of(0.00274),
                nox: T::of(0.00134),
            },
        }
    }
}

/// Annual emissions split by source.
#[derive(Debug, Clone, Serialize)]
pub struct EmissionsReport<T> {
    pub genset_kg_per_year: SpeciesAmounts<T>,
    pub grid_kg_per_year: SpeciesAmounts<T>,
    pub total_kg_per_year: SpeciesAmounts<T>,
}

impl<T: Float> EmissionsReport<T> {
    pub fn zero() -> Self {
        Self {
            genset_kg_per_year: SpeciesAmounts::zero(),
            grid_kg_per_year: SpeciesAmounts::zero(),
            total_kg_per_year: SpeciesAmounts::zero(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            genset_kg_per_year: self.genset_kg_per_year.plus(&other.genset_kg_per_year),
            grid_kg_per_year: self.grid_kg_per_year.plus(&other.grid_kg_per_year),
            total_kg_per_year: self.total_kg_per_year.plus(&other.total_kg_per_year),
        }
    }
}

/// Emissions of burning `fuel_l_per_year` liters of diesel per year.
pub fn genset_emissions<T: Float>(fuel_l_per_year: T, factors: &EmissionFactors<T>) -> EmissionsReport<T> {
    let genset = factors.genset_kg_per_l.scale(fuel_l_per_year.max(T::zero()));
    EmissionsReport {
        genset_kg_per_year: genset,
        grid_kg_per_year: SpeciesAmounts::zero(),
        total_kg_per_year: genset,
    }
}

/// Emissions attributed to `kwh_per_year` of grid purchases per year.
pub fn grid_emissions<T: Float>(kwh_per_year: T, factors: &EmissionFactors<T>) -> EmissionsReport<T> {
    let grid = factors.grid_kg_per_kwh.scale(kwh_per_year.max(T::zero()));
    EmissionsReport {
        genset_kg_per_year: SpeciesAmounts::zero(),
        grid_kg_per_year: grid,
        total_kg_per_year: grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors() -> EmissionFactors<f64> {
        EmissionFactors::default_factors()
    }

    #[test]
    fn genset_species_at_reference_fuel_burn() {
        let report = genset_emissions(11_281.7, &factors());
        let g = report.genset_kg_per_year;
        assert!((g.co2 - 29_530.0).abs() <= 0.01 * 29_530.0, "co2 {}", g.co2);
        assert!((g.co - 186.0).abs() <= 0.01 * 186.0, "co {}", g.co);
        assert!((g.uhc - 8.12).abs() <= 0.01 * 8.12, "uhc {}", g.uhc);
        assert!((g.pm - 1.13).abs() <= 0.01 * 1.13, "pm {}", g.pm);
        assert!((g.so2 - 72.3).abs() <= 0.01 * 72.3, "so2 {}", g.so2);
        assert!((g.nox - 175.0).abs() <= 0.01 * 175.0, "nox {}", g.nox);
    }

    #[test]
    fn zero_fuel_means_zero_emissions() {
        let report = genset_emissions(0.0, &factors());
        assert_eq!(report.total_kg_per_year, SpeciesAmounts::zero());
    }

    #[test]
    fn grid_species_at_reference_purchase() {
        let report = grid_emissions(884_833.0, &factors());
        let g = report.grid_kg_per_year;
        assert!((g.co2 - 559_226.0).abs() <= 0.005 * 559_226.0, "co2 {}", g.co2);
        assert!((g.so2 - 2_424.0).abs() <= 0.005 * 2_424.0, "so2 {}", g.so2);
        assert!((g.nox - 1_186.0).abs() <= 0.005 * 1_186.0, "nox {}", g.nox);
        assert_eq!(g.co, 0.0);
    }

    #[test]
    fn reports_are_additive_in_activity() {
        let f = factors();
        let a = genset_emissions(4000.0, &f);
        let b = genset_emissions(7281.7, &f);
        let whole = genset_emissions(11_281.7, &f);
        let sum = a.plus(&b);
        for (s, w) in sum.total_kg_per_year.as_array().iter().zip(whole.total_kg_per_year.as_array()) {
            assert!((s - w).abs() < 1e-9 * w.max(1.0));
        }
    }

    #[test]
    fn species_ratios_constant_across_activity() {
        let f = factors();
        let a = genset_emissions(11_281.7, &f).genset_kg_per_year;
        let b = genset_emissions(14_489.0, &f).genset_kg_per_year;
        assert!((a.co / a.co2 - b.co / b.co2).abs() < 1e-12);
    }
}
