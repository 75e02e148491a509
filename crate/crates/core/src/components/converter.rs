//! Bidirectional DC/AC converter. Throughput is clamped at the rating on
//! the input side; the surplus stays with the caller rather than being
//! lost silently.

use crate::float::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowDirection {
    DcToAc,
    AcToDc,
}

#[derive(Debug, Clone)]
pub struct ConverterSpec<T> {
    /// Rated throughput [kW].
    pub rated_kw: T,
    /// Conversion efficiency in (0, 1], equal in both directions.
    pub efficiency: T,
}

impl<T: Float> ConverterSpec<T> {
    pub fn with_rating(rated_kw: T) -> Self {
        Self { rated_kw, efficiency: T::of(0.97) }
    }
}

/// Power delivered on the far side [kW] when `offered_kw` is pushed in.
/// Input beyond the rating is not taken; the caller keeps the difference
/// between `offered_kw` and `min(offered_kw, rated_kw)` on the source side.
pub fn converter_flow<T: Float>(spec: &ConverterSpec<T>, _direction: FlowDirection, offered_kw: T) -> T {
    offered_kw.min(spec.rated_kw).max(T::zero()) * spec.efficiency
}

/// Converter rating needed to pass a given peak load at the given
/// efficiency.
pub fn converter_sizing_hint<T: Float>(peak_load_kw: T, efficiency: T) -> T {
    peak_load_kw / efficiency
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ConverterSpec<f64> {
        ConverterSpec::with_rating(331.0)
    }

    #[test]
    fn within_rating_only_efficiency_applies() {
        let out = converter_flow(&spec(), FlowDirection::DcToAc, 100.0);
        assert!((out - 97.0).abs() < 1e-12);
    }

    #[test]
    fn zero_in_zero_out() {
        assert_eq!(converter_flow(&spec(), FlowDirection::AcToDc, 0.0), 0.0);
    }

    #[test]
    fn overload_clamps_to_rating() {
        let out = converter_flow(&spec(), FlowDirection::DcToAc, 500.0);
        assert!((out - 331.0 * 0.97).abs() < 1e-12, "{out}");
    }

    #[test]
    fn never_exceeds_rating_times_efficiency() {
        let s = spec();
        for offered in [0.0, 1.0, 330.9, 331.0, 331.1, 1e6] {
            let out = converter_flow(&s, FlowDirection::DcToAc, offered);
            assert!(out <= s.rated_kw * s.efficiency + 1e-12);
        }
    }

    #[test]
    fn sizing_hint_cases() {
        let hint: f64 = converter_sizing_hint(390.41, 0.97);
        assert!((hint - 402.48).abs() < 0.05, "{hint}");
        assert_eq!(converter_sizing_hint(250.0, 1.0), 250.0);
        assert_eq!(converter_sizing_hint(0.0, 0.97), 0.0);
    }
}
