//! Scalar abstraction: every model in this crate is generic over the float
//! width so the same code runs in `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the simulator.
pub trait Float:
    num_traits::Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must be representable")
    }

    /// Widens to `f64` (lossless for both supported widths in practice).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float widens to f64")
    }
}

impl Float for f32 {}
impl Float for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        assert_eq!(f64::of(0.97), 0.97);
        assert_eq!(f32::of(0.5), 0.5f32);
        assert_eq!(0.25f32.as_f64(), 0.25);
    }
}
