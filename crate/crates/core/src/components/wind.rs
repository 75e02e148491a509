//! Wind turbine: power-law shear extrapolation to hub height, a tabulated
//! power curve, and an air-density correction on the curve output.

use crate::error::{Error, Result};
use crate::float::Float;

/// Normalized turbine power curve: ordered `(speed m/s, fraction of rating)`
/// points, linearly interpolated. Speeds outside the table map to zero.
#[derive(Debug, Clone)]
pub struct PowerCurve<T> {
    points: Vec<(T, T)>,
}

impl<T: Float> PowerCurve<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::PowerCurve("need at least two points".into()));
        }
        let mut max_fraction = T::zero();
        for (i, (speed, fraction)) in points.iter().enumerate() {
            if !speed.is_finite() || *speed < T::zero() {
                return Err(Error::PowerCurve(format!("point {i}: bad speed {speed}")));
            }
            if !fraction.is_finite() || *fraction < T::zero() || *fraction > T::one() {
                return Err(Error::PowerCurve(format!(
                    "point {i}: fraction {fraction} outside [0, 1]"
                )));
            }
            if i > 0 && *speed <= points[i - 1].0 {
                return Err(Error::PowerCurve(format!(
                    "point {i}: speeds must be strictly increasing"
                )));
            }
            max_fraction = max_fraction.max(*fraction);
        }
        if points.first().unwrap().1 != T::zero() {
            return Err(Error::PowerCurve("first point must have fraction 0 (cut-in)".into()));
        }
        if points.last().unwrap().1 != T::zero() {
            return Err(Error::PowerCurve("last point must have fraction 0 (cut-out)".into()));
        }
        if (max_fraction - T::one()).abs() > T::of(1e-9) {
            return Err(Error::PowerCurve("curve must reach fraction 1 at rated speed".into()));
        }
        Ok(Self { points })
    }

    /// Cubic rise between cut-in and rated, flat at rating until cut-out,
    /// with a sharp drop to zero at cut-out.
    pub fn small_turbine(cut_in: T, rated: T, cut_out: T) -> Self {
        let mut points = vec![(T::zero(), T::zero()), (cut_in, T::zero())];
        let steps = 18usize;
        let ci3 = cut_in.powi(3);
        let denom = rated.powi(3) - ci3;
        for k in 1..steps {
            let u = cut_in + (rated - cut_in) * T::of(k as f64 / steps as f64);
            points.push((u, (u.powi(3) - ci3) / denom));
        }
        points.push((rated, T::one()));
        let eps = T::of(0.01);
        points.push((cut_out - eps, T::one()));
        points.push((cut_out, T::zero()));
        Self::new(points).expect("built-in curve is valid")
    }

    /// Default curve for a small 3 kW class machine: cut-in 3 m/s, rated
    /// 12 m/s, cut-out 24 m/s.
    pub fn default_small_turbine() -> Self {
        Self::small_turbine(T::of(3.0), T::of(12.0), T::of(24.0))
    }

    /// Parses a `speed_ms,fraction` CSV with strictly increasing speeds.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default().trim();
        if header != "speed_ms,fraction" {
            return Err(Error::HeaderMismatch { got: header.to_string(), expected: "speed_ms,fraction" });
        }
        let mut points = Vec::new();
        for (idx, raw) in lines.enumerate() {
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let (s, f) = row
                .split_once(',')
                .ok_or_else(|| Error::PowerCurve(format!("row {}: expected two fields", idx + 1)))?;
            let speed: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::PowerCurve(format!("row {}: bad speed {s:?}", idx + 1)))?;
            let fraction: f64 = f
                .trim()
                .parse()
                .map_err(|_| Error::PowerCurve(format!("row {}: bad fraction {f:?}", idx + 1)))?;
            points.push((T::of(speed), T::of(fraction)));
        }
        Self::new(points)
    }

    /// Fraction of rated power at the given hub-height wind speed.
    pub fn fraction_at(&self, speed: T) -> T {
        let first = self.points.first().unwrap();
        let last = self.points.last().unwrap();
        if speed <= first.0 || speed >= last.0 {
            return if speed == last.0 { last.1 } else { T::zero() };
        }
        for pair in self.points.windows(2) {
            let (s0, f0) = pair[0];
            let (s1, f1) = pair[1];
            if speed <= s1 {
                let t = (speed - s0) / (s1 - s0);
                return f0 + (f1 - f0) * t;
            }
        }
        T::zero()
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }
}

/// One turbine model plus the shear and density context it operates in.
#[derive(Debug, Clone)]
pub struct WindSpec<T> {
    /// Nameplate rating of one unit [kW].
    pub unit_rating_kw: T,
    /// Hub height [m].
    pub hub_height_m: T,
    /// Height of the wind measurement [m].
    pub anemometer_height_m: T,
    /// Power-law shear exponent.
    pub shear_exponent: T,
    pub curve: PowerCurve<T>,
    /// Air density the curve was measured at [kg/m3].
    pub air_density_ref: T,
}

impl<T: Float> WindSpec<T> {
    /// The default 3 kW machine on a 12 m tower, 10 m anemometer,
    /// open-terrain shear 1/7.
    pub fn default_small_turbine() -> Self {
        Self {
            unit_rating_kw: T::of(3.0),
            hub_height_m: T::of(12.0),
            anemometer_height_m: T::of(10.0),
            shear_exponent: T::of(1.0 / 7.0),
            curve: PowerCurve::default_small_turbine(),
            air_density_ref: T::of(1.225),
        }
    }

    /// Wind speed at this spec's hub height from an anemometer reading.
    pub fn hub_speed(&self, u_anem: T) -> Result<T> {
        hub_wind_speed(u_anem, self.anemometer_height_m, self.hub_height_m, self.shear_exponent)
    }
}

/// Power-law vertical extrapolation of wind speed.
pub fn hub_wind_speed<T: Float>(u_anem: T, z_anem: T, z_hub: T, alpha: T) -> Result<T> {
    if z_anem <= T::zero() || z_hub <= T::zero() {
        return Err(Error::OutOfRange {
            context: "wind measurement height",
            value: z_anem.min(z_hub).as_f64(),
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    Ok(u_anem * (z_hub / z_anem).powf(alpha))
}

/// Fleet output [kW] of `n_units` turbines at hub-height speed `u_hub`,
/// corrected by the ratio of actual to reference air density.
pub fn turbine_power<T: Float>(spec: &WindSpec<T>, n_units: u32, u_hub: T, air_density: T) -> T {
    if n_units == 0 {
        return T::zero();
    }
    let fraction = spec.curve.fraction_at(u_hub);
    T::of(n_units as f64) * spec.unit_rating_kw * fraction * (air_density / spec.air_density_ref)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hub_speed_identity_cases() {
        assert_eq!(hub_wind_speed::<f64>(6.2, 10.0, 10.0, 1.0 / 7.0).unwrap(), 6.2);
        assert_eq!(hub_wind_speed::<f64>(6.2, 10.0, 80.0, 0.0).unwrap(), 6.2);
    }

    #[test]
    fn hub_speed_case_study_tower() {
        // 5.61 * 1.2^(1/7)
        let u = hub_wind_speed::<f64>(5.61, 10.0, 12.0, 1.0 / 7.0).unwrap();
        assert!((u - 5.758).abs() < 1e-3, "{u}");
    }

    #[test]
    fn hub_speed_rejects_bad_heights() {
        assert!(hub_wind_speed::<f64>(5.0, 0.0, 12.0, 0.14).is_err());
        assert!(hub_wind_speed::<f64>(5.0, 10.0, -1.0, 0.14).is_err());
    }

    #[test]
    fn curve_zero_below_cut_in_and_beyond_cut_out() {
        let spec: WindSpec<f64> = WindSpec::default_small_turbine();
        for u in [0.0, 1.0, 2.9, 3.0] {
            assert_eq!(turbine_power(&spec, 1, u, 1.225), 0.0, "u = {u}");
        }
        for u in [24.0, 25.0, 40.0] {
            assert_eq!(turbine_power(&spec, 1, u, 1.225), 0.0, "u = {u}");
        }
    }

    #[test]
    fn rated_speed_delivers_rating() {
        let spec: WindSpec<f64> = WindSpec::default_small_turbine();
        let p = turbine_power(&spec, 1, 12.0, 1.225);
        assert!((p - 3.0).abs() < 1e-12, "{p}");
    }

    #[test]
    fn density_ratio_scales_output() {
        let spec: WindSpec<f64> = WindSpec::default_small_turbine();
        let p = turbine_power(&spec, 1, 12.0, 1.1025);
        assert!((p - 2.7).abs() < 1e-12, "{p}");
    }

    #[test]
    fn curve_monotone_between_cut_in_and_rated() {
        let curve: PowerCurve<f64> = PowerCurve::default_small_turbine();
        let mut last = -1.0;
        let mut u = 3.0;
        while u <= 12.0 {
            let f = curve.fraction_at(u);
            assert!(f >= last - 1e-12, "dip at {u}");
            last = f;
            u += 0.05;
        }
        assert!((curve.fraction_at(12.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fleet_scales_linearly() {
        let spec: WindSpec<f64> = WindSpec::default_small_turbine();
        let one = turbine_power(&spec, 1, 8.0, 1.225);
        let sixty_seven = turbine_power(&spec, 67, 8.0, 1.225);
        assert!((sixty_seven - 67.0 * one).abs() < 1e-9);
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let text = "speed_ms,fraction\n0,0\n3,0\n7.5,0.4\n12,1\n23.9,1\n24,0\n";
        let curve: PowerCurve<f64> = PowerCurve::parse_csv(text).unwrap();
        assert!((curve.fraction_at(7.5) - 0.4).abs() < 1e-12);

        let unsorted = "speed_ms,fraction\n0,0\n3,0\n2,0.5\n12,1\n24,0\n";
        assert!(PowerCurve::<f64>::parse_csv(unsorted).is_err());

        let out_of_range = "speed_ms,fraction\n0,0\n12,1.5\n24,0\n";
        assert!(PowerCurve::<f64>::parse_csv(out_of_range).is_err());

        let never_rated = "speed_ms,fraction\n0,0\n12,0.8\n24,0\n";
        assert!(PowerCurve::<f64>::parse_csv(never_rated).is_err());
    }
}
