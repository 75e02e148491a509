//! Hourly load and resource time series: ingestion, synthesis, scaling,
//! and summary statistics.
//!
//! All series cover one non-leap year at hourly resolution (8760 values).
//! Synthesis works from twelve monthly means plus a 24-hour daily shape and
//! is a pure function of its inputs and a seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::error::{Error, Result};
use crate::float::Float;

pub const HOURS_PER_YEAR: usize = 8760;
pub const HOURS_PER_DAY: usize = 24;
pub const DAYS_PER_YEAR: usize = 365;
pub const MONTHS_PER_YEAR: usize = 12;

/// Days in each month of the simulated (non-leap) year.
pub const DAYS_PER_MONTH: [usize; MONTHS_PER_YEAR] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// Physical quantity carried by a time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// Electrical demand [kW].
    LoadKw,
    /// Global horizontal irradiance [kW/m2].
    GhiKwM2,
    /// Wind speed at anemometer height [m/s].
    WindMs,
    /// Ambient air temperature [C].
    TempC,
}

impl Quantity {
    /// Temperatures may be negative; everything else may not.
    pub fn is_nonnegative(self) -> bool {
        !matches!(self, Quantity::TempC)
    }

    pub fn label(self) -> &'static str {
        match self {
            Quantity::LoadKw => "load_kw",
            Quantity::GhiKwM2 => "ghi_kw_m2",
            Quantity::WindMs => "wind_ms",
            Quantity::TempC => "temp_c",
        }
    }
}

/// One year of hourly values of a single quantity.
///
/// Construction validates length, finiteness, and sign, so a value of this
/// type is always safe to feed to the dispatch engine.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    quantity: Quantity,
    values: Vec<T>,
}

impl<T: Float> TimeSeries<T> {
    pub fn new(quantity: Quantity, values: Vec<T>) -> Result<Self> {
        if values.len() != HOURS_PER_YEAR {
            return Err(Error::SeriesLength { got: values.len(), expected: HOURS_PER_YEAR });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NumericCell {
                    line: i + 1,
                    field: quantity.label(),
                    text: format!("{v}"),
                });
            }
            if quantity.is_nonnegative() && *v < T::zero() {
                return Err(Error::NegativeValue {
                    line: i + 1,
                    quantity: quantity.label(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(Self { quantity, values })
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn hour(&self, h: usize) -> T {
        self.values[h]
    }

    pub fn mean(&self) -> T {
        self.sum() / T::of(HOURS_PER_YEAR as f64)
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + *v)
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |acc, v| acc.max(*v))
    }

    /// Mean of the hourly values within each calendar month.
    pub fn monthly_means(&self) -> [T; MONTHS_PER_YEAR] {
        let mut out = [T::zero(); MONTHS_PER_YEAR];
        let mut h = 0usize;
        for (m, days) in DAYS_PER_MONTH.iter().enumerate() {
            let n = days * HOURS_PER_DAY;
            let sum = self.values[h..h + n].iter().fold(T::zero(), |acc, v| acc + *v);
            out[m] = sum / T::of(n as f64);
            h += n;
        }
        out
    }

    /// Multiplies every value so the annual mean becomes `target_mean`.
    pub fn scale_to_mean(&self, target_mean: T) -> Result<Self> {
        let mean = self.mean();
        if mean <= T::zero() {
            return Err(Error::NonPositiveMean { mean: mean.as_f64() });
        }
        if target_mean < T::zero() {
            return Err(Error::OutOfRange {
                context: "scale_to_mean target",
                value: target_mean.as_f64(),
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        let factor = target_mean / mean;
        let values = self.values.iter().map(|v| *v * factor).collect();
        Ok(Self { quantity: self.quantity, values })
    }

    /// Summary statistics of a demand series.
    pub fn load_stats(&self) -> Result<LoadStats<T>> {
        if self.quantity != Quantity::LoadKw {
            return Err(Error::OutOfRange {
                context: "load_stats expects a load series",
                value: 0.0,
                min: 0.0,
                max: 0.0,
            });
        }
        let peak_kw = self.max();
        if peak_kw <= T::zero() {
            return Err(Error::AllZeroLoad);
        }
        let mean = self.mean();
        Ok(LoadStats {
            avg_daily_kwh: mean * T::of(24.0),
            peak_kw,
            load_factor: mean / peak_kw,
        })
    }
}

/// Demand summary: average daily energy, annual peak, and load factor.
#[derive(Debug, Clone, Copy)]
pub struct LoadStats<T> {
    pub avg_daily_kwh: T,
    pub peak_kw: T,
    /// Mean demand divided by peak demand, in (0, 1].
    pub load_factor: T,
}

/// Twelve monthly means of one quantity, in the same (intensive) units as
/// the hourly series: kW for load, kW/m2 for irradiance, m/s for wind.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyProfile<T> {
    quantity: Quantity,
    values: [T; MONTHS_PER_YEAR],
}

impl<T: Float> MonthlyProfile<T> {
    pub fn new(quantity: Quantity, values: [T; MONTHS_PER_YEAR]) -> Result<Self> {
        for (m, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NumericCell { line: m + 1, field: quantity.label(), text: format!("{v}") });
            }
            if quantity.is_nonnegative() && *v < T::zero() {
                return Err(Error::NegativeValue { line: m + 1, quantity: quantity.label(), value: v.as_f64() });
            }
        }
        Ok(Self { quantity, values })
    }

    /// Builds an irradiance profile from monthly daily-energy totals
    /// [kWh/m2/day], the unit in which solar climatologies are usually
    /// published. Internally the profile stores mean power [kW/m2].
    pub fn from_daily_energy(quantity: Quantity, kwh_per_day: [T; MONTHS_PER_YEAR]) -> Result<Self> {
        let mut values = [T::zero(); MONTHS_PER_YEAR];
        for (out, v) in values.iter_mut().zip(kwh_per_day.iter()) {
            *out = *v / T::of(24.0);
        }
        Self::new(quantity, values)
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn values(&self) -> &[T; MONTHS_PER_YEAR] {
        &self.values
    }

    /// Day-weighted annual mean.
    pub fn annual_mean(&self) -> T {
        let mut sum = T::zero();
        for (v, days) in self.values.iter().zip(DAYS_PER_MONTH.iter()) {
            sum += *v * T::of(*days as f64);
        }
        sum / T::of(DAYS_PER_YEAR as f64)
    }
}

/// 24 nonnegative weights that sum to one, describing how a day's total is
/// distributed over its hours.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyShape<T> {
    weights: [T; HOURS_PER_DAY],
}

impl<T: Float> DailyShape<T> {
    pub fn new(weights: [T; HOURS_PER_DAY]) -> Result<Self> {
        let mut sum = T::zero();
        for w in &weights {
            if !w.is_finite() || *w < T::zero() {
                return Err(Error::OutOfRange {
                    context: "daily shape weight",
                    value: w.as_f64(),
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
            sum += *w;
        }
        if (sum - T::one()).abs() > T::of(1e-9) {
            return Err(Error::OutOfRange {
                context: "daily shape sum",
                value: sum.as_f64(),
                min: 1.0 - 1e-9,
                max: 1.0 + 1e-9,
            });
        }
        Ok(Self { weights })
    }

    /// Rescales arbitrary nonnegative weights to sum to one.
    pub fn normalized(raw: [T; HOURS_PER_DAY]) -> Result<Self> {
        let sum = raw.iter().fold(T::zero(), |acc, v| acc + *v);
        if sum <= T::zero() {
            return Err(Error::OutOfRange { context: "daily shape sum", value: sum.as_f64(), min: 0.0, max: f64::INFINITY });
        }
        let mut weights = raw;
        for w in &mut weights {
            *w /= sum;
        }
        Self::new(weights)
    }

    pub fn uniform() -> Self {
        Self { weights: [T::of(1.0 / 24.0); HOURS_PER_DAY] }
    }

    /// Half-sine irradiance bell over the daylight window
    /// `[sunrise, sunset)`; zero outside.
    pub fn solar_bell(sunrise: usize, sunset: usize) -> Result<Self> {
        if sunrise >= sunset || sunset > HOURS_PER_DAY {
            return Err(Error::OutOfRange {
                context: "daylight window",
                value: sunset as f64,
                min: sunrise as f64 + 1.0,
                max: HOURS_PER_DAY as f64,
            });
        }
        let span = (sunset - sunrise) as f64;
        let mut raw = [T::zero(); HOURS_PER_DAY];
        for (h, w) in raw.iter_mut().enumerate() {
            if h >= sunrise && h < sunset {
                let x = (h as f64 + 0.5 - sunrise as f64) / span;
                *w = T::of((std::f64::consts::PI * x).sin());
            }
        }
        Self::normalized(raw)
    }

    /// Demand shape of a public charging site: low overnight, a broad
    /// daytime plateau, and a dominant early-evening peak.
    pub fn charging_station() -> Self {
        let raw = [
            0.18, 0.15, 0.14, 0.14, 0.16, 0.25, // night and early morning
            0.50, 0.80, 1.10, 1.30, 1.50, 1.62, // morning ramp
            1.70, 1.62, 1.45, 1.28, 1.30, 1.60, // afternoon
            2.20, 2.90, 2.55, 1.80, 1.00, 0.40, // evening peak, wind-down
        ];
        let mut arr = [T::zero(); HOURS_PER_DAY];
        for (out, v) in arr.iter_mut().zip(raw.iter()) {
            *out = T::of(*v);
        }
        Self::normalized(arr).expect("built-in shape is valid")
    }

    pub fn weights(&self) -> &[T; HOURS_PER_DAY] {
        &self.weights
    }
}

/// Parses the hourly CSV format: a `hour,value` header followed by 8760
/// rows with strictly increasing hours 0..8759.
///
/// Reported line numbers count data rows, starting at 1 for hour 0.
pub fn parse_hourly_csv<T: Float>(quantity: Quantity, text: &str) -> Result<TimeSeries<T>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim();
    if header != "hour,value" {
        return Err(Error::HeaderMismatch { got: header.to_string(), expected: "hour,value" });
    }
    let mut values = Vec::with_capacity(HOURS_PER_YEAR);
    for (idx, raw) in lines.enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let (hour_text, value_text) = row.split_once(',').ok_or_else(|| Error::NumericCell {
            line,
            field: "row",
            text: row.to_string(),
        })?;
        let hour: u32 = hour_text.trim().parse().map_err(|_| Error::NumericCell {
            line,
            field: "hour",
            text: hour_text.to_string(),
        })?;
        if hour as usize != values.len() {
            return Err(Error::HourSequence { line, expected: values.len() as u32, got: hour });
        }
        let value: f64 = value_text.trim().parse().map_err(|_| Error::NumericCell {
            line,
            field: "value",
            text: value_text.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::NumericCell { line, field: "value", text: value_text.to_string() });
        }
        if quantity.is_nonnegative() && value < 0.0 {
            return Err(Error::NegativeValue { line, quantity: quantity.label(), value });
        }
        values.push(T::of(value));
    }
    if values.len() != HOURS_PER_YEAR {
        return Err(Error::SeriesLength { got: values.len(), expected: HOURS_PER_YEAR });
    }
    TimeSeries::new(quantity, values)
}

/// Writes the hourly CSV format accepted by [`parse_hourly_csv`].
pub fn to_hourly_csv<T: Float>(series: &TimeSeries<T>) -> String {
    let mut out = String::with_capacity(HOURS_PER_YEAR * 12);
    out.push_str("hour,value\n");
    for (h, v) in series.values().iter().enumerate() {
        out.push_str(&format!("{h},{v}\n"));
    }
    out
}

/// Log-normal day-to-day multipliers with unit mean and coefficient of
/// variation `cv`, one per day of the year.
fn day_multipliers(cv: f64, rng: &mut ChaCha8Rng) -> [f64; DAYS_PER_YEAR] {
    let mut out = [1.0; DAYS_PER_YEAR];
    if cv <= 0.0 {
        return out;
    }
    let sigma2 = (1.0 + cv * cv).ln();
    let dist = LogNormal::new(-sigma2 / 2.0, sigma2.sqrt()).expect("valid lognormal");
    for m in &mut out {
        *m = dist.sample(rng);
    }
    out
}

/// Synthesizes an hourly year from monthly means.
///
/// Each day of a month gets the month's mean scaled by a log-normal
/// multiplier of coefficient of variation `day_variability`, spread over
/// the day by `shape`; the month is then rescaled so its mean matches the
/// profile exactly. Deterministic for a fixed seed.
pub fn synthesize_from_monthly<T: Float>(
    profile: &MonthlyProfile<T>,
    shape: &DailyShape<T>,
    day_variability: f64,
    seed: u64,
) -> Result<TimeSeries<T>> {
    if !(0.0..1.0).contains(&day_variability) {
        return Err(Error::OutOfRange {
            context: "day_variability",
            value: day_variability,
            min: 0.0,
            max: 1.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let multipliers = day_multipliers(day_variability, &mut rng);

    let mut values = Vec::with_capacity(HOURS_PER_YEAR);
    let mut day0 = 0usize;
    for (m, days) in DAYS_PER_MONTH.iter().enumerate() {
        let mean = profile.values()[m];
        let month_start = values.len();
        for d in 0..*days {
            let daily_total = mean * T::of(24.0) * T::of(multipliers[day0 + d]);
            for w in shape.weights() {
                values.push(daily_total * *w);
            }
        }
        // Restore the exact monthly mean removed by the day noise.
        let n = T::of((*days * HOURS_PER_DAY) as f64);
        let got = values[month_start..].iter().fold(T::zero(), |acc, v| acc + *v) / n;
        if got != T::zero() {
            let factor = mean / got;
            for v in &mut values[month_start..] {
                *v *= factor;
            }
        }
        day0 += days;
    }
    TimeSeries::new(profile.quantity(), values)
}

/// Synthesizes a demand year hitting a target average daily energy and a
/// target annual peak simultaneously.
///
/// A noisy base year (daily shape times log-normal day multipliers) is
/// passed through the monotone map `v -> peak * (v / max)^gamma`, with
/// `gamma` solved by bisection so the annual mean lands on
/// `avg_daily_kwh / 24`. The map preserves nonnegativity and pins the peak
/// by construction.
pub fn synthesize_load<T: Float>(
    avg_daily_kwh: T,
    peak_kw: T,
    shape: &DailyShape<T>,
    seed: u64,
) -> Result<TimeSeries<T>> {
    let mean_kw = avg_daily_kwh / T::of(24.0);
    if peak_kw < mean_kw || mean_kw <= T::zero() {
        return Err(Error::PeakBelowAverage { peak_kw: peak_kw.as_f64(), avg_kw: mean_kw.as_f64() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let multipliers = day_multipliers(0.10, &mut rng);
    let mult_mean: f64 = multipliers.iter().sum::<f64>() / DAYS_PER_YEAR as f64;

    // Base year in f64, normalized to its own maximum.
    let mut base = Vec::with_capacity(HOURS_PER_YEAR);
    for mult in &multipliers {
        for w in shape.weights() {
            base.push(w.as_f64() * mult / mult_mean);
        }
    }
    let base_max = base.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for v in &mut base {
        *v /= base_max;
    }

    // ratio(gamma) = peak / mean of the transformed series; increasing in gamma.
    let ratio = |gamma: f64| -> f64 {
        let s: f64 = base.iter().map(|v| v.powf(gamma)).sum();
        HOURS_PER_YEAR as f64 / s
    };
    let target = (peak_kw / mean_kw).as_f64();
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while ratio(hi) < target {
        hi *= 2.0;
        if hi > 1024.0 {
            return Err(Error::OutOfRange {
                context: "load peak-to-average ratio",
                value: target,
                min: 1.0,
                max: ratio(1024.0),
            });
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma = 0.5 * (lo + hi);

    let values = base.iter().map(|v| peak_kw * T::of(v.powf(gamma))).collect();
    TimeSeries::new(Quantity::LoadKw, values)
}
