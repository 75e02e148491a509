//! Techno-economic simulation and sizing of hybrid PV/wind/battery/diesel
//! microgrids serving a fixed electrical load.
//!
//! The crate is organized around one year of hourly dispatch:
//!
//! * [`series`] ingests or synthesizes the hourly load and resource data,
//! * [`components`] models each device (PV, wind, battery, genset,
//!   converter),
//! * [`dispatch`] runs the hour-by-hour energy balance under a
//!   load-following or cycle-charging strategy,
//! * [`economics`] discounts lifecycle costs into NPC, LCOE, and operating
//!   cost, and [`emissions`] accounts the pollutants,
//! * [`optimizer`] enumerates a sizing design space and ranks feasible
//!   candidates by NPC.
//!
//! Everything numeric is generic over the scalar type through
//! [`float::Float`] (implemented for `f32` and `f64`); the aliases below
//! fix `f64` for ordinary use.

pub mod components;
pub mod dispatch;
pub mod economics;
pub mod emissions;
pub mod error;
pub mod float;
pub mod nasa;
pub mod optimizer;
pub mod series;

pub use error::{Error, Result};
pub use float::Float;

/// `f64` aliases for the main model types.
pub type TimeSeries = series::TimeSeries<f64>;
pub type MonthlyProfile = series::MonthlyProfile<f64>;
pub type DailyShape = series::DailyShape<f64>;
pub type LoadStats = series::LoadStats<f64>;
pub type PvSpec = components::PvSpec<f64>;
pub type WindSpec = components::WindSpec<f64>;
pub type PowerCurve = components::PowerCurve<f64>;
pub type BatterySpec = components::BatterySpec<f64>;
pub type BatteryState = components::BatteryState<f64>;
pub type GensetSpec = components::GensetSpec<f64>;
pub type ConverterSpec = components::ConverterSpec<f64>;
pub type SystemConfig = dispatch::SystemConfig<f64>;
pub type Resources = dispatch::Resources<f64>;
pub type DispatchResult = dispatch::DispatchResult<f64>;
pub type HourRecord = dispatch::HourRecord<f64>;
pub type FinanceSpec = economics::FinanceSpec<f64>;
pub type PriceTable = economics::PriceTable<f64>;
pub type UnitCosts = economics::UnitCosts<f64>;
pub type EconomicSummary = economics::EconomicSummary<f64>;
pub type EmissionFactors = emissions::EmissionFactors<f64>;
pub type EmissionsReport = emissions::EmissionsReport<f64>;
pub type SearchSpace = optimizer::SearchSpace<f64>;
pub type CandidateSize = optimizer::CandidateSize<f64>;
pub type Constraints = optimizer::Constraints<f64>;
