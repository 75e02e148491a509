//! Physical and operational component models: PV array, wind turbine,
//! battery bank, diesel genset, and the DC/AC converter.

pub mod battery;
pub mod converter;
pub mod genset;
pub mod pv;
pub mod wind;

pub use battery::{BatterySpec, BatteryState};
pub use converter::{converter_flow, converter_sizing_hint, ConverterSpec, FlowDirection};
pub use genset::{genset_step, GensetOutput, GensetSpec};
pub use pv::{cell_temperature, pv_power, PvSpec};
pub use wind::{hub_wind_speed, turbine_power, PowerCurve, WindSpec};
