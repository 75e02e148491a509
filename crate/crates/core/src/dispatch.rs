//! Hour-by-hour energy balance of the full system under load-following or
//! cycle-charging dispatch.
//!
//! Bus topology: the PV array and the battery bank sit on the DC bus; wind
//! turbines, the genset, and the load sit on the AC bus. Every DC/AC
//! exchange passes the converter, which clamps input per direction at its
//! rating and loses `1 - efficiency` of what passes.

use serde::Serialize;

use crate::components::{genset_step, pv_power, turbine_power};
use crate::components::{BatterySpec, BatteryState, ConverterSpec, GensetSpec, PvSpec, WindSpec};
use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::{Quantity, TimeSeries, DAYS_PER_MONTH, HOURS_PER_DAY, HOURS_PER_YEAR, MONTHS_PER_YEAR};

/// Genset dispatch strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// The genset produces only the immediate deficit left after
    /// renewables and battery; renewables charge the battery.
    LoadFollowing,
    /// The genset starts on any deficit left by the renewables, runs at
    /// rated power bounded by what the load plus battery can absorb, and
    /// the surplus charges the battery.
    CycleCharging,
}

/// Component fleet plus dispatch settings for one candidate system.
#[derive(Debug, Clone)]
pub struct SystemConfig<T> {
    pub n_pv: u32,
    pub n_wt: u32,
    pub n_batt: u32,
    pub pv: PvSpec<T>,
    pub wind: WindSpec<T>,
    pub battery: BatterySpec<T>,
    /// The genset rating lives in `genset.rated_kw`; zero means absent.
    pub genset: GensetSpec<T>,
    pub converter: ConverterSpec<T>,
    pub strategy: Strategy,
    /// Ambient air density [kg/m3] used for the turbine output correction.
    pub air_density: T,
}

/// Hourly resource drivers.
#[derive(Debug, Clone)]
pub struct Resources<T> {
    pub ghi: TimeSeries<T>,
    pub wind: TimeSeries<T>,
    pub temperature: TimeSeries<T>,
}

impl<T: Float> Resources<T> {
    pub fn new(ghi: TimeSeries<T>, wind: TimeSeries<T>, temperature: TimeSeries<T>) -> Result<Self> {
        for (ts, want) in [(&ghi, Quantity::GhiKwM2), (&wind, Quantity::WindMs), (&temperature, Quantity::TempC)] {
            if ts.quantity() != want {
                return Err(Error::HeaderMismatch {
                    got: ts.quantity().label().to_string(),
                    expected: want.label(),
                });
            }
        }
        Ok(Self { ghi, wind, temperature })
    }
}

/// Every power flow of one simulated hour, all in kW except where noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HourRecord<T> {
    pub load_kw: T,
    pub pv_kw: T,
    pub wind_kw: T,
    pub genset_kw: T,
    /// Power entering the battery terminals.
    pub batt_charge_kw: T,
    /// Power leaving the battery terminals.
    pub batt_discharge_kw: T,
    /// Bank energy at the end of the hour [kWh].
    pub soc_kwh: T,
    pub unmet_kw: T,
    /// Surplus dumped at the source terminals.
    pub excess_kw: T,
    /// Converter conversion losses.
    pub loss_kw: T,
    /// Fuel burned this hour [L].
    pub fuel_l: T,
}

impl<T: Float> HourRecord<T> {
    /// Signed bus-balance residual; zero for a correct simulation step.
    pub fn balance_residual_kw(&self) -> T {
        let sources = self.pv_kw + self.wind_kw + self.genset_kw + self.batt_discharge_kw;
        let sinks = (self.load_kw - self.unmet_kw) + self.batt_charge_kw + self.excess_kw + self.loss_kw;
        sources - sinks
    }
}

/// Annual totals of a dispatch run.
#[derive(Debug, Clone, Serialize)]
pub struct Aggregates<T> {
    pub pv_kwh: T,
    pub wind_kwh: T,
    pub genset_kwh: T,
    pub load_kwh: T,
    pub served_kwh: T,
    pub unmet_kwh: T,
    pub excess_kwh: T,
    pub battery_charge_kwh: T,
    pub battery_discharge_kwh: T,
    pub converter_loss_kwh: T,
    pub fuel_l: T,
    pub genset_hours: u32,
    pub genset_starts: u32,
    /// Share of served energy not originating from fuel: 1 minus genset
    /// production over served energy, clamped at zero.
    pub renewable_fraction: T,
}

/// Full-year operational record.
#[derive(Debug, Clone)]
pub struct DispatchResult<T> {
    pub records: Vec<HourRecord<T>>,
    pub aggregates: Aggregates<T>,
}

/// Result of dispatching a single hour.
pub struct StepOutcome<T> {
    pub record: HourRecord<T>,
    pub state: BatteryState<T>,
}

/// Dispatches one hour under the configured strategy, given the PV DC
/// output, the wind AC output, and the load for that hour. This is the
/// kernel [`simulate_year`] applies 8760 times.
pub fn step_hour<T: Float>(
    cfg: &SystemConfig<T>,
    state: BatteryState<T>,
    pv_dc: T,
    wind_ac: T,
    load: T,
) -> Result<StepOutcome<T>> {
    let dt = T::one();
    let eff = cfg.converter.efficiency;
    let conv = cfg.converter.rated_kw;

    // Wind is on the AC bus and serves the load first.
    let wind_to_load = wind_ac.min(load);
    let mut load_rem = load - wind_to_load;
    let wind_sur = wind_ac - wind_to_load;

    // PV reaches the load through the inverter. Work in AC terms first so
    // a fully covered load leaves an exact zero residual.
    let mut inv_budget = conv;
    let (pv_in_for_load, pv_to_load_ac) = if load_rem > T::zero() && eff > T::zero() {
        let usable_dc = pv_dc.min(inv_budget);
        let potential_ac = usable_dc * eff;
        if potential_ac <= load_rem {
            (usable_dc, potential_ac)
        } else {
            (load_rem / eff, load_rem)
        }
    } else {
        (T::zero(), T::zero())
    };
    load_rem = (load_rem - pv_to_load_ac).max(T::zero());
    inv_budget = (inv_budget - pv_in_for_load).max(T::zero());
    let pv_sur = (pv_dc - pv_in_for_load).max(T::zero());

    // How much the battery could deliver to the AC side this hour.
    let batt_dis_cap = cfg.battery.max_discharge_kw(cfg.n_batt, state, dt).min(inv_budget);
    let batt_ac_max = batt_dis_cap * eff;

    // Genset setpoint. Load following starts the engine only when the
    // battery cannot cover the deficit and asks for exactly the shortfall.
    // Cycle charging starts it on any deficit left by the renewables, runs
    // it at rated power capped by what the load plus battery can absorb,
    // and lets the battery assist only beyond the rating.
    let deficit = load_rem;
    let genset_req = if deficit > T::zero() && cfg.genset.rated_kw > T::zero() {
        match cfg.strategy {
            Strategy::LoadFollowing => {
                if deficit > batt_ac_max {
                    deficit - batt_ac_max
                } else {
                    T::zero()
                }
            }
            Strategy::CycleCharging => {
                let chg_cap = cfg.battery.max_charge_kw(cfg.n_batt, state, dt);
                let chg_left = (chg_cap - pv_sur).max(T::zero());
                let rect_in_cap = if eff > T::zero() { conv.min(chg_left / eff) } else { T::zero() };
                (deficit + rect_in_cap).min(cfg.genset.rated_kw)
            }
        }
    } else {
        T::zero()
    };
    let genset = genset_step(&cfg.genset, genset_req);
    let genset_to_load = genset.delivered_kw.min(deficit);
    load_rem = deficit - genset_to_load;
    let genset_sur = genset.delivered_kw - genset_to_load;

    // One battery action per hour: discharge toward a residual deficit,
    // or charge from whichever surpluses exist. The dispatch order above
    // guarantees at most one side is nonzero.
    let discharge_want = if load_rem > T::zero() && eff > T::zero() {
        (load_rem / eff).min(batt_dis_cap)
    } else {
        T::zero()
    };
    let rect_in_offer = (wind_sur + genset_sur).min(conv);
    let charge_offer = pv_sur + rect_in_offer * eff;
    // The dispatch order leaves at most one substantive side; any dust on
    // the other side is rounding noise and is dropped.
    let (charge_offer, discharge_want) = if charge_offer > T::zero() && discharge_want > T::zero() {
        if charge_offer >= discharge_want {
            (charge_offer, T::zero())
        } else {
            (T::zero(), discharge_want)
        }
    } else {
        (charge_offer, discharge_want)
    };

    let (next_state, accepted, delivered) =
        cfg.battery.step(cfg.n_batt, state, charge_offer - discharge_want, dt)?;

    let batt_to_load_ac = delivered * eff;
    let unmet = (load_rem - batt_to_load_ac).max(T::zero());

    // Attribute accepted charge: PV surplus feeds the DC bus directly,
    // the rest came through the rectifier (wind before genset surplus).
    let from_pv = accepted.min(pv_sur);
    let rect_in_used = if eff > T::zero() {
        ((accepted - from_pv) / eff).min(rect_in_offer)
    } else {
        T::zero()
    };
    let wind_rect_in = rect_in_used.min(wind_sur);
    let genset_rect_in = rect_in_used - wind_rect_in;

    let inverter_loss = (pv_in_for_load + delivered) * (T::one() - eff);
    let rectifier_loss = rect_in_used * (T::one() - eff);

    let excess = (pv_sur - from_pv) + (wind_sur - wind_rect_in) + (genset_sur - genset_rect_in);

    let record = HourRecord {
        load_kw: load,
        pv_kw: pv_dc,
        wind_kw: wind_ac,
        genset_kw: genset.delivered_kw,
        batt_charge_kw: accepted,
        batt_discharge_kw: delivered,
        soc_kwh: next_state.stored_kwh,
        unmet_kw: unmet,
        excess_kw: excess.max(T::zero()),
        loss_kw: inverter_loss + rectifier_loss,
        fuel_l: genset.fuel_l_per_h * dt,
    };
    Ok(StepOutcome { record, state: next_state })
}

/// Simulates one full year. `initial_soc` is the starting state-of-charge
/// fraction and must lie inside the battery's allowed window.
pub fn simulate_year<T: Float>(
    cfg: &SystemConfig<T>,
    resources: &Resources<T>,
    load: &TimeSeries<T>,
    initial_soc: T,
) -> Result<DispatchResult<T>> {
    if load.quantity() != Quantity::LoadKw {
        return Err(Error::HeaderMismatch {
            got: load.quantity().label().to_string(),
            expected: Quantity::LoadKw.label(),
        });
    }
    let mut state = cfg.battery.initial_state(cfg.n_batt, initial_soc)?;
    let mut records = Vec::with_capacity(HOURS_PER_YEAR);
    let mut prev_running = false;
    let mut genset_starts = 0u32;
    let mut genset_hours = 0u32;

    for h in 0..HOURS_PER_YEAR {
        let pv_dc = pv_power(&cfg.pv, cfg.n_pv, resources.ghi.hour(h), resources.temperature.hour(h));
        let u_hub = cfg.wind.hub_speed(resources.wind.hour(h))?;
        let wind_ac = turbine_power(&cfg.wind, cfg.n_wt, u_hub, cfg.air_density);
        let out = step_hour(cfg, state, pv_dc, wind_ac, load.hour(h))?;
        state = out.state;
        let running = out.record.genset_kw > T::zero();
        if running {
            genset_hours += 1;
            if !prev_running {
                genset_starts += 1;
            }
        }
        prev_running = running;
        records.push(out.record);
    }

    let aggregates = aggregate(&records, genset_hours, genset_starts);
    Ok(DispatchResult { records, aggregates })
}

fn aggregate<T: Float>(records: &[HourRecord<T>], genset_hours: u32, genset_starts: u32) -> Aggregates<T> {
    let mut pv = T::zero();
    let mut wind = T::zero();
    let mut genset = T::zero();
    let mut load = T::zero();
    let mut unmet = T::zero();
    let mut excess = T::zero();
    let mut charge = T::zero();
    let mut discharge = T::zero();
    let mut loss = T::zero();
    let mut fuel = T::zero();
    for r in records {
        pv += r.pv_kw;
        wind += r.wind_kw;
        genset += r.genset_kw;
        load += r.load_kw;
        unmet += r.unmet_kw;
        excess += r.excess_kw;
        charge += r.batt_charge_kw;
        discharge += r.batt_discharge_kw;
        loss += r.loss_kw;
        fuel += r.fuel_l;
    }
    let served = load - unmet;
    let renewable_fraction = if served > T::zero() {
        (T::one() - genset / served).max(T::zero())
    } else {
        T::zero()
    };
    Aggregates {
        pv_kwh: pv,
        wind_kwh: wind,
        genset_kwh: genset,
        load_kwh: load,
        served_kwh: served,
        unmet_kwh: unmet,
        excess_kwh: excess,
        battery_charge_kwh: charge,
        battery_discharge_kwh: discharge,
        converter_loss_kwh: loss,
        fuel_l: fuel,
        genset_hours,
        genset_starts,
        renewable_fraction,
    }
}

/// Largest absolute per-hour bus-balance residual [kW]. A correct run
/// stays far below 1e-6.
pub fn verify_energy_balance<T: Float>(result: &DispatchResult<T>) -> T {
    result
        .records
        .iter()
        .map(|r| r.balance_residual_kw().abs())
        .fold(T::zero(), |acc, v| acc.max(v))
}

/// Hourly trace as CSV, one record per row.
pub fn hourly_csv<T: Float>(result: &DispatchResult<T>) -> String {
    let mut out = String::with_capacity(result.records.len() * 96);
    out.push_str(
        "hour,load_kw,pv_kw,wind_kw,genset_kw,batt_charge_kw,batt_discharge_kw,soc_kwh,unmet_kw,excess_kw,loss_kw,fuel_l\n",
    );
    for (h, r) in result.records.iter().enumerate() {
        out.push_str(&format!(
            "{h},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            r.load_kw.as_f64(),
            r.pv_kw.as_f64(),
            r.wind_kw.as_f64(),
            r.genset_kw.as_f64(),
            r.batt_charge_kw.as_f64(),
            r.batt_discharge_kw.as_f64(),
            r.soc_kwh.as_f64(),
            r.unmet_kw.as_f64(),
            r.excess_kw.as_f64(),
            r.loss_kw.as_f64(),
            r.fuel_l.as_f64(),
        ));
    }
    out
}

/// Monthly production and service totals, for plotting.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonthlyProduction<T> {
    pub month: u32,
    pub pv_kwh: T,
    pub wind_kwh: T,
    pub genset_kwh: T,
    pub served_kwh: T,
}

pub fn monthly_production<T: Float>(result: &DispatchResult<T>) -> [MonthlyProduction<T>; MONTHS_PER_YEAR] {
    let mut out = [MonthlyProduction {
        month: 0,
        pv_kwh: T::zero(),
        wind_kwh: T::zero(),
        genset_kwh: T::zero(),
        served_kwh: T::zero(),
    }; MONTHS_PER_YEAR];
    let mut h = 0usize;
    for (m, days) in DAYS_PER_MONTH.iter().enumerate() {
        let row = &mut out[m];
        row.month = m as u32 + 1;
        for _ in 0..days * HOURS_PER_DAY {
            let r = &result.records[h];
            row.pv_kwh += r.pv_kw;
            row.wind_kwh += r.wind_kw;
            row.genset_kwh += r.genset_kw;
            row.served_kwh += r.load_kw - r.unmet_kw;
            h += 1;
        }
    }
    out
}
