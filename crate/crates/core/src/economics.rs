//! Lifecycle cost engine: present values of capital, replacement, O&M,
//! fuel, and salvage per component, rolled up into net present cost,
//! levelized cost of energy, and annualized operating cost.
//!
//! All discounting uses the real (inflation-adjusted) rate on
//! constant-currency cash flows.

use serde::Serialize;

use crate::dispatch::{DispatchResult, SystemConfig};
use crate::error::{Error, Result};
use crate::float::Float;

/// Project finance settings.
#[derive(Debug, Clone)]
pub struct FinanceSpec<T> {
    /// Nominal discount rate per year.
    pub nominal_rate: T,
    /// Expected inflation per year.
    pub inflation: T,
    /// Project life [years].
    pub project_life_years: u32,
}

impl<T: Float> FinanceSpec<T> {
    pub fn new(nominal_rate: T, inflation: T, project_life_years: u32) -> Result<Self> {
        if project_life_years < 1 {
            return Err(Error::InvalidProjectLife(project_life_years as f64));
        }
        if inflation <= -T::one() {
            return Err(Error::InvalidInflation(inflation.as_f64()));
        }
        Ok(Self { nominal_rate, inflation, project_life_years })
    }

    pub fn real_rate(&self) -> T {
        real_rate(self.nominal_rate, self.inflation).expect("validated at construction")
    }

    pub fn crf(&self) -> T {
        crf(self.real_rate(), self.project_life_years).expect("validated at construction")
    }
}

/// Inflation-adjusted discount rate.
pub fn real_rate<T: Float>(nominal: T, inflation: T) -> Result<T> {
    if inflation <= -T::one() {
        return Err(Error::InvalidInflation(inflation.as_f64()));
    }
    Ok((T::one() + nominal) / (T::one() + inflation) - T::one())
}

/// Capital recovery factor: the uniform annual payment over `n` years that
/// a unit present value buys at rate `i`.
pub fn crf<T: Float>(i: T, n: u32) -> Result<T> {
    if n < 1 {
        return Err(Error::InvalidProjectLife(n as f64));
    }
    if i == T::zero() {
        return Ok(T::one() / T::of(n as f64));
    }
    let growth = (T::one() + i).powi(n as i32);
    Ok(i * growth / (growth - T::one()))
}

/// Present value of a unit annual payment over `n` years at rate `i`.
pub fn annuity_pv<T: Float>(i: T, n: u32) -> T {
    if i == T::zero() {
        return T::of(n as f64);
    }
    (T::one() - (T::one() + i).powi(-(n as i32))) / i
}

fn discount<T: Float>(i: T, years: T) -> T {
    (T::one() + i).powf(-years)
}

/// Residual value at project end of a component with the given life and
/// consumed usage, both measured in the same unit (years or hours).
pub fn salvage_value<T: Float>(replacement_cost: T, component_life: T, consumed: T) -> Result<T> {
    if component_life <= T::zero() {
        return Err(Error::InvalidComponentLife(component_life.as_f64()));
    }
    let remaining = (component_life - consumed).max(T::zero()).min(component_life);
    Ok(replacement_cost * remaining / component_life)
}

/// Nominal (undiscounted) cash flows of one component over the project.
#[derive(Debug, Clone)]
pub struct CostEvents<T> {
    /// Purchase at year zero.
    pub capital: T,
    /// Replacement purchases at (possibly fractional) years.
    pub replacements: Vec<(T, T)>,
    pub om_per_year: T,
    pub fuel_per_year: T,
    /// Residual value credited at project end.
    pub salvage_at_end: T,
}

impl<T: Float> CostEvents<T> {
    pub fn capital_only(capital: T) -> Self {
        Self {
            capital,
            replacements: Vec::new(),
            om_per_year: T::zero(),
            fuel_per_year: T::zero(),
            salvage_at_end: T::zero(),
        }
    }
}

/// Discounted cost breakdown of one component (or of the whole system).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CostRow<T> {
    pub capital_pv: T,
    pub replacement_pv: T,
    pub om_pv: T,
    pub fuel_pv: T,
    /// Reported as a positive credit.
    pub salvage_pv: T,
    pub total_pv: T,
}

impl<T: Float> CostRow<T> {
    fn zero() -> Self {
        Self {
            capital_pv: T::zero(),
            replacement_pv: T::zero(),
            om_pv: T::zero(),
            fuel_pv: T::zero(),
            salvage_pv: T::zero(),
            total_pv: T::zero(),
        }
    }

    fn add(&mut self, other: &Self) {
        self.capital_pv += other.capital_pv;
        self.replacement_pv += other.replacement_pv;
        self.om_pv += other.om_pv;
        self.fuel_pv += other.fuel_pv;
        self.salvage_pv += other.salvage_pv;
        self.total_pv += other.total_pv;
    }
}

/// Discounts a component's cash flows into a present-value row.
pub fn component_npc<T: Float>(events: &CostEvents<T>, fin: &FinanceSpec<T>) -> CostRow<T> {
    let i = fin.real_rate();
    let n = fin.project_life_years;
    let annuity = annuity_pv(i, n);
    let replacement_pv = events
        .replacements
        .iter()
        .fold(T::zero(), |acc, (year, amount)| acc + *amount * discount(i, *year));
    let om_pv = events.om_per_year * annuity;
    let fuel_pv = events.fuel_per_year * annuity;
    let salvage_pv = events.salvage_at_end * discount(i, T::of(n as f64));
    let total_pv = events.capital + replacement_pv + om_pv + fuel_pv - salvage_pv;
    CostRow { capital_pv: events.capital, replacement_pv, om_pv, fuel_pv, salvage_pv, total_pv }
}

/// Unit prices and calendar life of one component class. `capital`,
/// `replacement` and `om_per_year` are per sizing unit: per kW for PV,
/// genset and converter, per unit for wind turbines and batteries. The
/// genset uses `om_per_year` as $ per operating hour and ages in hours.
#[derive(Debug, Clone)]
pub struct UnitCosts<T> {
    pub capital: T,
    pub replacement: T,
    pub om_per_year: T,
    pub lifetime_years: Option<T>,
}

/// Unit prices for every component class.
#[derive(Debug, Clone)]
pub struct PriceTable<T> {
    pub pv: UnitCosts<T>,
    pub wind: UnitCosts<T>,
    pub battery: UnitCosts<T>,
    pub genset: UnitCosts<T>,
    pub converter: UnitCosts<T>,
}

/// Replacement epochs strictly inside the project horizon.
fn replacement_years<T: Float>(life_years: T, project_life: u32) -> Vec<T> {
    let mut out = Vec::new();
    if life_years <= T::zero() {
        return out;
    }
    let horizon = T::of(project_life as f64);
    let tol = T::of(1e-9);
    let mut k = T::one();
    loop {
        let year = life_years * k;
        if year >= horizon - tol {
            break;
        }
        out.push(year);
        k += T::one();
    }
    out
}

/// Cash flows of a calendar-aged component fleet of the given size.
pub fn calendar_component_events<T: Float>(
    size: T,
    costs: &UnitCosts<T>,
    fin: &FinanceSpec<T>,
) -> CostEvents<T> {
    let replacement_each = costs.replacement * size;
    let mut replacements = Vec::new();
    let mut salvage = T::zero();
    if let Some(life) = costs.lifetime_years {
        for year in replacement_years(life, fin.project_life_years) {
            replacements.push((year, replacement_each));
        }
        let last_install = replacements.last().map(|(y, _)| *y).unwrap_or_else(T::zero);
        let age_at_end = T::of(fin.project_life_years as f64) - last_install;
        salvage = salvage_value(replacement_each, life, age_at_end).unwrap_or_else(|_| T::zero());
    }
    CostEvents {
        capital: costs.capital * size,
        replacements,
        om_per_year: costs.om_per_year * size,
        fuel_per_year: T::zero(),
        salvage_at_end: salvage,
    }
}

/// Cash flows of the genset, aged by operating hours from the dispatch
/// record rather than by calendar years.
pub fn genset_events<T: Float>(
    rated_kw: T,
    lifetime_hours: T,
    costs: &UnitCosts<T>,
    runtime_hours_per_year: T,
    fuel_l_per_year: T,
    fuel_price_per_l: T,
    fin: &FinanceSpec<T>,
) -> CostEvents<T> {
    let replacement_each = costs.replacement * rated_kw;
    let mut replacements = Vec::new();
    let mut salvage = T::zero();
    if rated_kw > T::zero() && lifetime_hours > T::zero() {
        if runtime_hours_per_year > T::zero() {
            let life_years = lifetime_hours / runtime_hours_per_year;
            for year in replacement_years(life_years, fin.project_life_years) {
                replacements.push((year, replacement_each));
            }
            let last_install = replacements.last().map(|(y, _)| *y).unwrap_or_else(T::zero);
            let consumed_h = (T::of(fin.project_life_years as f64) - last_install) * runtime_hours_per_year;
            salvage = salvage_value(replacement_each, lifetime_hours, consumed_h).unwrap_or_else(|_| T::zero());
        } else {
            // Never ran: the full residual value remains.
            salvage = replacement_each;
        }
    }
    CostEvents {
        capital: costs.capital * rated_kw,
        replacements,
        om_per_year: costs.om_per_year * runtime_hours_per_year,
        fuel_per_year: fuel_l_per_year * fuel_price_per_l,
        salvage_at_end: salvage,
    }
}

/// One named component row of the summary.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentRow<T> {
    pub name: String,
    pub costs: CostRow<T>,
}

/// Full lifecycle economics of one simulated system.
#[derive(Debug, Clone, Serialize)]
pub struct EconomicSummary<T> {
    pub rows: Vec<ComponentRow<T>>,
    pub system: CostRow<T>,
    /// Net present cost [$].
    pub npc: T,
    /// Levelized cost of energy [$/kWh].
    pub lcoe_per_kwh: T,
    /// Annualized cost net of capital [$most/yr].
    pub operating_cost_per_year: T,
    pub real_rate: T,
    pub crf: T,
    pub served_kwh_per_year: T,
    pub renewable_fraction: T,
}

fn summarize<T: Float>(
    rows: Vec<ComponentRow<T>>,
    fin: &FinanceSpec<T>,
    served_kwh_per_year: T,
    renewable_fraction: T,
    lcoe_override: Option<T>,
) -> Result<EconomicSummary<T>> {
    if served_kwh_per_year <= T::zero() {
        return Err(Error::ZeroServedEnergy);
    }
    let mut system = CostRow::zero();
    for row in &rows {
        system.add(&row.costs);
    }
    let npc = system.total_pv;
    let crf = fin.crf();
    let lcoe = lcoe_override.unwrap_or(npc * crf / served_kwh_per_year);
    let operating = (npc - system.capital_pv) * crf;
    Ok(EconomicSummary {
        rows,
        system,
        npc,
        lcoe_per_kwh: lcoe,
        operating_cost_per_year: operating,
        real_rate: fin.real_rate(),
        crf,
        served_kwh_per_year,
        renewable_fraction,
    })
}

/// Assembles the per-component rows from a dispatch run and rolls them up.
pub fn system_summary<T: Float>(
    cfg: &SystemConfig<T>,
    dispatch: &DispatchResult<T>,
    prices: &PriceTable<T>,
    fin: &FinanceSpec<T>,
) -> Result<EconomicSummary<T>> {
    let a = &dispatch.aggregates;
    let mut rows = Vec::new();
    if cfg.genset.rated_kw > T::zero() {
        let events = genset_events(
            cfg.genset.rated_kw,
            cfg.genset.lifetime_hours,
            &prices.genset,
            T::of(a.genset_hours as f64),
            a.fuel_l,
            cfg.genset.fuel_price_per_l,
            fin,
        );
        rows.push(ComponentRow { name: "DG".into(), costs: component_npc(&events, fin) });
    }
    if cfg.n_batt > 0 {
        let events = calendar_component_events(T::of(cfg.n_batt as f64), &prices.battery, fin);
        rows.push(ComponentRow { name: "BT".into(), costs: component_npc(&events, fin) });
    }
    if cfg.n_wt > 0 {
        let events = calendar_component_events(T::of(cfg.n_wt as f64), &prices.wind, fin);
        rows.push(ComponentRow { name: "WT".into(), costs: component_npc(&events, fin) });
    }
    if cfg.n_pv > 0 {
        let size = T::of(cfg.n_pv as f64) * cfg.pv.unit_rating_kw;
        let events = calendar_component_events(size, &prices.pv, fin);
        rows.push(ComponentRow { name: "PV".into(), costs: component_npc(&events, fin) });
    }
    if cfg.converter.rated_kw > T::zero() {
        let events = calendar_component_events(cfg.converter.rated_kw, &prices.converter, fin);
        rows.push(ComponentRow { name: "Converter".into(), costs: component_npc(&events, fin) });
    }
    summarize(rows, fin, a.served_kwh, a.renewable_fraction, None)
}

/// Economics of buying every kilowatt-hour from the grid at a flat tariff.
/// The LCOE of this arrangement is the tariff itself.
pub fn baseline_grid<T: Float>(
    annual_kwh: T,
    tariff_per_kwh: T,
    fin: &FinanceSpec<T>,
) -> Result<EconomicSummary<T>> {
    if tariff_per_kwh < T::zero() {
        return Err(Error::OutOfRange {
            context: "grid tariff",
            value: tariff_per_kwh.as_f64(),
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let annual_cost = annual_kwh * tariff_per_kwh;
    let events = CostEvents {
        capital: T::zero(),
        replacements: Vec::new(),
        om_per_year: annual_cost,
        fuel_per_year: T::zero(),
        salvage_at_end: T::zero(),
    };
    let rows = vec![ComponentRow { name: "Grid".into(), costs: component_npc(&events, fin) }];
    summarize(rows, fin, annual_kwh, T::zero(), Some(tariff_per_kwh))
}

/// Cost breakdown as CSV in the column order capital, replacement, O&M,
/// fuel, salvage, total.
pub fn costs_csv<T: Float>(summary: &EconomicSummary<T>) -> String {
    let mut out = String::from("component,capital,replacement,om,fuel,salvage,total\n");
    let mut push = |name: &str, row: &CostRow<T>| {
        out.push_str(&format!(
            "{name},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2}\n",
            row.capital_pv.as_f64(),
            row.replacement_pv.as_f64(),
            row.om_pv.as_f64(),
            row.fuel_pv.as_f64(),
            row.salvage_pv.as_f64(),
            row.total_pv.as_f64(),
        ));
    };
    for row in &summary.rows {
        push(&row.name, &row.costs);
    }
    push("System", &summary.system);
    out
}
