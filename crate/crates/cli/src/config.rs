//! Scenario configuration: one TOML file describing the site, finance,
//! components with their unit prices, resource sources, load, dispatch
//! settings, constraints, and (for optimize runs) the search space.
//!
//! Unknown keys are rejected so typos fail loudly before any computation.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use mgsim_core::components::{BatterySpec, ConverterSpec, GensetSpec, PowerCurve, PvSpec, WindSpec};
use mgsim_core::dispatch::{Resources, Strategy, SystemConfig};
use mgsim_core::economics::{FinanceSpec, PriceTable, UnitCosts};
use mgsim_core::emissions::{EmissionFactors, SpeciesAmounts};
use mgsim_core::nasa::NasaPowerClient;
use mgsim_core::optimizer::{Constraints, SearchSpace};
use mgsim_core::series::{
    parse_hourly_csv, synthesize_from_monthly, synthesize_load, DailyShape, MonthlyProfile,
    Quantity, TimeSeries,
};

pub const DEFAULT_SEED: u64 = 42;

/// Seed offsets so each synthesized series draws an independent stream.
const SEED_GHI: u64 = 0;
const SEED_WIND: u64 = 1;
const SEED_TEMP: u64 = 2;
const SEED_LOAD: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub site: Option<SiteSection>,
    pub finance: FinanceSection,
    pub load: LoadSection,
    pub resources: Option<ResourcesSection>,
    pub pv: Option<PvSection>,
    pub wind_turbine: Option<WindSection>,
    pub battery: Option<BatterySection>,
    pub genset: Option<GensetSection>,
    pub converter: Option<ConverterSection>,
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub dispatch: DispatchSection,
    #[serde(default)]
    pub constraints: ConstraintsSection,
    pub search: Option<SearchSection>,
    #[serde(default)]
    pub emissions: EmissionsSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory the config file lives in; resolved at load time and used
    /// for relative CSV paths.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSection {
    pub latitude: f64,
    pub longitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinanceSection {
    pub nominal_discount_rate: f64,
    pub expected_inflation_rate: f64,
    pub project_life_years: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSection {
    /// Hourly CSV path, relative to the config file.
    pub csv: Option<String>,
    pub avg_daily_kwh: Option<f64>,
    pub peak_kw: Option<f64>,
    #[serde(default)]
    pub shape: ShapeChoice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeChoice {
    Named(String),
    Weights(Vec<f64>),
}

impl Default for ShapeChoice {
    fn default() -> Self {
        ShapeChoice::Named("charging_station".to_string())
    }
}

impl ShapeChoice {
    fn build(&self, field: &str) -> Result<DailyShape<f64>> {
        match self {
            ShapeChoice::Named(name) => match name.as_str() {
                "charging_station" => Ok(DailyShape::charging_station()),
                "uniform" => Ok(DailyShape::uniform()),
                other => bail!("{field}: unknown shape {other:?} (expected \"charging_station\", \"uniform\", or 24 weights)"),
            },
            ShapeChoice::Weights(w) => {
                let arr: [f64; 24] = w
                    .clone()
                    .try_into()
                    .map_err(|_| anyhow!("{field}: expected exactly 24 weights, got {}", w.len()))?;
                DailyShape::normalized(arr).map_err(|e| anyhow!("{field}: {e}"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcesSection {
    pub solar: SolarResource,
    pub wind: WindResource,
    pub temperature: TemperatureResource,
    /// Pull the three monthly profiles from the NASA POWER service
    /// instead of the inline tables; requires `--allow-network`.
    #[serde(default)]
    pub fetch: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolarResource {
    pub csv: Option<String>,
    pub monthly_kwh_per_m2_day: Option<Vec<f64>>,
    pub scale_annual_mean_to_kwh_per_m2_day: Option<f64>,
    #[serde(default = "default_solar_variability")]
    pub day_variability: f64,
    #[serde(default = "default_daylight")]
    pub daylight: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindResource {
    pub csv: Option<String>,
    pub monthly_m_per_s: Option<Vec<f64>>,
    pub scale_annual_mean_to_m_per_s: Option<f64>,
    #[serde(default = "default_wind_variability")]
    pub day_variability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureResource {
    pub csv: Option<String>,
    pub monthly_c: Option<Vec<f64>>,
    #[serde(default = "default_temp_variability")]
    pub day_variability: f64,
}

fn default_solar_variability() -> f64 {
    0.2
}
fn default_wind_variability() -> f64 {
    0.25
}
fn default_temp_variability() -> f64 {
    0.05
}
fn default_daylight() -> [usize; 2] {
    [6, 18]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvSection {
    pub count: u32,
    #[serde(default = "one")]
    pub unit_rating_kw: f64,
    #[serde(default = "default_derating")]
    pub derating: f64,
    #[serde(default = "default_temp_coeff")]
    pub temp_coeff_per_c: f64,
    #[serde(default = "default_noct")]
    pub noct_c: f64,
    pub capital_per_kw: f64,
    pub replacement_per_kw: f64,
    pub om_per_kw_year: f64,
    pub lifetime_years: f64,
}

fn one() -> f64 {
    1.0
}
fn default_derating() -> f64 {
    0.8
}
fn default_temp_coeff() -> f64 {
    -0.0034
}
fn default_noct() -> f64 {
    43.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSection {
    pub count: u32,
    #[serde(default = "default_wt_rating")]
    pub unit_rating_kw: f64,
    #[serde(default = "default_hub_height")]
    pub hub_height_m: f64,
    #[serde(default = "default_anemometer_height")]
    pub anemometer_height_m: f64,
    #[serde(default = "default_shear")]
    pub shear_exponent: f64,
    /// Optional `speed_ms,fraction` curve; the built-in small-turbine
    /// curve applies when absent.
    pub power_curve_csv: Option<String>,
    pub capital_per_unit: f64,
    pub replacement_per_unit: f64,
    pub om_per_unit_year: f64,
    pub lifetime_years: f64,
}

fn default_wt_rating() -> f64 {
    3.0
}
fn default_hub_height() -> f64 {
    12.0
}
fn default_anemometer_height() -> f64 {
    10.0
}
fn default_shear() -> f64 {
    1.0 / 7.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatterySection {
    pub count: u32,
    #[serde(default = "default_batt_capacity")]
    pub unit_capacity_kwh: f64,
    #[serde(default = "default_batt_voltage")]
    pub nominal_voltage: f64,
    #[serde(default = "default_roundtrip")]
    pub roundtrip_efficiency: f64,
    #[serde(default = "default_soc_min")]
    pub soc_min: f64,
    #[serde(default = "one")]
    pub soc_max: f64,
    /// Power limit per unit [kW]; defaults to a 1C rate.
    pub max_charge_kw_per_unit: Option<f64>,
    pub max_discharge_kw_per_unit: Option<f64>,
    #[serde(default)]
    pub self_discharge_per_hour: f64,
    pub capital_per_unit: f64,
    pub replacement_per_unit: f64,
    pub om_per_unit_year: f64,
    pub lifetime_years: f64,
}

fn default_batt_capacity() -> f64 {
    2.0
}
fn default_batt_voltage() -> f64 {
    12.0
}
fn default_roundtrip() -> f64 {
    0.97
}
fn default_soc_min() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GensetSection {
    pub rated_kw: f64,
    #[serde(default = "default_min_load")]
    pub min_load_ratio: f64,
    #[serde(default = "default_fuel_intercept")]
    pub fuel_intercept_l_per_h_per_kw: f64,
    #[serde(default = "default_fuel_slope")]
    pub fuel_slope_l_per_kwh: f64,
    pub fuel_price_per_l: f64,
    pub lifetime_hours: f64,
    pub capital_per_kw: f64,
    pub replacement_per_kw: f64,
    pub om_per_op_hour: f64,
}

fn default_min_load() -> f64 {
    0.25
}
fn default_fuel_intercept() -> f64 {
    0.08145
}
fn default_fuel_slope() -> f64 {
    0.246
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConverterSection {
    pub rated_kw: f64,
    #[serde(default = "default_converter_eff")]
    pub efficiency: f64,
    pub capital_per_kw: f64,
    pub replacement_per_kw: f64,
    pub om_per_kw_year: f64,
    pub lifetime_years: f64,
}

fn default_converter_eff() -> f64 {
    0.97
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub tariff_per_kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispatchSection {
    #[serde(default = "default_strategy")]
    pub strategy: String,
    /// Starting state of charge; defaults to the battery ceiling.
    pub initial_soc: Option<f64>,
    #[serde(default = "default_air_density")]
    pub air_density_kg_m3: f64,
}

impl Default for DispatchSection {
    fn default() -> Self {
        Self { strategy: default_strategy(), initial_soc: None, air_density_kg_m3: default_air_density() }
    }
}

fn default_strategy() -> String {
    "lf".to_string()
}
fn default_air_density() -> f64 {
    1.225
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsSection {
    #[serde(default)]
    pub max_unmet_fraction: f64,
    #[serde(default)]
    pub min_renewable_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub n_pv: Vec<u32>,
    pub n_wt: Vec<u32>,
    pub n_batt: Vec<u32>,
    pub genset_kw: Vec<f64>,
    pub converter_kw: Vec<f64>,
    #[serde(default)]
    pub prune: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EmissionsSection {
    pub genset_kg_per_l: Option<SpeciesTable>,
    pub grid_kg_per_kwh: Option<SpeciesTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesTable {
    #[serde(default)]
    pub co2: f64,
    #[serde(default)]
    pub co: f64,
    #[serde(default)]
    pub uhc: f64,
    #[serde(default)]
    pub pm: f64,
    #[serde(default)]
    pub so2: f64,
    #[serde(default)]
    pub nox: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub directory: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: default_out_dir(), seed: default_seed() }
    }
}

fn default_out_dir() -> String {
    "out".to_string()
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Errors in this module are configuration errors by definition; the
/// caller maps them to the config exit code.
impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut config: ScenarioConfig =
            toml::from_str(&text).with_context(|| format!("config {}", path.display()))?;
        config.base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.finance;
        if f.project_life_years == 0 {
            bail!("finance.project_life_years: must be at least 1");
        }
        if f.expected_inflation_rate <= -1.0 {
            bail!("finance.expected_inflation_rate: must be greater than -1");
        }
        if let Some(pv) = &self.pv {
            if !(0.0..=1.0).contains(&pv.derating) || pv.derating == 0.0 {
                bail!("pv.derating: must lie in (0, 1]");
            }
            if pv.unit_rating_kw <= 0.0 {
                bail!("pv.unit_rating_kw: must be positive");
            }
            if !(40.0..=50.0).contains(&pv.noct_c) {
                bail!("pv.noct_c: must lie in [40, 50]");
            }
        }
        if let Some(b) = &self.battery {
            if !(0.0..=1.0).contains(&b.soc_min) || !(0.0..=1.0).contains(&b.soc_max) || b.soc_min >= b.soc_max {
                bail!("battery.soc_min/soc_max: need 0 <= soc_min < soc_max <= 1");
            }
            if !(0.0..=1.0).contains(&b.roundtrip_efficiency) || b.roundtrip_efficiency == 0.0 {
                bail!("battery.roundtrip_efficiency: must lie in (0, 1]");
            }
        }
        if let Some(w) = &self.wind_turbine {
            if w.hub_height_m <= 0.0 || w.anemometer_height_m <= 0.0 {
                bail!("wind_turbine heights: must be positive");
            }
            if w.unit_rating_kw <= 0.0 {
                bail!("wind_turbine.unit_rating_kw: must be positive");
            }
        }
        if let Some(g) = &self.genset {
            if !(0.0..1.0).contains(&g.min_load_ratio) {
                bail!("genset.min_load_ratio: must lie in [0, 1)");
            }
            if g.rated_kw < 0.0 {
                bail!("genset.rated_kw: must be nonnegative");
            }
            if g.fuel_intercept_l_per_h_per_kw < 0.0 || g.fuel_slope_l_per_kwh < 0.0 {
                bail!("genset fuel curve coefficients: must be nonnegative");
            }
            if g.fuel_price_per_l < 0.0 {
                bail!("genset.fuel_price_per_l: must be nonnegative");
            }
            if g.lifetime_hours <= 0.0 {
                bail!("genset.lifetime_hours: must be positive");
            }
        }
        if let Some(c) = &self.converter {
            if !(0.0..=1.0).contains(&c.efficiency) || c.efficiency == 0.0 {
                bail!("converter.efficiency: must lie in (0, 1]");
            }
        }
        if let Some(grid) = &self.grid {
            if grid.tariff_per_kwh < 0.0 {
                bail!("grid.tariff_per_kwh: must be nonnegative");
            }
        }
        type Prices = Option<(f64, f64, f64)>;
        let price_fields: [(&str, Prices); 5] = [
            ("pv", self.pv.as_ref().map(|s| (s.capital_per_kw, s.replacement_per_kw, s.om_per_kw_year))),
            ("wind_turbine", self.wind_turbine.as_ref().map(|s| (s.capital_per_unit, s.replacement_per_unit, s.om_per_unit_year))),
            ("battery", self.battery.as_ref().map(|s| (s.capital_per_unit, s.replacement_per_unit, s.om_per_unit_year))),
            ("genset", self.genset.as_ref().map(|s| (s.capital_per_kw, s.replacement_per_kw, s.om_per_op_hour))),
            ("converter", self.converter.as_ref().map(|s| (s.capital_per_kw, s.replacement_per_kw, s.om_per_kw_year))),
        ];
        for (name, prices) in price_fields {
            if let Some((capital, replacement, om)) = prices {
                if capital < 0.0 || replacement < 0.0 || om < 0.0 {
                    bail!("{name}: capital, replacement, and O&M prices must be nonnegative");
                }
            }
        }
        if !(0.0..=1.0).contains(&self.constraints.max_unmet_fraction) {
            bail!("constraints.max_unmet_fraction: must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.constraints.min_renewable_fraction) {
            bail!("constraints.min_renewable_fraction: must lie in [0, 1]");
        }
        parse_strategy(&self.dispatch.strategy)?;
        if let Some(r) = &self.resources {
            if r.fetch && self.site.is_none() {
                bail!("resources.fetch: requires a [site] section with coordinates");
            }
        }
        Ok(())
    }

    pub fn strategy(&self) -> Result<Strategy> {
        parse_strategy(&self.dispatch.strategy)
    }

    pub fn finance_spec(&self) -> Result<FinanceSpec<f64>> {
        FinanceSpec::new(
            self.finance.nominal_discount_rate,
            self.finance.expected_inflation_rate,
            self.finance.project_life_years,
        )
        .map_err(|e| anyhow!("finance: {e}"))
    }

    fn pv_spec(&self) -> PvSpec<f64> {
        match &self.pv {
            Some(s) => PvSpec {
                unit_rating_kw: s.unit_rating_kw,
                derating: s.derating,
                temp_coeff_per_c: s.temp_coeff_per_c,
                noct_c: s.noct_c,
                ref_cell_temp_c: 25.0,
                ref_irradiance_kw_m2: 1.0,
            },
            None => PvSpec::default_unit(),
        }
    }

    fn wind_spec(&self) -> Result<WindSpec<f64>> {
        let mut spec = WindSpec::default_small_turbine();
        if let Some(s) = &self.wind_turbine {
            spec.unit_rating_kw = s.unit_rating_kw;
            spec.hub_height_m = s.hub_height_m;
            spec.anemometer_height_m = s.anemometer_height_m;
            spec.shear_exponent = s.shear_exponent;
            if let Some(path) = &s.power_curve_csv {
                let text = fs::read_to_string(self.base_dir.join(path))
                    .with_context(|| format!("wind_turbine.power_curve_csv: cannot read {path}"))?;
                spec.curve = PowerCurve::parse_csv(&text)
                    .map_err(|e| anyhow!("wind_turbine.power_curve_csv: {e}"))?;
            }
        }
        Ok(spec)
    }

    fn battery_spec(&self) -> BatterySpec<f64> {
        let mut spec = BatterySpec::default_unit();
        if let Some(s) = &self.battery {
            spec.unit_capacity_kwh = s.unit_capacity_kwh;
            spec.nominal_voltage = s.nominal_voltage;
            spec.roundtrip_efficiency = s.roundtrip_efficiency;
            spec.soc_min = s.soc_min;
            spec.soc_max = s.soc_max;
            spec.self_discharge_per_hour = s.self_discharge_per_hour;
            spec.max_charge_kw_per_unit = s.max_charge_kw_per_unit.unwrap_or(s.unit_capacity_kwh);
            spec.max_discharge_kw_per_unit = s.max_discharge_kw_per_unit.unwrap_or(s.unit_capacity_kwh);
        }
        spec
    }

    fn genset_spec(&self) -> GensetSpec<f64> {
        match &self.genset {
            Some(s) => GensetSpec {
                rated_kw: s.rated_kw,
                min_load_ratio: s.min_load_ratio,
                fuel_intercept_l_per_h_per_kw: s.fuel_intercept_l_per_h_per_kw,
                fuel_slope_l_per_kwh: s.fuel_slope_l_per_kwh,
                lifetime_hours: s.lifetime_hours,
                fuel_price_per_l: s.fuel_price_per_l,
            },
            None => GensetSpec::with_rating(0.0),
        }
    }

    fn converter_spec(&self) -> ConverterSpec<f64> {
        match &self.converter {
            Some(s) => ConverterSpec { rated_kw: s.rated_kw, efficiency: s.efficiency },
            None => ConverterSpec::with_rating(0.0),
        }
    }

    pub fn system_config(&self, strategy_override: Option<Strategy>) -> Result<SystemConfig<f64>> {
        let strategy = match strategy_override {
            Some(s) => s,
            None => self.strategy()?,
        };
        Ok(SystemConfig {
            n_pv: self.pv.as_ref().map(|s| s.count).unwrap_or(0),
            n_wt: self.wind_turbine.as_ref().map(|s| s.count).unwrap_or(0),
            n_batt: self.battery.as_ref().map(|s| s.count).unwrap_or(0),
            pv: self.pv_spec(),
            wind: self.wind_spec()?,
            battery: self.battery_spec(),
            genset: self.genset_spec(),
            converter: self.converter_spec(),
            strategy,
            air_density: self.dispatch.air_density_kg_m3,
        })
    }

    pub fn initial_soc(&self) -> f64 {
        self.dispatch
            .initial_soc
            .unwrap_or_else(|| self.battery.as_ref().map(|b| b.soc_max).unwrap_or(1.0))
    }

    pub fn price_table(&self) -> PriceTable<f64> {
        let zero = UnitCosts { capital: 0.0, replacement: 0.0, om_per_year: 0.0, lifetime_years: None };
        PriceTable {
            pv: self
                .pv
                .as_ref()
                .map(|s| UnitCosts {
                    capital: s.capital_per_kw,
                    replacement: s.replacement_per_kw,
                    om_per_year: s.om_per_kw_year,
                    lifetime_years: Some(s.lifetime_years),
                })
                .unwrap_or_else(|| zero.clone()),
            wind: self
                .wind_turbine
                .as_ref()
                .map(|s| UnitCosts {
                    capital: s.capital_per_unit,
                    replacement: s.replacement_per_unit,
                    om_per_year: s.om_per_unit_year,
                    lifetime_years: Some(s.lifetime_years),
                })
                .unwrap_or_else(|| zero.clone()),
            battery: self
                .battery
                .as_ref()
                .map(|s| UnitCosts {
                    capital: s.capital_per_unit,
                    replacement: s.replacement_per_unit,
                    om_per_year: s.om_per_unit_year,
                    lifetime_years: Some(s.lifetime_years),
                })
                .unwrap_or_else(|| zero.clone()),
            genset: self
                .genset
                .as_ref()
                .map(|s| UnitCosts {
                    capital: s.capital_per_kw,
                    replacement: s.replacement_per_kw,
                    om_per_year: s.om_per_op_hour,
                    lifetime_years: None,
                })
                .unwrap_or_else(|| zero.clone()),
            converter: self
                .converter
                .as_ref()
                .map(|s| UnitCosts {
                    capital: s.capital_per_kw,
                    replacement: s.replacement_per_kw,
                    om_per_year: s.om_per_kw_year,
                    lifetime_years: Some(s.lifetime_years),
                })
                .unwrap_or(zero),
        }
    }

    pub fn constraints(&self) -> Constraints<f64> {
        Constraints {
            max_unmet_fraction: self.constraints.max_unmet_fraction,
            min_renewable_fraction: self.constraints.min_renewable_fraction,
        }
    }

    pub fn search_space(&self) -> Result<SearchSpace<f64>> {
        let s = self
            .search
            .as_ref()
            .ok_or_else(|| anyhow!("search: section required for the optimize command"))?;
        let space = SearchSpace {
            n_pv: s.n_pv.clone(),
            n_wt: s.n_wt.clone(),
            n_batt: s.n_batt.clone(),
            genset_kw: s.genset_kw.clone(),
            converter_kw: s.converter_kw.clone(),
        };
        space.validate().map_err(|e| anyhow!("search: {e}"))?;
        Ok(space)
    }

    pub fn emission_factors(&self) -> EmissionFactors<f64> {
        let mut factors = EmissionFactors::default_factors();
        if let Some(t) = &self.emissions.genset_kg_per_l {
            factors.genset_kg_per_l = species(t);
        }
        if let Some(t) = &self.emissions.grid_kg_per_kwh {
            factors.grid_kg_per_kwh = species(t);
        }
        factors
    }

    /// Builds the hourly demand series from a CSV or by synthesis.
    pub fn build_load(&self, seed: u64) -> Result<TimeSeries<f64>> {
        if let Some(path) = &self.load.csv {
            let text = fs::read_to_string(self.base_dir.join(path))
                .with_context(|| format!("load.csv: cannot read {path}"))?;
            return parse_hourly_csv(Quantity::LoadKw, &text).map_err(|e| anyhow!("load.csv: {e}"));
        }
        let avg = self
            .load
            .avg_daily_kwh
            .ok_or_else(|| anyhow!("load: needs either csv or avg_daily_kwh + peak_kw"))?;
        let peak = self
            .load
            .peak_kw
            .ok_or_else(|| anyhow!("load.peak_kw: required when synthesizing"))?;
        let shape = self.load.shape.build("load.shape")?;
        synthesize_load(avg, peak, &shape, seed.wrapping_add(SEED_LOAD)).map_err(|e| anyhow!("load: {e}"))
    }

    /// Builds the three hourly resource series from CSVs, inline monthly
    /// tables, or a NASA POWER fetch.
    pub fn build_resources(&self, seed: u64, allow_network: bool) -> Result<Resources<f64>> {
        let resources = self
            .resources
            .as_ref()
            .ok_or_else(|| anyhow!("resources: section required for this command"))?;
        let fetched = if resources.fetch {
            let site = self.site.as_ref().expect("validated");
            let client = NasaPowerClient::from_env();
            Some(
                client
                    .fetch_monthly::<f64>(site.latitude, site.longitude, allow_network)
                    .map_err(|e| anyhow!("resources.fetch: {e}"))?,
            )
        } else {
            None
        };

        let solar = &resources.solar;
        let ghi = if let Some(path) = &solar.csv {
            let text = fs::read_to_string(self.base_dir.join(path))
                .with_context(|| format!("resources.solar.csv: cannot read {path}"))?;
            parse_hourly_csv(Quantity::GhiKwM2, &text).map_err(|e| anyhow!("resources.solar.csv: {e}"))?
        } else {
            let months = match (&fetched, &solar.monthly_kwh_per_m2_day) {
                (Some(f), _) => f.ghi_kwh_m2_day,
                (None, Some(m)) => monthly_array("resources.solar.monthly_kwh_per_m2_day", m)?,
                (None, None) => bail!("resources.solar: needs csv, monthly_kwh_per_m2_day, or fetch"),
            };
            let profile = MonthlyProfile::from_daily_energy(Quantity::GhiKwM2, months)
                .map_err(|e| anyhow!("resources.solar: {e}"))?;
            let [sunrise, sunset] = solar.daylight;
            let shape = DailyShape::solar_bell(sunrise, sunset)
                .map_err(|e| anyhow!("resources.solar.daylight: {e}"))?;
            let ts = synthesize_from_monthly(&profile, &shape, solar.day_variability, seed.wrapping_add(SEED_GHI))
                .map_err(|e| anyhow!("resources.solar: {e}"))?;
            match solar.scale_annual_mean_to_kwh_per_m2_day {
                Some(target) => ts
                    .scale_to_mean(target / 24.0)
                    .map_err(|e| anyhow!("resources.solar.scale_annual_mean_to_kwh_per_m2_day: {e}"))?,
                None => ts,
            }
        };

        let wind_res = &resources.wind;
        let wind = if let Some(path) = &wind_res.csv {
            let text = fs::read_to_string(self.base_dir.join(path))
                .with_context(|| format!("resources.wind.csv: cannot read {path}"))?;
            parse_hourly_csv(Quantity::WindMs, &text).map_err(|e| anyhow!("resources.wind.csv: {e}"))?
        } else {
            let months = match (&fetched, &wind_res.monthly_m_per_s) {
                (Some(f), _) => f.wind_ms,
                (None, Some(m)) => monthly_array("resources.wind.monthly_m_per_s", m)?,
                (None, None) => bail!("resources.wind: needs csv, monthly_m_per_s, or fetch"),
            };
            let profile = MonthlyProfile::new(Quantity::WindMs, months)
                .map_err(|e| anyhow!("resources.wind: {e}"))?;
            let ts = synthesize_from_monthly(
                &profile,
                &DailyShape::uniform(),
                wind_res.day_variability,
                seed.wrapping_add(SEED_WIND),
            )
            .map_err(|e| anyhow!("resources.wind: {e}"))?;
            match wind_res.scale_annual_mean_to_m_per_s {
                Some(target) => ts
                    .scale_to_mean(target)
                    .map_err(|e| anyhow!("resources.wind.scale_annual_mean_to_m_per_s: {e}"))?,
                None => ts,
            }
        };

        let temp_res = &resources.temperature;
        let temperature = if let Some(path) = &temp_res.csv {
            let text = fs::read_to_string(self.base_dir.join(path))
                .with_context(|| format!("resources.temperature.csv: cannot read {path}"))?;
            parse_hourly_csv(Quantity::TempC, &text).map_err(|e| anyhow!("resources.temperature.csv: {e}"))?
        } else {
            let months = match (&fetched, &temp_res.monthly_c) {
                (Some(f), _) => f.temperature_c,
                (None, Some(m)) => monthly_array("resources.temperature.monthly_c", m)?,
                (None, None) => bail!("resources.temperature: needs csv, monthly_c, or fetch"),
            };
            let profile = MonthlyProfile::new(Quantity::TempC, months)
                .map_err(|e| anyhow!("resources.temperature: {e}"))?;
            synthesize_from_monthly(
                &profile,
                &DailyShape::uniform(),
                temp_res.day_variability,
                seed.wrapping_add(SEED_TEMP),
            )
            .map_err(|e| anyhow!("resources.temperature: {e}"))?
        };

        Resources::new(ghi, wind, temperature).map_err(|e| anyhow!("resources: {e}"))
    }

    pub fn grid_tariff(&self) -> Result<f64> {
        self.grid
            .as_ref()
            .map(|g| g.tariff_per_kwh)
            .ok_or_else(|| anyhow!("grid.tariff_per_kwh: required for the baseline command"))
    }
}

fn parse_strategy(text: &str) -> Result<Strategy> {
    match text {
        "lf" => Ok(Strategy::LoadFollowing),
        "cc" => Ok(Strategy::CycleCharging),
        other => bail!("dispatch.strategy: expected \"lf\" or \"cc\", got {other:?}"),
    }
}

fn monthly_array(field: &str, values: &[f64]) -> Result<[f64; 12]> {
    values
        .to_vec()
        .try_into()
        .map_err(|_| anyhow!("{field}: expected exactly 12 values, got {}", values.len()))
}

fn species(t: &SpeciesTable) -> SpeciesAmounts<f64> {
    SpeciesAmounts { co2: t.co2, co: t.co, uhc: t.uhc, pm: t.pm, so2: t.so2, nox: t.nox }
}
