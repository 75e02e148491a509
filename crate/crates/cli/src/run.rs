//! Command execution: load the scenario, run the requested computation,
//! write reports, and classify failures into exit codes.

use std::path::{Path, PathBuf};

use anyhow::anyhow;

use mgsim_core::dispatch::{simulate_year, verify_energy_balance, Strategy};
use mgsim_core::economics::{baseline_grid, system_summary};
use mgsim_core::emissions::{genset_emissions, grid_emissions};
use mgsim_core::optimizer::{optimize, EvalContext, OptimizeOptions};
use mgsim_core::series::to_hourly_csv;

use crate::config::ScenarioConfig;
use crate::report;

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "MGSIM_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Baseline,
    Simulate,
    Optimize,
    Synth,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Baseline => "baseline",
            CommandKind::Simulate => "simulate",
            CommandKind::Optimize => "optimize",
            CommandKind::Synth => "synth",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub command: CommandKind,
    pub config_path: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub strategy: Option<String>,
    pub workers: usize,
    pub allow_network: bool,
}

/// Failure classes, one exit code each.
#[derive(Debug)]
pub enum RunFailure {
    /// Exit 2: the configuration is invalid.
    Config(String),
    /// Exit 1: the computation or I/O failed.
    Runtime(String),
    /// Exit 3: the optimizer found no feasible candidate.
    NoFeasible(String),
}

impl RunFailure {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunFailure::Runtime(_) => 1,
            RunFailure::Config(_) => 2,
            RunFailure::NoFeasible(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunFailure::Config(m) | RunFailure::Runtime(m) | RunFailure::NoFeasible(m) => m,
        }
    }
}

fn config_err(e: anyhow::Error) -> RunFailure {
    RunFailure::Config(format!("{e:#}"))
}

fn runtime_err(e: anyhow::Error) -> RunFailure {
    RunFailure::Runtime(format!("{e:#}"))
}

pub fn execute(args: &RunArgs) -> Result<(), RunFailure> {
    let config = ScenarioConfig::load(&args.config_path).map_err(config_err)?;
    let seed = args.seed.unwrap_or(config.output.seed);
    let out_dir = resolve_out_dir(args, &config);
    let strategy = match &args.strategy {
        Some(text) => Some(parse_strategy_flag(text)?),
        None => None,
    };

    println!(
        "mgsim {} | config {} | seed {seed} | out {}",
        args.command.name(),
        args.config_path.display(),
        out_dir.display()
    );

    match args.command {
        CommandKind::Baseline => baseline(&config, seed, &out_dir),
        CommandKind::Simulate => simulate(&config, seed, strategy, &out_dir, args.allow_network),
        CommandKind::Optimize => run_optimize(&config, seed, strategy, &out_dir, args, args.allow_network),
        CommandKind::Synth => synth(&config, seed, &out_dir, args.allow_network),
    }
}

fn resolve_out_dir(args: &RunArgs, config: &ScenarioConfig) -> PathBuf {
    if let Some(dir) = &args.out_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(&config.output.directory)
}

fn parse_strategy_flag(text: &str) -> Result<Strategy, RunFailure> {
    match text {
        "lf" => Ok(Strategy::LoadFollowing),
        "cc" => Ok(Strategy::CycleCharging),
        other => Err(RunFailure::Config(format!(
            "--strategy: expected \"lf\" or \"cc\", got {other:?}"
        ))),
    }
}

fn baseline(config: &ScenarioConfig, seed: u64, out_dir: &Path) -> Result<(), RunFailure> {
    let tariff = config.grid_tariff().map_err(config_err)?;
    let finance = config.finance_spec().map_err(config_err)?;
    let load = config.build_load(seed).map_err(config_err)?;
    let annual_kwh = load.sum();

    let economics = baseline_grid(annual_kwh, tariff, &finance)
        .map_err(|e| runtime_err(anyhow!("baseline economics: {e}")))?;
    let emissions = grid_emissions(annual_kwh, &config.emission_factors());

    let summary = report::BaselineSummary {
        command: "baseline",
        seed,
        tariff_per_kwh: tariff,
        annual_kwh,
        economics: &economics,
        emissions: &emissions,
    };
    write_all(
        out_dir,
        &[
            ("summary.json", report::to_json(&summary).map_err(runtime_err)?),
            ("costs.csv", report::costs_csv_text(&economics)),
            ("emissions.json", report::to_json(&emissions).map_err(runtime_err)?),
        ],
    )?;

    println!(
        "grid baseline: {annual_kwh:.0} kWh/yr at {tariff} $/kWh | operating {:.0} $/yr | NPC {:.0} $ | LCOE {:.4} $/kWh",
        economics.operating_cost_per_year, economics.npc, economics.lcoe_per_kwh
    );
    Ok(())
}

fn simulate(
    config: &ScenarioConfig,
    seed: u64,
    strategy: Option<Strategy>,
    out_dir: &Path,
    allow_network: bool,
) -> Result<(), RunFailure> {
    let finance = config.finance_spec().map_err(config_err)?;
    let system = config.system_config(strategy).map_err(config_err)?;
    let load = config.build_load(seed).map_err(config_err)?;
    let resources = config.build_resources(seed, allow_network).map_err(config_err)?;

    let dispatch = simulate_year(&system, &resources, &load, config.initial_soc())
        .map_err(|e| runtime_err(anyhow!("simulation: {e}")))?;
    let residual = verify_energy_balance(&dispatch);
    let economics = system_summary(&system, &dispatch, &config.price_table(), &finance)
        .map_err(|e| runtime_err(anyhow!("economics: {e}")))?;
    let emissions = genset_emissions(dispatch.aggregates.fuel_l, &config.emission_factors());

    let summary = report::SimulateSummary {
        command: "simulate",
        seed,
        system: report::SystemEcho {
            n_pv: system.n_pv,
            n_wt: system.n_wt,
            n_batt: system.n_batt,
            genset_kw: system.genset.rated_kw,
            converter_kw: system.converter.rated_kw,
            strategy: report::strategy_name(system.strategy),
        },
        dispatch: &dispatch.aggregates,
        max_balance_residual_kw: residual,
        economics: &economics,
        emissions: &emissions,
    };
    write_all(
        out_dir,
        &[
            ("summary.json", report::to_json(&summary).map_err(runtime_err)?),
            ("hourly.csv", mgsim_core::dispatch::hourly_csv(&dispatch)),
            ("costs.csv", report::costs_csv_text(&economics)),
            ("emissions.json", report::to_json(&emissions).map_err(runtime_err)?),
            ("monthly.csv", report::monthly_csv(&dispatch)),
        ],
    )?;

    let a = &dispatch.aggregates;
    println!(
        "served {:.0} kWh/yr (unmet {:.2}%) | RF {:.3} | fuel {:.0} L/yr | NPC {:.0} $ | LCOE {:.4} $/kWh",
        a.served_kwh,
        100.0 * a.unmet_kwh / a.load_kwh.max(1e-9),
        a.renewable_fraction,
        a.fuel_l,
        economics.npc,
        economics.lcoe_per_kwh
    );
    Ok(())
}

fn run_optimize(
    config: &ScenarioConfig,
    seed: u64,
    strategy: Option<Strategy>,
    out_dir: &Path,
    args: &RunArgs,
    allow_network: bool,
) -> Result<(), RunFailure> {
    let finance = config.finance_spec().map_err(config_err)?;
    let base = config.system_config(strategy).map_err(config_err)?;
    let load = config.build_load(seed).map_err(config_err)?;
    let resources = config.build_resources(seed, allow_network).map_err(config_err)?;
    let space = config.search_space().map_err(config_err)?;
    let prices = config.price_table();
    let constraints = config.constraints();

    let ctx = EvalContext {
        base: &base,
        resources: &resources,
        load: &load,
        initial_soc: config.initial_soc(),
        prices: &prices,
        finance: &finance,
        constraints,
    };
    let options = OptimizeOptions {
        workers: args.workers.max(1),
        prune: config.search.as_ref().map(|s| s.prune).unwrap_or(false),
    };
    let outcome =
        optimize(&ctx, &space, options).map_err(|e| runtime_err(anyhow!("optimize: {e}")))?;

    let mut files = vec![
        ("ranked.csv", report::ranked_csv(&outcome)),
        ("ranked.json", report::ranked_json(&outcome, seed, base.strategy).map_err(runtime_err)?),
    ];
    if let Some(best) = outcome.ranked.first() {
        let echo = report::SystemEcho {
            n_pv: best.candidate.n_pv,
            n_wt: best.candidate.n_wt,
            n_batt: best.candidate.n_batt,
            genset_kw: best.candidate.genset_kw,
            converter_kw: best.candidate.converter_kw,
            strategy: report::strategy_name(base.strategy),
        };
        let summary = report::SimulateSummary {
            command: "optimize",
            seed,
            system: echo,
            dispatch: &best.aggregates,
            max_balance_residual_kw: 0.0,
            economics: &best.summary,
            emissions: &genset_emissions(best.aggregates.fuel_l, &config.emission_factors()),
        };
        files.push(("summary.json", report::to_json(&summary).map_err(runtime_err)?));
        files.push(("costs.csv", report::costs_csv_text(&best.summary)));
    }
    write_all(out_dir, &files)?;

    if outcome.ranked.is_empty() {
        return Err(RunFailure::NoFeasible(format!(
            "no feasible candidate among {}: {} unmet-load violations, {} renewable-fraction violations",
            outcome.infeasible.len(),
            outcome.stats.unmet_violations,
            outcome.stats.renewable_violations
        )));
    }
    let best = &outcome.ranked[0];
    println!(
        "{} candidates, {} feasible | best: {} PV / {} WT / {} BT / {:.0} kW DG / {:.0} kW conv | NPC {:.0} $ | LCOE {:.4} $/kWh",
        outcome.ranked.len() + outcome.infeasible.len(),
        outcome.ranked.len(),
        best.candidate.n_pv,
        best.candidate.n_wt,
        best.candidate.n_batt,
        best.candidate.genset_kw,
        best.candidate.converter_kw,
        best.summary.npc,
        best.summary.lcoe_per_kwh
    );
    Ok(())
}

fn synth(config: &ScenarioConfig, seed: u64, out_dir: &Path, allow_network: bool) -> Result<(), RunFailure> {
    let load = config.build_load(seed).map_err(config_err)?;
    let resources = config.build_resources(seed, allow_network).map_err(config_err)?;

    write_all(
        out_dir,
        &[
            ("load.csv", to_hourly_csv(&load)),
            ("ghi.csv", to_hourly_csv(&resources.ghi)),
            ("wind.csv", to_hourly_csv(&resources.wind)),
            ("temperature.csv", to_hourly_csv(&resources.temperature)),
        ],
    )?;

    let stats = load.load_stats().map_err(|e| runtime_err(anyhow!("load stats: {e}")))?;
    println!(
        "load {:.1} kWh/day, peak {:.2} kW, load factor {:.3} | ghi {:.2} kWh/m2/day | wind {:.2} m/s",
        stats.avg_daily_kwh,
        stats.peak_kw,
        stats.load_factor,
        resources.ghi.mean() * 24.0,
        resources.wind.mean()
    );
    Ok(())
}

fn write_all(out_dir: &Path, files: &[(&str, String)]) -> Result<(), RunFailure> {
    for (name, content) in files {
        let path = report::write_file(out_dir, name, content).map_err(runtime_err)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
