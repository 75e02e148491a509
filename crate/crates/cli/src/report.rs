//! Report emission: deterministic JSON and CSV files plus the stdout
//! summary. Identical inputs and seed produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use mgsim_core::dispatch::{monthly_production, Aggregates, DispatchResult, Strategy};
use mgsim_core::economics::{costs_csv, EconomicSummary};
use mgsim_core::emissions::EmissionsReport;
use mgsim_core::optimizer::{ConstraintStats, Infeasibility, OptimizeOutcome};

/// Sizing echo so every report is self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct SystemEcho {
    pub n_pv: u32,
    pub n_wt: u32,
    pub n_batt: u32,
    pub genset_kw: f64,
    pub converter_kw: f64,
    pub strategy: &'static str,
}

pub fn strategy_name(strategy: Strategy) -> &'static str {
    match strategy {
        Strategy::LoadFollowing => "lf",
        Strategy::CycleCharging => "cc",
    }
}

#[derive(Serialize)]
pub struct SimulateSummary<'a> {
    pub command: &'static str,
    pub seed: u64,
    pub system: SystemEcho,
    pub dispatch: &'a Aggregates<f64>,
    pub max_balance_residual_kw: f64,
    pub economics: &'a EconomicSummary<f64>,
    pub emissions: &'a EmissionsReport<f64>,
}

#[derive(Serialize)]
pub struct BaselineSummary<'a> {
    pub command: &'static str,
    pub seed: u64,
    pub tariff_per_kwh: f64,
    pub annual_kwh: f64,
    pub economics: &'a EconomicSummary<f64>,
    pub emissions: &'a EmissionsReport<f64>,
}

#[derive(Serialize)]
struct RankedRow<'a> {
    rank: usize,
    n_pv: u32,
    n_wt: u32,
    n_batt: u32,
    genset_kw: f64,
    converter_kw: f64,
    npc: f64,
    lcoe_per_kwh: f64,
    renewable_fraction: f64,
    unmet_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    economics: Option<&'a EconomicSummary<f64>>,
}

#[derive(Serialize)]
struct InfeasibleRow {
    n_pv: u32,
    n_wt: u32,
    n_batt: u32,
    genset_kw: f64,
    converter_kw: f64,
    reason: Infeasibility<f64>,
}

#[derive(Serialize)]
struct RankedReport<'a> {
    command: &'static str,
    seed: u64,
    strategy: &'static str,
    evaluated: usize,
    feasible: usize,
    stats: ConstraintStats,
    ranked: Vec<RankedRow<'a>>,
    infeasible: Vec<InfeasibleRow>,
}

fn unmet_fraction(a: &Aggregates<f64>) -> f64 {
    if a.load_kwh > 0.0 {
        a.unmet_kwh / a.load_kwh
    } else {
        0.0
    }
}

/// Feasible candidates as CSV, best NPC first. Header only when empty.
pub fn ranked_csv(outcome: &OptimizeOutcome<f64>) -> String {
    let mut out = String::from(
        "rank,n_pv,n_wt,n_batt,genset_kw,converter_kw,npc,lcoe_per_kwh,renewable_fraction,unmet_fraction\n",
    );
    for (rank, entry) in outcome.ranked.iter().enumerate() {
        let c = &entry.candidate;
        out.push_str(&format!(
            "{},{},{},{},{:.3},{:.3},{:.2},{:.6},{:.6},{:.8}\n",
            rank + 1,
            c.n_pv,
            c.n_wt,
            c.n_batt,
            c.genset_kw,
            c.converter_kw,
            entry.summary.npc,
            entry.summary.lcoe_per_kwh,
            entry.aggregates.renewable_fraction,
            unmet_fraction(&entry.aggregates),
        ));
    }
    out
}

pub fn ranked_json(outcome: &OptimizeOutcome<f64>, seed: u64, strategy: Strategy) -> Result<String> {
    let ranked: Vec<RankedRow> = outcome
        .ranked
        .iter()
        .enumerate()
        .map(|(rank, entry)| RankedRow {
            rank: rank + 1,
            n_pv: entry.candidate.n_pv,
            n_wt: entry.candidate.n_wt,
            n_batt: entry.candidate.n_batt,
            genset_kw: entry.candidate.genset_kw,
            converter_kw: entry.candidate.converter_kw,
            npc: entry.summary.npc,
            lcoe_per_kwh: entry.summary.lcoe_per_kwh,
            renewable_fraction: entry.aggregates.renewable_fraction,
            unmet_fraction: unmet_fraction(&entry.aggregates),
            economics: Some(&entry.summary),
        })
        .collect();
    let infeasible: Vec<InfeasibleRow> = outcome
        .infeasible
        .iter()
        .map(|(c, reason)| InfeasibleRow {
            n_pv: c.n_pv,
            n_wt: c.n_wt,
            n_batt: c.n_batt,
            genset_kw: c.genset_kw,
            converter_kw: c.converter_kw,
            reason: *reason,
        })
        .collect();
    let report = RankedReport {
        command: "optimize",
        seed,
        strategy: strategy_name(strategy),
        evaluated: outcome.ranked.len() + outcome.infeasible.len(),
        feasible: outcome.ranked.len(),
        stats: outcome.stats,
        ranked,
        infeasible,
    };
    to_json(&report)
}

/// Monthly production CSV in long form, one row per month per source,
/// ready for any plotting tool.
pub fn monthly_csv(result: &DispatchResult<f64>) -> String {
    let mut out = String::from("month,source,energy_kwh\n");
    for row in monthly_production(result) {
        for (source, kwh) in [("pv", row.pv_kwh), ("wind", row.wind_kwh), ("genset", row.genset_kwh), ("served", row.served_kwh)] {
            out.push_str(&format!("{},{source},{kwh:.3}\n", row.month));
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("serializing report")?;
    text.push('\n');
    Ok(text)
}

/// Writes one report file and echoes its path.
pub fn write_file(out_dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Costs CSV re-exported so callers only need this module.
pub fn costs_csv_text(summary: &EconomicSummary<f64>) -> String {
    costs_csv(summary)
}
