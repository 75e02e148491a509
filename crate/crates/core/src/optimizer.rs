//! Design-space enumeration and NPC ranking: every candidate fleet is
//! simulated for a full year, costed, filtered by feasibility constraints,
//! and sorted by net present cost.

use rayon::prelude::*;
use serde::Serialize;

use crate::dispatch::{simulate_year, Aggregates, DispatchResult, Resources, SystemConfig};
use crate::economics::{system_summary, EconomicSummary, FinanceSpec, PriceTable};
use crate::error::{Error, Result};
use crate::float::Float;
use crate::series::TimeSeries;

/// Finite candidate lists per decision variable.
#[derive(Debug, Clone)]
pub struct SearchSpace<T> {
    pub n_pv: Vec<u32>,
    pub n_wt: Vec<u32>,
    pub n_batt: Vec<u32>,
    pub genset_kw: Vec<T>,
    pub converter_kw: Vec<T>,
}

fn check_counts(name: &'static str, list: &[u32]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::EmptySearchDimension(name));
    }
    if list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnsortedSearchDimension(name));
    }
    Ok(())
}

fn check_ratings<T: Float>(name: &'static str, list: &[T]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::EmptySearchDimension(name));
    }
    if list.iter().any(|v| *v < T::zero()) || list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::UnsortedSearchDimension(name));
    }
    Ok(())
}

impl<T: Float> SearchSpace<T> {
    pub fn validate(&self) -> Result<()> {
        check_counts("n_pv", &self.n_pv)?;
        check_counts("n_wt", &self.n_wt)?;
        check_counts("n_batt", &self.n_batt)?;
        check_ratings("genset_kw", &self.genset_kw)?;
        check_ratings("converter_kw", &self.converter_kw)?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_pv.len() * self.n_wt.len() * self.n_batt.len() * self.genset_kw.len() * self.converter_kw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One point of the search space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateSize<T> {
    pub n_pv: u32,
    pub n_wt: u32,
    pub n_batt: u32,
    pub genset_kw: T,
    pub converter_kw: T,
}

impl<T: Float> CandidateSize<T> {
    fn dominates_or_equals(&self, other: &Self) -> bool {
        self.n_pv >= other.n_pv
            && self.n_wt >= other.n_wt
            && self.n_batt >= other.n_batt
            && self.genset_kw >= other.genset_kw
            && self.converter_kw >= other.converter_kw
    }

    fn sort_key(&self) -> (u32, u32, u32, f64, f64) {
        (self.n_pv, self.n_wt, self.n_batt, self.genset_kw.as_f64(), self.converter_kw.as_f64())
    }
}

/// Cartesian product in lexicographic order: `n_pv` varies slowest,
/// `converter_kw` fastest.
pub fn enumerate<T: Float>(space: &SearchSpace<T>) -> Result<Vec<CandidateSize<T>>> {
    space.validate()?;
    let mut out = Vec::with_capacity(space.len());
    for &n_pv in &space.n_pv {
        for &n_wt in &space.n_wt {
            for &n_batt in &space.n_batt {
                for &genset_kw in &space.genset_kw {
                    for &converter_kw in &space.converter_kw {
                        out.push(CandidateSize { n_pv, n_wt, n_batt, genset_kw, converter_kw });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Feasibility constraints on a candidate's annual dispatch.
#[derive(Debug, Clone, Copy)]
pub struct Constraints<T> {
    /// Largest tolerated unmet share of annual load.
    pub max_unmet_fraction: T,
    /// Smallest tolerated renewable fraction.
    pub min_renewable_fraction: T,
}

impl<T: Float> Constraints<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("max_unmet_fraction", self.max_unmet_fraction),
            ("min_renewable_fraction", self.min_renewable_fraction),
        ] {
            if v < T::zero() || v > T::one() {
                return Err(Error::OutOfRange { context: name, value: v.as_f64(), min: 0.0, max: 1.0 });
            }
        }
        Ok(())
    }
}

/// Why a candidate was excluded, with the violated limit and its margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum Infeasibility<T> {
    Unmet { fraction: T, limit: T },
    RenewableFraction { fraction: T, limit: T },
    /// Skipped without simulation: component-wise smaller than a candidate
    /// already infeasible on unmet load.
    DominatedUnmet,
}

/// Everything the ranking needs about one feasible candidate.
#[derive(Debug, Clone)]
pub struct RankedEntry<T> {
    pub candidate: CandidateSize<T>,
    pub summary: EconomicSummary<T>,
    pub aggregates: Aggregates<T>,
}

/// Outcome of evaluating a single candidate.
#[derive(Debug, Clone)]
pub enum Evaluation<T> {
    Feasible(Box<RankedEntry<T>>),
    Infeasible { candidate: CandidateSize<T>, reason: Infeasibility<T> },
}

/// Immutable inputs shared by every candidate evaluation.
pub struct EvalContext<'a, T> {
    pub base: &'a SystemConfig<T>,
    pub resources: &'a Resources<T>,
    pub load: &'a TimeSeries<T>,
    pub initial_soc: T,
    pub prices: &'a PriceTable<T>,
    pub finance: &'a FinanceSpec<T>,
    pub constraints: Constraints<T>,
}

/// Applies a candidate's sizes onto the base component specs.
pub fn apply_candidate<T: Float>(base: &SystemConfig<T>, c: &CandidateSize<T>) -> SystemConfig<T> {
    let mut cfg = base.clone();
    cfg.n_pv = c.n_pv;
    cfg.n_wt = c.n_wt;
    cfg.n_batt = c.n_batt;
    cfg.genset.rated_kw = c.genset_kw;
    cfg.converter.rated_kw = c.converter_kw;
    cfg
}

fn zero_summary<T: Float>(fin: &FinanceSpec<T>) -> EconomicSummary<T> {
    EconomicSummary {
        rows: Vec::new(),
        system: crate::economics::component_npc(&crate::economics::CostEvents::capital_only(T::zero()), fin),
        npc: T::zero(),
        lcoe_per_kwh: T::zero(),
        operating_cost_per_year: T::zero(),
        real_rate: fin.real_rate(),
        crf: fin.crf(),
        served_kwh_per_year: T::zero(),
        renewable_fraction: T::zero(),
    }
}

fn constraint_check<T: Float>(
    dispatch: &DispatchResult<T>,
    constraints: &Constraints<T>,
) -> std::result::Result<(), Infeasibility<T>> {
    let a = &dispatch.aggregates;
    let slack = T::of(1e-9);
    let unmet_fraction = if a.load_kwh > T::zero() { a.unmet_kwh / a.load_kwh } else { T::zero() };
    if unmet_fraction > constraints.max_unmet_fraction + slack {
        return Err(Infeasibility::Unmet { fraction: unmet_fraction, limit: constraints.max_unmet_fraction });
    }
    if a.renewable_fraction < constraints.min_renewable_fraction - slack {
        return Err(Infeasibility::RenewableFraction {
            fraction: a.renewable_fraction,
            limit: constraints.min_renewable_fraction,
        });
    }
    Ok(())
}

/// Simulates and costs one candidate against the constraints.
pub fn evaluate<T: Float>(ctx: &EvalContext<'_, T>, candidate: CandidateSize<T>) -> Result<Evaluation<T>> {
    let cfg = apply_candidate(ctx.base, &candidate);
    let dispatch = simulate_year(&cfg, ctx.resources, ctx.load, ctx.initial_soc)?;
    if let Err(reason) = constraint_check(&dispatch, &ctx.constraints) {
        return Ok(Evaluation::Infeasible { candidate, reason });
    }
    let summary = if dispatch.aggregates.served_kwh > T::zero() {
        system_summary(&cfg, &dispatch, ctx.prices, ctx.finance)?
    } else {
        zero_summary(ctx.finance)
    };
    Ok(Evaluation::Feasible(Box::new(RankedEntry {
        candidate,
        summary,
        aggregates: dispatch.aggregates,
    })))
}

/// Options steering a full optimization run.
#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    /// Worker threads for candidate evaluation; 1 runs serially. The
    /// ranked output is identical for any worker count.
    pub workers: usize,
    /// Skip simulating candidates dominated component-wise by one already
    /// infeasible on unmet load (sound because adding capacity never
    /// increases unmet load). Forces a serial sweep.
    pub prune: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { workers: 1, prune: false }
    }
}

/// Violation counts across the whole evaluated space.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ConstraintStats {
    pub unmet_violations: usize,
    pub renewable_violations: usize,
    pub dominated_skips: usize,
}

/// Result of a full design-space optimization.
pub struct OptimizeOutcome<T> {
    /// Feasible candidates by ascending NPC; ties broken by ascending
    /// component counts.
    pub ranked: Vec<RankedEntry<T>>,
    pub infeasible: Vec<(CandidateSize<T>, Infeasibility<T>)>,
    pub stats: ConstraintStats,
}

/// Evaluates the full space and ranks the feasible candidates by NPC.
pub fn optimize<T: Float>(
    ctx: &EvalContext<'_, T>,
    space: &SearchSpace<T>,
    options: OptimizeOptions,
) -> Result<OptimizeOutcome<T>> {
    ctx.constraints.validate()?;
    let candidates = enumerate(space)?;

    let evaluations: Vec<Evaluation<T>> = if options.prune {
        evaluate_with_pruning(ctx, &candidates)?
    } else if options.workers == 1 {
        candidates.iter().map(|c| evaluate(ctx, *c)).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::PowerCurve(format!("thread pool: {e}")))?;
        pool.install(|| {
            candidates
                .par_iter()
                .map(|c| evaluate(ctx, *c))
                .collect::<Result<Vec<_>>>()
        })?
    };

    let mut ranked = Vec::new();
    let mut infeasible = Vec::new();
    let mut stats = ConstraintStats::default();
    for eval in evaluations {
        match eval {
            Evaluation::Feasible(entry) => ranked.push(*entry),
            Evaluation::Infeasible { candidate, reason } => {
                match reason {
                    Infeasibility::Unmet { .. } => stats.unmet_violations += 1,
                    Infeasibility::RenewableFraction { .. } => stats.renewable_violations += 1,
                    Infeasibility::DominatedUnmet => {
                        stats.unmet_violations += 1;
                        stats.dominated_skips += 1;
                    }
                }
                infeasible.push((candidate, reason));
            }
        }
    }
    ranked.sort_by(|a, b| {
        a.summary
            .npc
            .as_f64()
            .total_cmp(&b.summary.npc.as_f64())
            .then_with(|| a.candidate.sort_key().partial_cmp(&b.candidate.sort_key()).unwrap())
    });
    Ok(OptimizeOutcome { ranked, infeasible, stats })
}

/// Largest-first serial sweep recording unmet-infeasible candidates so
/// smaller fleets can be rejected without simulation. Output order matches
/// the enumeration order.
fn evaluate_with_pruning<T: Float>(
    ctx: &EvalContext<'_, T>,
    candidates: &[CandidateSize<T>],
) -> Result<Vec<Evaluation<T>>> {
    let mut unmet_infeasible: Vec<CandidateSize<T>> = Vec::new();
    let mut out: Vec<Option<Evaluation<T>>> = vec![None; candidates.len()];
    for (idx, candidate) in candidates.iter().enumerate().rev() {
        if unmet_infeasible.iter().any(|d| d.dominates_or_equals(candidate)) {
            out[idx] = Some(Evaluation::Infeasible {
                candidate: *candidate,
                reason: Infeasibility::DominatedUnmet,
            });
            continue;
        }
        let eval = evaluate(ctx, *candidate)?;
        if let Evaluation::Infeasible { reason: Infeasibility::Unmet { .. }, .. } = eval {
            unmet_infeasible.push(*candidate);
        }
        out[idx] = Some(eval);
    }
    Ok(out.into_iter().map(|e| e.expect("every slot filled")).collect())
}

/// Coordinate-descent local search over the index grid of the space.
/// Starts from several corners plus the center, walks one step per
/// dimension while NPC improves, and returns the best feasible entry
/// found, if any. Intended for spaces too large to enumerate; on small
/// spaces it is validated against [`optimize`].
pub fn local_search<T: Float>(
    ctx: &EvalContext<'_, T>,
    space: &SearchSpace<T>,
) -> Result<Option<RankedEntry<T>>> {
    ctx.constraints.validate()?;
    space.validate()?;
    let dims = [
        space.n_pv.len(),
        space.n_wt.len(),
        space.n_batt.len(),
        space.genset_kw.len(),
        space.converter_kw.len(),
    ];
    let candidate_at = |ix: &[usize; 5]| CandidateSize {
        n_pv: space.n_pv[ix[0]],
        n_wt: space.n_wt[ix[1]],
        n_batt: space.n_batt[ix[2]],
        genset_kw: space.genset_kw[ix[3]],
        converter_kw: space.converter_kw[ix[4]],
    };

    let mut starts: Vec<[usize; 5]> = vec![
        [0; 5],
        [dims[0] - 1, dims[1] - 1, dims[2] - 1, dims[3] - 1, dims[4] - 1],
        [dims[0] / 2, dims[1] / 2, dims[2] / 2, dims[3] / 2, dims[4] / 2],
        [dims[0] - 1, 0, dims[2] - 1, 0, dims[4] - 1],
        [0, dims[1] - 1, 0, dims[3] - 1, 0],
    ];
    starts.dedup();

    let mut best: Option<RankedEntry<T>> = None;
    let score = |entry: &RankedEntry<T>| entry.summary.npc.as_f64();

    for start in starts {
        let mut ix = start;
        let mut current: Option<RankedEntry<T>> = match evaluate(ctx, candidate_at(&ix))? {
            Evaluation::Feasible(e) => Some(*e),
            Evaluation::Infeasible { .. } => None,
        };
        loop {
            let mut improved = false;
            for d in 0..5 {
                for step in [-1isize, 1] {
                    let next = ix[d] as isize + step;
                    if next < 0 || next as usize >= dims[d] {
                        continue;
                    }
                    let mut trial_ix = ix;
                    trial_ix[d] = next as usize;
                    if let Evaluation::Feasible(e) = evaluate(ctx, candidate_at(&trial_ix))? {
                        let better = match &current {
                            Some(c) => score(&e) < score(c),
                            None => true,
                        };
                        if better {
                            ix = trial_ix;
                            current = Some(*e);
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if let Some(c) = current {
            let replace = match &best {
                Some(b) => score(&c) < score(b),
                None => true,
            };
            if replace {
                best = Some(c);
            }
        }
    }
    Ok(best)
}
