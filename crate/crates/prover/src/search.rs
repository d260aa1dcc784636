//! Branch and bound over parameter boxes.
//!
//! The worklist is a depth-first stack processed in fixed-size chunks: each
//! chunk is evaluated in parallel and its results are merged back in stack
//! order, so verdicts, counters and the certificate stream are identical for
//! every thread count.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::case::{admissible, Admissibility, CaseBox, CaseTag, ConfigType, LAMBDA_MAX};
use crate::density::eval_density;
use crate::interval::Interval;

/// Density every edge sector must reach.
pub const DEFAULT_BOUND: f64 = 0.5642;

const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] io::Error),
    #[error("checkpoint format: {0}")]
    Json(#[from] serde_json::Error),
    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_depth: u32,
    pub max_boxes: u64,
    #[serde(default)]
    pub wall_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_depth: 60, max_boxes: 2_000_000_000, wall_time: None }
    }
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    pub bound: f64,
    pub lambda_max: f64,
    pub budget: Budget,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Boxes evaluated per parallel round.
    pub chunk: usize,
    /// Failing boxes kept in the report; the total is always counted.
    pub max_failures_kept: usize,
    pub checkpoint: Option<PathBuf>,
    /// Rounds between checkpoint writes.
    pub checkpoint_every: u64,
}

impl Default for ProveOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            lambda_max: LAMBDA_MAX,
            budget: Budget::default(),
            threads: None,
            chunk: 4096,
            max_failures_kept: 1000,
            checkpoint: None,
            checkpoint_every: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Proven,
    Pruned,
    Failed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "proven",
            Verdict::Pruned => "pruned",
            Verdict::Failed => "failed",
        })
    }
}

/// A leaf of the subdivision with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafRecord {
    pub case_box: CaseBox,
    pub verdict: Verdict,
    pub density: Option<Interval>,
}

impl fmt::Display for LeafRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.case_box;
        write!(f, "CASE {} ORIENT {} BOX {} VERDICT {} DENSITY ", b.config.tag, b.config.orientation, b, self.verdict)?;
        match self.density {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub processed: u64,
    pub proven: u64,
    pub pruned: u64,
    pub failed: u64,
    pub max_depth: u32,
    /// Smallest certified lower density bound among proven boxes.
    pub min_proven_density: Option<f64>,
}

impl Counters {
    fn record(&mut self, leaf: &LeafRecord) {
        self.max_depth = self.max_depth.max(leaf.case_box.depth);
        match leaf.verdict {
            Verdict::Proven => {
                self.proven += 1;
                let lo = leaf.density.map_or(f64::INFINITY, |d| d.lo);
                self.min_proven_density = Some(self.min_proven_density.map_or(lo, |m| m.min(lo)));
            }
            Verdict::Pruned => self.pruned += 1,
            Verdict::Failed => self.failed += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub config: ConfigType,
    pub bound: f64,
    pub lambda_max: f64,
    pub boxes_processed: u64,
    pub boxes_proven: u64,
    pub boxes_pruned_infeasible: u64,
    pub max_depth: u32,
    /// Unresolved boxes, capped; see `failures_total`.
    pub failures: Vec<CaseBox>,
    pub failures_total: u64,
    pub min_proven_density: Option<f64>,
    /// True when the box or time budget ran out before the domain was covered.
    pub budget_exhausted: bool,
    pub wall_time: f64,
}

impl ProofReport {
    /// The bound holds on the whole explored domain.
    pub fn certified(&self) -> bool {
        self.failures_total == 0
    }
}

/// Resumable state of one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseState {
    pub config: ConfigType,
    pub stack: Vec<CaseBox>,
    pub counters: Counters,
    pub failures: Vec<CaseBox>,
    pub elapsed: f64,
}

impl CaseState {
    pub fn new(domain: CaseBox) -> Self {
        Self { config: domain.config, stack: vec![domain], counters: Counters::default(), failures: vec![], elapsed: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub bound: f64,
    pub lambda_max: f64,
    /// Cases whose domain was fully explored.
    pub completed: Vec<ProofReport>,
    /// Cases interrupted by checkpointing or budget exhaustion.
    pub suspended: Vec<CaseState>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self, ProverError> {
        let cp: Checkpoint = serde_json::from_str(&fs::read_to_string(path)?)?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(ProverError::CheckpointMismatch(format!("version {}", cp.version)));
        }
        Ok(cp)
    }

    /// Write atomically through a sibling temporary file.
    pub fn save(&self, path: &Path) -> Result<(), ProverError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

enum Outcome {
    Leaf(Verdict, Option<Interval>),
    Split(CaseBox, CaseBox),
}

fn process(b: &CaseBox, bound: f64, max_depth: u32, scale: &[f64]) -> Outcome {
    if admissible(b) == Admissibility::Infeasible {
        return Outcome::Leaf(Verdict::Pruned, None);
    }
    let Some(tight) = b.contract() else {
        return Outcome::Leaf(Verdict::Pruned, None);
    };
    let density = eval_density(&tight).ok();
    if let Some(d) = density {
        if d.lo >= bound {
            return Outcome::Leaf(Verdict::Proven, Some(d));
        }
    }
    if b.depth >= max_depth {
        return Outcome::Leaf(Verdict::Failed, density);
    }
    let (l, r) = b.split(scale);
    Outcome::Split(l, r)
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, ProverError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    Ok(builder.build()?)
}

fn finish(state: CaseState, opts: &ProveOptions, exhausted: bool) -> ProofReport {
    let c = state.counters;
    ProofReport {
        config: state.config,
        bound: opts.bound,
        lambda_max: opts.lambda_max,
        boxes_processed: c.processed,
        boxes_proven: c.proven,
        boxes_pruned_infeasible: c.pruned,
        max_depth: c.max_depth,
        failures: state.failures,
        failures_total: c.failed,
        min_proven_density: c.min_proven_density,
        budget_exhausted: exhausted,
        wall_time: state.elapsed,
    }
}

/// How a run of one case ended.
pub struct CaseRun {
    pub report: ProofReport,
    /// State before the budget ran out, for resuming; `None` when the domain
    /// was fully explored.
    pub suspended: Option<CaseState>,
}

/// Run one case from `state` until the domain is covered or this
/// invocation's budget is spent. `on_checkpoint` receives the state every
/// `checkpoint_every` rounds.
pub fn run_case(
    mut state: CaseState,
    opts: &ProveOptions,
    sink: &mut dyn FnMut(&LeafRecord),
    on_checkpoint: &mut dyn FnMut(&CaseState) -> Result<(), ProverError>,
) -> Result<CaseRun, ProverError> {
    let workers = pool(opts.threads)?;
    let scale = CaseBox::root_scale(state.config, opts.lambda_max);
    let start = Instant::now();
    let base = state.elapsed;
    let first = state.counters.processed;
    let budget = opts.budget;
    let mut rounds = 0u64;
    let mut suspended = None;

    let mut record = |state: &mut CaseState, leaf: LeafRecord| {
        state.counters.record(&leaf);
        if leaf.verdict == Verdict::Failed && state.failures.len() < opts.max_failures_kept {
            state.failures.push(leaf.case_box.clone());
        }
        sink(&leaf);
    };

    while !state.stack.is_empty() {
        let remaining = budget.max_boxes.saturating_sub(state.counters.processed - first);
        let out_of_time = budget.wall_time.is_some_and(|t| start.elapsed() >= t);
        if remaining == 0 || out_of_time {
            state.elapsed = base + start.elapsed().as_secs_f64();
            suspended = Some(state.clone());
            while let Some(b) = state.stack.pop() {
                record(&mut state, LeafRecord { case_box: b, verdict: Verdict::Failed, density: None });
            }
            break;
        }
        let take = (opts.chunk.max(1) as u64).min(remaining) as usize;
        let split_at = state.stack.len().saturating_sub(take);
        let mut chunk = state.stack.split_off(split_at);
        // Stack top first.
        chunk.reverse();
        let outcomes: Vec<Outcome> =
            workers.install(|| chunk.par_iter().map(|b| process(b, opts.bound, budget.max_depth, &scale)).collect());
        state.counters.processed += chunk.len() as u64;
        let mut children = Vec::new();
        for (b, out) in chunk.into_iter().zip(outcomes) {
            match out {
                Outcome::Leaf(verdict, density) => record(&mut state, LeafRecord { case_box: b, verdict, density }),
                Outcome::Split(l, r) => children.push((l, r)),
            }
        }
        // Push in reverse so the first child of the first box is on top.
        for (l, r) in children.into_iter().rev() {
            state.stack.push(r);
            state.stack.push(l);
        }
        rounds += 1;
        if opts.checkpoint_every > 0 && rounds % opts.checkpoint_every == 0 {
            state.elapsed = base + start.elapsed().as_secs_f64();
            on_checkpoint(&state)?;
        }
    }
    state.elapsed = base + start.elapsed().as_secs_f64();
    let exhausted = suspended.is_some();
    Ok(CaseRun { report: finish(state, opts, exhausted), suspended })
}

/// Certify `config` on `domain` (typically [`CaseBox::root`]).
pub fn prove_case(
    domain: CaseBox,
    opts: &ProveOptions,
    sink: &mut dyn FnMut(&LeafRecord),
) -> Result<ProofReport, ProverError> {
    Ok(run_case(CaseState::new(domain), opts, sink, &mut |_| Ok(()))?.report)
}

fn replace_state(list: &mut Vec<CaseState>, state: CaseState) {
    list.retain(|s| s.config != state.config);
    list.push(state);
}

/// Certify every configuration (or those with tag `only`) over
/// `λ ∈ [1/2, lambda_max]`.
///
/// With a checkpoint path the run state is saved periodically and whenever a
/// case runs out of budget; with `resume` the saved run continues, finished
/// cases are reported from the file and suspended ones pick up where they
/// stopped with a fresh budget. Certificate lines written after the last
/// checkpoint are emitted again on resume.
pub fn prove_all(
    opts: &ProveOptions,
    only: Option<CaseTag>,
    resume: bool,
    sink: &mut dyn FnMut(&LeafRecord),
) -> Result<Vec<ProofReport>, ProverError> {
    let configs: Vec<ConfigType> =
        ConfigType::all().into_iter().filter(|c| only.is_none_or(|t| c.tag == t)).collect();
    let mut cp = Checkpoint {
        version: CHECKPOINT_VERSION,
        bound: opts.bound,
        lambda_max: opts.lambda_max,
        completed: vec![],
        suspended: vec![],
    };
    if let (true, Some(path)) = (resume, &opts.checkpoint) {
        if path.exists() {
            let saved = Checkpoint::load(path)?;
            if saved.bound != opts.bound || saved.lambda_max != opts.lambda_max {
                return Err(ProverError::CheckpointMismatch(format!(
                    "saved bound {} / lambda_max {}, requested {} / {}",
                    saved.bound, saved.lambda_max, opts.bound, opts.lambda_max
                )));
            }
            cp = saved;
        }
    }

    let mut reports = Vec::new();
    for config in configs {
        if let Some(done) = cp.completed.iter().find(|r| r.config == config) {
            reports.push(done.clone());
            continue;
        }
        let state = match cp.suspended.iter().position(|s| s.config == config) {
            Some(k) => cp.suspended.remove(k),
            None => CaseState::new(CaseBox::root(config, opts.lambda_max)),
        };
        let mut save = |s: &CaseState| match &opts.checkpoint {
            Some(path) => {
                let mut snapshot = cp.clone();
                replace_state(&mut snapshot.suspended, s.clone());
                snapshot.save(path)
            }
            None => Ok(()),
        };
        let run = run_case(state, opts, sink, &mut save)?;
        match run.suspended {
            Some(s) => replace_state(&mut cp.suspended, s),
            None => cp.completed.push(run.report.clone()),
        }
        if let Some(path) = &opts.checkpoint {
            cp.save(path)?;
        }
        reports.push(run.report);
    }
    Ok(reports)
}

/// Footer summarizing a run for the certificate log.
pub fn summary_line(reports: &[ProofReport]) -> String {
    let sum = |f: fn(&ProofReport) -> u64| reports.iter().map(f).sum::<u64>();
    format!(
        "SUMMARY cases={} bound={} lambda_max={} proven={} pruned={} failed={} certified={}",
        reports.len(),
        reports.first().map_or(DEFAULT_BOUND, |r| r.bound),
        reports.first().map_or(LAMBDA_MAX, |r| r.lambda_max),
        sum(|r| r.boxes_proven),
        sum(|r| r.boxes_pruned_infeasible),
        sum(|r| r.failures_total),
        reports.iter().all(ProofReport::certified),
    )
}
