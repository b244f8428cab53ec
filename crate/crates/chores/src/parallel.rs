//! Wall-clock deadlines and multi-threaded exhaustive search.
//!
//! The search space is split by the owner of the first vertex; workers
//! pull branches from a shared counter and all stop once any of them
//! finds a witness or the deadline passes. The node limit applies to
//! each branch separately.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use chores_core::fairness::FairnessQuery;
use chores_core::instance::Instance;
use chores_core::oracle::{ExactOutcome, OracleError, Search, SearchBudget, StopReason};

pub const MAX_NODES_ENV: &str = "CHOREDIV_MAX_NODES";
pub const TIMEOUT_ENV: &str = "CHOREDIV_TIMEOUT";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub budget: SearchBudget,
    pub jobs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: SearchBudget::default(),
            jobs: 1,
        }
    }
}

impl OracleConfig {
    /// Defaults overridden by `CHOREDIV_MAX_NODES` (a node count) and
    /// `CHOREDIV_TIMEOUT` (seconds). Unparsable values are ignored.
    pub fn from_env() -> Self {
        let mut config = OracleConfig::default();
        if let Some(n) = std::env::var(MAX_NODES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            config.budget.max_nodes = n;
        }
        if let Some(t) = std::env::var(TIMEOUT_ENV)
            .ok()
            .and_then(|v| parse_seconds(&v))
        {
            config.budget.time_limit = Some(t);
        }
        config
    }
}

pub fn parse_seconds(text: &str) -> Option<Duration> {
    let secs: f64 = text.trim().parse().ok()?;
    Duration::try_from_secs_f64(secs).ok()
}

pub fn solve_exact_parallel(
    instance: &Instance,
    query: &FairnessQuery,
    config: &OracleConfig,
) -> Result<ExactOutcome, OracleError> {
    config.budget.validate()?;
    let deadline = config
        .budget
        .time_limit
        .and_then(|t| Instant::now().checked_add(t));
    let cancel = AtomicBool::new(false);
    let expired =
        || cancel.load(Ordering::Relaxed) || deadline.is_some_and(|d| Instant::now() >= d);
    let n = instance.agents();
    if config.jobs <= 1 || n == 1 {
        return Search::new(instance)
            .budget(config.budget.clone())
            .deadline(&expired)
            .solve(query);
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<ExactOutcome, OracleError>>> = Mutex::new(Vec::with_capacity(n));
    thread::scope(|scope| {
        for _ in 0..config.jobs.min(n) {
            scope.spawn(|| loop {
                let branch = next.fetch_add(1, Ordering::Relaxed);
                if branch >= n || cancel.load(Ordering::Relaxed) {
                    break;
                }
                let outcome = Search::new(instance)
                    .budget(config.budget.clone())
                    .deadline(&expired)
                    .branch(branch)
                    .solve(query);
                if matches!(outcome, Ok(ExactOutcome::Feasible(_)) | Err(_)) {
                    cancel.store(true, Ordering::Relaxed);
                }
                results.lock().expect("no worker panicked").push(outcome);
            });
        }
    });

    let results = results.into_inner().expect("no worker panicked");
    let mut stop: Option<StopReason> = None;
    for outcome in results {
        match outcome? {
            found @ ExactOutcome::Feasible(_) => return Ok(found),
            ExactOutcome::Inconclusive(reason) => stop = Some(stop.unwrap_or(reason)),
            ExactOutcome::Infeasible => {}
        }
    }
    // Branches skipped after an error were not searched; the error above
    // has already returned in that case.
    Ok(match stop {
        Some(reason) => ExactOutcome::Inconclusive(reason),
        None => ExactOutcome::Infeasible,
    })
}
