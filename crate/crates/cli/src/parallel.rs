//! Multi-threaded driver for the size-major subset search.
//!
//! Each size level is split into chunks by first column. Workers claim
//! chunks from a shared counter; the lowest chunk index that produced a hit
//! is kept in an atomic, and any chunk above it is skipped or abandoned. The
//! witness of the lowest hitting chunk is the lexicographically least
//! dependent subset, so the result does not depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use spark_forge_core::rank::RankError;
use spark_forge_core::search::{plan_levels, BruteForceOutcome, ColumnSet};

/// Environment variable that overrides the subset budget.
pub const BUDGET_ENV: &str = "SPARK_FORGE_BUDGET";

/// Number of workers to use when none is requested.
pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Searches sizes `1..=k_max` with `workers` threads.
pub fn spark_bruteforce(
    cols: &ColumnSet,
    k_max: usize,
    workers: usize,
    budget: u128,
) -> Result<BruteForceOutcome, RankError> {
    let workers = workers.max(1);
    let (planned, budget_exhausted) = plan_levels(cols.len(), k_max, budget);
    let mut level_sizes = Vec::new();
    for &(k, size) in &planned {
        level_sizes.push((k, size));
        if let Some(hit) = search_level(cols, k, workers)? {
            return Ok(BruteForceOutcome {
                k_checked: k,
                witness: Some(hit),
                level_sizes,
                budget_exhausted: false,
            });
        }
    }
    Ok(BruteForceOutcome {
        k_checked: level_sizes.last().map_or(0, |l| l.0),
        witness: None,
        level_sizes,
        budget_exhausted,
    })
}

fn search_level(cols: &ColumnSet, k: usize, workers: usize) -> Result<Option<Vec<usize>>, RankError> {
    let chunks = cols.chunk_count(k);
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let hits: Mutex<Vec<(usize, Vec<usize>)>> = Mutex::new(Vec::new());
    let error: Mutex<Option<RankError>> = Mutex::new(None);

    thread::scope(|s| {
        for _ in 0..workers.min(chunks) {
            s.spawn(|| loop {
                let first = next.fetch_add(1, Ordering::Relaxed);
                if first >= chunks || first > best.load(Ordering::Acquire) {
                    return;
                }
                let mut keep_going = || first < best.load(Ordering::Acquire);
                match cols.search_chunk(k, first, &mut keep_going) {
                    Ok(Some(hit)) => {
                        best.fetch_min(first, Ordering::AcqRel);
                        hits.lock().expect("hit list poisoned").push((first, hit));
                    }
                    Ok(None) => {}
                    Err(e) => {
                        error.lock().expect("error slot poisoned").get_or_insert(e);
                        best.store(0, Ordering::Release);
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = error.into_inner().expect("error slot poisoned") {
        return Err(e);
    }
    let hits = hits.into_inner().expect("hit list poisoned");
    Ok(hits.into_iter().min_by_key(|h| h.0).map(|h| h.1))
}

/// Budget from [`BUDGET_ENV`], or `default` when unset.
pub fn budget_from_env(default: u128) -> Result<u128, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .replace('_', "")
            .parse::<u128>()
            .map_err(|_| format!("{BUDGET_ENV}={v:?} is not a non-negative integer")),
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(format!("{BUDGET_ENV}: {e}")),
    }
}
