//! Thread-parallel drivers whose output matches the sequential core
//! functions exactly: work items are evaluated independently and reduced in
//! index order.

use std::sync::Arc;

use hk_core::ortho::{Isometry, IsometrySearch, SEARCH_RANK_BOUND};
use hk_core::period::PeriodPoint;
use hk_core::subtwistor::{dtw_restart, dtw_select, dtw_short_candidates, AuxMetric, DtwOptions, DtwResult, SubtwistorChain};
use hk_core::{QuadLattice, Result};
use rayon::prelude::*;

/// Runs `f` on a pool of `threads` workers (`0` means the rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(f)
}

/// [`hk_core::subtwistor::dtw_upper_with`] with restarts run in parallel.
pub fn dtw_upper_par(
    vx: &PeriodPoint,
    vy: &PeriodPoint,
    g: &AuxMetric,
    opts: &DtwOptions,
    extra: &[SubtwistorChain],
) -> Result<DtwResult> {
    let mut cands = dtw_short_candidates(vx, vy, g, opts.seed, extra)?;
    if !vx.same_point(vy)? {
        let restarts: Vec<_> = (0..opts.restarts.max(1) as u64)
            .into_par_iter()
            .map(|r| dtw_restart(vx, vy, g, opts.seed.wrapping_add(r), opts.iters))
            .collect();
        for r in restarts {
            cands.push(r?);
        }
    }
    dtw_select(vx, vy, g, cands)
}

/// [`hk_core::ortho::search_isometries`] split over first-column branches.
pub fn search_isometries_par(l: &Arc<QuadLattice>, height: i64) -> Result<Vec<Isometry>> {
    let s = IsometrySearch::new(l, height, SEARCH_RANK_BOUND)?;
    let parts: Vec<Vec<Isometry>> = (0..s.branches()).into_par_iter().map(|i| s.branch(i)).collect();
    Ok(parts.into_iter().flatten().collect())
}
