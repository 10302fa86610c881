//! Upper bound for the subtwistor distance by local search over 4-line chains.
//!
//! Each restart builds a chain blueprint from its own seed and runs a
//! compass search on the rational offsets: neighbours are ranked in floating
//! point, and a move is accepted only after the exact chain is rebuilt,
//! validated and found shorter. The step halves after a sweep without
//! improvement, independently of the iteration budget, so more iterations
//! extend the same trajectory.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{chain_length_unchecked, dg_lower, validate_chain, AuxMetric, SubtwistorChain};
use crate::error::{Error, Result};
use crate::ghk::connect::{attempt_seed, rational_offsets_to_f64, short_chain, CONNECT_ATTEMPTS};
use crate::ghk::Blueprint;
use crate::period::PeriodPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DtwOptions {
    pub seed: u64,
    pub restarts: usize,
    pub iters: usize,
}

impl Default for DtwOptions {
    fn default() -> Self {
        DtwOptions { seed: 0, restarts: 4, iters: 30 }
    }
}

#[derive(Debug, Clone)]
pub struct DtwResult {
    /// Length of the witness chain, an upper bound for `d_tw`.
    pub upper: f64,
    /// [`dg_lower`] of the endpoints.
    pub lower: f64,
    pub chain: SubtwistorChain,
}

const ACCEPT_MARGIN: f64 = 1e-12;

/// Candidates that need no search: the empty or 1-line chain when one
/// exists, followed by the caller's `extra` chains (each validated).
pub fn dtw_short_candidates(
    vx: &PeriodPoint,
    vy: &PeriodPoint,
    g: &AuxMetric,
    seed: u64,
    extra: &[SubtwistorChain],
) -> Result<Vec<(f64, SubtwistorChain)>> {
    let mut out = Vec::new();
    if let Some(c) = short_chain(vx, vy, seed)? {
        out.push((chain_length_unchecked(&c, g), c));
    }
    for c in extra {
        validate_chain(c).into_result()?;
        if !c.endpoints()[0].same_point(vx)? || !c.endpoints()[1].same_point(vy)? {
            return Err(Error::InvalidChain("endpoint membership"));
        }
        out.push((chain_length_unchecked(c, g), c.clone()));
    }
    Ok(out)
}

/// One restart: the best validated 4-line chain found from `seed`.
pub fn dtw_restart(vx: &PeriodPoint, vy: &PeriodPoint, g: &AuxMetric, seed: u64, iters: usize) -> Result<(f64, SubtwistorChain)> {
    let mut start = None;
    for k in 0..CONNECT_ATTEMPTS as u64 {
        let bp = Blueprint::new(vx, vy, attempt_seed(seed, k))?;
        let offsets = vec![BigRational::zero(); bp.num_params()];
        let fb = bp.to_float(g);
        let flips = fb.length(&rational_offsets_to_f64(&offsets)).map_or([false; 3], |(_, f)| f);
        if let Ok(c) = bp.realize(&offsets, flips) {
            if validate_chain(&c).is_valid() {
                start = Some((bp, fb, offsets, c));
                break;
            }
        }
    }
    let (bp, fb, mut offsets, mut chain) = start.ok_or(Error::RetryBudgetExhausted(CONNECT_ATTEMPTS))?;
    let mut best = chain_length_unchecked(&chain, g);
    let mut step = BigRational::new(BigInt::from(1), BigInt::from(2));
    for _ in 0..iters {
        let fstep = rational_to_f64(&step);
        let base = rational_offsets_to_f64(&offsets);
        let mut moved = false;
        'sweep: for k in 0..offsets.len() {
            for sign in [1i32, -1] {
                let mut trial = base.clone();
                trial[k] += f64::from(sign) * fstep;
                let Some((flen, flips)) = fb.length(&trial) else { continue };
                if !(flen < best - ACCEPT_MARGIN) {
                    continue;
                }
                let mut exact = offsets.clone();
                if sign > 0 {
                    exact[k] += &step;
                } else {
                    exact[k] -= &step;
                }
                let Ok(c) = bp.realize(&exact, flips) else { continue };
                if !validate_chain(&c).is_valid() {
                    continue;
                }
                let len = chain_length_unchecked(&c, g);
                if len < best {
                    best = len;
                    chain = c;
                    offsets = exact;
                    moved = true;
                    break 'sweep;
                }
            }
        }
        if !moved {
            step = step / BigInt::from(2);
        }
    }
    Ok((best, chain))
}

fn rational_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(0.0)
}

/// Minimum over candidates, earliest candidate on ties.
pub fn dtw_select(vx: &PeriodPoint, vy: &PeriodPoint, g: &AuxMetric, candidates: Vec<(f64, SubtwistorChain)>) -> Result<DtwResult> {
    let mut best: Option<(f64, SubtwistorChain)> = None;
    for (len, c) in candidates {
        if best.as_ref().map_or(true, |(b, _)| len < *b) {
            best = Some((len, c));
        }
    }
    let (upper, chain) = best.ok_or(Error::RetryBudgetExhausted(0))?;
    Ok(DtwResult { upper, lower: dg_lower(vx, vy, g)?, chain })
}

/// Certified upper bound for `d_tw(x, y)` with its witness chain.
pub fn dtw_upper(vx: &PeriodPoint, vy: &PeriodPoint, g: &AuxMetric, opts: &DtwOptions) -> Result<DtwResult> {
    dtw_upper_with(vx, vy, g, opts, &[])
}

/// As [`dtw_upper`], also offering the given chains as candidates.
pub fn dtw_upper_with(
    vx: &PeriodPoint,
    vy: &PeriodPoint,
    g: &AuxMetric,
    opts: &DtwOptions,
    extra: &[SubtwistorChain],
) -> Result<DtwResult> {
    let mut cands = dtw_short_candidates(vx, vy, g, opts.seed, extra)?;
    if !vx.same_point(vy)? {
        for r in 0..opts.restarts.max(1) as u64 {
            cands.push(dtw_restart(vx, vy, g, opts.seed.wrapping_add(r), opts.iters)?);
        }
    }
    dtw_select(vx, vy, g, cands)
}
