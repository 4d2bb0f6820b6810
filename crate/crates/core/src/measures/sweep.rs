use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::blp::{blp_measure, BlpMode};
use super::IntervalSet;
use crate::error::{Error, Result};
use crate::quantum::{bloch_to_density, pair_to_ab, BlochVector, PairParams};
use crate::trace::DecoherenceTrace;

const REFINE_STEPS: usize = 100;
const REFINE_RADIUS: f64 = 0.25;
const REFINE_SHRINK: f64 = 0.96;

/// Canonical pair counts as maximal if within this fraction of the best value.
pub const MAX_RELATIVE_GAP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n_pairs: usize,
    pub seed: u64,
    /// Pairs with `a = 0` and `b = 0`, excluded from the comparison.
    pub degenerate_pairs: usize,
    /// Every nonzero pair produced the canonical pair's interval set.
    pub invariant: bool,
    /// Largest endpoint discrepancy from the canonical set; `None` if some
    /// pair produced a different number of intervals.
    pub max_interval_distance: Option<f64>,
    pub canonical_intervals: IntervalSet,
    pub canonical_value: f64,
    pub argmax: PairParams,
    pub max_value: f64,
    pub refined_pair: PairParams,
    pub refined_value: f64,
    pub canonical_attains_max: bool,
}

fn random_bloch(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

fn to_pair(r1: &BlochVector, r2: &BlochVector) -> Result<PairParams> {
    Ok(pair_to_ab(&bloch_to_density(r1)?, &bloch_to_density(r2)?))
}

fn clamp_to_ball(v: BlochVector) -> BlochVector {
    let n = v.norm();
    if n > 1.0 {
        BlochVector::new(v.x / n, v.y / n, v.z / n)
    } else {
        v
    }
}

/// Evaluates the direct BLP measure on `n_pairs` random Bloch-ball pairs and
/// checks that their non-Markovian intervals coincide, then refines the best
/// pair by a shrinking local random search.
pub fn pair_sweep<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    n_pairs: usize,
    seed: u64,
) -> Result<SweepSummary> {
    if n_pairs < 2 {
        return Err(Error::SweepTooSmall(n_pairs));
    }
    let tol = 2.0 * trace.grid().dt();
    let canonical = blp_measure(trace, &PairParams::canonical(), BlpMode::Direct)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(BlochVector, BlochVector)> = (0..n_pairs)
        .map(|_| (random_bloch(&mut rng), random_bloch(&mut rng)))
        .collect();
    let results: Vec<Option<(PairParams, f64, Option<f64>)>> = draws
        .par_iter()
        .map(|(r1, r2)| {
            let pair = to_pair(r1, r2)?;
            if pair.is_degenerate() {
                return Ok(None);
            }
            let m = blp_measure(trace, &pair, BlpMode::Direct)?;
            Ok(Some((pair, m.value, m.intervals.distance(&canonical.intervals))))
        })
        .collect::<Result<_>>()?;

    let degenerate_pairs = results.iter().filter(|r| r.is_none()).count();
    let mut invariant = true;
    let mut max_distance = Some(0.0f64);
    let mut best: Option<(usize, PairParams, f64)> = None;
    for (i, r) in results.iter().enumerate() {
        let Some((pair, value, dist)) = r else { continue };
        match dist {
            Some(d) => {
                invariant &= *d <= tol;
                max_distance = max_distance.map(|m| m.max(*d));
            }
            None => {
                invariant = false;
                max_distance = None;
            }
        }
        if best.as_ref().is_none_or(|b| *value > b.2) {
            best = Some((i, *pair, *value));
        }
    }
    let (best_index, argmax, max_value) = best.ok_or(Error::DegeneratePair)?;

    let mut refine_rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let (mut r1, mut r2) = draws[best_index];
    let mut refined_pair = argmax;
    let mut refined_value = max_value;
    let mut radius = REFINE_RADIUS;
    for _ in 0..REFINE_STEPS {
        let mut jitter = |v: &BlochVector| {
            clamp_to_ball(BlochVector::new(
                v.x + radius * refine_rng.random_range(-1.0..=1.0),
                v.y + radius * refine_rng.random_range(-1.0..=1.0),
                v.z + radius * refine_rng.random_range(-1.0..=1.0),
            ))
        };
        let (c1, c2) = (jitter(&r1), jitter(&r2));
        let pair = to_pair(&c1, &c2)?;
        if !pair.is_degenerate() {
            let value = blp_measure(trace, &pair, BlpMode::Direct)?.value;
            if value > refined_value {
                (r1, r2, refined_pair, refined_value) = (c1, c2, pair, value);
            }
        }
        radius *= REFINE_SHRINK;
    }

    let best_value = max_value.max(refined_value);
    let canonical_attains_max = canonical.value >= (1.0 - MAX_RELATIVE_GAP) * best_value;
    Ok(SweepSummary {
        n_pairs,
        seed,
        degenerate_pairs,
        invariant,
        max_interval_distance: max_distance,
        canonical_intervals: canonical.intervals,
        canonical_value: canonical.value,
        argmax,
        max_value,
        refined_pair,
        refined_value,
        canonical_attains_max,
    })
}
