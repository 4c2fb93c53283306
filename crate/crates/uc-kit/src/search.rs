//! Derivative-free minimization by random restarts plus coordinate-wise
//! golden-section refinement of the best few restarts.
//!
//! Restart `i` draws from stream `i` of the seed, and every reduction breaks
//! ties by restart index, so results are independent of thread scheduling.

use rayon::prelude::*;

use crate::rng::{stream, Stream};

/// Restarts that survive into the refinement phase.
const KEEP: usize = 4;
const GOLDEN_STEPS: usize = 24;
const INITIAL_HALF_WIDTH: f64 = 0.3;
const SHRINK: f64 = 0.8;

#[derive(Clone, Debug)]
pub(crate) struct Best {
    pub value: f64,
    pub point: Vec<f64>,
}

pub(crate) fn minimize<F, S>(objective: &F, sampler: &S, restarts: usize, rounds: usize, seed: u64) -> Best
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Fn(&mut Stream) -> Vec<f64> + Sync,
{
    let mut starts: Vec<(f64, usize, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            let p = sampler(&mut rng);
            (sanitize(objective(&p)), i, p)
        })
        .collect();
    starts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    starts.truncate(KEEP);
    let refined: Vec<Best> =
        starts.into_par_iter().map(|(value, _, point)| refine(objective, Best { value, point }, rounds)).collect();
    refined.into_iter().reduce(|a, b| if b.value < a.value { b } else { a }).expect("at least one restart")
}

pub(crate) fn maximize<F, S>(objective: &F, sampler: &S, restarts: usize, rounds: usize, seed: u64) -> Best
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Fn(&mut Stream) -> Vec<f64> + Sync,
{
    let neg = |x: &[f64]| -objective(x);
    let b = minimize(&neg, sampler, restarts, rounds, seed);
    Best { value: -b.value, point: b.point }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn refine<F: Fn(&[f64]) -> f64>(objective: &F, mut best: Best, rounds: usize) -> Best {
    if !best.value.is_finite() {
        return best;
    }
    let mut h = INITIAL_HALF_WIDTH;
    let mut trial = best.point.clone();
    for _ in 0..rounds {
        for i in 0..trial.len() {
            let c = best.point[i];
            let (t, v) = golden(
                |t| {
                    trial[i] = t;
                    sanitize(objective(&trial))
                },
                c - h,
                c + h,
            );
            if v < best.value {
                best.value = v;
                best.point[i] = t;
            }
            trial[i] = best.point[i];
        }
        h *= SHRINK;
    }
    best
}

/// Golden-section search on `[lo, hi]`; returns the best point evaluated.
fn golden<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut bx, mut bf) = if f2 < f1 { (x2, f2) } else { (x1, f1) };
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
            if f1 < bf {
                bx = x1;
                bf = f1;
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
            if f2 < bf {
                bx = x2;
                bf = f2;
            }
        }
    }
    (bx, bf)
}
