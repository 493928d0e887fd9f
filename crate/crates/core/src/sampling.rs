//! Deterministic randomized search shared by every estimator.
//!
//! Work items are indexed; item `i` of stream `s` always draws from the same
//! ChaCha stream, whatever thread evaluates it. Results are merged by
//! (value, lowest index), so [`Execution::Parallel`] and
//! [`Execution::Sequential`] return identical estimates.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{scale_to_unit, Exponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    /// Fan out over the rayon pool. Same as `Sequential` without the
    /// `parallel` feature.
    #[default]
    Parallel,
    Sequential,
}

/// Budget and seed for a randomized estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Random points evaluated before refinement.
    pub samples: usize,
    /// Best random points handed to local ascent (seeds are always refined).
    pub refine_starts: usize,
    /// Proposals per local ascent.
    pub ascent_steps: usize,
    pub seed: u64,
    /// Slack added to the right-hand side of two-sided comparisons.
    pub slack: f64,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            samples: 10_000,
            refine_starts: 16,
            ascent_steps: 400,
            seed: 0,
            slack: 0.02,
            execution: Execution::default(),
        }
    }
}

impl SamplingConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplingConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    /// Larger budget used for the right-hand side of one-sided comparisons.
    pub fn refined(&self) -> Self {
        SamplingConfig {
            samples: self.samples * 4,
            refine_starts: self.refine_starts * 2,
            ascent_steps: self.ascent_steps * 2,
            seed: splitmix(self.seed ^ 0x5eed_0f4e_f14e),
            ..*self
        }
    }

    /// Independent configuration for a named sub-computation.
    pub fn substream(&self, tag: u64) -> Self {
        SamplingConfig {
            seed: splitmix(self.seed.wrapping_add(tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))),
            ..*self
        }
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for item `index` of `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(stream)));
    rng.set_stream(index);
    rng
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Random point on the unit sphere of ℓᵖ. Directions are Gaussian, so the
/// distribution is not uniform for p ≠ 2; only coverage matters here.
pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize, p: Exponent) -> Vec<C64> {
    loop {
        let mut v = gaussian_vector(rng, dim);
        if scale_to_unit(&mut v, p) {
            return v;
        }
    }
}

/// Evaluate `f(0..n)` in index order, in parallel when requested.
pub fn map_indexed<T, F>(n: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Index of the largest value; ties go to the lowest index. `None` entries
/// are skipped.
pub fn argmax(values: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Objective for [`maximize`]: a space of candidate vectors with a
/// sampler, a local move and a (possibly partial) objective.
pub(crate) trait Landscape: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64>;
    fn perturb(&self, x: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64>;
    /// `None` for infeasible points.
    fn value(&self, x: &[C64]) -> Option<f64>;
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub value: f64,
    pub point: Vec<C64>,
    pub evaluated: usize,
}

const ASCENT_STREAM_OFFSET: u64 = 1 << 40;

/// Multi-start maximization: seeds and `cfg.samples` random points are
/// evaluated, then the seeds plus the best `cfg.refine_starts` random points
/// are refined by adaptive random ascent. Returns `None` when no feasible
/// point was found.
pub(crate) fn maximize<L: Landscape>(
    landscape: &L,
    seeds: &[Vec<C64>],
    cfg: &SamplingConfig,
    stream: u64,
) -> Option<SearchOutcome> {
    let n_seeds = seeds.len();
    let total = n_seeds + cfg.samples;
    let points: Vec<(Vec<C64>, Option<f64>)> = map_indexed(total, cfg.execution, |i| {
        let x = if i < n_seeds {
            seeds[i].clone()
        } else {
            let mut rng = rng_for(cfg.seed, stream, i as u64);
            landscape.sample(&mut rng)
        };
        let v = landscape.value(&x);
        (x, v)
    });

    let mut order: Vec<usize> = (n_seeds..total).filter(|&i| points[i].1.is_some()).collect();
    order.sort_by(|&a, &b| {
        points[b].1.partial_cmp(&points[a].1).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let mut starts: Vec<usize> = (0..n_seeds).filter(|&i| points[i].1.is_some()).collect();
    starts.extend(order.into_iter().take(cfg.refine_starts));

    let refined: Vec<(Vec<C64>, Option<f64>)> = map_indexed(starts.len(), cfg.execution, |k| {
        let i = starts[k];
        let mut rng = rng_for(cfg.seed, stream, ASCENT_STREAM_OFFSET + i as u64);
        let (x, v) = ascend(landscape, &points[i].0, points[i].1.unwrap(), cfg.ascent_steps, &mut rng);
        (x, Some(v))
    });

    let mut all_values: Vec<Option<f64>> = points.iter().map(|p| p.1).collect();
    all_values.extend(refined.iter().map(|r| r.1));
    let best = argmax(&all_values)?;
    let point = if best < total {
        points[best].0.clone()
    } else {
        refined[best - total].0.clone()
    };
    Some(SearchOutcome {
        value: all_values[best].unwrap(),
        point,
        evaluated: total + starts.len() * cfg.ascent_steps,
    })
}

/// Adaptive random ascent: accept strict improvements, grow the step on
/// success and shrink it on failure.
fn ascend<L: Landscape>(
    landscape: &L,
    start: &[C64],
    start_value: f64,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<C64>, f64) {
    let mut x = start.to_vec();
    let mut value = start_value;
    let mut step = 0.25;
    for _ in 0..steps {
        let candidate = landscape.perturb(&x, step, rng);
        match landscape.value(&candidate) {
            Some(v) if v > value + 1e-13 * value.abs().max(1e-3) => {
                x = candidate;
                value = v;
                step = (step * 1.5).min(1.0);
            }
            _ => {
                step *= 0.8;
                if step < 1e-9 {
                    step = 0.05;
                }
            }
        }
    }
    (x, value)
}

/// Random unit-sphere landscape in ℓᵖ with an arbitrary objective.
pub(crate) struct Sphere<F> {
    pub dim: usize,
    pub p: Exponent,
    pub objective: F,
}

impl<F> Landscape for Sphere<F>
where
    F: Fn(&[C64]) -> Option<f64> + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        random_unit(rng, self.dim, self.p)
    }

    fn perturb(&self, x: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let g = gaussian_vector(rng, self.dim);
        let scale = step / (self.dim as f64).sqrt();
        let mut y: Vec<C64> = x.iter().zip(&g).map(|(a, b)| a + b * scale).collect();
        if !scale_to_unit(&mut y, self.p) {
            return x.to_vec();
        }
        y
    }

    fn value(&self, x: &[C64]) -> Option<f64> {
        (self.objective)(x)
    }
}
