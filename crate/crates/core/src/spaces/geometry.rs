//! Moduli of the unit ball of ℓᵖ.
//!
//! * δ(ε) = inf{1 − ‖x+y‖/2 : ‖x‖, ‖y‖ ≤ 1, ‖x − y‖ ≥ ε}
//! * β(ε) = sup{‖x − y‖ : ‖x‖, ‖y‖ ≤ 1, ‖x + y‖/2 ≥ 1 − ε}
//!
//! Outside p = 2 neither has a closed form here. δ is estimated from above
//! (every feasible pair bounds the infimum) and β from below.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{scale_to_unit, Exponent, SpaceDescriptor, C64};
use crate::sampling::{gaussian_vector, maximize, random_unit, Landscape, SamplingConfig};
use crate::{Error, Result};

const DELTA_STREAM: u64 = 0xde17a;
const BETA_STREAM: u64 = 0xbe7a;
/// Feasibility slack for the β constraints (rounding only).
const FEAS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Exact,
    /// `value` is at least the true quantity.
    Upper,
    /// `value` is at most the true quantity.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryEstimate {
    pub epsilon: f64,
    pub value: f64,
    pub exact: bool,
    pub bound: BoundSide,
    pub samples: usize,
    pub seed: u64,
    /// Pair (x, y) attaining `value`, when estimated.
    pub witness: Option<(Vec<C64>, Vec<C64>)>,
}

/// δ_H(ε) = 1 − √(1 − ε²/4).
pub fn hilbert_delta(epsilon: f64) -> f64 {
    1.0 - (1.0 - epsilon * epsilon / 4.0).max(0.0).sqrt()
}

/// β_H(ε) = 2√(1 − (1 − ε)²), from the parallelogram law.
pub fn hilbert_beta(epsilon: f64) -> f64 {
    2.0 * (1.0 - (1.0 - epsilon).powi(2)).max(0.0).sqrt()
}

pub fn delta_modulus(space: &SpaceDescriptor, epsilon: f64, seed: u64) -> Result<GeometryEstimate> {
    delta_modulus_with(space, epsilon, &SamplingConfig::with_seed(seed))
}

pub fn delta_modulus_with(
    space: &SpaceDescriptor,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<GeometryEstimate> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::Input(format!("delta modulus needs 0 < epsilon <= 2, got {epsilon}")));
    }
    if space.p == Exponent::TWO {
        return Ok(GeometryEstimate {
            epsilon,
            value: hilbert_delta(epsilon),
            exact: true,
            bound: BoundSide::Exact,
            samples: 0,
            seed: cfg.seed,
            witness: None,
        });
    }
    let land = DeltaPairs { dim: space.dim, p: space.p, epsilon };
    let out = maximize(&land, &[], cfg, DELTA_STREAM)
        .ok_or_else(|| Error::Structural("no feasible pair for delta modulus".into()))?;
    let (x, y) = out.point.split_at(space.dim);
    Ok(GeometryEstimate {
        epsilon,
        value: (-out.value).max(0.0),
        exact: false,
        bound: BoundSide::Upper,
        samples: out.evaluated,
        seed: cfg.seed,
        witness: Some((x.to_vec(), y.to_vec())),
    })
}

pub fn beta_modulus(space: &SpaceDescriptor, epsilon: f64, seed: u64) -> Result<GeometryEstimate> {
    beta_modulus_with(space, epsilon, &SamplingConfig::with_seed(seed))
}

/// Lower-bound estimate of β(ε) for 0 ≤ ε ≤ 1 (ε = 0 is allowed as the
/// degenerate boundary case).
pub fn beta_modulus_with(
    space: &SpaceDescriptor,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<GeometryEstimate> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Input(format!("beta modulus needs 0 <= epsilon <= 1, got {epsilon}")));
    }
    let land = BetaPairs { dim: space.dim, p: space.p, epsilon };
    let out = maximize(&land, &[], cfg, BETA_STREAM)
        .ok_or_else(|| Error::Structural("no feasible pair for beta modulus".into()))?;
    let (x, y) = out.point.split_at(space.dim);
    Ok(GeometryEstimate {
        epsilon,
        value: out.value,
        exact: false,
        bound: BoundSide::Lower,
        samples: out.evaluated,
        seed: cfg.seed,
        witness: Some((x.to_vec(), y.to_vec())),
    })
}

fn norm(x: &[C64], p: Exponent) -> f64 {
    crate::linalg::SpaceDescriptor { dim: x.len(), p }.norm(x)
}

fn diff(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn sum(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn concat(x: &[C64], y: &[C64]) -> Vec<C64> {
    let mut v = x.to_vec();
    v.extend_from_slice(y);
    v
}

/// Pairs of unit vectors at distance at least ε; maximizes −(1 − ‖x+y‖/2).
struct DeltaPairs {
    dim: usize,
    p: Exponent,
    epsilon: f64,
}

impl DeltaPairs {
    fn along(&self, x: &[C64], d: &[C64], t: f64) -> Option<Vec<C64>> {
        let mut y: Vec<C64> = x.iter().zip(d).map(|(a, b)| a + b * t).collect();
        scale_to_unit(&mut y, self.p).then_some(y)
    }
}

impl Landscape for DeltaPairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let x = random_unit(rng, self.dim, self.p);
        let mut d = gaussian_vector(rng, self.dim);
        if rng.gen_bool(0.5) {
            // Keep the peak coordinate of x fixed: for flat faces of the
            // ball (p = 1, ∞) this walks along the face.
            let k = (0..self.dim)
                .max_by(|&i, &j| x[i].norm().partial_cmp(&x[j].norm()).unwrap())
                .unwrap_or(0);
            d[k] = C64::new(0.0, 0.0);
        }
        let dist = |t: f64| self.along(&x, &d, t).map_or(0.0, |y| norm(&diff(&x, &y), self.p));
        let mut hi = 1.0;
        while dist(hi) < self.epsilon && hi < 1e6 {
            hi *= 2.0;
        }
        let y = if dist(hi) >= self.epsilon {
            let mut lo = 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if dist(mid) >= self.epsilon {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            self.along(&x, &d, hi).unwrap_or_else(|| x.iter().map(|z| -z).collect())
        } else {
            x.iter().map(|z| -z).collect()
        };
        concat(&x, &y)
    }

    fn perturb(&self, xy: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let g = gaussian_vector(rng, 2 * self.dim);
        let s = step / (2.0 * self.dim as f64).sqrt();
        let mut out: Vec<C64> = xy.iter().zip(&g).map(|(a, b)| a + b * s).collect();
        let (x, y) = out.split_at_mut(self.dim);
        if !scale_to_unit(x, self.p) || !scale_to_unit(y, self.p) {
            return xy.to_vec();
        }
        out
    }

    fn value(&self, xy: &[C64]) -> Option<f64> {
        let (x, y) = xy.split_at(self.dim);
        if norm(&diff(x, y), self.p) < self.epsilon {
            return None;
        }
        Some(-(1.0 - norm(&sum(x, y), self.p) / 2.0))
    }
}

/// Pairs x = m + h, y = m − h with ‖m‖ = 1 − ε, h stretched to the
/// boundary of the ball; maximizes ‖x − y‖.
struct BetaPairs {
    dim: usize,
    p: Exponent,
    epsilon: f64,
}

impl BetaPairs {
    fn stretch(&self, m: &[C64], h: &[C64]) -> Option<Vec<C64>> {
        let fit = |t: f64| {
            let a: Vec<C64> = m.iter().zip(h).map(|(u, v)| u + v * t).collect();
            let b: Vec<C64> = m.iter().zip(h).map(|(u, v)| u - v * t).collect();
            norm(&a, self.p).max(norm(&b, self.p)) <= 1.0
        };
        if norm(h, self.p) == 0.0 {
            return None;
        }
        let mut hi = 1.0;
        while fit(hi) {
            hi *= 2.0;
            if hi > 1e12 {
                return None;
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if fit(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x: Vec<C64> = m.iter().zip(h).map(|(u, v)| u + v * lo).collect();
        let y: Vec<C64> = m.iter().zip(h).map(|(u, v)| u - v * lo).collect();
        Some(concat(&x, &y))
    }

    fn with_midpoint(&self, mut m: Vec<C64>, h: &[C64]) -> Option<Vec<C64>> {
        if !scale_to_unit(&mut m, self.p) {
            return None;
        }
        let r = 1.0 - self.epsilon;
        let m: Vec<C64> = m.iter().map(|z| z * r).collect();
        self.stretch(&m, h)
    }
}

impl Landscape for BetaPairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        loop {
            let m = random_unit(rng, self.dim, self.p);
            let h = gaussian_vector(rng, self.dim);
            if let Some(xy) = self.with_midpoint(m, &h) {
                return xy;
            }
        }
    }

    fn perturb(&self, xy: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let (x, y) = xy.split_at(self.dim);
        let g = gaussian_vector(rng, 2 * self.dim);
        let s = step / (self.dim as f64).sqrt();
        let m: Vec<C64> = x.iter().zip(y).zip(&g[..self.dim]).map(|((a, b), e)| (a + b) * 0.5 + e * s).collect();
        let h: Vec<C64> = x.iter().zip(y).zip(&g[self.dim..]).map(|((a, b), e)| (a - b) * 0.5 + e * s).collect();
        self.with_midpoint(m, &h).unwrap_or_else(|| xy.to_vec())
    }

    fn value(&self, xy: &[C64]) -> Option<f64> {
        let (x, y) = xy.split_at(self.dim);
        let feasible = norm(x, self.p) <= 1.0 + FEAS_SLACK
            && norm(y, self.p) <= 1.0 + FEAS_SLACK
            && norm(&sum(x, y), self.p) / 2.0 >= 1.0 - self.epsilon - FEAS_SLACK;
        feasible.then(|| norm(&diff(x, y), self.p))
    }
}
