//! Apostol moduli of a contraction T:
//!
//! * φ_T(ε) = sup{‖x − Tx‖ : ‖x‖ ≤ 1, ‖x‖ − ‖Tx‖ ≤ ε}
//! * φ̃_T(ε) = sup{‖x − Tx‖ : ‖x‖ ≤ 1, 1 − ‖Tx‖ ≤ ε}, for ‖T‖ = 1
//!
//! and their common limit ω_T as ε → 0. All estimates are lower bounds of
//! the suprema: every reported value is attained by the recorded maximizer.
//!
//! For φ̃ the optimum sits on the unit sphere (scaling x up helps both the
//! constraint and the objective). For φ, writing x = s·u with ‖u‖ = 1 the
//! best scale is s = min(1, ε / (1 − ‖Tu‖)), which turns the problem into a
//! search over the sphere.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::norms::{norming_vector, operator_norm_unchecked};
use crate::linalg::{
    eigen_decomposition, scale_to_unit, ComplexMatrix, Exponent, SpaceDescriptor, C64, DEFAULT_EIGEN_TOL,
};
use crate::sampling::{gaussian_vector, maximize, random_unit, Landscape, SamplingConfig, Sphere};
use crate::spaces::{beta_modulus_with, hilbert_beta};
use crate::verdict::Verdict;
use crate::{Error, Result};

/// Slack on ‖T‖ ≤ 1 for exact norms.
pub const CONTRACTION_TOL: f64 = 1e-10;
/// Band within which ‖T‖ counts as 1.
pub const UNIT_NORM_TOL: f64 = 1e-8;

const PHI_STREAM: u64 = 0xa905;
const PHI_TILDE_STREAM: u64 = 0xa906;
const BISECTION_STEPS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Phi,
    PhiTilde,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    pub epsilon: f64,
    pub variant: Variant,
    pub value: f64,
    /// Feasible point attaining `value`.
    pub maximizer: Vec<C64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaEstimate {
    /// ‖T‖ (exact for p ∈ {1, 2, ∞}).
    pub norm: f64,
    /// φ̃ on the dyadic grid, ascending in ε; φ when ‖T‖ < 1.
    pub values: Vec<ModulusEstimate>,
    /// φ on the same grid, reported alongside φ̃ when ‖T‖ = 1.
    pub companion: Vec<ModulusEstimate>,
    /// Smallest observed value; 0 when ‖T‖ < 1.
    pub extrapolated: f64,
}

/// ε grid {2⁻¹⁰, …, 2⁻¹}, ascending.
pub fn omega_grid() -> Vec<f64> {
    (1..=10).rev().map(|k| 0.5f64.powi(k)).collect()
}

/// ‖T‖, rejecting T with ‖T‖ > 1 + tol.
pub(crate) fn contraction_norm(t: &ComplexMatrix, space: &SpaceDescriptor, cfg: &SamplingConfig) -> Result<f64> {
    space.check_square(t)?;
    let norm = operator_norm_unchecked(t, space.p, cfg.seed, cfg.execution).value;
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(Error::Precondition(format!("operator is not a contraction: norm {norm}")));
    }
    Ok(norm)
}

/// Eigenvectors of boundary eigenvalues, scaled to unit ℓᵖ norm.
pub(crate) fn boundary_seeds(t: &ComplexMatrix, p: Exponent) -> Vec<Vec<C64>> {
    let Ok(pairs) = eigen_decomposition(t, DEFAULT_EIGEN_TOL) else {
        return Vec::new();
    };
    pairs
        .into_iter()
        .filter(|e| (e.value.norm() - 1.0).abs() <= UNIT_NORM_TOL)
        .filter_map(|e| {
            let mut v = e.vector;
            scale_to_unit(&mut v, p).then_some(v)
        })
        .collect()
}

fn residual(t: &ComplexMatrix, x: &[C64]) -> Vec<C64> {
    let tx = t.apply(x);
    x.iter().zip(&tx).map(|(a, b)| a - b).collect()
}

fn norm(x: &[C64], p: Exponent) -> f64 {
    SpaceDescriptor { dim: x.len(), p }.norm(x)
}

/// φ objective at a unit vector u, with the optimal scale.
fn phi_at(t: &ComplexMatrix, p: Exponent, epsilon: f64, u: &[C64]) -> (f64, f64) {
    let loss = 1.0 - norm(&t.apply(u), p);
    let s = if loss <= epsilon { 1.0 } else { epsilon / loss };
    (s * norm(&residual(t, u), p), s)
}

/// Unit vectors u with ‖Tu‖ ≥ 1 − ε. Infeasible draws are pulled toward a
/// feasible anchor along the segment joining them.
struct TildeSphere<'a> {
    t: &'a ComplexMatrix,
    p: Exponent,
    threshold: f64,
    anchors: Vec<Vec<C64>>,
}

impl TildeSphere<'_> {
    fn feasible(&self, u: &[C64]) -> bool {
        norm(&self.t.apply(u), self.p) >= self.threshold
    }

    /// Point of the segment `feasible_end → other` as far toward `other`
    /// as bisection certifies feasible. The constraint ‖Tw‖ ≥ (1 − ε)‖w‖ is
    /// homogeneous, so the bisection runs on the unnormalized segment.
    fn pull(&self, feasible_end: &[C64], other: &[C64]) -> Vec<C64> {
        let (ta, tb) = (self.t.apply(feasible_end), self.t.apply(other));
        let mix = |x: &[C64], y: &[C64], s: f64| -> Vec<C64> {
            x.iter().zip(y).map(|(a, b)| a * (1.0 - s) + b * s).collect()
        };
        let ok = |s: f64| {
            let w = mix(feasible_end, other, s);
            let n = norm(&w, self.p);
            n > 0.0 && norm(&mix(&ta, &tb, s), self.p) >= self.threshold * n
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut w = mix(feasible_end, other, lo);
        if scale_to_unit(&mut w, self.p) && self.feasible(&w) {
            w
        } else {
            feasible_end.to_vec()
        }
    }
}

impl Landscape for TildeSphere<'_> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let u = random_unit(rng, self.t.cols(), self.p);
        if self.feasible(&u) || self.anchors.is_empty() {
            return u;
        }
        let k = rng.gen_range(0..self.anchors.len());
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let anchor: Vec<C64> = self.anchors[k].iter().map(|z| z * phase).collect();
        self.pull(&anchor, &u)
    }

    fn perturb(&self, x: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let g = gaussian_vector(rng, x.len());
        let scale = step / (x.len() as f64).sqrt();
        let mut y: Vec<C64> = x.iter().zip(&g).map(|(a, b)| a + b * scale).collect();
        if !scale_to_unit(&mut y, self.p) {
            return x.to_vec();
        }
        if self.feasible(&y) {
            y
        } else {
            self.pull(x, &y)
        }
    }

    fn value(&self, u: &[C64]) -> Option<f64> {
        self.feasible(u).then(|| norm(&residual(self.t, u), self.p))
    }
}

/// Lower-bound estimate of φ_T(ε) or φ̃_T(ε).
pub fn apostol_phi(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    epsilon: f64,
    variant: Variant,
    cfg: &SamplingConfig,
) -> Result<ModulusEstimate> {
    apostol_phi_seeded(t, space, epsilon, variant, cfg, &[])
}

/// As [`apostol_phi`], with extra starting points. Seeds are unit vectors;
/// infeasible ones are ignored.
pub fn apostol_phi_seeded(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    epsilon: f64,
    variant: Variant,
    cfg: &SamplingConfig,
    extra_seeds: &[Vec<C64>],
) -> Result<ModulusEstimate> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Input(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let norm_t = contraction_norm(t, space, cfg)?;
    let mut seeds = boundary_seeds(t, space.p);
    for s in extra_seeds {
        space.check_vec(s)?;
        seeds.push(s.clone());
    }
    estimate(t, space, epsilon, variant, cfg, norm_t, seeds)
}

fn estimate(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    epsilon: f64,
    variant: Variant,
    cfg: &SamplingConfig,
    norm_t: f64,
    seeds: Vec<Vec<C64>>,
) -> Result<ModulusEstimate> {
    let p = space.p;
    match variant {
        Variant::PhiTilde => {
            if norm_t < 1.0 - UNIT_NORM_TOL {
                return Err(Error::Precondition(format!(
                    "phi-tilde needs norm 1, operator norm is {norm_t}"
                )));
            }
            let mut anchors = seeds.clone();
            anchors.push(norming_vector(t, p, cfg.seed, cfg.execution));
            let land = TildeSphere { t, p, threshold: 1.0 - epsilon, anchors };
            let seeds: Vec<Vec<C64>> = seeds.into_iter().filter(|s| land.feasible(s)).collect();
            let out = maximize(&land, &seeds, cfg, PHI_TILDE_STREAM);
            Ok(match out {
                Some(o) => ModulusEstimate {
                    epsilon,
                    variant,
                    value: o.value,
                    maximizer: o.point,
                    samples: o.evaluated,
                    seed: cfg.seed,
                },
                None => ModulusEstimate {
                    epsilon,
                    variant,
                    value: 0.0,
                    maximizer: land.anchors.last().cloned().unwrap_or_default(),
                    samples: cfg.samples,
                    seed: cfg.seed,
                },
            })
        }
        Variant::Phi => {
            let land = Sphere {
                dim: space.dim,
                p,
                objective: |u: &[C64]| Some(phi_at(t, p, epsilon, u).0),
            };
            let out = maximize(&land, &seeds, cfg, PHI_STREAM)
                .ok_or_else(|| Error::Structural("empty search for phi".into()))?;
            let (_, s) = phi_at(t, p, epsilon, &out.point);
            Ok(ModulusEstimate {
                epsilon,
                variant,
                value: out.value,
                maximizer: out.point.iter().map(|z| z * s).collect(),
                samples: out.evaluated,
                seed: cfg.seed,
            })
        }
    }
}

fn unit_seed(m: &ModulusEstimate, p: Exponent) -> Option<Vec<C64>> {
    let mut v = m.maximizer.clone();
    scale_to_unit(&mut v, p).then_some(v)
}

/// φ̃ (and φ) over the dyadic grid. Each grid point is seeded with the
/// maximizer of the previous one, so the values are nondecreasing in ε.
pub fn omega(t: &ComplexMatrix, space: &SpaceDescriptor, cfg: &SamplingConfig) -> Result<OmegaEstimate> {
    let norm_t = contraction_norm(t, space, cfg)?;
    let base = boundary_seeds(t, space.p);
    let strict = norm_t < 1.0 - UNIT_NORM_TOL;
    let sweep = |variant: Variant, first: Option<&Vec<ModulusEstimate>>| -> Result<Vec<ModulusEstimate>> {
        let mut out: Vec<ModulusEstimate> = Vec::new();
        for (i, eps) in omega_grid().into_iter().enumerate() {
            let mut seeds = base.clone();
            if let Some(prev) = out.last().and_then(|m| unit_seed(m, space.p)) {
                seeds.push(prev);
            }
            if let Some(other) = first.and_then(|f| unit_seed(&f[i], space.p)) {
                seeds.push(other);
            }
            out.push(estimate(t, space, eps, variant, cfg, norm_t, seeds)?);
        }
        Ok(out)
    };
    if strict {
        let values = sweep(Variant::Phi, None)?;
        return Ok(OmegaEstimate { norm: norm_t, values, companion: Vec::new(), extrapolated: 0.0 });
    }
    let values = sweep(Variant::PhiTilde, None)?;
    let companion = sweep(Variant::Phi, Some(&values))?;
    let extrapolated = values.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
    Ok(OmegaEstimate { norm: norm_t, values, companion, extrapolated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub verdict: Verdict,
    pub epsilon: f64,
    pub omega: f64,
    pub phi_tilde: f64,
    pub phi: f64,
    /// ‖I − T‖ (exact for p ∈ {1, 2, ∞}).
    pub complement_norm: f64,
    pub complement_exact: bool,
    pub norm: f64,
}

/// 0 ≤ ω ≤ φ̃(ε) ≤ φ(ε) ≤ ‖I − T‖ ≤ 2 with shared samples: φ̃(ε) is seeded
/// with the ω maximizer and φ(ε) with the φ̃ maximizer.
pub fn check_modulus_chain(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<ChainCheck> {
    let norm_t = contraction_norm(t, space, cfg)?;
    let c = operator_norm_unchecked(&t.complement(), space.p, cfg.seed, cfg.execution);
    if (norm_t - 1.0).abs() > UNIT_NORM_TOL {
        return Ok(ChainCheck {
            verdict: Verdict::NotApplicable,
            epsilon,
            omega: 0.0,
            phi_tilde: 0.0,
            phi: 0.0,
            complement_norm: c.value,
            complement_exact: c.exact,
            norm: norm_t,
        });
    }
    let om = omega(t, space, cfg)?;
    let mut seeds = boundary_seeds(t, space.p);
    if let Some(s) = om.values.first().and_then(|m| unit_seed(m, space.p)) {
        seeds.push(s);
    }
    let pt = estimate(t, space, epsilon, Variant::PhiTilde, cfg, norm_t, seeds.clone())?;
    seeds.extend(unit_seed(&pt, space.p));
    let ph = estimate(t, space, epsilon, Variant::Phi, cfg, norm_t, seeds)?;
    // The right end is exact only for exact norms; otherwise allow the slack.
    let tail = if c.exact { 1e-9 } else { cfg.slack };
    let omega_leq = epsilon < omega_grid()[0] || om.extrapolated <= pt.value + 1e-12;
    let ok = om.extrapolated >= 0.0
        && omega_leq
        && pt.value <= ph.value + 1e-12
        && ph.value <= c.value + tail
        && c.value <= 2.0 + 1e-9;
    Ok(ChainCheck {
        verdict: Verdict::from_bool(ok),
        epsilon,
        omega: om.extrapolated,
        phi_tilde: pt.value,
        phi: ph.value,
        complement_norm: c.value,
        complement_exact: c.exact,
        norm: norm_t,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub verdict: Verdict,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionCheck {
    pub verdict: Verdict,
    pub epsilon: f64,
    /// φ̃_{AB}(ε) ≤ φ̃_A(φ̃_B(ε) + ε) + φ̃_B(ε), with A the first operator
    /// and B the product of the rest.
    pub product: BoundCheck,
    /// φ̃_T(ε) ≤ Σ α_k φ̃_{A_k}(ε/α_k) for T = Σ α_k A_k.
    pub convex: BoundCheck,
}

/// φ̃_A(x) on the right side of an inequality: refined estimate for x < 1,
/// ‖I − A‖ for x ≥ 1 where the constraint is void.
fn rhs_phi_tilde(a: &ComplexMatrix, space: &SpaceDescriptor, x: f64, cfg: &SamplingConfig) -> Result<f64> {
    if x >= 1.0 {
        return Ok(operator_norm_unchecked(&a.complement(), space.p, cfg.seed, cfg.execution).value);
    }
    let norm_a = contraction_norm(a, space, cfg)?;
    Ok(estimate(a, space, x, Variant::PhiTilde, cfg, norm_a, boundary_seeds(a, space.p))?.value)
}

fn vacuous(note: &str) -> BoundCheck {
    BoundCheck { verdict: Verdict::Vacuous, lhs: 0.0, rhs: 0.0, slack: 0.0, note: note.into() }
}

pub fn check_composition_bounds(
    ops: &[ComplexMatrix],
    weights: &[f64],
    space: &SpaceDescriptor,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<CompositionCheck> {
    if ops.len() < 2 {
        return Err(Error::Input("composition bounds need at least two operators".into()));
    }
    if weights.len() != ops.len() {
        return Err(Error::dim(ops.len().to_string(), weights.len().to_string()));
    }
    if weights.iter().any(|&w| w.is_nan() || w <= 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Input("weights must be positive and sum to 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Input(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    for op in ops {
        let n = contraction_norm(op, space, cfg)?;
        if n < 1.0 - UNIT_NORM_TOL {
            return Err(Error::Precondition(format!("operator norm {n} is not 1")));
        }
    }
    let rhs_cfg = cfg.refined();
    let a = &ops[0];
    let b = ops[2..].iter().fold(ops[1].clone(), |acc, m| &acc * m);
    let ab = a * &b;

    let product = {
        let n_ab = contraction_norm(&ab, space, cfg)?;
        if n_ab < 1.0 - UNIT_NORM_TOL {
            vacuous("norm of the product is below 1")
        } else {
            let lhs = estimate(&ab, space, epsilon, Variant::PhiTilde, cfg, n_ab, boundary_seeds(&ab, space.p))?.value;
            let pb = rhs_phi_tilde(&b, space, epsilon, &rhs_cfg)?;
            let rhs = rhs_phi_tilde(a, space, pb + epsilon, &rhs_cfg)? + pb;
            BoundCheck {
                verdict: Verdict::from_bool(lhs <= rhs + cfg.slack),
                lhs,
                rhs,
                slack: cfg.slack,
                note: String::new(),
            }
        }
    };

    let convex = {
        let n = ops[0].rows();
        let t = ops
            .iter()
            .zip(weights)
            .fold(ComplexMatrix::zeros(n, n), |acc, (m, w)| &acc + &m.scale_real(*w));
        let n_t = contraction_norm(&t, space, cfg)?;
        if n_t < 1.0 - UNIT_NORM_TOL {
            vacuous("norm of the convex combination is below 1")
        } else {
            let lhs = estimate(&t, space, epsilon, Variant::PhiTilde, cfg, n_t, boundary_seeds(&t, space.p))?.value;
            let mut rhs = 0.0;
            for (m, w) in ops.iter().zip(weights) {
                rhs += w * rhs_phi_tilde(m, space, epsilon / w, &rhs_cfg)?;
            }
            BoundCheck {
                verdict: Verdict::from_bool(lhs <= rhs + cfg.slack),
                lhs,
                rhs,
                slack: cfg.slack,
                note: String::new(),
            }
        }
    };

    Ok(CompositionCheck { verdict: product.verdict.and(convex.verdict), epsilon, product, convex })
}

/// φ̃_P(ε) ≤ β_X(ε) for an orthoprojection P of norm 1. In ℓ² the right
/// side is the closed form; otherwise a refined-budget β estimate.
pub fn check_beta_bound(
    p_op: &ComplexMatrix,
    space: &SpaceDescriptor,
    epsilon: f64,
    cfg: &SamplingConfig,
) -> Result<BoundCheck> {
    let n = contraction_norm(p_op, space, cfg)?;
    if n < 1.0 - UNIT_NORM_TOL {
        return Ok(BoundCheck {
            verdict: Verdict::NotApplicable,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            note: format!("phi-tilde undefined: norm {n}"),
        });
    }
    let lhs = estimate(p_op, space, epsilon, Variant::PhiTilde, cfg, n, boundary_seeds(p_op, space.p))?.value;
    let (rhs, slack, note) = if space.p == Exponent::TWO {
        (hilbert_beta(epsilon), 1e-9, "closed form".to_string())
    } else {
        let b = beta_modulus_with(space, epsilon, &cfg.refined())?;
        (b.value, cfg.slack, format!("estimated with {} samples", b.samples))
    };
    Ok(BoundCheck { verdict: Verdict::from_bool(lhs <= rhs + slack), lhs, rhs, slack, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{make_projection, ProjectionSpec};

    fn cfg() -> SamplingConfig {
        SamplingConfig::with_seed(11).with_samples(3000)
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn hilbert_projection() -> ComplexMatrix {
        let basis = vec![
            vec![c(1.0), c(1.0), c(0.0), c(0.5)],
            vec![c(0.0), c(1.0), c(-1.0), c(0.0)],
        ];
        make_projection(&ProjectionSpec::hilbert_span(basis), &SpaceDescriptor::hilbert(4)).unwrap()
    }

    fn feasible(t: &ComplexMatrix, p: Exponent, m: &ModulusEstimate) -> bool {
        let x = &m.maximizer;
        let nx = norm(x, p);
        let ntx = norm(&t.apply(x), p);
        let lhs = match m.variant {
            Variant::Phi => nx - ntx,
            Variant::PhiTilde => 1.0 - ntx,
        };
        nx <= 1.0 + 1e-10 && lhs <= m.epsilon + 1e-10 && (norm(&residual(t, x), p) - m.value).abs() < 1e-10
    }

    #[test]
    fn hilbert_projection_phi() {
        let p = hilbert_projection();
        let space = SpaceDescriptor::hilbert(4);
        let est = apostol_phi(&p, &space, 0.1, Variant::Phi, &cfg()).unwrap();
        assert!(est.value <= 0.2f64.sqrt() + 1e-9);
        assert!(est.value >= 0.40, "{}", est.value);
        assert!(feasible(&p, space.p, &est));
        let tilde = apostol_phi(&p, &space, 0.1, Variant::PhiTilde, &cfg()).unwrap();
        assert!(feasible(&p, space.p, &tilde));
        assert!((tilde.value - (0.2f64 - 0.01).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn identity_moduli_vanish() {
        let space = SpaceDescriptor::new(3, 3.0).unwrap();
        let i = ComplexMatrix::identity(3);
        for variant in [Variant::Phi, Variant::PhiTilde] {
            assert_eq!(apostol_phi(&i, &space, 0.5, variant, &cfg()).unwrap().value, 0.0);
        }
        assert_eq!(omega(&i, &space, &cfg()).unwrap().extrapolated, 0.0);
    }

    #[test]
    fn l1_coordinate_projection_phi_is_epsilon() {
        let space = SpaceDescriptor::l1(4);
        let p = make_projection(&ProjectionSpec::coordinate(vec![1, 3]), &space).unwrap();
        let est = apostol_phi(&p, &space, 0.3, Variant::Phi, &cfg()).unwrap();
        assert!(est.value >= 0.3 - 1e-3 && est.value <= 0.3 + 1e-9, "{}", est.value);
        assert!(feasible(&p, space.p, &est));
    }

    #[test]
    fn phi_tilde_requires_unit_norm() {
        let t = ComplexMatrix::identity(2).scale_real(0.5);
        let err = apostol_phi(&t, &SpaceDescriptor::hilbert(2), 0.1, Variant::PhiTilde, &cfg());
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = apostol_phi(&ComplexMatrix::identity(2).scale_real(1.1), &SpaceDescriptor::hilbert(2), 0.1, Variant::Phi, &cfg());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn omega_examples() {
        let t = ComplexMatrix::from_diag(&[C64::new(0.0, 1.0), c(1.0)]);
        let om = omega(&t, &SpaceDescriptor::hilbert(2), &cfg()).unwrap();
        assert!((om.extrapolated - 2f64.sqrt()).abs() < 1e-9);

        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]]);
        let om = omega(&t, &SpaceDescriptor::max_norm(2), &cfg()).unwrap();
        assert!((om.extrapolated - 2.0).abs() < 1e-9);

        let strict = ComplexMatrix::identity(2).scale_real(0.5);
        let om = omega(&strict, &SpaceDescriptor::hilbert(2), &cfg()).unwrap();
        assert_eq!(om.extrapolated, 0.0);
        assert!(om.companion.is_empty());
    }

    #[test]
    fn omega_grid_is_monotone() {
        let om = omega(&hilbert_projection(), &SpaceDescriptor::hilbert(4), &cfg()).unwrap();
        for w in om.values.windows(2) {
            assert!(w[0].value <= w[1].value + 1e-12);
        }
        for (a, b) in om.values.iter().zip(&om.companion) {
            assert!(a.value <= b.value + 1e-12);
        }
    }

    #[test]
    fn chain_examples() {
        let chk = check_modulus_chain(&ComplexMatrix::identity(3), &SpaceDescriptor::hilbert(3), 0.1, &cfg()).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        assert_eq!((chk.omega, chk.phi_tilde, chk.phi, chk.complement_norm), (0.0, 0.0, 0.0, 0.0));

        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]]);
        let chk = check_modulus_chain(&t, &SpaceDescriptor::max_norm(2), 0.1, &cfg()).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        for v in [chk.omega, chk.phi_tilde, chk.phi, chk.complement_norm] {
            assert!((v - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn composition_examples() {
        let space = SpaceDescriptor::hilbert(3);
        let i = ComplexMatrix::identity(3);
        let chk = check_composition_bounds(&[i.clone(), i], &[0.5, 0.5], &space, 0.05, &cfg()).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        assert_eq!(chk.product.lhs, 0.0);

        let p = make_projection(&ProjectionSpec::coordinate(vec![1, 2]), &space).unwrap();
        let q = make_projection(&ProjectionSpec::coordinate(vec![2, 3]), &space).unwrap();
        let chk = check_composition_bounds(&[p, q], &[0.5, 0.5], &space, 0.1, &cfg()).unwrap();
        assert_eq!(chk.convex.verdict, Verdict::Pass);
        assert_eq!(chk.verdict, Verdict::Pass);
    }

    #[test]
    fn beta_bound_examples() {
        let space = SpaceDescriptor::hilbert(4);
        let chk = check_beta_bound(&hilbert_projection(), &space, 0.1, &cfg()).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        let chk = check_beta_bound(&ComplexMatrix::identity(4), &space, 0.1, &cfg()).unwrap();
        assert_eq!((chk.verdict, chk.lhs), (Verdict::Pass, 0.0));
        let chk = check_beta_bound(&ComplexMatrix::zeros(4, 4), &space, 0.1, &cfg()).unwrap();
        assert_eq!(chk.verdict, Verdict::NotApplicable);
    }
}
