//! Contraction classes:
//!
//! * (H): ‖x − Tx‖² ≤ K(‖x‖² − ‖Tx‖²), K(T) the least such K
//! * (D): ‖T − rI‖ ≤ 1 − r for some r ∈ (0, 1); R(T) the set of such r
//! * (W'): ‖Tx‖ = ‖x‖ implies Tx = x
//!
//! plus their closure under products and convex combinations.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apostol::{boundary_seeds, contraction_norm, omega};
use crate::linalg::norms::{dual_vector, operator_norm_unchecked};
use crate::linalg::{scale_to_unit, ComplexMatrix, Exponent, SpaceDescriptor, C64};
use crate::sampling::{gaussian_vector, maximize, random_unit, Landscape, SamplingConfig, Sphere};
use crate::verdict::Verdict;
use crate::Result;

/// Samples with ‖x‖² − ‖Tx‖² at or below this are skipped.
pub const DENOMINATOR_CUTOFF: f64 = 1e-12;
/// Ratios above this count as evidence that K(T) is infinite.
pub const UNBOUNDED_RATIO: f64 = 1e6;
/// ‖Tx‖ ≥ 1 − ISOMETRY_BAND counts as isometric for (W').
pub const ISOMETRY_BAND: f64 = 1e-8;
/// Rounding allowance on g(r) = ‖T − rI‖ + r − 1.
const RADIUS_TOL: f64 = 1e-12;
/// Intervals shorter than this are reported empty.
const RADIUS_MIN_WIDTH: f64 = 1e-9;

const HALPERIN_STREAM: u64 = 0x4a1;
const WPRIME_STREAM: u64 = 0x3b1;
const POLISH_ITERS: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum HalperinEstimate {
    Bounded {
        /// Lower bound of K(T).
        value: f64,
        maximizer: Option<Vec<C64>>,
        samples: usize,
        seed: u64,
    },
    UnboundedEvidence {
        witness: Vec<C64>,
        numerator: f64,
        denominator: f64,
        samples: usize,
        seed: u64,
    },
}

impl HalperinEstimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            HalperinEstimate::Bounded { value, .. } => Some(*value),
            HalperinEstimate::UnboundedEvidence { .. } => None,
        }
    }
}

fn norm(x: &[C64], p: Exponent) -> f64 {
    SpaceDescriptor { dim: x.len(), p }.norm(x)
}

fn residual(t: &ComplexMatrix, x: &[C64]) -> Vec<C64> {
    let tx = t.apply(x);
    x.iter().zip(&tx).map(|(a, b)| a - b).collect()
}

/// (‖x − Tx‖², ‖x‖² − ‖Tx‖²).
fn halperin_terms(t: &ComplexMatrix, p: Exponent, x: &[C64]) -> (f64, f64) {
    let num = norm(&residual(t, x), p).powi(2);
    let den = norm(x, p).powi(2) - norm(&t.apply(x), p).powi(2);
    (num, den)
}

struct HalperinRatio<'a, F> {
    sphere: Sphere<F>,
    t: &'a ComplexMatrix,
    p: Exponent,
}

impl<F: Fn(&[C64]) -> Option<f64> + Sync> Landscape for HalperinRatio<'_, F> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        self.sphere.sample(rng)
    }

    fn perturb(&self, x: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        self.sphere.perturb(x, step, rng)
    }

    // ‖x‖² − ‖Tx‖² loses all relative accuracy near the isometric set.
    // Inflating it by its rounding bound keeps the ratio a lower bound and
    // stops ascent from climbing on noise.
    fn value(&self, x: &[C64]) -> Option<f64> {
        let (num, den) = halperin_terms(self.t, self.p, x);
        let noise = 1e-14 * x.len() as f64;
        (den > DENOMINATOR_CUTOFF).then(|| num / (den + noise))
    }
}

/// Lower-bound estimate of K(T).
pub fn halperin_constant(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    cfg: &SamplingConfig,
) -> Result<HalperinEstimate> {
    contraction_norm(t, space, cfg)?;
    let p = space.p;
    let seeds = boundary_seeds(t, p);
    for s in &seeds {
        let (num, den) = halperin_terms(t, p, s);
        if den <= DENOMINATOR_CUTOFF && num > 1e-9 {
            return Ok(HalperinEstimate::UnboundedEvidence {
                witness: s.clone(),
                numerator: num,
                denominator: den,
                samples: seeds.len(),
                seed: cfg.seed,
            });
        }
    }
    let land = HalperinRatio {
        sphere: Sphere { dim: space.dim, p, objective: |_: &[C64]| None },
        t,
        p,
    };
    let Some(out) = maximize(&land, &seeds, cfg, HALPERIN_STREAM) else {
        return Ok(HalperinEstimate::Bounded { value: 0.0, maximizer: None, samples: cfg.samples, seed: cfg.seed });
    };
    if out.value > UNBOUNDED_RATIO {
        let (numerator, denominator) = halperin_terms(t, p, &out.point);
        return Ok(HalperinEstimate::UnboundedEvidence {
            witness: out.point,
            numerator,
            denominator,
            samples: out.evaluated,
            seed: cfg.seed,
        });
    }
    Ok(HalperinEstimate::Bounded {
        value: out.value,
        maximizer: Some(out.point),
        samples: out.evaluated,
        seed: cfg.seed,
    })
}

/// R(T) = {r ∈ (0, 1) : ‖T − rI‖ ≤ 1 − r}, a subinterval since
/// g(r) = ‖T − rI‖ + r − 1 is convex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusInterval {
    /// Endpoints of the certified interval; 0 and 1 are never members.
    pub interval: Option<(f64, f64)>,
    /// Minimizer of g on [0, 1] and the minimum.
    pub argmin: f64,
    pub min_value: f64,
    /// False when ‖·‖ is only estimated (p ∉ {1, 2, ∞}).
    pub exact: bool,
}

impl RadiusInterval {
    pub fn contains(&self, r: f64) -> bool {
        matches!(self.interval, Some((lo, hi)) if r > 0.0 && r < 1.0 && r >= lo && r <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.interval.is_none()
    }

    /// A representative member: the midpoint of the interval.
    pub fn midpoint(&self) -> Option<f64> {
        self.interval.map(|(lo, hi)| 0.5 * (lo + hi))
    }
}

/// g(r) = ‖T − rI‖ + r − 1.
pub fn radius_excess(t: &ComplexMatrix, p: Exponent, r: f64) -> f64 {
    operator_norm_unchecked(&t.shift(C64::new(r, 0.0)), p, 0, Default::default()).value + r - 1.0
}

pub fn d_radius_interval(t: &ComplexMatrix, space: &SpaceDescriptor) -> Result<RadiusInterval> {
    space.check_square(t)?;
    let g = |r: f64| radius_excess(t, space.p, r);
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-12 {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    let mut argmin = 0.5 * (a + b);
    let mut min_value = g(argmin);
    for r in [0.0, 1.0] {
        let v = g(r);
        if v < min_value {
            argmin = r;
            min_value = v;
        }
    }
    let exact = space.is_exact();
    if min_value > RADIUS_TOL {
        return Ok(RadiusInterval { interval: None, argmin, min_value, exact });
    }
    let edge = |feasible: f64, infeasible: f64| -> f64 {
        if g(infeasible) <= RADIUS_TOL {
            return infeasible;
        }
        let (mut f, mut i) = (feasible, infeasible);
        while (f - i).abs() > 1e-13 {
            let m = 0.5 * (f + i);
            if g(m) <= RADIUS_TOL {
                f = m;
            } else {
                i = m;
            }
        }
        f
    };
    let lo = edge(argmin, 0.0);
    let hi = edge(argmin, 1.0);
    let interval = (hi > RADIUS_MIN_WIDTH && lo < 1.0 - RADIUS_MIN_WIDTH).then_some((lo, hi));
    Ok(RadiusInterval { interval, argmin, min_value, exact })
}

/// Unit vectors driven toward the isometric set by duality-map ascent of
/// ‖Tx‖; points with ‖Tx‖ < 1 − band after polishing are infeasible.
struct IsometricSet<'a> {
    t: &'a ComplexMatrix,
    adj: ComplexMatrix,
    p: Exponent,
}

impl IsometricSet<'_> {
    fn polish(&self, x: &[C64]) -> Vec<C64> {
        let mut x = x.to_vec();
        if !scale_to_unit(&mut x, self.p) {
            return x;
        }
        let q = self.p.dual();
        let mut value = norm(&self.t.apply(&x), self.p);
        for _ in 0..POLISH_ITERS {
            if value >= 1.0 {
                break;
            }
            let z = dual_vector(&self.t.apply(&x), self.p);
            let mut y = dual_vector(&self.adj.apply(&z), q);
            if !scale_to_unit(&mut y, self.p) {
                break;
            }
            let v = norm(&self.t.apply(&y), self.p);
            if v < value {
                break;
            }
            let moved = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            x = y;
            value = v;
            if moved < 1e-15 {
                break;
            }
        }
        x
    }
}

impl Landscape for IsometricSet<'_> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<C64> {
        self.polish(&random_unit(rng, self.t.cols(), self.p))
    }

    fn perturb(&self, x: &[C64], step: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let g = gaussian_vector(rng, x.len());
        let scale = step / (x.len() as f64).sqrt();
        let y: Vec<C64> = x.iter().zip(&g).map(|(a, b)| a + b * scale).collect();
        self.polish(&y)
    }

    fn value(&self, x: &[C64]) -> Option<f64> {
        (norm(&self.t.apply(x), self.p) >= 1.0 - ISOMETRY_BAND).then(|| norm(&residual(self.t, x), self.p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WPrimeDefect {
    /// Lower bound of sup ‖Tx − x‖ over isometric unit vectors; 0 when
    /// none was found.
    pub value: f64,
    pub witness: Option<Vec<C64>>,
    pub samples: usize,
    pub seed: u64,
}

pub fn wprime_defect(t: &ComplexMatrix, space: &SpaceDescriptor, cfg: &SamplingConfig) -> Result<WPrimeDefect> {
    contraction_norm(t, space, cfg)?;
    let land = IsometricSet { t, adj: t.adjoint(), p: space.p };
    let seeds: Vec<Vec<C64>> = boundary_seeds(t, space.p).iter().map(|s| land.polish(s)).collect();
    Ok(match maximize(&land, &seeds, cfg, WPRIME_STREAM) {
        Some(out) => WPrimeDefect { value: out.value, witness: Some(out.point), samples: out.evaluated, seed: cfg.seed },
        None => WPrimeDefect { value: 0.0, witness: None, samples: cfg.samples, seed: cfg.seed },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub halperin: HalperinEstimate,
    pub d_interval: RadiusInterval,
    pub wprime_defect: WPrimeDefect,
    /// ω estimate; values near 0 are evidence of class (S).
    pub s_class_evidence: f64,
    pub seed: u64,
    pub samples: usize,
}

pub fn classify(t: &ComplexMatrix, space: &SpaceDescriptor, cfg: &SamplingConfig) -> Result<ClassReport> {
    Ok(ClassReport {
        halperin: halperin_constant(t, space, &cfg.substream(1))?,
        d_interval: d_radius_interval(t, space)?,
        wprime_defect: wprime_defect(t, space, &cfg.substream(2))?,
        s_class_evidence: omega(t, space, &cfg.substream(3))?.extrapolated,
        seed: cfg.seed,
        samples: cfg.samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalperinClosure {
    pub verdict: Verdict,
    pub k_product: Option<f64>,
    pub k_a: Option<f64>,
    pub k_b: Option<f64>,
    /// 2·max(K(A), K(B)).
    pub rhs: Option<f64>,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusMembership {
    pub verdict: Verdict,
    /// (r, s, combined radius, g at the combined radius) per tested pair.
    pub cases: Vec<(f64, f64, f64, f64)>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub halperin: HalperinClosure,
    /// rs ∈ R(AB).
    pub product_radius: RadiusMembership,
    /// αr + (1 − α)s ∈ R(αA + (1 − α)B).
    pub convex_radius: RadiusMembership,
}

pub const MEMBERSHIP_TOL: f64 = 1e-9;

pub fn closure_report(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    alpha: f64,
    space: &SpaceDescriptor,
    cfg: &SamplingConfig,
) -> Result<ClosureReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(crate::Error::Input(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    contraction_norm(a, space, cfg)?;
    contraction_norm(b, space, cfg)?;
    let ab = a.compose(b)?;
    let convex = &a.scale_real(alpha) + &b.scale_real(1.0 - alpha);

    let rhs_cfg = cfg.refined();
    let k_ab = halperin_constant(&ab, space, &cfg.substream(1))?.value();
    let k_a = halperin_constant(a, space, &rhs_cfg.substream(2))?.value();
    let k_b = halperin_constant(b, space, &rhs_cfg.substream(3))?.value();
    let rhs = k_a.zip(k_b).map(|(x, y)| 2.0 * x.max(y));
    let verdict = match (k_ab, rhs) {
        (_, None) => Verdict::Vacuous,
        (None, Some(_)) => Verdict::Fail,
        (Some(l), Some(r)) => Verdict::from_bool(l <= r + cfg.slack),
    };
    let halperin = HalperinClosure { verdict, k_product: k_ab, k_a, k_b, rhs, slack: cfg.slack };

    let ra = d_radius_interval(a, space)?;
    let rb = d_radius_interval(b, space)?;
    let (product_radius, convex_radius) = match (ra.interval, rb.interval) {
        (Some((_, ha)), Some((_, hb))) => {
            let pairs = [
                (ha.min(1.0 - 1e-9), hb.min(1.0 - 1e-9)),
                (ra.midpoint().unwrap(), rb.midpoint().unwrap()),
            ];
            let membership = |op: &ComplexMatrix, combine: &dyn Fn(f64, f64) -> f64| {
                let cases: Vec<(f64, f64, f64, f64)> = pairs
                    .iter()
                    .map(|&(r, s)| {
                        let c = combine(r, s);
                        (r, s, c, radius_excess(op, space.p, c))
                    })
                    .collect();
                let ok = cases.iter().all(|c| c.2 > 0.0 && c.2 < 1.0 && c.3 <= MEMBERSHIP_TOL);
                RadiusMembership { verdict: Verdict::from_bool(ok), cases, tolerance: MEMBERSHIP_TOL }
            };
            (
                membership(&ab, &|r, s| r * s),
                membership(&convex, &|r, s| alpha * r + (1.0 - alpha) * s),
            )
        }
        _ => {
            let v = || RadiusMembership { verdict: Verdict::Vacuous, cases: Vec::new(), tolerance: MEMBERSHIP_TOL };
            (v(), v())
        }
    };
    Ok(ClosureReport {
        verdict: halperin.verdict.and(product_radius.verdict).and(convex_radius.verdict),
        alpha,
        halperin,
        product_radius,
        convex_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{make_projection, ProjectionSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn cfg() -> SamplingConfig {
        SamplingConfig::with_seed(5).with_samples(2000)
    }

    fn hilbert_projection() -> ComplexMatrix {
        let basis = vec![vec![c(1.0), c(2.0), c(0.0)], vec![c(0.0), c(1.0), c(1.0)]];
        make_projection(&ProjectionSpec::hilbert_span(basis), &SpaceDescriptor::hilbert(3)).unwrap()
    }

    #[test]
    fn halperin_examples() {
        let space = SpaceDescriptor::hilbert(3);
        let k = halperin_constant(&hilbert_projection(), &space, &cfg()).unwrap().value().unwrap();
        assert!((0.99..=1.0 + 1e-9).contains(&k), "{k}");
        let k = halperin_constant(&ComplexMatrix::identity(3), &space, &cfg()).unwrap().value();
        assert_eq!(k, Some(0.0));
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let k = halperin_constant(&half, &SpaceDescriptor::hilbert(2), &cfg()).unwrap().value().unwrap();
        assert!((k - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn halperin_flags_nontrivial_isometries() {
        let t = ComplexMatrix::from_diag(&[c(-1.0), c(0.0)]);
        let est = halperin_constant(&t, &SpaceDescriptor::hilbert(2), &cfg()).unwrap();
        assert!(matches!(est, HalperinEstimate::UnboundedEvidence { .. }));
        let bad = ComplexMatrix::identity(2).scale_real(1.5);
        assert!(halperin_constant(&bad, &SpaceDescriptor::hilbert(2), &cfg()).is_err());
    }

    #[test]
    fn radius_examples() {
        let space = SpaceDescriptor::hilbert(3);
        let p = hilbert_projection();
        let r = d_radius_interval(&p, &space).unwrap();
        assert!(r.contains(0.5), "{r:?}");
        let i = d_radius_interval(&ComplexMatrix::identity(3), &space).unwrap();
        assert_eq!(i.interval, Some((0.0, 1.0)));
        assert!(i.contains(1e-6) && i.contains(1.0 - 1e-6));
        let minus = ComplexMatrix::identity(3).scale_real(-1.0);
        assert!(d_radius_interval(&minus, &space).unwrap().is_empty());
    }

    #[test]
    fn wprime_examples() {
        let space = SpaceDescriptor::hilbert(3);
        assert!(wprime_defect(&hilbert_projection(), &space, &cfg()).unwrap().value <= 1e-6);
        let t = ComplexMatrix::from_diag(&[c(-1.0), c(0.0)]);
        let d = wprime_defect(&t, &SpaceDescriptor::hilbert(2), &cfg()).unwrap();
        assert!((d.value - 2.0).abs() < 1e-9);
        let t = ComplexMatrix::identity(2).scale_real(0.9);
        assert_eq!(wprime_defect(&t, &SpaceDescriptor::hilbert(2), &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn closure_examples() {
        let space = SpaceDescriptor::hilbert(3);
        let i = ComplexMatrix::identity(3);
        let rep = closure_report(&i, &i, 0.5, &space, &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);

        let p = hilbert_projection();
        let q = make_projection(&ProjectionSpec::coordinate(vec![2, 3]), &space).unwrap();
        let rep = closure_report(&p, &q, 0.3, &space, &cfg()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        let quarter = radius_excess(&p.compose(&q).unwrap(), space.p, 0.25);
        assert!(quarter <= 1e-9);
    }
}
