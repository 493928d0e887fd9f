//! Powers of a contraction: convergence, the ergodic projection onto
//! Ker(I − T) along Ran(I − T), decay of ‖Tⁿ − Tⁿ⁺¹‖, and the fixed-space
//! formula Ker(I − T) = ∩_{k ∈ F_T} Ran(P_k).
//!
//! In finite dimension strong and uniform convergence coincide and
//! Ran(I − T) is always closed, so convergence is reported in operator
//! norm.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::apostol::omega;
use crate::classes::wprime_defect;
use crate::expr::SemigroupExpr;
use crate::linalg::norms::operator_norm_unchecked;
use crate::linalg::{
    column_space, intersect_subspaces, null_space, principal_angles, singular_values, ComplexMatrix, Exponent,
    SpaceDescriptor, DEFAULT_RANK_TOL,
};
use crate::sampling::{Execution, SamplingConfig};
use crate::spaces::{is_orthoprojection, make_projection, OrthoStatus, ProjectionSpec};
use crate::spectral::{kt_bound, kt_bound_from_omega, spectral_report, Amplitude, DEFAULT_BAND};
use crate::verdict::Verdict;
use crate::{Error, Result};

pub const DEFAULT_N_MAX: usize = 100_000;
const AUDIT_PERIOD: usize = 1024;
/// ‖Tⁿ‖ below 1 − this certifies geometric convergence to 0.
const STRICT_MARGIN: f64 = 1e-6;
const SEMISIMPLE_TOL: f64 = 1e-6;
/// Principal-angle cut for subspace equality.
pub const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Induced ℓᵖ norm (p ∈ {1, 2, ∞}).
    Induced,
    /// Frobenius norm, used when the induced norm has no closed form.
    Frobenius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySummary {
    pub window: (usize, usize),
    pub tail_max: f64,
    pub amplitude: Amplitude,
    /// 2a/√(4 − a²); absent when a_T = 2.
    pub bound: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub norm_kind: NormKind,
    /// diffs[n − 1] = ‖Tⁿ − Tⁿ⁺¹‖.
    pub diffs: Vec<f64>,
    /// norms[n − 1] = ‖Tⁿ‖.
    pub norms: Vec<f64>,
    pub converged: bool,
    pub n_stop: usize,
    /// "uniform" (Cauchy doubling check), "strict-contraction", or
    /// "not-converged".
    pub reason: String,
    pub limit: Option<ComplexMatrix>,
    pub limit_residual: Option<f64>,
    /// ‖L² − L‖ and ‖L‖ for the limit L.
    pub limit_idempotence: Option<f64>,
    pub limit_norm: Option<f64>,
    /// (1/N) Σ_{k<N} Tᵏ with N = n_stop.
    pub cesaro_limit: ComplexMatrix,
    /// Largest discrepancy found when re-deriving Tⁿ by repeated squaring.
    pub audit_drift: f64,
    pub decay_bound_check: Option<DecaySummary>,
}

impl IterationReport {
    /// Rows `n,diff,norm` for plotting.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,diff,norm\n");
        for (i, (d, m)) in self.diffs.iter().zip(&self.norms).enumerate() {
            let _ = writeln!(out, "{},{:e},{:e}", i + 1, d, m);
        }
        out
    }
}

fn matrix_norm(a: &ComplexMatrix, p: Exponent) -> f64 {
    if p == Exponent::TWO {
        singular_values(a).first().copied().unwrap_or(0.0)
    } else if p.is_exact() {
        operator_norm_unchecked(a, p, 0, Execution::Sequential).value
    } else {
        a.frobenius_norm()
    }
}

fn power(t: &ComplexMatrix, mut n: usize) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(t.rows());
    let mut base = t.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

fn check_contraction(t: &ComplexMatrix, space: &SpaceDescriptor) -> Result<()> {
    space.check_square(t)?;
    let n = operator_norm_unchecked(t, space.p, 0, Execution::Sequential).value;
    if n > 1.0 + 1e-8 {
        return Err(Error::Precondition(format!("operator is not a contraction: norm {n}")));
    }
    Ok(())
}

struct Powers {
    diffs: Vec<f64>,
    norms: Vec<f64>,
    cesaro: ComplexMatrix,
    current: ComplexMatrix,
    audit_drift: f64,
}

/// Steps n = 1, 2, … computing ‖Tⁿ − Tⁿ⁺¹‖ and ‖Tⁿ‖; `stop` sees n, Tⁿ and
/// the current diff and ends the run by returning true.
fn run_powers<F>(t: &ComplexMatrix, p: Exponent, n_max: usize, mut stop: F) -> Powers
where
    F: FnMut(usize, &ComplexMatrix, &Powers) -> bool,
{
    let dim = t.rows();
    let mut s = Powers {
        diffs: Vec::with_capacity(n_max.min(1 << 20)),
        norms: Vec::with_capacity(n_max.min(1 << 20)),
        cesaro: ComplexMatrix::zeros(dim, dim),
        current: t.clone(),
        audit_drift: 0.0,
    };
    let mut previous = ComplexMatrix::identity(dim);
    for n in 1..=n_max {
        // Running Σ_{k<n} Tᵏ.
        s.cesaro = if n == 1 {
            ComplexMatrix::identity(dim)
        } else {
            &s.cesaro + &previous
        };
        if n % AUDIT_PERIOD == 0 {
            let fresh = power(t, n);
            let drift = fresh.max_abs_diff(&s.current);
            s.audit_drift = s.audit_drift.max(drift);
            if drift > 1e-12 {
                s.current = fresh;
            }
        }
        let next = &s.current * t;
        s.diffs.push(matrix_norm(&(&s.current - &next), p));
        s.norms.push(matrix_norm(&s.current, p));
        let current = std::mem::replace(&mut s.current, next);
        previous = current.clone();
        if stop(n, &current, &s) {
            s.current = current;
            return s;
        }
    }
    s
}

pub fn iterate(t: &ComplexMatrix, space: &SpaceDescriptor, n_max: usize, tol: f64) -> Result<IterationReport> {
    if n_max == 0 {
        return Err(Error::Input("n_max must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    check_contraction(t, space)?;
    let p = space.p;
    let dim = t.rows();
    let mut outcome: Option<(String, ComplexMatrix, f64)> = None;
    let mut next_check = 1;
    let powers = run_powers(t, p, n_max, |n, tn, s| {
        let norm = *s.norms.last().unwrap();
        if space.is_exact() && norm < 1.0 - STRICT_MARGIN {
            outcome = Some(("strict-contraction".into(), ComplexMatrix::zeros(dim, dim), norm));
            return true;
        }
        if *s.diffs.last().unwrap() <= tol && n >= next_check {
            let doubled = tn * tn;
            let gap = matrix_norm(&(tn - &doubled), p);
            if gap <= tol {
                outcome = Some(("uniform".into(), doubled, gap));
                return true;
            }
            next_check = 2 * n;
        }
        false
    });
    let n_stop = powers.diffs.len();
    let cesaro_limit = powers.cesaro.scale_real(1.0 / n_stop as f64);
    let (converged, reason, limit, limit_residual) = match outcome {
        Some((reason, limit, residual)) => (true, reason, Some(limit), Some(residual)),
        None => (false, "not-converged".to_string(), None, None),
    };
    let limit_idempotence = limit.as_ref().map(|l| matrix_norm(&(&(l * l) - l), p));
    let limit_norm = limit.as_ref().map(|l| matrix_norm(l, p));
    let decay_bound_check = spectral_report(t, DEFAULT_BAND).ok().map(|rep| {
        let lo = (n_stop / 2).max(1);
        let tail_max = powers.diffs[lo - 1..].iter().copied().fold(0.0, f64::max);
        decay_summary((lo, n_stop), tail_max, rep.amplitude)
    });
    Ok(IterationReport {
        norm_kind: if space.is_exact() { NormKind::Induced } else { NormKind::Frobenius },
        diffs: powers.diffs,
        norms: powers.norms,
        converged,
        n_stop,
        reason,
        limit,
        limit_residual,
        limit_idempotence,
        limit_norm,
        cesaro_limit,
        audit_drift: powers.audit_drift,
        decay_bound_check,
    })
}

const DECAY_TOL: f64 = 1e-6;

fn decay_summary(window: (usize, usize), tail_max: f64, amplitude: Amplitude) -> DecaySummary {
    // Empty boundary spectrum: the powers tend to 0 and so do the diffs.
    let bound = match amplitude {
        Amplitude::Empty => Some(0.0),
        Amplitude::Value(a) => kt_bound(a).ok(),
    };
    let verdict = match bound {
        None => Verdict::Vacuous,
        Some(b) => Verdict::from_bool(tail_max <= b + DECAY_TOL),
    };
    DecaySummary { window, tail_max, amplitude, bound, verdict }
}

/// Projection onto Ker(I − T) along Ran(I − T).
pub fn ergodic_projection(t: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let n = t.require_square()?;
    let c = t.complement();
    let fixed = null_space(&c, tol);
    let range = column_space(&c, tol);
    if fixed.len() + range.len() != n {
        return Err(Error::Structural(format!(
            "eigenvalue 1 is not semisimple: dim Ker(I-T) = {}, rank(I-T) = {}",
            fixed.len(),
            range.len()
        )));
    }
    if fixed.is_empty() {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    if range.is_empty() {
        return Ok(ComplexMatrix::identity(n));
    }
    let mut cols = fixed.clone();
    cols.extend(range.iter().cloned());
    let joint = ComplexMatrix::from_columns(n, &cols)?;
    let smallest = singular_values(&joint).last().copied().unwrap_or(0.0);
    if smallest <= SEMISIMPLE_TOL {
        return Err(Error::Structural(format!(
            "eigenvalue 1 is not semisimple: Ker(I-T) and Ran(I-T) overlap (sigma_min {smallest:e})"
        )));
    }
    make_projection(&ProjectionSpec::oblique(fixed, range), &SpaceDescriptor::hilbert(n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub generator: usize,
    pub orthoprojection: OrthoStatus,
    pub wprime_defect: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeFormulaCheck {
    pub verdict: Verdict,
    pub index_set: Vec<usize>,
    pub fixed_dim: usize,
    pub intersection_dim: usize,
    pub angles: Vec<f64>,
    pub tol: f64,
    pub hypotheses: Vec<Hypothesis>,
    /// False when some generator in F_T was not certified; the comparison
    /// is still carried out.
    pub hypotheses_certified: bool,
}

/// Compares Ker(I − T), T the value of `expr`, with ∩_{k ∈ F_T} Ran(P_k).
pub fn check_range_formula(
    expr: &SemigroupExpr,
    generators: &[ComplexMatrix],
    space: &SpaceDescriptor,
    tol: f64,
    cfg: &SamplingConfig,
) -> Result<RangeFormulaCheck> {
    let t = expr.evaluate(generators)?;
    space.check_square(&t)?;
    let index_set: Vec<usize> = expr.index_set().into_iter().collect();
    let mut hypotheses = Vec::new();
    for &k in &index_set {
        let g = &generators[k - 1];
        let ortho = is_orthoprojection(g, space)?;
        let wprime = match wprime_defect(g, space, &cfg.substream(k as u64)) {
            Ok(w) => w.value,
            Err(_) => f64::INFINITY,
        };
        let certified = ortho.status != OrthoStatus::Rejected && wprime <= 1e-6;
        hypotheses.push(Hypothesis { generator: k, orthoprojection: ortho.status, wprime_defect: wprime, certified });
    }
    let fixed = null_space(&t.complement(), DEFAULT_RANK_TOL);
    let complements: Vec<ComplexMatrix> = index_set.iter().map(|&k| generators[k - 1].complement()).collect();
    let inter = intersect_subspaces(space.dim, &complements, DEFAULT_RANK_TOL)?;
    let (verdict, angles) = if fixed.len() == inter.len() {
        let angles = principal_angles(&fixed, &inter)?;
        (Verdict::from_bool(angles.iter().all(|&a| a <= tol)), angles)
    } else {
        (Verdict::Fail, Vec::new())
    };
    Ok(RangeFormulaCheck {
        verdict,
        index_set,
        fixed_dim: fixed.len(),
        intersection_dim: inter.len(),
        angles,
        tol,
        hypotheses_certified: hypotheses.iter().all(|h| h.certified),
        hypotheses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub verdict: Verdict,
    pub n_max: usize,
    pub window: (usize, usize),
    pub tail_max: f64,
    pub amplitude: Amplitude,
    pub bound: Option<f64>,
    /// Context only: ω estimate and 2ω/√(4 − ω²).
    pub omega: Option<f64>,
    pub omega_bound: Option<f64>,
}

/// limsup ‖Tⁿ − Tⁿ⁺¹‖, estimated as the maximum over [n_max/2, n_max],
/// against 2a_T/√(4 − a_T²). The ω-based bound is added when a sampling
/// configuration is supplied.
pub fn check_decay_bound(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    n_max: usize,
    omega_cfg: Option<&SamplingConfig>,
) -> Result<DecayCheck> {
    if n_max < 2 {
        return Err(Error::Input("n_max must be at least 2".into()));
    }
    check_contraction(t, space)?;
    let report = spectral_report(t, DEFAULT_BAND)?;
    let powers = run_powers(t, space.p, n_max, |_, _, _| false);
    let lo = n_max / 2;
    let tail_max = powers.diffs[lo - 1..].iter().copied().fold(0.0, f64::max);
    let summary = decay_summary((lo, n_max), tail_max, report.amplitude);
    let (omega_value, omega_bound) = match omega_cfg {
        Some(cfg) => {
            let w = omega(t, space, cfg)?.extrapolated;
            (Some(w), kt_bound_from_omega(w).ok())
        }
        None => (None, None),
    };
    Ok(DecayCheck {
        verdict: summary.verdict,
        n_max,
        window: summary.window,
        tail_max,
        amplitude: summary.amplitude,
        bound: summary.bound,
        omega: omega_value,
        omega_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn counterexample() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]])
    }

    fn pq() -> (ComplexMatrix, ComplexMatrix) {
        let space = SpaceDescriptor::hilbert(3);
        (
            make_projection(&ProjectionSpec::coordinate(vec![1, 2]), &space).unwrap(),
            make_projection(&ProjectionSpec::coordinate(vec![2, 3]), &space).unwrap(),
        )
    }

    #[test]
    fn counterexample_diverges() {
        let rep = iterate(&counterexample(), &SpaceDescriptor::max_norm(2), 200, 1e-10).unwrap();
        assert!(!rep.converged);
        assert!(rep.diffs.iter().all(|d| (d - 2.0).abs() < 1e-12));
        assert!(rep.cesaro_limit.max_abs() <= 1.0 / 200.0 + 1e-12);
        assert_eq!(rep.decay_bound_check.unwrap().verdict, Verdict::Vacuous);
    }

    #[test]
    fn projection_converges_at_once() {
        let (p, _) = pq();
        let rep = iterate(&p, &SpaceDescriptor::hilbert(3), 100, 1e-12).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.n_stop, 1);
        assert!(rep.limit.unwrap().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn lapidus_average_tends_to_zero() {
        let t = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]);
        let rep = iterate(&t, &SpaceDescriptor::hilbert(2), 1000, 1e-12).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.limit.unwrap().max_abs(), 0.0);
    }

    #[test]
    fn ergodic_examples() {
        let (p, q) = pq();
        assert!(ergodic_projection(&p, 1e-8).unwrap().max_abs_diff(&p) < 1e-12);
        let d = ComplexMatrix::from_diag(&[c(1.0), c(0.5), c(-0.3)]);
        let e = ergodic_projection(&d, 1e-8).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::from_diag(&[c(1.0), c(0.0), c(0.0)])) < 1e-12);
        let t = &p * &q;
        let e = ergodic_projection(&t, 1e-8).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::from_diag(&[c(0.0), c(1.0), c(0.0)])) < 1e-12);
        assert!((&t * &e).max_abs_diff(&e) < 1e-8 && (&e * &t).max_abs_diff(&e) < 1e-8);
        let jordan = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(ergodic_projection(&jordan, 1e-8), Err(Error::Structural(_))));
    }

    #[test]
    fn range_formula_examples() {
        let (p, q) = pq();
        let gens = vec![p, q];
        let space = SpaceDescriptor::hilbert(3);
        let cfg = SamplingConfig::with_seed(1).with_samples(500);
        for expr in [
            SemigroupExpr::product_of(&[1, 2]),
            SemigroupExpr::Leaf(1),
            SemigroupExpr::convex_of(&[0.5, 0.5]),
        ] {
            let chk = check_range_formula(&expr, &gens, &space, ANGLE_TOL, &cfg).unwrap();
            assert_eq!(chk.verdict, Verdict::Pass, "{chk:?}");
            assert!(chk.hypotheses_certified);
        }
        let chk = check_range_formula(&SemigroupExpr::product_of(&[1, 2]), &gens, &space, ANGLE_TOL, &cfg).unwrap();
        assert_eq!((chk.fixed_dim, chk.intersection_dim), (1, 1));
    }

    #[test]
    fn decay_examples() {
        let theta: f64 = 0.3;
        let w = C64::from_polar(1.0, theta);
        let t = ComplexMatrix::from_diag(&[w, c(0.5)]);
        let chk = check_decay_bound(&t, &SpaceDescriptor::hilbert(2), 1000, None).unwrap();
        let a = (c(1.0) - w).norm();
        assert!((chk.tail_max - a).abs() < 1e-9);
        assert_eq!(chk.verdict, Verdict::Pass);

        let chk = check_decay_bound(&ComplexMatrix::identity(2), &SpaceDescriptor::hilbert(2), 100, None).unwrap();
        assert_eq!((chk.tail_max, chk.verdict), (0.0, Verdict::Pass));

        let (p, q) = pq();
        let chk = check_decay_bound(&(&p * &q), &SpaceDescriptor::hilbert(3), 200, None).unwrap();
        assert!(chk.tail_max < 1e-12);
    }

    #[test]
    fn csv_rows() {
        let rep = iterate(&counterexample(), &SpaceDescriptor::max_norm(2), 3, 1e-10).unwrap();
        assert_eq!(rep.csv().lines().count(), 4);
        assert!(rep.csv().starts_with("n,diff,norm\n1,2e0,1e0\n"));
    }
}
