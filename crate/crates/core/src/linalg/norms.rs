use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::svd::singular_values;
use crate::sampling::{map_indexed, random_unit, rng_for, Execution};
use crate::{Error, Result};

/// Multi-start count for the general-p norm ascent.
pub const NORM_STARTS: usize = 32;
const NORM_STREAM: u64 = 0x6e6f726d;
const NORM_ASCENT_ITERS: usize = 100;

/// Hölder exponent p ∈ [1, ∞]. Infinity is stored as `f64::INFINITY` and
/// written as `"inf"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Input(format!("exponent p must lie in [1, inf], got {p}")));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Closed-form induced norms exist for p ∈ {1, 2, ∞}.
    pub fn is_exact(self) -> bool {
        self.0 == 1.0 || self.0 == 2.0 || self.0.is_infinite()
    }

    /// Conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INF
        } else if self.0.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExpVisitor;
        impl Visitor<'_> for ExpVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" | "Infinity" => Ok(Exponent::INF),
                    other => other
                        .parse::<f64>()
                        .map_err(E::custom)
                        .and_then(|p| self.visit_f64(p)),
                }
            }
        }
        d.deserialize_any(ExpVisitor)
    }
}

/// The space ℓᵖ_dim over the complex field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SpaceDescriptor {
    pub dim: usize,
    pub p: Exponent,
}

#[derive(Deserialize)]
struct RawSpace {
    dim: usize,
    p: Exponent,
}

impl TryFrom<RawSpace> for SpaceDescriptor {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        SpaceDescriptor::with_exponent(raw.dim, raw.p)
    }
}

impl SpaceDescriptor {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        Self::with_exponent(dim, Exponent::new(p)?)
    }

    pub fn with_exponent(dim: usize, p: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("space dimension must be at least 1".into()));
        }
        Ok(SpaceDescriptor { dim, p })
    }

    pub fn hilbert(dim: usize) -> Self {
        SpaceDescriptor { dim, p: Exponent::TWO }
    }

    pub fn max_norm(dim: usize) -> Self {
        SpaceDescriptor { dim, p: Exponent::INF }
    }

    pub fn l1(dim: usize) -> Self {
        SpaceDescriptor { dim, p: Exponent::ONE }
    }

    /// The dual space ℓ^q_dim.
    pub fn dual(&self) -> Self {
        SpaceDescriptor {
            dim: self.dim,
            p: self.p.dual(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.p.is_exact()
    }

    pub(crate) fn check_vec(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::dim(self.dim, x.len()));
        }
        Ok(())
    }

    pub(crate) fn check_square(&self, a: &ComplexMatrix) -> Result<()> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::dim(
                format!("{0}x{0}", self.dim),
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        Ok(())
    }

    /// Norm of a vector already known to have the right length.
    pub fn norm(&self, x: &[C64]) -> f64 {
        pnorm(x, self.p)
    }
}

pub(crate) fn pnorm(x: &[C64], p: Exponent) -> f64 {
    // Fast paths on |z|² avoid hypot; the scaled loop below handles
    // overflow and underflow.
    if p.0 == 2.0 {
        let s: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if s.is_finite() && s > 1e-280 {
            return s.sqrt();
        }
    } else if p.is_infinite() {
        let m = x.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        if m.is_finite() && m > 1e-280 {
            return m.sqrt();
        }
    } else if p.0 == 1.0 {
        let s: f64 = x.iter().map(|z| z.norm_sqr().sqrt()).sum();
        if s.is_finite() && s > 1e-140 {
            return s;
        }
    }
    pnorm_scaled(x, p)
}

fn pnorm_scaled(x: &[C64], p: Exponent) -> f64 {
    let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if p.is_infinite() || m == 0.0 {
        return m;
    }
    if p.0 == 1.0 {
        return x.iter().map(|z| z.norm()).sum();
    }
    if p.0 == 2.0 {
        let s: f64 = x.iter().map(|z| (z.norm() / m).powi(2)).sum();
        return m * s.sqrt();
    }
    let s: f64 = x.iter().map(|z| (z.norm() / m).powf(p.0)).sum();
    m * s.powf(1.0 / p.0)
}

/// ℓᵖ norm of `x`.
pub fn vec_norm(x: &[C64], space: &SpaceDescriptor) -> Result<f64> {
    space.check_vec(x)?;
    Ok(pnorm(x, space.p))
}

/// Rescale `x` to unit ℓᵖ norm in place. Returns false for the zero vector.
pub fn scale_to_unit(x: &mut [C64], p: Exponent) -> bool {
    let n = pnorm(x, p);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    for z in x.iter_mut() {
        *z /= n;
    }
    true
}

/// Euclidean inner product ⟨x, y⟩ = Σ conj(x_i) y_i.
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Value of an induced operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Closed form (p ∈ {1, 2, ∞}); otherwise `value` is a lower bound.
    pub exact: bool,
    pub iterations: usize,
    pub seed: u64,
}

/// Induced norm ‖A‖ on ℓᵖ. Exact for p ∈ {1, 2, ∞}; otherwise the best
/// value of a multi-start duality-map ascent, which is a certified lower
/// bound.
pub fn operator_norm(a: &ComplexMatrix, space: &SpaceDescriptor, seed: u64) -> Result<NormEstimate> {
    space.check_square(a)?;
    Ok(operator_norm_unchecked(a, space.p, seed, Execution::default()))
}

/// Exact norm for p ∈ {1, 2, ∞}, estimate with seed 0 otherwise.
pub fn induced_norm(a: &ComplexMatrix, p: Exponent) -> f64 {
    operator_norm_unchecked(a, p, 0, Execution::Sequential).value
}

pub(crate) fn operator_norm_unchecked(
    a: &ComplexMatrix,
    p: Exponent,
    seed: u64,
    execution: Execution,
) -> NormEstimate {
    if p.0 == 1.0 {
        let value = (0..a.cols())
            .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        return NormEstimate { value, exact: true, iterations: 0, seed };
    }
    if p.is_infinite() {
        let value = (0..a.rows())
            .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        return NormEstimate { value, exact: true, iterations: 0, seed };
    }
    if p.0 == 2.0 {
        let value = singular_values(a).first().copied().unwrap_or(0.0);
        return NormEstimate { value, exact: true, iterations: 0, seed };
    }

    let (value, iterations, _) = ascent_norm(a, p, seed, execution);
    NormEstimate { value, exact: false, iterations, seed }
}

/// Multi-start duality-map ascent; returns the best value, total iterations
/// and the unit vector attaining the value.
fn ascent_norm(a: &ComplexMatrix, p: Exponent, seed: u64, execution: Execution) -> (f64, usize, Vec<C64>) {
    let adj = a.adjoint();
    let q = p.dual();
    let runs = map_indexed(NORM_STARTS, execution, |start| {
        let mut rng = rng_for(seed, NORM_STREAM, start as u64);
        let mut x = random_unit(&mut rng, a.cols(), p);
        let mut best = pnorm(&a.apply(&x), p);
        let mut iters = 0;
        for _ in 0..NORM_ASCENT_ITERS {
            iters += 1;
            let y = a.apply(&x);
            let mut z = dual_vector(&y, p);
            if z.iter().all(|c| c.norm() == 0.0) {
                break;
            }
            let w = adj.apply(&z);
            z = dual_vector(&w, q);
            if !scale_to_unit(&mut z, p) {
                break;
            }
            let v = pnorm(&a.apply(&z), p);
            if v <= best * (1.0 + 1e-14) {
                if v > best {
                    best = v;
                    x = z;
                }
                break;
            }
            best = v;
            x = z;
        }
        (best, iters, x)
    });
    let values: Vec<Option<f64>> = runs.iter().map(|r| Some(r.0)).collect();
    let iterations = runs.iter().map(|r| r.1).sum();
    match crate::sampling::argmax(&values) {
        Some(w) => (runs[w].0, iterations, runs[w].2.clone()),
        None => (0.0, iterations, vec![C64::new(0.0, 0.0); a.cols()]),
    }
}

/// Unit vector x (in ℓᵖ) with ‖Ax‖ equal to the value reported by the norm
/// routine for the same exponent and seed.
pub(crate) fn norming_vector(a: &ComplexMatrix, p: Exponent, seed: u64, execution: Execution) -> Vec<C64> {
    let n = a.cols();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    if p.0 == 1.0 {
        let j = (0..n)
            .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
            .enumerate()
            .fold((0, -1.0), |acc, (j, s)| if s > acc.1 { (j, s) } else { acc })
            .0;
        let mut x = vec![zero; n];
        if n > 0 {
            x[j] = one;
        }
        return x;
    }
    if p.is_infinite() {
        let i = (0..a.rows())
            .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc })
            .0;
        if a.rows() == 0 {
            return vec![zero; n];
        }
        return a.row(i).iter().map(|z| if z.norm() == 0.0 { one } else { z.conj() / z.norm() }).collect();
    }
    if p.0 == 2.0 {
        return crate::linalg::svd(a).v.column(0);
    }
    ascent_norm(a, p, seed, execution).2
}

/// Norming functional of `y` in the dual of ℓᵖ: a vector z with ‖z‖_q = 1
/// and Re⟨z, y⟩ = ‖y‖_p.
pub(crate) fn dual_vector(y: &[C64], p: Exponent) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let norm = pnorm(y, p);
    if norm == 0.0 {
        return vec![zero; y.len()];
    }
    let phase = |z: &C64| if z.norm() == 0.0 { zero } else { z / z.norm() };
    if p.is_infinite() {
        let (k, _) = y
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        let mut out = vec![zero; y.len()];
        out[k] = phase(&y[k]);
        return out;
    }
    if p.0 == 1.0 {
        return y.iter().map(phase).collect();
    }
    y.iter()
        .map(|z| phase(z) * (z.norm() / norm).powf(p.0 - 1.0))
        .collect()
}
