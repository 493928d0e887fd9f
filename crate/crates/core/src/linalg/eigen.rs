//! Dense complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form and single-shift complex QR with Wilkinson shifts.
//! Trailing 2×2 blocks are solved with the quadratic formula.
//!
//! Each eigenvalue carries a residual certificate ‖Av − λv‖₂ for a unit
//! vector v obtained by inverse iteration.

use serde::{Deserialize, Serialize};

use super::lu::Lu;
use super::matrix::{ComplexMatrix, C64};
use crate::{Error, Result};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

/// An eigenvalue with a Euclidean-unit residual vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: C64,
    pub vector: Vec<C64>,
    /// ‖A v − λ v‖₂ with ‖v‖₂ = 1.
    pub residual: f64,
}

/// Eigenvalues with multiplicity, in the order they deflate.
pub fn eigenvalues(a: &ComplexMatrix, tol: f64) -> Result<Vec<C64>> {
    Ok(eigen_decomposition(a, tol)?.into_iter().map(|e| e.value).collect())
}

/// Eigenvalues plus residual certificates.
///
/// Every residual is at most `tol · max(1, ‖A‖_F)`; a larger residual is
/// reported as non-convergence with the eigenvalues found so far.
pub fn eigen_decomposition(a: &ComplexMatrix, tol: f64) -> Result<Vec<EigenPair>> {
    let n = a.require_square()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Input(format!("eigen tolerance must be positive, got {tol}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let values = hessenberg_qr(h)?;

    let scale = a.frobenius_norm().max(1.0);
    let mut pairs = Vec::with_capacity(n);
    for (k, &lambda) in values.iter().enumerate() {
        let (vector, residual) = residual_vector(a, lambda, k);
        if residual > tol * scale {
            return Err(Error::NoConvergence {
                iterations: 0,
                partial: values[..k].to_vec(),
            });
        }
        pairs.push(EigenPair { value: lambda, vector, residual });
    }
    Ok(pairs)
}

/// Diagonal similarity scaling (Parlett–Reinsch, radix 2). Leaves the
/// spectrum unchanged and tames badly scaled rows and columns.
fn balance(a: &mut ComplexMatrix) {
    let n = a.rows();
    let radix = 2.0_f64;
    let sqrdx = radix * radix;
    let mut done = false;
    let mut guard = 0;
    while !done && guard < 100 {
        guard += 1;
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / radix;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let gi = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= gi;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place unitary similarity to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A ← (I − 2vv*) A on rows k+1..n.
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[(k + 1 + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vt * s * 2.0;
            }
        }
        // A ← A (I − 2vv*) on columns k+1..n.
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vt)| a[(i, k + 1 + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= s * vt.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn two_by_two(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    // Roots of λ² − (a+d)λ + (ad − bc), written to avoid cancellation.
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
    let det = a * d - b * c;
    let small = if big.norm() > 0.0 && small.norm() < 1e-8 * big.norm() { det / big } else { small };
    (big, small)
}

fn hessenberg_qr(mut h: ComplexMatrix) -> Result<Vec<C64>> {
    let n = h.rows();
    let cap = 100 * n * n;
    let mut values = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iterations = 0usize;
    let mut since_deflation = 0usize;
    let eps = f64::EPSILON;

    while hi >= 0 {
        let hu = hi as usize;
        if hu == 0 {
            values.push(h[(0, 0)]);
            break;
        }
        // Find the start of the active unreduced block.
        let mut l = hu;
        while l > 0 {
            let s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(l, l - 1)].l1_norm() <= eps * s {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hu {
            values.push(h[(hu, hu)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if l + 1 == hu {
            let (x, y) = two_by_two(h[(l, l)], h[(l, hu)], h[(hu, l)], h[(hu, hu)]);
            values.push(x);
            values.push(y);
            hi -= 2;
            since_deflation = 0;
            continue;
        }
        if iterations >= cap {
            return Err(Error::NoConvergence { iterations, partial: values });
        }
        iterations += 1;
        since_deflation += 1;

        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hu, hu)] + C64::new(h[(hu, hu - 1)].norm() + h[(hu - 1, hu - 2)].norm(), 0.0)
        } else {
            let (x, y) = two_by_two(h[(hu - 1, hu - 1)], h[(hu - 1, hu)], h[(hu, hu - 1)], h[(hu, hu)]);
            if (x - h[(hu, hu)]).norm() <= (y - h[(hu, hu)]).norm() { x } else { y }
        };

        for i in l..=hu {
            h[(i, i)] -= mu;
        }
        let mut rots: Vec<(C64, C64)> = Vec::with_capacity(hu - l);
        for k in l..hu {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            for j in k..=hu {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hu) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for i in l..=hu {
            h[(i, i)] += mu;
        }
    }
    Ok(values)
}

/// Unit vector v minimizing ‖(A − λI)v‖ approximately, by inverse iteration.
fn residual_vector(a: &ComplexMatrix, lambda: C64, salt: usize) -> (Vec<C64>, f64) {
    let n = a.rows();
    let scale = a.frobenius_norm().max(1.0);
    let shifted = a.shift(lambda + C64::new(scale * 1e-13, scale * 7e-14));
    // Deterministic, non-degenerate starting vector.
    let mut v: Vec<C64> = (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 0.7548776662 + salt as f64 * 0.5698402910;
            C64::new(1.0 + t.fract(), (t * 1.3).fract() - 0.5)
        })
        .collect();
    normalize(&mut v);
    let residual_of = |v: &[C64]| {
        let av = a.apply(v);
        av.iter()
            .zip(v)
            .map(|(x, y)| (x - lambda * y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let mut best = (v.clone(), residual_of(&v));
    if let Ok(lu) = Lu::new(&shifted) {
        for _ in 0..4 {
            let mut w = lu.solve(&v);
            if !normalize(&mut w) {
                break;
            }
            v = w;
            let r = residual_of(&v);
            if r < best.1 {
                best = (v.clone(), r);
            }
        }
    }
    best
}

fn normalize(v: &mut [C64]) -> bool {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    for z in v.iter_mut() {
        *z /= n;
    }
    true
}
