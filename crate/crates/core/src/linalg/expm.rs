//! Matrix exponential by scaling and squaring with a diagonal Padé(6)
//! approximant. The squaring depth comes from the induced 1-norm.

use super::lu::Lu;
use super::matrix::{ComplexMatrix, C64};
use super::norms::{induced_norm, Exponent};
use crate::Result;

/// c_k = (2m−k)! m! / ((2m)! k! (m−k)!) for m = 6.
const PADE6: [f64; 7] = [
    1.0,
    0.5,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15_840.0,
    1.0 / 665_280.0,
];

/// Scaled 1-norm threshold below which Padé(6) is accurate to double precision.
const THETA6: f64 = 0.5;

pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let norm = induced_norm(a, Exponent::ONE);
    let squarings = if norm > THETA6 {
        (norm / THETA6).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let c = |k: usize| C64::new(PADE6[k], 0.0);
    // Even part V, odd part U = A·(odd polynomial in A²).
    let v = &(&(&id.scale(c(0)) + &a2.scale(c(2))) + &a4.scale(c(4))) + &a6.scale(c(6));
    let w = &(&id.scale(c(1)) + &a2.scale(c(3))) + &a4.scale(c(5));
    let u = &scaled * &w;
    let num = &v + &u;
    let den = &v - &u;
    let mut r = Lu::new(&den)?.solve_matrix(&num);
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matches_scalar_exponential() {
        let d = [C64::new(0.3, 2.0), C64::new(-1.5, 0.0), C64::new(0.0, -4.0)];
        let e = expm(&ComplexMatrix::from_diag(&d)).unwrap();
        for (i, z) in d.iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() < 1e-13 * z.exp().norm().max(1.0));
        }
    }

    #[test]
    fn projection_closed_form() {
        // exp(itP) = (I − P) + e^{it} P for any idempotent P.
        let p = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 0.0]]);
        for &t in &[-3.0, -1.0, 0.5, std::f64::consts::PI] {
            let e = expm(&p.scale(C64::new(0.0, t))).unwrap();
            let closed = &p.complement() + &p.scale(C64::new(0.0, t).exp());
            assert!(e.max_abs_diff(&closed) < 1e-13);
        }
    }

    #[test]
    fn nilpotent_is_polynomial() {
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 3.0], &[0.0, 0.0]]);
        let e = expm(&n).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::from_real_rows(&[&[1.0, 3.0], &[0.0, 1.0]])) < 1e-14);
    }
}
