//! One-sided (Hestenes) Jacobi SVD for dense complex matrices.

use super::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U Σ V*` with singular values in descending order.
///
/// `v` is always a full `cols × cols` unitary matrix, so the trailing
/// columns paired with zero singular values span Ker(A). `u` holds one
/// column per singular value; columns for σ = 0 are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    // Work on columns stored contiguously.
    let mut cols: Vec<Vec<C64>> = a.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column j by the phase of γ so the 2x2 Gram block is real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, i, j, phase, c, s);
                rotate(&mut v, i, j, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / s;
            }
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd { sigma, u, v: vm }
}

fn rotate(cols: &mut [Vec<C64>], i: usize, j: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    let pc = phase.conj();
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let yr = *y * pc;
        let xi = *x;
        *x = xi * c - yr * s;
        *y = xi * s + yr * c;
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    svd(a).sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.5), C64::new(-2.0, 0.0), C64::new(0.3, -0.7)],
            vec![C64::new(0.0, 1.0), C64::new(0.5, 0.5), C64::new(1.0, 0.0)],
            vec![C64::new(2.0, 0.0), C64::new(0.0, -1.0), C64::new(-0.4, 0.2)],
            vec![C64::new(0.1, 0.1), C64::new(0.2, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn reconstructs_input() {
        let a = sample();
        let d = svd(&a);
        let mut sig = ComplexMatrix::zeros(3, 3);
        for (k, &s) in d.sigma.iter().enumerate() {
            sig[(k, k)] = C64::new(s, 0.0);
        }
        let back = &(&d.u * &sig) * &d.v.adjoint();
        assert!(back.max_abs_diff(&a) < 1e-12);
        let vv = &d.v.adjoint() * &d.v;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn sum_of_squares_is_frobenius() {
        let a = sample();
        let s: f64 = singular_values(&a).iter().map(|x| x * x).sum();
        assert_abs_diff_eq!(s, a.frobenius_norm().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn rank_deficient() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let s = singular_values(&a);
        assert_abs_diff_eq!(s[0], 5.0, epsilon = 1e-12);
        assert!(s[1] < 1e-14);
    }
}
