//! Subspaces as orthonormal (Euclidean) bases.

use super::lu::Lu;
use super::matrix::{ComplexMatrix, C64};
use super::norms::dot;
use super::svd::svd;
use crate::{Error, Result};

/// Rank cut for singular values.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Orthonormal basis of Ker(A): right singular vectors whose singular
/// value is at most `tol`. Rectangular inputs are accepted.
pub fn null_space(a: &ComplexMatrix, tol: f64) -> Vec<Vec<C64>> {
    let n = a.cols();
    if n == 0 {
        return Vec::new();
    }
    if a.rows() == 0 {
        return (0..n).map(|j| unit(n, j)).collect();
    }
    let d = svd(a);
    (0..n)
        .filter(|&k| d.sigma.get(k).copied().unwrap_or(0.0) <= tol)
        .map(|k| d.v.column(k))
        .collect()
}

/// Orthonormal basis of Ran(A): left singular vectors with σ > `tol`.
pub fn column_space(a: &ComplexMatrix, tol: f64) -> Vec<Vec<C64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let d = svd(a);
    (0..a.cols())
        .filter(|&k| d.sigma[k] > tol)
        .map(|k| d.u.column(k))
        .collect()
}

/// Gram–Schmidt with one reorthogonalization pass. Vectors whose residual
/// falls below `tol` relative to their norm are reported as dependent.
pub fn orthonormalize(vectors: &[Vec<C64>], tol: f64) -> Result<Vec<Vec<C64>>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let original = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if original == 0.0 || n <= tol * original {
            return Err(Error::Construction(format!(
                "vector {k} is linearly dependent on its predecessors"
            )));
        }
        basis.push(w.into_iter().map(|z| z / n).collect());
    }
    Ok(basis)
}

/// Euclidean orthoprojection B(B*B)⁻¹B* onto the span of `basis`.
pub fn projector_onto(dim: usize, basis: &[Vec<C64>]) -> Result<ComplexMatrix> {
    if basis.is_empty() {
        return Ok(ComplexMatrix::zeros(dim, dim));
    }
    let b = ComplexMatrix::from_columns(dim, basis)?;
    let bh = b.adjoint();
    let gram = &bh * &b;
    let lu = Lu::new(&gram)?;
    Ok(&b * &lu.solve_matrix(&bh))
}

/// Principal angles between span(a) and span(b) (orthonormal inputs, equal
/// counts), ascending. Computed from sines, σ((I − Q_a Q_a*) Q_b), which
/// stays accurate for tiny angles.
pub fn principal_angles(a: &[Vec<C64>], b: &[Vec<C64>]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::dim(
            format!("subspace of dimension {}", a.len()),
            format!("dimension {}", b.len()),
        ));
    }
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let dim = a[0].len();
    let mut residual: Vec<Vec<C64>> = Vec::with_capacity(b.len());
    for v in b {
        let mut w = v.clone();
        for q in a {
            let c = dot(q, &w);
            for (x, y) in w.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        residual.push(w);
    }
    let r = ComplexMatrix::from_columns(dim, &residual)?;
    let mut angles: Vec<f64> = svd(&r).sigma.iter().map(|s| s.min(1.0).asin()).collect();
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(angles)
}

/// Orthonormal basis of ∩ Ker(I − P_k) style intersections: the common
/// null space of the stacked matrices.
pub fn intersect_subspaces(dim: usize, complements: &[ComplexMatrix], tol: f64) -> Result<Vec<Vec<C64>>> {
    if complements.is_empty() {
        return Ok((0..dim).map(|j| unit(dim, j)).collect());
    }
    let stacked = ComplexMatrix::vstack(complements)?;
    if stacked.cols() != dim {
        return Err(Error::dim(dim, stacked.cols()));
    }
    Ok(null_space(&stacked, tol))
}

fn unit(n: usize, j: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[j] = C64::new(1.0, 0.0);
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, j: usize) -> Vec<C64> {
        unit(n, j)
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(null_space(&ComplexMatrix::zeros(2, 2), 1e-8).len(), 2);
        assert!(null_space(&ComplexMatrix::identity(3), 1e-8).is_empty());
    }

    #[test]
    fn fixed_space_of_product_of_coordinate_planes() {
        // P onto span{e1,e2}, Q onto span{e2,e3}: PQ = diag(0,1,0), so
        // Ker(I − PQ) = span{e2}.
        let p = projector_onto(3, &[e(3, 0), e(3, 1)]).unwrap();
        let q = projector_onto(3, &[e(3, 1), e(3, 2)]).unwrap();
        let ker = null_space(&(&p * &q).complement(), 1e-8);
        assert_eq!(ker.len(), 1);
        assert!((ker[0][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn principal_angles_of_lines() {
        let th = 0.3f64;
        let a = vec![e(2, 0)];
        let b = vec![vec![C64::new(th.cos(), 0.0), C64::new(th.sin(), 0.0)]];
        let ang = principal_angles(&a, &b).unwrap();
        assert!((ang[0] - th).abs() < 1e-14);
        let tiny = 1e-11f64;
        let b = vec![vec![C64::new(tiny.cos(), 0.0), C64::new(tiny.sin(), 0.0)]];
        assert!((principal_angles(&a, &b).unwrap()[0] - tiny).abs() < 1e-20);
        assert!(principal_angles(&a, &[]).is_err());
    }

    #[test]
    fn orthonormalize_detects_dependence() {
        let v = vec![vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)], vec![C64::new(2.0, 0.0), C64::new(2.0, 0.0)]];
        assert!(orthonormalize(&v, 1e-10).is_err());
    }
}
