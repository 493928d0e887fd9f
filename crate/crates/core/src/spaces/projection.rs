use serde::{Deserialize, Serialize};

use crate::linalg::{
    expm, induced_norm, operator_norm, orthonormalize, projector_onto, ComplexMatrix, Lu,
    NormEstimate, SpaceDescriptor, C64,
};
use crate::{Error, Result};

/// Tolerance on ‖P² − P‖ for a matrix to count as a projection.
pub const IDEMPOTENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionKind {
    /// Euclidean orthoprojection onto span(range_basis).
    HilbertSpan,
    /// Diagonal 0/1 matrix on `index_set` (1-based).
    Coordinate,
    /// Projection onto span(range_basis) along span(kernel_basis).
    Oblique,
}

/// Recipe for a projection matrix. Vectors are lists of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub kind: ProjectionKind,
    #[serde(default)]
    pub range_basis: Vec<Vec<C64>>,
    #[serde(default)]
    pub kernel_basis: Vec<Vec<C64>>,
    #[serde(default)]
    pub index_set: Vec<usize>,
}

impl ProjectionSpec {
    pub fn hilbert_span(range_basis: Vec<Vec<C64>>) -> Self {
        ProjectionSpec {
            kind: ProjectionKind::HilbertSpan,
            range_basis,
            kernel_basis: Vec::new(),
            index_set: Vec::new(),
        }
    }

    pub fn coordinate(index_set: Vec<usize>) -> Self {
        ProjectionSpec {
            kind: ProjectionKind::Coordinate,
            range_basis: Vec::new(),
            kernel_basis: Vec::new(),
            index_set,
        }
    }

    pub fn oblique(range_basis: Vec<Vec<C64>>, kernel_basis: Vec<Vec<C64>>) -> Self {
        ProjectionSpec {
            kind: ProjectionKind::Oblique,
            range_basis,
            kernel_basis,
            index_set: Vec::new(),
        }
    }
}

pub fn make_projection(spec: &ProjectionSpec, space: &SpaceDescriptor) -> Result<ComplexMatrix> {
    let n = space.dim;
    for v in spec.range_basis.iter().chain(&spec.kernel_basis) {
        space.check_vec(v)?;
    }
    let p = match spec.kind {
        ProjectionKind::HilbertSpan => {
            let basis = orthonormalize(&spec.range_basis, 1e-10)?;
            projector_onto(n, &basis)?
        }
        ProjectionKind::Coordinate => {
            let mut diag = vec![C64::new(0.0, 0.0); n];
            for &k in &spec.index_set {
                if k == 0 || k > n {
                    return Err(Error::Construction(format!(
                        "coordinate index {k} outside 1..={n}"
                    )));
                }
                diag[k - 1] = C64::new(1.0, 0.0);
            }
            ComplexMatrix::from_diag(&diag)
        }
        ProjectionKind::Oblique => {
            let (r, k) = (spec.range_basis.len(), spec.kernel_basis.len());
            if r + k != n {
                return Err(Error::Construction(format!(
                    "range ({r}) and kernel ({k}) dimensions must add up to {n}"
                )));
            }
            let mut cols = spec.range_basis.clone();
            cols.extend(spec.kernel_basis.iter().cloned());
            let basis = ComplexMatrix::from_columns(n, &cols)?;
            let scale = basis.frobenius_norm().max(1.0);
            let lu = Lu::new(&basis)
                .map_err(|_| Error::Construction("range and kernel spans intersect".into()))?;
            if lu.min_pivot <= 1e-12 * scale {
                return Err(Error::Construction("range and kernel spans intersect".into()));
            }
            // P [R K] = [R 0].
            let mut image = ComplexMatrix::zeros(n, n);
            for (j, v) in spec.range_basis.iter().enumerate() {
                for i in 0..n {
                    image[(i, j)] = v[i];
                }
            }
            let inv = lu.inverse();
            &image * &inv
        }
    };
    let defect = idempotence_defect(&p, space);
    if defect > IDEMPOTENCE_TOL {
        return Err(Error::Construction(format!(
            "constructed matrix is not idempotent (defect {defect:e})"
        )));
    }
    Ok(p)
}

/// ‖P² − P‖ in the space's induced norm (Frobenius for non-closed-form p).
fn idempotence_defect(p: &ComplexMatrix, space: &SpaceDescriptor) -> f64 {
    let d = &(p * p) - p;
    if space.is_exact() {
        induced_norm(&d, space.p)
    } else {
        d.frobenius_norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthoStatus {
    /// Idempotent with exact norm ≤ 1.
    Certified,
    /// Idempotent and the norm lower bound never exceeded 1.
    NotFalsified,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoReport {
    pub is_orthoprojection: bool,
    pub status: OrthoStatus,
    pub idempotence_defect: f64,
    pub norm: NormEstimate,
}

/// An orthoprojection is an idempotent contraction; P = 0 qualifies.
pub fn is_orthoprojection(p: &ComplexMatrix, space: &SpaceDescriptor) -> Result<OrthoReport> {
    space.check_square(p)?;
    let idempotence_defect = idempotence_defect(p, space);
    let norm = operator_norm(p, space, 0)?;
    let idempotent = idempotence_defect <= IDEMPOTENCE_TOL;
    let status = match (idempotent, norm.exact) {
        (false, _) => OrthoStatus::Rejected,
        (true, true) if norm.value <= 1.0 + 1e-10 => OrthoStatus::Certified,
        (true, false) if norm.value <= 1.0 + 1e-8 => OrthoStatus::NotFalsified,
        _ => OrthoStatus::Rejected,
    };
    Ok(OrthoReport {
        is_orthoprojection: status != OrthoStatus::Rejected,
        status,
        idempotence_defect,
        norm,
    })
}

/// 129 equispaced points on [−π, π].
pub fn default_t_grid() -> Vec<f64> {
    let n = 129;
    (0..n)
        .map(|k| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64)
        .collect()
}

/// max over the grid of |‖exp(itT)‖ − 1|. Zero (up to rounding) for
/// hermitian operators; grid-based, so a small value is evidence only.
///
/// Idempotent inputs use exp(itP) = (I − P) + e^{it}P.
pub fn hermitian_defect(t_op: &ComplexMatrix, space: &SpaceDescriptor, t_grid: &[f64]) -> Result<f64> {
    space.check_square(t_op)?;
    if t_grid.is_empty() {
        return Err(Error::Input("t grid is empty".into()));
    }
    let lo = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pi = std::f64::consts::PI;
    if lo > -pi + 1e-12 || hi < pi - 1e-12 {
        return Err(Error::Input("t grid must cover [-pi, pi]".into()));
    }
    let is_projection = (&(t_op * t_op) - t_op).frobenius_norm() <= IDEMPOTENCE_TOL;
    let complement = t_op.complement();
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let e = if is_projection {
            &complement + &t_op.scale(C64::new(0.0, t).exp())
        } else {
            expm(&t_op.scale(C64::new(0.0, t)))?
        };
        let n = if space.is_exact() {
            induced_norm(&e, space.p)
        } else {
            operator_norm(&e, space, 0)?.value
        };
        worst = worst.max((n - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: &[f64]) -> Vec<C64> {
        x.iter().map(|&r| C64::new(r, 0.0)).collect()
    }

    #[test]
    fn construction_examples() {
        let s2 = SpaceDescriptor::hilbert(2);
        let p = make_projection(&ProjectionSpec::coordinate(vec![1]), &s2).unwrap();
        assert_eq!(p, ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]));

        let h = 1.0 / 2f64.sqrt();
        let p = make_projection(&ProjectionSpec::hilbert_span(vec![v(&[h, h])]), &s2).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])) < 1e-15);

        let p = make_projection(&ProjectionSpec::oblique(vec![v(&[1.0, 0.0])], vec![v(&[1.0, 1.0])]), &s2).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn construction_errors() {
        let s2 = SpaceDescriptor::hilbert(2);
        let dep = ProjectionSpec::hilbert_span(vec![v(&[1.0, 1.0]), v(&[2.0, 2.0])]);
        assert!(matches!(make_projection(&dep, &s2), Err(Error::Construction(_))));
        let overlap = ProjectionSpec::oblique(vec![v(&[1.0, 1.0])], vec![v(&[2.0, 2.0])]);
        assert!(matches!(make_projection(&overlap, &s2), Err(Error::Construction(_))));
        let short = ProjectionSpec::oblique(vec![v(&[1.0, 0.0])], vec![]);
        assert!(make_projection(&short, &s2).is_err());
        assert!(make_projection(&ProjectionSpec::coordinate(vec![3]), &s2).is_err());
    }

    #[test]
    fn orthoprojection_examples() {
        let p1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        assert!(is_orthoprojection(&p1, &SpaceDescriptor::max_norm(2)).unwrap().is_orthoprojection);

        let avg = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(is_orthoprojection(&avg, &SpaceDescriptor::hilbert(2)).unwrap().is_orthoprojection);

        let obl = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 0.0]]);
        let rep = is_orthoprojection(&obl, &SpaceDescriptor::hilbert(2)).unwrap();
        assert!(!rep.is_orthoprojection);
        assert_abs_diff_eq!(rep.norm.value, 2f64.sqrt(), epsilon = 1e-14);

        for m in [ComplexMatrix::zeros(3, 3), ComplexMatrix::identity(3)] {
            assert!(is_orthoprojection(&m, &SpaceDescriptor::new(3, 3.0).unwrap()).unwrap().is_orthoprojection);
        }
    }

    #[test]
    fn hermitian_defect_examples() {
        let grid = default_t_grid();
        assert_eq!(grid.len(), 129);
        let h = 1.0 / 2f64.sqrt();
        let p = make_projection(&ProjectionSpec::hilbert_span(vec![v(&[h, h])]), &SpaceDescriptor::hilbert(2)).unwrap();
        assert!(hermitian_defect(&p, &SpaceDescriptor::hilbert(2), &grid).unwrap() <= 1e-9);

        // ‖I − 2P1‖_∞ − 1 = ‖[[−1,0],[2,1]]‖_∞ − 1 = 2 at t = π.
        let p1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        let d = hermitian_defect(&p1, &SpaceDescriptor::max_norm(2), &[-std::f64::consts::PI, std::f64::consts::PI]).unwrap();
        assert_abs_diff_eq!(d, 2.0, epsilon = 1e-12);

        assert!(hermitian_defect(&ComplexMatrix::zeros(2, 2), &SpaceDescriptor::hilbert(2), &grid).unwrap() < 1e-15);
        assert!(hermitian_defect(&p1, &SpaceDescriptor::max_norm(2), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn non_projection_uses_matrix_exponential() {
        // A real symmetric matrix is hermitian in ℓ²: exp(itA) is unitary.
        let a = ComplexMatrix::from_real_rows(&[&[0.3, 1.2], &[1.2, -0.7]]);
        assert!(hermitian_defect(&a, &SpaceDescriptor::hilbert(2), &default_t_grid()).unwrap() < 1e-12);
        // A nilpotent is not.
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(hermitian_defect(&n, &SpaceDescriptor::hilbert(2), &default_t_grid()).unwrap() > 0.5);
    }

    #[test]
    fn spec_json_round_trip() {
        let s = r#"{"kind":"coordinate","index_set":[1,3]}"#;
        let spec: ProjectionSpec = serde_json::from_str(s).unwrap();
        assert_eq!(spec.kind, ProjectionKind::Coordinate);
        let s = r#"{"kind":"hilbert-span","range_basis":[[[1.0,0.0],[0.0,1.0]]]}"#;
        let spec: ProjectionSpec = serde_json::from_str(s).unwrap();
        assert_eq!(spec.range_basis[0][1], C64::new(0.0, 1.0));
    }
}
