use super::matrix::{ComplexMatrix, C64};
use crate::{Error, Result};

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    /// Smallest pivot modulus encountered.
    pub min_pivot: f64,
}

impl Lu {
    /// Factor a square matrix. Fails only on an exactly zero pivot.
    pub fn new(a: &ComplexMatrix) -> Result<Lu> {
        let n = a.require_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().partial_cmp(&lu[(j, k)].norm()).unwrap())
                .unwrap();
            let piv = lu[(p, k)].norm();
            min_pivot = min_pivot.min(piv);
            if piv == 0.0 {
                return Err(Error::Structural(format!("singular matrix at pivot {k}")));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(p, j)];
                    lu[(p, j)] = lu[(k, j)];
                    lu[(k, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
        Ok(Lu { lu, perm, min_pivot })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.perm.len();
        assert_eq!(b.len(), n);
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)] * y[j];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let t = self.lu[(i, j)] * y[j];
                y[i] -= t;
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }

    /// Solve `A X = B` column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let cols: Vec<Vec<C64>> = b.columns().iter().map(|c| self.solve(c)).collect();
        ComplexMatrix::from_columns(b.rows(), &cols).expect("finite solve")
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_matrix(&ComplexMatrix::identity(self.perm.len()))
    }
}
