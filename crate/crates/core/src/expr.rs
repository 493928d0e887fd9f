//! Expressions in the convex multiplicative semigroup generated by
//! projections P₁, …, P_N: leaves, ordered products and convex
//! combinations. Generator indices are 1-based.

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, C64};
use crate::sampling::rng_for;
use crate::{Error, Result};

/// Smallest admissible convex weight.
pub const MIN_WEIGHT: f64 = 1e-9;
const WEIGHT_SUM_TOL: f64 = 1e-12;
const RANDOM_EXPR_STREAM: u64 = 0xe4b2;

/// JSON: `{"leaf": k}` | `{"product": [...]}` | `{"convex": [[w, expr], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemigroupExpr {
    Leaf(usize),
    /// Factors multiply left to right in list order.
    Product(Vec<SemigroupExpr>),
    Convex(Vec<(f64, SemigroupExpr)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

/// Index set F_T: every generator occurring in the expression.
pub type IndexSet = BTreeSet<usize>;

impl SemigroupExpr {
    pub fn leaf(k: usize) -> Self {
        SemigroupExpr::Leaf(k)
    }

    pub fn product_of(indices: &[usize]) -> Self {
        SemigroupExpr::Product(indices.iter().map(|&k| SemigroupExpr::Leaf(k)).collect())
    }

    pub fn convex_of(weights: &[f64]) -> Self {
        SemigroupExpr::Convex(
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (w, SemigroupExpr::Leaf(i + 1)))
                .collect(),
        )
    }

    /// Every invariant violation, each with a path into the tree.
    pub fn validate(&self, generators: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        self.collect_violations(generators, "root", &mut out);
        out
    }

    fn collect_violations(&self, n: usize, path: &str, out: &mut Vec<Violation>) {
        let mut push = |message: String| {
            out.push(Violation {
                path: path.to_string(),
                message,
            })
        };
        match self {
            SemigroupExpr::Leaf(k) => {
                if *k == 0 || *k > n {
                    push(format!("generator index {k} outside 1..={n}"));
                }
            }
            SemigroupExpr::Product(factors) => {
                if factors.is_empty() {
                    push("empty product".into());
                }
                for (i, f) in factors.iter().enumerate() {
                    f.collect_violations(n, &format!("{path}/product[{i}]"), out);
                }
            }
            SemigroupExpr::Convex(terms) => {
                if terms.is_empty() {
                    push("empty convex combination".into());
                }
                let total: f64 = terms.iter().map(|t| t.0).sum();
                if !terms.is_empty() && (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    push(format!("weights sum to {total}, expected 1"));
                }
                for (i, (w, _)) in terms.iter().enumerate() {
                    if !(w.is_finite() && *w >= MIN_WEIGHT) {
                        push(format!("weight {i} = {w} is below {MIN_WEIGHT}"));
                    }
                }
                for (i, (_, t)) in terms.iter().enumerate() {
                    t.collect_violations(n, &format!("{path}/convex[{i}]"), out);
                }
            }
        }
    }

    pub fn evaluate(&self, generators: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        let n = generators
            .first()
            .ok_or_else(|| Error::Input("no generators".into()))?
            .rows();
        for g in generators {
            if g.rows() != n || g.cols() != n {
                return Err(Error::dim(format!("{n}x{n}"), format!("{}x{}", g.rows(), g.cols())));
            }
        }
        let violations = self.validate(generators.len());
        if let Some(v) = violations.first() {
            return Err(Error::Input(format!("invalid expression at {}: {}", v.path, v.message)));
        }
        Ok(self.eval_unchecked(generators))
    }

    fn eval_unchecked(&self, generators: &[ComplexMatrix]) -> ComplexMatrix {
        match self {
            SemigroupExpr::Leaf(k) => generators[k - 1].clone(),
            SemigroupExpr::Product(factors) => {
                let mut it = factors.iter();
                let first = it.next().expect("validated").eval_unchecked(generators);
                it.fold(first, |acc, f| &acc * &f.eval_unchecked(generators))
            }
            SemigroupExpr::Convex(terms) => {
                let n = generators[0].rows();
                terms.iter().fold(ComplexMatrix::zeros(n, n), |acc, (w, t)| {
                    &acc + &t.eval_unchecked(generators).scale(C64::new(*w, 0.0))
                })
            }
        }
    }

    pub fn index_set(&self) -> IndexSet {
        let mut set = IndexSet::new();
        self.collect_indices(&mut set);
        set
    }

    fn collect_indices(&self, set: &mut IndexSet) {
        match self {
            SemigroupExpr::Leaf(k) => {
                set.insert(*k);
            }
            SemigroupExpr::Product(f) => f.iter().for_each(|e| e.collect_indices(set)),
            SemigroupExpr::Convex(t) => t.iter().for_each(|(_, e)| e.collect_indices(set)),
        }
    }

    /// Radius predicted by (D)-radius arithmetic: products multiply radii,
    /// convex combinations average them. `radii[k-1]` belongs to P_k.
    pub fn predicted_radius(&self, radii: &[f64]) -> f64 {
        match self {
            SemigroupExpr::Leaf(k) => radii[k - 1],
            SemigroupExpr::Product(f) => f.iter().map(|e| e.predicted_radius(radii)).product(),
            SemigroupExpr::Convex(t) => t.iter().map(|(w, e)| w * e.predicted_radius(radii)).sum(),
        }
    }

    /// Algebraically equal tree with nested products spliced into their
    /// parent and nested convex nodes distributed into their parent.
    pub fn flattened(&self) -> SemigroupExpr {
        match self {
            SemigroupExpr::Leaf(k) => SemigroupExpr::Leaf(*k),
            SemigroupExpr::Product(factors) => {
                let mut out = Vec::new();
                for f in factors {
                    match f.flattened() {
                        SemigroupExpr::Product(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                SemigroupExpr::Product(out)
            }
            SemigroupExpr::Convex(terms) => {
                let mut out = Vec::new();
                for (w, t) in terms {
                    match t.flattened() {
                        SemigroupExpr::Convex(inner) => {
                            out.extend(inner.into_iter().map(|(v, e)| (w * v, e)))
                        }
                        other => out.push((*w, other)),
                    }
                }
                SemigroupExpr::Convex(out)
            }
        }
    }

    /// Random tree over N generators. Each level picks leaf / product /
    /// convex with odds 0.4 / 0.3 / 0.3; products have 2–4 factors, convex
    /// nodes 2–3 terms with Dirichlet(1) weights. `depth == 1` yields a leaf.
    pub fn random(n: usize, depth: usize, seed: u64) -> Result<SemigroupExpr> {
        if n == 0 || depth == 0 {
            return Err(Error::Input("random_element needs N >= 1 and depth >= 1".into()));
        }
        let mut rng = rng_for(seed, RANDOM_EXPR_STREAM, 0);
        Ok(random_node(&mut rng, n, depth))
    }
}

fn random_node<R: Rng>(rng: &mut R, n: usize, depth: usize) -> SemigroupExpr {
    let leaf = |rng: &mut R| SemigroupExpr::Leaf(rng.gen_range(1..=n));
    if depth <= 1 {
        return leaf(rng);
    }
    let roll: f64 = rng.gen();
    if roll < 0.4 {
        leaf(rng)
    } else if roll < 0.7 {
        let len = rng.gen_range(2..=4);
        SemigroupExpr::Product((0..len).map(|_| random_node(rng, n, depth - 1)).collect())
    } else {
        let arity = rng.gen_range(2..=3);
        let weights = loop {
            let raw: Vec<f64> = (0..arity).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            if w.iter().all(|&x| x >= MIN_WEIGHT) {
                break w;
            }
        };
        SemigroupExpr::Convex(
            weights
                .into_iter()
                .map(|w| (w, random_node(rng, n, depth - 1)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(SemigroupExpr::Leaf(1).validate(2).is_empty());
        let bad = SemigroupExpr::Convex(vec![(0.5, SemigroupExpr::Leaf(1)), (0.4, SemigroupExpr::Leaf(2))]);
        let v = bad.validate(2);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("0.9"));
        let v = SemigroupExpr::Product(vec![]).validate(2);
        assert_eq!(v[0].message, "empty product");
        let nested = SemigroupExpr::Product(vec![SemigroupExpr::Leaf(1), SemigroupExpr::Leaf(5)]);
        assert_eq!(nested.validate(2)[0].path, "root/product[1]");
        let tiny = SemigroupExpr::Convex(vec![(1.0 - 1e-10, SemigroupExpr::Leaf(1)), (1e-10, SemigroupExpr::Leaf(2))]);
        assert!(!tiny.validate(2).is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let p1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        let p2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 1.0]]);
        let gens = vec![p1.clone(), p2];
        let t = SemigroupExpr::product_of(&[1, 2]).evaluate(&gens).unwrap();
        assert_eq!(t, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]]));
        assert_eq!(SemigroupExpr::Leaf(1).evaluate(&gens).unwrap(), p1);

        let e1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let diag = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let t = SemigroupExpr::convex_of(&[0.5, 0.5]).evaluate(&[e1, diag]).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]])) < 1e-15);
    }

    #[test]
    fn evaluate_errors() {
        let gens = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(SemigroupExpr::Leaf(1).evaluate(&gens).is_err());
        assert!(SemigroupExpr::Leaf(3).evaluate(&gens[..1]).is_err());
    }

    #[test]
    fn index_set_examples() {
        let set: Vec<usize> = SemigroupExpr::product_of(&[1, 2, 1]).index_set().into_iter().collect();
        assert_eq!(set, vec![1, 2]);
        assert_eq!(SemigroupExpr::Leaf(3).index_set().into_iter().collect::<Vec<_>>(), vec![3]);
        let c = SemigroupExpr::convex_of(&[0.2, 0.3, 0.5]);
        assert_eq!(c.index_set().len(), 3);
    }

    #[test]
    fn random_examples() {
        for seed in 0..20 {
            assert!(matches!(SemigroupExpr::random(4, 1, seed).unwrap(), SemigroupExpr::Leaf(_)));
        }
        let a = SemigroupExpr::random(3, 3, 7).unwrap();
        assert_eq!(a, SemigroupExpr::random(3, 3, 7).unwrap());
        assert!(a.validate(3).is_empty());
        assert!(SemigroupExpr::random(0, 2, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let e = SemigroupExpr::Product(vec![
            SemigroupExpr::Leaf(1),
            SemigroupExpr::Convex(vec![(0.25, SemigroupExpr::Leaf(2)), (0.75, SemigroupExpr::Leaf(3))]),
        ]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"product":[{"leaf":1},{"convex":[[0.25,{"leaf":2}],[0.75,{"leaf":3}]]}]}"#);
        assert_eq!(serde_json::from_str::<SemigroupExpr>(&s).unwrap(), e);
    }
}
