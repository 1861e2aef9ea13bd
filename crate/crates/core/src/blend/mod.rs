//! Convex combinations of compatible tree metrics and of translation-length
//! functions.
//!
//! Two metrics on the same combinatorial tree blend to
//! `d_λ = λ d_1 + (1 − λ) d_0`, which is again a tree metric realized by the
//! same shape. Length functions of different trees have no such guarantee;
//! [`length_axiom_check`] searches for violations of the tree length
//! function conditions.

mod format;
mod length;

pub use format::{parse_length_table, parse_pair, write_pair};
pub use length::{
    axiom_scan, convex_combination_length_check, length_axiom_check, marked_graph_length, Axiom, AxiomReport, AxiomViolation,
    CombinationReport, LengthFunction, MarkedGraph, Provenance, WordSet,
};

use crate::error::BlendError;
use crate::num::Scalar;
use crate::observers::verify_shape_map;
use crate::qmap::{IsometricAction, LineAction};
use crate::tree::{check_hyperbolic, reconstruct_tree, HyperbolicityVerdict, MetricTable, MetricTree};

/// Two positive edge-length assignments on one combinatorial tree.
///
/// Designated points sit at the same fraction of their edge in both
/// metrics, and the identity on designated points preserves centers and
/// segments.
#[derive(Clone, Debug)]
pub struct CompatibleMetricPair<S> {
    tree0: MetricTree<S>,
    tree1: MetricTree<S>,
}

impl<S: Scalar> CompatibleMetricPair<S> {
    /// `shape` carries `d0`; `d1` lists the second length of every edge in
    /// edge order.
    pub fn new(shape: MetricTree<S>, d1: Vec<S>) -> Result<Self, BlendError> {
        let d0: Vec<S> = shape.edges().iter().map(|e| e.length.clone()).collect();
        Self::from_lengths(&shape, d0, d1)
    }

    pub fn from_lengths(shape: &MetricTree<S>, d0: Vec<S>, d1: Vec<S>) -> Result<Self, BlendError> {
        let m = shape.edges().len();
        for d in [&d0, &d1] {
            if d.len() != m {
                return Err(BlendError::LengthCount { expected: m, got: d.len() });
            }
            if let Some(i) = d.iter().position(|l| !l.is_positive()) {
                return Err(BlendError::NonPositiveLength(i));
            }
        }
        let tree0 = shape.with_lengths(&d0)?;
        let tree1 = shape.with_lengths(&d1)?;
        for t in [&tree0, &tree1] {
            if let Some(w) = check_hyperbolic(&t.metric_table(), &S::zero()).witness {
                return Err(BlendError::Incompatible(format!("quadruple {} {} {} {} is not tree-like", w.x, w.y, w.z, w.w)));
            }
        }
        let names = tree0.metric_table().names().to_vec();
        let map: Vec<(String, String)> = names.iter().map(|n| (n.clone(), n.clone())).collect();
        let v = verify_shape_map(&tree0, &tree1, &map).map_err(|e| BlendError::Incompatible(e.to_string()))?;
        if let Some(w) = v.witness {
            return Err(BlendError::Incompatible(w.to_string()));
        }
        Ok(CompatibleMetricPair { tree0, tree1 })
    }

    pub fn tree0(&self) -> &MetricTree<S> {
        &self.tree0
    }

    pub fn tree1(&self) -> &MetricTree<S> {
        &self.tree1
    }

    pub fn d0(&self) -> Vec<S> {
        self.tree0.edges().iter().map(|e| e.length.clone()).collect()
    }

    pub fn d1(&self) -> Vec<S> {
        self.tree1.edges().iter().map(|e| e.length.clone()).collect()
    }
}

fn check_lambda<S: Scalar>(lambda: &S) -> Result<(), BlendError> {
    if *lambda < S::zero() || *lambda > S::one() {
        return Err(BlendError::LambdaOutOfRange(lambda.to_string()));
    }
    Ok(())
}

/// The tree with edge lengths `λ d1 + (1 − λ) d0`.
pub fn blend_metric<S: Scalar>(pair: &CompatibleMetricPair<S>, lambda: &S) -> Result<MetricTree<S>, BlendError> {
    check_lambda(lambda)?;
    let mu = S::one() - lambda.clone();
    let lengths: Vec<S> = pair.d0().into_iter().zip(pair.d1()).map(|(a, b)| lambda.clone() * b + mu.clone() * a).collect();
    Ok(pair.tree0.with_lengths(&lengths)?)
}

/// The line action with weights `λ μ1 + (1 − λ) μ0`.
pub fn blend_line_actions<S: Scalar>(a0: &LineAction<S>, a1: &LineAction<S>, lambda: &S) -> Result<LineAction<S>, BlendError> {
    check_lambda(lambda)?;
    if a0.rank() != a1.rank() {
        return Err(BlendError::Incompatible(format!("ranks {} and {}", a0.rank(), a1.rank())));
    }
    let mu = S::one() - lambda.clone();
    let w = a0.weights().iter().zip(a1.weights()).map(|(x, y)| lambda.clone() * y.clone() + mu.clone() * x.clone()).collect();
    LineAction::new(w).map_err(|e| BlendError::Incompatible(e.to_string()))
}

/// Result of [`certify_rtree`].
#[derive(Clone, Debug, PartialEq)]
pub struct RtreeCertificate<S> {
    pub verdict: HyperbolicityVerdict<S>,
    /// Whether a tree realizing the table was rebuilt and reproduces every
    /// distance; `None` when the four-point check already failed.
    pub realized: Option<bool>,
}

impl<S> RtreeCertificate<S> {
    pub fn passes(&self) -> bool {
        self.verdict.passes && self.realized == Some(true)
    }
}

/// Four-point check followed by a reconstruction round trip.
pub fn certify_rtree<S: Scalar>(space: &MetricTable<S>) -> RtreeCertificate<S> {
    let verdict = check_hyperbolic(space, &S::zero());
    if !verdict.passes {
        return RtreeCertificate { verdict, realized: None };
    }
    let realized = reconstruct_tree(space).is_ok_and(|t| {
        let names = space.names();
        names
            .iter()
            .enumerate()
            .all(|(i, p)| names.iter().enumerate().all(|(j, q)| t.distance_by_name(p, q).is_ok_and(|d| d.approx_eq(space.get(i, j)))))
    });
    RtreeCertificate { verdict, realized: Some(realized) }
}

/// Names of a triple whose center moves between two metrics on one shape.
pub fn center_shift<S: Scalar>(a: &MetricTree<S>, b: &MetricTree<S>) -> Option<[String; 3]> {
    let names: Vec<String> = a.metric_table().names().to_vec();
    let loc = |t: &MetricTree<S>, n: &str| t.locate(n).expect("designated point");
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            for k in j + 1..names.len() {
                let (x, y, z) = (&names[i], &names[j], &names[k]);
                let ca = a.center(&loc(a, x), &loc(a, y), &loc(a, z));
                let cb = b.center(&loc(b, x), &loc(b, y), &loc(b, z));
                if a.shape_coordinates(&ca) != b.shape_coordinates(&cb) {
                    return Some([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
    }
    None
}

/// Which of the three Gromov products `(y,z)_w`, `(x,z)_w`, `(x,y)_w` is
/// strictly largest, or `None` when all three are equal.
fn largest_product<S: Scalar>(t: &MetricTable<S>, [x, y, z, w]: [usize; 4]) -> Option<usize> {
    let g = [t.gromov_product_idx(y, z, w), t.gromov_product_idx(x, z, w), t.gromov_product_idx(x, y, w)];
    let top = (0..3).max_by(|&i, &j| g[i].cmp_total(&g[j]))?;
    (0..3).all(|i| i == top || g[i].definitely_lt(&g[top])).then_some(top)
}

/// Checks on every quadruple that two tables either both have three equal
/// Gromov products, or have their strictly largest one at the same pair.
/// Returns the first quadruple where this fails.
pub fn gromov_dichotomy<S: Scalar>(t0: &MetricTable<S>, t1: &MetricTable<S>) -> Result<(), [String; 4]> {
    let n = t0.len();
    assert_eq!(n, t1.len(), "tables over the same points");
    for w in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let q = [x, y, z, w];
                    if largest_product(t0, q) != largest_product(t1, q) {
                        return Err(q.map(|i| t0.names()[i].clone()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `0, 1/k, ..., 1`.
pub fn lambda_grid<S: Scalar>(k: usize) -> Vec<S> {
    (0..=k).map(|i| S::from_ratio(i as i64, k as i64)).collect()
}

#[cfg(test)]
mod tests;
