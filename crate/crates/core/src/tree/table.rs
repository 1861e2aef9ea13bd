use std::collections::HashMap;

use crate::error::TreeError;
use crate::num::Scalar;

/// A finite metric space given by its distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable<S> {
    names: Vec<String>,
    index: HashMap<String, usize>,
    d: Vec<Vec<S>>,
}

impl<S: Scalar> MetricTable<S> {
    /// Validates symmetry, the zero diagonal, positivity off the diagonal and
    /// the triangle inequality.
    pub fn new(names: Vec<String>, d: Vec<Vec<S>>) -> Result<Self, TreeError> {
        let n = names.len();
        let bad = |m: String| Err(TreeError::MalformedTable(m));
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return bad(format!("expected a {n}x{n} matrix"));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(TreeError::DuplicateName(name.clone()));
            }
        }
        for i in 0..n {
            if !d[i][i].approx_zero() {
                return bad(format!("d({0}, {0}) is not zero", names[i]));
            }
            for j in 0..n {
                if !d[i][j].approx_eq(&d[j][i]) {
                    return bad(format!("d({}, {}) is not symmetric", names[i], names[j]));
                }
                if i != j && !d[i][j].is_positive() {
                    return bad(format!("d({}, {}) must be positive", names[i], names[j]));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if (d[i][j].clone() + d[j][k].clone()).definitely_lt(&d[i][k]) {
                        return bad(format!("triangle inequality fails for ({}, {}, {})", names[i], names[j], names[k]));
                    }
                }
            }
        }
        Ok(MetricTable { names, index, d })
    }

    pub(crate) fn from_parts_unchecked(names: Vec<String>, d: Vec<Vec<S>>) -> Self {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        MetricTable { names, index, d }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, TreeError> {
        self.index.get(name).copied().ok_or_else(|| TreeError::UnknownPoint(name.to_string()))
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.d[i][j]
    }

    pub fn distance(&self, x: &str, y: &str) -> Result<S, TreeError> {
        Ok(self.d[self.index_of(x)?][self.index_of(y)?].clone())
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.d
    }

    pub fn gromov_product_idx(&self, x: usize, z: usize, w: usize) -> S {
        (self.d[w][x].clone() + self.d[w][z].clone() - self.d[x][z].clone()).half()
    }

    /// `(x, z)_w = ½ (d(w, x) + d(w, z) − d(x, z))`.
    pub fn gromov_product(&self, x: &str, z: &str, w: &str) -> Result<S, TreeError> {
        Ok(self.gromov_product_idx(self.index_of(x)?, self.index_of(z)?, self.index_of(w)?))
    }

    /// Restriction to a subset of points, in the given order.
    pub fn restrict(&self, names: &[&str]) -> Result<MetricTable<S>, TreeError> {
        let idx = names.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        let d = idx.iter().map(|&i| idx.iter().map(|&j| self.d[i][j].clone()).collect()).collect();
        MetricTable::new(names.iter().map(|s| s.to_string()).collect(), d)
    }

    /// Maximal four-point defect: the least δ for which the table is δ-hyperbolic.
    pub fn hyperbolicity_constant(&self) -> S {
        let n = self.len();
        let mut worst = S::zero();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let lhs = self.gromov_product_idx(x, z, w);
                        let m = S::min_of(self.gromov_product_idx(x, y, w), self.gromov_product_idx(y, z, w));
                        worst = S::max_of(worst, m - lhs);
                    }
                }
            }
        }
        worst
    }
}

/// A quadruple violating `(x, z)_w >= min((x, y)_w, (y, z)_w) − δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub x: String,
    pub y: String,
    pub z: String,
    pub w: String,
    /// `min((x, y)_w, (y, z)_w) − δ − (x, z)_w`, strictly positive.
    pub margin: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicityVerdict<S> {
    pub passes: bool,
    pub delta: S,
    pub witness: Option<Witness<S>>,
}

/// Exhaustive δ-hyperbolicity check over all ordered quadruples.
///
/// Quadruples are scanned in lexicographic order of point names
/// (`x`, then `y`, `z`, `w`); the first violation is reported.
pub fn check_hyperbolic<S: Scalar>(space: &MetricTable<S>, delta: &S) -> HyperbolicityVerdict<S> {
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| space.names[a].cmp(&space.names[b]));

    let mut values: Vec<S> = space.d.iter().flatten().cloned().collect();
    values.push(delta.clone());
    let hit = match S::scaled_integers(&values) {
        Some((ints, scale)) => {
            let two_delta = 2 * ints[n * n] as i128;
            let dd = |i: usize, j: usize| ints[i * n + j] as i128;
            first_violation(&order, |x, y, z, w| {
                // doubled Gromov products on the integer grid
                let xz = dd(w, x) + dd(w, z) - dd(x, z);
                let xy = dd(w, x) + dd(w, y) - dd(x, y);
                let yz = dd(w, y) + dd(w, z) - dd(y, z);
                let excess = xy.min(yz) - two_delta - xz;
                (excess > 0).then(|| S::from_i128(excess) / (scale.clone() * S::from_i128(2)))
            })
        }
        None => first_violation(&order, |x, y, z, w| {
            let lhs = space.gromov_product_idx(x, z, w);
            let rhs = S::min_of(space.gromov_product_idx(x, y, w), space.gromov_product_idx(y, z, w)) - delta.clone();
            lhs.definitely_lt(&rhs).then(|| rhs - lhs)
        }),
    };
    let witness = hit.map(|([x, y, z, w], margin)| Witness {
        x: space.names[x].clone(),
        y: space.names[y].clone(),
        z: space.names[z].clone(),
        w: space.names[w].clone(),
        margin,
    });
    HyperbolicityVerdict { passes: witness.is_none(), delta: delta.clone(), witness }
}

fn first_violation<S>(order: &[usize], mut violation: impl FnMut(usize, usize, usize, usize) -> Option<S>) -> Option<([usize; 4], S)> {
    for &x in order {
        for &y in order {
            for &z in order {
                for &w in order {
                    if let Some(m) = violation(x, y, z, w) {
                        return Some(([x, y, z, w], m));
                    }
                }
            }
        }
    }
    None
}
