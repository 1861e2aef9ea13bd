//! Seeded random fixtures: trees, tables, compatible pairs and metrics on a
//! 4-cycle.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blend::CompatibleMetricPair;
use crate::num::Rational;
use crate::tree::{Location, MetricTable, MetricTree, TreeBuilder};

/// A positive rational `n/d` with `1 <= n <= 12`, `1 <= d <= 4`.
pub fn random_length<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=4).into())
}

/// A random tree with `2..=max_points` designated points: every leaf is
/// designated, and the remaining points sit on random vertices or inside
/// random edges. Vertices are named `v0, v1, ...`, points `p0, p1, ...`.
pub fn random_tree<R: Rng>(rng: &mut R, max_points: usize) -> MetricTree<Rational> {
    assert!(max_points >= 2, "a tree needs two points");
    let target = rng.gen_range(2..=max_points);
    let vertices = rng.gen_range(2..=target.max(2));
    let mut b = TreeBuilder::new();
    let mut degree = vec![0usize; vertices];
    let mut edges = Vec::new();
    for v in 1..vertices {
        let parent = rng.gen_range(0..v);
        degree[v] += 1;
        degree[parent] += 1;
        edges.push((parent, v));
        b.edge(&format!("v{parent}"), &format!("v{v}"), random_length(rng));
    }
    let mut count = 0;
    let mut used = vec![false; vertices];
    for v in 0..vertices {
        if degree[v] == 1 {
            b.point_at(&format!("p{count}"), &format!("v{v}"));
            used[v] = true;
            count += 1;
        }
    }
    let tree = b.build().expect("random shapes are trees");
    let mut interior: Vec<(usize, Rational)> = Vec::new();
    while count < target {
        if rng.gen_bool(0.5) {
            if let Some(v) = (0..vertices).filter(|&v| !used[v]).collect::<Vec<_>>().choose(rng).copied() {
                b.point_at(&format!("p{count}"), &format!("v{v}"));
                used[v] = true;
                count += 1;
                continue;
            }
        }
        let e = rng.gen_range(0..edges.len());
        let len = tree.edges()[e].length.clone();
        let off = len * Rational::new(rng.gen_range(1..16).into(), 16.into());
        if interior.iter().any(|(f, o)| *f == e && *o == off) {
            continue;
        }
        let (a, c) = edges[e];
        b.point(&format!("p{count}"), &format!("v{a}"), &format!("v{c}"), off.clone());
        interior.push((e, off));
        count += 1;
    }
    b.build().expect("random shapes are trees")
}

/// Distances between the designated points of a random tree, with the
/// points listed in random order.
pub fn random_table<R: Rng>(rng: &mut R, max_points: usize) -> MetricTable<Rational> {
    let t = random_tree(rng, max_points);
    let mut names: Vec<String> = t.point_names().iter().map(|s| s.to_string()).collect();
    names.shuffle(rng);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    t.metric_table().restrict(&refs).expect("names come from the table")
}

/// The path metric of a 4-cycle with sides in `[1, 3/2]`, plus up to
/// `extra` pendant points hung off cycle vertices. Never a tree metric: the
/// diagonal sum exceeds both side sums by at least 1.
pub fn cycle4_metric<R: Rng>(rng: &mut R, extra: usize) -> MetricTable<Rational> {
    let side = |rng: &mut R| Rational::new((8 + rng.gen_range(0..=4)).into(), 8.into());
    let s: Vec<Rational> = (0..4).map(|_| side(rng)).collect();
    let cyc = |i: usize, j: usize| -> Rational {
        if i == j {
            return Rational::from_integer(0.into());
        }
        let fwd: Rational = (0..4).filter(|k| (k + 4 - i) % 4 < (j + 4 - i) % 4).map(|k| s[k].clone()).sum();
        let total: Rational = s.iter().cloned().sum();
        let back = total - fwd.clone();
        if fwd < back {
            fwd
        } else {
            back
        }
    };
    let pendants: Vec<(usize, Rational)> = (0..rng.gen_range(0..=extra)).map(|_| (rng.gen_range(0..4), random_length(rng))).collect();
    let n = 4 + pendants.len();
    let anchor = |i: usize| if i < 4 { (i, Rational::from_integer(0.into())) } else { pendants[i - 4].clone() };
    let d: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Rational::from_integer(0.into());
                    }
                    let ((a, x), (b, y)) = (anchor(i), anchor(j));
                    x + y + cyc(a, b)
                })
                .collect()
        })
        .collect();
    let mut names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    names.shuffle(rng);
    MetricTable::new(names, d).expect("path metrics are valid tables")
}

/// A random tree with a second random length assignment.
pub fn random_pair<R: Rng>(rng: &mut R, max_points: usize) -> CompatibleMetricPair<Rational> {
    let t = random_tree(rng, max_points);
    let d1 = t.edges().iter().map(|_| random_length(rng)).collect();
    CompatibleMetricPair::new(t, d1).expect("one shape with two positive metrics is compatible")
}

/// `head` random designated points followed by one designated point
/// repeated `tail` times.
pub fn random_eventually_constant<R: Rng>(rng: &mut R, tree: &MetricTree<Rational>, head: usize, tail: usize) -> Vec<Location<Rational>> {
    let pts: Vec<Location<Rational>> = tree.points().iter().map(|p| p.location.clone()).collect();
    let last = pts.choose(rng).expect("tree has points").clone();
    (0..head).map(|_| pts.choose(rng).expect("tree has points").clone()).chain(std::iter::repeat_n(last, tail)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::check_hyperbolic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_have_the_advertised_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_tree(&mut rng, 12);
            let n = t.points().len();
            assert!((2..=12).contains(&n));
            assert!(check_hyperbolic(&t.metric_table(), &Rational::from_integer(0.into())).passes);
            let c = cycle4_metric(&mut rng, 3);
            assert!(!check_hyperbolic(&c, &Rational::from_integer(0.into())).passes);
            let p = random_pair(&mut rng, 8);
            assert_eq!(p.d0().len(), p.d1().len());
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_table(&mut ChaCha8Rng::seed_from_u64(3), 10);
        let b = random_table(&mut ChaCha8Rng::seed_from_u64(3), 10);
        assert_eq!(a, b);
    }
}
