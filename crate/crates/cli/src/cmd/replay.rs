//! Re-derives a reported witness from the inputs alone. Exit status 1 means
//! the violation was reproduced, 0 that it was not.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use obstree_core::blend::{blend_metric, LengthFunction};
use obstree_core::boundary::ReducedWord;
use obstree_core::{MetricTable, MetricTree, Quadratic, Rational, Scalar};

use super::blend::PairOfFunctions;
use super::observers::{dispatch, replay_converge, SeqArgs};
use super::qmap::{replay_lamination, Common, SmallArgs};
use super::tree::seeded_trees;
use crate::input::{blend_error, load_pair, load_table, load_tree, number, params, tree_error, word, CliError, Space};
use crate::input::{line_point, pod_point, tree_point};
use crate::report::{Report, Status};

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct TableSource {
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Pair file; the blend at `--lambda` is checked.
    #[arg(long, requires = "lambda")]
    pub pair: Option<PathBuf>,
    /// Index of a tree from `certify --random` (with `--seed`).
    #[arg(long)]
    pub random_index: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BlendedPair {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub lambda: String,
}

#[derive(Subcommand, Debug)]
pub enum ReplayCmd {
    /// Recomputes the Gromov products of a four-point witness.
    FourPoint {
        #[command(flatten)]
        source: TableSource,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_points: usize,
        #[arg(long, default_value = "0")]
        delta: String,
        /// The witness `x y z w`.
        #[arg(num_args = 4, required = true)]
        points: Vec<String>,
    },
    /// Rechecks that a probe holds the target but misses a tail term.
    Converge {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 16)]
        probes: usize,
        /// Index of the probe direction.
        #[arg(long)]
        probe: usize,
        /// 1-based index of the term.
        #[arg(long)]
        term: usize,
    },
    /// Re-evaluates one length-function condition on a combination.
    Axiom {
        #[command(flatten)]
        fns: PairOfFunctions,
        #[arg(long)]
        lambda: String,
        /// non-negative, inverse, conjugacy, products or hyperbolic.
        #[arg(long)]
        axiom: String,
        /// The word `u` and, for pair conditions, `v`.
        #[arg(num_args = 1..=2, required = true)]
        words: Vec<String>,
    },
    /// Regenerates a dual lamination sample and reruns its audit.
    Lamination {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        small: SmallArgs,
    },
    /// Compares the center of a triple before and after blending.
    CenterShift {
        #[command(flatten)]
        pair: BlendedPair,
        #[arg(num_args = 3, required = true)]
        points: Vec<String>,
    },
    /// Compares the largest Gromov product of a quadruple before and after blending.
    Dichotomy {
        #[command(flatten)]
        pair: BlendedPair,
        /// `x y z w`, with `w` the base of the products.
        #[arg(num_args = 4, required = true)]
        points: Vec<String>,
    },
}

fn four_point(
    source: &TableSource,
    lambda: Option<&str>,
    max_points: usize,
    delta: &str,
    pts: &[String],
    seed: u64,
) -> Result<Report, CliError> {
    let table: MetricTable<Rational> = match (&source.tree, &source.table, &source.pair, source.random_index) {
        (Some(p), ..) => load_tree(p)?.metric_table(),
        (_, Some(p), ..) => load_table(p)?,
        (_, _, Some(p), _) => {
            let lam = number("lambda", lambda.expect("clap requires --lambda"))?;
            blend_metric(&load_pair(p)?, &lam).map_err(blend_error)?.metric_table()
        }
        (.., Some(i)) => seeded_trees(seed, i + 1, max_points).last().expect("at least one tree").metric_table(),
        _ => unreachable!("clap enforces one source"),
    };
    let delta: Rational = number("delta", delta)?;
    let idx = pts.iter().map(|n| table.index_of(n).map_err(tree_error)).collect::<Result<Vec<_>, _>>()?;
    let (x, y, z, w) = (idx[0], idx[1], idx[2], idx[3]);
    let xy = table.gromov_product_idx(x, y, w);
    let yz = table.gromov_product_idx(y, z, w);
    let xz = table.gromov_product_idx(x, z, w);
    let margin = Rational::min_of(xy.clone(), yz.clone()) - delta - xz.clone();
    let reproduced = margin.is_positive();
    let mut r = Report::new(if reproduced { Status::Violation } else { Status::Pass });
    r.field("(x,y)_w", xy).field("(y,z)_w", yz).field("(x,z)_w", xz).field("margin", margin).field("reproduced", reproduced);
    Ok(r)
}

fn blended(p: &BlendedPair) -> Result<(MetricTree<Rational>, MetricTree<Rational>), CliError> {
    let pair = load_pair(&p.pair)?;
    let lam: Rational = number("lambda", &p.lambda)?;
    let t = blend_metric(&pair, &lam).map_err(blend_error)?;
    Ok((pair.tree0().clone(), t))
}

fn center_shift(p: &BlendedPair, pts: &[String]) -> Result<Report, CliError> {
    let (a, b) = blended(p)?;
    let center = |t: &MetricTree<Rational>| -> Result<_, CliError> {
        let l = pts.iter().map(|n| t.locate(n).map_err(tree_error)).collect::<Result<Vec<_>, _>>()?;
        Ok(t.center(&l[0], &l[1], &l[2]))
    };
    let (ca, cb) = (center(&a)?, center(&b)?);
    let reproduced = a.shape_coordinates(&ca) != b.shape_coordinates(&cb);
    let mut r = Report::new(if reproduced { Status::Violation } else { Status::Pass });
    r.field("center_d0", a.describe(&ca)).field("center_blend", b.describe(&cb)).field("reproduced", reproduced);
    Ok(r)
}

/// Position (0: `(y,z)_w`, 1: `(x,z)_w`, 2: `(x,y)_w`) of the strictly
/// largest product, if any.
fn largest(g: &[Rational; 3]) -> Option<usize> {
    let top = (0..3).max_by(|&i, &j| g[i].cmp(&g[j]))?;
    (0..3).all(|i| i == top || g[i] < g[top]).then_some(top)
}

fn dichotomy(p: &BlendedPair, pts: &[String]) -> Result<Report, CliError> {
    let (a, b) = blended(p)?;
    let products = |t: &MetricTree<Rational>| -> Result<[Rational; 3], CliError> {
        let l = pts.iter().map(|n| t.locate(n).map_err(tree_error)).collect::<Result<Vec<_>, _>>()?;
        let (x, y, z, w) = (&l[0], &l[1], &l[2], &l[3]);
        Ok([t.gromov_product(y, z, w), t.gromov_product(x, z, w), t.gromov_product(x, y, w)])
    };
    let (ga, gb) = (products(&a)?, products(&b)?);
    let label = |g: &[Rational; 3]| {
        let names = ["(y,z)_w", "(x,z)_w", "(x,y)_w"];
        let vals: Vec<String> = g.iter().map(|v| v.to_string()).collect();
        format!("{} largest: {}", vals.join(" "), largest(g).map_or("none", |i| names[i]))
    };
    let reproduced = largest(&ga) != largest(&gb);
    let mut r = Report::new(if reproduced { Status::Violation } else { Status::Pass });
    r.field("products_d0", label(&ga)).field("products_blend", label(&gb)).field("reproduced", reproduced);
    Ok(r)
}

fn axiom<S: Scalar>(fns: &PairOfFunctions, lambda: &str, name: &str, words: &[String]) -> Result<Report, CliError> {
    let lam: S = number("lambda", lambda)?;
    let (l0, l1) = fns.load::<S>()?;
    let lf = LengthFunction::combination(&l0, &l1, &lam);
    let u = word(&words[0])?;
    let v = words.get(1).map(|s| word(s)).transpose()?;
    let ev = |w: &ReducedWord| lf.eval(w);
    let mut r = Report::new(Status::Pass);
    let mut vals: Vec<(String, Option<S>)> = vec![(format!("l({u})"), ev(&u))];
    let same = |a: &S, b: &S| a.approx_eq(b);
    let violated = match (name, &v) {
        ("non-negative", _) => vals[0].1.as_ref().map(|x| x.definitely_lt(&S::zero())),
        ("inverse", _) => {
            vals.push((format!("l({})", u.inverse()), ev(&u.inverse())));
            match (&vals[0].1, &vals[1].1) {
                (Some(a), Some(b)) => Some(!same(a, b)),
                _ => None,
            }
        }
        ("conjugacy" | "products" | "hyperbolic", Some(v)) => {
            let (uv, uvi, conj) = (u.mul(v), u.mul(&v.inverse()), u.mul(v).mul(&u.inverse()));
            vals.push((format!("l({v})"), ev(v)));
            vals.push((format!("l({uv})"), ev(&uv)));
            vals.push((format!("l({uvi})"), ev(&uvi)));
            vals.push((format!("l({conj})"), ev(&conj)));
            let get = |i: usize| vals[i].1.clone();
            match (get(0), get(1), get(2), get(3), get(4)) {
                (Some(lu), Some(lv), Some(p), Some(m), lc) => {
                    let sum = lu.clone() + lv.clone();
                    let top = S::max_of(p.clone(), m.clone());
                    match name {
                        "conjugacy" => lc.map(|c| !same(&c, &lv)),
                        "products" => Some(!same(&p, &m) && sum.definitely_lt(&top)),
                        _ => Some(lu.is_positive() && lv.is_positive() && !(same(&p, &m) && sum.definitely_lt(&p)) && !same(&top, &sum)),
                    }
                }
                _ => None,
            }
        }
        ("conjugacy" | "products" | "hyperbolic", None) => return Err(params(format!("--axiom {name} needs two words"))),
        _ => return Err(params(format!("unknown axiom `{name}`"))),
    };
    for (k, x) in &vals {
        r.field(k, x.as_ref().map_or("undefined".to_string(), |x| x.to_string()));
    }
    match violated {
        Some(true) => {
            r.status = Status::Violation;
            r.field("reproduced", true);
        }
        Some(false) => {
            r.field("reproduced", false);
        }
        None => {
            r.status = Status::Inconclusive;
            r.field("reproduced", "undefined values");
        }
    }
    Ok(r)
}

pub fn run(cmd: &ReplayCmd, seed: u64) -> Result<Report, CliError> {
    match cmd {
        ReplayCmd::FourPoint { source, lambda, max_points, delta, points } => {
            four_point(source, lambda.as_deref(), *max_points, delta, points, seed)
        }
        ReplayCmd::Converge { seq, target, probes, probe, term } => {
            let space = seq.space.load()?;
            dispatch!(space, |o, parse| replay_converge(o, &parse, seq, target, *probes, *probe, *term))
        }
        ReplayCmd::Axiom { fns, lambda, axiom: name, words } => {
            if !["non-negative", "inverse", "conjugacy", "products", "hyperbolic"].contains(&name.as_str()) {
                return Err(params(format!("unknown axiom `{name}`")));
            }
            fns.check_field(std::slice::from_ref(lambda))?;
            if fns.float {
                axiom::<f64>(fns, lambda, name, words)
            } else {
                axiom::<Quadratic>(fns, lambda, name, words)
            }
        }
        ReplayCmd::Lamination { common, small } => replay_lamination(common, small),
        ReplayCmd::CenterShift { pair, points } => center_shift(pair, points),
        ReplayCmd::Dichotomy { pair, points } => dichotomy(pair, points),
    }
}
