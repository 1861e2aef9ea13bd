use std::path::PathBuf;

use clap::Args;
use obstree_core::blend::certify_rtree;
use obstree_core::gen::random_tree;
use obstree_core::{check_hyperbolic, MetricTable, MetricTree, Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{load_table, load_tree, number, params, tree_error, CliError};
use crate::report::{Report, Status};

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct MetricSource {
    /// Tree file; the designated points are checked.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Metric table file (`point <name>` and `d <x> <y> <value>` records).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Check this many seeded random trees instead of a file.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: MetricSource,
    /// Hyperbolicity constant to test against.
    #[arg(long, default_value = "0")]
    pub delta: String,
    /// Largest number of points in a random tree.
    #[arg(long, default_value_t = 12)]
    pub max_points: usize,
}

/// The trees `--random N --seed s` checks, in order.
pub fn seeded_trees(seed: u64, count: usize, max_points: usize) -> impl Iterator<Item = MetricTree<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| random_tree(&mut rng, max_points))
}

fn source_flags(s: &MetricSource) -> String {
    match (&s.tree, &s.table) {
        (Some(p), _) => format!("--tree {}", p.display()),
        (_, Some(p)) => format!("--table {}", p.display()),
        _ => String::new(),
    }
}

fn certify_table(table: &MetricTable<Rational>, delta: &Rational, replay_source: &str, r: &mut Report) {
    r.field("points", table.len()).field("delta", delta).field("hyperbolicity", table.hyperbolicity_constant());
    let verdict = if *delta == Rational::zero() {
        let c = certify_rtree(table);
        r.field("realized", c.realized.map_or("not attempted".to_string(), |b| b.to_string()));
        if c.verdict.passes && c.realized != Some(true) {
            r.status = Status::Violation;
        }
        c.verdict
    } else {
        check_hyperbolic(table, delta)
    };
    if let Some(w) = verdict.witness {
        r.status = Status::Violation;
        r.field("witness", format!("{} {} {} {}", w.x, w.y, w.z, w.w))
            .field("margin", &w.margin)
            .field("replay", format!("obstree replay four-point {replay_source} --delta {delta} {} {} {} {}", w.x, w.y, w.z, w.w));
    }
}

pub fn certify(a: &CertifyArgs, seed: u64) -> Result<Report, CliError> {
    let delta: Rational = number("delta", &a.delta)?;
    if delta < Rational::zero() {
        return Err(params("--delta must be nonnegative"));
    }
    let mut r = Report::new(Status::Pass);
    if let Some(n) = a.source.random {
        if a.max_points < 2 {
            return Err(params("--max-points must be at least 2"));
        }
        r.field("trees", n).field("seed", seed).field("max_points", a.max_points).columns(&["index", "points", "passes"]);
        let mut failures = 0;
        for (i, t) in seeded_trees(seed, n, a.max_points).enumerate() {
            let v = check_hyperbolic(&t.metric_table(), &delta);
            r.row(vec![i.to_string(), t.points().len().to_string(), v.passes.to_string()]);
            if let Some(w) = v.witness {
                failures += 1;
                if failures == 1 {
                    r.field("witness", format!("tree {i}: {} {} {} {}", w.x, w.y, w.z, w.w)).field(
                        "replay",
                        format!(
                            "obstree replay four-point --random-index {i} --seed {seed} --max-points {} --delta {delta} {} {} {} {}",
                            a.max_points, w.x, w.y, w.z, w.w
                        ),
                    );
                }
            }
        }
        r.field("failures", failures);
        if failures > 0 {
            r.status = Status::Violation;
        }
        return Ok(r);
    }
    let table = match (&a.source.tree, &a.source.table) {
        (Some(p), _) => load_tree(p)?.metric_table(),
        (_, Some(p)) => load_table(p)?,
        _ => unreachable!("clap enforces one source"),
    };
    certify_table(&table, &delta, &source_flags(&a.source), &mut r);
    Ok(r)
}

#[derive(Args, Debug)]
pub struct CenterArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// Three point or vertex names.
    #[arg(num_args = 3, required = true)]
    pub points: Vec<String>,
}

pub fn center(a: &CenterArgs) -> Result<Report, CliError> {
    let t = load_tree(&a.tree)?;
    let locs = a.points.iter().map(|n| t.locate(n).map_err(tree_error)).collect::<Result<Vec<_>, _>>()?;
    let c = t.center(&locs[0], &locs[1], &locs[2]);
    let mut r = Report::new(Status::Pass);
    r.field("center", t.describe(&c)).columns(&["point", "distance"]);
    for (n, l) in a.points.iter().zip(&locs) {
        r.row(vec![n.clone(), t.distance(l, &c).to_string()]);
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct SegmentArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// The two endpoints.
    #[arg(num_args = 2, required = true)]
    pub points: Vec<String>,
    /// Also report whether this point lies on the segment.
    #[arg(long)]
    pub contains: Option<String>,
}

pub fn segment(a: &SegmentArgs) -> Result<Report, CliError> {
    let t = load_tree(&a.tree)?;
    let p = t.locate(&a.points[0]).map_err(tree_error)?;
    let q = t.locate(&a.points[1]).map_err(tree_error)?;
    let s = t.segment(&p, &q);
    let mut r = Report::new(Status::Pass);
    r.field("from", t.describe(&p))
        .field("to", t.describe(&q))
        .field("length", s.length())
        .field("midpoint", t.describe(&t.midpoint(&p, &q)));
    if let Some(n) = &a.contains {
        let x = t.locate(n).map_err(tree_error)?;
        r.field("contains", format!("{n} {}", t.point_on_segment(&x, &p, &q)));
    }
    r.columns(&["edge", "from", "to", "length"]);
    for piece in &s.pieces {
        let e = t.edge(piece.edge);
        r.row(vec![
            format!("{}-{}", t.vertex_name(e.a), t.vertex_name(e.b)),
            piece.from.to_string(),
            piece.to.to_string(),
            piece.length().to_string(),
        ]);
    }
    Ok(r)
}
