use std::path::PathBuf;

use clap::{Args, Subcommand};
use obstree_core::observers::{
    converges_obs, extract_convergent_subsequence, in_direction, liminf_from, metric_convergence, subbasis_from_sample, Direction,
    ObsVerdict, PointSequence, SideChoice, TreeOracle,
};
use obstree_core::{Rational, Scalar};

use crate::input::{line_point, load_sequence, number, params, pod_point, tree_point, CliError, Space, SpaceArgs};
use crate::report::{Report, Status};

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Sequence file, one point per line.
    #[arg(long)]
    pub seq: PathBuf,
    /// Number of terms read.
    #[arg(long, default_value_t = 1000)]
    pub depth: usize,
    /// Basepoint for inferior limits (default: the first sample point).
    #[arg(long)]
    pub basepoint: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ObsCmd {
    /// Inferior limit of the sequence from a basepoint.
    Liminf {
        #[command(flatten)]
        seq: SeqArgs,
        /// Largest certificate accepted as stabilized.
        #[arg(long, default_value = "0")]
        tol: String,
        /// Also list the window endpoints R_1, ..., R_n.
        #[arg(long)]
        endpoints: bool,
    },
    /// Checks convergence to a target against sampled directions.
    Converge {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        target: String,
        /// Number of sample points the probe directions are built from.
        #[arg(long, default_value_t = 16)]
        probes: usize,
    },
    /// Extracts a subsequence that settles on one side of every probe.
    Extract {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 16)]
        probes: usize,
    },
}

pub fn probes<O: TreeOracle>(o: &O, k: usize) -> Result<Vec<Direction<O::Point>>, CliError> {
    subbasis_from_sample(o, (0..).map(|i| o.sample_point(i)), k).map_err(params)
}

fn describe_dir<O: TreeOracle>(o: &O, d: &Direction<O::Point>) -> String {
    format!("dir {} -> {}", o.describe(&d.base), o.describe(&d.representative))
}

/// Everything an observers subcommand needs from one oracle.
pub struct Loaded<'a, O: TreeOracle> {
    pub oracle: &'a O,
    pub terms: Vec<O::Point>,
    pub basepoint: O::Point,
    pub parse: &'a dyn Fn(&str) -> Result<O::Point, String>,
}

fn load<'a, O: TreeOracle>(o: &'a O, a: &SeqArgs, parse: &'a dyn Fn(&str) -> Result<O::Point, String>) -> Result<Loaded<'a, O>, CliError> {
    if a.depth == 0 {
        return Err(params("--depth must be at least 1"));
    }
    let mut terms = load_sequence(&a.seq, parse)?;
    if terms.is_empty() {
        return Err(CliError::Parse(format!("{}: sequence has no terms", a.seq.display())));
    }
    terms.truncate(a.depth);
    let basepoint = match &a.basepoint {
        Some(b) => parse(b).map_err(|e| params(format!("--basepoint: {e}")))?,
        None => o.sample_point(0),
    };
    Ok(Loaded { oracle: o, terms, basepoint, parse })
}

fn liminf<O: TreeOracle<S = Rational>>(l: &Loaded<O>, tol: &Rational, endpoints: bool) -> Result<Report, CliError> {
    let o = l.oracle;
    let seq = PointSequence::from_vec(l.terms.clone());
    let res = liminf_from(o, &l.basepoint, &seq, l.terms.len()).map_err(params)?;
    let stable = res.certificate.within(tol);
    let mut r = Report::new(if stable { Status::Pass } else { Status::Inconclusive });
    r.field("basepoint", o.describe(&l.basepoint))
        .field("terms", res.terms_used)
        .field("liminf", o.describe(&res.point))
        .field("certificate", &res.certificate)
        .field("stabilized_at", res.stabilized_at);
    if endpoints {
        r.columns(&["m", "endpoint"]);
        for (i, p) in res.endpoints.iter().enumerate() {
            r.row(vec![(i + 1).to_string(), o.describe(p)]);
        }
    }
    Ok(r)
}

fn converge<O: TreeOracle<S = Rational>>(l: &Loaded<O>, a: &SeqArgs, target: &str, k: usize, space: &str) -> Result<Report, CliError> {
    let o = l.oracle;
    let t = (l.parse)(target).map_err(|e| params(format!("--target: {e}")))?;
    let dirs = probes(o, k)?;
    let seq = PointSequence::from_vec(l.terms.clone());
    let v = converges_obs(o, &seq, &t, &dirs, l.terms.len()).map_err(params)?;
    let m = metric_convergence(o, &seq, &t, l.terms.len(), &Rational::zero()).map_err(params)?;
    let mut r = Report::new(Status::Pass);
    r.field("target", o.describe(&t)).field("terms", l.terms.len()).field("probes", dirs.len());
    match v {
        ObsVerdict::Consistent { probes_containing_target } => {
            r.field("verdict", "consistent").field("probes_containing_target", probes_containing_target);
            if probes_containing_target == 0 {
                r.status = Status::Inconclusive;
            }
        }
        ObsVerdict::Refuted { probe, term } => {
            r.status = Status::Violation;
            r.field("verdict", "refuted")
                .field("witness", format!("probe {probe} ({}) holds the target but not term {term} ({})", describe_dir(o, &dirs[probe]), o.describe(&l.terms[term - 1])))
                .field(
                    "replay",
                    format!(
                        "obstree replay converge {space} --seq {} --depth {} --target {target:?} --probes {k} --probe {probe} --term {term}",
                        a.seq.display(),
                        a.depth
                    ),
                );
        }
    }
    r.field("metric_tail_distance", &m.tail_distance).field("metric_converges", m.converges);
    Ok(r)
}

fn extract<O: TreeOracle<S = Rational>>(l: &Loaded<O>, k: usize) -> Result<Report, CliError> {
    let o = l.oracle;
    let dirs = probes(o, k)?;
    let seq = PointSequence::from_vec(l.terms.clone());
    let e = extract_convergent_subsequence(o, &seq, &dirs, l.terms.len(), Some(&l.basepoint)).map_err(params)?;
    let mut r = Report::new(if e.exhausted { Status::Inconclusive } else { Status::Pass });
    r.field("kept", e.indices.len())
        .field("exhausted", e.exhausted)
        .field("liminf", o.describe(&e.limit.point))
        .field("certificate", &e.limit.certificate)
        .columns(&["probe", "direction", "side"]);
    for (i, (d, c)) in dirs.iter().zip(&e.choices).enumerate() {
        let side = match c {
            SideChoice::Inside => "inside",
            SideChoice::Outside => "outside",
            SideChoice::Exhausted => "exhausted",
        };
        r.row(vec![i.to_string(), describe_dir(o, d), side.to_string()]);
    }
    let idx: Vec<String> = e.indices.iter().map(|i| i.to_string()).collect();
    r.field("indices", idx.join(","));
    Ok(r)
}

fn run_on<O: TreeOracle<S = Rational>>(o: &O, parse: &dyn Fn(&str) -> Result<O::Point, String>, cmd: &ObsCmd) -> Result<Report, CliError> {
    match cmd {
        ObsCmd::Liminf { seq, tol, endpoints } => {
            let tol: Rational = number("tol", tol)?;
            liminf(&load(o, seq, parse)?, &tol, *endpoints)
        }
        ObsCmd::Converge { seq, target, probes } => converge(&load(o, seq, parse)?, seq, target, *probes, &seq.space.flags()),
        ObsCmd::Extract { seq, probes } => extract(&load(o, seq, parse)?, *probes),
    }
}

/// Membership facts behind a refuted convergence check.
pub fn replay_converge<O: TreeOracle<S = Rational>>(
    o: &O,
    parse: &dyn Fn(&str) -> Result<O::Point, String>,
    a: &SeqArgs,
    target: &str,
    k: usize,
    probe: usize,
    term: usize,
) -> Result<Report, CliError> {
    let l = load(o, a, parse)?;
    let t = parse(target).map_err(|e| params(format!("--target: {e}")))?;
    let dirs = probes(o, k)?;
    let d = dirs.get(probe).ok_or_else(|| params(format!("--probe {probe}: only {} probes", dirs.len())))?;
    let p = l.terms.get(term.wrapping_sub(1)).ok_or_else(|| params(format!("--term {term}: sequence has {} terms", l.terms.len())))?;
    let in_window = term >= obstree_core::observers::tail_start(l.terms.len());
    let target_in = in_direction(o, d, &t).unwrap_or(false);
    let term_in = in_direction(o, d, p).unwrap_or(false);
    let reproduced = in_window && target_in && !term_in;
    let mut r = Report::new(if reproduced { Status::Violation } else { Status::Pass });
    r.field("probe", describe_dir(o, d))
        .field("target_inside", target_in)
        .field("term", format!("{term} ({})", o.describe(p)))
        .field("term_inside", term_in)
        .field("term_in_tail_window", in_window)
        .field("reproduced", reproduced);
    Ok(r)
}

/// Runs `f` with the selected oracle and its point parser.
macro_rules! dispatch {
    ($space:expr, |$o:ident, $parse:ident| $body:expr) => {
        match $space {
            Space::Tree(t) => {
                let $o = &*t;
                let $parse = |s: &str| tree_point(&t, s);
                $body
            }
            Space::Multipod(m) => {
                let $o = &m;
                let $parse = |s: &str| pod_point(&m, s);
                $body
            }
            Space::Line(l) => {
                let $o = &l;
                let $parse = |s: &str| line_point(s);
                $body
            }
        }
    };
}
pub(crate) use dispatch;

pub fn run(cmd: &ObsCmd) -> Result<Report, CliError> {
    let seq = match cmd {
        ObsCmd::Liminf { seq, .. } | ObsCmd::Converge { seq, .. } | ObsCmd::Extract { seq, .. } => seq,
    };
    let space = seq.space.load()?;
    dispatch!(space, |o, parse| run_on(o, &parse, cmd))
}
