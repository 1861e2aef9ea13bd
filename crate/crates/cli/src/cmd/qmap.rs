use clap::{Args, Subcommand};
use obstree_core::observers::{LinePoint, TreeOracle};
use obstree_core::qmap::{
    default_tol, dual_lamination_sample, q_fiber_check, qmap_estimate, DualLamination, FiberVerdict, IsometricAction, LineAction,
    DEFAULT_DEPTH,
};
use obstree_core::{Quadratic, Scalar};

use crate::input::{boundary_point, check_one_field, number, params, qmap_error, ActionArgs, CliError};
use crate::report::{Report, Status};

#[derive(Args, Debug)]
pub struct Common {
    #[command(flatten)]
    pub action: ActionArgs,
    /// Number of prefixes of the boundary point used.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Certificate below which an estimate counts as stabilized (default 1e-6).
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Args, Debug)]
pub struct SmallArgs {
    /// Upper bound (strict) on translation length.
    #[arg(long)]
    pub epsilon: String,
    /// Longest word searched.
    #[arg(long, default_value_t = 12)]
    pub maxlen: usize,
}

#[derive(Subcommand, Debug)]
pub enum QmapCmd {
    /// Estimates Q(X) as an inferior limit of the orbit of the basepoint.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Boundary point `prefix;period`, e.g. `;ab` for (ab)^∞.
        #[arg(long)]
        point: String,
        /// Basepoint of the orbit (default: the action's basepoint).
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Decides whether Q(X) = Q(Y) at the given depth.
    Fibers {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Pairs (w^∞, w⁻¹^∞) for short words of small translation length,
    /// saturated and audited.
    Lamination {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        small: SmallArgs,
    },
    /// Conjugacy classes of short words with small translation length.
    Smallwords {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        small: SmallArgs,
    },
}

impl QmapCmd {
    fn action(&self) -> &ActionArgs {
        match self {
            QmapCmd::Estimate { common, .. } | QmapCmd::Fibers { common, .. } | QmapCmd::Lamination { common, .. } => &common.action,
            QmapCmd::Smallwords { action, .. } => action,
        }
    }
}

fn tol<S: Scalar>(c: &Common) -> Result<S, CliError> {
    let t = match &c.tol {
        Some(s) => number("tol", s)?,
        None => default_tol(),
    };
    if t < S::zero() {
        return Err(params("--tol must be nonnegative"));
    }
    Ok(t)
}

fn depth(c: &Common) -> Result<usize, CliError> {
    if c.depth == 0 {
        return Err(params("--depth must be at least 1"));
    }
    Ok(c.depth)
}

fn describe<S: Scalar>(act: &LineAction<S>, p: &LinePoint<S>) -> String {
    act.oracle().describe(p)
}

fn verdict_label(v: FiberVerdict) -> &'static str {
    match v {
        FiberVerdict::Same => "same",
        FiberVerdict::Different => "different",
        FiberVerdict::Inconclusive => "inconclusive",
    }
}

fn parse_basepoint<S: Scalar>(s: &str) -> Result<LinePoint<S>, CliError> {
    match s.trim() {
        "+inf" | "inf" | "-inf" => Err(params("--basepoint must be a finite point")),
        t => Ok(LinePoint::At(number("basepoint", t)?)),
    }
}

fn estimate<S: Scalar>(act: &LineAction<S>, c: &Common, point: &str, basepoint: Option<&str>) -> Result<Report, CliError> {
    let x = boundary_point(point)?;
    let p = match basepoint {
        Some(b) => parse_basepoint(b)?,
        None => act.basepoint(),
    };
    let tol = tol::<S>(c)?;
    let e = qmap_estimate(act, &x, &p, depth(c)?).map_err(qmap_error)?;
    let mut r = Report::new(if e.is_stabilized(&tol) { Status::Pass } else { Status::Inconclusive });
    r.field("point", &x)
        .field("basepoint", describe(act, &p))
        .field("depth", e.depth)
        .field("estimate", describe(act, &e.point))
        .field("escaped", e.escaped)
        .field("certificate", &e.certificate)
        .field("stabilized_at", e.stabilized_at);
    Ok(r)
}

fn fibers<S: Scalar>(act: &LineAction<S>, c: &Common, x: &str, y: &str) -> Result<Report, CliError> {
    let (bx, by) = (boundary_point(x)?, boundary_point(y)?);
    let f = q_fiber_check(act, &bx, &by, depth(c)?, &tol::<S>(c)?).map_err(qmap_error)?;
    let mut r = Report::new(if f.verdict == FiberVerdict::Inconclusive { Status::Inconclusive } else { Status::Pass });
    r.field("x", &bx).field("y", &by).field("verdict", verdict_label(f.verdict)).field("residual", &f.residual);
    Ok(r)
}

fn small_params<S: Scalar>(s: &SmallArgs) -> Result<S, CliError> {
    let eps: S = number("epsilon", &s.epsilon)?;
    if !eps.is_positive() {
        return Err(params("--epsilon must be positive"));
    }
    if s.maxlen == 0 {
        return Err(params("--maxlen must be at least 1"));
    }
    Ok(eps)
}

pub fn lamination_sample<S: Scalar>(act: &LineAction<S>, c: &Common, s: &SmallArgs) -> Result<DualLamination<S>, CliError> {
    let eps = small_params::<S>(s)?;
    dual_lamination_sample(act, &eps, s.maxlen, depth(c)?, &tol::<S>(c)?).map_err(qmap_error)
}

fn lamination<S: Scalar>(act: &LineAction<S>, c: &Common, s: &SmallArgs) -> Result<Report, CliError> {
    let lam = lamination_sample(act, c, s)?;
    let words: Vec<String> = lam.words.iter().map(|w| w.word.to_string()).collect();
    let mut r = Report::new(if lam.audit.passes() { Status::Pass } else { Status::Violation });
    r.field("words", if words.is_empty() { "(none)".to_string() } else { words.join(",") })
        .field("pairs", lam.sample.len())
        .field("depth", lam.depth)
        .field("flip_closed", lam.audit.flip_closed)
        .field("action_closed", lam.audit.action_closed);
    if let Some((pair, w)) = &lam.audit.missing {
        r.field("witness", format!("{pair} missing its {}", w.as_ref().map_or("flip".to_string(), |w| format!("image under {w}")))).field(
            "replay",
            format!(
                "obstree replay lamination {} --epsilon {} --maxlen {} --depth {}{}",
                c.action.flags(),
                s.epsilon,
                s.maxlen,
                c.depth,
                c.tol.as_ref().map_or(String::new(), |t| format!(" --tol {t}"))
            ),
        );
    }
    r.columns(&["pair", "layer", "fiber", "residual"]);
    for (e, f) in lam.sample.entries.iter().zip(&lam.fibers) {
        r.row(vec![e.pair.to_string(), e.layer.to_string(), verdict_label(f.verdict).to_string(), f.residual.to_string()]);
    }
    Ok(r)
}

fn smallwords<S: Scalar>(act: &LineAction<S>, s: &SmallArgs) -> Result<Report, CliError> {
    let eps = small_params::<S>(s)?;
    let recs = act.small_words(&eps, s.maxlen);
    let mut r = Report::new(Status::Pass);
    r.field("epsilon", &s.epsilon).field("maxlen", s.maxlen).field("classes", recs.len());
    if let Some(m) = recs.iter().find(|c| c.translation_length.is_positive()) {
        r.field("min_nonzero", format!("{} ({})", m.translation_length, m.word));
    } else {
        r.field("min_nonzero", "none below epsilon");
    }
    r.columns(&["word", "length", "translation_length", "approx"]);
    for c in &recs {
        r.row(vec![
            c.word.to_string(),
            c.word.len().to_string(),
            c.translation_length.to_string(),
            format!("{:.12}", c.translation_length.to_f64()),
        ]);
    }
    Ok(r)
}

fn run_with<S: Scalar>(cmd: &QmapCmd) -> Result<Report, CliError> {
    let act: LineAction<S> = cmd.action().load()?;
    let mut r = match cmd {
        QmapCmd::Estimate { common, point, basepoint } => estimate(&act, common, point, basepoint.as_deref()),
        QmapCmd::Fibers { common, x, y } => fibers(&act, common, x, y),
        QmapCmd::Lamination { common, small } => lamination(&act, common, small),
        QmapCmd::Smallwords { small, .. } => smallwords(&act, small),
    }?;
    let w: Vec<String> = act.weights().iter().map(|w| w.to_string()).collect();
    r.field("weights", w.join(","));
    Ok(r)
}

/// Picks exact quadratic arithmetic unless `--float` is given.
pub fn run(cmd: &QmapCmd) -> Result<Report, CliError> {
    let a = cmd.action();
    let mut lits = a.literals()?;
    match cmd {
        QmapCmd::Estimate { common, .. } | QmapCmd::Fibers { common, .. } | QmapCmd::Lamination { common, .. } => {
            lits.extend(common.tol.clone());
        }
        QmapCmd::Smallwords { .. } => {}
    }
    match cmd {
        QmapCmd::Lamination { small, .. } | QmapCmd::Smallwords { small, .. } => lits.push(small.epsilon.clone()),
        QmapCmd::Estimate { basepoint, .. } => lits.extend(basepoint.clone()),
        QmapCmd::Fibers { .. } => {}
    }
    check_one_field(&lits, a.float)?;
    if a.float {
        run_with::<f64>(cmd)
    } else {
        run_with::<Quadratic>(cmd)
    }
}

/// Regenerates a lamination sample and reruns its audit.
pub fn replay_lamination(c: &Common, s: &SmallArgs) -> Result<Report, CliError> {
    fn go<S: Scalar>(c: &Common, s: &SmallArgs) -> Result<Report, CliError> {
        let act: LineAction<S> = c.action.load()?;
        let lam = lamination_sample(&act, c, s)?;
        let mut r = Report::new(if lam.audit.passes() { Status::Pass } else { Status::Violation });
        r.field("pairs", lam.sample.len()).field("flip_closed", lam.audit.flip_closed).field("action_closed", lam.audit.action_closed);
        if let Some((pair, w)) = &lam.audit.missing {
            let img = w.as_ref().map_or_else(|| pair.flip(), |w| pair.act(w));
            r.field("missing", &img).field("reproduced", !lam.sample.contains(&img));
        }
        Ok(r)
    }
    let mut lits = c.action.literals()?;
    lits.push(s.epsilon.clone());
    check_one_field(&lits, c.action.float)?;
    if c.action.float {
        go::<f64>(c, s)
    } else {
        go::<Quadratic>(c, s)
    }
}
