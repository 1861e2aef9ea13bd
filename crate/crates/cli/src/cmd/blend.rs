use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use obstree_core::blend::{
    axiom_scan, blend_line_actions, blend_metric, center_shift, certify_rtree, convex_combination_length_check, gromov_dichotomy,
    lambda_grid, Axiom, LengthFunction, WordSet,
};
use obstree_core::boundary::{cyclically_reduced_words, Basis};
use obstree_core::{Quadratic, Rational, Scalar};

use crate::input::{blend_error, check_one_field, load_pair, number, params, CliError, LengthSpec};
use crate::report::{Report, Status};

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct LambdaArgs {
    /// Blend parameter in [0, 1].
    #[arg(long)]
    pub lambda: Option<String>,
    /// Scan λ = 0, 1/k, ..., 1.
    #[arg(long, value_name = "K")]
    pub lambda_grid: Option<usize>,
}

impl LambdaArgs {
    pub fn values<S: Scalar>(&self) -> Result<Vec<S>, CliError> {
        let v = match (&self.lambda, self.lambda_grid) {
            (Some(l), _) => vec![number::<S>("lambda", l)?],
            (_, Some(0)) => return Err(params("--lambda-grid must be at least 1")),
            (_, Some(k)) => lambda_grid(k),
            _ => unreachable!("clap enforces one of the two"),
        };
        if v.iter().any(|l| *l < S::zero() || *l > S::one()) {
            return Err(params("lambda must lie in [0, 1]"));
        }
        Ok(v)
    }
}

#[derive(Args, Debug, Clone)]
pub struct PairOfFunctions {
    /// First length function: `rose:<images>[@<lengths>]`, `line:<weights>`,
    /// `action:<file>` or `table:<file>`.
    #[arg(long)]
    pub l0: LengthSpec,
    /// Second length function, same syntax.
    #[arg(long)]
    pub l1: LengthSpec,
    /// Use floating point instead of exact arithmetic.
    #[arg(long)]
    pub float: bool,
}

impl PairOfFunctions {
    pub fn check_field(&self, extra: &[String]) -> Result<(), CliError> {
        let mut lits = self.l0.literals()?;
        lits.extend(self.l1.literals()?);
        lits.extend(extra.iter().cloned());
        check_one_field(&lits, self.float)
    }

    pub fn rank(&self) -> Result<usize, CliError> {
        match (self.l0.rank()?, self.l1.rank()?) {
            (Some(a), Some(b)) if a != b => Err(params(format!("--l0 has rank {a} but --l1 has rank {b}"))),
            (Some(a), _) | (_, Some(a)) => Ok(a.max(2)),
            (None, None) => Ok(2),
        }
    }

    pub fn load<S: Scalar>(&self) -> Result<(LengthFunction<S>, LengthFunction<S>), CliError> {
        Ok((self.l0.load()?, self.l1.load()?))
    }

    pub fn flags(&self) -> String {
        format!("--l0 {} --l1 {}{}", self.l0, self.l1, if self.float { " --float" } else { "" })
    }
}

#[derive(Subcommand, Debug)]
pub enum BlendCmd {
    /// Blends the two metrics of a pair file and re-certifies the result.
    Metric {
        #[arg(long)]
        pair: PathBuf,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// Tabulates ℓ0, ℓ1 and their combination on short words.
    Lengths {
        #[command(flatten)]
        fns: PairOfFunctions,
        #[arg(long, default_value = "1/2")]
        lambda: String,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
    },
    /// Searches λ ℓ1 + (1 − λ) ℓ0 for violations of the length-function axioms.
    Axioms {
        #[command(flatten)]
        fns: PairOfFunctions,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
    },
}

fn metric(path: &Path, lambda: &LambdaArgs) -> Result<Report, CliError> {
    let pair = load_pair(path)?;
    let grid: Vec<Rational> = lambda.values()?;
    let t0 = pair.tree0().metric_table();
    let mut r = Report::new(Status::Pass);
    r.field("pair", path.display()).field("points", t0.len()).field("edges", pair.d0().len());
    let mut first_failure: Option<String> = None;
    let mut rows = Vec::new();
    for lam in &grid {
        let t = blend_metric(&pair, lam).map_err(blend_error)?;
        let table = t.metric_table();
        let cert = certify_rtree(&table);
        let shift = center_shift(pair.tree0(), &t);
        let dich = gromov_dichotomy(&t0, &table);
        let mut replay = None;
        if let Some(w) = &cert.verdict.witness {
            replay = Some(format!("obstree replay four-point --pair {} --lambda {lam} {} {} {} {}", path.display(), w.x, w.y, w.z, w.w));
        } else if let Some([x, y, z]) = &shift {
            replay = Some(format!("obstree replay center-shift --pair {} --lambda {lam} {x} {y} {z}", path.display()));
        } else if let Err([x, y, z, w]) = &dich {
            replay = Some(format!("obstree replay dichotomy --pair {} --lambda {lam} {x} {y} {z} {w}", path.display()));
        }
        let ok = cert.passes() && shift.is_none() && dich.is_ok();
        if !ok {
            r.status = Status::Violation;
            first_failure = first_failure.or(replay);
        }
        rows.push(vec![
            lam.to_string(),
            cert.passes().to_string(),
            shift.map_or("none".to_string(), |s| s.join(" ")),
            dich.map_or_else(|q| q.join(" "), |_| "ok".to_string()),
        ]);
        if grid.len() == 1 {
            let lens: Vec<String> =
                t.edges().iter().map(|e| format!("{}-{}:{}", t.vertex_name(e.a), t.vertex_name(e.b), e.length)).collect();
            r.field("blended_lengths", lens.join(" "));
        }
    }
    if let Some(f) = first_failure {
        r.field("replay", f);
    }
    r.columns(&["lambda", "certified", "center_shift", "dichotomy"]);
    for row in rows {
        r.row(row);
    }
    Ok(r)
}

fn lengths<S: Scalar>(fns: &PairOfFunctions, lambda: &str, maxlen: usize) -> Result<Report, CliError> {
    let lam: S = number("lambda", lambda)?;
    if lam < S::zero() || lam > S::one() {
        return Err(params("lambda must lie in [0, 1]"));
    }
    let rank = fns.rank()?;
    let (l0, l1) = fns.load::<S>()?;
    let combo = LengthFunction::combination(&l0, &l1, &lam);
    let words = cyclically_reduced_words(&Basis::new(rank).map_err(params)?, maxlen);
    let blended = match (fns.l0.line::<S>()?, fns.l1.line::<S>()?) {
        (Some(a), Some(b)) => Some(LengthFunction::from_line(&blend_line_actions(&a, &b, &lam).map_err(blend_error)?)),
        _ => None,
    };
    let mut r = Report::new(Status::Pass);
    r.field("lambda", &lam).field("words", words.len());
    let show = |v: Option<S>| v.map_or("-".to_string(), |x| x.to_string());
    match &blended {
        Some(b) => {
            let rep = convex_combination_length_check(&l0, &l1, b, &lam, &words);
            r.field("max_deviation", &rep.max_deviation);
            if let Some(w) = &rep.witness {
                r.field("deviation_witness", w);
            }
            r.columns(&["word", "l0", "l1", "combination", "blended_action"]);
            for w in &words {
                r.row(vec![w.to_string(), show(l0.eval(w)), show(l1.eval(w)), show(combo.eval(w)), show(b.eval(w))]);
            }
        }
        None => {
            r.columns(&["word", "l0", "l1", "combination"]);
            for w in &words {
                r.row(vec![w.to_string(), show(l0.eval(w)), show(l1.eval(w)), show(combo.eval(w))]);
            }
        }
    }
    Ok(r)
}

pub fn axiom_name(a: Axiom) -> &'static str {
    match a {
        Axiom::NonNegative => "non-negative",
        Axiom::Inverse => "inverse",
        Axiom::Conjugacy => "conjugacy",
        Axiom::Products => "products",
        Axiom::Hyperbolic => "hyperbolic",
    }
}

pub fn axioms_scan<S: Scalar>(fns: &PairOfFunctions, lambda: &LambdaArgs, maxlen: usize) -> Result<Report, CliError> {
    if maxlen < 2 {
        return Err(params("--maxlen must be at least 2"));
    }
    let grid: Vec<S> = lambda.values()?;
    let rank = fns.rank()?;
    let (l0, l1) = fns.load::<S>()?;
    let words = WordSet::up_to(rank, maxlen);
    let scan = axiom_scan(&l0, &l1, &grid, &words);
    let mut r = Report::new(Status::Pass);
    r.field("words", words.words.len()).field("maxlen", maxlen).columns(&["lambda", "result", "pairs_checked"]);
    let mut first = None;
    for (lam, rep) in &scan {
        let result = match &rep.witness {
            None => format!("no violation found (words <= {maxlen})"),
            Some(v) => {
                r.status = Status::Violation;
                let vw = v.v.as_ref().map_or(String::new(), |w| format!(" {w}"));
                first.get_or_insert_with(|| {
                    format!("obstree replay axiom {} --lambda {lam} --axiom {} {}{vw}", fns.flags(), axiom_name(v.axiom), v.u)
                });
                v.to_string()
            }
        };
        r.row(vec![lam.to_string(), result, rep.pairs_checked.to_string()]);
    }
    let violating = scan.iter().filter(|(_, rep)| !rep.passes).count();
    r.field("violating_lambdas", violating);
    if let Some(f) = first {
        r.field("replay", f);
    }
    Ok(r)
}

pub fn run(cmd: &BlendCmd) -> Result<Report, CliError> {
    match cmd {
        BlendCmd::Metric { pair, lambda } => metric(pair, lambda),
        BlendCmd::Lengths { fns, lambda, maxlen } => {
            fns.check_field(std::slice::from_ref(lambda))?;
            if fns.float {
                lengths::<f64>(fns, lambda, *maxlen)
            } else {
                lengths::<Quadratic>(fns, lambda, *maxlen)
            }
        }
        BlendCmd::Axioms { fns, lambda, maxlen } => {
            fns.check_field(&lambda.lambda.iter().cloned().collect::<Vec<_>>())?;
            if fns.float {
                axioms_scan::<f64>(fns, lambda, *maxlen)
            } else {
                axioms_scan::<Quadratic>(fns, lambda, *maxlen)
            }
        }
    }
}
