//! File loading, literal parsing and the error-to-exit-code mapping.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use obstree_core::blend::{parse_length_table, parse_pair, CompatibleMetricPair, LengthFunction, MarkedGraph};
use obstree_core::boundary::{BoundaryPoint, ReducedWord};
use obstree_core::observers::{LinePoint, Multipod, PodPoint, RealLine};
use obstree_core::qmap::{parse_action, LineAction};
use obstree_core::tree::{parse_table, parse_tree};
use obstree_core::{BlendError, MetricTable, MetricTree, QmapError, Quadratic, Rational, Scalar, TreeError};

#[derive(Debug)]
pub enum CliError {
    /// An input file or literal does not parse.
    Parse(String),
    /// A parameter is out of range or names something that does not exist.
    Params(String),
    /// An input file cannot be read.
    Input(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 64,
            CliError::Params(_) => 65,
            CliError::Input(_) => 66,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Params(m) => write!(f, "invalid parameter: {m}"),
            CliError::Input(m) => write!(f, "cannot read input: {m}"),
        }
    }
}

pub fn params(m: impl fmt::Display) -> CliError {
    CliError::Params(m.to_string())
}

fn in_file(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A numeric parameter given on the command line.
pub fn number<S: Scalar>(name: &str, s: &str) -> Result<S, CliError> {
    S::parse_literal(s).map_err(|e| params(format!("--{name} {s}: {e}")))
}

pub fn word(s: &str) -> Result<ReducedWord, CliError> {
    ReducedWord::parse(s).map_err(|e| CliError::Parse(format!("word `{s}`: {e}")))
}

pub fn boundary_point(s: &str) -> Result<BoundaryPoint, CliError> {
    BoundaryPoint::parse(s).map_err(|e| CliError::Parse(format!("boundary point `{s}`: {e}")))
}

pub fn load_tree(path: &Path) -> Result<MetricTree<Rational>, CliError> {
    parse_tree(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn load_table(path: &Path) -> Result<MetricTable<Rational>, CliError> {
    parse_table(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn load_pair(path: &Path) -> Result<CompatibleMetricPair<Rational>, CliError> {
    parse_pair(&read(path)?).map_err(|e| in_file(path, e))
}

pub fn tree_error(e: TreeError) -> CliError {
    match e {
        TreeError::Parse { .. } | TreeError::Number(_) => CliError::Parse(e.to_string()),
        _ => params(e),
    }
}

pub fn qmap_error(e: QmapError) -> CliError {
    match e {
        QmapError::Parse { .. } => CliError::Parse(e.to_string()),
        _ => params(e),
    }
}

pub fn blend_error(e: BlendError) -> CliError {
    match e {
        BlendError::Tree(t) => tree_error(t),
        _ => params(e),
    }
}

/// Radicands of the irrational literals in `lits`; unparsable literals are
/// skipped here and reported by the real parser.
fn radicands(lits: &[String]) -> BTreeSet<u64> {
    lits.iter().filter_map(|s| Quadratic::parse_literal(s).ok()).map(|q| q.irrational_part().1).filter(|&r| r != 0).collect()
}

/// Rejects exact runs over values from two different quadratic fields.
pub fn check_one_field(lits: &[String], float: bool) -> Result<(), CliError> {
    let r = radicands(lits);
    if !float && r.len() > 1 {
        let list: Vec<String> = r.iter().map(|d| format!("sqrt:{d}")).collect();
        return Err(params(format!(
            "values involve {}; exact mode needs a single quadratic field, rerun with --float",
            list.join(" and ")
        )));
    }
    Ok(())
}

/// Second field of every `weight` and `basepoint` record, and the value
/// column of tables.
fn literal_column(text: &str, keyword: Option<&str>) -> Vec<String> {
    text.lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split('#').next().unwrap_or("").split_whitespace().collect();
            match (keyword, f.as_slice()) {
                (None, [_, v]) => Some(v.to_string()),
                (Some(_), ["weight", _, v]) | (Some(_), ["basepoint", v]) => Some(v.to_string()),
                _ => None,
            }
        })
        .collect()
}

#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct ActionSource {
    /// Action file: a `line` header and `weight <gen> <value>` records.
    #[arg(long)]
    pub action: Option<PathBuf>,
    /// Comma-separated generator weights, e.g. `1,sqrt:2`.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct ActionArgs {
    #[command(flatten)]
    pub source: ActionSource,
    /// Use floating point (tolerance 1e-9) instead of exact quadratic arithmetic.
    #[arg(long)]
    pub float: bool,
}

impl ActionArgs {
    fn text(&self) -> Result<(String, bool), CliError> {
        match (&self.source.action, &self.source.weights) {
            (Some(p), _) => Ok((read(p)?, true)),
            (None, Some(w)) => Ok((w.clone(), false)),
            (None, None) => Err(params("an action is required")),
        }
    }

    pub fn literals(&self) -> Result<Vec<String>, CliError> {
        let (text, file) = self.text()?;
        Ok(if file { literal_column(&text, Some("weight")) } else { text.split(',').map(|s| s.trim().to_string()).collect() })
    }

    pub fn load<S: Scalar>(&self) -> Result<LineAction<S>, CliError> {
        let (text, file) = self.text()?;
        if file {
            let path = self.source.action.as_deref().expect("file source");
            return parse_action(&text).map_err(|e| match e {
                QmapError::Parse { .. } => in_file(path, e),
                other => qmap_error(other),
            });
        }
        let weights = text
            .split(',')
            .map(|s| S::parse_literal(s.trim()).map_err(|e| CliError::Parse(format!("weight `{}`: {e}", s.trim()))))
            .collect::<Result<Vec<S>, _>>()?;
        LineAction::new(weights).map_err(qmap_error)
    }

    /// The same action as command-line flags.
    pub fn flags(&self) -> String {
        let mut s = match (&self.source.action, &self.source.weights) {
            (Some(p), _) => format!("--action {}", p.display()),
            (_, Some(w)) => format!("--weights {w}"),
            _ => String::new(),
        };
        if self.float {
            s.push_str(" --float");
        }
        s
    }
}

/// A translation-length function named on the command line:
/// `rose:<images>[@<lengths>]`, `line:<weights>`, `action:<file>` or
/// `table:<file>`.
#[derive(Clone, Debug)]
pub enum LengthSpec {
    Rose { images: Vec<ReducedWord>, lengths: Vec<String> },
    Line(Vec<String>),
    Action(PathBuf),
    Table(PathBuf),
}

impl std::str::FromStr for LengthSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, body) = s.split_once(':').ok_or_else(|| format!("`{s}`: expected rose:, line:, action: or table:"))?;
        let list = |b: &str| b.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>();
        match kind {
            "rose" => {
                let (imgs, lens) = match body.split_once('@') {
                    Some((i, l)) => (i, Some(l)),
                    None => (body, None),
                };
                let images =
                    list(imgs).iter().map(|w| ReducedWord::parse(w).map_err(|e| format!("`{w}`: {e}"))).collect::<Result<Vec<_>, _>>()?;
                let lengths = lens.map(list).unwrap_or_else(|| vec!["1".to_string(); images.len()]);
                Ok(LengthSpec::Rose { images, lengths })
            }
            "line" => Ok(LengthSpec::Line(list(body))),
            "action" => Ok(LengthSpec::Action(PathBuf::from(body))),
            "table" => Ok(LengthSpec::Table(PathBuf::from(body))),
            _ => Err(format!("unknown length function kind `{kind}`")),
        }
    }
}

impl fmt::Display for LengthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthSpec::Rose { images, lengths } => {
                let imgs: Vec<String> = images.iter().map(|w| w.to_string()).collect();
                write!(f, "rose:{}@{}", imgs.join(","), lengths.join(","))
            }
            LengthSpec::Line(w) => write!(f, "line:{}", w.join(",")),
            LengthSpec::Action(p) => write!(f, "action:{}", p.display()),
            LengthSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl LengthSpec {
    pub fn literals(&self) -> Result<Vec<String>, CliError> {
        Ok(match self {
            LengthSpec::Rose { lengths, .. } => lengths.clone(),
            LengthSpec::Line(w) => w.clone(),
            LengthSpec::Action(p) => literal_column(&read(p)?, Some("weight")),
            LengthSpec::Table(p) => literal_column(&read(p)?, None),
        })
    }

    /// Number of generators the function is defined on, when known.
    pub fn rank(&self) -> Result<Option<usize>, CliError> {
        Ok(match self {
            LengthSpec::Rose { images, .. } => Some(images.len()),
            LengthSpec::Line(w) => Some(w.len()),
            LengthSpec::Action(_) => Some(self.line::<f64>()?.expect("action spec").weights().len()),
            LengthSpec::Table(_) => None,
        })
    }

    /// The line action behind a `line:` or `action:` spec.
    pub fn line<S: Scalar>(&self) -> Result<Option<LineAction<S>>, CliError> {
        match self {
            LengthSpec::Line(w) => {
                let ws = w
                    .iter()
                    .map(|s| S::parse_literal(s).map_err(|e| CliError::Parse(format!("weight `{s}`: {e}"))))
                    .collect::<Result<Vec<S>, _>>()?;
                LineAction::new(ws).map(Some).map_err(qmap_error)
            }
            LengthSpec::Action(p) => parse_action(&read(p)?).map(Some).map_err(|e| match e {
                QmapError::Parse { .. } => in_file(p, e),
                other => qmap_error(other),
            }),
            _ => Ok(None),
        }
    }

    pub fn load<S: Scalar>(&self) -> Result<LengthFunction<S>, CliError> {
        match self {
            LengthSpec::Rose { images, lengths } => {
                let ls = lengths.iter().map(|s| number::<S>("length", s)).collect::<Result<Vec<S>, _>>()?;
                let g = MarkedGraph::new(images.clone(), ls).map_err(blend_error)?;
                Ok(LengthFunction::from_marked_graph(&g))
            }
            LengthSpec::Line(_) | LengthSpec::Action(_) => Ok(LengthFunction::from_line(&self.line::<S>()?.expect("line spec"))),
            LengthSpec::Table(p) => parse_length_table(&read(p)?).map_err(|e| in_file(p, e)),
        }
    }
}

/// A tree oracle selected on the command line.
#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct SpaceArgs {
    /// Finite tree file; sequence lines are point or vertex names.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Multipod with N unit arms (`inf` for countably many); sequence lines
    /// are `hub` or `arm <i> <offset>`.
    #[arg(long)]
    pub multipod: Option<String>,
    /// The real line with its two ends; sequence lines are coordinates,
    /// `+inf` or `-inf`.
    #[arg(long)]
    pub line: bool,
}

pub enum Space {
    Tree(Box<MetricTree<Rational>>),
    Multipod(Multipod<Rational>),
    Line(RealLine<Rational>),
}

impl SpaceArgs {
    pub fn load(&self) -> Result<Space, CliError> {
        if let Some(p) = &self.tree {
            return Ok(Space::Tree(Box::new(load_tree(p)?)));
        }
        if let Some(n) = &self.multipod {
            if n == "inf" {
                return Ok(Space::Multipod(Multipod::infinite()));
            }
            let arms: usize = n.parse().map_err(|_| params(format!("--multipod {n}: expected an arm count or `inf`")))?;
            if arms == 0 {
                return Err(params("--multipod needs at least one arm"));
            }
            return Ok(Space::Multipod(Multipod::new(arms)));
        }
        Ok(Space::Line(RealLine::new()))
    }

    pub fn flags(&self) -> String {
        match (&self.tree, &self.multipod) {
            (Some(p), _) => format!("--tree {}", p.display()),
            (_, Some(n)) => format!("--multipod {n}"),
            _ => "--line".to_string(),
        }
    }
}

pub fn tree_point(t: &MetricTree<Rational>, s: &str) -> Result<obstree_core::Location<Rational>, String> {
    t.locate(s.trim()).map_err(|e| e.to_string())
}

pub fn pod_point(m: &Multipod<Rational>, s: &str) -> Result<PodPoint<Rational>, String> {
    let f: Vec<&str> = s.split_whitespace().collect();
    match f.as_slice() {
        ["hub"] => Ok(PodPoint::Hub),
        ["arm", i, off] => {
            let arm: usize = i.parse().map_err(|_| format!("arm index `{i}`"))?;
            let offset = Rational::parse_literal(off).map_err(|e| e.to_string())?;
            if m.arms().is_some_and(|n| arm >= n) {
                return Err(format!("arm {arm} does not exist"));
            }
            if offset < Rational::zero() || offset > Rational::one() {
                return Err(format!("offset {off} lies outside [0, 1]"));
            }
            Ok(m.point(arm, offset))
        }
        _ => Err(format!("`{s}`: expected `hub` or `arm <i> <offset>`")),
    }
}

pub fn line_point(s: &str) -> Result<LinePoint<Rational>, String> {
    match s.trim() {
        "+inf" | "inf" => Ok(LinePoint::PosInf),
        "-inf" => Ok(LinePoint::NegInf),
        t => Rational::parse_literal(t).map(LinePoint::At).map_err(|e| e.to_string()),
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
pub fn records(text: &str) -> Vec<(usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty()).collect()
}

/// Parses a sequence file with `point`, reporting the failing line.
pub fn load_sequence<P>(path: &Path, point: impl Fn(&str) -> Result<P, String>) -> Result<Vec<P>, CliError> {
    let text = read(path)?;
    records(&text).into_iter().map(|(n, l)| point(l).map_err(|e| CliError::Parse(format!("{}: line {n}: {e}", path.display())))).collect()
}
