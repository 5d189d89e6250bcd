//! Text format for instances, with exact round-tripping.
//!
//! The format is line-oriented and fully rational: distances and potentials
//! are written as `p/q` in lowest terms (or a bare integer), so a file
//! carries exactly the numbers the solvers compute with. Serialization is
//! canonical, making byte equality meaningful for golden tests. Parsing is
//! tolerant of blank lines and full-line `#` comments but rejects unknown
//! directives, wrong counts, and version drift outright.
//!
//! A file describes five things in fixed order: the format version, the
//! point labels, the metric (an explicit matrix, or a weighted digraph
//! whose shortest paths define it), the preorder, and the potential.
//! Parsing checks shape and label references only; [`compile`] resolves the
//! description into a validated instance and reports mathematical defects.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::instance::{Instance, Phi};
use crate::preorder::Preorder;
use crate::rat::{ExtValue, Rat};
use crate::space::{min_plus_closure, PointId, QSpace, ValidationError};

pub const FORMAT_VERSION: u64 = 1;

/// How a file describes its distance matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MetricSpec {
    /// Explicit row-major matrix, `rows[i][j]` giving the distance from
    /// point `i` to point `j`.
    Matrix(Vec<Vec<Rat>>),
    /// Weighted directed edges `(from, to, weight)`; the metric is the
    /// shortest-path closure. Must connect every ordered pair.
    Digraph(Vec<(String, String, Rat)>),
}

/// How a file describes its preorder.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PreorderSpec {
    /// Everything related to everything.
    Total,
    /// Listed pairs `x <= y`, closed reflexively and transitively.
    Pairs(Vec<(String, String)>),
    /// Same closure semantics as `Pairs`; the name records that the pairs
    /// came from a reachability construction.
    Reachability(Vec<(String, String)>),
    /// `x <= y` exactly when `d(y, x) = 0` in the compiled metric.
    SpecializationConjugate,
}

impl PreorderSpec {
    fn keyword(&self) -> &'static str {
        match self {
            PreorderSpec::Total => "total",
            PreorderSpec::Pairs(_) => "pairs",
            PreorderSpec::Reachability(_) => "reachability",
            PreorderSpec::SpecializationConjugate => "specialization-conjugate",
        }
    }
}

/// A parsed instance description. Structurally faithful to the text: no
/// closure, validation, or repair has happened yet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InstanceFile {
    pub version: u64,
    pub points: Vec<String>,
    pub metric: MetricSpec,
    pub preorder: PreorderSpec,
    pub phi: Vec<ExtValue>,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("unsupported format version {found}")]
    VersionUnsupported { found: u64 },
}

fn malformed<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Malformed { line, reason: reason.into() })
}

struct Lines<'a> {
    content: std::vec::IntoIter<(usize, &'a str)>,
    eof_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let mut eof_line = 1;
        let content: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                eof_line = i + 2;
                (i + 1, l.trim())
            })
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { content: content.into_iter(), eof_line }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.content.next()
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        match self.next() {
            Some((line, l)) => Ok((line, l.split_whitespace().collect())),
            None => malformed(self.eof_line, format!("expected {what}, found end of input")),
        }
    }
}

fn parse_rat(tok: &str, line: usize) -> Result<Rat, ParseError> {
    Rat::from_str(tok).or_else(|e| malformed(line, e.to_string()))
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .or_else(|_| malformed(line, format!("{what} count `{tok}` is not a number")))
}

fn check_label<'a>(
    labels: &HashSet<&str>,
    tok: &'a str,
    line: usize,
) -> Result<&'a str, ParseError> {
    if labels.contains(tok) {
        Ok(tok)
    } else {
        malformed(line, format!("unknown point label `{tok}`"))
    }
}

/// Parses the text form. Checks structure, counts, and label references;
/// numeric and axiomatic validity is [`compile`]'s job.
pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = Lines::new(text);

    let (line, toks) = lines.expect("`version <number>`")?;
    if toks.len() != 2 || toks[0] != "version" {
        return malformed(line, "expected `version <number>`");
    }
    let version = toks[1]
        .parse::<u64>()
        .or_else(|_| malformed(line, format!("version `{}` is not a number", toks[1])))?;
    if version != FORMAT_VERSION {
        return Err(ParseError::VersionUnsupported { found: version });
    }

    let (line, toks) = lines.expect("`points <count> <labels...>`")?;
    if toks.len() < 2 || toks[0] != "points" {
        return malformed(line, "expected `points <count> <labels...>`");
    }
    let n = parse_count(toks[1], line, "point")?;
    if n == 0 {
        return malformed(line, "an instance needs at least one point");
    }
    let points: Vec<String> = toks[2..].iter().map(|s| s.to_string()).collect();
    if points.len() != n {
        return malformed(
            line,
            format!("declared {n} points but listed {}", points.len()),
        );
    }
    let mut seen: HashSet<&str> = HashSet::new();
    for p in &toks[2..] {
        if !seen.insert(p) {
            return malformed(line, format!("duplicate point label `{p}`"));
        }
    }

    let (line, toks) = lines.expect("`metric matrix` or `metric digraph <count>`")?;
    if toks.first() != Some(&"metric") {
        return malformed(line, "expected a `metric` directive");
    }
    let metric = match toks.get(1) {
        Some(&"matrix") if toks.len() == 2 => {
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let (line, toks) = lines.expect(&format!("matrix row {}", i + 1))?;
                if toks.len() != n {
                    return malformed(
                        line,
                        format!("matrix row has {} entries, expected {n}", toks.len()),
                    );
                }
                let row: Result<Vec<Rat>, ParseError> =
                    toks.iter().map(|t| parse_rat(t, line)).collect();
                rows.push(row?);
            }
            MetricSpec::Matrix(rows)
        }
        Some(&"digraph") if toks.len() == 3 => {
            let count = parse_count(toks[2], line, "edge")?;
            let mut edges = Vec::with_capacity(count);
            for _ in 0..count {
                let (line, toks) = lines.expect("an edge `<from> <to> <weight>`")?;
                if toks.len() != 3 {
                    return malformed(line, "expected `<from> <to> <weight>`");
                }
                let from = check_label(&seen, toks[0], line)?;
                let to = check_label(&seen, toks[1], line)?;
                edges.push((from.to_string(), to.to_string(), parse_rat(toks[2], line)?));
            }
            MetricSpec::Digraph(edges)
        }
        _ => return malformed(line, "expected `metric matrix` or `metric digraph <count>`"),
    };

    let (line, toks) = lines.expect("a `preorder` directive")?;
    if toks.first() != Some(&"preorder") {
        return malformed(line, "expected a `preorder` directive");
    }
    let preorder = match toks.get(1) {
        Some(&"total") if toks.len() == 2 => PreorderSpec::Total,
        Some(&"specialization-conjugate") if toks.len() == 2 => {
            PreorderSpec::SpecializationConjugate
        }
        Some(kw @ (&"pairs" | &"reachability")) if toks.len() == 3 => {
            let count = parse_count(toks[2], line, "pair")?;
            let mut pairs = Vec::with_capacity(count);
            for _ in 0..count {
                let (line, toks) = lines.expect("a pair `<x> <y>`")?;
                if toks.len() != 2 {
                    return malformed(line, "expected `<x> <y>`");
                }
                let x = check_label(&seen, toks[0], line)?;
                let y = check_label(&seen, toks[1], line)?;
                pairs.push((x.to_string(), y.to_string()));
            }
            if *kw == "pairs" {
                PreorderSpec::Pairs(pairs)
            } else {
                PreorderSpec::Reachability(pairs)
            }
        }
        _ => {
            return malformed(
                line,
                "expected `preorder total`, `preorder pairs <count>`, \
                 `preorder reachability <count>`, or `preorder specialization-conjugate`",
            )
        }
    };

    let (line, toks) = lines.expect("`phi <values...>`")?;
    if toks.first() != Some(&"phi") {
        return malformed(line, "expected a `phi` directive");
    }
    if toks.len() != n + 1 {
        return malformed(
            line,
            format!("phi lists {} values for {n} points", toks.len() - 1),
        );
    }
    let phi: Result<Vec<ExtValue>, ParseError> = toks[1..]
        .iter()
        .map(|t| ExtValue::from_str(t).or_else(|e| malformed(line, e.to_string())))
        .collect();
    let phi = phi?;

    if let Some((line, _)) = lines.next() {
        return malformed(line, "unexpected content after the phi directive");
    }
    Ok(InstanceFile { version, points, metric, preorder, phi })
}

/// Canonical text form: fixed directive order, single spaces, lowest-terms
/// rationals, one trailing newline. Two equal descriptions serialize to
/// identical bytes.
pub fn serialize(f: &InstanceFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version {}", f.version);
    let _ = writeln!(out, "points {} {}", f.points.len(), f.points.join(" "));
    match &f.metric {
        MetricSpec::Matrix(rows) => {
            let _ = writeln!(out, "metric matrix");
            for row in rows {
                let cells: Vec<String> = row.iter().map(|r| r.to_string()).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        MetricSpec::Digraph(edges) => {
            let _ = writeln!(out, "metric digraph {}", edges.len());
            for (from, to, w) in edges {
                let _ = writeln!(out, "{from} {to} {w}");
            }
        }
    }
    match &f.preorder {
        PreorderSpec::Total | PreorderSpec::SpecializationConjugate => {
            let _ = writeln!(out, "preorder {}", f.preorder.keyword());
        }
        PreorderSpec::Pairs(pairs) | PreorderSpec::Reachability(pairs) => {
            let _ = writeln!(out, "preorder {} {}", f.preorder.keyword(), pairs.len());
            for (x, y) in pairs {
                let _ = writeln!(out, "{x} {y}");
            }
        }
    }
    let phis: Vec<String> = f.phi.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "phi {}", phis.join(" "));
    out
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Space(#[from] ValidationError),
    #[error("unknown point label `{label}`")]
    UnknownLabel { label: String },
    #[error("edge {from} -> {to} has negative weight {weight}")]
    NegativeWeight { from: String, to: String, weight: Rat },
    #[error("no path from {from} to {to}: the digraph leaves that distance undefined")]
    MetricIncomplete { from: String, to: String },
    #[error("phi lists {got} values for {expected} points")]
    PhiLength { expected: usize, got: usize },
}

/// A compiled description: the validated instance plus the labels needed to
/// render its points back to the file's vocabulary.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompiledInstance {
    labels: Vec<String>,
    instance: Instance,
}

impl CompiledInstance {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: PointId) -> &str {
        &self.labels[x.0]
    }

    /// Looks a point up by label, falling back to a bare zero-based index.
    pub fn resolve(&self, name: &str) -> Option<PointId> {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            return Some(PointId(i));
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.labels.len() => Some(PointId(i)),
            _ => None,
        }
    }
}

/// Resolves a description into a validated instance: closes digraph
/// metrics, checks the axioms, builds the preorder per its kind, and
/// assembles the potential. Audit failures are not errors here; they are
/// recorded on the instance for the caller to report or enforce.
pub fn compile(f: &InstanceFile) -> Result<CompiledInstance, CompileError> {
    let n = f.points.len();
    let index = |label: &str| -> Result<usize, CompileError> {
        f.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| CompileError::UnknownLabel { label: label.to_string() })
    };

    let space = match &f.metric {
        MetricSpec::Matrix(rows) => QSpace::validate(rows.clone())?,
        MetricSpec::Digraph(edges) => {
            let mut w: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
            for (from, to, weight) in edges {
                if weight.is_negative() {
                    return Err(CompileError::NegativeWeight {
                        from: from.clone(),
                        to: to.clone(),
                        weight: weight.clone(),
                    });
                }
                let (i, j) = (index(from)?, index(to)?);
                // Parallel edges keep the cheapest weight.
                if w[i][j].as_ref().is_none_or(|old| weight < old) {
                    w[i][j] = Some(weight.clone());
                }
            }
            let closed = min_plus_closure(w);
            let mut d = Vec::with_capacity(n);
            for (i, row) in closed.into_iter().enumerate() {
                let mut out = Vec::with_capacity(n);
                for (j, cell) in row.into_iter().enumerate() {
                    match cell {
                        Some(v) => out.push(v),
                        None => {
                            return Err(CompileError::MetricIncomplete {
                                from: f.points[i].clone(),
                                to: f.points[j].clone(),
                            })
                        }
                    }
                }
                d.push(out);
            }
            QSpace::validate(d)?
        }
    };

    let order = match &f.preorder {
        PreorderSpec::Total => Preorder::total(n),
        PreorderSpec::SpecializationConjugate => Preorder::specialization_conjugate(&space),
        PreorderSpec::Pairs(pairs) | PreorderSpec::Reachability(pairs) => {
            let mut resolved = Vec::with_capacity(pairs.len());
            for (x, y) in pairs {
                resolved.push((PointId(index(x)?), PointId(index(y)?)));
            }
            Preorder::from_pairs_closed(n, &resolved)
        }
    };

    if f.phi.len() != n {
        return Err(CompileError::PhiLength { expected: n, got: f.phi.len() });
    }
    let instance = Instance::new(space, order, Phi::new(f.phi.clone()))
        .expect("component sizes were checked against the point count");
    Ok(CompiledInstance { labels: f.points.clone(), instance })
}

/// Describes an existing instance as a file: explicit matrix metric, the
/// preorder flattened to its full pair list, labels as given. The result
/// compiles back to an equal instance.
pub fn describe(labels: &[String], inst: &Instance, preorder: PreorderSpec) -> InstanceFile {
    InstanceFile {
        version: FORMAT_VERSION,
        points: labels.to_vec(),
        metric: MetricSpec::Matrix(inst.space().matrix().clone()),
        preorder,
        phi: inst.phi().values().to_vec(),
    }
}
