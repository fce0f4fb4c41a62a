//! Text format for energy functions and automata.
//!
//! ```text
//! # the car example
//! states: 2
//! names: W R
//! initial: W
//! accepting: W
//! edge W -> R : x-12 | x>=12
//! edge R -> W : 2x+12 | x>=0, x+14 | x>=2
//! ```
//!
//! A function is a comma-separated list of `expr | guard` clauses with
//! `expr = [RAT]x[±RAT] | RAT | inf | bot` and `guard = x==RAT | x>=RAT | x>RAT`.
//! The region before the first clause is `⊥`. A `dim: n` header makes the file
//! multi-dimensional, with `n` functions per edge separated by `;`.
//!
//! A state id that is an integer `k ≤ states` names the `k`-th state; any other
//! id takes the next unnamed state in order of first appearance. The optional
//! `names:` line fixes all names up front.

use std::fmt;

use num_traits::{One, Zero};

use crate::automaton::{EnergyAutomaton, Transition};
use crate::function::{Body, EnergyFunction, FunctionError, Piece};
use crate::multidim::{MultiDimAutomaton, MultiTransition};
use crate::value::{parse_rational, ExtValue, Rational, RationalParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed file: one-dimensional unless it has a `dim:` header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonFile {
    Single(EnergyAutomaton),
    Multi(MultiDimAutomaton),
}

impl AutomatonFile {
    /// The one-dimensional automaton, also from a `dim: 1` file.
    pub fn into_single(self) -> Option<EnergyAutomaton> {
        match self {
            AutomatonFile::Single(a) => Some(a),
            AutomatonFile::Multi(m) if m.dim == 1 => Some(EnergyAutomaton {
                names: m.names,
                transitions: m
                    .transitions
                    .into_iter()
                    .map(|t| Transition { source: t.source, label: t.labels.into_iter().next().unwrap(), target: t.target })
                    .collect(),
                initial: m.initial,
                accepting: m.accepting,
            }),
            AutomatonFile::Multi(_) => None,
        }
    }

    /// Every automaton is also a multi-dimensional one of dimension 1.
    pub fn into_multi(self) -> MultiDimAutomaton {
        match self {
            AutomatonFile::Multi(m) => m,
            AutomatonFile::Single(a) => MultiDimAutomaton {
                dim: 1,
                names: a.names,
                transitions: a
                    .transitions
                    .into_iter()
                    .map(|t| MultiTransition { source: t.source, labels: vec![t.label], target: t.target })
                    .collect(),
                initial: a.initial,
                accepting: a.accepting,
            },
        }
    }
}

/// Syntax error inside a single function, with a byte offset into its text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSyntaxError {
    pub offset: usize,
    pub clause: usize,
    pub message: String,
}

impl fmt::Display for FunctionSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {}: {}", self.clause + 1, self.message)
    }
}

impl std::error::Error for FunctionSyntaxError {}

enum Expr {
    Affine(Rational, Rational),
    Const(ExtValue),
}

fn rat_err(e: RationalParseError) -> String {
    e.to_string()
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "" => return Err("missing expression".into()),
        "inf" => return Ok(Expr::Const(ExtValue::Inf)),
        "bot" => return Ok(Expr::Const(ExtValue::Bot)),
        _ => {}
    }
    match t.split_once('x') {
        Some((coef, rest)) => {
            let a = match coef {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                c => parse_rational(c).map_err(rat_err)?,
            };
            let b = if rest.is_empty() {
                Rational::zero()
            } else if rest.starts_with('+') || rest.starts_with('-') {
                parse_rational(rest).map_err(rat_err)?
            } else {
                return Err(format!("expected `+` or `-` after `x`, found `{rest}`"));
            };
            Ok(Expr::Affine(a, b))
        }
        None => parse_rational(&t).map(|v| Expr::Const(ExtValue::Fin(v))).map_err(rat_err),
    }
}

enum Guard {
    Eq(Rational),
    /// `x>=p` when included, `x>p` otherwise.
    From(Rational, bool),
}

fn parse_guard(s: &str) -> Result<Guard, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(rest) = t.strip_prefix('x') else {
        return Err(format!("guard must start with `x`, found `{t}`"));
    };
    let (op, num) = if let Some(r) = rest.strip_prefix("==") {
        ("==", r)
    } else if let Some(r) = rest.strip_prefix(">=") {
        (">=", r)
    } else if let Some(r) = rest.strip_prefix('>') {
        (">", r)
    } else {
        return Err(format!("expected `==`, `>=` or `>` in guard `{t}`"));
    };
    let v = parse_rational(num).map_err(rat_err)?;
    Ok(match op {
        "==" => Guard::Eq(v),
        ">=" => Guard::From(v, true),
        _ => Guard::From(v, false),
    })
}

/// Clause texts with their byte offsets.
fn split_clauses(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == ',' {
            out.push((start, &s[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &s[start..]));
    out
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

/// Index of the clause whose bound is the last one `≤ at`.
fn clause_at(bounds: &[Rational], at: &Rational) -> usize {
    bounds.iter().rposition(|b| b <= at).unwrap_or(0)
}

/// Parses a function in clause syntax.
pub fn parse_function(text: &str) -> Result<EnergyFunction, FunctionSyntaxError> {
    let mut pieces = Vec::new();
    let mut points = Vec::new();
    let mut bounds = Vec::new();
    for (idx, (off, clause)) in split_clauses(text).into_iter().enumerate() {
        let err = |message: String, at: usize| FunctionSyntaxError { offset: at, clause: idx, message };
        let at = off + leading_ws(clause);
        let Some((e, g)) = clause.split_once('|') else {
            return Err(err("expected `expr | guard`".into(), at));
        };
        let expr = parse_expr(e).map_err(|m| err(m, at))?;
        let guard_at = off + e.len() + 1 + leading_ws(g);
        let guard = parse_guard(g).map_err(|m| err(m, guard_at))?;
        match guard {
            Guard::Eq(p) => {
                let v = match expr {
                    Expr::Const(v) => v,
                    Expr::Affine(a, b) => ExtValue::Fin(a * &p + b),
                };
                bounds.push(p.clone());
                points.push((p, v));
            }
            Guard::From(lower, lower_included) => {
                let body = match expr {
                    Expr::Affine(a, b) => {
                        if a < Rational::one() {
                            return Err(err(FunctionError::Slope(a).to_string(), at));
                        }
                        Body::Affine { a, b }
                    }
                    Expr::Const(ExtValue::Inf) => Body::Inf,
                    Expr::Const(ExtValue::Bot) => Body::Bot,
                    Expr::Const(ExtValue::Fin(c)) => {
                        return Err(err(format!("constant {c} on a range has slope 0; constants are only allowed with `x==`"), at));
                    }
                };
                bounds.push(lower.clone());
                pieces.push(Piece { lower, lower_included, body });
            }
        }
    }
    EnergyFunction::from_pieces(&pieces, &points).map_err(|e| {
        let clause = match &e {
            FunctionError::Negative { at, .. }
            | FunctionError::NegativeBound(at)
            | FunctionError::Monotonicity(at)
            | FunctionError::DuplicatePoint(at) => {
                clause_at(&bounds, at)
            }
            _ => 0,
        };
        FunctionSyntaxError { offset: 0, clause, message: e.to_string() }
    })
}

/// Canonical clause syntax; `parse_function(&print_function(f)) == f`.
pub fn print_function(f: &EnergyFunction) -> String {
    f.to_string()
}

struct Names {
    n: usize,
    custom: Vec<Option<String>>,
}

impl Names {
    fn resolve(&mut self, id: &str) -> Result<usize, String> {
        if let Some(i) = self.custom.iter().position(|c| c.as_deref() == Some(id)) {
            return Ok(i);
        }
        if let Ok(k) = id.parse::<usize>() {
            if (1..=self.n).contains(&k) {
                return Ok(k - 1);
            }
            return Err(format!("state {k} out of range 1..={}", self.n));
        }
        if !id.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("invalid state id `{id}`"));
        }
        match self.custom.iter().position(Option::is_none) {
            Some(i) => {
                self.custom[i] = Some(id.to_string());
                Ok(i)
            }
            None => Err(format!("more state names than the {} declared states", self.n)),
        }
    }

    fn into_names(self) -> Vec<String> {
        self.custom.into_iter().enumerate().map(|(i, c)| c.unwrap_or_else(|| (i + 1).to_string())).collect()
    }
}

fn id_list(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        let sep = c == ',' || c.is_whitespace();
        match (sep, start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

struct Header {
    key: &'static str,
    line: usize,
    col: usize,
    value: String,
}

struct EdgeLine {
    line: usize,
    number: usize,
    src: (usize, String),
    dst: (usize, String),
    funcs_col: usize,
    funcs: String,
}

/// Parses an automaton file.
pub fn parse_automaton(text: &str) -> Result<AutomatonFile, ParseError> {
    let err = |line: usize, column: usize, message: String| ParseError { line, column, message };
    let mut headers: Vec<Header> = Vec::new();
    let mut edges: Vec<EdgeLine> = Vec::new();
    // items in order of appearance: header index or edge index
    let mut order: Vec<Result<usize, usize>> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = leading_ws(content);
        let body = content.trim();
        if let Some(rest) = body.strip_prefix("edge").filter(|r| r.starts_with(char::is_whitespace)) {
            let base = indent + 4;
            let Some((ends, funcs)) = rest.split_once(':') else {
                return Err(err(line, base + 1, "expected `edge SRC -> DST : functions`".into()));
            };
            let Some((src, dst)) = ends.split_once("->") else {
                return Err(err(line, base + 1, "expected `->` between source and target".into()));
            };
            let src_col = base + leading_ws(src) + 1;
            let dst_col = base + src.len() + 2 + leading_ws(dst) + 1;
            let funcs_col = base + ends.len() + 1 + 1;
            order.push(Err(edges.len()));
            edges.push(EdgeLine {
                line,
                number: edges.len() + 1,
                src: (src_col, src.trim().to_string()),
                dst: (dst_col, dst.trim().to_string()),
                funcs_col,
                funcs: funcs.to_string(),
            });
            continue;
        }
        let Some((key, value)) = body.split_once(':') else {
            return Err(err(line, indent + 1, format!("unrecognized line `{body}`")));
        };
        let key = match key.trim() {
            "states" => "states",
            "initial" => "initial",
            "accepting" => "accepting",
            "dim" => "dim",
            "names" => "names",
            other => return Err(err(line, indent + 1, format!("unknown header `{other}`"))),
        };
        if let Some(h) = headers.iter().find(|h| h.key == key) {
            return Err(err(line, indent + 1, format!("duplicate `{key}:` header (first on line {})", h.line)));
        }
        order.push(Ok(headers.len()));
        headers.push(Header { key, line, col: indent + key.len() + 2 + leading_ws(value), value: value.trim().to_string() });
    }

    let header = |k: &str| headers.iter().find(|h| h.key == k);
    let parse_count = |h: &Header| -> Result<usize, ParseError> {
        h.value.parse::<usize>().map_err(|_| err(h.line, h.col, format!("expected a natural number, found `{}`", h.value)))
    };
    let Some(states) = header("states") else {
        return Err(err(1, 1, "missing `states:` header".into()));
    };
    let n = parse_count(states)?;
    let dim = match header("dim") {
        Some(h) => {
            let d = parse_count(h)?;
            if d == 0 {
                return Err(err(h.line, h.col, "dimension must be at least 1".into()));
            }
            Some(d)
        }
        None => None,
    };
    let mut names = Names { n, custom: vec![None; n] };
    if let Some(h) = header("names") {
        let list = id_list(&h.value);
        if list.len() != n {
            return Err(err(h.line, h.col, format!("`names:` lists {} names for {} states", list.len(), n)));
        }
        for (i, (off, name)) in list.iter().enumerate() {
            if names.custom.iter().any(|c| c.as_deref() == Some(*name)) {
                return Err(err(h.line, h.col + off, format!("duplicate state name `{name}`")));
            }
            names.custom[i] = Some(name.to_string());
        }
    }

    let mut initial = None;
    let mut accepting = Vec::new();
    let mut single = Vec::new();
    let mut multi = Vec::new();
    for item in order {
        match item {
            Ok(hi) => {
                let h = &headers[hi];
                match h.key {
                    "initial" => {
                        initial = Some(names.resolve(&h.value).map_err(|m| err(h.line, h.col, m))?);
                    }
                    "accepting" => {
                        for (off, id) in id_list(&h.value) {
                            let s = names.resolve(id).map_err(|m| err(h.line, h.col + off, m))?;
                            if !accepting.contains(&s) {
                                accepting.push(s);
                            }
                        }
                    }
                    _ => {}
                }
            }
            Err(ei) => {
                let e = &edges[ei];
                let source = names.resolve(&e.src.1).map_err(|m| err(e.line, e.src.0, m))?;
                let target = names.resolve(&e.dst.1).map_err(|m| err(e.line, e.dst.0, m))?;
                let comps: Vec<&str> = e.funcs.split(';').collect();
                let mut labels = Vec::with_capacity(comps.len());
                let mut col = e.funcs_col;
                for (ci, comp) in comps.iter().enumerate() {
                    let f = parse_function(comp).map_err(|fe| {
                        let which = if dim.is_some() { format!(", component {}", ci + 1) } else { String::new() };
                        err(
                            e.line,
                            col + fe.offset,
                            format!("edge {} ({} -> {}){}: {}", e.number, e.src.1, e.dst.1, which, fe),
                        )
                    })?;
                    labels.push(f);
                    col += comp.len() + 1;
                }
                match dim {
                    None => {
                        if labels.len() != 1 {
                            return Err(err(e.line, e.funcs_col, format!("edge {} has {} components but no `dim:` header", e.number, labels.len())));
                        }
                        single.push(Transition { source, label: labels.pop().unwrap(), target });
                    }
                    Some(d) => {
                        if labels.len() != d {
                            return Err(err(e.line, e.funcs_col, format!("edge {} has {} components, expected {d}", e.number, labels.len())));
                        }
                        multi.push(MultiTransition { source, labels, target });
                    }
                }
            }
        }
    }
    let initial = match (initial, n) {
        (Some(i), _) => i,
        (None, 0) => 0,
        (None, _) => return Err(err(1, 1, "missing `initial:` header".into())),
    };
    let names = names.into_names();
    Ok(match dim {
        None => AutomatonFile::Single(EnergyAutomaton { names, transitions: single, initial, accepting }),
        Some(dim) => AutomatonFile::Multi(MultiDimAutomaton { dim, names, transitions: multi, initial, accepting }),
    })
}

fn default_names(names: &[String]) -> bool {
    names.iter().enumerate().all(|(i, s)| *s == (i + 1).to_string())
}

fn print_header(out: &mut String, names: &[String], dim: Option<usize>, initial: usize, accepting: &[usize]) {
    out.push_str(&format!("states: {}\n", names.len()));
    if let Some(d) = dim {
        out.push_str(&format!("dim: {d}\n"));
    }
    if !default_names(names) {
        out.push_str(&format!("names: {}\n", names.join(" ")));
    }
    if !names.is_empty() {
        out.push_str(&format!("initial: {}\n", names[initial]));
    }
    let acc: Vec<&str> = accepting.iter().map(|&i| names[i].as_str()).collect();
    out.push_str(&format!("accepting: {}\n", acc.join(", ")));
}

pub fn print_automaton(a: &EnergyAutomaton) -> String {
    let mut out = String::new();
    print_header(&mut out, &a.names, None, a.initial, &a.accepting);
    for t in &a.transitions {
        out.push_str(&format!("edge {} -> {} : {}\n", a.names[t.source], a.names[t.target], t.label));
    }
    out
}

pub fn print_multi(a: &MultiDimAutomaton) -> String {
    let mut out = String::new();
    print_header(&mut out, &a.names, Some(a.dim), a.initial, &a.accepting);
    for t in &a.transitions {
        let comps: Vec<String> = t.labels.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("edge {} -> {} : {}\n", a.names[t.source], a.names[t.target], comps.join("; ")));
    }
    out
}
