//! Problem files, bundled benchmark problems and their decomposers.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::bk::Registry;
use crate::mml::{Scorer, Signature};
use crate::operators::{meta_delete, meta_insert, meta_replace, one_step_rew, OpKind, OperatorDef, Template};
use crate::rewrite::Background;
use crate::search::{ConfigError, LearnConfig};
use crate::syntax::parse_rule;
use crate::term::{Rule, RulePosition, Symbol, Term};

pub mod ooo;
pub mod raven;
pub mod series;
pub mod transform;

pub use ooo::{ooo_items, ooo_problem, ooo_rule_diffobj, ooo_rule_hamming};
pub use raven::{decompose_matrix, fig11, raven_problem, table6_fixtures, RavenFixture};
pub use series::{decompose_series, thurstone_problem, thurstone_solution, Series, SERIES};
pub use transform::{gen_transform_suite, transfer_operators, transfer_problem, TransformKind, WORDS};

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub name: String,
    pub pos: Vec<Rule>,
    pub neg: Vec<Rule>,
    pub bk: Vec<Rule>,
    pub ops: Vec<OperatorDef>,
    /// `config key = value` lines, applied over the caller's configuration.
    pub config: Vec<(String, String)>,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: unknown background function `{name}`")]
    UnknownBk { line: usize, name: String },
    #[error("line {line}: duplicate operator id {id}")]
    DuplicateOp { line: usize, id: usize },
    #[error("problem has no positive examples")]
    NoPositives,
    #[error("unknown bundled problem `{0}`")]
    UnknownBundled(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("series too short")]
    SeriesTooShort,
    #[error("not a series example: {0}")]
    NotSeries(String),
    #[error("malformed grid: {0}")]
    MalformedGrid(String),
}

impl Problem {
    pub fn new(name: &str) -> Problem {
        Problem { name: name.into(), pos: vec![], neg: vec![], bk: vec![], ops: vec![], config: vec![] }
    }

    /// Functors defined by the examples.
    pub fn targets(&self) -> BTreeSet<Symbol> {
        self.pos.iter().chain(&self.neg).filter_map(|e| e.target().cloned()).collect()
    }

    pub fn background(&self) -> Background {
        Background::new(self.bk.clone(), self.targets())
    }

    /// Vocabulary of the evidence, background rules and operator templates.
    pub fn signature(&self) -> Signature {
        let mut terms: Vec<&Term> = Vec::new();
        for r in self.pos.iter().chain(&self.neg).chain(&self.bk) {
            terms.extend(r.terms());
        }
        terms.extend(self.ops.iter().filter_map(|o| o.template.as_ref().map(|t| &t.0)));
        Signature::from_terms(terms)
    }

    pub fn scorer(&self, cfg: &LearnConfig) -> Scorer {
        Scorer::new(self.pos.clone(), self.neg.clone(), self.background(), cfg.budget, self.signature(), cfg.scoring)
    }

    /// `base` with this problem's config lines applied.
    pub fn learn_config(&self, base: &LearnConfig) -> Result<LearnConfig, ConfigError> {
        let mut cfg = base.clone();
        for (k, v) in &self.config {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name: {}", self.name);
        for (k, v) in &self.config {
            let _ = writeln!(s, "config {k} = {v}");
        }
        for r in &self.bk {
            let _ = writeln!(s, "bk: {r}");
        }
        for r in &self.pos {
            let _ = writeln!(s, "pos: {r}");
        }
        for r in &self.neg {
            let _ = writeln!(s, "neg: {r}");
        }
        for o in &self.ops {
            let _ = writeln!(s, "op {} = {o}", o.id);
        }
        s
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Parse { line, col, msg: msg.into() }
}

/// Reads a problem file, or a bundled problem when `path` is `@name`.
pub fn load_problem(path: &str) -> Result<Problem, ProblemError> {
    if let Some(name) = path.strip_prefix('@') {
        return bundled(name);
    }
    let text =
        std::fs::read_to_string(Path::new(path)).map_err(|source| ProblemError::Io { path: path.into(), source })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut p = Problem::new("unnamed");
    let mut ids = HashSet::new();
    let mut op_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - content.trim_start().len() + 1;
        let rule_at = |src: &str, offset: usize| -> Result<Rule, ProblemError> {
            let lead = src.len() - src.trim_start().len();
            parse_rule(src.trim()).map_err(|e| perr(line, col0 + offset + lead + e.col, e.msg))
        };
        if let Some(rest) = trimmed.strip_prefix("name:") {
            p.name = rest.trim().to_string();
        } else if let Some(rest) = trimmed.strip_prefix("pos:") {
            p.pos.push(rule_at(rest, 4)?);
        } else if let Some(rest) = trimmed.strip_prefix("neg:") {
            p.neg.push(rule_at(rest, 4)?);
        } else if let Some(rest) = trimmed.strip_prefix("bk:") {
            p.bk.push(rule_at(rest, 3)?);
        } else if let Some(rest) = trimmed.strip_prefix("decompose") {
            let Some((head, body)) = rest.split_once(':') else {
                return Err(perr(line, col0, "expected `decompose [N]: <example>`"));
            };
            let keep = match head.trim() {
                "" => None,
                n => Some(n.parse::<usize>().map_err(|_| perr(line, col0 + 9, "expected a count"))?),
            };
            let e = rule_at(body, 10 + head.len())?;
            let mut inst = decompose_series(&e)?;
            if let Some(k) = keep {
                inst = inst.split_off(inst.len().saturating_sub(k));
            }
            p.pos.extend(inst);
        } else if let Some(rest) = trimmed.strip_prefix("config") {
            let Some((k, v)) = rest.split_once('=') else {
                return Err(perr(line, col0, "expected `config key = value`"));
            };
            p.config.push((k.trim().to_string(), v.trim().to_string()));
        } else if trimmed.starts_with("op") {
            op_lines.push((line, trimmed.to_string()));
        } else {
            return Err(perr(line, col0, format!("unrecognized line `{trimmed}`")));
        }
    }
    let known: BTreeSet<Symbol> =
        p.targets().into_iter().chain(p.bk.iter().filter_map(|r| r.target().cloned())).collect();
    for (line, src) in op_lines {
        for op in parse_op_line(line, &src)? {
            if !ids.insert(op.id) {
                return Err(ProblemError::DuplicateOp { line, id: op.id });
            }
            if let Some(t) = &op.template {
                check_functors(&t.0, &known, line)?;
            }
            p.ops.push(op);
        }
    }
    if p.pos.is_empty() {
        return Err(ProblemError::NoPositives);
    }
    Ok(p)
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' if !in_quote => in_str = !in_str,
            '\'' if !in_str => in_quote = !in_quote,
            '#' if !in_str && !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

fn check_functors(t: &Term, known: &BTreeSet<Symbol>, line: usize) -> Result<(), ProblemError> {
    let reg = Registry::standard();
    match t {
        Term::App(f, _) if !reg.contains(f) && !known.contains(f) => {
            return Err(ProblemError::UnknownBk { line, name: f.to_string() })
        }
        Term::BkRef(f) if !reg.contains(f) => return Err(ProblemError::UnknownBk { line, name: f.to_string() }),
        _ => {}
    }
    for c in t.children() {
        check_functors(c, known, line)?;
    }
    Ok(())
}

/// `op N = kind(args)`; an `each[p1,p2,...]` position expands into
/// operators with consecutive ids starting at N.
fn parse_op_line(line: usize, src: &str) -> Result<Vec<OperatorDef>, ProblemError> {
    let rest = src.strip_prefix("op").unwrap_or(src);
    let Some((id_s, decl)) = rest.split_once('=') else {
        return Err(perr(line, 1, "expected `op N = ...`"));
    };
    let id: usize = id_s.trim().parse().map_err(|_| perr(line, 3, "operator id must be a natural number"))?;
    let decl = decl.trim();
    let decl_col = src.len() - decl.len() + 1;
    if decl == "one_step_rew" {
        return Ok(vec![one_step_rew(id)]);
    }
    let Some(open) = decl.find('(') else {
        return Err(perr(line, decl_col, "expected `replace(...)`, `insert(...)`, `delete(...)` or `one_step_rew`"));
    };
    if !decl.ends_with(')') {
        return Err(perr(line, decl_col + decl.len(), "missing `)`"));
    }
    let kind = match &decl[..open] {
        "replace" => OpKind::Replace,
        "insert" => OpKind::Insert,
        "delete" => OpKind::Delete,
        other => return Err(perr(line, decl_col, format!("unknown operator kind `{other}`"))),
    };
    let inner = &decl[open + 1..decl.len() - 1];
    let inner_col = decl_col + open + 1;
    let (pos_s, tmpl_s) = match kind {
        OpKind::Delete => (inner.trim(), None),
        _ => {
            let cut = top_level_comma(inner).ok_or_else(|| perr(line, inner_col, "expected `position, template`"))?;
            (inner[..cut].trim(), Some((&inner[cut + 1..], inner_col + cut + 1)))
        }
    };
    let positions: Vec<&str> = match pos_s.strip_prefix("each[").and_then(|s| s.strip_suffix(']')) {
        Some(list) => list.split(',').map(str::trim).collect(),
        None => vec![pos_s],
    };
    let template = match tmpl_s {
        Some((t, col)) => {
            let lead = t.len() - t.trim_start().len();
            Some(Template::parse(t.trim()).map_err(|e| perr(line, col + lead + e.col - 1, e.msg))?)
        }
        None => None,
    };
    positions
        .iter()
        .enumerate()
        .map(|(k, ps)| {
            let pos = RulePosition::parse(ps).map_err(|_| perr(line, inner_col, format!("bad position `{ps}`")))?;
            Ok(match kind {
                OpKind::Replace => meta_replace(id + k, pos, template.clone().expect("template present")),
                OpKind::Insert => meta_insert(id + k, pos, template.clone().expect("template present")),
                _ => meta_delete(id + k, pos),
            })
        })
        .collect()
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut in_str = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '(' | '[' | '{' if !in_str => depth += 1,
            ')' | ']' | '}' if !in_str => depth -= 1,
            ',' if depth == 0 && !in_str => return Some(i),
            _ => {}
        }
    }
    None
}

const LAST_PROB: &str = include_str!("../../problems/last.prob");
const OOO_PROB: &str = include_str!("../../problems/ooo.prob");

/// Names accepted by [`bundled`].
pub fn bundled_names() -> Vec<String> {
    let mut names: Vec<String> = ["last", "ooo", "raven-fig11"].map(String::from).to_vec();
    names.extend(SERIES.iter().map(|s| format!("thurstone-{}", s.id)));
    names.extend(TransformKind::ALL.iter().map(|k| format!("transfer-{}", k.name())));
    names
}

/// Bundled problems: `last`, `ooo`, `raven-fig11`, `thurstone-N`, and
/// `transfer-KIND` (the 20-instance suite with the canonical operator order).
pub fn bundled(name: &str) -> Result<Problem, ProblemError> {
    let unknown = || ProblemError::UnknownBundled(name.into());
    match name {
        "last" => parse_problem(LAST_PROB),
        "ooo" => parse_problem(OOO_PROB),
        "raven-fig11" => Ok(raven_problem()),
        _ => {
            if let Some(n) = name.strip_prefix("thurstone-") {
                let id: usize = n.parse().map_err(|_| unknown())?;
                return thurstone_problem(id).ok_or_else(unknown);
            }
            if let Some(k) = name.strip_prefix("transfer-") {
                let kind = TransformKind::from_name(k).ok_or_else(unknown)?;
                let mut p = Problem::new(&format!("transfer-{}", kind.name()));
                p.pos = gen_transform_suite(kind, 20);
                p.ops = transfer_operators(None);
                return Ok(p);
            }
            Err(unknown())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_loads_with_table_counts() {
        let p = bundled("last").unwrap();
        assert_eq!((p.pos.len(), p.neg.len()), (8, 5));
        assert!(p.ops.len() >= 7);
    }

    #[test]
    fn selectors_expand_to_consecutive_ids() {
        let p =
            parse_problem("pos: f(\"ab\") -> b\nop 3 = replace(each[L1,Rt1], V_List)\nop 9 = one_step_rew\n").unwrap();
        let ids: Vec<usize> = p.ops.iter().map(|o| o.id).collect();
        assert_eq!(ids, vec![3, 4, 9]);
        assert_eq!(p.ops[1].to_string(), "replace(Rt1, V_List)");
    }

    #[test]
    fn errors_carry_locations() {
        match parse_problem("pos: f(a) -> b\npos: f(a -> b\n") {
            Err(ProblemError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_problem("pos: f(a) -> b\nop 1 = replace(Rt1, nosuch(@L1))\n"),
            Err(ProblemError::UnknownBk { line: 2, .. })
        ));
        assert!(matches!(
            parse_problem("pos: f(a) -> b\nop 1 = one_step_rew\nop 1 = delete(G1)\n"),
            Err(ProblemError::DuplicateOp { line: 3, id: 1 })
        ));
        assert!(matches!(parse_problem("# nothing\n"), Err(ProblemError::NoPositives)));
        assert!(matches!(parse_problem("pos: f(a) -> b\nwhat\n"), Err(ProblemError::Parse { line: 2, col: 1, .. })));
    }

    #[test]
    fn comments_respect_strings() {
        let p = parse_problem("pos: f(\"a#b\") -> b # trailing\n").unwrap();
        assert_eq!(p.pos[0].to_string(), "f([a,'#',b]) -> b");
    }
}
