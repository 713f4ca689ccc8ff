//! Meta-operators and their application to rules.

use std::fmt;

use crate::bk::Registry;
use crate::rewrite::{Background, EvalBudget, Evaluator};
use crate::syntax::{parse_template_term, print_term, ParseError};
use crate::term::{Root, Rule, RulePosition, Splice, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    Replace,
    Insert,
    Delete,
    OneStepRew,
}

/// A term whose `@pos` variables refer to subparts of the rule being
/// transformed. Other variables are inserted under their own name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Template(pub Term);

impl Template {
    pub fn parse(src: &str) -> Result<Template, ParseError> {
        parse_template_term(src).map(Template)
    }

    /// Resolves position references against `rule`; `None` if one is missing.
    pub fn instantiate(&self, rule: &Rule) -> Option<Term> {
        fill(&self.0, rule)
    }

    pub fn refs(&self) -> Vec<RulePosition> {
        let mut vars = Vec::new();
        self.0.vars_into(&mut vars);
        vars.iter().filter_map(|v| v.strip_prefix('@').and_then(|p| RulePosition::parse(p).ok())).collect()
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(&self.0))
    }
}

fn fill(t: &Term, rule: &Rule) -> Option<Term> {
    Some(match t {
        Term::Var(v) => match v.strip_prefix('@') {
            Some(p) => rule.term_at(&RulePosition::parse(p).ok()?)?.clone(),
            None => t.clone(),
        },
        Term::Atom(_) | Term::Int(_) | Term::Nil | Term::BkRef(_) => t.clone(),
        Term::Cons(h, tl) => Term::cons(fill(h, rule)?, fill(tl, rule)?),
        Term::Map(a, b) => Term::mapping(fill(a, rule)?, fill(b, rule)?),
        Term::Tuple(xs) => Term::Tuple(xs.iter().map(|x| fill(x, rule)).collect::<Option<_>>()?),
        Term::App(f, xs) => Term::App(f.clone(), xs.iter().map(|x| fill(x, rule)).collect::<Option<_>>()?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorDef {
    pub id: usize,
    pub kind: OpKind,
    pub pos: Option<RulePosition>,
    pub template: Option<Template>,
}

pub fn meta_replace(id: usize, pos: RulePosition, tmpl: Template) -> OperatorDef {
    OperatorDef { id, kind: OpKind::Replace, pos: Some(pos), template: Some(tmpl) }
}

pub fn meta_insert(id: usize, pos: RulePosition, tmpl: Template) -> OperatorDef {
    OperatorDef { id, kind: OpKind::Insert, pos: Some(pos), template: Some(tmpl) }
}

pub fn meta_delete(id: usize, pos: RulePosition) -> OperatorDef {
    OperatorDef { id, kind: OpKind::Delete, pos: Some(pos), template: None }
}

pub fn one_step_rew(id: usize) -> OperatorDef {
    OperatorDef { id, kind: OpKind::OneStepRew, pos: None, template: None }
}

impl fmt::Display for OperatorDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos = self.pos.as_ref().map(|p| p.to_string()).unwrap_or_default();
        let tmpl = self.template.as_ref().map(|t| t.to_string()).unwrap_or_default();
        match self.kind {
            OpKind::Replace => write!(f, "replace({pos}, {tmpl})"),
            OpKind::Insert => write!(f, "insert({pos}, {tmpl})"),
            OpKind::Delete => write!(f, "delete({pos})"),
            OpKind::OneStepRew => f.write_str("one_step_rew"),
        }
    }
}

/// Expands a multi-valued background call at the top of `t` (e.g. `nSust`).
fn expand_multi(t: Term, bg: &Background) -> Vec<Term> {
    if let Term::App(f, args) = &t {
        let reg = Registry::standard();
        if !bg.blocked.contains(f) && reg.get(f).is_some_and(|d| d.multi && d.arity == args.len()) {
            if let Ok(v) = reg.step(f, args) {
                return v;
            }
        }
    }
    vec![t]
}

/// Applies `op` to `rule`. Inapplicable operators give the empty set.
pub fn apply_operator(op: &OperatorDef, rule: &Rule, bg: &Background) -> Vec<Rule> {
    let mut out: Vec<Rule> = Vec::new();
    let mut push = |r: Rule| {
        if r.target() == rule.target() && !out.contains(&r) {
            out.push(r);
        }
    };
    match (op.kind, &op.pos, &op.template) {
        (OpKind::Replace | OpKind::Insert, Some(pos), Some(tmpl)) => {
            let Some(t) = tmpl.instantiate(rule) else { return Vec::new() };
            for v in expand_multi(t, bg) {
                let edit = if op.kind == OpKind::Replace { Splice::Replace(v) } else { Splice::Insert(v) };
                if let Ok(r) = rule.splice(pos, edit) {
                    push(r);
                }
            }
        }
        (OpKind::Delete, Some(pos), _) => {
            if let Ok(r) = rule.splice(pos, Splice::Delete) {
                push(r);
            }
        }
        (OpKind::OneStepRew, _, _) => {
            for r in one_step_rewrites(rule, bg) {
                push(r);
            }
        }
        _ => {}
    }
    out
}

/// Every rule obtained by rewriting one position of the Right component once.
pub fn one_step_rewrites(rule: &Rule, bg: &Background) -> Vec<Rule> {
    let mut ev = Evaluator::new(&[], bg, &[], EvalBudget::default());
    let mut out = Vec::new();
    for pos in rule.positions() {
        if pos.root != Root::Rt {
            continue;
        }
        let Some(t @ Term::App(..)) = rule.term_at(&pos) else { continue };
        ev.reset(None);
        for v in ev.step_root(t) {
            if let Ok(r) = rule.splice(&pos, Splice::Replace(v)) {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}
