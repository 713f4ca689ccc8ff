//! Bounded innermost-leftmost normalization and extensional coverage.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::bk::Registry;
use crate::term::{match_into, BodyItem, Rule, Subst, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_rewrite_steps: usize,
    pub max_term_depth: usize,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget { max_rewrite_steps: 100, max_term_depth: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("rewrite budget exceeded")]
pub struct BudgetExceeded;

/// Rule-form background knowledge plus the functors the built-in registry
/// must not evaluate (the functions being learned).
#[derive(Clone, Debug, Default)]
pub struct Background {
    pub k: Vec<Rule>,
    pub blocked: BTreeSet<Symbol>,
}

impl Background {
    pub fn new(k: Vec<Rule>, blocked: impl IntoIterator<Item = Symbol>) -> Self {
        Background { k, blocked: blocked.into_iter().collect() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered_pos: Vec<usize>,
    pub covered_neg: Vec<usize>,
    pub budget_hits: usize,
}

impl CoverageReport {
    pub fn pos(&self) -> usize {
        self.covered_pos.len()
    }
    pub fn neg(&self) -> usize {
        self.covered_neg.len()
    }
}

/// Orders program rules so that more specific left-hand sides are tried
/// first; ties keep the given order.
pub fn specificity_order<'a>(rules: &[&'a Rule]) -> Vec<&'a Rule> {
    let mut keyed: Vec<(usize, usize, usize, &Rule)> =
        rules.iter().enumerate().map(|(i, r)| (nonvar_nodes(&r.lhs), r.guards.len(), i, *r)).collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    keyed.into_iter().map(|k| k.3).collect()
}

fn nonvar_nodes(t: &Term) -> usize {
    match t {
        Term::Var(_) => 0,
        _ => 1 + t.children().into_iter().map(nonvar_nodes).sum::<usize>(),
    }
}

/// Base facts indexed by their ground left-hand side.
struct BaseIndex<'a> {
    by_lhs: HashMap<&'a Term, Vec<(usize, &'a Term)>>,
}

impl<'a> BaseIndex<'a> {
    fn new(base: &'a [Rule]) -> Self {
        let mut by_lhs: HashMap<&Term, Vec<(usize, &Term)>> = HashMap::new();
        for (i, e) in base.iter().enumerate() {
            by_lhs.entry(&e.lhs).or_default().push((i, &e.rhs));
        }
        BaseIndex { by_lhs }
    }

    fn lookup(&self, t: &Term, excluded: Option<usize>) -> Option<&'a Term> {
        self.by_lhs.get(t)?.iter().find(|(i, _)| Some(*i) != excluded).map(|(_, r)| *r)
    }
}

/// A rewriting context: ordered rules, base facts and the registry.
pub struct Evaluator<'a> {
    rules: HashMap<&'a str, Vec<&'a Rule>>,
    base: BaseIndex<'a>,
    excluded: Option<usize>,
    blocked: &'a BTreeSet<Symbol>,
    reg: &'a Registry,
    budget: EvalBudget,
    steps: usize,
}

impl<'a> Evaluator<'a> {
    /// Program rules come first (already ordered by the caller), then K.
    pub fn new(prog: &[&'a Rule], bg: &'a Background, base: &'a [Rule], budget: EvalBudget) -> Self {
        let mut rules: HashMap<&str, Vec<&Rule>> = HashMap::new();
        for r in specificity_order(prog).into_iter().chain(bg.k.iter()) {
            if let Some(f) = r.target() {
                rules.entry(f.as_ref()).or_default().push(r);
            }
        }
        Evaluator {
            rules,
            base: BaseIndex::new(base),
            excluded: None,
            blocked: &bg.blocked,
            reg: Registry::standard(),
            budget,
            steps: 0,
        }
    }

    /// Hides base fact `i` and resets the step counter.
    pub fn reset(&mut self, excluded: Option<usize>) {
        self.excluded = excluded;
        self.steps = 0;
    }

    pub fn normal_form(&mut self, t: &Term) -> Result<Term, BudgetExceeded> {
        self.norm(t, 0)
    }

    fn norm(&mut self, t: &Term, depth: usize) -> Result<Term, BudgetExceeded> {
        if depth > self.budget.max_term_depth {
            return Err(BudgetExceeded);
        }
        match t {
            Term::Var(_) | Term::Atom(_) | Term::Int(_) | Term::Nil | Term::BkRef(_) => Ok(t.clone()),
            Term::Cons(h, tl) => Ok(Term::cons(self.norm(h, depth + 1)?, self.norm(tl, depth + 1)?)),
            Term::Map(a, b) => Ok(Term::mapping(self.norm(a, depth + 1)?, self.norm(b, depth + 1)?)),
            Term::Tuple(xs) => Ok(Term::Tuple(xs.iter().map(|x| self.norm(x, depth + 1)).collect::<Result<_, _>>()?)),
            Term::App(f, xs) => {
                let args: Vec<Term> = xs.iter().map(|x| self.norm(x, depth + 1)).collect::<Result<_, _>>()?;
                let redex = Term::App(f.clone(), args);
                match self.reduce(&redex, depth)? {
                    Some(next) => {
                        self.steps += 1;
                        if self.steps > self.budget.max_rewrite_steps {
                            return Err(BudgetExceeded);
                        }
                        self.norm(&next, depth + 1)
                    }
                    None => Ok(redex),
                }
            }
        }
    }

    /// One rewrite at the root of an application whose arguments are normal.
    fn reduce(&mut self, redex: &Term, depth: usize) -> Result<Option<Term>, BudgetExceeded> {
        let Term::App(f, args) = redex else { return Ok(None) };
        if let Some(r) = self.base.lookup(redex, self.excluded) {
            return Ok(Some(r.clone()));
        }
        let candidates = self.rules.get(f.as_ref()).cloned().unwrap_or_default();
        for rule in candidates {
            let mut theta = Subst::new();
            if !match_into(&rule.lhs, redex, &mut theta) {
                continue;
            }
            if let Some(theta) = self.fire(rule, theta, depth)? {
                return Ok(Some(rule.rhs.apply(&theta)));
            }
        }
        if !self.blocked.contains(f) {
            if let Some(def) = self.reg.get(f) {
                if def.arity == args.len() {
                    if let Ok(mut out) = self.reg.eval(f, args) {
                        return Ok(Some(out.swap_remove(0)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// All results of a single rewrite step at the root of `t`, without
    /// normalizing its arguments first. Background functions use their
    /// unfolding step, which may be multi-valued.
    pub fn step_root(&mut self, t: &Term) -> Vec<Term> {
        let Term::App(f, args) = t else { return Vec::new() };
        if let Some(r) = self.base.lookup(t, self.excluded) {
            return vec![r.clone()];
        }
        let candidates = self.rules.get(f.as_ref()).cloned().unwrap_or_default();
        for rule in candidates {
            let mut theta = Subst::new();
            if match_into(&rule.lhs, t, &mut theta) {
                if let Ok(Some(theta)) = self.fire(rule, theta, 0) {
                    return vec![rule.rhs.apply(&theta)];
                }
            }
        }
        if !self.blocked.contains(f) && self.reg.get(f).is_some_and(|d| d.arity == args.len()) {
            return self.reg.step(f, args).unwrap_or_default();
        }
        Vec::new()
    }

    /// Checks guards and solves body equations; `None` if the rule does not apply.
    fn fire(&mut self, rule: &Rule, mut theta: Subst, depth: usize) -> Result<Option<Subst>, BudgetExceeded> {
        for g in &rule.guards {
            if !self.guard_holds(&g.apply(&theta), depth)? {
                return Ok(None);
            }
        }
        for item in &rule.body {
            match item {
                BodyItem::Eq(l, r) => {
                    let v = self.norm(&l.apply(&theta), depth + 1)?;
                    let pattern = self.norm(&r.apply(&theta), depth + 1)?;
                    if !match_into(&pattern, &v, &mut theta) {
                        return Ok(None);
                    }
                }
                BodyItem::Expr(e) => {
                    self.norm(&e.apply(&theta), depth + 1)?;
                }
            }
        }
        Ok(Some(theta))
    }

    fn guard_holds(&mut self, g: &Term, depth: usize) -> Result<bool, BudgetExceeded> {
        let v = self.norm(g, depth + 1)?;
        Ok(matches!(&v, Term::Atom(a) if a.as_ref() == "true"))
    }
}

/// Evaluates guards under `theta` with K and the registry only.
pub fn eval_guards(guards: &[Term], theta: &Subst, bg: &Background, budget: EvalBudget) -> bool {
    let mut ev = Evaluator::new(&[], bg, &[], budget);
    guards.iter().all(|g| ev.guard_holds(&g.apply(theta), 0).unwrap_or(false))
}

pub fn normal_form(t: &Term, prog: &[&Rule], bg: &Background, budget: EvalBudget) -> Result<Term, BudgetExceeded> {
    Evaluator::new(prog, bg, &[], budget).normal_form(t)
}

fn covers_with(ev: &mut Evaluator<'_>, e: &Rule, excluded: Option<usize>) -> Result<bool, BudgetExceeded> {
    ev.reset(excluded);
    let l = ev.normal_form(&e.lhs)?;
    ev.reset(excluded);
    let r = ev.normal_form(&e.rhs)?;
    Ok(l == r)
}

/// Extensional coverage of `e`, with `base` as extra base-case facts.
pub fn covers(prog: &[&Rule], bg: &Background, base: &[Rule], e: &Rule, budget: EvalBudget) -> bool {
    let mut ev = Evaluator::new(prog, bg, base, budget);
    covers_with(&mut ev, e, None).unwrap_or(false)
}

/// Cov⁺ uses `E⁺ ∖ e` as base for each positive, Cov⁻ the full `E⁺`.
pub fn coverage_counts(
    prog: &[&Rule],
    pos: &[Rule],
    neg: &[Rule],
    bg: &Background,
    budget: EvalBudget,
) -> CoverageReport {
    let mut ev = Evaluator::new(prog, bg, pos, budget);
    let mut report = CoverageReport::default();
    for (i, e) in pos.iter().enumerate() {
        match covers_with(&mut ev, e, Some(i)) {
            Ok(true) => report.covered_pos.push(i),
            Ok(false) => {}
            Err(BudgetExceeded) => report.budget_hits += 1,
        }
    }
    for (i, e) in neg.iter().enumerate() {
        match covers_with(&mut ev, e, None) {
            Ok(true) => report.covered_neg.push(i),
            Ok(false) => {}
            Err(BudgetExceeded) => report.budget_hits += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_rule, parse_term};
    use crate::term::sym;

    fn r(s: &str) -> Rule {
        parse_rule(s).unwrap()
    }
    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }
    fn bg_for(target: &str) -> Background {
        Background::new(vec![], [sym(target)])
    }

    fn table1_pos() -> Vec<Rule> {
        [
            "last(\"c\") -> c",
            "last(\"d\") -> d",
            "last(\"l\") -> l",
            "last(\"abc\") -> c",
            "last(\"tbnab\") -> b",
            "last(\"hhtal\") -> l",
            "last(\"acb\") -> b",
            "last(\"abac\") -> c",
        ]
        .iter()
        .map(|s| r(s))
        .collect()
    }

    #[test]
    fn background_evaluation() {
        let bg = Background::default();
        let b = EvalBudget::default();
        assert_eq!(normal_form(&t("last(init(\"cdcdc\"))"), &[], &bg, b).unwrap(), t("d"));
        assert_eq!(normal_form(&t("c"), &[], &bg, b).unwrap(), t("c"));
        assert_eq!(normal_form(&t("head([])"), &[], &bg, b).unwrap(), t("head([])"));
    }

    #[test]
    fn self_loop_exhausts_budget() {
        let loopy = r("f(X) -> f(X)");
        let out = normal_form(&t("f(a)"), &[&loopy], &Background::default(), EvalBudget::default());
        assert_eq!(out, Err(BudgetExceeded));
    }

    #[test]
    fn guards() {
        let bg = Background::default();
        let b = EvalBudget::default();
        let g = vec![t("eq(mod(length(V),3),0)")];
        let mut theta = Subst::new();
        theta.insert(sym("V"), t("\"mab\""));
        assert!(eval_guards(&g, &theta, &bg, b));
        theta.insert(sym("V"), t("\"ma\""));
        assert!(!eval_guards(&g, &theta, &bg, b));
        assert!(eval_guards(&[t("true")], &Subst::new(), &bg, b));
        assert!(!eval_guards(&[t("f(a)")], &Subst::new(), &bg, b));
    }

    #[test]
    fn recursive_last_covers_extensionally() {
        let pos = table1_pos();
        let rec = r("last([H|T]) -> last(T)");
        let unit = r("last([H]) -> H");
        let e = r("last(\"abc\") -> c");
        let base: Vec<Rule> = pos.iter().filter(|x| **x != e).cloned().collect();
        let bg = bg_for("last");
        assert!(covers(&[&rec, &unit], &bg, &base, &e, EvalBudget::default()));
        assert!(covers(&[&unit, &rec], &bg, &base, &e, EvalBudget::default()));
        let wrong = r("last(V) -> head(V)");
        assert!(!covers(&[&wrong], &bg, &base, &e, EvalBudget::default()));
        assert!(covers(&[&e], &bg, &[], &e, EvalBudget::default()));
    }

    #[test]
    fn counts_match_per_example_loop() {
        let pos = table1_pos();
        let neg: Vec<Rule> =
            ["last(\"c\") -> b", "last(\"b\") -> l", "last(\"abc\") -> a"].iter().map(|s| r(s)).collect();
        let rec = r("last([H|T]) -> last(T)");
        let bg = bg_for("last");
        let b = EvalBudget::default();
        let rep = coverage_counts(&[&rec], &pos, &neg, &bg, b);
        let brute: Vec<usize> = (0..pos.len())
            .filter(|&i| {
                let base: Vec<Rule> = pos.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
                covers(&[&rec], &bg, &base, &pos[i], b)
            })
            .collect();
        assert_eq!(rep.covered_pos, brute);
        assert_eq!(rep.neg(), 0);
        let all: Vec<&Rule> = pos.iter().collect();
        assert_eq!(coverage_counts(&all, &pos, &neg, &bg, b).pos(), pos.len());
    }

    #[test]
    fn blocked_target_is_not_evaluated_by_registry() {
        let e = r("last(\"abc\") -> c");
        assert!(!covers(&[], &bg_for("last"), &[], &e, EvalBudget::default()));
        assert!(covers(&[], &Background::default(), &[], &e, EvalBudget::default()));
    }
}
