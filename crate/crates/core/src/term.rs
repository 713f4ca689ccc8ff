//! Terms, rules, substitutions and position trees.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned-ish symbol. Cheap to clone, compared by content.
pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

/// The term algebra shared by examples, rules, templates and background values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Symbol),
    Atom(Symbol),
    Int(i64),
    Nil,
    Cons(Box<Term>, Box<Term>),
    Tuple(Vec<Term>),
    /// Application with at least one argument.
    App(Symbol, Vec<Term>),
    /// A first-class substitution value such as `b=>d`.
    Map(Box<Term>, Box<Term>),
    /// Reference to a background function by name.
    BkRef(Symbol),
}

pub type Subst = BTreeMap<Symbol, Term>;

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(sym(name))
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(sym(name))
    }

    /// Builds an application; a zero-argument application collapses to an atom.
    pub fn app(f: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::atom(f)
        } else {
            Term::App(sym(f), args)
        }
    }

    pub fn cons(h: Term, t: Term) -> Term {
        Term::Cons(Box::new(h), Box::new(t))
    }

    pub fn mapping(from: Term, to: Term) -> Term {
        Term::Map(Box::new(from), Box::new(to))
    }

    /// Proper list from elements.
    pub fn list<I>(items: I) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        Term::list_with_tail(items, Term::Nil)
    }

    pub fn list_with_tail<I>(items: I, tail: Term) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        items.into_iter().rev().fold(tail, |acc, x| Term::cons(x, acc))
    }

    /// A string as a list of single-character atoms.
    pub fn string(s: &str) -> Term {
        let chars: Vec<Term> = s.chars().map(|c| Term::Atom(sym(&c.to_string()))).collect();
        Term::list(chars)
    }

    pub fn is_list(&self) -> bool {
        matches!(self, Term::Nil | Term::Cons(..))
    }

    /// Elements of a proper (Nil-terminated) list.
    pub fn as_list(&self) -> Option<Vec<&Term>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::Nil => return Some(out),
                Term::Cons(h, t) => {
                    out.push(h.as_ref());
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    /// Owned elements of a proper list.
    pub fn to_vec(&self) -> Option<Vec<Term>> {
        self.as_list().map(|v| v.into_iter().cloned().collect())
    }

    /// The characters of a list of single-character atoms.
    pub fn as_string(&self) -> Option<String> {
        let items = self.as_list()?;
        let mut s = String::new();
        for it in items {
            match it {
                Term::Atom(a) if a.chars().count() == 1 => s.push_str(a),
                _ => return None,
            }
        }
        Some(s)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Int(_) | Term::Nil | Term::BkRef(_) => true,
            Term::Cons(h, t) | Term::Map(h, t) => h.is_ground() && t.is_ground(),
            Term::Tuple(xs) | Term::App(_, xs) => xs.iter().all(Term::is_ground),
        }
    }

    /// Children in position-tree order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Cons(h, t) | Term::Map(h, t) => vec![h.as_ref(), t.as_ref()],
            Term::Tuple(xs) | Term::App(_, xs) => xs.iter().collect(),
            _ => Vec::new(),
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Term> {
        match self {
            Term::Cons(h, t) | Term::Map(h, t) => match i {
                1 => Some(h.as_mut()),
                2 => Some(t.as_mut()),
                _ => None,
            },
            Term::Tuple(xs) | Term::App(_, xs) => {
                if i >= 1 {
                    xs.get_mut(i - 1)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            if i == 0 {
                return None;
            }
            cur = *cur.children().get(i - 1)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        let mut cur = self;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// Relative paths of all subterms, preorder, the root included as `[]`.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_paths(&mut prefix, &mut out);
        out
    }

    fn collect_paths(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for (i, c) in self.children().into_iter().enumerate() {
            prefix.push(i + 1);
            c.collect_paths(prefix, out);
            prefix.pop();
        }
    }

    pub fn apply(&self, theta: &Subst) -> Term {
        match self {
            Term::Var(v) => theta.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Atom(_) | Term::Int(_) | Term::Nil | Term::BkRef(_) => self.clone(),
            Term::Cons(h, t) => Term::cons(h.apply(theta), t.apply(theta)),
            Term::Map(h, t) => Term::mapping(h.apply(theta), t.apply(theta)),
            Term::Tuple(xs) => Term::Tuple(xs.iter().map(|x| x.apply(theta)).collect()),
            Term::App(f, xs) => Term::App(f.clone(), xs.iter().map(|x| x.apply(theta)).collect()),
        }
    }

    pub fn vars_into(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Cons(h, t) | Term::Map(h, t) => {
                h.vars_into(out);
                t.vars_into(out);
            }
            Term::Tuple(xs) | Term::App(_, xs) => xs.iter().for_each(|x| x.vars_into(out)),
            _ => {}
        }
    }

    pub fn rename(&self, f: &impl Fn(&Symbol) -> Symbol) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Atom(_) | Term::Int(_) | Term::Nil | Term::BkRef(_) => self.clone(),
            Term::Cons(h, t) => Term::cons(h.rename(f), t.rename(f)),
            Term::Map(h, t) => Term::mapping(h.rename(f), t.rename(f)),
            Term::Tuple(xs) => Term::Tuple(xs.iter().map(|x| x.rename(f)).collect()),
            Term::App(g, xs) => Term::App(g.clone(), xs.iter().map(|x| x.rename(f)).collect()),
        }
    }

    /// True if `f` occurs as an application functor anywhere inside.
    pub fn mentions_functor(&self, f: &str) -> bool {
        match self {
            Term::App(g, xs) => g.as_ref() == f || xs.iter().any(|x| x.mentions_functor(f)),
            Term::Cons(h, t) | Term::Map(h, t) => h.mentions_functor(f) || t.mentions_functor(f),
            Term::Tuple(xs) => xs.iter().any(|x| x.mentions_functor(f)),
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn functor(&self) -> Option<&Symbol> {
        match self {
            Term::App(f, _) => Some(f),
            _ => None,
        }
    }
}

/// One-way matching: finds θ with `pattern·θ == subject`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Subst> {
    let mut theta = Subst::new();
    if match_into(pattern, subject, &mut theta) {
        Some(theta)
    } else {
        None
    }
}

/// Extends `theta` in place; on failure `theta` may hold partial bindings.
pub fn match_into(pattern: &Term, subject: &Term, theta: &mut Subst) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match theta.get(v) {
            Some(bound) => bound == subject,
            None => {
                theta.insert(v.clone(), subject.clone());
                true
            }
        },
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Int(a), Term::Int(b)) => a == b,
        (Term::Nil, Term::Nil) => true,
        (Term::BkRef(a), Term::BkRef(b)) => a == b,
        (Term::Cons(ph, pt), Term::Cons(sh, st)) | (Term::Map(ph, pt), Term::Map(sh, st)) => {
            match_into(ph, sh, theta) && match_into(pt, st, theta)
        }
        (Term::Tuple(ps), Term::Tuple(ss)) => {
            ps.len() == ss.len() && ps.iter().zip(ss).all(|(p, s)| match_into(p, s, theta))
        }
        (Term::App(f, ps), Term::App(g, ss)) => {
            f == g && ps.len() == ss.len() && ps.iter().zip(ss).all(|(p, s)| match_into(p, s, theta))
        }
        _ => false,
    }
}

/// A body element: an equation `l = r` or a bare expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyItem {
    Eq(Term, Term),
    Expr(Term),
}

impl BodyItem {
    fn terms(&self) -> Vec<&Term> {
        match self {
            BodyItem::Eq(l, r) => vec![l, r],
            BodyItem::Expr(t) => vec![t],
        }
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> BodyItem {
        match self {
            BodyItem::Eq(l, r) => BodyItem::Eq(f(l), f(r)),
            BodyItem::Expr(t) => BodyItem::Expr(f(t)),
        }
    }
}

/// Conditional rewrite rule `lhs when guards -> body, rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: Term,
    pub guards: Vec<Term>,
    pub body: Vec<BodyItem>,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Rule {
        Rule { lhs, guards: Vec::new(), body: Vec::new(), rhs }
    }

    pub fn with_guards(mut self, guards: Vec<Term>) -> Rule {
        self.guards = guards;
        self
    }

    pub fn target(&self) -> Option<&Symbol> {
        self.lhs.functor()
    }

    pub fn is_example(&self) -> bool {
        self.guards.is_empty() && self.body.is_empty() && self.lhs.is_ground() && self.rhs.is_ground()
    }

    /// All terms of the rule in position-tree order.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = vec![&self.lhs];
        out.extend(self.guards.iter());
        for b in &self.body {
            out.extend(b.terms());
        }
        out.push(&self.rhs);
        out
    }

    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for t in self.terms() {
            t.vars_into(&mut out);
        }
        out
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Rule {
        Rule {
            lhs: f(&self.lhs),
            guards: self.guards.iter().map(&f).collect(),
            body: self.body.iter().map(|b| b.map_terms(&f)).collect(),
            rhs: f(&self.rhs),
        }
    }

    pub fn is_recursive(&self) -> bool {
        let Some(f) = self.target() else { return false };
        self.body.iter().any(|b| b.terms().iter().any(|t| t.mentions_functor(f))) || self.rhs.mentions_functor(f)
    }

    pub fn rename_apart(&self, salt: u64) -> Rule {
        self.map_terms(|t| t.rename(&|v: &Symbol| sym(&format!("{v}_{salt}"))))
    }

    /// Variables renamed to `_0, _1, ...` in order of first occurrence.
    pub fn canonical(&self) -> Rule {
        let vars = self.vars();
        if vars.is_empty() {
            return self.clone();
        }
        let table: BTreeMap<Symbol, Symbol> =
            vars.iter().enumerate().map(|(i, v)| (v.clone(), sym(&format!("_{i}")))).collect();
        self.map_terms(|t| t.rename(&|v: &Symbol| table[v].clone()))
    }

    pub fn positions(&self) -> Vec<RulePosition> {
        let mut out = Vec::new();
        for p in self.lhs.paths() {
            out.push(RulePosition::new(Root::L, p));
        }
        out.push(RulePosition::new(Root::G, vec![]));
        for (i, g) in self.guards.iter().enumerate() {
            for p in g.paths() {
                out.push(RulePosition::new(Root::G, prefixed(i + 1, p)));
            }
        }
        out.push(RulePosition::new(Root::Rt, vec![]));
        for (i, b) in self.body.iter().enumerate() {
            match b {
                BodyItem::Expr(t) => {
                    for p in t.paths() {
                        out.push(RulePosition::new(Root::Rt, prefixed(i + 1, p)));
                    }
                }
                BodyItem::Eq(l, r) => {
                    out.push(RulePosition::new(Root::Rt, vec![i + 1]));
                    for (j, side) in [l, r].into_iter().enumerate() {
                        for p in side.paths() {
                            let mut full = vec![i + 1, j + 1];
                            full.extend(p);
                            out.push(RulePosition::new(Root::Rt, full));
                        }
                    }
                }
            }
        }
        let k = self.body.len() + 1;
        for p in self.rhs.paths() {
            out.push(RulePosition::new(Root::Rt, prefixed(k, p)));
        }
        out
    }

    pub fn subpart(&self, pos: &RulePosition) -> Result<Subpart<'_>, PositionError> {
        let bad = || PositionError::Invalid(pos.to_string());
        match pos.root {
            Root::L => self.lhs.at(&pos.path).map(Subpart::Term).ok_or_else(bad),
            Root::G => match pos.path.split_first() {
                None => Ok(Subpart::Guards(&self.guards)),
                Some((&i, rest)) => {
                    let g = self.guards.get(i.wrapping_sub(1)).ok_or_else(bad)?;
                    g.at(rest).map(Subpart::Term).ok_or_else(bad)
                }
            },
            Root::Rt => match pos.path.split_first() {
                None => Ok(Subpart::Right),
                Some((&i, rest)) => {
                    let k = self.body.len() + 1;
                    if i == k {
                        self.rhs.at(rest).map(Subpart::Term).ok_or_else(bad)
                    } else if i >= 1 && i < k {
                        match &self.body[i - 1] {
                            BodyItem::Expr(t) => t.at(rest).map(Subpart::Term).ok_or_else(bad),
                            BodyItem::Eq(l, r) => match rest.split_first() {
                                None => Ok(Subpart::Equation(l, r)),
                                Some((&1, r2)) => l.at(r2).map(Subpart::Term).ok_or_else(bad),
                                Some((&2, r2)) => r.at(r2).map(Subpart::Term).ok_or_else(bad),
                                _ => Err(bad()),
                            },
                        }
                    } else {
                        Err(bad())
                    }
                }
            },
        }
    }

    /// The term at `pos`, if `pos` addresses a term node.
    pub fn term_at(&self, pos: &RulePosition) -> Option<&Term> {
        match self.subpart(pos) {
            Ok(Subpart::Term(t)) => Some(t),
            _ => None,
        }
    }

    pub fn splice(&self, pos: &RulePosition, edit: Splice) -> Result<Rule, PositionError> {
        let bad = || PositionError::Invalid(pos.to_string());
        let mut out = self.clone();
        match edit {
            Splice::Replace(t) => {
                let slot = out.term_slot_mut(pos).ok_or_else(bad)?;
                *slot = t;
                if !matches!(out.lhs, Term::App(..)) {
                    return Err(PositionError::BadLhs);
                }
                Ok(out)
            }
            Splice::Insert(t) => {
                match (pos.root, pos.path.as_slice()) {
                    (Root::G, [i]) if *i >= 1 && *i <= out.guards.len() + 1 => {
                        out.guards.insert(i - 1, t);
                    }
                    (Root::Rt, [i]) if *i >= 1 && *i <= out.body.len() + 1 => {
                        out.body.insert(i - 1, BodyItem::Expr(t));
                    }
                    (_, []) => return Err(bad()),
                    (_, path) => {
                        let (last, parent) = path.split_last().expect("non-empty");
                        let parent_pos = RulePosition::new(pos.root, parent.to_vec());
                        let slot = out.term_slot_mut(&parent_pos).ok_or_else(bad)?;
                        match slot {
                            Term::App(_, xs) | Term::Tuple(xs) if *last >= 1 && *last <= xs.len() + 1 => {
                                xs.insert(last - 1, t);
                            }
                            _ => return Err(bad()),
                        }
                    }
                }
                Ok(out)
            }
            Splice::Delete => match (pos.root, pos.path.as_slice()) {
                (Root::G, [i]) if *i >= 1 && *i <= out.guards.len() => {
                    out.guards.remove(i - 1);
                    Ok(out)
                }
                (Root::Rt, [i]) if *i >= 1 && *i <= out.body.len() => {
                    out.body.remove(i - 1);
                    Ok(out)
                }
                _ => {
                    self.subpart(pos)?;
                    Err(PositionError::Structural(pos.to_string()))
                }
            },
        }
    }

    fn term_slot_mut(&mut self, pos: &RulePosition) -> Option<&mut Term> {
        match pos.root {
            Root::L => self.lhs.at_mut(&pos.path),
            Root::G => {
                let (&i, rest) = pos.path.split_first()?;
                self.guards.get_mut(i.checked_sub(1)?)?.at_mut(rest)
            }
            Root::Rt => {
                let (&i, rest) = pos.path.split_first()?;
                let k = self.body.len() + 1;
                if i == k {
                    self.rhs.at_mut(rest)
                } else if i >= 1 && i < k {
                    match &mut self.body[i - 1] {
                        BodyItem::Expr(t) => t.at_mut(rest),
                        BodyItem::Eq(l, r) => {
                            let (&j, r2) = rest.split_first()?;
                            match j {
                                1 => l.at_mut(r2),
                                2 => r.at_mut(r2),
                                _ => None,
                            }
                        }
                    }
                } else {
                    None
                }
            }
        }
    }
}

fn prefixed(i: usize, mut p: Vec<usize>) -> Vec<usize> {
    p.insert(0, i);
    p
}

/// What a position addresses.
#[derive(Debug, Clone, PartialEq)]
pub enum Subpart<'a> {
    Term(&'a Term),
    Guards(&'a [Term]),
    Right,
    Equation(&'a Term, &'a Term),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Splice {
    Replace(Term),
    Insert(Term),
    Delete,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionError {
    #[error("invalid position {0}")]
    Invalid(String),
    #[error("cannot delete structural position {0}")]
    Structural(String),
    #[error("lhs must remain an application")]
    BadLhs,
    #[error("malformed position `{0}`")]
    Syntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    L,
    G,
    Rt,
}

/// Address in a rule's position tree, e.g. `L1.2` or `Rt1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RulePosition {
    pub root: Root,
    pub path: Vec<usize>,
}

impl RulePosition {
    pub fn new(root: Root, path: Vec<usize>) -> Self {
        RulePosition { root, path }
    }

    pub fn parse(s: &str) -> Result<Self, PositionError> {
        let err = || PositionError::Syntax(s.to_string());
        let s = s.trim();
        let (root, rest) = if let Some(r) = s.strip_prefix("Rt") {
            (Root::Rt, r)
        } else if let Some(r) = s.strip_prefix('L') {
            (Root::L, r)
        } else if let Some(r) = s.strip_prefix('G') {
            (Root::G, r)
        } else {
            return Err(err());
        };
        let path = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split('.')
                .map(|n| match n.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(err()),
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(RulePosition { root, path })
    }
}

impl fmt::Display for RulePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.root {
            Root::L => "L",
            Root::G => "G",
            Root::Rt => "Rt",
        };
        f.write_str(r)?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_rule, parse_term};

    fn r(s: &str) -> Rule {
        parse_rule(s).unwrap()
    }
    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }
    fn p(s: &str) -> RulePosition {
        RulePosition::parse(s).unwrap()
    }

    #[test]
    fn match_binds_list_pattern() {
        let theta = match_term(&t("[X|Y]"), &t("[a,b,c]")).unwrap();
        assert_eq!(theta[&sym("X")], t("a"));
        assert_eq!(theta[&sym("Y")], t("[b,c]"));
        assert!(match_term(&t("f(a)"), &t("f(b)")).is_none());
        assert_eq!(match_term(&t("X"), &t("f(a)")).unwrap()[&sym("X")], t("f(a)"));
    }

    #[test]
    fn nonlinear_patterns_need_equal_bindings() {
        assert!(match_term(&t("f(X,X)"), &t("f(a,a)")).is_some());
        assert!(match_term(&t("f(X,X)"), &t("f(a,b)")).is_none());
    }

    #[test]
    fn positions_of_small_rule() {
        let got: Vec<String> = r("f(a) -> b").positions().iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["L", "L1", "G", "Rt", "Rt1"]);
    }

    #[test]
    fn member_subparts() {
        let rule = r("member([X|Y],Z) when true -> member(Y,Z)");
        assert_eq!(rule.term_at(&p("L1")), Some(&t("[X|Y]")));
        assert_eq!(rule.term_at(&p("Rt1.2")), Some(&t("Z")));
        assert_eq!(rule.term_at(&p("G1")), Some(&t("true")));
    }

    #[test]
    fn last_subparts_follow_cons_cells() {
        let rule = r("last([a,b,a,c]) -> c");
        assert_eq!(rule.term_at(&p("L1.1")), Some(&t("a")));
        assert_eq!(rule.term_at(&p("L1.2")), Some(&t("[b,a,c]")));
        assert!(rule.subpart(&p("L1.9")).is_err());
    }

    #[test]
    fn splice_examples() {
        let rule = r("f(a) -> b");
        let ins = rule.splice(&p("Rt1"), Splice::Insert(t("c"))).unwrap();
        assert_eq!(ins, r("f(a) -> c, b"));
        let rep = rule.splice(&p("Rt1"), Splice::Replace(t("c"))).unwrap();
        assert_eq!(rep, r("f(a) -> c"));
        let g = r("f(X) when gt(X,0) -> X");
        assert_eq!(g.splice(&p("G1"), Splice::Delete).unwrap(), r("f(X) -> X"));
        assert!(matches!(rule.splice(&p("Rt1"), Splice::Delete), Err(PositionError::Structural(_))));
    }

    #[test]
    fn insert_into_argument_list() {
        let rule = r("f(a,b) -> b");
        let out = rule.splice(&p("L2"), Splice::Insert(t("z"))).unwrap();
        assert_eq!(out, r("f(a,z,b) -> b"));
        assert!(rule.splice(&p("L1.1"), Splice::Insert(t("z"))).is_err());
    }

    #[test]
    fn body_equation_delete() {
        let rule = r("f(X) -> Y = g(X), Z = h(Y), Z");
        let out = rule.splice(&p("Rt1"), Splice::Delete).unwrap();
        assert_eq!(out.body.len(), 1);
        assert_eq!(out.term_at(&p("Rt1.1")), Some(&t("Z")));
    }

    #[test]
    fn recursion_detection() {
        assert!(r("last([a,b,a,c]) -> last([b,a,c])").is_recursive());
        assert!(!r("last([c]) -> c").is_recursive());
        assert!(r("f(X) -> g(f(X))").is_recursive());
    }

    #[test]
    fn rename_apart_uses_salt() {
        assert_eq!(r("f(X) -> X").rename_apart(1), r("f(X_1) -> X_1"));
        assert_eq!(r("f(X) -> g(Y)").rename_apart(2), r("f(X_2) -> g(Y_2)"));
        assert_eq!(r("f(a) -> b").rename_apart(9), r("f(a) -> b"));
    }

    #[test]
    fn canonical_identifies_alpha_variants() {
        assert_eq!(r("f(X,Y) -> g(Y)").canonical(), r("f(A,B) -> g(B)").canonical());
        assert_ne!(r("f(X,Y) -> g(Y)").canonical(), r("f(A,B) -> g(A)").canonical());
    }

    #[test]
    fn position_text_round_trip() {
        for s in ["L", "L1.2.1", "G3", "Rt", "Rt1.1"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!(RulePosition::parse("X1").is_err());
        assert!(RulePosition::parse("L0").is_err());
    }
}
