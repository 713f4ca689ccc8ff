//! Background functions available to guards, templates and rewriting.

mod lists;
mod ooo;
pub mod raven;
mod transform;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::term::Term;

pub use ooo::{distinct, ooo_score, OooScore};
pub use transform::{affix, list_diffs, Affix, DiffKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BkError {
    #[error("unknown background function `{0}`")]
    Unknown(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T, BkError> {
    Err(BkError::Domain(msg.into()))
}

pub type BkResult = Result<Vec<Term>, BkError>;
type EvalFn = fn(&Registry, &[Term]) -> BkResult;

#[derive(Clone, Copy)]
pub struct BkFn {
    pub arity: usize,
    eval: EvalFn,
    step: Option<EvalFn>,
    /// Multi-valued functions are expanded when an operator template is instantiated.
    pub multi: bool,
}

/// Name to evaluator table.
pub struct Registry {
    fns: BTreeMap<&'static str, BkFn>,
}

impl Registry {
    fn insert(&mut self, name: &'static str, arity: usize, eval: EvalFn) {
        self.fns.insert(name, BkFn { arity, eval, step: None, multi: false });
    }

    fn insert_stepped(&mut self, name: &'static str, arity: usize, eval: EvalFn, step: EvalFn, multi: bool) {
        self.fns.insert(name, BkFn { arity, eval, step: Some(step), multi });
    }

    /// The fixed build-time registry.
    pub fn standard() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| {
            let mut r = Registry { fns: BTreeMap::new() };
            lists::register(&mut r);
            transform::register(&mut r);
            ooo::register(&mut r);
            raven::register(&mut r);
            r
        })
    }

    pub fn get(&self, name: &str) -> Option<&BkFn> {
        self.fns.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.fns.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.fns.keys().copied()
    }

    fn lookup(&self, name: &str, args: &[Term]) -> Result<&BkFn, BkError> {
        let f = self.get(name).ok_or_else(|| BkError::Unknown(name.to_string()))?;
        if f.arity != args.len() {
            return Err(BkError::Arity { name: name.to_string(), expected: f.arity, got: args.len() });
        }
        Ok(f)
    }

    /// Full evaluation; the result list is never empty.
    pub fn eval(&self, name: &str, args: &[Term]) -> BkResult {
        let f = self.lookup(name, args)?;
        (f.eval)(self, args)
    }

    /// A single rewriting step. Differs from [`Registry::eval`] only for
    /// functions that unfold into an intermediate term (e.g. `oneSust`).
    pub fn step(&self, name: &str, args: &[Term]) -> BkResult {
        let f = self.lookup(name, args)?;
        (f.step.unwrap_or(f.eval))(self, args)
    }

    /// First result of a full evaluation.
    pub fn eval1(&self, name: &str, args: &[Term]) -> Result<Term, BkError> {
        self.eval(name, args)?.into_iter().next().ok_or_else(|| BkError::Domain(format!("`{name}` returned no result")))
    }
}

/// Convenience wrapper over the standard registry.
pub fn eval_bk(name: &str, args: &[Term]) -> BkResult {
    Registry::standard().eval(name, args)
}

pub(crate) fn list_arg<'a>(t: &'a Term, what: &str) -> Result<Vec<&'a Term>, BkError> {
    match t.as_list() {
        Some(v) if t.is_ground() => Ok(v),
        _ => domain(format!("{what}: expected a ground list")),
    }
}

pub(crate) fn int_arg(t: &Term, what: &str) -> Result<i64, BkError> {
    match t {
        Term::Int(n) => Ok(*n),
        _ => domain(format!("{what}: expected an integer")),
    }
}

pub(crate) fn boolean(b: bool) -> Term {
    Term::atom(if b { "true" } else { "false" })
}

pub(crate) fn one(t: Term) -> BkResult {
    Ok(vec![t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn dispatch_and_errors() {
        assert_eq!(eval_bk("head", &[t("[a,b,c]")]).unwrap(), vec![t("a")]);
        assert_eq!(eval_bk("last", &[t("[c,d]")]).unwrap(), vec![t("d")]);
        assert!(matches!(eval_bk("head", &[t("[]")]), Err(BkError::Domain(_))));
        assert!(matches!(eval_bk("nope", &[t("a")]), Err(BkError::Unknown(_))));
        assert!(matches!(eval_bk("head", &[t("a"), t("b")]), Err(BkError::Arity { .. })));
    }

    #[test]
    fn evaluation_is_repeatable() {
        let reg = Registry::standard();
        for name in ["nSust", "oneSust", "addPrefix"] {
            let a = reg.eval(name, &[t("\"abc\""), t("\"adec\"")]);
            assert_eq!(a, reg.eval(name, &[t("\"abc\""), t("\"adec\"")]));
        }
    }
}
