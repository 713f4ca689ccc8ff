//! List, arithmetic, comparison and alphabet functions.

use super::{boolean, domain, int_arg, list_arg, one, BkError, BkResult, Registry};
use crate::term::Term;

const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyz";

pub(super) fn register(r: &mut Registry) {
    r.insert("head", 1, |_, a| {
        let xs = list_arg(&a[0], "head")?;
        match xs.first() {
            Some(x) => one((*x).clone()),
            None => domain("head of empty list"),
        }
    });
    r.insert("tail", 1, |_, a| match &a[0] {
        Term::Cons(_, t) if a[0].is_ground() => one(t.as_ref().clone()),
        _ => domain("tail of non-list"),
    });
    r.insert("last", 1, |_, a| {
        let xs = list_arg(&a[0], "last")?;
        match xs.last() {
            Some(x) => one((*x).clone()),
            None => domain("last of empty list"),
        }
    });
    r.insert("init", 1, |_, a| {
        let xs = list_arg(&a[0], "init")?;
        if xs.is_empty() {
            return domain("init of empty list");
        }
        one(Term::list(xs[..xs.len() - 1].iter().map(|x| (*x).clone())))
    });
    r.insert("length", 1, |_, a| one(Term::Int(list_arg(&a[0], "length")?.len() as i64)));
    r.insert("reverse", 1, |_, a| one(Term::list(list_arg(&a[0], "reverse")?.into_iter().rev().cloned())));
    r.insert("append", 2, |_, a| {
        let xs = list_arg(&a[0], "append")?;
        list_arg(&a[1], "append")?;
        one(Term::list_with_tail(xs.into_iter().cloned(), a[1].clone()))
    });
    r.insert("next", 1, |_, a| one(alphabet_step(Step::Next, last_letter(&a[0])?)?));
    r.insert("previous", 1, |_, a| one(alphabet_step(Step::Previous, last_letter(&a[0])?)?));
    r.insert("position", 2, |_, a| {
        let xs = list_arg(&a[0], "position")?;
        one(boolean(period_guard(xs.len(), int_arg(&a[1], "position")?)?))
    });
    r.insert("not_position", 2, |_, a| {
        let xs = list_arg(&a[0], "not_position")?;
        one(boolean(!period_guard(xs.len(), int_arg(&a[1], "not_position")?)?))
    });
    r.insert("mod", 2, |_, a| {
        let (x, m) = (int_arg(&a[0], "mod")?, int_arg(&a[1], "mod")?);
        if m == 0 {
            return domain("mod by zero");
        }
        one(Term::Int(x.rem_euclid(m)))
    });
    r.insert("add", 2, |_, a| {
        let v = int_arg(&a[0], "add")?.checked_add(int_arg(&a[1], "add")?);
        v.map(Term::Int).map(|t| vec![t]).ok_or_else(|| BkError::Domain("overflow".into()))
    });
    r.insert("sub", 2, |_, a| {
        let v = int_arg(&a[0], "sub")?.checked_sub(int_arg(&a[1], "sub")?);
        v.map(Term::Int).map(|t| vec![t]).ok_or_else(|| BkError::Domain("overflow".into()))
    });
    r.insert("lt", 2, |_, a| one(boolean(int_arg(&a[0], "lt")? < int_arg(&a[1], "lt")?)));
    r.insert("gt", 2, |_, a| one(boolean(int_arg(&a[0], "gt")? > int_arg(&a[1], "gt")?)));
    r.insert("eq", 2, |_, a| ground_cmp(a, true));
    r.insert("neq", 2, |_, a| ground_cmp(a, false));
    r.insert("not", 1, |_, a| match &a[0] {
        Term::Atom(s) if s.as_ref() == "true" => one(boolean(false)),
        Term::Atom(s) if s.as_ref() == "false" => one(boolean(true)),
        _ => domain("not: expected a boolean"),
    });
}

fn ground_cmp(a: &[Term], want_equal: bool) -> BkResult {
    if !a[0].is_ground() || !a[1].is_ground() {
        return domain("comparison of non-ground terms");
    }
    one(boolean((a[0] == a[1]) == want_equal))
}

/// A letter, or the last letter of a non-empty list.
fn last_letter(t: &Term) -> Result<&Term, BkError> {
    match t {
        Term::Cons(..) => match t.as_list().and_then(|xs| xs.last().copied()) {
            Some(x) => Ok(x),
            None => Err(BkError::Domain("alphabet step on a partial list".into())),
        },
        Term::Nil => domain("alphabet step on empty list"),
        _ => Ok(t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Next,
    Previous,
}

/// Successor or predecessor in the Latin alphabet. The alphabet is circular,
/// so `next(z) = a` and `previous(a) = z`.
pub fn alphabet_step(kind: Step, c: &Term) -> Result<Term, BkError> {
    let Term::Atom(s) = c else {
        return domain("alphabet step on non-letter");
    };
    let Some(i) = ALPHABET.find(s.as_ref()).filter(|_| s.len() == 1) else {
        return domain(format!("`{s}` is not a lowercase letter"));
    };
    let j = match kind {
        Step::Next => (i + 1) % 26,
        Step::Previous => (i + 25) % 26,
    };
    Ok(Term::atom(&ALPHABET[j..j + 1]))
}

/// `(len + 1) mod interval == 0`.
pub fn period_guard(len: usize, interval: i64) -> Result<bool, BkError> {
    if interval < 1 {
        return domain("interval must be positive");
    }
    Ok((len as i64 + 1) % interval == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::eval_bk;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn letter_steps_on_lists_use_the_last_letter() {
        assert_eq!(eval_bk("next", &[t("\"abc\"")]).unwrap(), vec![t("d")]);
        assert_eq!(eval_bk("previous", &[t("d")]).unwrap(), vec![t("c")]);
        assert!(eval_bk("next", &[t("[]")]).is_err());
    }

    #[test]
    fn list_primitives() {
        assert_eq!(eval_bk("init", &[t("\"cdcdc\"")]).unwrap(), vec![t("\"cdcd\"")]);
        assert_eq!(eval_bk("tail", &[t("[a]")]).unwrap(), vec![t("[]")]);
        assert_eq!(eval_bk("length", &[t("\"mab\"")]).unwrap(), vec![Term::Int(3)]);
        assert_eq!(eval_bk("append", &[t("\"ab\""), t("\"c\"")]).unwrap(), vec![t("\"abc\"")]);
        assert!(eval_bk("last", &[t("[X]")]).is_err());
    }

    #[test]
    fn alphabet() {
        assert_eq!(alphabet_step(Step::Next, &t("c")).unwrap(), t("d"));
        assert_eq!(alphabet_step(Step::Previous, &t("d")).unwrap(), t("c"));
        assert_eq!(alphabet_step(Step::Next, &t("z")).unwrap(), t("a"));
        assert_eq!(alphabet_step(Step::Previous, &t("a")).unwrap(), t("z"));
        assert!(alphabet_step(Step::Next, &t("ab")).is_err());
        assert!(alphabet_step(Step::Next, &Term::Int(1)).is_err());
    }

    #[test]
    fn period_guards() {
        assert_eq!(eval_bk("position", &[t("\"ma\""), Term::Int(3)]).unwrap(), vec![t("true")]);
        assert_eq!(eval_bk("position", &[t("\"mab\""), Term::Int(3)]).unwrap(), vec![t("false")]);
        assert_eq!(eval_bk("position", &[t("[]"), Term::Int(2)]).unwrap(), vec![t("false")]);
        assert_eq!(eval_bk("not_position", &[t("[]"), Term::Int(2)]).unwrap(), vec![t("true")]);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval_bk("mod", &[Term::Int(-1), Term::Int(3)]).unwrap(), vec![Term::Int(2)]);
        assert!(eval_bk("mod", &[Term::Int(1), Term::Int(0)]).is_err());
        assert_eq!(eval_bk("eq", &[t("f(a)"), t("f(a)")]).unwrap(), vec![t("true")]);
        assert_eq!(eval_bk("neq", &[Term::Int(1), Term::Int(2)]).unwrap(), vec![t("true")]);
    }
}
