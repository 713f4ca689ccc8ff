//! Substitution and affix functions for list transformations.

use super::{domain, list_arg, one, BkError, BkResult, Registry};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffKind {
    OneSust,
    NSust,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Affix {
    Prefix,
    Suffix,
}

pub(super) fn register(r: &mut Registry) {
    r.insert("difLists", 2, |_, a| {
        let (l1, l2) = (list_arg(&a[0], "difLists")?, list_arg(&a[1], "difLists")?);
        match one_diff(&l1, &l2) {
            Some(m) => one(m),
            None => domain("difLists: lists do not differ"),
        }
    });
    r.insert("nDifLists", 2, |_, a| {
        let (l1, l2) = (list_arg(&a[0], "nDifLists")?, list_arg(&a[1], "nDifLists")?);
        let ms = n_diffs(&l1, &l2);
        if ms.is_empty() {
            return domain("nDifLists: no multi-symbol replacement");
        }
        Ok(ms)
    });
    r.insert("map", 2, |reg, a| one(map_list(reg, &a[0], &a[1])?));
    r.insert("subtract", 2, |_, a| {
        let (l1, l2) = (list_arg(&a[0], "subtract")?, list_arg(&a[1], "subtract")?);
        one(Term::list(subtract(&l1, &l2)))
    });
    r.insert_stepped(
        "oneSust",
        2,
        |_, a| list_diffs(DiffKind::OneSust, &a[0], &a[1]),
        |_, a| unfold_diffs(DiffKind::OneSust, &a[0], &a[1]),
        false,
    );
    r.insert_stepped(
        "nSust",
        2,
        |_, a| list_diffs(DiffKind::NSust, &a[0], &a[1]),
        |_, a| unfold_diffs(DiffKind::NSust, &a[0], &a[1]),
        true,
    );
    r.insert_stepped(
        "addPrefix",
        2,
        |_, a| one(affix(Affix::Prefix, &a[0], &a[1])?),
        |_, a| unfold_affix(Affix::Prefix, &a[0], &a[1]),
        false,
    );
    r.insert_stepped(
        "addSuffix",
        2,
        |_, a| one(affix(Affix::Suffix, &a[0], &a[1])?),
        |_, a| unfold_affix(Affix::Suffix, &a[0], &a[1]),
        false,
    );
}

/// `x=>y` for the first position where the lists differ.
fn one_diff(l1: &[&Term], l2: &[&Term]) -> Option<Term> {
    let i = l1.iter().zip(l2).position(|(a, b)| a != b)?;
    Some(Term::mapping(l1[i].clone(), l2[i].clone()))
}

/// `x=>[y1..yk]` for every run of length ≥ 2 starting where the lists first differ.
fn n_diffs(l1: &[&Term], l2: &[&Term]) -> Vec<Term> {
    let Some(i) = l1.iter().zip(l2).position(|(a, b)| a != b) else {
        return Vec::new();
    };
    (i + 2..=l2.len())
        .map(|j| Term::mapping(l1[i].clone(), Term::list(l2[i..j].iter().map(|x| (*x).clone()))))
        .collect()
}

fn map_term(m: &Term, l1: &Term) -> Term {
    Term::App(crate::term::sym("map"), vec![m.clone(), l1.clone()])
}

fn unfold_diffs(kind: DiffKind, a: &Term, b: &Term) -> BkResult {
    let (l1, l2) = (list_arg(a, "sust")?, list_arg(b, "sust")?);
    let ms = match kind {
        DiffKind::OneSust => one_diff(&l1, &l2).into_iter().collect::<Vec<_>>(),
        DiffKind::NSust => n_diffs(&l1, &l2),
    };
    if ms.is_empty() {
        return one(a.clone());
    }
    Ok(ms.iter().map(|m| map_term(m, a)).collect())
}

/// Fully applied `oneSust`/`nSust`. Equal lists give `l1` back.
pub fn list_diffs(kind: DiffKind, a: &Term, b: &Term) -> BkResult {
    let reg = Registry::standard();
    unfold_diffs(kind, a, b)?
        .into_iter()
        .map(|t| match &t {
            Term::App(f, args) if f.as_ref() == "map" => map_list(reg, &args[0], &args[1]),
            _ => Ok(t),
        })
        .collect()
}

/// Applies a mapping or a named function to each list element.
pub fn map_list(reg: &Registry, f: &Term, list: &Term) -> Result<Term, BkError> {
    let xs = list_arg(list, "map")?;
    let mut out = Vec::with_capacity(xs.len());
    match f {
        Term::Map(from, to) => {
            let splice = to.as_list().filter(|_| !from.is_list());
            for x in xs {
                if x == from.as_ref() {
                    match &splice {
                        Some(items) => out.extend(items.iter().map(|t| (*t).clone())),
                        None => out.push(to.as_ref().clone()),
                    }
                } else {
                    out.push(x.clone());
                }
            }
        }
        Term::Atom(name) | Term::BkRef(name) => {
            let fun = reg.get(name).ok_or_else(|| BkError::Unknown(name.to_string()))?;
            for x in xs {
                let args = match fun.arity {
                    1 => vec![x.clone()],
                    2 => vec![x.clone(), list.clone()],
                    n => return domain(format!("map: `{name}` has arity {n}")),
                };
                out.push(reg.eval1(name, &args)?);
            }
        }
        _ => return domain("map: expected a mapping or function name"),
    }
    Ok(Term::list(out))
}

/// `l2` with the first occurrence of each element of `l1` removed.
fn subtract(l2: &[&Term], l1: &[&Term]) -> Vec<Term> {
    let mut rest: Vec<&Term> = l2.to_vec();
    for x in l1 {
        if let Some(i) = rest.iter().position(|y| y == x) {
            rest.remove(i);
        }
    }
    rest.into_iter().cloned().collect()
}

/// The part of `l2` not accounted for by `l1`: the affix when `l1` is a
/// prefix/suffix of `l2`, otherwise element-wise deletion.
fn residue(kind: Affix, l1: &[&Term], l2: &[&Term]) -> Vec<Term> {
    let n = l1.len();
    match kind {
        Affix::Prefix if l2.len() >= n && l2[..n] == *l1 => l2[n..].iter().map(|x| (*x).clone()).collect(),
        Affix::Suffix if l2.len() >= n && l2[l2.len() - n..] == *l1 => {
            l2[..l2.len() - n].iter().map(|x| (*x).clone()).collect()
        }
        _ => subtract(l2, l1),
    }
}

fn unfold_affix(kind: Affix, a: &Term, b: &Term) -> BkResult {
    let (l1, l2) = (list_arg(a, "affix")?, list_arg(b, "affix")?);
    let diff = Term::list(residue(kind, &l1, &l2));
    let args = match kind {
        Affix::Prefix => vec![a.clone(), diff],
        Affix::Suffix => vec![diff, a.clone()],
    };
    one(Term::App(crate::term::sym("append"), args))
}

/// `addPrefix` gives `l1 ++ diff`, `addSuffix` gives `diff ++ l1`.
pub fn affix(kind: Affix, a: &Term, b: &Term) -> Result<Term, BkError> {
    let (l1, l2) = (list_arg(a, "affix")?, list_arg(b, "affix")?);
    let diff = residue(kind, &l1, &l2);
    let l1: Vec<Term> = l1.into_iter().cloned().collect();
    Ok(match kind {
        Affix::Prefix => Term::list(l1.into_iter().chain(diff)),
        Affix::Suffix => Term::list(diff.into_iter().chain(l1)),
    })
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
    fn one_sust() {
        assert_eq!(list_diffs(DiffKind::OneSust, &t("[a,b,c]"), &t("[d,b,c]")).unwrap(), vec![t("[d,b,c]")]);
        assert_eq!(list_diffs(DiffKind::OneSust, &t("[a]"), &t("[a]")).unwrap(), vec![t("[a]")]);
        let reg = Registry::standard();
        assert_eq!(reg.step("oneSust", &[t("\"abc\""), t("\"adc\"")]).unwrap(), vec![t("map(b=>d,\"abc\")")]);
    }

    #[test]
    fn n_sust_is_multi_valued() {
        let got = list_diffs(DiffKind::NSust, &t("[a,b,c]"), &t("[a,d,e,c]")).unwrap();
        assert_eq!(got, vec![t("[a,d,e,c]"), t("[a,d,e,c,c]")]);
        assert_eq!(list_diffs(DiffKind::NSust, &t("\"ab\""), &t("\"ab\"")).unwrap(), vec![t("\"ab\"")]);
        let reg = Registry::standard();
        assert_eq!(
            reg.step("nSust", &[t("\"abc\""), t("\"adec\"")]).unwrap(),
            vec![t("map(b=>\"de\",\"abc\")"), t("map(b=>\"dec\",\"abc\")")]
        );
    }

    #[test]
    fn affixes() {
        assert_eq!(affix(Affix::Prefix, &t("[a,b,c]"), &t("[a,b,c,z]")).unwrap(), t("[a,b,c,z]"));
        assert_eq!(affix(Affix::Suffix, &t("[a,b,c]"), &t("[z,a,b,c]")).unwrap(), t("[z,a,b,c]"));
        assert_eq!(affix(Affix::Prefix, &t("[a]"), &t("[a]")).unwrap(), t("[a]"));
        assert_eq!(affix(Affix::Suffix, &t("\"trade\""), &t("\"overtrade\"")).unwrap(), t("\"overtrade\""));
        let reg = Registry::standard();
        assert_eq!(
            reg.step("addSuffix", &[t("\"trade\""), t("\"overtrade\"")]).unwrap(),
            vec![t("append(\"over\",\"trade\")")]
        );
    }

    #[test]
    fn residue_falls_back_to_deletion() {
        assert_eq!(affix(Affix::Prefix, &t("[b,a]"), &t("[a,b,z]")).unwrap(), t("[b,a,z]"));
    }

    #[test]
    fn map_with_function_names() {
        assert_eq!(eval_bk("map", &[t("head"), t("[[a,b],[c]]")]).unwrap(), vec![t("[a,c]")]);
        assert_eq!(eval_bk("map", &[t("&diffObj"), t("[[a,a],[a,b]]")]).unwrap(), vec![t("[1,2]")]);
        assert!(eval_bk("map", &[t("_"), t("[a]")]).is_err());
    }
}
