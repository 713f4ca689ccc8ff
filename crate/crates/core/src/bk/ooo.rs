//! Odd-one-out scoring.

use std::collections::BTreeSet;

use super::{domain, list_arg, one, BkError, Registry};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OooScore {
    Hamming,
    DiffObj,
}

pub(super) fn register(r: &mut Registry) {
    r.insert("hamming", 2, |_, a| one(Term::Int(score_terms(OooScore::Hamming, &a[0], &a[1])?)));
    r.insert("diffObj", 2, |_, a| one(Term::Int(score_terms(OooScore::DiffObj, &a[0], &a[1])?)));
    r.insert("distinct", 1, |_, a| {
        let xs = list_arg(&a[0], "distinct")?;
        let scores = xs
            .iter()
            .map(|x| match x {
                Term::Int(n) => Ok(*n),
                _ => domain("distinct: expected integers"),
            })
            .collect::<Result<Vec<_>, _>>()?;
        match distinct(&scores) {
            Some(i) => one(Term::Int(i as i64)),
            None => domain("no unique outlier"),
        }
    });
}

fn score_terms(kind: OooScore, item: &Term, context: &Term) -> Result<i64, BkError> {
    let item = list_arg(item, "ooo score")?;
    let ctx =
        list_arg(context, "ooo score")?.into_iter().map(|c| list_arg(c, "ooo score")).collect::<Result<Vec<_>, _>>()?;
    Ok(ooo_score(kind, &item, &ctx))
}

/// Hamming sums positional mismatches against every context item, with the
/// shorter list padded by a symbol equal to nothing. DiffObj counts the
/// distinct symbols of the item.
pub fn ooo_score<T: PartialEq + Ord>(kind: OooScore, item: &[T], context: &[Vec<T>]) -> i64 {
    match kind {
        OooScore::DiffObj => item.iter().collect::<BTreeSet<_>>().len() as i64,
        OooScore::Hamming => context
            .iter()
            .map(|other| {
                let n = item.len().max(other.len());
                (0..n).filter(|&i| item.get(i).is_none() || item.get(i) != other.get(i)).count() as i64
            })
            .sum(),
    }
}

/// 1-based index of the only score value that occurs exactly once, if that
/// value is unique.
pub fn distinct(scores: &[i64]) -> Option<usize> {
    let singles: Vec<usize> =
        (0..scores.len()).filter(|&i| scores.iter().filter(|&&s| s == scores[i]).count() == 1).collect();
    match singles.as_slice() {
        [i] => Some(i + 1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(s: &[&str]) -> Vec<Vec<char>> {
        s.iter().map(|x| x.chars().collect()).collect()
    }

    #[test]
    fn diff_obj_scores() {
        let ctx = items(&["aaa", "aab", "aac"]);
        let got: Vec<i64> = ctx.iter().map(|i| ooo_score(OooScore::DiffObj, i, &ctx)).collect();
        assert_eq!(got, [1, 2, 2]);
        assert_eq!(distinct(&got), Some(1));
    }

    #[test]
    fn hamming_scores_tie_on_one_letter_changes() {
        let ctx = items(&["aaa", "aab", "aac"]);
        let got: Vec<i64> = ctx.iter().map(|i| ooo_score(OooScore::Hamming, i, &ctx)).collect();
        assert_eq!(got, [2, 2, 2]);
        assert_eq!(distinct(&got), None);
        let alone = items(&["aaa"]);
        assert_eq!(ooo_score(OooScore::Hamming, &alone[0], &alone), 0);
    }

    #[test]
    fn hamming_pads_short_items() {
        let ctx = items(&["ab", "abcd"]);
        assert_eq!(ooo_score(OooScore::Hamming, &ctx[0], &ctx), 2);
    }

    #[test]
    fn distinct_needs_unique_outlier() {
        assert_eq!(distinct(&[5]), Some(1));
        assert_eq!(distinct(&[2, 2, 2]), None);
        assert_eq!(distinct(&[1, 2, 3]), None);
        assert_eq!(distinct(&[4, 4, 7, 4]), Some(3));
    }
}
