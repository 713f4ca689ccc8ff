//! Carpenter relations over feature-coded Raven matrices.
//!
//! A matrix is a list of rows, a row a list of cells, a cell a list of
//! figures `{shape,size,quantity,position,type}`. The last row is the
//! incomplete one.

use std::collections::BTreeSet;

use super::{domain, one, BkError, Registry};
use crate::term::Term;

pub const ATTRIBUTES: [&str; 5] = ["shape", "size", "quantity", "position", "type"];
pub const RELATIONS: [&str; 5] = ["identity", "distrib3val", "progressive", "addition", "distrib2val"];

/// Ordinal scale used when progressions run over symbolic sizes.
const SIZE_SCALE: [&str; 5] = ["tiny", "small", "medium", "big", "huge"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Identity,
    Distrib3Val,
    Progressive,
    Addition,
    Distrib2Val,
}

impl Relation {
    pub fn from_name(s: &str) -> Option<Relation> {
        Some(match s {
            "identity" => Relation::Identity,
            "distrib3val" => Relation::Distrib3Val,
            "progressive" => Relation::Progressive,
            "addition" => Relation::Addition,
            "distrib2val" => Relation::Distrib2Val,
            _ => return None,
        })
    }
}

/// Attribute values of one cell, as a set.
pub type ValueSet = BTreeSet<Term>;

pub(super) fn register(r: &mut Registry) {
    r.insert("identity", 2, |_, a| relation_on_matrix(Relation::Identity, &a[0], &a[1]));
    r.insert("distrib3val", 2, |_, a| relation_on_matrix(Relation::Distrib3Val, &a[0], &a[1]));
    r.insert("progressive", 2, |_, a| relation_on_matrix(Relation::Progressive, &a[0], &a[1]));
    r.insert("addition", 2, |_, a| relation_on_matrix(Relation::Addition, &a[0], &a[1]));
    r.insert("distrib2val", 2, |_, a| relation_on_matrix(Relation::Distrib2Val, &a[0], &a[1]));
}

fn relation_on_matrix(rel: Relation, attr: &Term, matrix: &Term) -> Result<Vec<Term>, BkError> {
    let Term::Atom(name) = attr else {
        return domain("relation: attribute must be an atom");
    };
    let Some(k) = ATTRIBUTES.iter().position(|a| *a == name.as_ref()) else {
        return domain(format!("unknown attribute `{name}`"));
    };
    let grid = attribute_grid(matrix, k)?;
    one(raven_relation(rel, &grid)?)
}

/// Per-cell value sets of attribute `k`.
pub fn attribute_grid(matrix: &Term, k: usize) -> Result<Vec<Vec<ValueSet>>, BkError> {
    if !matrix.is_ground() {
        return domain("relation: matrix must be ground");
    }
    let rows = matrix.as_list().ok_or_else(|| BkError::Domain("matrix must be a list".into()))?;
    rows.iter()
        .map(|row| {
            let cells = row.as_list().ok_or_else(|| BkError::Domain("row must be a list".into()))?;
            cells.iter().map(|cell| cell_values(cell, k)).collect()
        })
        .collect()
}

fn cell_values(cell: &Term, k: usize) -> Result<ValueSet, BkError> {
    let figures = cell.as_list().ok_or_else(|| BkError::Domain("cell must be a list".into()))?;
    let mut out = ValueSet::new();
    for fig in figures {
        let Term::Tuple(fs) = fig else {
            return domain("figure must be a tuple");
        };
        let v = fs.get(k).ok_or_else(|| BkError::Domain("figure has too few attributes".into()))?;
        match v.as_list() {
            Some(items) if v.is_list() => out.extend(items.into_iter().cloned()),
            _ => {
                out.insert(v.clone());
            }
        }
    }
    Ok(out)
}

fn render(set: &ValueSet) -> Term {
    if set.len() == 1 {
        set.iter().next().cloned().expect("one element")
    } else {
        Term::list(set.iter().cloned().collect::<Vec<_>>())
    }
}

fn mismatch<T>(rel: Relation) -> Result<T, BkError> {
    domain(format!("relation {rel:?} does not hold"))
}

/// Predicts the missing cell value of the last row. The last row of `grid`
/// holds the cells seen so far; all other rows are complete.
pub fn raven_relation(rel: Relation, grid: &[Vec<ValueSet>]) -> Result<Term, BkError> {
    let Some((seen, complete)) = grid.split_last() else {
        return domain("empty grid");
    };
    match rel {
        Relation::Identity => {
            for row in complete {
                if row.is_empty() || row.iter().any(|c| c != &row[0]) {
                    return mismatch(rel);
                }
            }
            match seen.first() {
                Some(v) if seen.iter().all(|c| c == v) => Ok(render(v)),
                _ => mismatch(rel),
            }
        }
        Relation::Distrib3Val => {
            let mut values: Option<BTreeSet<&Term>> = None;
            for row in complete {
                let singles: Vec<&Term> = row.iter().filter_map(single).collect();
                let set: BTreeSet<&Term> = singles.iter().copied().collect();
                if row.len() != 3 || singles.len() != 3 || set.len() != 3 {
                    return mismatch(rel);
                }
                if values.as_ref().is_some_and(|v| *v != set) {
                    return mismatch(rel);
                }
                values = Some(set);
            }
            let Some(values) = values else { return mismatch(rel) };
            let mut left = values;
            for c in seen {
                match single(c) {
                    Some(v) if left.remove(v) => {}
                    _ => return mismatch(rel),
                }
            }
            match left.len() {
                1 => Ok(left.into_iter().next().expect("one").clone()),
                _ => mismatch(rel),
            }
        }
        Relation::Progressive => {
            let numeric = |row: &Vec<ValueSet>| -> Option<Vec<(i64, bool)>> {
                row.iter().map(|c| single(c).and_then(ordinal)).collect()
            };
            let mut step: Option<i64> = None;
            let mut symbolic = None;
            let mut absorb = |vals: &[(i64, bool)]| -> bool {
                for w in vals.windows(2) {
                    let d = w[1].0 - w[0].0;
                    if d == 0 || step.is_some_and(|s| s != d) {
                        return false;
                    }
                    step = Some(d);
                }
                for v in vals {
                    if symbolic.is_some_and(|s| s != v.1) {
                        return false;
                    }
                    symbolic = Some(v.1);
                }
                true
            };
            for row in complete {
                match numeric(row) {
                    Some(vals) if vals.len() >= 2 && absorb(&vals) => {}
                    _ => return mismatch(rel),
                }
            }
            let Some(vals) = numeric(seen) else { return mismatch(rel) };
            if !absorb(&vals) {
                return mismatch(rel);
            }
            match (step, vals.last()) {
                (Some(d), Some(&(last, sym))) => from_ordinal(last + d, sym).ok_or(()).or_else(|_| mismatch(rel)),
                _ => mismatch(rel),
            }
        }
        Relation::Addition | Relation::Distrib2Val => {
            let combine = |a: &ValueSet, b: &ValueSet| -> ValueSet {
                if rel == Relation::Addition {
                    a.union(b).cloned().collect()
                } else {
                    a.symmetric_difference(b).cloned().collect()
                }
            };
            if complete.is_empty() {
                return mismatch(rel);
            }
            for row in complete {
                if row.len() != 3 || combine(&row[0], &row[1]) != row[2] {
                    return mismatch(rel);
                }
            }
            match seen.as_slice() {
                [a, b] => Ok(render(&combine(a, b))),
                _ => mismatch(rel),
            }
        }
    }
}

fn single(c: &ValueSet) -> Option<&Term> {
    if c.len() == 1 {
        c.iter().next()
    } else {
        None
    }
}

/// Integer value, flagged true when it came from the symbolic size scale.
fn ordinal(t: &Term) -> Option<(i64, bool)> {
    match t {
        Term::Int(n) => Some((*n, false)),
        Term::Atom(a) => SIZE_SCALE.iter().position(|s| *s == a.as_ref()).map(|i| (i as i64, true)),
        _ => None,
    }
}

fn from_ordinal(v: i64, symbolic: bool) -> Option<Term> {
    if symbolic {
        usize::try_from(v).ok().and_then(|i| SIZE_SCALE.get(i)).map(|s| Term::atom(s))
    } else {
        Some(Term::Int(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(items: &[&str]) -> ValueSet {
        items.iter().map(|s| Term::atom(s)).collect()
    }

    fn ints(items: &[i64]) -> Vec<ValueSet> {
        items.iter().map(|n| [Term::Int(*n)].into_iter().collect()).collect()
    }

    #[test]
    fn identity_uses_row_constant() {
        let g = vec![vec![vs(&["circle"]), vs(&["circle"]), vs(&["circle"])], vec![vs(&["square"]), vs(&["square"])]];
        assert_eq!(raven_relation(Relation::Identity, &g).unwrap(), Term::atom("square"));
        let bad = vec![vec![vs(&["a"]), vs(&["b"]), vs(&["a"])], vec![vs(&["a"]), vs(&["a"])]];
        assert!(raven_relation(Relation::Identity, &bad).is_err());
    }

    #[test]
    fn distrib3val_set_difference() {
        let g = vec![
            vec![vs(&["square"]), vs(&["diamond"]), vs(&["circle"])],
            vec![vs(&["diamond"]), vs(&["circle"]), vs(&["square"])],
            vec![vs(&["diamond"]), vs(&["square"])],
        ];
        assert_eq!(raven_relation(Relation::Distrib3Val, &g).unwrap(), Term::atom("circle"));
    }

    #[test]
    fn progressive_steps_by_row_difference() {
        let g = vec![ints(&[0, 45, 90])];
        assert_eq!(raven_relation(Relation::Progressive, &g).unwrap(), Term::Int(135));
        let g = vec![ints(&[0, 45, 90]), ints(&[45, 90])];
        assert_eq!(raven_relation(Relation::Progressive, &g).unwrap(), Term::Int(135));
        let g = vec![vec![vs(&["small"]), vs(&["medium"]), vs(&["big"])], vec![vs(&["tiny"]), vs(&["small"])]];
        assert_eq!(raven_relation(Relation::Progressive, &g).unwrap(), Term::atom("medium"));
        assert!(raven_relation(Relation::Progressive, &[ints(&[1, 1, 1]), ints(&[1, 1])]).is_err());
    }

    #[test]
    fn addition_and_xor() {
        let g =
            vec![vec![vs(&["circle"]), vs(&["cross"]), vs(&["circle", "cross"])], vec![vs(&["square"]), vs(&["line"])]];
        assert_eq!(
            raven_relation(Relation::Addition, &g).unwrap(),
            Term::list([Term::atom("line"), Term::atom("square")])
        );
        let g = vec![vec![vs(&["a", "b"]), vs(&["b", "c"]), vs(&["a", "c"])], vec![vs(&["a", "d"]), vs(&["d"])]];
        assert_eq!(raven_relation(Relation::Distrib2Val, &g).unwrap(), Term::atom("a"));
    }
}
