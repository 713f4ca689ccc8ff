//! Feature-coded Raven matrices: the worked example, its decomposition and
//! the published per-item solutions checked on synthesized grids.

use std::collections::BTreeSet;

use super::{CorpusError, Problem};
use crate::bk::raven::{Relation, ATTRIBUTES, RELATIONS};
use crate::operators::{meta_replace, OperatorDef, Template};
use crate::term::{Rule, RulePosition, Term};

/// Rows of cells; the last row stops before the gap.
pub type Grid = Vec<Vec<Term>>;

fn figure(shape: &str, size: &str, quantity: i64, position: &str, ty: &str) -> Term {
    Term::Tuple(vec![Term::atom(shape), Term::atom(size), Term::Int(quantity), Term::atom(position), Term::atom(ty)])
}

fn cell(shape: &str, ty: &str) -> Term {
    Term::list([figure(shape, "big", 1, "none", ty)])
}

/// The worked example: a Latin square of shapes and fill types, eight
/// candidates of which the last is correct.
pub fn fig11() -> (Grid, Vec<Term>) {
    let grid = vec![
        vec![cell("square", "black"), cell("diamond", "white"), cell("circle", "striped")],
        vec![cell("diamond", "striped"), cell("circle", "black"), cell("square", "white")],
        vec![cell("circle", "white"), cell("square", "striped")],
    ];
    let candidates = vec![
        cell("diamond", "white"),
        cell("square", "black"),
        cell("circle", "black"),
        cell("diamond", "striped"),
        Term::list([figure("diamond", "small", 1, "none", "black")]),
        Term::list([figure("diamond", "big", 2, "none", "black")]),
        cell("square", "striped"),
        cell("diamond", "black"),
    ];
    (grid, candidates)
}

fn check_grid(grid: &Grid) -> Result<(), CorpusError> {
    let lens: Vec<usize> = grid.iter().map(Vec::len).collect();
    if lens != [3, 3, 2] {
        return Err(CorpusError::MalformedGrid(format!("expected rows of 3, 3 and 2 cells, found {lens:?}")));
    }
    Ok(())
}

fn example(seen: Vec<Vec<Term>>, answer: Term) -> Rule {
    let m = Term::list(seen.into_iter().map(Term::list));
    Rule::new(Term::app("raven", vec![m]), answer)
}

fn columns(grid: &Grid) -> Grid {
    (0..3).map(|c| grid.iter().filter_map(|row| row.get(c).cloned()).collect()).collect()
}

/// Training instances from one view: each complete line followed by the
/// first two cells of the other complete line, in both orders.
fn view_training(lines: &Grid) -> Vec<Rule> {
    let (a, b) = (&lines[0], &lines[1]);
    vec![
        example(vec![a.clone(), b[..2].to_vec()], b[2].clone()),
        example(vec![b.clone(), a[..2].to_vec()], a[2].clone()),
    ]
}

fn view_tests(lines: &Grid, candidates: &[Term]) -> Vec<Rule> {
    candidates
        .iter()
        .map(|c| example(vec![lines[0].clone(), lines[1].clone(), lines[2][..2].to_vec()], c.clone()))
        .collect()
}

/// Row and column sub-matrices as training instances, and the test rows
/// and columns completed with each candidate.
pub fn decompose_matrix(grid: &Grid, candidates: &[Term]) -> Result<(Vec<Rule>, Vec<Rule>), CorpusError> {
    check_grid(grid)?;
    if candidates.len() != 8 {
        return Err(CorpusError::MalformedGrid(format!("expected 8 candidates, found {}", candidates.len())));
    }
    let cols = columns(grid);
    let mut train = view_training(grid);
    train.extend(view_training(&cols));
    let mut tests = view_tests(grid, candidates);
    tests.extend(view_tests(&cols, candidates));
    Ok((train, tests))
}

/// Row view only.
pub fn decompose_rows(grid: &Grid) -> Result<(Vec<Rule>, Term), CorpusError> {
    check_grid(grid)?;
    let test_lhs = Term::app("raven", vec![Term::list(grid.iter().cloned().map(Term::list))]);
    Ok((view_training(grid), test_lhs))
}

/// 25 relation operators on the answer tuple plus generalization of the
/// matrix.
pub fn raven_operators() -> Vec<OperatorDef> {
    let mut ops = Vec::new();
    for rel in RELATIONS {
        for (k, attr) in ATTRIBUTES.iter().enumerate() {
            let pos = RulePosition::parse(&format!("Rt1.1.{}", k + 1)).expect("position");
            let t = Template::parse(&format!("{rel}({attr},@L1)")).expect("template");
            ops.push(meta_replace(ops.len() + 1, pos, t));
        }
    }
    let gen = Template::parse("V_Matrix").expect("template");
    ops.push(meta_replace(ops.len() + 1, RulePosition::parse("L1").expect("position"), gen));
    ops
}

pub fn raven_problem() -> Problem {
    let (grid, cands) = fig11();
    let (train, _) = decompose_matrix(&grid, &cands).expect("worked example decomposes");
    let mut p = Problem::new("raven-fig11");
    p.pos = train;
    p.ops = raven_operators();
    p
}

/// The 16 test instances of the worked example.
pub fn fig11_tests() -> Vec<Rule> {
    let (grid, cands) = fig11();
    decompose_matrix(&grid, &cands).expect("worked example decomposes").1
}

/// Item id, relations per attribute, steps, positives, operators.
type FixtureRow = (usize, [Option<Relation>; 5], usize, usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct RavenFixture {
    pub id: usize,
    pub relations: [Option<Relation>; 5],
    pub steps: usize,
    pub n_pos: usize,
    pub n_ops: usize,
}

const SHAPES: [&str; 9] = ["square", "circle", "diamond", "triangle", "star", "hexagon", "pentagon", "cross", "heart"];
const TYPES: [&str; 3] = ["black", "white", "striped"];
const SIZES: [&str; 5] = ["tiny", "small", "medium", "big", "huge"];

impl RavenFixture {
    /// `raven(V) -> [{rel(attr,V) or none, ...}]`.
    pub fn program(&self) -> Rule {
        let v = Term::var("V");
        let slots = self.relations.iter().zip(ATTRIBUTES).map(|(r, attr)| match r {
            Some(rel) => Term::app(relation_name(*rel), vec![Term::atom(attr), v.clone()]),
            None => Term::atom("none"),
        });
        Rule::new(Term::app("raven", vec![v.clone()]), Term::list([Term::Tuple(slots.collect())]))
    }

    /// A 3×3 grid obeying the row relations of this item, with its answer.
    pub fn synthesize(&self) -> (Grid, Term) {
        let mut cells: Vec<Vec<Vec<Term>>> = vec![vec![Vec::new(); 3]; 3];
        for (k, rel) in self.relations.iter().enumerate() {
            for (r, row) in cells.iter_mut().enumerate() {
                for (c, slot) in row.iter_mut().enumerate() {
                    slot.push(attribute_value(*rel, k, r, c));
                }
            }
        }
        let mut grid: Grid = cells
            .into_iter()
            .map(|row| row.into_iter().map(|attrs| Term::list([Term::Tuple(attrs)])).collect())
            .collect();
        let answer = grid[2].pop().expect("three cells");
        (grid, answer)
    }
}

fn relation_name(rel: Relation) -> &'static str {
    match rel {
        Relation::Identity => "identity",
        Relation::Distrib3Val => "distrib3val",
        Relation::Progressive => "progressive",
        Relation::Addition => "addition",
        Relation::Distrib2Val => "distrib2val",
    }
}

fn set_value(items: &[&str]) -> Term {
    let set: BTreeSet<Term> = items.iter().map(|s| Term::atom(s)).collect();
    if set.len() == 1 {
        set.into_iter().next().expect("one")
    } else {
        Term::list(set)
    }
}

fn attribute_value(rel: Option<Relation>, k: usize, r: usize, c: usize) -> Term {
    let pool: &[&str] = if k == 4 { &TYPES } else { &SHAPES };
    match rel {
        None => Term::atom("none"),
        Some(Relation::Identity) => Term::atom(pool[r % pool.len()]),
        Some(Relation::Distrib3Val) => match k {
            2 => Term::Int(((r + c) % 3 + 1) as i64),
            _ => Term::atom(pool[(r + c) % 3]),
        },
        Some(Relation::Progressive) => match k {
            1 => Term::atom(SIZES[r + c]),
            3 => Term::Int(45 * (r + c) as i64),
            _ => Term::Int((r + c + 1) as i64),
        },
        Some(Relation::Addition) => {
            let (x, y) = (SHAPES[2 * r], SHAPES[2 * r + 1]);
            match c {
                0 => set_value(&[x]),
                1 => set_value(&[y]),
                _ => set_value(&[x, y]),
            }
        }
        Some(Relation::Distrib2Val) => {
            let (x, y, z) = (SHAPES[3 * r], SHAPES[3 * r + 1], SHAPES[3 * r + 2]);
            match c {
                0 => set_value(&[x, y]),
                1 => set_value(&[y, z]),
                _ => set_value(&[x, z]),
            }
        }
    }
}

/// Solutions of items 25 to 59 with their step, evidence and operator
/// counts.
pub fn table6_fixtures() -> Vec<RavenFixture> {
    use Relation::*;
    let i = Some(Identity);
    let d3 = Some(Distrib3Val);
    let pr = Some(Progressive);
    let add = Some(Addition);
    let d2 = Some(Distrib2Val);
    let rows: [FixtureRow; 35] = [
        (25, [i, None, None, None, None], 37, 3, 2),
        (26, [i, pr, None, None, None], 99, 4, 3),
        (27, [i, pr, None, None, None], 99, 4, 3),
        (28, [i, pr, None, None, None], 111, 4, 3),
        (29, [i, None, pr, pr, None], 131, 4, 4),
        (30, [i, pr, None, None, None], 88, 4, 3),
        (31, [i, None, None, pr, None], 81, 4, 3),
        (32, [i, None, pr, None, None], 79, 4, 3),
        (33, [i, None, None, pr, None], 91, 4, 3),
        (34, [i, None, None, pr, None], 91, 4, 3),
        (35, [i, None, pr, None, None], 81, 4, 3),
        (36, [i, None, None, pr, None], 83, 4, 3),
        (37, [i, None, None, None, i], 75, 4, 3),
        (38, [d3, None, None, None, None], 69, 4, 2),
        (39, [d3, None, None, None, None], 71, 4, 2),
        (40, [i, None, None, None, d3], 94, 6, 3),
        (41, [i, None, None, None, d3], 96, 6, 3),
        (42, [i, None, None, None, d3], 93, 6, 3),
        (43, [d3, None, None, None, d3], 106, 6, 3),
        (44, [d3, None, None, None, d3], 91, 6, 3),
        (45, [d3, None, None, None, d3], 104, 6, 3),
        (46, [i, None, None, None, d3], 93, 6, 3),
        (47, [i, None, d3, None, d3], 146, 6, 4),
        (48, [d3, None, None, None, d3], 106, 6, 3),
        (49, [add, None, None, None, None], 61, 4, 2),
        (50, [add, None, None, None, None], 55, 4, 2),
        (51, [add, None, None, None, i], 99, 6, 3),
        (52, [d2, None, None, None, None], 63, 4, 2),
        (53, [d2, None, None, None, None], 60, 4, 2),
        (54, [d2, None, None, None, None], 61, 4, 2),
        (55, [d2, None, None, None, None], 77, 4, 2),
        (56, [d2, None, None, None, None], 99, 4, 3),
        (57, [d2, None, None, None, d3], 10, 4, 3),
        (58, [d2, None, None, None, None], 60, 4, 2),
        (59, [d2, None, None, None, None], 65, 4, 2),
    ];
    rows.iter()
        .map(|&(id, relations, steps, n_pos, n_ops)| RavenFixture { id, relations, steps, n_pos, n_ops })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_training_instance_matches_worked_example() {
        let (grid, cands) = fig11();
        let (train, tests) = decompose_matrix(&grid, &cands).unwrap();
        assert_eq!(train.len(), 4);
        assert_eq!(tests.len(), 16);
        assert_eq!(train[0].rhs, cell("square", "white"));
        let lhs = train[0].lhs.to_string();
        assert!(lhs.starts_with("raven([[[{square,big,1,none,black}],[{diamond,big,1,none,white}]"), "{lhs}");
    }

    #[test]
    fn malformed_grids_are_rejected() {
        let (grid, cands) = fig11();
        let tiny: Grid = vec![vec![cell("square", "black")]];
        assert!(decompose_matrix(&tiny, &cands).is_err());
        assert!(decompose_matrix(&grid, &cands[..3]).is_err());
    }

    #[test]
    fn training_never_contains_the_gap_row() {
        let (grid, cands) = fig11();
        let (train, _) = decompose_matrix(&grid, &cands).unwrap();
        let gap_row = Term::list(grid[2].clone());
        for e in &train {
            let Term::App(_, args) = &e.lhs else { unreachable!() };
            assert!(args[0].as_list().unwrap().iter().all(|row| **row != gap_row));
        }
    }

    #[test]
    fn operator_count() {
        assert_eq!(raven_operators().len(), 26);
        assert_eq!(raven_operators()[2].to_string(), "replace(Rt1.1.3, identity(quantity,@L1))");
    }
}
