//! Letter series completion problems.

use super::{CorpusError, Problem};
use crate::operators::{meta_insert, meta_replace, one_step_rew, OperatorDef, Template};
use crate::syntax::parse_rule;
use crate::term::{Rule, RulePosition, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Series {
    pub id: usize,
    pub letters: &'static str,
    pub answer: char,
    /// Number of training instances used when learning.
    pub n_pos: usize,
}

pub const SERIES: [Series; 15] = [
    Series { id: 1, letters: "cdcdcdcd", answer: 'c', n_pos: 5 },
    Series { id: 2, letters: "aaabbbcccdd", answer: 'd', n_pos: 9 },
    Series { id: 3, letters: "atbataatbat", answer: 'a', n_pos: 7 },
    Series { id: 4, letters: "abmcdmefmghm", answer: 'i', n_pos: 8 },
    Series { id: 5, letters: "defgefghfghi", answer: 'g', n_pos: 8 },
    Series { id: 6, letters: "qxapxbqxa", answer: 'p', n_pos: 7 },
    Series { id: 7, letters: "aducuaeuabuafua", answer: 'a', n_pos: 11 },
    Series { id: 8, letters: "mabmbcmcdm", answer: 'd', n_pos: 8 },
    Series { id: 9, letters: "urtustuttu", answer: 'u', n_pos: 9 },
    Series { id: 10, letters: "abyabxabwab", answer: 'v', n_pos: 9 },
    Series { id: 11, letters: "rscdstdetuef", answer: 'u', n_pos: 9 },
    Series { id: 12, letters: "npaoqapraqsa", answer: 'r', n_pos: 8 },
    Series { id: 13, letters: "wxaxybyzczadab", answer: 'e', n_pos: 9 },
    Series { id: 14, letters: "jkqrklrslmst", answer: 'm', n_pos: 9 },
    Series { id: 15, letters: "pononmnmlmlk", answer: 'l', n_pos: 9 },
];

pub fn series(id: usize) -> Option<&'static Series> {
    SERIES.iter().find(|s| s.id == id)
}

impl Series {
    pub fn example(&self) -> Rule {
        Rule::new(Term::app("thurstone", vec![Term::string(self.letters)]), Term::atom(&self.answer.to_string()))
    }
}

/// `thurstone(s) -> c` becomes one instance per prefix of length 2..|s|,
/// each mapping to the letter that follows it.
pub fn decompose_series(e: &Rule) -> Result<Vec<Rule>, CorpusError> {
    let not_series = || CorpusError::NotSeries(e.to_string());
    let Term::App(f, args) = &e.lhs else { return Err(not_series()) };
    let [arg] = args.as_slice() else { return Err(not_series()) };
    let letters = arg.to_vec().ok_or_else(not_series)?;
    if !matches!(e.rhs, Term::Atom(_)) || !e.guards.is_empty() || !e.body.is_empty() {
        return Err(not_series());
    }
    if letters.len() < 2 {
        return Err(CorpusError::SeriesTooShort);
    }
    let mut full = letters;
    full.push(e.rhs.clone());
    Ok((2..full.len())
        .map(|k| Rule::new(Term::App(f.clone(), vec![Term::list(full[..k].to_vec())]), full[k].clone()))
        .collect())
}

/// `f(init^(k-1)(V))`, with `last` when no letter relation applies.
fn back(f: &str, k: usize) -> String {
    let mut s = "V".to_string();
    for _ in 1..k {
        s = format!("init({s})");
    }
    format!("{}({s})", if f.is_empty() { "last" } else { f })
}

/// Fixed solution programs; `None` for the unsolved series 7. Each entry is
/// `(guard residue mod 3, next/previous/identity, distance back)`.
fn solution_spec(id: usize) -> Option<Vec<(Option<u8>, &'static str, usize)>> {
    Some(match id {
        1 => vec![(None, "", 2)],
        2 => vec![(None, "next", 3)],
        3 => vec![(None, "", 6)],
        4 => vec![(Some(0), "next", 2), (Some(1), "next", 1), (Some(2), "", 3)],
        5 => vec![(None, "next", 4)],
        6 => vec![(None, "", 6)],
        8 => vec![(Some(0), "", 3), (Some(1), "next", 3), (Some(2), "next", 3)],
        9 => vec![(Some(1), "next", 3), (Some(0), "", 3), (Some(2), "", 3)],
        10 => vec![(Some(2), "previous", 3), (Some(0), "", 3), (Some(1), "", 3)],
        11 => vec![(None, "next", 4)],
        12 => vec![(Some(2), "", 3), (Some(0), "next", 3), (Some(1), "next", 3)],
        13 => vec![(None, "next", 3)],
        14 => vec![(None, "next", 4)],
        15 => vec![(None, "previous", 3)],
        _ => return None,
    })
}

pub fn thurstone_solution(id: usize) -> Option<Vec<Rule>> {
    let spec = solution_spec(id)?;
    Some(
        spec.into_iter()
            .map(|(guard, f, k)| {
                let body = back(f, k);
                let src = match guard {
                    Some(r) => format!("thurstone(V) when eq(mod(length(V),3),{r}) -> {body}"),
                    None => format!("thurstone(V) -> {body}"),
                };
                parse_rule(&src).expect("fixture parses")
            })
            .collect(),
    )
}

/// Shortest prefix on which the fixture program is defined.
pub fn solution_reach(id: usize) -> Option<usize> {
    solution_spec(id).map(|s| s.iter().map(|x| x.2).max().unwrap_or(1).max(2))
}

pub fn thurstone_operators() -> Vec<OperatorDef> {
    let rt = RulePosition::parse("Rt1").expect("position");
    let mut ops = vec![meta_replace(1, RulePosition::parse("L1").expect("position"), tmpl("V"))];
    for f in ["head", "tail", "last", "init"] {
        ops.push(meta_replace(ops.len() + 1, rt.clone(), tmpl(&format!("{f}(@L1)"))));
    }
    for f in ["head", "tail", "last", "init", "next", "previous"] {
        ops.push(meta_replace(ops.len() + 1, rt.clone(), tmpl(&format!("{f}(@Rt1)"))));
    }
    let g = RulePosition::parse("G1").expect("position");
    for (f, k) in [("position", 2), ("position", 3), ("not_position", 2), ("not_position", 3), ("not_position", 4)] {
        ops.push(meta_insert(ops.len() + 1, g.clone(), tmpl(&format!("{f}(@L1,{k})"))));
    }
    ops.push(one_step_rew(ops.len() + 1));
    ops
}

fn tmpl(s: &str) -> Template {
    Template::parse(s).expect("template parses")
}

/// Learning problem for series `id`: its last `n_pos` decomposed instances
/// that the reference solution can reach.
pub fn thurstone_problem(id: usize) -> Option<Problem> {
    let s = series(id)?;
    let all = decompose_series(&s.example()).expect("bundled series decompose");
    let reach = solution_reach(id).unwrap_or(2);
    let usable: Vec<Rule> = all.into_iter().filter(|e| prefix_len(e) >= reach).collect();
    let keep = s.n_pos.min(usable.len());
    let mut p = Problem::new(&format!("thurstone-{id}"));
    p.pos = usable[usable.len() - keep..].to_vec();
    p.ops = thurstone_operators();
    Some(p)
}

pub fn prefix_len(e: &Rule) -> usize {
    match &e.lhs {
        Term::App(_, a) => a.first().and_then(|x| x.to_vec()).map_or(0, |v| v.len()),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{normal_form, Background, EvalBudget};
    use crate::term::sym;

    #[test]
    fn decomposition_of_first_series() {
        let inst = decompose_series(&series(1).unwrap().example()).unwrap();
        assert_eq!(inst.len(), 7);
        assert_eq!(inst[0].to_string(), "thurstone(\"cd\") -> c");
        assert_eq!(inst[6], series(1).unwrap().example());
        let short = parse_rule("thurstone(\"ab\") -> c").unwrap();
        assert_eq!(decompose_series(&short).unwrap().len(), 1);
        assert_eq!(decompose_series(&parse_rule("thurstone(\"a\") -> b").unwrap()), Err(CorpusError::SeriesTooShort));
    }

    #[test]
    fn fixtures_extrapolate_their_series() {
        let bg = Background::new(vec![], [sym("thurstone")]);
        for s in SERIES.iter().filter(|s| s.id != 7) {
            let prog = thurstone_solution(s.id).unwrap();
            let refs: Vec<&Rule> = prog.iter().collect();
            let got = normal_form(&s.example().lhs, &refs, &bg, EvalBudget::default()).unwrap();
            assert_eq!(got, Term::atom(&s.answer.to_string()), "series {}", s.id);
        }
        assert!(thurstone_solution(7).is_none());
    }
}
