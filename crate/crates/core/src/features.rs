//! Fixed-length abstractions of rules and search states.

use crate::mml::{msg_len_rule, Scorer};
use crate::term::{Rule, Term};

/// The eight rule features plus the unit-program optimality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuleFeatures {
    pub size: f64,
    pub pos_cov: f64,
    pub neg_cov: f64,
    pub num_vars: f64,
    pub num_cons: f64,
    pub num_funcs: f64,
    pub num_structs: f64,
    pub is_rec: f64,
    pub opt: f64,
}

impl RuleFeatures {
    pub fn vector(&self) -> [f64; 8] {
        [
            self.size,
            self.pos_cov,
            self.neg_cov,
            self.num_vars,
            self.num_cons,
            self.num_funcs,
            self.num_structs,
            self.is_rec,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateFeatures {
    pub global_opt: f64,
    pub avg_rule_size: f64,
    pub avg_prog_size: f64,
}

impl StateFeatures {
    pub fn vector(&self) -> [f64; 3] {
        [self.global_opt, self.avg_rule_size, self.avg_prog_size]
    }
}

#[derive(Default, Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolClasses {
    pub vars: usize,
    pub cons: usize,
    pub funcs: usize,
    pub structs: usize,
}

/// Classifies every symbol once: whole lists and tuples are structures,
/// applications and function references are functors.
pub fn classify(rule: &Rule) -> SymbolClasses {
    let mut acc = SymbolClasses::default();
    for t in rule.terms() {
        walk(t, false, &mut acc);
    }
    acc
}

fn walk(t: &Term, in_tail: bool, acc: &mut SymbolClasses) {
    match t {
        Term::Var(_) => acc.vars += 1,
        Term::Atom(_) | Term::Int(_) => acc.cons += 1,
        Term::Nil => {
            if !in_tail {
                acc.structs += 1;
            }
        }
        Term::Cons(h, tl) => {
            if !in_tail {
                acc.structs += 1;
            }
            walk(h, false, acc);
            walk(tl, true, acc);
        }
        Term::Tuple(xs) => {
            acc.structs += 1;
            xs.iter().for_each(|x| walk(x, false, acc));
        }
        Term::App(_, xs) => {
            acc.funcs += 1;
            xs.iter().for_each(|x| walk(x, false, acc));
        }
        Term::BkRef(_) => acc.funcs += 1,
        Term::Map(a, b) => {
            walk(a, false, acc);
            walk(b, false, acc);
        }
    }
}

pub fn abstract_rule(rule: &Rule, scorer: &Scorer) -> RuleFeatures {
    let score = scorer.score(&[rule]);
    let cls = classify(rule);
    RuleFeatures {
        size: msg_len_rule(rule, &scorer.sig),
        pos_cov: score.coverage.pos() as f64,
        neg_cov: score.coverage.neg() as f64,
        num_vars: cls.vars as f64,
        num_cons: cls.cons as f64,
        num_funcs: cls.funcs as f64,
        num_structs: cls.structs as f64,
        is_rec: if rule.is_recursive() { 1.0 } else { 0.0 },
        opt: score.opt,
    }
}

/// Mean program optimality, mean rule length and mean program size.
pub fn abstract_state(rule_sizes: &[f64], prog_opts: &[f64], prog_sizes: &[usize]) -> Option<StateFeatures> {
    if rule_sizes.is_empty() || prog_opts.is_empty() || prog_sizes.len() != prog_opts.len() {
        return None;
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Some(StateFeatures {
        global_opt: mean(prog_opts),
        avg_rule_size: mean(rule_sizes),
        avg_prog_size: prog_sizes.iter().sum::<usize>() as f64 / prog_sizes.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_rule;

    #[test]
    fn classes_partition_symbols() {
        let rule = parse_rule("last([H|T]) -> last(T)").unwrap();
        let c = classify(&rule);
        assert_eq!(c, SymbolClasses { vars: 3, cons: 0, funcs: 2, structs: 1 });
        let rule = parse_rule("raven([[{a,1}],[]]) -> [{a,1}]").unwrap();
        let c = classify(&rule);
        assert_eq!(c, SymbolClasses { vars: 0, cons: 4, funcs: 1, structs: 6 });
    }

    #[test]
    fn state_means() {
        let s = abstract_state(&[2.0, 4.0], &[-1.0, -3.0], &[1, 2]).unwrap();
        assert_eq!(s, StateFeatures { global_opt: -2.0, avg_rule_size: 3.0, avg_prog_size: 1.5 });
        assert!(abstract_state(&[], &[-1.0], &[1]).is_none());
    }
}
