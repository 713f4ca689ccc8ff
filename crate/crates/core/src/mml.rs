//! Message-length complexity and optimality of programs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rewrite::{coverage_counts, Background, CoverageReport, EvalBudget};
use crate::term::{Rule, Term};

/// Vocabulary sizes used to price each symbol occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub n_f: usize,
    pub n_c: usize,
    pub n_v: usize,
}

impl Signature {
    /// Counts distinct functors, constants and variables over `terms`.
    /// Variables named `@...` are template position references and ignored.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Signature {
        let mut f = BTreeSet::new();
        let mut c = BTreeSet::new();
        let mut v = BTreeSet::new();
        for t in terms {
            collect(t, &mut f, &mut c, &mut v);
        }
        Signature { n_f: f.len(), n_c: c.len(), n_v: v.len() }
    }
}

fn collect(t: &Term, f: &mut BTreeSet<String>, c: &mut BTreeSet<String>, v: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !x.starts_with('@') {
                v.insert(x.to_string());
            }
        }
        Term::Atom(a) => {
            c.insert(format!("a:{a}"));
        }
        Term::Int(n) => {
            c.insert(format!("i:{n}"));
        }
        Term::Nil => {
            c.insert("[]".into());
        }
        Term::BkRef(n) => {
            f.insert(format!("&{n}"));
        }
        Term::Cons(h, tl) => {
            f.insert("[|]".into());
            collect(h, f, c, v);
            collect(tl, f, c, v);
        }
        Term::Map(a, b) => {
            collect(a, f, c, v);
            collect(b, f, c, v);
        }
        Term::Tuple(xs) => {
            f.insert(format!("{{}}/{}", xs.len()));
            xs.iter().for_each(|x| collect(x, f, c, v));
        }
        Term::App(g, xs) => {
            f.insert(format!("{g}/{}", xs.len()));
            xs.iter().for_each(|x| collect(x, f, c, v));
        }
    }
}

/// Occurrence counts `(functors, constants, variables)`.
pub fn symbol_counts(t: &Term) -> (usize, usize, usize) {
    match t {
        Term::Var(_) => (0, 0, 1),
        Term::Atom(_) | Term::Int(_) | Term::Nil => (0, 1, 0),
        Term::BkRef(_) => (1, 0, 0),
        Term::Map(a, b) => add(symbol_counts(a), symbol_counts(b)),
        Term::Cons(..) | Term::Tuple(_) | Term::App(..) => {
            t.children().into_iter().map(symbol_counts).fold((1, 0, 0), add)
        }
    }
}

fn add(a: (usize, usize, usize), b: (usize, usize, usize)) -> (usize, usize, usize) {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2)
}

pub fn msg_len_rule(rule: &Rule, sig: &Signature) -> f64 {
    let (f, c, v) = rule.terms().into_iter().map(symbol_counts).fold((0, 0, 0), add);
    let bits = |n: usize| ((n + 1) as f64).log2();
    f as f64 * bits(sig.n_f) + c as f64 * bits(sig.n_c) + v as f64 * bits(sig.n_v)
}

pub fn msg_len_program(rules: &[&Rule], sig: &Signature) -> f64 {
    rules.iter().map(|r| msg_len_rule(r, sig)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoringConfig {
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig { beta1: 1.0, beta2: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoringError {
    #[error("empty population")]
    EmptyPopulation,
}

/// Evidence and theory needed to score programs.
#[derive(Clone, Debug)]
pub struct Scorer {
    pub pos: Vec<Rule>,
    pub neg: Vec<Rule>,
    pub bg: Background,
    pub budget: EvalBudget,
    pub sig: Signature,
    pub cfg: ScoringConfig,
    pos_bits: Vec<f64>,
    neg_bits: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Score {
    pub opt: f64,
    pub msg_len: f64,
    pub evidence_bits: f64,
    pub coverage: CoverageReport,
}

impl Score {
    pub fn complete(&self, n_pos: usize) -> bool {
        self.coverage.pos() == n_pos && self.coverage.neg() == 0
    }
}

impl Scorer {
    pub fn new(
        pos: Vec<Rule>,
        neg: Vec<Rule>,
        bg: Background,
        budget: EvalBudget,
        sig: Signature,
        cfg: ScoringConfig,
    ) -> Scorer {
        let pos_bits = pos.iter().map(|e| msg_len_rule(e, &sig)).collect();
        let neg_bits = neg.iter().map(|e| msg_len_rule(e, &sig)).collect();
        Scorer { pos, neg, bg, budget, sig, cfg, pos_bits, neg_bits }
    }

    pub fn coverage(&self, prog: &[&Rule]) -> CoverageReport {
        coverage_counts(prog, &self.pos, &self.neg, &self.bg, self.budget)
    }

    /// Bits for the uncovered positives plus the covered negatives.
    pub fn evidence_bits(&self, report: &CoverageReport) -> f64 {
        let uncovered: f64 =
            (0..self.pos.len()).filter(|i| !report.covered_pos.contains(i)).map(|i| self.pos_bits[i]).sum();
        let covered_neg: f64 = report.covered_neg.iter().map(|&i| self.neg_bits[i]).sum();
        uncovered + covered_neg
    }

    pub fn score(&self, prog: &[&Rule]) -> Score {
        let coverage = self.coverage(prog);
        let msg_len = msg_len_program(prog, &self.sig);
        let evidence_bits = self.evidence_bits(&coverage);
        let opt = -self.cfg.beta1 * msg_len - self.cfg.beta2 * evidence_bits;
        Score { opt, msg_len, evidence_bits, coverage }
    }

    pub fn optimality(&self, prog: &[&Rule]) -> f64 {
        self.score(prog).opt
    }
}

/// Mean optimality over a population.
pub fn global_optimality(opts: &[f64]) -> Result<f64, ScoringError> {
    if opts.is_empty() {
        return Err(ScoringError::EmptyPopulation);
    }
    Ok(opts.iter().sum::<f64>() / opts.len() as f64)
}
