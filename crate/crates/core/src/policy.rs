//! Q table over abstract (state, operator, rule) keys, the linear model
//! fitted to it, greedy action selection and the Q update.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RlConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub q0: f64,
    pub retrain_period: usize,
}

impl Default for RlConfig {
    fn default() -> Self {
        RlConfig { alpha: 0.5, gamma: 0.5, q0: 1.0, retrain_period: 10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct QKey {
    state: [u64; 3],
    op_id: usize,
    rule: [u64; 8],
}

fn bits(x: f64) -> u64 {
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

impl QKey {
    fn new(state: &[f64; 3], op_id: usize, rule: &[f64; 8]) -> QKey {
        QKey { state: state.map(bits), op_id, rule: rule.map(bits) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QRow {
    pub state: [f64; 3],
    pub op_id: usize,
    pub rule: [f64; 8],
    pub q: f64,
}

/// Insertion-ordered table with one row per key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QTable {
    rows: IndexMap<QKey, QRow>,
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("no operators")]
    NoOperators,
    #[error("policy file is empty")]
    Empty,
    #[error("policy file line {line}, column {col}: {msg}")]
    Malformed { line: usize, col: usize, msg: String },
    #[error("policy file: {0}")]
    Io(#[from] std::io::Error),
}

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &QRow> {
        self.rows.values()
    }

    pub fn get(&self, state: &[f64; 3], op_id: usize, rule: &[f64; 8]) -> Option<f64> {
        self.rows.get(&QKey::new(state, op_id, rule)).map(|r| r.q)
    }

    /// Inserts the row with `q` unless the key already exists.
    pub fn ensure(&mut self, state: &[f64; 3], op_id: usize, rule: &[f64; 8], q: f64) -> f64 {
        self.rows.entry(QKey::new(state, op_id, rule)).or_insert(QRow { state: *state, op_id, rule: *rule, q }).q
    }

    pub fn set(&mut self, state: &[f64; 3], op_id: usize, rule: &[f64; 8], q: f64) {
        self.rows.insert(QKey::new(state, op_id, rule), QRow { state: *state, op_id, rule: *rule, q });
    }

    /// Copies rows of `other` whose keys are not present yet.
    pub fn absorb(&mut self, other: &QTable) {
        for (k, r) in &other.rows {
            self.rows.entry(*k).or_insert(*r);
        }
    }

    /// Shortest decimal forms, so that reading back is bit-exact.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("phi1,phi2,phi3,op_id,vphi1,vphi2,vphi3,vphi4,vphi5,vphi6,vphi7,vphi8,q\n");
        for r in self.rows.values() {
            for x in r.state {
                let _ = write!(s, "{x},");
            }
            let _ = write!(s, "{},", r.op_id);
            for x in r.rule {
                let _ = write!(s, "{x},");
            }
            let _ = writeln!(s, "{}", r.q);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<QTable, PolicyError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, col: usize, msg: &str| PolicyError::Malformed { line, col, msg: msg.into() };
        let Some((_, header)) = lines.next() else { return Err(PolicyError::Empty) };
        let expected = QTable::new().to_csv();
        if header.trim() != expected.trim() {
            return Err(bad(1, 1, "unexpected header"));
        }
        let mut table = QTable::new();
        for (i, line) in lines {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != 13 {
                return Err(bad(i + 1, 1, &format!("expected 13 columns, found {}", cells.len())));
            }
            let num = |c: usize| -> Result<f64, PolicyError> {
                cells[c]
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad(i + 1, c + 1, &format!("not a finite number: `{}`", cells[c])))
            };
            let state = [num(0)?, num(1)?, num(2)?];
            let op_id = cells[3].parse::<usize>().map_err(|_| bad(i + 1, 4, "op_id must be a natural number"))?;
            let mut rule = [0.0; 8];
            for (k, v) in rule.iter_mut().enumerate() {
                *v = num(4 + k)?;
            }
            let q = num(12)?;
            let key = QKey::new(&state, op_id, &rule);
            if table.rows.contains_key(&key) {
                return Err(bad(i + 1, 1, "duplicate key"));
            }
            table.rows.insert(key, QRow { state, op_id, rule, q });
        }
        if table.is_empty() {
            return Err(PolicyError::Empty);
        }
        Ok(table)
    }

    pub fn export(&self, path: &Path) -> Result<(), PolicyError> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn import(path: &Path) -> Result<QTable, PolicyError> {
        QTable::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Nine significant digits, printed in the shortest decimal form that reads
/// back to the rounded value.
pub fn fmt_sig9(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// One table row per (state, operator, distinct rule abstraction).
pub fn init_q(state: &[f64; 3], op_ids: &[usize], abstractions: &[[f64; 8]], q0: f64) -> Result<QTable, PolicyError> {
    if op_ids.is_empty() {
        return Err(PolicyError::NoOperators);
    }
    let mut t = QTable::new();
    for a in abstractions {
        for &op in op_ids {
            t.ensure(state, op, a, q0);
        }
    }
    Ok(t)
}

/// Linear model over 3 state features, dummy-coded operator ids, 8 rule
/// features and an intercept.
#[derive(Clone, Debug, PartialEq)]
pub struct QModel {
    pub intercept: f64,
    pub state_w: [f64; 3],
    pub rule_w: [f64; 8],
    pub op_w: BTreeMap<usize, f64>,
}

impl QModel {
    pub fn constant(c: f64) -> QModel {
        QModel { intercept: c, state_w: [0.0; 3], rule_w: [0.0; 8], op_w: BTreeMap::new() }
    }

    pub fn predict(&self, state: &[f64; 3], op_id: usize, rule: &[f64; 8]) -> f64 {
        let s: f64 = self.state_w.iter().zip(state).map(|(w, x)| w * x).sum();
        let r: f64 = self.rule_w.iter().zip(rule).map(|(w, x)| w * x).sum();
        self.intercept + s + r + self.op_w.get(&op_id).copied().unwrap_or(0.0)
    }
}

const RIDGE: f64 = 1e-6;

/// Least squares on standardized columns; constant columns get weight 0 and
/// a singular system falls back to ridge regularization.
pub fn train_model(q: &QTable) -> QModel {
    let rows: Vec<&QRow> = q.rows().collect();
    if rows.is_empty() {
        return QModel::constant(0.0);
    }
    let n = rows.len() as f64;
    let y_mean = rows.iter().map(|r| r.q).sum::<f64>() / n;
    if rows.iter().all(|r| r.q == rows[0].q) {
        return QModel::constant(rows[0].q);
    }
    let ops: Vec<usize> = {
        let mut v: Vec<usize> = rows.iter().map(|r| r.op_id).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    // Column j: 0..3 state, 3..11 rule, then one dummy per op except the first.
    let p = 11 + ops.len().saturating_sub(1);
    let value = |r: &QRow, j: usize| -> f64 {
        match j {
            0..=2 => r.state[j],
            3..=10 => r.rule[j - 3],
            _ => f64::from(u8::from(r.op_id == ops[j - 10])),
        }
    };
    let mut mean = vec![0.0; p];
    for r in &rows {
        for (j, m) in mean.iter_mut().enumerate() {
            *m += value(r, j) / n;
        }
    }
    let mut sd = vec![0.0; p];
    for r in &rows {
        for (j, s) in sd.iter_mut().enumerate() {
            *s += (value(r, j) - mean[j]).powi(2) / n;
        }
    }
    let active: Vec<usize> = (0..p).filter(|&j| sd[j].sqrt() > 1e-12 * (1.0 + mean[j].abs())).collect();
    let scale: Vec<f64> = sd.iter().map(|v| v.sqrt()).collect();
    let k = active.len();
    let mut model = QModel::constant(y_mean);
    if k == 0 {
        return model;
    }
    let mut gram = DMatrix::<f64>::zeros(k, k);
    let mut rhs = DVector::<f64>::zeros(k);
    let mut z = vec![0.0; k];
    for r in &rows {
        for (a, &j) in active.iter().enumerate() {
            z[a] = (value(r, j) - mean[j]) / scale[j];
        }
        let dy = r.q - y_mean;
        for a in 0..k {
            rhs[a] += z[a] * dy / n;
            for b in a..k {
                gram[(a, b)] += z[a] * z[b] / n;
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }
    let sv = gram.clone().singular_values();
    let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let singular = hi <= 0.0 || lo / hi < 1e-10;
    let mut system = gram;
    if singular {
        for a in 0..k {
            system[(a, a)] += RIDGE;
        }
    }
    let Some(w) = system.clone().cholesky().map(|c| c.solve(&rhs)).or_else(|| system.lu().solve(&rhs)) else {
        return model;
    };
    if w.iter().any(|x| !x.is_finite()) {
        return model;
    }
    let mut intercept = y_mean;
    for (a, &j) in active.iter().enumerate() {
        let wj = w[a] / scale[j];
        intercept -= wj * mean[j];
        match j {
            0..=2 => model.state_w[j] = wj,
            3..=10 => model.rule_w[j - 3] = wj,
            _ => {
                model.op_w.insert(ops[j - 10], wj);
            }
        }
    }
    model.intercept = intercept;
    model
}

/// Candidate action: an operator with one rule abstraction and the rules
/// sharing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub op_id: usize,
    pub features: [f64; 8],
    pub rules: Vec<usize>,
}

fn ties_with(a: f64, best: f64) -> bool {
    (a - best).abs() <= 1e-9 * best.abs().max(1.0)
}

pub fn best_prediction(model: &QModel, state: &[f64; 3], cands: &[Candidate]) -> Option<f64> {
    cands
        .iter()
        .map(|c| model.predict(state, c.op_id, &c.features))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
}

/// Greedy choice; ties between candidates and between rules of one
/// abstraction are broken uniformly. Returns (candidate index, rule id).
pub fn select_action<R: Rng>(
    model: &QModel,
    state: &[f64; 3],
    cands: &[Candidate],
    rng: &mut R,
) -> Option<(usize, usize)> {
    let preds: Vec<f64> = cands.iter().map(|c| model.predict(state, c.op_id, &c.features)).collect();
    let best = preds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..cands.len()).filter(|&i| ties_with(preds[i], best)).collect();
    if tied.is_empty() {
        return None;
    }
    let ci = tied[rng.gen_range(0..tied.len())];
    let rules = &cands[ci].rules;
    if rules.is_empty() {
        return None;
    }
    Some((ci, rules[rng.gen_range(0..rules.len())]))
}

/// `Q ← α(reward + γ·max_next) + (1−α)Q`, creating the row at q0 if needed.
/// Returns the new value.
pub fn update_q(
    table: &mut QTable,
    state: &[f64; 3],
    op_id: usize,
    rule: &[f64; 8],
    reward: f64,
    max_next: f64,
    cfg: &RlConfig,
) -> f64 {
    let old = table.ensure(state, op_id, rule, cfg.q0);
    let new = q_target(old, reward, max_next, cfg);
    table.set(state, op_id, rule, new);
    new
}

pub fn q_target(old: f64, reward: f64, max_next: f64, cfg: &RlConfig) -> f64 {
    cfg.alpha * (reward + cfg.gamma * max_next) + (1.0 - cfg.alpha) * old
}
