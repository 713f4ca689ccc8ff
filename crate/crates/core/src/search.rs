//! The learning loop: rule generation, program combination, reward and stop
//! criterion.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::Problem;
use crate::features::{abstract_rule, abstract_state, RuleFeatures, StateFeatures};
use crate::mml::{Score, Scorer, ScoringConfig};
use crate::operators::{apply_operator, OperatorDef};
use crate::policy::{
    best_prediction, init_q, select_action, train_model, update_q, Candidate, QModel, QTable, RlConfig,
};
use crate::rewrite::EvalBudget;
use crate::rng;
use crate::term::Rule;

#[derive(Clone, Debug, PartialEq)]
pub struct LearnConfig {
    pub max_steps: usize,
    pub epsilon: f64,
    pub window_n: usize,
    pub budget: EvalBudget,
    pub scoring: ScoringConfig,
    pub rl: RlConfig,
    pub seed: u64,
    /// Programs considered for pairwise unions; 0 means all.
    pub pair_cap: usize,
    /// Stop as soon as a complete general program is found.
    pub stop_on_solution: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            max_steps: 2000,
            epsilon: 0.01,
            window_n: 20,
            budget: EvalBudget::default(),
            scoring: ScoringConfig::default(),
            rl: RlConfig::default(),
            seed: 0,
            pair_cap: 25,
            stop_on_solution: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl LearnConfig {
    /// Sets one option by its file/flag name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue { key: key.into(), value: value.into() };
        let f = || value.parse::<f64>().map_err(|_| bad());
        let n = || value.parse::<usize>().map_err(|_| bad());
        match key.replace('-', "_").as_str() {
            "max_steps" => self.max_steps = n()?,
            "epsilon" => self.epsilon = f()?,
            "window" | "window_n" => self.window_n = n()?,
            "alpha" => self.rl.alpha = f()?,
            "gamma" => self.rl.gamma = f()?,
            "q0" => self.rl.q0 = f()?,
            "retrain_period" => self.rl.retrain_period = n()?,
            "budget_steps" => self.budget.max_rewrite_steps = n()?,
            "budget_depth" => self.budget.max_term_depth = n()?,
            "beta1" => self.scoring.beta1 = f()?,
            "beta2" => self.scoring.beta2 = f()?,
            "pair_cap" => self.pair_cap = n()?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "stop_on_solution" => self.stop_on_solution = value.parse().map_err(|_| bad())?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.window_n < 2 {
            return Err(ConfigError::Invalid("window must be at least 2".into()));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(ConfigError::Invalid("epsilon must be non-negative".into()));
        }
        if !unit(self.rl.alpha) || !unit(self.rl.gamma) {
            return Err(ConfigError::Invalid("alpha and gamma must lie in [0, 1]".into()));
        }
        if !self.rl.q0.is_finite() || !self.scoring.beta1.is_finite() || !self.scoring.beta2.is_finite() {
            return Err(ConfigError::Invalid("q0, beta1 and beta2 must be finite".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> String {
        format!(
            "max_steps={} epsilon={} window={} alpha={} gamma={} q0={} retrain_period={} budget_steps={} budget_depth={} beta1={} beta2={} pair_cap={} stop_on_solution={} seed={}",
            self.max_steps,
            self.epsilon,
            self.window_n,
            self.rl.alpha,
            self.rl.gamma,
            self.rl.q0,
            self.rl.retrain_period,
            self.budget.max_rewrite_steps,
            self.budget.max_term_depth,
            self.scoring.beta1,
            self.scoring.beta2,
            self.pair_cap,
            self.stop_on_solution,
            self.seed
        )
    }
}

/// Sample standard deviation over the last `window_n` values.
pub fn stop_criterion(opts: &[f64], t: usize, epsilon: f64, window_n: usize, max_steps: usize) -> bool {
    if t >= max_steps {
        return true;
    }
    if window_n < 2 || opts.len() < window_n {
        return false;
    }
    let w = &opts[opts.len() - window_n..];
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (w.len() - 1) as f64;
    var.sqrt() <= epsilon
}

#[derive(Clone, Debug)]
pub struct RuleEntry {
    pub rule: Rule,
    pub features: RuleFeatures,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProgramEntry {
    /// Sorted ids into the rule population.
    pub rules: Vec<usize>,
    pub score: Score,
}

/// Rules, programs and the optimality cache shared by one run.
pub struct Population {
    pub scorer: Scorer,
    pub rules: Vec<RuleEntry>,
    pub programs: Vec<ProgramEntry>,
    seen_rules: HashSet<Rule>,
    seen_programs: HashSet<Vec<usize>>,
    cache: HashMap<Vec<usize>, Score>,
}

/// Guards form a conjunction, so repeats and order do not matter.
fn rule_key(rule: &Rule) -> Rule {
    let mut r = rule.canonical();
    r.guards.sort();
    r.guards.dedup();
    r.canonical()
}

fn better(a: &Score, b: &Score) -> bool {
    a.opt > b.opt || (a.opt == b.opt && a.msg_len < b.msg_len)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl Population {
    pub fn new(scorer: Scorer) -> Population {
        Population {
            scorer,
            rules: Vec::new(),
            programs: Vec::new(),
            seen_rules: HashSet::new(),
            seen_programs: HashSet::new(),
            cache: HashMap::new(),
        }
    }

    /// Adds `rule` unless an equal rule up to renaming and guard order
    /// exists.
    pub fn add_rule(&mut self, rule: Rule) -> Option<usize> {
        if !self.seen_rules.insert(rule_key(&rule)) {
            return None;
        }
        let features = abstract_rule(&rule, &self.scorer);
        self.rules.push(RuleEntry { rule, features });
        Some(self.rules.len() - 1)
    }

    pub fn contains_rule(&self, rule: &Rule) -> bool {
        self.seen_rules.contains(&rule_key(rule))
    }

    pub fn program_rules(&self, ids: &[usize]) -> Vec<&Rule> {
        ids.iter().map(|&i| &self.rules[i].rule).collect()
    }

    pub fn score(&mut self, ids: &[usize]) -> Score {
        if let Some(s) = self.cache.get(ids) {
            return s.clone();
        }
        let s = self.scorer.score(&self.program_rules(ids));
        self.cache.insert(ids.to_vec(), s.clone());
        s
    }

    /// Scores every key, computing missing ones in parallel.
    fn score_all(&mut self, keys: &[Vec<usize>]) -> Vec<Score> {
        let missing: Vec<&Vec<usize>> = {
            let mut seen = HashSet::new();
            keys.iter().filter(|k| !self.cache.contains_key(*k) && seen.insert(*k)).collect()
        };
        let fresh: Vec<Score> = {
            let this = &*self;
            missing.par_iter().map(|k| this.scorer.score(&this.program_rules(k))).collect()
        };
        for (k, s) in missing.into_iter().zip(fresh) {
            self.cache.insert(k.clone(), s);
        }
        keys.iter().map(|k| self.cache[k].clone()).collect()
    }

    /// Adds the program unless present. Returns whether it was new.
    pub fn add_program(&mut self, ids: Vec<usize>) -> bool {
        if !self.seen_programs.insert(ids.clone()) {
            return false;
        }
        let score = self.score(&ids);
        self.programs.push(ProgramEntry { rules: ids, score });
        true
    }

    /// Indices of programs ordered by optimality, then fewer bits, then age.
    pub fn ranked(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.programs.len()).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (&self.programs[a].score, &self.programs[b].score);
            y.opt.total_cmp(&x.opt).then(x.msg_len.total_cmp(&y.msg_len)).then(a.cmp(&b))
        });
        idx
    }

    /// Best of the best pairwise union, the best union with the new rule and
    /// the new rule alone.
    pub fn combine(&mut self, new_rule: usize, pair_cap: usize) -> (Vec<usize>, Score) {
        let ranked = self.ranked();
        let top: Vec<usize> =
            if pair_cap == 0 { ranked.clone() } else { ranked.iter().take(pair_cap).copied().collect() };
        let mut keys: Vec<Vec<usize>> = vec![vec![new_rule]];
        for (a, &i) in top.iter().enumerate() {
            for &j in &top[a + 1..] {
                keys.push(union(&self.programs[i].rules, &self.programs[j].rules));
            }
        }
        for &i in &ranked {
            keys.push(union(&self.programs[i].rules, &[new_rule]));
        }
        let scores = self.score_all(&keys);
        let mut best = 0;
        for k in 1..keys.len() {
            if better(&scores[k], &scores[best]) {
                best = k;
            }
        }
        (keys.swap_remove(best), scores[best].clone())
    }

    /// Every rule of the program generalizes (has a non-ground lhs) and the
    /// program is complete and consistent.
    pub fn is_solution(&self, p: &ProgramEntry) -> bool {
        p.score.complete(self.scorer.pos.len()) && p.rules.iter().all(|&i| !self.rules[i].rule.lhs.is_ground())
    }

    pub fn state(&self) -> StateFeatures {
        let sizes: Vec<f64> = self.rules.iter().map(|r| r.features.size).collect();
        let opts: Vec<f64> = self.programs.iter().map(|p| p.score.opt).collect();
        let lens: Vec<usize> = self.programs.iter().map(|p| p.rules.len()).collect();
        abstract_state(&sizes, &opts, &lens).expect("population is non-empty")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub op_id: usize,
    pub rule: usize,
    pub new_rules: Vec<usize>,
    /// The rule driving combination and reward.
    pub driver: Option<usize>,
    pub new_program: Option<Vec<usize>>,
    pub reward: f64,
    pub global_opt: f64,
    pub stop: bool,
}

pub struct LearnResult {
    pub population: Population,
    /// Program indices sorted by optimality.
    pub ranking: Vec<usize>,
    pub q_table: QTable,
    pub steps: usize,
    pub trace: Vec<TraceStep>,
    pub solved: bool,
}

impl LearnResult {
    pub fn programs(&self) -> impl Iterator<Item = &ProgramEntry> {
        self.ranking.iter().map(|&i| &self.population.programs[i])
    }

    pub fn best_solution(&self) -> &ProgramEntry {
        &self.population.programs[self.ranking[0]]
    }

    pub fn best_rules(&self) -> Vec<&Rule> {
        self.population.program_rules(&self.best_solution().rules)
    }

    pub fn trace_csv(&self) -> String {
        let mut s = String::from("step,op_id,rule_hash,reward,global_opt,stop_flag\n");
        for t in &self.trace {
            let hash = match t.driver {
                Some(r) => rule_hash(&self.population.rules[r].rule),
                None => "-".into(),
            };
            let _ = writeln!(s, "{},{},{},{},{},{}", t.step, t.op_id, hash, t.reward, t.global_opt, u8::from(t.stop));
        }
        s
    }
}

/// First 16 hex digits of the SHA-256 of the canonical rule text.
pub fn rule_hash(rule: &Rule) -> String {
    let digest = Sha256::digest(rule.canonical().to_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("no positive examples")]
    NoPositives,
    #[error("no operators")]
    NoOperators,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn feature_key(f: &[f64; 8]) -> [u64; 8] {
    f.map(|x| if x == 0.0 { 0 } else { x.to_bits() })
}

/// Candidates grouped by (operator, rule abstraction); pairs already tried
/// are left out unless nothing else remains.
fn candidates(pop: &Population, ops: &[OperatorDef], tried: &HashSet<(usize, usize)>) -> Vec<(usize, Candidate)> {
    let build = |skip_tried: bool| {
        let mut groups: indexmap::IndexMap<[u64; 8], Vec<usize>> = indexmap::IndexMap::new();
        for (i, r) in pop.rules.iter().enumerate() {
            groups.entry(feature_key(&r.features.vector())).or_default().push(i);
        }
        let mut out = Vec::new();
        for (oi, op) in ops.iter().enumerate() {
            for ids in groups.values() {
                let rules: Vec<usize> =
                    ids.iter().copied().filter(|&r| !skip_tried || !tried.contains(&(oi, r))).collect();
                if !rules.is_empty() {
                    let features = pop.rules[rules[0]].features.vector();
                    out.push((oi, Candidate { op_id: op.id, features, rules }));
                }
            }
        }
        out
    };
    let fresh = build(true);
    if fresh.is_empty() {
        build(false)
    } else {
        fresh
    }
}

/// Runs the search from scratch, or from an imported table.
pub fn run(problem: &Problem, cfg: &LearnConfig, policy: Option<&QTable>) -> Result<LearnResult, LearnError> {
    cfg.validate()?;
    if problem.pos.is_empty() {
        return Err(LearnError::NoPositives);
    }
    if problem.ops.is_empty() {
        return Err(LearnError::NoOperators);
    }
    let bg = problem.background();
    let mut rng = rng::stream(cfg.seed, "tie-break");
    let mut pop = Population::new(problem.scorer(cfg));
    for e in &problem.pos {
        if let Some(id) = pop.add_rule(e.clone()) {
            pop.add_program(vec![id]);
        }
    }
    let op_ids: Vec<usize> = problem.ops.iter().map(|o| o.id).collect();
    let s0 = pop.state().vector();
    let mut q = match policy {
        Some(table) => table.clone(),
        None => {
            let abstractions: Vec<[f64; 8]> = pop.rules.iter().map(|r| r.features.vector()).collect();
            init_q(&s0, &op_ids, &abstractions, cfg.rl.q0).map_err(|_| LearnError::NoOperators)?
        }
    };
    let mut model = QModel::constant(cfg.rl.q0);
    let mut tried: HashSet<(usize, usize)> = HashSet::new();
    let mut new_opts: Vec<f64> = Vec::new();
    let mut trace = Vec::new();
    let mut solved = pop.programs.iter().any(|p| pop.is_solution(p));
    let mut t = 0;
    while t < cfg.max_steps && !(solved && cfg.stop_on_solution) {
        t += 1;
        if cfg.rl.retrain_period <= 1 || t % cfg.rl.retrain_period == 1 {
            model = train_model(&q);
        }
        let state = pop.state().vector();
        let cands = candidates(&pop, &problem.ops, &tried);
        let Some((ci, rule_id)) =
            select_action(&model, &state, &cands.iter().map(|c| c.1.clone()).collect::<Vec<_>>(), &mut rng)
        else {
            break;
        };
        let (op_idx, cand) = &cands[ci];
        let op = &problem.ops[*op_idx];
        tried.insert((*op_idx, rule_id));
        let rule_feats = cand.features;

        let produced = apply_operator(op, &pop.rules[rule_id].rule, &bg);
        let mut new_rules = Vec::new();
        for r in produced {
            if let Some(id) = pop.add_rule(r) {
                new_rules.push(id);
            }
        }

        let driver = new_rules.iter().copied().max_by(|&a, &b| {
            let (x, y) = (&pop.rules[a].features, &pop.rules[b].features);
            x.opt.total_cmp(&y.opt).then(y.size.total_cmp(&x.size)).then(b.cmp(&a))
        });
        let mut new_program = None;
        let reward = match driver {
            Some(d) => {
                let (ids, _) = pop.combine(d, cfg.pair_cap);
                if pop.add_program(ids.clone()) {
                    let p = pop.programs.last().expect("just added");
                    new_opts.push(p.score.opt);
                    if pop.is_solution(p) {
                        solved = true;
                    }
                    new_program = Some(ids);
                }
                pop.rules[d].features.opt
            }
            None => pop.rules.iter().map(|r| r.features.opt).fold(f64::INFINITY, f64::min),
        };

        let next_state = pop.state();
        let next_cands: Vec<Candidate> = candidates(&pop, &problem.ops, &tried).into_iter().map(|c| c.1).collect();
        let max_next = best_prediction(&model, &next_state.vector(), &next_cands).unwrap_or(0.0);
        update_q(&mut q, &state, op.id, &rule_feats, reward, max_next, &cfg.rl);

        let stop =
            stop_criterion(&new_opts, t, cfg.epsilon, cfg.window_n, cfg.max_steps) || (solved && cfg.stop_on_solution);
        trace.push(TraceStep {
            step: t,
            op_id: op.id,
            rule: rule_id,
            new_rules,
            driver,
            new_program,
            reward,
            global_opt: next_state.global_opt,
            stop,
        });
        if stop {
            break;
        }
    }
    let ranking = pop.ranked();
    Ok(LearnResult { population: pop, ranking, q_table: q, steps: t, trace, solved })
}
