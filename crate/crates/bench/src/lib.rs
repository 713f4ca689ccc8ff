//! Benchmark workloads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruleforge::policy::QTable;
use ruleforge::{parse_rule, parse_term, Rule, Term};

/// A list of `n` atoms, `[a0,a1,...]`.
pub fn atom_list(n: usize) -> Term {
    let items: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    parse_term(&format!("[{}]", items.join(","))).expect("list literal")
}

/// The recursive last-element program.
pub fn last_program() -> Vec<Rule> {
    ["last([V_Head]) -> V_Head", "last([V_Head|V_Tail]) -> last(V_Tail)"]
        .iter()
        .map(|s| parse_rule(s).expect("rule literal"))
        .collect()
}

/// A Q table with `rows` random rows over `ops` operators.
pub fn random_q_table(rows: usize, ops: usize, seed: u64) -> QTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = QTable::new();
    for _ in 0..rows {
        let state = [rng.gen_range(-500.0..0.0), rng.gen_range(0.0..100.0), rng.gen_range(1.0..4.0)];
        let rule = std::array::from_fn(|_| f64::from(rng.gen_range(0u8..10)));
        q.set(&state, rng.gen_range(1..=ops), &rule, rng.gen_range(-2000.0..0.0));
    }
    q
}
