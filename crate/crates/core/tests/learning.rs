use ruleforge::corpus::{bundled, parse_problem, transfer_problem, TransformKind};
use ruleforge::policy::QTable;
use ruleforge::search::Population;
use ruleforge::{parse_rule, run, LearnConfig};

fn cfg(seed: u64, steps: usize) -> LearnConfig {
    LearnConfig { seed, max_steps: steps, ..LearnConfig::default() }
}

#[test]
fn reloaded_policy_matches_in_memory_continuation() {
    let p = bundled("last").unwrap();
    let first = run(&p, &cfg(9, 2000), None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    first.q_table.export(&path).unwrap();
    let loaded = QTable::import(&path).unwrap();
    let a = run(&p, &cfg(9, 2000), Some(&first.q_table)).unwrap();
    let b = run(&p, &cfg(9, 2000), Some(&loaded)).unwrap();
    assert_eq!(a.trace_csv(), b.trace_csv());
}

#[test]
fn rewards_replay_from_unit_optimality() {
    let p = bundled("last").unwrap();
    let c = cfg(5, 150);
    let r = run(&p, &c, None).unwrap();
    let scorer = p.scorer(&c);
    let mut checked = 0;
    for step in &r.trace {
        if let Some(d) = step.driver {
            let rule = &r.population.rules[d].rule;
            assert_eq!(step.reward, scorer.score(&[rule]).opt, "step {}", step.step);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn population_only_grows_and_programs_reference_known_rules() {
    let p = bundled("last").unwrap();
    let r = run(&p, &cfg(2, 200), None).unwrap();
    let n_rules = r.population.rules.len();
    let mut new_rules = p.pos.len();
    for step in &r.trace {
        new_rules += step.new_rules.len();
        assert!(step.new_rules.iter().all(|&i| i < n_rules));
    }
    assert_eq!(new_rules, n_rules);
    for prog in &r.population.programs {
        assert!(!prog.rules.is_empty());
        assert!(prog.rules.iter().all(|&i| i < n_rules));
        assert!(prog.rules.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn best_solution_is_top_ranked() {
    let p = bundled("last").unwrap();
    let r = run(&p, &cfg(1, 2000), None).unwrap();
    let best = r.best_solution().score.opt;
    assert!(r.population.programs.iter().all(|q| q.score.opt <= best));
}

#[test]
fn identity_only_operators_stop_at_the_step_limit() {
    let p = parse_problem("pos: f(a) -> b\nop 1 = replace(Rt1, @Rt1)\n").unwrap();
    let r = run(&p, &cfg(0, 25), None).unwrap();
    assert_eq!(r.steps, 25);
    assert_eq!(r.population.rules.len(), 1);
    assert_eq!(r.population.programs.len(), 1);
}

#[test]
fn combine_keeps_a_dominating_new_rule_alone() {
    let p = parse_problem("pos: f(a) -> x\npos: f(b) -> x\npos: f(c) -> x\nop 1 = one_step_rew\n").unwrap();
    let mut pop = Population::new(p.scorer(&LearnConfig::default()));
    for e in &p.pos {
        let id = pop.add_rule(e.clone()).unwrap();
        pop.add_program(vec![id]);
    }
    let rv = pop.add_rule(parse_rule("f(V) -> x").unwrap()).unwrap();
    let (ids, score) = pop.combine(rv, 0);
    assert_eq!(ids, vec![rv]);
    assert!(score.complete(3));
}

#[test]
fn transfer_runs_are_paired_by_seed() {
    let p = transfer_problem(TransformKind::OverPrefix, 4, 4);
    let a = run(&p, &cfg(4, 40), None).unwrap();
    let b = run(&p, &cfg(4, 40), None).unwrap();
    assert_eq!(a.trace_csv(), b.trace_csv());
    let other = transfer_problem(TransformKind::OverPrefix, 5, 5);
    assert_ne!(p.pos, other.pos);
}
