use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ruleforge::policy::train_model;
use ruleforge::rewrite::normal_form;
use ruleforge::{bundled, match_term, parse_term, run, Background, EvalBudget, LearnConfig, Rule, Term};
use ruleforge_bench::{atom_list, last_program, random_q_table};

fn matching(c: &mut Criterion) {
    let pattern = parse_term("f([V_Head|V_Tail],g(V_X,b))").unwrap();
    let subject = Term::app("f", vec![atom_list(50), parse_term("g(h(a,[c,d]),b)").unwrap()]);
    c.bench_function("match_term", |b| b.iter(|| match_term(black_box(&pattern), black_box(&subject))));
}

fn rewriting(c: &mut Criterion) {
    let prog = last_program();
    let refs: Vec<&Rule> = prog.iter().collect();
    let bg = Background::default();
    let budget = EvalBudget { max_rewrite_steps: 10_000, ..EvalBudget::default() };
    let mut group = c.benchmark_group("normal_form_last");
    for n in [8, 64, 256] {
        let t = Term::app("last", vec![atom_list(n)]);
        group
            .bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| normal_form(t, &refs, &bg, budget)));
    }
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let problem = bundled("ooo").unwrap();
    let scorer = problem.scorer(&LearnConfig::default());
    let rule = ruleforge::parse_rule("ooo(V_Lists) -> distinct(map(&hamming,V_Lists))").unwrap();
    c.bench_function("score_ooo_rule", |b| b.iter(|| scorer.score(black_box(&[&rule]))));
}

fn regression(c: &mut Criterion) {
    let mut group = c.benchmark_group("train_model");
    for rows in [100, 1000] {
        let q = random_q_table(rows, 20, 7);
        group.bench_with_input(BenchmarkId::from_parameter(rows), &q, |b, q| b.iter(|| train_model(q)));
    }
    group.finish();
}

fn learning(c: &mut Criterion) {
    let problem = bundled("last").unwrap();
    let cfg = LearnConfig { seed: 7, ..LearnConfig::default() };
    let mut group = c.benchmark_group("learn");
    group.sample_size(10);
    group.bench_function("last_seed7", |b| b.iter(|| run(&problem, &cfg, None).unwrap().steps));
    group.finish();
}

criterion_group!(benches, matching, rewriting, scoring, regression, learning);
criterion_main!(benches);
