use proptest::prelude::*;
use ruleforge::rewrite::normal_form;
use ruleforge::{match_term, parse_rule, parse_term, print_term, Background, EvalBudget, Rule, Subst, Term};

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["V_A", "V_B", "V_C"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b", "c", "nil2"]).prop_map(Term::atom),
        (-5i64..20).prop_map(Term::Int),
        Just(Term::Nil),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["f", "g", "h"]), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(f, args)| Term::app(f, args)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Term::Tuple),
            prop::collection::vec(inner, 0..4).prop_map(Term::list),
        ]
    })
}

fn ground_term() -> impl Strategy<Value = Term> {
    term().prop_filter("ground", Term::is_ground)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn instantiated_patterns_match(p in term(), a in ground_term(), b in ground_term(), c in ground_term()) {
        let mut theta = Subst::new();
        for (v, t) in [("V_A", a), ("V_B", b), ("V_C", c)] {
            theta.insert(v.into(), t);
        }
        let subject = p.apply(&theta);
        let found = match_term(&p, &subject);
        prop_assert!(found.is_some());
        prop_assert_eq!(p.apply(&found.unwrap()), subject);
    }

    #[test]
    fn any_match_is_sound(p in term(), s in ground_term()) {
        if let Some(theta) = match_term(&p, &s) {
            prop_assert_eq!(p.apply(&theta), s);
        }
    }

    #[test]
    fn printed_terms_parse_back(t in term()) {
        let text = print_term(&t);
        prop_assert_eq!(parse_term(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn larger_budgets_keep_results(n in 1usize..40, b in 1usize..60, extra in 0usize..60) {
        let prog: Vec<Rule> = ["last([V_Head]) -> V_Head", "last([V_Head|V_Tail]) -> last(V_Tail)"]
            .iter()
            .map(|s| parse_rule(s).unwrap())
            .collect();
        let refs: Vec<&Rule> = prog.iter().collect();
        let bg = Background::default();
        let items: Vec<Term> = (0..n).map(|i| Term::Int(i as i64)).collect();
        let t = Term::app("last", vec![Term::list(items)]);
        let small = EvalBudget { max_rewrite_steps: b, ..EvalBudget::default() };
        let large = EvalBudget { max_rewrite_steps: b + extra, ..EvalBudget::default() };
        if let Ok(x) = normal_form(&t, &refs, &bg, small) {
            prop_assert_eq!(normal_form(&t, &refs, &bg, large), Ok(x));
        }
    }
}

#[test]
fn budget_boundary_for_last() {
    let prog: Vec<Rule> = ["last([V_Head]) -> V_Head", "last([V_Head|V_Tail]) -> last(V_Tail)"]
        .iter()
        .map(|s| parse_rule(s).unwrap())
        .collect();
    let refs: Vec<&Rule> = prog.iter().collect();
    let bg = Background::default();
    let t = parse_term("last([a,b,c,d])").unwrap();
    let ok = (1..10)
        .find(|&b| normal_form(&t, &refs, &bg, EvalBudget { max_rewrite_steps: b, ..EvalBudget::default() }).is_ok())
        .expect("some budget suffices");
    // Three recursive steps and one base step.
    assert_eq!(ok, 4);
}
