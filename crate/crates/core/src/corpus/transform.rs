//! Word transformation suites for policy transfer experiments.

use rand::seq::SliceRandom;

use super::Problem;
use crate::operators::{meta_replace, one_step_rew, OperatorDef, Template};
use crate::rng::stream;
use crate::term::{Rule, RulePosition, Term};

pub const WORDS: [&str; 40] = [
    "trade", "blade", "glade", "grade", "shade", "spade", "abide", "aside", "bride", "glide", "guide", "pride",
    "slide", "stride", "divide", "crude", "nude", "dude", "code", "mode", "node", "rode", "ride", "hide", "wide",
    "side", "tide", "made", "fade", "wade", "plate", "stone", "house", "brave", "smile", "flute", "crane", "prune",
    "brake", "bear",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    DToC,
    EToIng,
    DToPez,
    OverPrefix,
    MarkSuffix,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] = [
        TransformKind::DToC,
        TransformKind::EToIng,
        TransformKind::DToPez,
        TransformKind::OverPrefix,
        TransformKind::MarkSuffix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::DToC => "d-c",
            TransformKind::EToIng => "e-ing",
            TransformKind::DToPez => "d-pez",
            TransformKind::OverPrefix => "over",
            TransformKind::MarkSuffix => "mark",
        }
    }

    pub fn from_name(s: &str) -> Option<TransformKind> {
        TransformKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// `None` when the word lacks the trigger.
    pub fn apply(self, word: &str) -> Option<String> {
        match self {
            TransformKind::DToC => word.contains('d').then(|| word.replace('d', "c")),
            TransformKind::EToIng => word.strip_suffix('e').map(|w| format!("{w}ing")),
            TransformKind::DToPez => word.contains('d').then(|| word.replace('d', "pez")),
            TransformKind::OverPrefix => Some(format!("over{word}")),
            TransformKind::MarkSuffix => Some(format!("{word}mark")),
        }
    }
}

/// `trans("trade") -> "trace"` for the first `count` applicable words.
pub fn gen_transform_suite(kind: TransformKind, count: usize) -> Vec<Rule> {
    WORDS
        .iter()
        .filter_map(|w| kind.apply(w).map(|out| (w, out)))
        .take(count)
        .map(|(w, out)| Rule::new(Term::app("trans", vec![Term::string(w)]), Term::string(&out)))
        .collect()
}

fn op(id: usize, pos: &str, tmpl: &str) -> OperatorDef {
    meta_replace(id, RulePosition::parse(pos).expect("position"), Template::parse(tmpl).expect("template"))
}

/// Operators shared by all suites. With `order`, ids follow the permuted
/// order so that operator identity cannot be read off the id.
pub fn transfer_operators(order: Option<&[usize]>) -> Vec<OperatorDef> {
    let specs: [(&str, &str); 19] = [
        ("Rt1", "oneSust(@L1,@Rt1)"),
        ("Rt1", "nSust(@L1,@Rt1)"),
        ("Rt1", "addPrefix(@L1,@Rt1)"),
        ("Rt1", "addSuffix(@L1,@Rt1)"),
        ("L1", "V_List"),
        ("Rt1", "V_List"),
        ("Rt1.1", "V_List"),
        ("Rt1.2", "V_List"),
        ("Rt1", "reverse(@L1)"),
        ("Rt1", "reverse(@Rt1)"),
        ("Rt1", "tail(@L1)"),
        ("Rt1", "init(@L1)"),
        ("Rt1", "tail(@Rt1)"),
        ("Rt1", "init(@Rt1)"),
        ("Rt1", "append(@L1,@L1)"),
        ("L1.1", "V_Head"),
        ("L1.2", "V_Tail"),
        ("Rt1", "@L1"),
        ("Rt1", "subtract(@L1,@Rt1)"),
    ];
    let n = specs.len() + 1;
    let identity: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&identity);
    assert_eq!(order.len(), n, "operator order must be a permutation of {n}");
    order
        .iter()
        .enumerate()
        .map(|(i, &k)| match specs.get(k) {
            Some((pos, tmpl)) => op(i + 1, pos, tmpl),
            None => one_step_rew(i + 1),
        })
        .collect()
}

/// Ten of the twenty suite instances, sampled with `sample_seed`, and the
/// operators in an order shuffled with `order_seed`.
pub fn transfer_problem(kind: TransformKind, sample_seed: u64, order_seed: u64) -> Problem {
    let mut suite = gen_transform_suite(kind, 20);
    suite.shuffle(&mut stream(sample_seed, "sampling"));
    suite.truncate(10);
    let n = transfer_operators(None).len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(order_seed, "suite-order"));
    let mut p = Problem::new(&format!("transfer-{}", kind.name()));
    p.pos = suite;
    p.ops = transfer_operators(Some(&order));
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_instances() {
        assert_eq!(gen_transform_suite(TransformKind::DToC, 1)[0].to_string(), "trans(\"trade\") -> \"trace\"");
        assert_eq!(
            gen_transform_suite(TransformKind::OverPrefix, 1)[0].to_string(),
            "trans(\"trade\") -> \"overtrade\""
        );
        assert_eq!(TransformKind::DToC.apply("bear"), None);
        for k in TransformKind::ALL {
            assert_eq!(gen_transform_suite(k, 20).len(), 20, "{}", k.name());
            assert_eq!(TransformKind::from_name(k.name()), Some(k));
        }
    }

    #[test]
    fn problems_are_seeded() {
        let a = transfer_problem(TransformKind::EToIng, 3, 3);
        let b = transfer_problem(TransformKind::EToIng, 3, 3);
        assert_eq!(a.pos, b.pos);
        assert_eq!(a.pos.len(), 10);
        assert_eq!(a.ops.len(), 20);
        let shown: Vec<String> = a.ops.iter().map(|o| o.to_string()).collect();
        assert_eq!(shown, b.ops.iter().map(|o| o.to_string()).collect::<Vec<_>>());
    }
}
