//! Odd-one-out items in letter coding.

use crate::syntax::parse_rule;
use crate::term::{Rule, Term};

/// Items of each example and the 1-based index of the outlier.
const ITEMS: [(&str, i64); 35] = [
    ("AAA AAA ABB", 3),
    ("AAA AAA BCD", 3),
    ("AAA AAB AAC", 1),
    ("AAA ABB ABB", 1),
    ("AAA BBB ABC", 3),
    ("AAA BCD EFG", 1),
    ("AAA BBC CCB", 1),
    ("AAB AAB ABC", 3),
    ("AAB AAC DEF", 3),
    ("AAB ABB EFG", 3),
    ("ABC ABC ABD", 3),
    ("AAB ABB ABC", 3),
    ("ABC ADE FGH", 3),
    ("AAAA BBDE CCFG", 1),
    ("AAAA AABB AACC", 1),
    ("AAAD BBEF CCGH", 1),
    ("AABB AABB ABCD", 3),
    ("AABC AACD ABCD", 1),
    ("AAAB BBBD CCCE", 3),
    ("ABCD ABCD ABCE", 3),
    ("ABCD ABCE ABFG", 3),
    ("AABC BBAC CCAF", 3),
    ("ABCD AEFG HIJK", 3),
    ("AAAA AAAA BBBB BBBB CCCC", 5),
    ("AAAD AAAE BBBF BBBG CCCH", 5),
    ("AABB BBCC AADD DDCC EEFF", 5),
    ("AAEF BBGH CCIJ DDKL ABCD", 5),
    ("AAAE BBBF CCGH DDIJ ABCD", 5),
    ("AAAE BBBF CCGH DDIJ AABB", 5),
    ("AAAB BBBF CCGH DDIJ AABB", 5),
    ("AABB BBCC AADD DDCC AAEE", 5),
    ("ABCD BCDE CDEF DEFG FGAB", 5),
    ("ACDE AFGH BIJK BLMN OPQR", 5),
    ("ABEF ABGH CDEG CDFH ABCD", 5),
    ("ACDE AFGH BIJK BLMN ABOP", 5),
];

/// `ooo(["aaa","aaa","abb"]) -> 3` for every item, in table order.
pub fn ooo_items() -> Vec<Rule> {
    ITEMS
        .iter()
        .map(|(items, answer)| {
            let lists = items.split_whitespace().map(|w| Term::string(&w.to_ascii_lowercase()));
            Rule::new(Term::app("ooo", vec![Term::list(lists)]), Term::Int(*answer))
        })
        .collect()
}

pub fn ooo_rule_hamming() -> Rule {
    parse_rule("ooo(V_Lists) -> distinct(map(&hamming,V_Lists))").expect("fixture parses")
}

pub fn ooo_rule_diffobj() -> Rule {
    parse_rule("ooo(V_Lists) -> distinct(map(&diffObj,V_Lists))").expect("fixture parses")
}

pub fn ooo_problem() -> super::Problem {
    super::bundled("ooo").expect("bundled ooo problem parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_item_encoding() {
        assert_eq!(ooo_items()[2].to_string(), "ooo([\"aaa\",\"aab\",\"aac\"]) -> 1");
        assert_eq!(ooo_items().len(), 35);
    }
}
