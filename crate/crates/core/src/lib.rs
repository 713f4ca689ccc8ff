//! Rule learning where the refinement operators are user-defined rewrite
//! transformations, the search over (operator, rule) actions is steered by
//! Q-learning over abstract features, and candidate programs are ranked by
//! message length.

pub mod bk;
pub mod corpus;
pub mod features;
pub mod mml;
pub mod operators;
pub mod policy;
pub mod rewrite;
pub mod rng;
pub mod search;
pub mod stats;
pub mod syntax;
pub mod term;
pub mod transfer;

pub use corpus::{bundled, load_problem, parse_problem, Problem, ProblemError};
pub use mml::{Score, Scorer};
pub use operators::{OperatorDef, Template};
pub use policy::{QTable, RlConfig};
pub use rewrite::{Background, BudgetExceeded, CoverageReport, EvalBudget};
pub use search::{run, LearnConfig, LearnError, LearnResult};
pub use syntax::{parse_rule, parse_term, print_rule, print_term};
pub use term::{match_term, BodyItem, Root, Rule, RulePosition, Splice, Subst, Symbol, Term};
