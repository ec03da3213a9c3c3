//! Word relations over finite alphabets and the solvers that decide
//! their (generalized) intersection problems, plus a CRPQ/ECRPQ query
//! evaluator over edge-labeled graphs built on those solvers.

pub mod error;
pub mod acyclic;
pub mod constraint;
pub mod nfa;
pub mod oracle;
pub mod relation;
pub mod scr;
pub mod subseq;
pub mod regex;
pub mod symbol;

pub use error::{GeneratorError, NfaError, QueryError, RegexError, RelationError, SolveError};
pub use nfa::{EmptinessResult, Nfa};
pub use regex::compile_regex;
pub use relation::{
    builtin, convolve, deconvolve, projection, BuiltinRelation, Decision, PaddingDiscipline,
    RatRelation, RecRelation, RegRelation, TupleWord, BUILTIN_NAMES,
};
pub use acyclic::{image_under, solve_acyclic, ImageDirection};
pub use constraint::{classify_shape, ConstraintSet, Shape};
pub use oracle::{brute_genint, enumerate_tuples, AnyRelation, OracleResult, SOracle};
pub use scr::{int_rat_scr, int_scr_scr, scr_check, scr_close, ScrRelation};
pub use subseq::{is_subsequence, subseq_residual, tree_solve, tree_solve_with, TreeOptions, TreeRun};
pub use symbol::{display_word, sym, word, Alphabet, Letter, Symbol, Track, Word};
