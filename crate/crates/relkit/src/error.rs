//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("empty symbol token")]
    Empty,
    #[error("symbol {0:?} contains whitespace or a comma")]
    IllegalChar(String),
    #[error("token {0:?} is reserved")]
    Reserved(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NfaError {
    #[error("transition endpoint {0} is not a declared state")]
    UnknownState(usize),
    #[error("letter {0} is outside the declared alphabet")]
    LetterOutsideAlphabet(String),
    #[error("operand alphabets differ")]
    AlphabetMismatch,
    #[error("initial state set is empty")]
    NoInitialState,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegexError {
    #[error("regex syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("regex token {token:?} at byte {pos} is not in the alphabet")]
    SymbolOutsideAlphabet { pos: usize, token: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("improper convolution: coordinate {coordinate} has a letter after padding")]
    ImproperConvolution { coordinate: usize },
    #[error("unknown builtin relation {0:?}")]
    UnknownBuiltin(String),
    #[error("coordinate {got} out of range for arity {arity}")]
    CoordinateOutOfRange { arity: usize, got: usize },
    #[error("letters of mixed arity in one relation")]
    MixedArity,
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("constraint shape {got:?} violates the solver's requirement ({required})")]
    ShapeViolation { required: &'static str, got: String },
    #[error("relation arity {relation} does not match constraint arity {constraints}")]
    ArityMismatch { relation: usize, constraints: usize },
    #[error("constraint pair ({0},{0}) requires a relation with a known reflexive diagonal")]
    DegenerateConstraint(usize),
    #[error("subsequence-closed operand has not been closed (run scr_close first)")]
    NotClosed,
    #[error("binary relation expected, got arity {0}")]
    NotBinary(usize),
    #[error("node budget of {budget} exhausted after expanding {expanded} nodes")]
    NodeBudgetExceeded { budget: u64, expanded: u64 },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("query syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("variable {0:?} is not declared free or bound")]
    UnboundVariable(String),
    #[error("path variable {0:?} used in more than one path atom")]
    DuplicatePathVar(String),
    #[error("path variable {0:?} does not name a path atom")]
    UnknownPathVar(String),
    #[error("comparison atoms name more than one relation: {0:?} and {1:?}")]
    MixedComparisonRelations(String, String),
    #[error("free variable {0:?} has no binding")]
    MissingBinding(String),
    #[error("regular-relation atom {0:?} has no registered relation")]
    MissingRegRelation(String),
    #[error("exact evaluation requested but the route is bounded-only: {0}")]
    Dispatch(String),
    #[error(transparent)]
    Regex(#[from] RegexError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("malformed LBA: {0}")]
    MalformedLba(String),
    #[error("PCP variant {variant} requires letter images of length <= 1")]
    UnnormalizedPcp { variant: &'static str },
    #[error("empty PCP pair list")]
    EmptyPcp,
    #[error(transparent)]
    Relation(#[from] RelationError),
}
