use thiserror::Error;

/// Errors produced while parsing inputs or running the automaton pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}` in alphabet declaration")]
    DuplicateSymbol(String),
    #[error("malformed alphabet token `{0}` (expected name/arity)")]
    MalformedDeclaration(String),
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("symbol `{name}` has arity {expected} but is applied to {found} argument(s)")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` must be a constant (arity 0) to index a product or a star")]
    NotAConstant(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("child index {k} is out of range for a symbol of arity {arity}")]
    InvalidChild { k: usize, arity: usize },
    #[error("no position with index {0}")]
    UnknownPosition(u32),
    #[error("word automaton has a cycle")]
    Cyclic,
    #[error("word automaton is not deterministic at state {0}")]
    Nondeterministic(usize),
    #[error("word automaton still has epsilon or multi-letter edges")]
    NotLetterLabelled,
    #[error("state {0} cannot reach a final state")]
    NotCoaccessible(usize),
    #[error("epsilon cycle through state {0}")]
    EpsilonCycle(usize),
    #[error("isomorphism check limited to {limit} states, got {found}")]
    SizeLimit { limit: usize, found: usize },
    #[error("invalid automaton file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
