//! Alphabets, trees, expressions and their syntax trees.

mod alphabet;
mod expr;
mod linear;
mod parse;
mod syntax_tree;
mod tree;

pub use alphabet::{Label, RankedAlphabet, Symbol};
pub use expr::{ExprKind, RegExpr};
pub use linear::{linearize, linearize_tree, LinearRegExpr, Position};
pub use parse::{parse_expression, parse_marked_expression};
pub use syntax_tree::{NodeId, NodeKind, SyntaxTree};
pub use tree::Tree;

/// Parses an alphabet declaration such as `a/0 b/0 g/1 f/2`.
pub fn parse_alphabet(text: &str) -> crate::Result<RankedAlphabet> {
    RankedAlphabet::parse(text)
}
