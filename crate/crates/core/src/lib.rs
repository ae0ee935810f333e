//! Equation tree automata of regular tree expressions.
//!
//! Two constructions are provided: a direct one built from partial
//! derivatives ([`derive`]) and a fast one built from k-C-continuations
//! ([`treeauto::build_equation_automaton_fast`]). They produce isomorphic
//! automata.

pub mod continuation;
pub mod corpus;
pub mod derive;
pub mod error;
pub mod semantics;
pub mod syntax;
pub mod treeauto;
pub mod worddfa;

pub use error::{Error, Result};
