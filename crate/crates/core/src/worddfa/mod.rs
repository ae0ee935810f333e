//! Acyclic word automata: subexpression identification (ψ) and
//! pseudo-continuation identification (∼e) by Revuz minimization.

mod automaton;
mod pseudo;
mod psi;

pub use automaton::{Edge, EdgeLabel, NodePartition, WordAutomaton, WordState};
pub use pseudo::{
    build_pseudo_continuation_automaton, pseudo_continuation, similarity_e,
    similarity_e_with_stats, KeyPartition, PseudoAutomaton, PseudoLetter, SimilarityStats,
};
pub use psi::{build_subexpression_automaton, psi_encoding, Psi, PsiLetter, PsiWord, TreeLetter};
