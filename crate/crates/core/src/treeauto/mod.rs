//! Bottom-up tree automata, comparison helpers and the fast equation
//! automaton construction.

mod automaton;
mod compare;
mod fast;

pub use automaton::{LeafRule, Rule, StateId, StatePartition, TreeAutomaton};
pub use compare::{
    accepted_trees_up_to, isomorphic, language_difference_up_to, language_equal_up_to,
    ISOMORPHISM_LIMIT,
};
pub use fast::{
    build_c_continuation_automaton, build_equation_automaton_fast, run_fast_pipeline,
    run_front_end, FastBuild, FastOptions, FrontEnd, STAGES,
};
