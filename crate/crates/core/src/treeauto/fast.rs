//! The equation automaton from the quotient of the continuation automaton
//! by ∼e, computed without materializing continuations.

use std::time::{Duration, Instant};

use crate::continuation::{build_zpc, chain_for, materialize, ChainScanner, ContKey, ZpcStructure};
use crate::error::Result;
use crate::syntax::{linearize, Label, RankedAlphabet, RegExpr};
use crate::worddfa::{psi_encoding, similarity_e_with_stats, KeyPartition, SimilarityStats};

use super::automaton::TreeAutomaton;

/// Index of every key in [`ZpcStructure::keys`] order.
struct KeyIndex {
    /// offset[j - 1] is the index of f_j^1.
    offset: Vec<usize>,
}

impl KeyIndex {
    fn new(zpc: &ZpcStructure) -> Self {
        let lin = zpc.linear();
        let mut offset = Vec::with_capacity(lin.positions.len());
        let mut next = 1;
        for &node in &lin.origin {
            offset.push(next);
            next += zpc.tree().children(node).len();
        }
        KeyIndex { offset }
    }

    fn child(&self, j: u32, k: usize) -> usize {
        self.offset[j as usize - 1] + k - 1
    }
}

fn key_name(zpc: &ZpcStructure, alphabet: &RankedAlphabet, key: ContKey, render: bool) -> String {
    if render {
        let chain = chain_for(zpc, key).expect("key from zpc");
        materialize(zpc, &chain).project().render(alphabet)
    } else {
        key.name(alphabet)
    }
}

/// C_E (or C̄_E with `marked`): one state per continuation key, ε¹ final.
/// f(x_1,…,x_n) → x whenever f_j ∈ First(C_x), with x_k = f_j^k, and
/// c → x whenever c ∈ ⟦C_x⟧.
pub fn build_c_continuation_automaton(
    zpc: &ZpcStructure,
    alphabet: &RankedAlphabet,
    marked: bool,
) -> TreeAutomaton {
    let keys = zpc.keys();
    let index = KeyIndex::new(zpc);
    let mut aut = TreeAutomaton::new(alphabet.clone());
    for &key in &keys {
        aut.add_state(key.name(alphabet), key == ContKey::Epsilon);
    }
    let mut scanner = ChainScanner::new(zpc);
    for (x, &key) in keys.iter().enumerate() {
        let chain = chain_for(zpc, key).expect("key from zpc");
        let first = scanner.scan(zpc, &chain);
        for &j in &first.positions {
            let p = zpc.linear().positions[j as usize - 1];
            let arity = alphabet.arity(p.base);
            let label = if marked {
                p.label()
            } else {
                Label::plain(p.base)
            };
            aut.add_rule(x, label, (1..=arity).map(|k| index.child(j, k)).collect());
        }
        for c in first.constants {
            aut.add_leaf_rule(x, c);
        }
    }
    aut
}

/// Stage names, in execution order.
pub const STAGES: [&str; 6] = [
    "linearize",
    "zpc",
    "psi",
    "sim_e",
    "follow",
    "quotient_trim",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FastOptions {
    /// Name states by the rendered projected continuation; otherwise by the
    /// first key of their class.
    pub render_names: bool,
}

impl Default for FastOptions {
    fn default() -> Self {
        FastOptions { render_names: true }
    }
}

#[derive(Debug, Clone)]
pub struct FastBuild {
    pub automaton: TreeAutomaton,
    pub partition: KeyPartition,
    pub stats: SimilarityStats,
    /// Wall time per entry of [`STAGES`].
    pub timings: Vec<(&'static str, Duration)>,
}

type Timings = Vec<(&'static str, Duration)>;

struct Lap(Instant);

impl Lap {
    fn mark(&mut self, name: &'static str, timings: &mut Timings) {
        let now = Instant::now();
        timings.push((name, now - self.0));
        self.0 = now;
    }
}

/// Output of the stages up to and including ∼e.
#[derive(Debug, Clone)]
pub struct FrontEnd {
    pub zpc: ZpcStructure,
    pub partition: KeyPartition,
    pub stats: SimilarityStats,
    /// Wall time of the first four entries of [`STAGES`].
    pub timings: Vec<(&'static str, Duration)>,
}

/// Linearization, ZPC structure, ψ and ∼e. Linear in |E|.
pub fn run_front_end(expr: &RegExpr) -> Result<FrontEnd> {
    let mut timings = Vec::with_capacity(STAGES.len());
    let mut lap = Lap(Instant::now());
    let lin = linearize(expr);
    lap.mark("linearize", &mut timings);
    let zpc = build_zpc(&lin);
    lap.mark("zpc", &mut timings);
    let psi = psi_encoding(zpc.tree())?;
    lap.mark("psi", &mut timings);
    let (partition, stats) = similarity_e_with_stats(&zpc, &psi)?;
    lap.mark("sim_e", &mut timings);
    Ok(FrontEnd {
        zpc,
        partition,
        stats,
        timings,
    })
}

/// Runs the whole pipeline and keeps the per-stage timings.
pub fn run_fast_pipeline(
    expr: &RegExpr,
    alphabet: &RankedAlphabet,
    options: FastOptions,
) -> Result<FastBuild> {
    let FrontEnd {
        zpc,
        partition,
        stats,
        mut timings,
    } = run_front_end(expr)?;
    let mut lap = Lap(Instant::now());
    let lin = zpc.linear();

    let index = KeyIndex::new(&zpc);
    let mut aut = TreeAutomaton::new(alphabet.clone());
    let mut reps = vec![usize::MAX; partition.classes];
    for (x, &c) in partition.class_of.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = x;
        }
    }
    for (c, &x) in reps.iter().enumerate() {
        let key = partition.keys[x];
        let name = key_name(&zpc, alphabet, key, options.render_names);
        let q = aut.add_state(name, key == ContKey::Epsilon);
        debug_assert_eq!(q, c);
    }
    let mut scanner = ChainScanner::new(&zpc);
    for (c, &x) in reps.iter().enumerate() {
        let chain = chain_for(&zpc, partition.keys[x])?;
        let first = scanner.scan(&zpc, &chain);
        for &j in &first.positions {
            let base = lin.positions[j as usize - 1].base;
            let children = (1..=alphabet.arity(base))
                .map(|k| partition.class_of[index.child(j, k)])
                .collect();
            aut.add_rule(c, Label::plain(base), children);
        }
        for s in first.constants {
            aut.add_leaf_rule(c, s);
        }
    }
    aut.dedup();
    lap.mark("follow", &mut timings);
    let automaton = aut.coaccessible_trim();
    lap.mark("quotient_trim", &mut timings);
    Ok(FastBuild {
        automaton,
        partition,
        stats,
        timings,
    })
}

/// A_E via C_E/∼e, trimmed to the states reachable from ε¹.
pub fn build_equation_automaton_fast(
    expr: &RegExpr,
    alphabet: &RankedAlphabet,
) -> Result<TreeAutomaton> {
    run_fast_pipeline(expr, alphabet, FastOptions::default()).map(|b| b.automaton)
}
