use std::collections::HashMap;

use super::automaton::{EdgeLabel, WordAutomaton, WordState};
use super::psi::{Psi, PsiLetter};
use crate::continuation::{chain_for, ContKey, ZpcStructure};
use crate::error::Result;
use crate::syntax::{NodeKind, RankedAlphabet};

/// Letters of B_T(Ē): marker letters out of ν_T, then ψ′ letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PseudoLetter {
    Marker(ContKey),
    Psi(PsiLetter),
}

impl PseudoLetter {
    pub fn name(self, alphabet: &RankedAlphabet) -> String {
        match self {
            PseudoLetter::Marker(k) => k.name(alphabet),
            PseudoLetter::Psi(PsiLetter::Class(i)) => i.to_string(),
            PseudoLetter::Psi(PsiLetter::Dot(c)) => format!(".{}", alphabet.name(c)),
        }
    }
}

/// B_T(Ē) together with the states standing for nodes and markers.
#[derive(Debug, Clone)]
pub struct PseudoAutomaton {
    pub automaton: WordAutomaton<PseudoLetter>,
    pub terminal: WordState,
    pub node_state: Vec<Option<WordState>>,
    pub marker_state: HashMap<ContKey, WordState>,
}

impl PseudoAutomaton {
    pub fn state_name(
        &self,
        zpc: &ZpcStructure,
        alphabet: &RankedAlphabet,
        q: WordState,
    ) -> String {
        if q == self.terminal {
            return "T".into();
        }
        if let Some(v) = self.node_state.iter().position(|&s| s == Some(q)) {
            return match zpc.tree().kind(v) {
                NodeKind::Apply(l) => alphabet.label_name(l),
                NodeKind::Sum => format!("+@{v}"),
                NodeKind::Product(c) => format!(".{}@{v}", alphabet.name(c)),
                NodeKind::Star(c) => format!("*{}@{v}", alphabet.name(c)),
                NodeKind::Const(c) => alphabet.name(c).to_string(),
            };
        }
        self.marker_state
            .iter()
            .find(|(_, &s)| s == q)
            .map(|(k, _)| k.name(alphabet))
            .unwrap_or_else(|| format!("s{q}"))
    }
}

fn psi_word(word: Vec<PsiLetter>) -> EdgeLabel<PseudoLetter> {
    EdgeLabel::Word(word.into_iter().map(PseudoLetter::Psi).collect())
}

/// B_T(Ē): ν_T reads a marker f_j^k, the marker reads ψ′ of the k-th child
/// subexpression up to the node of f_j, and every node climbs to its father
/// reading `.c ψ(E_γ(ν))` when γ(ν) exists and ε otherwise. The root is
/// final. With `with_epsilon`, an extra ε¹ marker reads ψ′(E) straight to
/// the root so that ε¹ takes part in the comparison.
pub fn build_pseudo_continuation_automaton(
    zpc: &ZpcStructure,
    psi: &Psi,
    with_epsilon: bool,
) -> PseudoAutomaton {
    let tree = zpc.tree();
    let n = tree.len();
    let mut aut = WordAutomaton::new();
    let terminal = aut.add_state(false);
    aut.set_initial(terminal);
    let mut node_state = vec![None; n];
    for (v, slot) in node_state.iter_mut().enumerate() {
        if !matches!(tree.kind(v), NodeKind::Const(_)) {
            *slot = Some(aut.add_state(v == tree.root()));
        }
    }
    let mut marker_state = HashMap::new();
    for key in zpc.keys() {
        let node_of_key = match key {
            ContKey::Epsilon if !with_epsilon => continue,
            ContKey::Epsilon => tree.root(),
            ContKey::Child(p, _) => zpc.linear().node_of(p).expect("known position"),
        };
        let Some(target) = node_state[node_of_key] else {
            // Only a constant root can lack a node state; ε¹ then reads ψ(E)
            // into the terminal-free root. Model the root as a final state.
            let q = aut.add_state(false);
            let root = aut.add_state(true);
            aut.add_letter(terminal, PseudoLetter::Marker(key), q);
            aut.add_edge(q, psi_word(psi.prime(tree, tree.root())), root);
            marker_state.insert(key, q);
            continue;
        };
        let head = match key {
            ContKey::Epsilon => tree.root(),
            ContKey::Child(_, k) => tree.children(node_of_key)[k - 1],
        };
        let q = aut.add_state(false);
        aut.add_letter(terminal, PseudoLetter::Marker(key), q);
        aut.add_edge(q, psi_word(psi.prime(tree, head)), target);
        marker_state.insert(key, q);
    }
    for v in 0..n {
        let (Some(from), Some(parent)) = (node_state[v], tree.parent(v)) else {
            continue;
        };
        let to = node_state[parent].expect("fathers are never constants");
        match zpc.gamma(v) {
            Some(g) => {
                let c = match tree.kind(parent) {
                    NodeKind::Product(c) | NodeKind::Star(c) => c,
                    _ => unreachable!(),
                };
                aut.add_edge(
                    from,
                    psi_word(vec![PsiLetter::Dot(c), PsiLetter::Class(psi.of(g))]),
                    to,
                );
            }
            None => aut.add_edge(from, EdgeLabel::Epsilon, to),
        }
    }
    PseudoAutomaton {
        automaton: aut,
        terminal,
        node_state,
        marker_state,
    }
}

/// l_x(E) = ψ′(h(C_x(Ē))), read off the chain.
pub fn pseudo_continuation(zpc: &ZpcStructure, psi: &Psi, key: ContKey) -> Result<Vec<PsiLetter>> {
    let chain = chain_for(zpc, key)?;
    let mut word = psi.prime(zpc.tree(), chain.head);
    for &(c, g) in &chain.links {
        word.push(PsiLetter::Dot(c));
        word.push(PsiLetter::Class(psi.of(g)));
    }
    Ok(word)
}

/// ∼e over the continuation keys, in [`ZpcStructure::keys`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPartition {
    pub keys: Vec<ContKey>,
    /// Class per key; classes are numbered by first key.
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl KeyPartition {
    /// The classes as key lists, in class order.
    pub fn groups(&self) -> Vec<Vec<ContKey>> {
        let mut out = vec![Vec::new(); self.classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c].push(self.keys[i]);
        }
        out
    }
}

/// Sizes of the intermediate automata, for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimilarityStats {
    pub b_states: usize,
    pub b_label_size: usize,
    pub expanded_states: usize,
    pub pruned_states: usize,
}

/// (f_j,k) ∼e (g_i,p) iff their h-projected continuations coincide, found
/// by minimizing the ε-free, letter-expanded, pruned B_T(Ē).
pub fn similarity_e(zpc: &ZpcStructure, psi: &Psi) -> Result<KeyPartition> {
    similarity_e_with_stats(zpc, psi).map(|x| x.0)
}

pub fn similarity_e_with_stats(
    zpc: &ZpcStructure,
    psi: &Psi,
) -> Result<(KeyPartition, SimilarityStats)> {
    let b = build_pseudo_continuation_automaton(zpc, psi, true);
    let mut stats = SimilarityStats {
        b_states: b.automaton.state_count(),
        b_label_size: b.automaton.label_size(),
        ..Default::default()
    };
    let expanded = b.automaton.eliminate_epsilon()?.expand_word_labels();
    stats.expanded_states = expanded.state_count();
    let (pruned, map) = expanded.prune();
    stats.pruned_states = pruned.state_count();
    let partition = pruned.revuz_minimize()?;
    let keys = zpc.keys();
    let mut renumber: HashMap<usize, usize> = HashMap::new();
    let class_of: Vec<usize> = keys
        .iter()
        .map(|k| {
            let q = map[b.marker_state[k]].expect("markers reach the root");
            let raw = partition.class_of[q];
            let next = renumber.len();
            *renumber.entry(raw).or_insert(next)
        })
        .collect();
    let classes = renumber.len();
    Ok((
        KeyPartition {
            keys,
            class_of,
            classes,
        },
        stats,
    ))
}
