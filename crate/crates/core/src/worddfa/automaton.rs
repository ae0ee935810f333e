use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, Result};

pub type WordState = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeLabel<L> {
    Epsilon,
    Word(Vec<L>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<L> {
    pub from: WordState,
    pub label: EdgeLabel<L>,
    pub to: WordState,
}

/// A finite word automaton whose edges carry ε, a letter, or a whole word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordAutomaton<L> {
    initial: WordState,
    finals: Vec<bool>,
    edges: Vec<Edge<L>>,
}

/// Class ids are contiguous and numbered by the smallest member state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePartition {
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl<L: Clone + Eq + Hash + Ord> WordAutomaton<L> {
    pub fn new() -> Self {
        WordAutomaton {
            initial: 0,
            finals: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_state(&mut self, is_final: bool) -> WordState {
        self.finals.push(is_final);
        self.finals.len() - 1
    }

    pub fn set_initial(&mut self, q: WordState) {
        self.initial = q;
    }

    pub fn add_edge(&mut self, from: WordState, label: EdgeLabel<L>, to: WordState) {
        self.edges.push(Edge { from, label, to });
    }

    pub fn add_letter(&mut self, from: WordState, letter: L, to: WordState) {
        self.add_edge(from, EdgeLabel::Word(vec![letter]), to);
    }

    pub fn initial(&self) -> WordState {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn is_final(&self, q: WordState) -> bool {
        self.finals[q]
    }

    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    /// Outgoing edge indices per state.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.state_count()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push(i);
        }
        out
    }

    /// Sum of label lengths, ε counting as one.
    pub fn label_size(&self) -> usize {
        self.edges
            .iter()
            .map(|e| match &e.label {
                EdgeLabel::Epsilon => 1,
                EdgeLabel::Word(w) => w.len(),
            })
            .sum()
    }

    /// Removes ε-edges: each state inherits the labelled edges and the
    /// finality of the states it reaches by ε.
    pub fn eliminate_epsilon(&self) -> Result<Self> {
        let n = self.state_count();
        let mut eps_succ: Vec<Vec<WordState>> = vec![Vec::new(); n];
        let mut own: Vec<Vec<(Vec<L>, WordState)>> = vec![Vec::new(); n];
        for e in &self.edges {
            match &e.label {
                EdgeLabel::Epsilon => eps_succ[e.from].push(e.to),
                EdgeLabel::Word(w) if w.is_empty() => eps_succ[e.from].push(e.to),
                EdgeLabel::Word(w) => own[e.from].push((w.clone(), e.to)),
            }
        }
        if eps_succ.iter().all(Vec::is_empty) {
            return Ok(self.clone());
        }
        // Reverse topological order of the ε-graph, sinks first.
        let mut indeg = vec![0usize; n];
        for list in &eps_succ {
            for &t in list {
                indeg[t] += 1;
            }
        }
        let mut order: Vec<WordState> = (0..n).filter(|&q| indeg[q] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for &t in &eps_succ[q] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    order.push(t);
                }
            }
        }
        if order.len() < n {
            let q = (0..n).find(|&q| indeg[q] > 0).unwrap();
            return Err(Error::EpsilonCycle(q));
        }
        let mut finals = self.finals.clone();
        let mut closed: Vec<Vec<(Vec<L>, WordState)>> = vec![Vec::new(); n];
        for &q in order.iter().rev() {
            let mut list = std::mem::take(&mut own[q]);
            for &t in &eps_succ[q] {
                finals[q] |= finals[t];
                list.extend(closed[t].iter().cloned());
            }
            if eps_succ[q].len() > 1 {
                let mut seen = HashSet::new();
                list.retain(|e| seen.insert(e.clone()));
            }
            closed[q] = list;
        }
        let mut out = WordAutomaton {
            initial: self.initial,
            finals,
            edges: Vec::new(),
        };
        for (q, list) in closed.into_iter().enumerate() {
            for (w, t) in list {
                out.add_edge(q, EdgeLabel::Word(w), t);
            }
        }
        Ok(out)
    }

    /// Replaces every k-letter edge by a path through k − 1 fresh states.
    pub fn expand_word_labels(&self) -> Self {
        let mut out = WordAutomaton {
            initial: self.initial,
            finals: self.finals.clone(),
            edges: Vec::with_capacity(self.edges.len()),
        };
        for e in &self.edges {
            match &e.label {
                EdgeLabel::Word(w) if w.len() > 1 => {
                    let mut from = e.from;
                    for letter in &w[..w.len() - 1] {
                        let mid = out.add_state(false);
                        out.add_letter(from, letter.clone(), mid);
                        from = mid;
                    }
                    out.add_letter(from, w[w.len() - 1].clone(), e.to);
                }
                _ => out.edges.push(e.clone()),
            }
        }
        out
    }

    /// Keeps states that are reachable from the initial state and can reach
    /// a final one. Returns the old-to-new state map alongside.
    pub fn prune(&self) -> (Self, Vec<Option<WordState>>) {
        let n = self.state_count();
        let mut fwd: Vec<Vec<WordState>> = vec![Vec::new(); n];
        let mut bwd: Vec<Vec<WordState>> = vec![Vec::new(); n];
        for e in &self.edges {
            fwd[e.from].push(e.to);
            bwd[e.to].push(e.from);
        }
        let sweep = |adj: &[Vec<WordState>], start: Vec<WordState>| {
            let mut seen = vec![false; n];
            let mut stack = start;
            for &q in &stack {
                seen[q] = true;
            }
            while let Some(q) = stack.pop() {
                for &t in &adj[q] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        };
        let reach = if n == 0 {
            Vec::new()
        } else {
            sweep(&fwd, vec![self.initial])
        };
        let coreach = sweep(&bwd, (0..n).filter(|&q| self.finals[q]).collect());
        let mut map = vec![None; n];
        let mut out = WordAutomaton::new();
        for q in 0..n {
            if reach[q] && coreach[q] {
                map[q] = Some(out.add_state(self.finals[q]));
            }
        }
        if let Some(init) = map.get(self.initial).copied().flatten() {
            out.initial = init;
        }
        for e in &self.edges {
            if let (Some(f), Some(t)) = (map[e.from], map[e.to]) {
                out.add_edge(f, e.label.clone(), t);
            }
        }
        (out, map)
    }

    /// Checks Revuz's preconditions: single letters only, deterministic,
    /// acyclic, and every state co-reachable.
    pub fn check_minimizable(&self) -> Result<Vec<usize>> {
        let n = self.state_count();
        let out = self.out_edges();
        for (q, list) in out.iter().enumerate() {
            let mut letters = HashSet::new();
            for &i in list {
                match &self.edges[i].label {
                    EdgeLabel::Word(w) if w.len() == 1 => {
                        if !letters.insert(&w[0]) {
                            return Err(Error::Nondeterministic(q));
                        }
                    }
                    _ => return Err(Error::NotLetterLabelled),
                }
            }
        }
        let heights = self.heights()?;
        if let Some(q) = (0..n).find(|&q| out[q].is_empty() && !self.finals[q]) {
            return Err(Error::NotCoaccessible(q));
        }
        Ok(heights)
    }

    /// Longest path length from each state to a state without successors.
    fn heights(&self) -> Result<Vec<usize>> {
        let n = self.state_count();
        let mut outdeg = vec![0usize; n];
        let mut preds: Vec<Vec<WordState>> = vec![Vec::new(); n];
        for e in &self.edges {
            outdeg[e.from] += 1;
            preds[e.to].push(e.from);
        }
        let mut height = vec![0usize; n];
        let mut queue: Vec<WordState> = (0..n).filter(|&q| outdeg[q] == 0).collect();
        let mut done = 0;
        while let Some(q) = queue.pop() {
            done += 1;
            for &p in &preds[q] {
                height[p] = height[p].max(height[q] + 1);
                outdeg[p] -= 1;
                if outdeg[p] == 0 {
                    queue.push(p);
                }
            }
        }
        if done < n {
            return Err(Error::Cyclic);
        }
        Ok(height)
    }

    /// Myhill–Nerode classes of an acyclic deterministic automaton, found by
    /// processing states by increasing height and merging equal signatures.
    pub fn revuz_minimize(&self) -> Result<NodePartition> {
        let heights = self.check_minimizable()?;
        let n = self.state_count();
        let max_h = heights.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<WordState>> = vec![Vec::new(); max_h + 1];
        for q in 0..n {
            buckets[heights[q]].push(q);
        }
        let out = self.out_edges();
        let mut raw = vec![usize::MAX; n];
        let mut table: HashMap<(bool, Vec<(L, usize)>), usize> = HashMap::new();
        for bucket in &buckets {
            for &q in bucket {
                let mut sig: Vec<(L, usize)> = out[q]
                    .iter()
                    .map(|&i| {
                        let e = &self.edges[i];
                        let EdgeLabel::Word(w) = &e.label else {
                            unreachable!()
                        };
                        (w[0].clone(), raw[e.to])
                    })
                    .collect();
                sig.sort_unstable();
                let next = table.len();
                raw[q] = *table.entry((self.finals[q], sig)).or_insert(next);
            }
        }
        let mut renumber = vec![usize::MAX; table.len()];
        let mut classes = 0;
        let class_of = raw
            .into_iter()
            .map(|r| {
                if renumber[r] == usize::MAX {
                    renumber[r] = classes;
                    classes += 1;
                }
                renumber[r]
            })
            .collect();
        Ok(NodePartition { class_of, classes })
    }

    /// Graphviz rendering with caller-provided state and letter names.
    pub fn to_dot(
        &self,
        state_name: impl Fn(WordState) -> String,
        letter: impl Fn(&L) -> String,
    ) -> String {
        let mut out =
            String::from("digraph word_automaton {\n  rankdir=LR;\n  start [shape=point];\n");
        for q in 0..self.state_count() {
            let shape = if self.finals[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(
                out,
                "  s{q} [shape={shape}, label=\"{}\"];",
                state_name(q).replace('"', "\\\"")
            );
        }
        if self.state_count() > 0 {
            let _ = writeln!(out, "  start -> s{};", self.initial);
        }
        for e in &self.edges {
            let text = match &e.label {
                EdgeLabel::Epsilon => "ε".to_string(),
                EdgeLabel::Word(w) => w.iter().map(&letter).collect::<Vec<_>>().join(" "),
            };
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"];",
                e.from,
                e.to,
                text.replace('"', "\\\"")
            );
        }
        out.push_str("}\n");
        out
    }
}

impl<L: Clone + Eq + Hash + Ord> Default for WordAutomaton<L> {
    fn default() -> Self {
        Self::new()
    }
}
