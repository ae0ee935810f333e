use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{Label, RankedAlphabet, Symbol, Tree};

pub type StateId = usize;

/// (state, f, q1, …, qn) with n ≥ 1: f(q1,…,qn) → state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub state: StateId,
    pub label: Label,
    pub children: Vec<StateId>,
}

/// (state, c): the constant c reaches `state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafRule {
    pub state: StateId,
    pub symbol: Symbol,
}

/// A bottom-up nondeterministic finite tree automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    alphabet: RankedAlphabet,
    names: Vec<String>,
    finals: Vec<bool>,
    rules: Vec<Rule>,
    leaf_rules: Vec<LeafRule>,
}

/// Maps every state to a class id in `0..classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePartition {
    pub class_of: Vec<usize>,
}

impl StatePartition {
    pub fn identity(n: usize) -> Self {
        StatePartition {
            class_of: (0..n).collect(),
        }
    }

    pub fn classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }
}

impl TreeAutomaton {
    pub fn new(alphabet: RankedAlphabet) -> Self {
        TreeAutomaton {
            alphabet,
            names: Vec::new(),
            finals: Vec::new(),
            rules: Vec::new(),
            leaf_rules: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, is_final: bool) -> StateId {
        self.names.push(name.into());
        self.finals.push(is_final);
        self.names.len() - 1
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) {
        self.finals[q] = is_final;
    }

    pub fn set_name(&mut self, q: StateId, name: impl Into<String>) {
        self.names[q] = name.into();
    }

    pub fn add_rule(&mut self, state: StateId, label: Label, children: Vec<StateId>) {
        debug_assert_eq!(self.alphabet.arity(label.symbol), children.len());
        debug_assert!(!children.is_empty());
        self.rules.push(Rule {
            state,
            label,
            children,
        });
    }

    pub fn add_leaf_rule(&mut self, state: StateId, symbol: Symbol) {
        debug_assert!(self.alphabet.is_constant(symbol));
        self.leaf_rules.push(LeafRule { state, symbol });
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.finals.len()).filter(|&q| self.finals[q])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn leaf_rules(&self) -> &[LeafRule] {
        &self.leaf_rules
    }

    /// Total number of transitions, leaf rules included.
    pub fn transition_count(&self) -> usize {
        self.rules.len() + self.leaf_rules.len()
    }

    /// Storage units: one per state, plus one per rule and per child slot.
    pub fn footprint(&self) -> usize {
        self.names.len()
            + self.leaf_rules.len()
            + self
                .rules
                .iter()
                .map(|r| 1 + r.children.len())
                .sum::<usize>()
    }

    /// Removes duplicate rules, keeping first occurrences.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.rules.retain(|r| seen.insert(r.clone()));
        let mut seen = HashSet::new();
        self.leaf_rules.retain(|r| seen.insert(*r));
    }

    /// Δ*(t).
    pub fn run(&self, t: &Tree) -> BTreeSet<StateId> {
        RuleIndex::new(self).run(t)
    }

    pub fn accepts(&self, t: &Tree) -> bool {
        self.run(t).iter().any(|&q| self.finals[q])
    }

    /// Keeps the states from which a final state can be reached, and the
    /// rules among them. Surviving states keep their relative order.
    pub fn coaccessible_trim(&self) -> TreeAutomaton {
        let n = self.state_count();
        let mut by_parent: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, r) in self.rules.iter().enumerate() {
            by_parent[r.state].push(i);
        }
        let mut keep = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &i in &by_parent[q] {
                for &c in &self.rules[i].children {
                    if !keep[c] {
                        keep[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut out = TreeAutomaton::new(self.alphabet.clone());
        for q in 0..n {
            if keep[q] {
                remap[q] = out.add_state(self.names[q].clone(), self.finals[q]);
            }
        }
        for r in &self.rules {
            if keep[r.state] {
                let children = r.children.iter().map(|&c| remap[c]).collect();
                out.rules.push(Rule {
                    state: remap[r.state],
                    label: r.label,
                    children,
                });
            }
        }
        for l in &self.leaf_rules {
            if keep[l.state] {
                out.leaf_rules.push(LeafRule {
                    state: remap[l.state],
                    symbol: l.symbol,
                });
            }
        }
        out
    }

    /// A/∼: classes become states, rules are mapped classwise and
    /// duplicates collapse. A class is named after its first member.
    pub fn quotient(&self, partition: &StatePartition) -> TreeAutomaton {
        assert_eq!(partition.class_of.len(), self.state_count());
        let k = partition.classes();
        let mut out = TreeAutomaton::new(self.alphabet.clone());
        let mut named = vec![false; k];
        out.names = vec![String::new(); k];
        out.finals = vec![false; k];
        for q in 0..self.state_count() {
            let c = partition.class_of[q];
            if !named[c] {
                named[c] = true;
                out.names[c] = self.names[q].clone();
            }
            out.finals[c] |= self.finals[q];
        }
        for r in &self.rules {
            out.rules.push(Rule {
                state: partition.class_of[r.state],
                label: r.label,
                children: r.children.iter().map(|&c| partition.class_of[c]).collect(),
            });
        }
        for l in &self.leaf_rules {
            out.leaf_rules.push(LeafRule {
                state: partition.class_of[l.state],
                symbol: l.symbol,
            });
        }
        out.dedup();
        out
    }

    /// Rules written as rewrite arrows, one per line, e.g. `h(q1,q2) -> q0`.
    pub fn display_rules(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            let kids: Vec<&str> = r.children.iter().map(|&c| self.names[c].as_str()).collect();
            let _ = writeln!(
                out,
                "{}({}) -> {}",
                self.alphabet.label_name(r.label),
                kids.join(", "),
                self.names[r.state]
            );
        }
        for l in &self.leaf_rules {
            let _ = writeln!(
                out,
                "{} -> {}",
                self.alphabet.name(l.symbol),
                self.names[l.state]
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonAutomaton {
            alphabet: self
                .alphabet
                .symbols()
                .map(|s| JsonSymbol {
                    symbol: self.alphabet.name(s).to_string(),
                    arity: self.alphabet.arity(s),
                })
                .collect(),
            states: (0..self.state_count())
                .map(|q| JsonState {
                    id: q,
                    name: self.names[q].clone(),
                    is_final: self.finals[q],
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|r| JsonRule {
                    state: r.state,
                    symbol: self.alphabet.label_name(r.label),
                    children: r.children.clone(),
                })
                .collect(),
            leaf_rules: self
                .leaf_rules
                .iter()
                .map(|l| JsonLeaf {
                    state: l.state,
                    symbol: self.alphabet.name(l.symbol).to_string(),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("automaton serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<TreeAutomaton> {
        let doc: JsonAutomaton =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut alphabet = RankedAlphabet::new();
        for s in &doc.alphabet {
            alphabet.add(&s.symbol, s.arity)?;
        }
        let mut aut = TreeAutomaton::new(alphabet);
        for (i, s) in doc.states.iter().enumerate() {
            if s.id != i {
                return Err(Error::Format(format!(
                    "state ids must be dense, found {} at {}",
                    s.id, i
                )));
            }
            aut.add_state(s.name.clone(), s.is_final);
        }
        let n = aut.state_count();
        let check = |q: usize| {
            if q < n {
                Ok(q)
            } else {
                Err(Error::Format(format!("unknown state {q}")))
            }
        };
        for r in doc.rules {
            let label = aut
                .alphabet
                .resolve_label(&r.symbol, true)
                .ok_or_else(|| Error::Format(format!("unknown symbol `{}`", r.symbol)))?;
            let arity = aut.alphabet.arity(label.symbol);
            if arity == 0 || arity != r.children.len() {
                return Err(Error::Format(format!(
                    "rule for `{}` has {} children, arity is {}",
                    r.symbol,
                    r.children.len(),
                    arity
                )));
            }
            let state = check(r.state)?;
            let children = r
                .children
                .into_iter()
                .map(check)
                .collect::<Result<Vec<_>>>()?;
            aut.rules.push(Rule {
                state,
                label,
                children,
            });
        }
        for l in doc.leaf_rules {
            let symbol = aut
                .alphabet
                .lookup(&l.symbol)
                .filter(|&s| aut.alphabet.is_constant(s))
                .ok_or_else(|| Error::Format(format!("`{}` is not a constant", l.symbol)))?;
            let state = check(l.state)?;
            aut.leaf_rules.push(LeafRule { state, symbol });
        }
        Ok(aut)
    }

    /// Graphviz rendering; each rule becomes a small hyperedge node.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=BT;\n");
        for q in 0..self.state_count() {
            let shape = if self.finals[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(
                out,
                "  q{q} [shape={shape}, label=\"{}\"];",
                escape(&self.names[q])
            );
        }
        for (i, r) in self.rules.iter().enumerate() {
            let _ = writeln!(
                out,
                "  r{i} [shape=box, style=rounded, label=\"{}\"];",
                escape(&self.alphabet.label_name(r.label))
            );
            for (k, c) in r.children.iter().enumerate() {
                let _ = writeln!(out, "  q{c} -> r{i} [label=\"{}\", arrowhead=none];", k + 1);
            }
            let _ = writeln!(out, "  r{i} -> q{};", r.state);
        }
        for (i, l) in self.leaf_rules.iter().enumerate() {
            let _ = writeln!(
                out,
                "  l{i} [shape=plaintext, label=\"{}\"];\n  l{i} -> q{};",
                escape(self.alphabet.name(l.symbol)),
                l.state
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAutomaton {
    alphabet: Vec<JsonSymbol>,
    states: Vec<JsonState>,
    rules: Vec<JsonRule>,
    #[serde(rename = "leafRules")]
    leaf_rules: Vec<JsonLeaf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSymbol {
    symbol: String,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonState {
    id: usize,
    name: String,
    #[serde(rename = "final")]
    is_final: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRule {
    state: usize,
    symbol: String,
    children: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonLeaf {
    state: usize,
    symbol: String,
}

/// Rules grouped by label, for repeated bottom-up evaluation.
pub(crate) struct RuleIndex<'a> {
    aut: &'a TreeAutomaton,
    by_label: HashMap<Label, Vec<usize>>,
    leaves: HashMap<Symbol, Vec<StateId>>,
}

impl<'a> RuleIndex<'a> {
    pub(crate) fn new(aut: &'a TreeAutomaton) -> Self {
        let mut by_label: HashMap<Label, Vec<usize>> = HashMap::new();
        for (i, r) in aut.rules.iter().enumerate() {
            by_label.entry(r.label).or_default().push(i);
        }
        let mut leaves: HashMap<Symbol, Vec<StateId>> = HashMap::new();
        for l in &aut.leaf_rules {
            leaves.entry(l.symbol).or_default().push(l.state);
        }
        RuleIndex {
            aut,
            by_label,
            leaves,
        }
    }

    /// Labels that occur in some rule, leaf symbols first.
    pub(crate) fn labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.leaves.keys().map(|&s| Label::plain(s)).collect();
        out.extend(self.by_label.keys().copied());
        out.sort();
        out
    }

    pub(crate) fn leaf(&self, symbol: Symbol) -> BTreeSet<StateId> {
        self.leaves
            .get(&symbol)
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Set-lifted Δ for one label over per-child state sets.
    pub(crate) fn step(&self, label: Label, children: &[&BTreeSet<StateId>]) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        if let Some(list) = self.by_label.get(&label) {
            for &i in list {
                let r = &self.aut.rules[i];
                if r.children.len() == children.len()
                    && r.children
                        .iter()
                        .zip(children)
                        .all(|(q, set)| set.contains(q))
                {
                    out.insert(r.state);
                }
            }
        }
        out
    }

    pub(crate) fn run(&self, t: &Tree) -> BTreeSet<StateId> {
        if t.children.is_empty() {
            return if t.label.mark.is_none() {
                self.leaf(t.label.symbol)
            } else {
                BTreeSet::new()
            };
        }
        let sets: Vec<BTreeSet<StateId>> = t.children.iter().map(|c| self.run(c)).collect();
        if sets.iter().any(BTreeSet::is_empty) {
            return BTreeSet::new();
        }
        let refs: Vec<&BTreeSet<StateId>> = sets.iter().collect();
        self.step(t.label, &refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TreeAutomaton {
        let sigma = RankedAlphabet::parse("a/0 b/0 g/1 f/2").unwrap();
        let (a, b, g, f) = (
            sigma.lookup("a").unwrap(),
            sigma.lookup("b").unwrap(),
            Label::plain(sigma.lookup("g").unwrap()),
            Label::plain(sigma.lookup("f").unwrap()),
        );
        let mut aut = TreeAutomaton::new(sigma);
        let top = aut.add_state("top", true);
        let low = aut.add_state("low", false);
        let dead = aut.add_state("dead", false);
        aut.add_leaf_rule(low, a);
        aut.add_leaf_rule(dead, b);
        aut.add_rule(top, f, vec![low, low]);
        aut.add_rule(low, g, vec![low]);
        aut.add_rule(dead, g, vec![top]);
        aut
    }

    #[test]
    fn runs_bottom_up() {
        let aut = sample();
        let s = aut.alphabet().clone();
        let t = |x| Tree::parse(x, &s).unwrap();
        assert_eq!(aut.run(&t("a")), BTreeSet::from([1]));
        assert!(aut.accepts(&t("f(g(a),a)")));
        assert!(!aut.accepts(&t("g(a)")));
        assert!(aut.run(&t("f(b,a)")).is_empty());
    }

    #[test]
    fn trim_drops_non_coaccessible_states() {
        let aut = sample();
        let trimmed = aut.coaccessible_trim();
        assert_eq!(trimmed.state_count(), 2);
        assert_eq!(trimmed.rules().len(), 2);
        assert_eq!(trimmed.leaf_rules().len(), 1);
        assert_eq!(trimmed.coaccessible_trim(), trimmed);
    }

    #[test]
    fn quotient_collapses_rules() {
        let aut = sample();
        let q = aut.quotient(&StatePartition {
            class_of: vec![0, 1, 1],
        });
        assert_eq!(q.state_count(), 2);
        assert_eq!(q.name(1), "low");
        assert_eq!(q.leaf_rules().len(), 2);
        assert_eq!(q.rules().len(), 3);
        let same = aut.quotient(&StatePartition::identity(3));
        assert_eq!(same, aut);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let aut = sample();
        let text = aut.to_json();
        let back = TreeAutomaton::from_json(&text).unwrap();
        assert_eq!(back, aut);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"alphabet\"").unwrap() < text.find("\"leafRules\"").unwrap());
        assert!(TreeAutomaton::from_json("{}").is_err());
    }

    #[test]
    fn dot_has_hyperedges() {
        let dot = sample().to_dot();
        assert!(dot.contains("r0 -> q0"));
        assert!(dot.contains("q1 -> r0 [label=\"2\""));
    }
}
