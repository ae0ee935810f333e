use std::collections::{BTreeSet, HashMap, HashSet};

use super::automaton::{LeafRule, Rule, RuleIndex, StateId, TreeAutomaton};
use crate::error::{Error, Result};
use crate::semantics::TreeSet;
use crate::syntax::{Label, Tree};

pub const ISOMORPHISM_LIMIT: usize = 64;

/// Whether some bijection of states maps finals onto finals and rules onto
/// rules. Intended for small automata; larger ones are refused.
pub fn isomorphic(a: &TreeAutomaton, b: &TreeAutomaton) -> Result<bool> {
    for aut in [a, b] {
        if aut.state_count() > ISOMORPHISM_LIMIT {
            return Err(Error::SizeLimit {
                limit: ISOMORPHISM_LIMIT,
                found: aut.state_count(),
            });
        }
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    a.dedup();
    b.dedup();
    if a.state_count() != b.state_count()
        || a.rules().len() != b.rules().len()
        || a.leaf_rules().len() != b.leaf_rules().len()
    {
        return Ok(false);
    }
    let (ca, cb) = refine_colours(&a, &b);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return Ok(false);
    }
    let rules_b: HashSet<&Rule> = b.rules().iter().collect();
    let leaves_b: HashSet<&LeafRule> = b.leaf_rules().iter().collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); a.state_count()];
    for (i, r) in a.rules().iter().enumerate() {
        for q in std::iter::once(r.state).chain(r.children.iter().copied()) {
            if touching[q].last() != Some(&i) {
                touching[q].push(i);
            }
        }
    }
    let mut search = Search {
        a: &a,
        ca: &ca,
        cb: &cb,
        rules_b: &rules_b,
        touching: &touching,
        map: vec![usize::MAX; a.state_count()],
        used: vec![false; b.state_count()],
    };
    if !search.extend(0) {
        return Ok(false);
    }
    let map = search.map;
    Ok(a.leaf_rules().iter().all(|l| {
        leaves_b.contains(&LeafRule {
            state: map[l.state],
            symbol: l.symbol,
        })
    }))
}

struct Search<'a> {
    a: &'a TreeAutomaton,
    ca: &'a [usize],
    cb: &'a [usize],
    rules_b: &'a HashSet<&'a Rule>,
    touching: &'a [Vec<usize>],
    map: Vec<StateId>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, q: StateId) -> bool {
        self.touching[q].iter().all(|&i| {
            let r = &self.a.rules()[i];
            if self.map[r.state] == usize::MAX
                || r.children.iter().any(|&c| self.map[c] == usize::MAX)
            {
                return true;
            }
            let image = Rule {
                state: self.map[r.state],
                label: r.label,
                children: r.children.iter().map(|&c| self.map[c]).collect(),
            };
            self.rules_b.contains(&image)
        })
    }

    fn extend(&mut self, q: StateId) -> bool {
        if q == self.map.len() {
            return true;
        }
        for p in 0..self.cb.len() {
            if self.used[p] || self.cb[p] != self.ca[q] {
                continue;
            }
            self.map[q] = p;
            self.used[p] = true;
            if self.consistent(q) && self.extend(q + 1) {
                return true;
            }
            self.used[p] = false;
            self.map[q] = usize::MAX;
        }
        false
    }
}

/// Iterated colour refinement computed jointly so colours are comparable
/// across the two automata.
fn refine_colours(a: &TreeAutomaton, b: &TreeAutomaton) -> (Vec<usize>, Vec<usize>) {
    let initial = |aut: &TreeAutomaton, table: &mut HashMap<Vec<u64>, usize>| -> Vec<usize> {
        (0..aut.state_count())
            .map(|q| {
                let mut sig = vec![aut.is_final(q) as u64];
                let mut leaves: Vec<u64> = aut
                    .leaf_rules()
                    .iter()
                    .filter(|l| l.state == q)
                    .map(|l| l.symbol.0 as u64)
                    .collect();
                leaves.sort_unstable();
                sig.push(leaves.len() as u64);
                sig.extend(leaves);
                let next = table.len();
                *table.entry(sig).or_insert(next)
            })
            .collect()
    };
    let mut table = HashMap::new();
    let mut ca = initial(a, &mut table);
    let mut cb = initial(b, &mut table);
    let label_code = |l: Label| ((l.symbol.0 as u64) << 32) | l.mark.unwrap_or(0) as u64;
    let rounds = a.state_count().max(1);
    for _ in 0..rounds {
        let mut table = HashMap::new();
        let mut step = |aut: &TreeAutomaton, col: &[usize]| -> Vec<usize> {
            let mut parts: Vec<Vec<Vec<u64>>> = vec![Vec::new(); aut.state_count()];
            for r in aut.rules() {
                let mut entry = vec![label_code(r.label), col[r.state] as u64];
                entry.extend(r.children.iter().map(|&c| col[c] as u64));
                for (role, q) in std::iter::once(r.state)
                    .chain(r.children.iter().copied())
                    .enumerate()
                {
                    let mut e = entry.clone();
                    e.push(role as u64);
                    parts[q].push(e);
                }
            }
            (0..aut.state_count())
                .map(|q| {
                    let mut p = std::mem::take(&mut parts[q]);
                    p.sort_unstable();
                    let mut sig = vec![col[q] as u64];
                    for e in p {
                        sig.push(u64::MAX);
                        sig.extend(e);
                    }
                    let next = table.len();
                    *table.entry(sig).or_insert(next)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let before = distinct(&ca, &cb);
        ca = na;
        cb = nb;
        if distinct(&ca, &cb) == before {
            break;
        }
    }
    (ca, cb)
}

fn distinct(a: &[usize], b: &[usize]) -> usize {
    a.iter().chain(b).collect::<HashSet<_>>().len()
}

/// Bottom-up generation of all trees up to `max_nodes` nodes, carrying a
/// key computed from the children's keys. Trees whose key is rejected by
/// `keep` are dropped together with every tree containing them. With
/// `dedup`, only the first tree of each key is kept.
fn generate<K: Clone + Eq + std::hash::Hash>(
    labels: &[(Label, usize)],
    max_nodes: usize,
    dedup: bool,
    mut key_of: impl FnMut(Label, &[&K]) -> K,
    keep: impl Fn(&K) -> bool,
    mut visit: impl FnMut(&Tree, &K),
) {
    let mut pools: Vec<Vec<(Tree, K)>> = vec![Vec::new(); max_nodes + 1];
    let mut seen: HashSet<K> = HashSet::new();
    for size in 1..=max_nodes {
        let mut fresh = Vec::new();
        for &(label, arity) in labels {
            if (arity == 0) != (size == 1) || arity > size - 1 {
                continue;
            }
            let mut sizes = vec![0; arity];
            compositions(size - 1, arity, 0, &mut sizes, &mut |sizes| {
                let mut pick = vec![0usize; arity];
                if sizes.iter().any(|&s| pools[s].is_empty()) {
                    return;
                }
                loop {
                    let kids: Vec<&(Tree, K)> =
                        (0..arity).map(|i| &pools[sizes[i]][pick[i]]).collect();
                    let keys: Vec<&K> = kids.iter().map(|k| &k.1).collect();
                    let key = key_of(label, &keys);
                    if keep(&key) && (!dedup || seen.insert(key.clone())) {
                        let tree = Tree::node(label, kids.iter().map(|k| k.0.clone()).collect());
                        fresh.push((tree, key));
                    }
                    let mut i = arity;
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        pick[i] += 1;
                        if pick[i] < pools[sizes[i]].len() {
                            break;
                        }
                        pick[i] = 0;
                    }
                }
            });
            if arity == 0 {
                let key = key_of(label, &[]);
                if keep(&key) && (!dedup || seen.insert(key.clone())) {
                    fresh.push((Tree::leaf(label), key));
                }
            }
        }
        for (t, k) in &fresh {
            visit(t, k);
        }
        pools[size] = fresh;
    }
}

fn compositions(
    total: usize,
    parts: usize,
    i: usize,
    out: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if parts == 0 {
        return;
    }
    if i == parts - 1 {
        if total >= 1 {
            out[i] = total;
            f(out);
        }
        return;
    }
    for s in 1..=total.saturating_sub(parts - 1 - i) {
        out[i] = s;
        compositions(total - s, parts, i + 1, out, f);
    }
}

fn label_arities(auts: &[&TreeAutomaton]) -> Vec<(Label, usize)> {
    let mut set = BTreeSet::new();
    for aut in auts {
        for l in RuleIndex::new(aut).labels() {
            set.insert((l, aut.alphabet().arity(l.symbol)));
        }
    }
    set.into_iter().collect()
}

/// Every accepted tree with at most `max_nodes` nodes.
pub fn accepted_trees_up_to(aut: &TreeAutomaton, max_nodes: usize) -> TreeSet {
    let index = RuleIndex::new(aut);
    let mut out = TreeSet::new();
    generate(
        &label_arities(&[aut]),
        max_nodes,
        false,
        |label, kids: &[&BTreeSet<StateId>]| {
            if kids.is_empty() {
                index.leaf(label.symbol)
            } else {
                index.step(label, kids)
            }
        },
        |k| !k.is_empty(),
        |t, k| {
            if k.iter().any(|&q| aut.is_final(q)) {
                out.insert(t.clone());
            }
        },
    );
    out
}

/// A smallest tree of at most `max_nodes` nodes accepted by exactly one of
/// the two automata, if any.
pub fn language_difference_up_to(
    a: &TreeAutomaton,
    b: &TreeAutomaton,
    max_nodes: usize,
) -> Option<Tree> {
    let (ia, ib) = (RuleIndex::new(a), RuleIndex::new(b));
    let mut witness = None;
    type Pair = (BTreeSet<StateId>, BTreeSet<StateId>);
    generate(
        &label_arities(&[a, b]),
        max_nodes,
        true,
        |label, kids: &[&Pair]| {
            if kids.is_empty() {
                (ia.leaf(label.symbol), ib.leaf(label.symbol))
            } else {
                let ka: Vec<_> = kids.iter().map(|k| &k.0).collect();
                let kb: Vec<_> = kids.iter().map(|k| &k.1).collect();
                (ia.step(label, &ka), ib.step(label, &kb))
            }
        },
        |k| !(k.0.is_empty() && k.1.is_empty()),
        |t, k| {
            let acc_a = k.0.iter().any(|&q| a.is_final(q));
            let acc_b = k.1.iter().any(|&q| b.is_final(q));
            if acc_a != acc_b && witness.is_none() {
                witness = Some(t.clone());
            }
        },
    );
    witness
}

pub fn language_equal_up_to(a: &TreeAutomaton, b: &TreeAutomaton, max_nodes: usize) -> bool {
    language_difference_up_to(a, b, max_nodes).is_none()
}
