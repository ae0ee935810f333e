//! Reference implementations used only by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use eqtree::syntax::{ExprKind, Label, RegExpr, SyntaxTree};
use eqtree::worddfa::{EdgeLabel, Psi, PsiLetter, WordAutomaton};

pub const FULL: &str = "h(h(c,b) .c a, a) .b (f(a, h(c,b)) .c a + g(a))*b";
pub const FULL_SIGMA: &str = "a/0 b/0 c/0 g/1 f/2 h/2";
pub const E4: &str = "(f(a,a) + f(a,a))*a .a h(b)";
pub const E4_SIGMA: &str = "a/0 b/0 h/1 f/2";

/// The worked example's nine continuations, keyed by `f_j^k` name.
pub const FULL_CONTINUATIONS: [(&str, &str); 9] = [
    ("h1^1", "(h2(c,b) .c a) .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("h1^2", "a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("f3^1", "a .c a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("f3^2", "(h4(c,b) .c a) .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("h2^1", "c .c a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("h2^2", "b .c a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("h4^1", "c .c a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("h4^2", "b .c a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
    ("g5^1", "a .b (f3(a,h4(c,b)) .c a + g5(a))*b"),
];

/// Follow rows of the worked example. h2^2 and h4^2 share a continuation,
/// so both get {f3, g5}; both also contain the constant b.
pub const FULL_FOLLOW: [(&str, &[&str]); 9] = [
    ("h1^1", &["h2"]),
    ("h1^2", &["a"]),
    ("h2^1", &["a"]),
    ("h2^2", &["b", "f3", "g5"]),
    ("f3^1", &["a"]),
    ("f3^2", &["h4"]),
    ("h4^1", &["a"]),
    ("h4^2", &["b", "f3", "g5"]),
    ("g5^1", &["a"]),
];

/// The twelve distinct subexpressions of the worked example.
pub const FULL_SUBEXPRESSIONS: [&str; 12] = [
    "a",
    "b",
    "c",
    "h(c,b)",
    "g(a)",
    "h(c,b) .c a",
    "h(h(c,b) .c a, a)",
    "f(a,h(c,b))",
    "f(a,h(c,b)) .c a",
    "f(a,h(c,b)) .c a + g(a)",
    "(f(a,h(c,b)) .c a + g(a))*b",
    FULL,
];

pub const FULL_CLASSES: [&[&str]; 5] = [
    &["h1^1", "f3^2"],
    &["h2^1", "h4^1"],
    &["h2^2", "h4^2"],
    &["h1^2", "g5^1"],
    &["f3^1"],
];

/// Non-leaf and leaf rules shown for the worked example, states named by
/// the first key of their class.
pub const FULL_RULES: [&str; 7] = [
    "h(h1^1, h1^2) -> eps^1",
    "a -> h1^2",
    "h(h2^1, h2^2) -> h1^1",
    "a -> h2^1",
    "g(h1^2) -> h2^2",
    "f(f3^1, h1^1) -> h2^2",
    "a -> f3^1",
];

fn mentions(e: &RegExpr, f: Label) -> bool {
    match e.kind() {
        ExprKind::Const(_) => false,
        ExprKind::Apply(g, args) => *g == f || args.iter().any(|a| mentions(a, f)),
        _ => e.children().into_iter().any(|c| mentions(c, f)),
    }
}

/// C_{f^k}(E) by direct structural recursion on a linear expression.
pub fn continuation_oracle(e: &RegExpr, f: Label, k: usize) -> Option<RegExpr> {
    match e.kind() {
        ExprKind::Const(_) => None,
        ExprKind::Apply(g, args) if *g == f => Some(args[k - 1].clone()),
        ExprKind::Apply(_, args) => args
            .iter()
            .find(|a| mentions(a, f))
            .and_then(|a| continuation_oracle(a, f, k)),
        ExprKind::Sum(l, r) => {
            if mentions(l, f) {
                continuation_oracle(l, f, k)
            } else {
                continuation_oracle(r, f, k)
            }
        }
        ExprKind::Product(l, r, c) => {
            if mentions(l, f) {
                continuation_oracle(l, f, k).map(|x| RegExpr::product(x, r.clone(), *c))
            } else {
                continuation_oracle(r, f, k)
            }
        }
        ExprKind::Star(x, c) => {
            continuation_oracle(x, f, k).map(|y| RegExpr::product(y, e.clone(), *c))
        }
    }
}

/// ψ′ of an expression built from subexpressions of the tree: left-nested
/// products are spelled factor by factor, anything else is looked up.
pub fn psi_prime_oracle(e: &RegExpr, ids: &HashMap<RegExpr, u32>) -> Vec<PsiLetter> {
    match e.kind() {
        ExprKind::Product(l, r, c) => {
            let mut w = psi_prime_oracle(l, ids);
            w.push(PsiLetter::Dot(*c));
            w.push(PsiLetter::Class(ids[r]));
            w
        }
        _ => vec![PsiLetter::Class(ids[e])],
    }
}

/// ψ per projected subexpression.
pub fn psi_table(tree: &SyntaxTree, psi: &Psi) -> HashMap<RegExpr, u32> {
    (0..tree.len())
        .map(|v| (tree.subexpr(v).project(), psi.of(v)))
        .collect()
}

/// Every word spelled by a path from the initial state to a final state.
/// The automaton must be acyclic.
pub fn words_of<L: Clone + Eq + Hash + Ord>(aut: &WordAutomaton<L>) -> BTreeSet<Vec<L>> {
    let mut memo: HashMap<usize, BTreeSet<Vec<L>>> = HashMap::new();
    right_language(aut, aut.initial(), &mut memo)
}

fn right_language<L: Clone + Eq + Hash + Ord>(
    aut: &WordAutomaton<L>,
    q: usize,
    memo: &mut HashMap<usize, BTreeSet<Vec<L>>>,
) -> BTreeSet<Vec<L>> {
    if let Some(w) = memo.get(&q) {
        return w.clone();
    }
    let mut out = BTreeSet::new();
    if aut.is_final(q) {
        out.insert(Vec::new());
    }
    for e in aut.edges().iter().filter(|e| e.from == q) {
        let prefix: Vec<L> = match &e.label {
            EdgeLabel::Epsilon => Vec::new(),
            EdgeLabel::Word(w) => w.clone(),
        };
        for tail in right_language(aut, e.to, memo) {
            let mut w = prefix.clone();
            w.extend(tail);
            out.insert(w);
        }
    }
    memo.insert(q, out.clone());
    out
}

/// Nerode classes of an acyclic automaton by comparing right languages,
/// numbered by smallest member.
pub fn nerode_partition<L: Clone + Eq + Hash + Ord>(aut: &WordAutomaton<L>) -> Vec<usize> {
    let mut memo = HashMap::new();
    let mut seen: BTreeMap<BTreeSet<Vec<L>>, usize> = BTreeMap::new();
    (0..aut.state_count())
        .map(|q| {
            let lang = right_language(aut, q, &mut memo);
            let next = seen.len();
            *seen.entry(lang).or_insert(next)
        })
        .collect()
}

/// Renumbers a class assignment by first occurrence.
pub fn normalize(class_of: &[usize]) -> Vec<usize> {
    let mut seen = HashMap::new();
    class_of
        .iter()
        .map(|c| {
            let next = seen.len();
            *seen.entry(*c).or_insert(next)
        })
        .collect()
}
