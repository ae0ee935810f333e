//! The equation automaton built directly from partial derivatives.

use std::collections::VecDeque;

use indexmap::{IndexMap, IndexSet};

use crate::semantics::constants_in_language;
use crate::syntax::{ExprKind, Label, RankedAlphabet, RegExpr, Symbol};
use crate::treeauto::TreeAutomaton;

/// A tuple of expressions produced by f⁻¹.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExprTuple(pub Vec<RegExpr>);

impl ExprTuple {
    /// N ·c F, componentwise.
    pub fn product(&self, c: Symbol, right: &RegExpr) -> ExprTuple {
        ExprTuple(
            self.0
                .iter()
                .map(|e| RegExpr::product(e.clone(), right.clone(), c))
                .collect(),
        )
    }

    pub fn render(&self, alphabet: &RankedAlphabet) -> String {
        let parts: Vec<String> = self.0.iter().map(|e| e.render(alphabet)).collect();
        format!("({})", parts.join(", "))
    }
}

pub type TupleSet = IndexSet<ExprTuple>;

/// f⁻¹(E).
pub fn f_inverse(f: Label, expr: &RegExpr) -> TupleSet {
    match expr.kind() {
        ExprKind::Const(_) => TupleSet::new(),
        ExprKind::Apply(g, args) => {
            if *g == f {
                TupleSet::from([ExprTuple(args.clone())])
            } else {
                TupleSet::new()
            }
        }
        ExprKind::Sum(l, r) => {
            let mut s = f_inverse(f, l);
            s.extend(f_inverse(f, r));
            s
        }
        ExprKind::Product(l, r, c) => {
            let mut s: TupleSet = f_inverse(f, l).iter().map(|t| t.product(*c, r)).collect();
            if constants_in_language(l).contains(c) {
                s.extend(f_inverse(f, r));
            }
            s
        }
        ExprKind::Star(e, c) => f_inverse(f, e)
            .iter()
            .map(|t| t.product(*c, expr))
            .collect(),
    }
}

/// f⁻¹(S) for a set of expressions.
pub fn f_inverse_set<'a>(f: Label, exprs: impl IntoIterator<Item = &'a RegExpr>) -> TupleSet {
    let mut out = TupleSet::new();
    for e in exprs {
        out.extend(f_inverse(f, e));
    }
    out
}

/// SET(S): all components of all tuples.
pub fn set_of(tuples: &TupleSet) -> IndexSet<RegExpr> {
    tuples.iter().flat_map(|t| t.0.iter().cloned()).collect()
}

/// ∂_w(E) for a word of symbols of arity ≥ 1.
pub fn partial_derivative(word: &[Label], expr: &RegExpr) -> IndexSet<RegExpr> {
    let mut current = IndexSet::from([expr.clone()]);
    for &f in word {
        current = set_of(&f_inverse_set(f, &current));
    }
    current
}

/// Labels of arity ≥ 1 occurring in `expr`, in order of first occurrence.
pub fn applied_labels(expr: &RegExpr) -> Vec<Label> {
    let mut out = IndexSet::new();
    let mut stack = vec![expr];
    while let Some(e) = stack.pop() {
        if let ExprKind::Apply(l, _) = e.kind() {
            out.insert(*l);
        }
        stack.extend(e.children().into_iter().rev());
    }
    out.into_iter().collect()
}

/// A_E: states are the partial derivatives of E, found by worklist closure;
/// E is the only final state.
pub fn build_equation_automaton_naive(expr: &RegExpr, alphabet: &RankedAlphabet) -> TreeAutomaton {
    let labels = applied_labels(expr);
    let mut states: IndexMap<RegExpr, usize> = IndexMap::new();
    let mut aut = TreeAutomaton::new(alphabet.clone());
    let mut queue = VecDeque::new();
    let mut intern = |e: &RegExpr, aut: &mut TreeAutomaton, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&q) = states.get(e) {
            return q;
        }
        let q = aut.add_state(e.render(alphabet), false);
        states.insert(e.clone(), q);
        queue.push_back(q);
        q
    };
    let root = intern(expr, &mut aut, &mut queue);
    aut.set_final(root, true);
    let mut exprs: Vec<RegExpr> = vec![expr.clone()];
    while let Some(q) = queue.pop_front() {
        let e = exprs[q].clone();
        for &f in &labels {
            for tuple in f_inverse(f, &e) {
                let children: Vec<usize> = tuple
                    .0
                    .iter()
                    .map(|g| {
                        let id = intern(g, &mut aut, &mut queue);
                        if id == exprs.len() {
                            exprs.push(g.clone());
                        }
                        id
                    })
                    .collect();
                aut.add_rule(q, f, children);
            }
        }
        for c in constants_in_language(&e) {
            aut.add_leaf_rule(q, c);
        }
    }
    aut
}
