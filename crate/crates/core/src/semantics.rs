//! Exact tree-language operations at small sizes, used as ground truth.

use std::collections::BTreeSet;

use crate::syntax::{ExprKind, Label, RegExpr, Symbol, Tree};

pub type TreeSet = BTreeSet<Tree>;

/// ⟦E⟧ ∩ Σ₀, by structural recursion.
pub fn constants_in_language(expr: &RegExpr) -> BTreeSet<Symbol> {
    match expr.kind() {
        ExprKind::Const(c) => BTreeSet::from([*c]),
        ExprKind::Apply(..) => BTreeSet::new(),
        ExprKind::Sum(l, r) => {
            let mut s = constants_in_language(l);
            s.extend(constants_in_language(r));
            s
        }
        ExprKind::Product(l, r, c) => {
            let mut s = constants_in_language(l);
            if s.remove(c) {
                s.extend(constants_in_language(r));
            }
            s
        }
        ExprKind::Star(e, c) => {
            let mut s = constants_in_language(e);
            s.insert(*c);
            s
        }
    }
}

/// t{c ← L}: every occurrence of `c` is replaced independently.
pub fn c_substitute(t: &Tree, c: Symbol, lang: &TreeSet) -> TreeSet {
    substitute_capped(t, c, lang, usize::MAX)
        .into_iter()
        .collect()
}

/// L₁ ·c L₂.
pub fn c_product(left: &TreeSet, c: Symbol, right: &TreeSet) -> TreeSet {
    capped_product(left, c, right, usize::MAX)
}

fn substitute_capped(t: &Tree, c: Symbol, lang: &TreeSet, cap: usize) -> Vec<Tree> {
    if t.children.is_empty() {
        if t.label == Label::plain(c) {
            return lang.iter().filter(|s| s.size() <= cap).cloned().collect();
        }
        return if cap >= 1 {
            vec![t.clone()]
        } else {
            Vec::new()
        };
    }
    let options: Vec<Vec<Tree>> = t
        .children
        .iter()
        .map(|child| substitute_capped(child, c, lang, cap.saturating_sub(1)))
        .collect();
    assemble(t.label, &options, cap)
}

/// All trees `label(t1,…,tn)` with `ti ∈ options[i]` and at most `cap` nodes.
fn assemble(label: Label, options: &[Vec<Tree>], cap: usize) -> Vec<Tree> {
    if cap == 0 {
        return Vec::new();
    }
    let sized: Vec<Vec<(usize, &Tree)>> = options
        .iter()
        .map(|o| o.iter().map(|t| (t.size(), t)).collect())
        .collect();
    let min_rest: Vec<usize> = {
        let mut acc = vec![0; sized.len() + 1];
        for i in (0..sized.len()).rev() {
            let m = sized[i].iter().map(|p| p.0).min().unwrap_or(usize::MAX / 4);
            acc[i] = acc[i + 1] + m;
        }
        acc
    };
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(options.len());
    fn go<'a>(
        i: usize,
        budget: usize,
        sized: &[Vec<(usize, &'a Tree)>],
        min_rest: &[usize],
        current: &mut Vec<&'a Tree>,
        label: Label,
        out: &mut Vec<Tree>,
    ) {
        if i == sized.len() {
            out.push(Tree::node(
                label,
                current.iter().map(|t| (*t).clone()).collect(),
            ));
            return;
        }
        for &(size, t) in &sized[i] {
            if size + min_rest[i + 1] <= budget {
                current.push(t);
                go(i + 1, budget - size, sized, min_rest, current, label, out);
                current.pop();
            }
        }
    }
    if min_rest[0] < cap {
        go(0, cap - 1, &sized, &min_rest, &mut current, label, &mut out);
    }
    out
}

fn capped_product(left: &TreeSet, c: Symbol, right: &TreeSet, cap: usize) -> TreeSet {
    let mut out = TreeSet::new();
    for t in left {
        out.extend(substitute_capped(t, c, right, cap));
    }
    out
}

/// { t ∈ ⟦E⟧ : t has at most `max_nodes` nodes }.
pub fn enumerate_language(expr: &RegExpr, max_nodes: usize) -> TreeSet {
    match expr.kind() {
        ExprKind::Const(c) => {
            if max_nodes >= 1 {
                TreeSet::from([Tree::leaf(Label::plain(*c))])
            } else {
                TreeSet::new()
            }
        }
        ExprKind::Apply(label, args) => {
            let options: Vec<Vec<Tree>> = args
                .iter()
                .map(|a| {
                    enumerate_language(a, max_nodes.saturating_sub(1))
                        .into_iter()
                        .collect()
                })
                .collect();
            assemble(*label, &options, max_nodes).into_iter().collect()
        }
        ExprKind::Sum(l, r) => {
            let mut s = enumerate_language(l, max_nodes);
            s.extend(enumerate_language(r, max_nodes));
            s
        }
        ExprKind::Product(l, r, c) => capped_product(
            &enumerate_language(l, max_nodes),
            *c,
            &enumerate_language(r, max_nodes),
            max_nodes,
        ),
        ExprKind::Star(e, c) => {
            let base = enumerate_language(e, max_nodes);
            let mut acc = TreeSet::new();
            if max_nodes >= 1 {
                acc.insert(Tree::leaf(Label::plain(*c)));
            }
            loop {
                let next = capped_product(&base, *c, &acc, max_nodes);
                let before = acc.len();
                acc.extend(next);
                if acc.len() == before {
                    return acc;
                }
            }
        }
    }
}
