use std::fmt;

use super::automaton::{NodePartition, WordAutomaton};
use crate::error::Result;
use crate::syntax::{NodeId, NodeKind, RankedAlphabet, Symbol, SyntaxTree};

/// Letters of A_T(E).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeLetter {
    Const(Symbol),
    SumLeft,
    SumRight,
    Star(Symbol),
    ProductLeft(Symbol),
    ProductRight(Symbol),
    /// f^k: go to the k-th child of an f node.
    Child(Symbol, u32),
}

impl TreeLetter {
    pub fn name(self, alphabet: &RankedAlphabet) -> String {
        match self {
            TreeLetter::Const(c) => alphabet.name(c).to_string(),
            TreeLetter::SumLeft => "g+".into(),
            TreeLetter::SumRight => "d+".into(),
            TreeLetter::Star(c) => format!("*{}", alphabet.name(c)),
            TreeLetter::ProductLeft(c) => format!("g.{}", alphabet.name(c)),
            TreeLetter::ProductRight(c) => format!("d.{}", alphabet.name(c)),
            TreeLetter::Child(f, k) => format!("{}^{}", alphabet.name(f), k),
        }
    }
}

/// A_T(E): one state per node plus the final state ν_T (the last state).
/// Marks on labels are ignored, so the tree of Ē gives the automaton of E.
pub fn build_subexpression_automaton(tree: &SyntaxTree) -> WordAutomaton<TreeLetter> {
    let n = tree.len();
    let mut aut = WordAutomaton::new();
    for _ in 0..n {
        aut.add_state(false);
    }
    let terminal = aut.add_state(true);
    aut.set_initial(tree.root());
    for v in 0..n {
        let kids = tree.children(v);
        match tree.kind(v) {
            NodeKind::Const(c) => aut.add_letter(v, TreeLetter::Const(c), terminal),
            NodeKind::Apply(label) => {
                for (k, &child) in kids.iter().enumerate() {
                    aut.add_letter(v, TreeLetter::Child(label.symbol, k as u32 + 1), child);
                }
            }
            NodeKind::Sum => {
                aut.add_letter(v, TreeLetter::SumLeft, kids[0]);
                aut.add_letter(v, TreeLetter::SumRight, kids[1]);
            }
            NodeKind::Product(c) => {
                aut.add_letter(v, TreeLetter::ProductLeft(c), kids[0]);
                aut.add_letter(v, TreeLetter::ProductRight(c), kids[1]);
            }
            NodeKind::Star(c) => aut.add_letter(v, TreeLetter::Star(c), kids[0]),
        }
    }
    aut
}

/// ψ: a numbering of the distinct subexpressions of E, read off the
/// minimized A_T(E).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Psi {
    /// 1-based id per node.
    ids: Vec<u32>,
    count: u32,
}

/// One letter of a ψ′-encoded word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PsiLetter {
    Class(u32),
    Dot(Symbol),
}

impl Psi {
    pub fn of(&self, node: NodeId) -> u32 {
        self.ids[node]
    }

    /// Number of distinct subexpressions.
    pub fn count(&self) -> u32 {
        self.count
    }

    /// ψ′(E_ν): a left-nested product F ·c G is spelled ψ′(F) ·c ψ(G).
    pub fn prime(&self, tree: &SyntaxTree, node: NodeId) -> Vec<PsiLetter> {
        let mut tail = Vec::new();
        let mut v = node;
        while let NodeKind::Product(c) = tree.kind(v) {
            let kids = tree.children(v);
            tail.push((c, kids[1]));
            v = kids[0];
        }
        let mut word = Vec::with_capacity(1 + 2 * tail.len());
        word.push(PsiLetter::Class(self.ids[v]));
        for &(c, r) in tail.iter().rev() {
            word.push(PsiLetter::Dot(c));
            word.push(PsiLetter::Class(self.ids[r]));
        }
        word
    }
}

/// Writes a ψ′ word as `4 .c 1 .b 11`.
pub struct PsiWord<'a>(pub &'a [PsiLetter], pub &'a RankedAlphabet);

impl fmt::Display for PsiWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                PsiLetter::Class(k) => write!(f, "{k}")?,
                PsiLetter::Dot(c) => write!(f, ".{}", self.1.name(*c))?,
            }
        }
        Ok(())
    }
}

/// Computes ψ for every node.
///
/// Ids are deterministic: constants first in alphabet order, then the other
/// subexpressions by decreasing depth of their deepest occurrence, then by
/// increasing height, then by first preorder occurrence.
pub fn psi_encoding(tree: &SyntaxTree) -> Result<Psi> {
    let partition: NodePartition = build_subexpression_automaton(tree).revuz_minimize()?;
    let n = tree.len();
    let mut depth = vec![0usize; n];
    for v in 1..n {
        depth[v] = depth[tree.parent(v).unwrap()] + 1;
    }
    let mut height = vec![1usize; n];
    for v in (0..n).rev() {
        if let Some(p) = tree.parent(v) {
            height[p] = height[p].max(height[v] + 1);
        }
    }
    #[derive(Clone, Copy)]
    struct Info {
        constant: Option<Symbol>,
        depth: usize,
        height: usize,
        first: usize,
    }
    let mut info: Vec<Option<Info>> = vec![None; partition.classes];
    for v in 0..n {
        let k = partition.class_of[v];
        let constant = match tree.kind(v) {
            NodeKind::Const(c) => Some(c),
            _ => None,
        };
        match &mut info[k] {
            Some(i) => i.depth = i.depth.max(depth[v]),
            slot => {
                *slot = Some(Info {
                    constant,
                    depth: depth[v],
                    height: height[v],
                    first: v,
                })
            }
        }
    }
    let mut order: Vec<(usize, Info)> = info
        .into_iter()
        .enumerate()
        .filter_map(|(k, i)| i.map(|i| (k, i)))
        .collect();
    order.sort_by(|(_, x), (_, y)| match (x.constant, y.constant) {
        (Some(a), Some(b)) => a.cmp(&b),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => y
            .depth
            .cmp(&x.depth)
            .then(x.height.cmp(&y.height))
            .then(x.first.cmp(&y.first)),
    });
    let mut id_of_class = vec![0u32; partition.classes];
    for (rank, (k, _)) in order.iter().enumerate() {
        id_of_class[*k] = rank as u32 + 1;
    }
    Ok(Psi {
        ids: (0..n).map(|v| id_of_class[partition.class_of[v]]).collect(),
        count: order.len() as u32,
    })
}
