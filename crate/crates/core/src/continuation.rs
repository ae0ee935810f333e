//! ZPC structure, k-C-continuations as node chains, First and Follow.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::syntax::{
    ExprKind, Label, LinearRegExpr, NodeId, NodeKind, Position, RankedAlphabet, RegExpr, Symbol,
    SyntaxTree,
};

/// Identifies a continuation: ε¹ (the whole expression) or f_j^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContKey {
    Epsilon,
    Child(Position, usize),
}

impl ContKey {
    pub fn name(self, alphabet: &RankedAlphabet) -> String {
        match self {
            ContKey::Epsilon => "eps^1".to_string(),
            ContKey::Child(p, k) => format!("{}^{}", p.name(alphabet), k),
        }
    }
}

/// A member of a First or Follow set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FirstItem {
    Const(Symbol),
    Pos(Position),
}

impl FirstItem {
    pub fn name(self, alphabet: &RankedAlphabet) -> String {
        match self {
            FirstItem::Const(c) => alphabet.name(c).to_string(),
            FirstItem::Pos(p) => p.name(alphabet),
        }
    }
}

pub type FirstSet = BTreeSet<FirstItem>;

/// Syntax tree of Ē with γ-links and the constants of every subexpression.
#[derive(Debug, Clone)]
pub struct ZpcStructure {
    lin: LinearRegExpr,
    tree: SyntaxTree,
    gamma: Vec<Option<NodeId>>,
    consts: Vec<BTreeSet<Symbol>>,
}

pub fn build_zpc(lin: &LinearRegExpr) -> ZpcStructure {
    let tree = SyntaxTree::new(&lin.expr);
    let n = tree.len();
    let mut gamma = vec![None; n];
    for (v, g) in gamma.iter_mut().enumerate() {
        if let Some(p) = tree.parent(v) {
            *g = match tree.kind(p) {
                NodeKind::Star(_) => Some(p),
                NodeKind::Product(_) if tree.left(p) == Some(v) => tree.right(p),
                _ => None,
            };
        }
    }
    let mut consts: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); n];
    for v in (0..n).rev() {
        let kids = tree.children(v);
        let set = match tree.kind(v) {
            NodeKind::Const(c) => BTreeSet::from([c]),
            NodeKind::Apply(_) => BTreeSet::new(),
            NodeKind::Sum => consts[kids[0]].union(&consts[kids[1]]).copied().collect(),
            NodeKind::Product(c) => {
                let mut s = consts[kids[0]].clone();
                if s.remove(&c) {
                    s.extend(consts[kids[1]].iter().copied());
                }
                s
            }
            NodeKind::Star(c) => {
                let mut s = consts[kids[0]].clone();
                s.insert(c);
                s
            }
        };
        consts[v] = set;
    }
    ZpcStructure {
        lin: lin.clone(),
        tree,
        gamma,
        consts,
    }
}

impl ZpcStructure {
    pub fn linear(&self) -> &LinearRegExpr {
        &self.lin
    }

    pub fn tree(&self) -> &SyntaxTree {
        &self.tree
    }

    pub fn gamma(&self, node: NodeId) -> Option<NodeId> {
        self.gamma[node]
    }

    /// ⟦Ē_ν⟧ ∩ Σ₀.
    pub fn node_constants(&self, node: NodeId) -> &BTreeSet<Symbol> {
        &self.consts[node]
    }

    /// op(ν): the constant of the father's product or star.
    fn op(&self, node: NodeId) -> Symbol {
        match self
            .tree
            .kind(self.tree.parent(node).expect("root has no γ-link"))
        {
            NodeKind::Product(c) | NodeKind::Star(c) => c,
            _ => unreachable!("γ-link under a node that is neither a product nor a star"),
        }
    }

    /// Every continuation key in state order: ε¹ first, then f_j^k by
    /// position index and child index.
    pub fn keys(&self) -> Vec<ContKey> {
        let mut keys = vec![ContKey::Epsilon];
        for (i, p) in self.lin.positions.iter().enumerate() {
            let arity = self.tree.children(self.lin.origin[i]).len();
            keys.extend((1..=arity).map(|k| ContKey::Child(*p, k)));
        }
        keys
    }
}

/// C_{f^k} kept as a chain: the head node followed by (op, γ-target) links,
/// bottom-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuationChain {
    pub key: ContKey,
    pub head: NodeId,
    pub links: Vec<(Symbol, NodeId)>,
}

pub fn continuation_chain(
    zpc: &ZpcStructure,
    position: Position,
    k: usize,
) -> Result<ContinuationChain> {
    let node = zpc
        .lin
        .node_of(position)
        .ok_or(Error::UnknownPosition(position.index))?;
    let kids = zpc.tree.children(node);
    if k == 0 || k > kids.len() {
        return Err(Error::InvalidChild {
            k,
            arity: kids.len(),
        });
    }
    let mut links = Vec::new();
    let mut v = Some(node);
    while let Some(u) = v {
        if let Some(g) = zpc.gamma[u] {
            links.push((zpc.op(u), g));
        }
        v = zpc.tree.parent(u);
    }
    Ok(ContinuationChain {
        key: ContKey::Child(position, k),
        head: kids[k - 1],
        links,
    })
}

pub fn chain_for(zpc: &ZpcStructure, key: ContKey) -> Result<ContinuationChain> {
    match key {
        ContKey::Epsilon => Ok(ContinuationChain {
            key,
            head: zpc.tree.root(),
            links: Vec::new(),
        }),
        ContKey::Child(p, k) => continuation_chain(zpc, p, k),
    }
}

/// Builds the left-associated product the chain stands for.
pub fn materialize(zpc: &ZpcStructure, chain: &ContinuationChain) -> RegExpr {
    chain
        .links
        .iter()
        .fold(zpc.tree.subexpr(chain.head).clone(), |acc, &(c, g)| {
            RegExpr::product(acc, zpc.tree.subexpr(g).clone(), c)
        })
}

/// First by structural recursion on any expression. Unmarked labels show
/// up as positions with index 0.
pub fn compute_first_expr(expr: &RegExpr) -> FirstSet {
    let item = |label: Label| {
        FirstItem::Pos(Position {
            base: label.symbol,
            index: label.mark.unwrap_or(0),
        })
    };
    match expr.kind() {
        ExprKind::Const(c) => BTreeSet::from([FirstItem::Const(*c)]),
        ExprKind::Apply(label, _) => BTreeSet::from([item(*label)]),
        ExprKind::Sum(l, r) => {
            let mut s = compute_first_expr(l);
            s.extend(compute_first_expr(r));
            s
        }
        ExprKind::Product(l, r, c) => {
            let mut s = compute_first_expr(l);
            if s.remove(&FirstItem::Const(*c)) {
                s.extend(compute_first_expr(r));
            }
            s
        }
        ExprKind::Star(e, c) => {
            let mut s = compute_first_expr(e);
            s.insert(FirstItem::Const(*c));
            s
        }
    }
}

/// Reusable scratch space for reading First off chains without
/// materializing them. Each scan costs O(|E|) thanks to node stamps.
#[derive(Debug, Clone)]
pub struct ChainScanner {
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<NodeId>,
}

/// Positions and constants of First for one chain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainFirst {
    /// Position indices, ascending.
    pub positions: Vec<u32>,
    pub constants: BTreeSet<Symbol>,
}

impl ChainScanner {
    pub fn new(zpc: &ZpcStructure) -> Self {
        ChainScanner {
            stamp: vec![0; zpc.tree.len()],
            epoch: 0,
            stack: Vec::new(),
        }
    }

    pub fn scan(&mut self, zpc: &ZpcStructure, chain: &ContinuationChain) -> ChainFirst {
        self.epoch += 1;
        let mut out = Vec::new();
        let mut consts = zpc.consts[chain.head].clone();
        self.gather(zpc, chain.head, &mut out);
        for &(c, g) in &chain.links {
            if consts.remove(&c) {
                consts.extend(zpc.consts[g].iter().copied());
                self.gather(zpc, g, &mut out);
            }
        }
        out.sort_unstable();
        ChainFirst {
            positions: out,
            constants: consts,
        }
    }

    fn gather(&mut self, zpc: &ZpcStructure, root: NodeId, out: &mut Vec<u32>) {
        self.stack.push(root);
        while let Some(v) = self.stack.pop() {
            if self.stamp[v] == self.epoch {
                continue;
            }
            self.stamp[v] = self.epoch;
            let kids = zpc.tree.children(v);
            match zpc.tree.kind(v) {
                NodeKind::Const(_) => {}
                NodeKind::Apply(label) => out.push(label.mark.expect("linear expression")),
                NodeKind::Sum => self.stack.extend([kids[1], kids[0]]),
                NodeKind::Product(c) => {
                    if zpc.consts[kids[0]].contains(&c) {
                        self.stack.push(kids[1]);
                    }
                    self.stack.push(kids[0]);
                }
                NodeKind::Star(_) => self.stack.push(kids[0]),
            }
        }
    }
}

fn to_first_set(zpc: &ZpcStructure, f: &ChainFirst) -> FirstSet {
    f.constants
        .iter()
        .map(|&c| FirstItem::Const(c))
        .chain(
            f.positions
                .iter()
                .map(|&j| FirstItem::Pos(zpc.lin.positions[j as usize - 1])),
        )
        .collect()
}

/// First of the continuation a chain stands for.
pub fn compute_first(zpc: &ZpcStructure, chain: &ContinuationChain) -> FirstSet {
    to_first_set(zpc, &ChainScanner::new(zpc).scan(zpc, chain))
}

/// Constants of the continuation's language, read along the chain.
pub fn continuation_constants(zpc: &ZpcStructure, chain: &ContinuationChain) -> BTreeSet<Symbol> {
    let mut consts = zpc.consts[chain.head].clone();
    for &(c, g) in &chain.links {
        if consts.remove(&c) {
            consts.extend(zpc.consts[g].iter().copied());
        }
    }
    consts
}

/// First of Ē and Follow for every (f_j, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionSets {
    pub first: FirstSet,
    pub follow: BTreeMap<(Position, usize), FirstSet>,
}

/// Constants that occur at some leaf of some tree of ⟦Ē_ν⟧.
fn leaf_constants(zpc: &ZpcStructure) -> Vec<BTreeSet<Symbol>> {
    let tree = &zpc.tree;
    let mut lc: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); tree.len()];
    for v in (0..tree.len()).rev() {
        let kids = tree.children(v);
        let set = match tree.kind(v) {
            NodeKind::Const(c) => BTreeSet::from([c]),
            NodeKind::Apply(_) | NodeKind::Sum => {
                kids.iter().flat_map(|&k| lc[k].iter().copied()).collect()
            }
            NodeKind::Product(c) => {
                let mut s = lc[kids[0]].clone();
                if s.remove(&c) {
                    s.extend(lc[kids[1]].iter().copied());
                }
                s
            }
            NodeKind::Star(c) => {
                let mut s = lc[kids[0]].clone();
                s.insert(c);
                s
            }
        };
        lc[v] = set;
    }
    lc
}

/// Whether each node's subexpression actually contributes to some tree of
/// ⟦Ē⟧: the right operand of ·c only does if c occurs in the left one.
pub fn reachable_nodes(zpc: &ZpcStructure) -> Vec<bool> {
    let tree = &zpc.tree;
    let lc = leaf_constants(zpc);
    let mut reach = vec![false; tree.len()];
    reach[0] = true;
    for v in 0..tree.len() {
        if !reach[v] {
            continue;
        }
        let kids = tree.children(v);
        match tree.kind(v) {
            NodeKind::Product(c) => {
                reach[kids[0]] = true;
                reach[kids[1]] = lc[kids[0]].contains(&c);
            }
            _ => kids.iter().for_each(|&k| reach[k] = true),
        }
    }
    reach
}

pub fn compute_follow_all(zpc: &ZpcStructure) -> PositionSets {
    let reach = reachable_nodes(zpc);
    let mut scanner = ChainScanner::new(zpc);
    let root = chain_for(zpc, ContKey::Epsilon).expect("ε¹ always exists");
    let first = to_first_set(zpc, &scanner.scan(zpc, &root));
    let mut follow = BTreeMap::new();
    for key in zpc.keys().into_iter().skip(1) {
        let ContKey::Child(p, k) = key else {
            unreachable!()
        };
        let set = if reach[zpc.lin.node_of(p).unwrap()] {
            let chain = chain_for(zpc, key).unwrap();
            to_first_set(zpc, &scanner.scan(zpc, &chain))
        } else {
            FirstSet::new()
        };
        follow.insert((p, k), set);
    }
    PositionSets { first, follow }
}
