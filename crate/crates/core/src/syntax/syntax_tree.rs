use super::alphabet::{Label, Symbol};
use super::expr::{ExprKind, RegExpr};

pub type NodeId = usize;

/// The symbol carried by a node of T_E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Const(Symbol),
    Apply(Label),
    Sum,
    Product(Symbol),
    Star(Symbol),
}

/// Arena form of an expression's syntax tree. Node ids follow preorder, so
/// the root is 0 and every parent id is smaller than its children's.
#[derive(Debug, Clone)]
pub struct SyntaxTree {
    kinds: Vec<NodeKind>,
    parents: Vec<Option<NodeId>>,
    child_start: Vec<u32>,
    child_ids: Vec<NodeId>,
    subexprs: Vec<RegExpr>,
}

impl SyntaxTree {
    pub fn new(expr: &RegExpr) -> Self {
        let n = expr.size();
        let mut kinds = Vec::with_capacity(n);
        let mut parents = Vec::with_capacity(n);
        let mut subexprs = Vec::with_capacity(n);
        let mut children: Vec<Vec<NodeId>> = Vec::with_capacity(n);
        let mut stack: Vec<(RegExpr, Option<NodeId>)> = vec![(expr.clone(), None)];
        while let Some((e, parent)) = stack.pop() {
            let id = kinds.len();
            if let Some(p) = parent {
                children[p].push(id);
            }
            kinds.push(match e.kind() {
                ExprKind::Const(c) => NodeKind::Const(*c),
                ExprKind::Apply(l, _) => NodeKind::Apply(*l),
                ExprKind::Sum(..) => NodeKind::Sum,
                ExprKind::Product(_, _, c) => NodeKind::Product(*c),
                ExprKind::Star(_, c) => NodeKind::Star(*c),
            });
            parents.push(parent);
            children.push(Vec::new());
            for child in e.children().into_iter().rev() {
                stack.push((child.clone(), Some(id)));
            }
            subexprs.push(e);
        }
        let mut child_start = Vec::with_capacity(n + 1);
        let mut child_ids = Vec::with_capacity(n.saturating_sub(1));
        for list in children {
            child_start.push(child_ids.len() as u32);
            child_ids.extend(list);
        }
        child_start.push(child_ids.len() as u32);
        SyntaxTree {
            kinds,
            parents,
            child_start,
            child_ids,
            subexprs,
        }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.kinds[node]
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parents[node]
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        let (s, e) = (self.child_start[node], self.child_start[node + 1]);
        &self.child_ids[s as usize..e as usize]
    }

    /// The subexpression E_ν rooted at `node`.
    pub fn subexpr(&self, node: NodeId) -> &RegExpr {
        &self.subexprs[node]
    }

    pub fn left(&self, node: NodeId) -> Option<NodeId> {
        match self.kinds[node] {
            NodeKind::Sum | NodeKind::Product(_) => Some(self.children(node)[0]),
            _ => None,
        }
    }

    pub fn right(&self, node: NodeId) -> Option<NodeId> {
        match self.kinds[node] {
            NodeKind::Sum | NodeKind::Product(_) => Some(self.children(node)[1]),
            _ => None,
        }
    }

    /// Preorder ids of nodes whose label satisfies `pred`.
    pub fn find(&self, mut pred: impl FnMut(NodeKind) -> bool) -> Vec<NodeId> {
        (0..self.len()).filter(|&v| pred(self.kinds[v])).collect()
    }
}
