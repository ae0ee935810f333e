use super::alphabet::{Label, RankedAlphabet, Symbol};
use super::expr::RegExpr;
use super::syntax_tree::{NodeId, NodeKind, SyntaxTree};

/// A marked occurrence f_j of a symbol of arity ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub base: Symbol,
    pub index: u32,
}

impl Position {
    pub fn label(self) -> Label {
        Label::marked(self.base, self.index)
    }

    pub fn name(self, alphabet: &RankedAlphabet) -> String {
        alphabet.label_name(self.label())
    }
}

/// Ē together with the source node of every position. The linearized tree
/// has the same shape as the source, so node ids are shared.
#[derive(Debug, Clone)]
pub struct LinearRegExpr {
    pub expr: RegExpr,
    /// Positions in index order: `positions[j - 1]` has index j.
    pub positions: Vec<Position>,
    /// `origin[j - 1]` is the preorder node id of position j.
    pub origin: Vec<NodeId>,
}

impl LinearRegExpr {
    pub fn position(&self, index: u32) -> Option<Position> {
        self.positions
            .get((index as usize).checked_sub(1)?)
            .copied()
    }

    pub fn node_of(&self, p: Position) -> Option<NodeId> {
        let i = (p.index as usize).checked_sub(1)?;
        (self.positions.get(i) == Some(&p)).then(|| self.origin[i])
    }

    pub fn project(&self) -> RegExpr {
        self.expr.project()
    }
}

/// Marks every symbol of arity ≥ 1 with consecutive indices in preorder.
pub fn linearize(expr: &RegExpr) -> LinearRegExpr {
    linearize_tree(&SyntaxTree::new(expr))
}

/// As [`linearize`], reusing an already built syntax tree.
pub fn linearize_tree(tree: &SyntaxTree) -> LinearRegExpr {
    let n = tree.len();
    let mut positions = Vec::new();
    let mut origin = Vec::new();
    let mut marks = vec![0u32; n];
    for (v, mark) in marks.iter_mut().enumerate() {
        if let NodeKind::Apply(label) = tree.kind(v) {
            positions.push(Position {
                base: label.symbol,
                index: positions.len() as u32 + 1,
            });
            origin.push(v);
            *mark = positions.len() as u32;
        }
    }
    let mut built: Vec<Option<RegExpr>> = vec![None; n];
    for v in (0..n).rev() {
        let mut take = |c: NodeId| built[c].take().unwrap();
        let kids = tree.children(v);
        let e = match tree.kind(v) {
            NodeKind::Const(c) => RegExpr::constant(c),
            NodeKind::Apply(label) => RegExpr::apply(
                Label::marked(label.symbol, marks[v]),
                kids.iter().map(|&c| take(c)).collect(),
            ),
            NodeKind::Sum => RegExpr::sum(take(kids[0]), take(kids[1])),
            NodeKind::Product(c) => RegExpr::product(take(kids[0]), take(kids[1]), c),
            NodeKind::Star(c) => RegExpr::star(take(kids[0]), c),
        };
        built[v] = Some(e);
    }
    LinearRegExpr {
        expr: built[0].take().unwrap(),
        positions,
        origin,
    }
}
