use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::alphabet::{Label, RankedAlphabet, Symbol};

/// One constructor of a regular tree expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Const(Symbol),
    Apply(Label, Vec<RegExpr>),
    Sum(RegExpr, RegExpr),
    /// `left ·c right`
    Product(RegExpr, RegExpr, Symbol),
    /// `operand *c`
    Star(RegExpr, Symbol),
}

#[derive(Debug)]
struct Node {
    kind: ExprKind,
    size: usize,
    hash: u64,
}

/// A shared, immutable regular tree expression.
///
/// Equality is structural (graphical), and coincides with equality of
/// [`RegExpr::render`] output. Size and hash are cached per node, so cloning,
/// hashing and comparing shared subterms is cheap.
#[derive(Debug, Clone)]
pub struct RegExpr(Arc<Node>);

impl PartialEq for RegExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for RegExpr {}

impl Hash for RegExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl RegExpr {
    fn build(kind: ExprKind) -> Self {
        let mut hasher = DefaultHasher::new();
        let size = match &kind {
            ExprKind::Const(c) => {
                (0u8, c).hash(&mut hasher);
                1
            }
            ExprKind::Apply(label, args) => {
                (1u8, label).hash(&mut hasher);
                for a in args {
                    hasher.write_u64(a.0.hash);
                }
                1 + args.iter().map(RegExpr::size).sum::<usize>()
            }
            ExprKind::Sum(l, r) => {
                2u8.hash(&mut hasher);
                hasher.write_u64(l.0.hash);
                hasher.write_u64(r.0.hash);
                1 + l.size() + r.size()
            }
            ExprKind::Product(l, r, c) => {
                (3u8, c).hash(&mut hasher);
                hasher.write_u64(l.0.hash);
                hasher.write_u64(r.0.hash);
                1 + l.size() + r.size()
            }
            ExprKind::Star(e, c) => {
                (4u8, c).hash(&mut hasher);
                hasher.write_u64(e.0.hash);
                1 + e.size()
            }
        };
        RegExpr(Arc::new(Node {
            kind,
            size,
            hash: hasher.finish(),
        }))
    }

    pub fn constant(c: Symbol) -> Self {
        Self::build(ExprKind::Const(c))
    }

    pub fn apply(label: Label, args: Vec<RegExpr>) -> Self {
        Self::build(ExprKind::Apply(label, args))
    }

    pub fn sum(left: RegExpr, right: RegExpr) -> Self {
        Self::build(ExprKind::Sum(left, right))
    }

    pub fn product(left: RegExpr, right: RegExpr, c: Symbol) -> Self {
        Self::build(ExprKind::Product(left, right, c))
    }

    pub fn star(operand: RegExpr, c: Symbol) -> Self {
        Self::build(ExprKind::Star(operand, c))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    /// |E|: number of nodes of the syntax tree.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// ||E||: number of occurrences of alphabet symbols.
    pub fn width(&self) -> usize {
        match self.kind() {
            ExprKind::Const(_) => 1,
            ExprKind::Apply(_, args) => 1 + args.iter().map(RegExpr::width).sum::<usize>(),
            ExprKind::Sum(l, r) | ExprKind::Product(l, r, _) => l.width() + r.width(),
            ExprKind::Star(e, _) => e.width(),
        }
    }

    /// Children in left-to-right order.
    pub fn children(&self) -> Vec<&RegExpr> {
        match self.kind() {
            ExprKind::Const(_) => Vec::new(),
            ExprKind::Apply(_, args) => args.iter().collect(),
            ExprKind::Sum(l, r) | ExprKind::Product(l, r, _) => vec![l, r],
            ExprKind::Star(e, _) => vec![e],
        }
    }

    /// Whether any applied label carries a position mark.
    pub fn is_marked(&self) -> bool {
        match self.kind() {
            ExprKind::Const(_) => false,
            ExprKind::Apply(label, args) => {
                label.mark.is_some() || args.iter().any(Self::is_marked)
            }
            ExprKind::Sum(l, r) | ExprKind::Product(l, r, _) => l.is_marked() || r.is_marked(),
            ExprKind::Star(e, _) => e.is_marked(),
        }
    }

    /// The h-projection: erases every position mark.
    pub fn project(&self) -> RegExpr {
        match self.kind() {
            ExprKind::Const(_) => self.clone(),
            ExprKind::Apply(label, args) => {
                RegExpr::apply(label.project(), args.iter().map(Self::project).collect())
            }
            ExprKind::Sum(l, r) => RegExpr::sum(l.project(), r.project()),
            ExprKind::Product(l, r, c) => RegExpr::product(l.project(), r.project(), *c),
            ExprKind::Star(e, c) => RegExpr::star(e.project(), *c),
        }
    }

    /// Canonical fully parenthesized form. `parse(render(e)) == e`.
    pub fn render(&self, alphabet: &RankedAlphabet) -> String {
        let mut out = String::new();
        self.render_into(alphabet, &mut out);
        out
    }

    fn render_into(&self, alphabet: &RankedAlphabet, out: &mut String) {
        match self.kind() {
            ExprKind::Const(c) => out.push_str(alphabet.name(*c)),
            ExprKind::Apply(label, args) => {
                out.push_str(&alphabet.label_name(*label));
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.render_into(alphabet, out);
                }
                out.push(')');
            }
            ExprKind::Sum(l, r) => {
                out.push('(');
                l.render_into(alphabet, out);
                out.push_str(" + ");
                r.render_into(alphabet, out);
                out.push(')');
            }
            ExprKind::Product(l, r, c) => {
                out.push('(');
                l.render_into(alphabet, out);
                let _ = write!(out, " .{} ", alphabet.name(*c));
                r.render_into(alphabet, out);
                out.push(')');
            }
            ExprKind::Star(e, c) => {
                out.push('(');
                e.render_into(alphabet, out);
                let _ = write!(out, "*{})", alphabet.name(*c));
            }
        }
    }

    /// Human-oriented rendering with the fewest parentheses the grammar needs
    /// (star binds tighter than product, product tighter than sum, both
    /// binary operators associate to the left).
    pub fn pretty(&self, alphabet: &RankedAlphabet) -> String {
        let mut out = String::new();
        self.pretty_into(alphabet, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self.kind() {
            ExprKind::Sum(..) => 0,
            ExprKind::Product(..) => 1,
            ExprKind::Star(..) => 2,
            _ => 3,
        }
    }

    fn pretty_operand(&self, alphabet: &RankedAlphabet, min: u8, out: &mut String) {
        if self.precedence() < min {
            out.push('(');
            self.pretty_into(alphabet, out);
            out.push(')');
        } else {
            self.pretty_into(alphabet, out);
        }
    }

    fn pretty_into(&self, alphabet: &RankedAlphabet, out: &mut String) {
        match self.kind() {
            ExprKind::Const(c) => out.push_str(alphabet.name(*c)),
            ExprKind::Apply(label, args) => {
                out.push_str(&alphabet.label_name(*label));
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.pretty_into(alphabet, out);
                }
                out.push(')');
            }
            ExprKind::Sum(l, r) => {
                l.pretty_operand(alphabet, 0, out);
                out.push_str(" + ");
                r.pretty_operand(alphabet, 1, out);
            }
            ExprKind::Product(l, r, c) => {
                l.pretty_operand(alphabet, 1, out);
                let _ = write!(out, " .{} ", alphabet.name(*c));
                r.pretty_operand(alphabet, 2, out);
            }
            ExprKind::Star(e, c) => {
                e.pretty_operand(alphabet, 3, out);
                let _ = write!(out, "*{}", alphabet.name(*c));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> RankedAlphabet {
        RankedAlphabet::parse("a/0 b/0 c/0 g/1 f/2 h/2").unwrap()
    }

    #[test]
    fn renders_constants_and_operators() {
        let s = sigma();
        let a = RegExpr::constant(s.lookup("a").unwrap());
        let b = s.lookup("b").unwrap();
        let g = Label::plain(s.lookup("g").unwrap());
        assert_eq!(a.render(&s), "a");
        let star = RegExpr::star(RegExpr::apply(g, vec![a.clone()]), s.lookup("a").unwrap());
        let e = RegExpr::product(star, a.clone(), b);
        assert_eq!(e.render(&s), "((g(a)*a) .b a)");
        assert_eq!(e.pretty(&s), "g(a)*a .b a");
        assert_eq!(e.size(), 5);
        assert_eq!(e.width(), 3);
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let s = sigma();
        let a = s.lookup("a").unwrap();
        let x = RegExpr::sum(RegExpr::constant(a), RegExpr::constant(a));
        let y = RegExpr::sum(RegExpr::constant(a), RegExpr::constant(a));
        assert_eq!(x, y);
        assert_ne!(
            x,
            RegExpr::product(RegExpr::constant(a), RegExpr::constant(a), a)
        );
    }
}
