use super::alphabet::{Label, RankedAlphabet};
use crate::error::{Error, Result};

/// A finite ordered tree. Labels may carry marks so the same type serves
/// trees over a linearized alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub label: Label,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(label: Label) -> Self {
        Tree {
            label,
            children: Vec::new(),
        }
    }

    pub fn node(label: Label, children: Vec<Tree>) -> Self {
        Tree { label, children }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Tree::height).max().unwrap_or(0)
    }

    pub fn project(&self) -> Tree {
        Tree::node(
            self.label.project(),
            self.children.iter().map(Tree::project).collect(),
        )
    }

    pub fn render(&self, alphabet: &RankedAlphabet) -> String {
        let mut out = String::new();
        self.render_into(alphabet, &mut out);
        out
    }

    fn render_into(&self, alphabet: &RankedAlphabet, out: &mut String) {
        out.push_str(&alphabet.label_name(self.label));
        if !self.children.is_empty() {
            out.push('(');
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                c.render_into(alphabet, out);
            }
            out.push(')');
        }
    }

    /// Parses `sym` or `sym(t1,...,tn)` with arity checking.
    pub fn parse(text: &str, alphabet: &RankedAlphabet) -> Result<Tree> {
        let mut p = TreeParser {
            src: text.as_bytes(),
            pos: 0,
            alphabet,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Syntax {
                offset: p.pos,
                message: "trailing input after tree".into(),
            });
        }
        Ok(t)
    }
}

struct TreeParser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a RankedAlphabet,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Syntax {
                offset: start,
                message: "expected a symbol".into(),
            });
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let label =
            self.alphabet
                .resolve_label(name, true)
                .ok_or_else(|| Error::UnknownSymbol {
                    name: name.to_string(),
                    offset: start,
                })?;
        let mut children = Vec::new();
        if self.eat(b'(') {
            loop {
                children.push(self.tree()?);
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        message: "expected `,` or `)`".into(),
                    });
                }
            }
        }
        let expected = self.alphabet.arity(label.symbol);
        if children.len() != expected {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected,
                found: children.len(),
            });
        }
        Ok(Tree::node(label, children))
    }
}
