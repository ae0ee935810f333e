use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol inside a [`RankedAlphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A symbol of a linearized expression: a base symbol plus an optional
/// position mark. Constants are never marked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub symbol: Symbol,
    pub mark: Option<u32>,
}

impl Label {
    pub fn plain(symbol: Symbol) -> Self {
        Label { symbol, mark: None }
    }

    pub fn marked(symbol: Symbol, index: u32) -> Self {
        Label {
            symbol,
            mark: Some(index),
        }
    }

    /// The h-projection: drops the mark.
    pub fn project(self) -> Self {
        Label::plain(self.symbol)
    }
}

/// A finite set of symbols, each with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedAlphabet {
    names: Vec<String>,
    arities: Vec<usize>,
    index: HashMap<String, Symbol>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, arity)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        let mut alphabet = Self::new();
        for (name, arity) in pairs {
            alphabet.add(name, arity)?;
        }
        Ok(alphabet)
    }

    /// Parses whitespace-separated `name/arity` declarations.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet = Self::new();
        for token in text.split_whitespace() {
            let (name, arity) = token
                .split_once('/')
                .ok_or_else(|| Error::MalformedDeclaration(token.to_string()))?;
            if !valid_name(name) {
                return Err(Error::MalformedDeclaration(token.to_string()));
            }
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::MalformedDeclaration(token.to_string()))?;
            alphabet.add(name, arity)?;
        }
        Ok(alphabet)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<Symbol> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        let symbol = Symbol(self.names.len() as u32);
        self.names.push(name.to_string());
        self.arities.push(arity);
        self.index.insert(name.to_string(), symbol);
        Ok(symbol)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.names[symbol.index()]
    }

    pub fn arity(&self, symbol: Symbol) -> usize {
        self.arities[symbol.index()]
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// Σ_n.
    pub fn of_arity(&self, n: usize) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(move |&s| self.arity(s) == n)
    }

    pub fn constants(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.of_arity(0)
    }

    pub fn is_constant(&self, symbol: Symbol) -> bool {
        self.arity(symbol) == 0
    }

    /// Renders a possibly marked label, e.g. `h2` for the second position.
    pub fn label_name(&self, label: Label) -> String {
        match label.mark {
            None => self.name(label.symbol).to_string(),
            Some(j) => format!("{}{}", self.name(label.symbol), j),
        }
    }

    /// Resolves a label name. Unknown names ending in digits are read as marked
    /// positions when `allow_marks` is set and the base has arity ≥ 1.
    pub fn resolve_label(&self, name: &str, allow_marks: bool) -> Option<Label> {
        if let Some(symbol) = self.lookup(name) {
            return Some(Label::plain(symbol));
        }
        if !allow_marks {
            return None;
        }
        let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if split == 0 || split == name.len() {
            return None;
        }
        let symbol = self.lookup(&name[..split])?;
        let index: u32 = name[split..].parse().ok()?;
        (self.arity(symbol) >= 1 && index >= 1).then_some(Label::marked(symbol, index))
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}/{}", self.name(s), self.arity(s))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_example_alphabet() {
        let sigma = RankedAlphabet::parse("a/0 b/0 c/0 g/1 f/2 h/2").unwrap();
        assert_eq!(sigma.len(), 6);
        let names = |n| {
            sigma
                .of_arity(n)
                .map(|s| sigma.name(s).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(0), ["a", "b", "c"]);
        assert_eq!(names(1), ["g"]);
        assert_eq!(names(2), ["f", "h"]);
    }

    #[test]
    fn single_constant() {
        let sigma = RankedAlphabet::parse("a/0").unwrap();
        assert_eq!(sigma.len(), 1);
        assert!(sigma.is_constant(sigma.lookup("a").unwrap()));
    }

    #[test]
    fn rejects_duplicates_and_bad_tokens() {
        assert_eq!(
            RankedAlphabet::parse("a/0 a/1"),
            Err(Error::DuplicateSymbol("a".into()))
        );
        assert!(matches!(
            RankedAlphabet::parse("a/x"),
            Err(Error::MalformedDeclaration(_))
        ));
        assert!(matches!(
            RankedAlphabet::parse("a"),
            Err(Error::MalformedDeclaration(_))
        ));
        assert!(matches!(
            RankedAlphabet::parse("1a/0"),
            Err(Error::MalformedDeclaration(_))
        ));
    }

    #[test]
    fn resolves_marked_labels() {
        let sigma = RankedAlphabet::parse("a/0 h/2").unwrap();
        let h = sigma.lookup("h").unwrap();
        assert_eq!(sigma.resolve_label("h12", true), Some(Label::marked(h, 12)));
        assert_eq!(sigma.resolve_label("h12", false), None);
        assert_eq!(sigma.resolve_label("a3", true), None);
        assert_eq!(sigma.label_name(Label::marked(h, 3)), "h3");
    }
}
