use super::alphabet::{RankedAlphabet, Symbol};
use super::expr::RegExpr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Dot,
    Star,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let tok = match b {
            b if b.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'.' => Tok::Dot,
            b'*' => Tok::Star,
            b if b.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alphabet: &'a RankedAlphabet,
    marks: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn constant(&mut self) -> Result<Symbol> {
        let offset = self.offset();
        match self.bump() {
            Tok::Ident(name) => {
                let s = self.alphabet.lookup(&name).ok_or(Error::UnknownSymbol {
                    name: name.clone(),
                    offset,
                })?;
                if self.alphabet.is_constant(s) {
                    Ok(s)
                } else {
                    Err(Error::NotAConstant(name))
                }
            }
            _ => Err(Error::Syntax {
                offset,
                message: "expected a constant".into(),
            }),
        }
    }

    fn sum(&mut self) -> Result<RegExpr> {
        let mut left = self.prod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let right = self.prod()?;
            left = RegExpr::sum(left, right);
        }
        Ok(left)
    }

    fn prod(&mut self) -> Result<RegExpr> {
        let mut left = self.star()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let c = self.constant()?;
            let right = self.star()?;
            left = RegExpr::product(left, right, c);
        }
        Ok(left)
    }

    fn star(&mut self) -> Result<RegExpr> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let c = self.constant()?;
            e = RegExpr::star(e, c);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RegExpr> {
        let offset = self.offset();
        match self.bump() {
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let label = self
                    .alphabet
                    .resolve_label(&name, self.marks)
                    .ok_or_else(|| Error::UnknownSymbol {
                        name: name.clone(),
                        offset,
                    })?;
                let arity = self.alphabet.arity(label.symbol);
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        args.push(self.sum()?);
                        match self.bump() {
                            Tok::Comma => {}
                            Tok::RParen => break,
                            _ => {
                                return Err(Error::Syntax {
                                    offset: self.toks[self.pos.saturating_sub(1)].1,
                                    message: "expected `,` or `)`".into(),
                                })
                            }
                        }
                    }
                }
                if args.len() != arity {
                    return Err(Error::ArityMismatch {
                        name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                if arity == 0 {
                    Ok(RegExpr::constant(label.symbol))
                } else {
                    Ok(RegExpr::apply(label, args))
                }
            }
            _ => Err(Error::Syntax {
                offset,
                message: "expected a symbol or `(`".into(),
            }),
        }
    }
}

fn parse_with(text: &str, alphabet: &RankedAlphabet, marks: bool) -> Result<RegExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        alphabet,
        marks,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(Error::Syntax {
            offset: p.offset(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

/// Parses an expression over `alphabet`.
///
/// Precedence is star over product over sum; both binary operators are
/// left-associative.
pub fn parse_expression(text: &str, alphabet: &RankedAlphabet) -> Result<RegExpr> {
    parse_with(text, alphabet, false)
}

/// Like [`parse_expression`], but also accepts marked labels such as `h2`.
pub fn parse_marked_expression(text: &str, alphabet: &RankedAlphabet) -> Result<RegExpr> {
    parse_with(text, alphabet, true)
}
