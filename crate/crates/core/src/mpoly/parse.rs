use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use super::MPoly;
use crate::field::{Scalar, Q};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, c)) = it.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = p + c.len_utf8();
                it.next();
            }
            let n: BigInt = text[pos..end].parse().expect("digits");
            out.push((Tok::Int(n), pos));
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut end = pos;
            while let Some(&(p, c)) = it.peek() {
                if !(c.is_alphanumeric() || c == '_') {
                    break;
                }
                end = p + c.len_utf8();
                it.next();
            }
            out.push((Tok::Ident(text[pos..end].to_string()), pos));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError::Syntax { offset: pos, message: format!("unexpected character `{ch}`") });
            }
        };
        out.push((tok, pos));
        it.next();
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a Arc<Vec<String>>,
    _f: std::marker::PhantomData<F>,
}

impl<F: Scalar> Parser<'_, F> {
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

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.to_string() })
    }

    fn expr(&mut self) -> Result<MPoly<F>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<F>, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly<F>, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly<F>, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(n) => {
                let e: u32 = n.try_into().map_err(|_| ParseError::Syntax {
                    offset: self.toks[self.pos - 1].1,
                    message: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a nonnegative integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<MPoly<F>, ParseError> {
        let start = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                let mut value = Q::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.offset();
                    match self.bump() {
                        Tok::Int(d) if d != BigInt::from(0) => value /= Q::from_integer(d),
                        Tok::Int(_) => {
                            return Err(ParseError::Syntax { offset: at, message: "zero denominator".into() })
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok(MPoly::constant(self.vars.clone(), F::from_rational(value)))
            }
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MPoly::var(self.vars.clone(), i)),
                None => Err(ParseError::UnknownVariable { name, offset: start }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => {
                self.pos = self.toks.len() - 1;
                self.err("unexpected end of input")
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, variable or `(`")
            }
        }
    }
}

/// Parses an expression over the given variables. Offsets in errors are
/// byte offsets into `text`.
pub fn parse<F: Scalar>(text: &str, vars: &Arc<Vec<String>>) -> Result<MPoly<F>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vars, _f: std::marker::PhantomData };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;
    use crate::q;

    fn vars() -> Arc<Vec<String>> {
        Arc::new(vec!["x".into(), "y".into()])
    }

    #[test]
    fn examples() {
        let cusp: MPoly<Q> = parse("x^2 + y^3", &vars()).unwrap();
        assert_eq!(cusp.len(), 2);
        assert_eq!(cusp.coeff(&Monomial::new(vec![2, 0])), q(1, 1));
        let f: MPoly<Q> = parse("x^3 - 3*x", &vars()).unwrap();
        assert_eq!(f.coeff(&Monomial::new(vec![1, 0])), q(-3, 1));
        let e = parse::<Q>("x + *y", &vars()).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { offset: 4, .. }));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse::<Q>("x + z", &vars()), Err(ParseError::UnknownVariable { offset: 4, .. })));
        assert!(matches!(parse::<Q>("2x", &vars()), Err(ParseError::Syntax { offset: 1, .. })));
        assert!(matches!(parse::<Q>("x^y", &vars()), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse::<Q>("x^-1", &vars()), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse::<Q>("(x + y", &vars()), Err(ParseError::Syntax { offset: 6, .. })));
        assert!(matches!(parse::<Q>("1/0", &vars()), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse::<Q>("", &vars()), Err(ParseError::Syntax { offset: 0, .. })));
    }

    #[test]
    fn unicode_minus_and_rationals() {
        let a: MPoly<Q> = parse("x \u{2212} 3/4*y", &vars()).unwrap();
        let b: MPoly<Q> = parse("x - 3/4*y", &vars()).unwrap();
        assert_eq!(a, b);
        let c: MPoly<Q> = parse("(x + y)^2 - 2*x*y", &vars()).unwrap();
        assert_eq!(c, parse("x^2 + y^2", &vars()).unwrap());
    }
}
