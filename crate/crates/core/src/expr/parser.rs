//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ['-'] base
//! base   := atom ['^' integer]
//! atom   := number | 'i' | 'pi' | 'e' | variable | 'exp' '(' expr ')' | '(' expr ')'
//! ```

use std::f64::consts;

use num_complex::Complex64;
use thiserror::Error;

use super::{Node, KNOWN_VARIABLES, MAX_POWER};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    WrongVariable { found: String, expected: String },
    PowerOutOfRange(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at byte {position}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(msg) => format!("syntax error: {}", msg),
        ParseErrorKind::UnknownIdentifier(id) => format!("unknown identifier `{}`", id),
        ParseErrorKind::WrongVariable { found, expected } => {
            format!("variable `{}` used where `{}` was expected", found, expected)
        }
        ParseErrorKind::PowerOutOfRange(n) => {
            format!("integer power {} outside [-{}, {}]", n, MAX_POWER, MAX_POWER)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
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

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match ch {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent part only if a digit actually follows, so `2*e` and
                // the (rejected) `2e` still lex sensibly.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::Syntax(format!("malformed number `{}`", text)),
                    position: start,
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let c = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{}`", c)),
                    position: start,
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            position: self.offset(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {}", what))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.base()?)));
        }
        self.base()
    }

    fn base(&mut self) -> Result<Node, ParseError> {
        let atom = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(atom);
        }
        self.bump();
        let at = self.offset();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = match self.bump() {
            Tok::Num(v) if v.fract() == 0.0 && v.abs() < 1e15 => v as i64,
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax("expected integer exponent after `^`".into()),
                    position: at,
                })
            }
        };
        let n = if negative { -n } else { n };
        if n.abs() > MAX_POWER as i64 {
            return Err(ParseError {
                kind: ParseErrorKind::PowerOutOfRange(n),
                position: at,
            });
        }
        Ok(Node::Pow(Box::new(atom), n as i32))
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Node::Const(Complex64::new(v, 0.0))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Node::Const(Complex64::new(0.0, 1.0))),
                "pi" => Ok(Node::Const(Complex64::new(consts::PI, 0.0))),
                "e" => Ok(Node::Const(Complex64::new(consts::E, 0.0))),
                "exp" => {
                    self.expect(Tok::LParen, "`(` after `exp`")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Node::Exp(Box::new(inner)))
                }
                v if v == self.var => Ok(Node::Var),
                v if KNOWN_VARIABLES.contains(&v) => Err(ParseError {
                    kind: ParseErrorKind::WrongVariable {
                        found: v.to_string(),
                        expected: self.var.to_string(),
                    },
                    position: at,
                }),
                other => Err(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(other.to_string()),
                    position: at,
                }),
            },
            Tok::End => Err(ParseError {
                kind: ParseErrorKind::Syntax("unexpected end of input".into()),
                position: at,
            }),
            other => Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("unexpected token {:?}", other)),
                position: at,
            }),
        }
    }
}

pub(super) fn parse(source: &str, variable: &str) -> Result<Node, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        var: variable,
    };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        // `2z`, `z(1)` and friends: juxtaposition is not multiplication.
        return p.syntax("unexpected trailing input (implicit multiplication is not allowed)");
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Node {
        Node::Const(Complex64::new(re, im))
    }

    #[test]
    fn exp_of_two_i_z() {
        let n = parse("exp(2*i*z)", "z").unwrap();
        assert_eq!(
            n,
            Node::Exp(Box::new(Node::Mul(
                Box::new(Node::Mul(Box::new(c(2.0, 0.0)), Box::new(c(0.0, 1.0)))),
                Box::new(Node::Var)
            )))
        );
    }

    #[test]
    fn bare_variable() {
        assert_eq!(parse("z", "z").unwrap(), Node::Var);
        assert_eq!(parse("  t ", "t").unwrap(), Node::Var);
    }

    #[test]
    fn quotient_witness() {
        let n = parse("exp(i*(-1+1)*z)/(z+i)", "z").unwrap();
        assert!(matches!(n, Node::Div(..)));
    }

    #[test]
    fn precedence_power_over_unary_minus() {
        let n = parse("-z^2", "z").unwrap();
        assert_eq!(n, Node::Neg(Box::new(Node::Pow(Box::new(Node::Var), 2))));
        let n = parse("1 - 2 - 3", "z").unwrap();
        assert!(matches!(n, Node::Sub(ref a, _) if matches!(**a, Node::Sub(..))));
        let n = parse("8 / 4 / 2", "z").unwrap();
        assert!(matches!(n, Node::Div(ref a, _) if matches!(**a, Node::Div(..))));
        let n = parse("1 + 2*z", "z").unwrap();
        assert!(matches!(n, Node::Add(_, ref b) if matches!(**b, Node::Mul(..))));
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(parse("1.5e-3", "t").unwrap(), c(1.5e-3, 0.0));
        assert_eq!(parse("2E2", "t").unwrap(), c(200.0, 0.0));
        assert_eq!(parse(".25", "t").unwrap(), c(0.25, 0.0));
        assert!(matches!(parse("2*e", "t").unwrap(), Node::Mul(..)));
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let err = parse("2z", "z").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.position, 1);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(
            parse("sin(z)", "z").unwrap_err().kind,
            ParseErrorKind::UnknownIdentifier(ref s) if s == "sin"
        ));
        assert!(matches!(
            parse("t + 1", "z").unwrap_err().kind,
            ParseErrorKind::WrongVariable { .. }
        ));
        assert!(matches!(
            parse("z^65", "z").unwrap_err().kind,
            ParseErrorKind::PowerOutOfRange(65)
        ));
        assert!(matches!(parse("z^1.5", "z").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse("(z+1", "z").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse("", "z").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(parse("z ^ 2 ^ 2", "z").unwrap_err().kind, ParseErrorKind::Syntax(_)));
        assert_eq!(parse("z + $", "z").unwrap_err().position, 4);
    }

    #[test]
    fn negative_integer_powers() {
        assert_eq!(parse("z^-2", "z").unwrap(), Node::Pow(Box::new(Node::Var), -2));
        assert_eq!(parse("z^64", "z").unwrap(), Node::Pow(Box::new(Node::Var), 64));
    }
}
