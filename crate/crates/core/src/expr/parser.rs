//! Tokenizer and recursive-descent parser.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor | <implicit> factor)*
//! factor := base ('^' nat)?
//! base   := nat | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Implicit multiplication applies when a factor that ends in a literal or
//! `)` is directly followed by a variable or `(`, so `2x`, `(x+y)y` and
//! `x^2y` all parse. Positions in errors are 1-based byte positions.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExprAst, ExprError};
use crate::algebra::{Rational, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i + 1;
        let single = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(ExprError::Syntax {
                    offset: i + 1,
                    message: "decimal literals are not supported; write a fraction".into(),
                });
            }
            let digits = std::str::from_utf8(&bytes[start..i]).expect("ascii digits");
            let value: BigInt = digits.parse().expect("digit run");
            out.push(Token {
                tok: Tok::Num(value),
                pos,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = std::str::from_utf8(&bytes[start..i]).expect("ascii identifier");
            let var = match name {
                "x" => Var::X,
                "y" => Var::Y,
                _ => {
                    return Err(ExprError::UnknownSymbol {
                        name: name.to_string(),
                        offset: pos,
                    })
                }
            };
            out.push(Token {
                tok: Tok::Var(var),
                pos,
            });
            continue;
        }
        let message = if b == b'.' {
            "decimal literals are not supported; write a fraction".to_string()
        } else if b.is_ascii() {
            format!("unexpected character '{}'", b as char)
        } else {
            "non-ASCII input".to_string()
        };
        return Err(ExprError::Syntax {
            offset: pos,
            message,
        });
    }
    out.push(Token {
        tok: Tok::End,
        pos: bytes.len() + 1,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    depth: usize,
}

// Nesting guard so adversarial input cannot overflow the stack.
const MAX_DEPTH: usize = 256;
const MAX_EXPONENT: u32 = 1024;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn prev(&self) -> Option<&Tok> {
        self.at.checked_sub(1).map(|i| &self.toks[i].tok)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<ExprAst, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                let t = self.term()?;
                ExprAst::Sub(Box::new(ExprAst::Const(Rational::zero())), Box::new(t))
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.pos();
                    let rhs = self.factor()?;
                    if matches!(&rhs, ExprAst::Const(c) if c.is_zero()) {
                        return Err(ExprError::Syntax {
                            offset: at,
                            message: "division by a literal zero".into(),
                        });
                    }
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs));
                }
                Tok::Var(_) | Tok::LParen
                    if matches!(self.prev(), Some(Tok::Num(_)) | Some(Tok::RParen)) =>
                {
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Num(n) => {
                let e = match u32::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return self.err(format!("exponent exceeds {MAX_EXPONENT}")),
                };
                self.bump();
                Ok(ExprAst::Pow(Box::new(base), e))
            }
            _ => self.err("exponent must be a natural-number literal"),
        }
    }

    fn base(&mut self) -> Result<ExprAst, ExprError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(ExprAst::Const(Rational::from_integer(n)))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(ExprAst::Var(v))
            }
            Tok::LParen => {
                let open = self.pos();
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(ExprError::Syntax {
                        offset: self.pos(),
                        message: format!("expected ')' to close '(' at {open}"),
                    });
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.err("unexpected end of input"),
            other => self.err(format!("unexpected token {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Var(_) => "variable",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expression(text: &str) -> Result<ExprAst, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let msg = match p.peek() {
            Tok::RParen => "unbalanced ')'".to_string(),
            other => format!("unexpected {}", describe(other)),
        };
        return p.err(msg);
    }
    Ok(e)
}
