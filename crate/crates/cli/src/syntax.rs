//! Tokens and expression trees for the case-file language.
//!
//! Precedence, tightest first: `^` (right associative), unary `-`, `*` `/`,
//! binary `+` `-`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

pub type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Prime,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_) => "number".into(),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Prime => "'''".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Exact value of a decimal literal such as `12` or `0.25`.
fn decimal(s: &str) -> BigRational {
    match s.split_once('.') {
        None => BigRational::from_integer(s.parse::<BigInt>().expect("digits")),
        Some((int, frac)) => {
            let digits = format!("{int}{frac}");
            let num = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse::<BigInt>().expect("digits")
            };
            let den = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(num, den)
        }
    }
}

/// Splits `src` into tokens; `start` is the position of its first character.
pub fn lex(src: &str, start: Pos) -> PResult<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let at = |k: usize| Pos {
        line: start.line,
        col: start.col + k,
    };
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
            continue;
        }
        let pos = at(k);
        if ch.is_ascii_digit() || (ch == '.' && chars.get(k + 1).is_some_and(|c| c.is_ascii_digit())) {
            let begin = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && chars[k] == '.' {
                k += 1;
                let frac = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if frac == k && begin + 1 == k {
                    return Err(ParseError::new(pos, "malformed number"));
                }
            }
            let text: String = chars[begin..k].iter().collect();
            out.push((Tok::Num(decimal(&text)), pos));
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let begin = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[begin..k].iter().collect()), pos));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '\'' => Tok::Prime,
            _ => return Err(ParseError::new(pos, format!("unexpected character '{ch}'"))),
        };
        out.push((tok, pos));
        k += 1;
    }
    out.push((Tok::End, at(chars.len())));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Num(BigRational),
    Ident(String),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// `f^(r)(arg)`.
    FTerm(u32, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub node: Node,
    pub pos: Pos,
}

impl Expr {
    /// Position of the leftmost character of the expression.
    pub fn start(&self) -> Pos {
        match &self.node {
            Node::Bin(_, a, _) => a.start(),
            _ => self.pos,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::new(self.pos(), format!("{what}, found {}", self.peek().describe()))
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.product()?;
            lhs = Expr {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.unary()?;
            lhs = Expr {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let pos = self.bump().1;
            let e = self.unary()?;
            return Ok(Expr {
                node: Node::Neg(Box::new(e)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            let pos = self.bump().1;
            let exp = self.unary()?;
            return Ok(Expr {
                node: Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)),
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Expr {
                    node: Node::Num(r),
                    pos,
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if name == "f" => {
                self.bump();
                self.f_term(pos)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr {
                        node: Node::Ident(name),
                        pos,
                    });
                }
                self.bump();
                let mut args = vec![self.sum()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.sum()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Expr {
                    node: Node::Call(name, args),
                    pos,
                })
            }
            _ => Err(self.unexpected("expected an expression")),
        }
    }

    fn f_term(&mut self, pos: Pos) -> PResult<Expr> {
        let mut r = 0u32;
        if *self.peek() == Tok::Caret {
            self.bump();
            self.expect(Tok::LParen)?;
            let npos = self.pos();
            r = match self.bump().0 {
                Tok::Num(n) if n.is_integer() && n >= BigRational::zero() => {
                    u32::try_from(n.to_integer()).map_err(|_| ParseError::new(npos, "derivative order too large"))?
                }
                _ => return Err(ParseError::new(npos, "expected a derivative order")),
            };
            self.expect(Tok::RParen)?;
        } else {
            while *self.peek() == Tok::Prime {
                self.bump();
                r += 1;
            }
        }
        if *self.peek() != Tok::LParen {
            return Err(self.unexpected("expected '(' after f"));
        }
        self.bump();
        let arg = self.sum()?;
        self.expect(Tok::RParen)?;
        Ok(Expr {
            node: Node::FTerm(r, Box::new(arg)),
            pos,
        })
    }
}

/// Parses one expression occupying all of `src`.
pub fn parse_expr(src: &str, start: Pos) -> PResult<Expr> {
    let toks = lex(src, start)?;
    let mut p = Parser { toks, k: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected an operator or end of input"));
    }
    Ok(e)
}

/// Parses a comma-separated list of expressions.
pub fn parse_list(src: &str, start: Pos) -> PResult<Vec<Expr>> {
    let toks = lex(src, start)?;
    let mut p = Parser { toks, k: 0 };
    let mut out = vec![p.sum()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        out.push(p.sum()?);
    }
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected ',' or end of input"));
    }
    Ok(out)
}
