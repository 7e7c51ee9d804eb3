//! Lowering of expression trees to exponential polynomials and operators.

use std::collections::BTreeSet;

use expoly::{ConstExpr, DelayDiffOp, ExPoly, Poly, Triple};
use num_rational::BigRational;
use num_traits::Signed;

use crate::syntax::{BinOp, Expr, Node, ParseError, Pos};

type LResult<T> = Result<T, ParseError>;

fn err(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::new(pos, msg)
}

fn engine(pos: Pos) -> impl Fn(expoly::Error) -> ParseError {
    move |e| err(pos, e.to_string())
}

/// Names visible as bare identifiers besides `z`, `i` and `pi`.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub params: BTreeSet<String>,
}

impl Scope {
    pub fn new() -> Self {
        Scope::default()
    }

    pub fn with_params<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        Scope {
            params: names.into_iter().map(Into::into).collect(),
        }
    }
}

fn mentions_f(e: &Expr) -> bool {
    match &e.node {
        Node::FTerm(..) => true,
        Node::Num(_) | Node::Ident(_) => false,
        Node::Call(name, args) => name == "delta" || args.iter().any(mentions_f),
        Node::Neg(a) => mentions_f(a),
        Node::Bin(_, a, b) => mentions_f(a) || mentions_f(b),
    }
}

fn as_constant(v: &ExPoly) -> Option<ConstExpr> {
    v.as_poly().and_then(|p| p.as_constant())
}

fn positive_rational(c: &ConstExpr) -> Option<BigRational> {
    c.as_rational().filter(|r| r.is_positive())
}

/// An exponential polynomial in `z`.
pub fn lower_expoly(e: &Expr, scope: &Scope) -> LResult<ExPoly> {
    let pos = e.pos;
    match &e.node {
        Node::Num(r) => Ok(ExPoly::constant(ConstExpr::from_rational(r.clone()))),
        Node::Ident(name) => match name.as_str() {
            "z" => Ok(ExPoly::from_poly(Poly::z())),
            "i" => Ok(ExPoly::constant(ConstExpr::i())),
            "pi" => Ok(ExPoly::constant(ConstExpr::pi())),
            _ if scope.params.contains(name) => Ok(ExPoly::constant(ConstExpr::param(name.clone()))),
            _ => Err(err(pos, format!("unknown identifier '{name}'"))),
        },
        Node::Neg(a) => Ok(lower_expoly(a, scope)?.neg()),
        Node::FTerm(..) => Err(err(pos, "operator term outside an operator")),
        Node::Call(name, args) => lower_call(name, args, pos, scope),
        Node::Bin(op, a, b) => {
            let x = lower_expoly(a, scope)?;
            let y = lower_expoly(b, scope)?;
            match op {
                BinOp::Add => x.add(&y).map_err(engine(pos)),
                BinOp::Sub => x.sub(&y).map_err(engine(pos)),
                BinOp::Mul => x.mul(&y).map_err(engine(pos)),
                BinOp::Div => {
                    let d = as_constant(&y).ok_or_else(|| err(b.pos, "division by a non-constant"))?;
                    let inv = d.inv().map_err(engine(b.pos))?;
                    Ok(x.scale(&inv))
                }
                BinOp::Pow => lower_pow(x, y, pos, b.pos),
            }
        }
    }
}

fn lower_pow(base: ExPoly, exp: ExPoly, pos: Pos, exp_pos: Pos) -> LResult<ExPoly> {
    let k = as_constant(&exp).ok_or_else(|| err(exp_pos, "exponent must be constant"))?;
    if let Some(n) = k.as_integer() {
        let n = i64::try_from(n).map_err(|_| err(exp_pos, "exponent too large"))?;
        if n >= 0 {
            let n = u32::try_from(n).map_err(|_| err(exp_pos, "exponent too large"))?;
            return base.pow(n).map_err(engine(pos));
        }
        let c = as_constant(&base).ok_or_else(|| err(pos, "negative power of a non-constant"))?;
        return c.pow(n).map(ExPoly::constant).map_err(engine(pos));
    }
    let b = as_constant(&base)
        .as_ref()
        .and_then(positive_rational)
        .ok_or_else(|| err(pos, "non-integer power needs a positive rational base"))?;
    let log_b = ConstExpr::log(&b).map_err(engine(pos))?;
    (&k * &log_b).exp().map(ExPoly::constant).map_err(engine(pos))
}

fn one_arg<'a>(name: &str, args: &'a [Expr], pos: Pos) -> LResult<&'a Expr> {
    match args {
        [a] => Ok(a),
        _ => Err(err(pos, format!("{name} takes one argument"))),
    }
}

fn lower_call(name: &str, args: &[Expr], pos: Pos, scope: &Scope) -> LResult<ExPoly> {
    match name {
        "exp" => {
            let a = one_arg(name, args, pos)?;
            let v = lower_expoly(a, scope)?;
            let p = v
                .as_poly()
                .ok_or_else(|| err(a.pos, "exp argument must be a polynomial"))?;
            ExPoly::exp_of(p).map_err(engine(pos))
        }
        "log" => {
            let a = one_arg(name, args, pos)?;
            let v = lower_expoly(a, scope)?;
            let r = as_constant(&v)
                .as_ref()
                .and_then(positive_rational)
                .ok_or_else(|| err(a.pos, "log argument must be a positive rational"))?;
            ConstExpr::log(&r).map(ExPoly::constant).map_err(engine(pos))
        }
        "param" => match one_arg(name, args, pos)? {
            Expr {
                node: Node::Ident(p), ..
            } if !matches!(p.as_str(), "z" | "i" | "pi" | "f") => Ok(ExPoly::constant(ConstExpr::param(p.clone()))),
            a => Err(err(a.pos, "param expects a name")),
        },
        "delta" => Err(err(pos, "operator term outside an operator")),
        _ => Err(err(pos, format!("unknown function '{name}'"))),
    }
}

/// A closed constant: no `z`, no operator terms.
pub fn lower_const(e: &Expr, scope: &Scope) -> LResult<ConstExpr> {
    let v = lower_expoly(e, scope)?;
    as_constant(&v).ok_or_else(|| err(e.start(), "expected a constant"))
}

/// A polynomial in `z`.
pub fn lower_poly(e: &Expr, scope: &Scope) -> LResult<Poly> {
    let v = lower_expoly(e, scope)?;
    v.as_poly().ok_or_else(|| err(e.start(), "expected a polynomial in z"))
}

fn shift_of(arg: &Expr, scope: &Scope) -> LResult<ConstExpr> {
    let v = lower_expoly(arg, scope)?;
    let rest = v.sub(&ExPoly::from_poly(Poly::z())).map_err(engine(arg.pos))?;
    as_constant(&rest).ok_or_else(|| err(arg.start(), "argument must be z plus a constant"))
}

fn scale_triples(ts: Vec<Triple>, k: &ConstExpr) -> Vec<Triple> {
    ts.into_iter().map(|t| Triple::new(&t.b * k, t.r, t.c)).collect()
}

fn lower_triples(e: &Expr, scope: &Scope) -> LResult<Vec<Triple>> {
    let pos = e.pos;
    match &e.node {
        Node::FTerm(r, arg) => Ok(vec![Triple::new(ConstExpr::one(), *r, shift_of(arg, scope)?)]),
        Node::Call(name, args) if name == "delta" => {
            let c = lower_const(one_arg(name, args, pos)?, scope)?;
            DelayDiffOp::delta(c).map(|l| l.triples().to_vec()).map_err(engine(pos))
        }
        Node::Neg(a) => Ok(scale_triples(lower_triples(a, scope)?, &ConstExpr::from_int(-1))),
        Node::Bin(BinOp::Add, a, b) => {
            let mut ts = lower_triples(a, scope)?;
            ts.extend(lower_triples(b, scope)?);
            Ok(ts)
        }
        Node::Bin(BinOp::Sub, a, b) => {
            let mut ts = lower_triples(a, scope)?;
            ts.extend(scale_triples(lower_triples(b, scope)?, &ConstExpr::from_int(-1)));
            Ok(ts)
        }
        Node::Bin(BinOp::Mul, a, b) => match (mentions_f(a), mentions_f(b)) {
            (false, true) => Ok(scale_triples(lower_triples(b, scope)?, &lower_const(a, scope)?)),
            (true, false) => Ok(scale_triples(lower_triples(a, scope)?, &lower_const(b, scope)?)),
            (true, true) => Err(err(pos, "operator is not linear")),
            (false, false) => Err(err(pos, "expected an operator term")),
        },
        Node::Bin(BinOp::Div, a, b) if !mentions_f(b) => {
            let k = lower_const(b, scope)?.inv().map_err(engine(b.pos))?;
            Ok(scale_triples(lower_triples(a, scope)?, &k))
        }
        Node::Bin(BinOp::Div, ..) => Err(err(pos, "operator is not linear")),
        Node::Bin(BinOp::Pow, ..) => Err(err(pos, "operator is not linear")),
        Node::Num(_) | Node::Ident(_) | Node::Call(..) => Err(err(pos, "expected an operator term")),
    }
}

/// A delay-differential operator `sum b f^(r)(z + c)`.
pub fn lower_operator(e: &Expr, scope: &Scope) -> LResult<DelayDiffOp> {
    let ts = lower_triples(e, scope)?;
    DelayDiffOp::new(ts).map_err(engine(e.pos))
}
