//! Linear delay-differential operators `L(z, f) = sum b_i f^(r_i)(z + c_i)`.

use std::fmt;

use crate::constfield::{fmt_scaled, join_sum, ConstExpr, ZeroTest};
use crate::error::{Error, Result};
use crate::expoly::ExPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub b: ConstExpr,
    pub r: u32,
    pub c: ConstExpr,
}

impl Triple {
    pub fn new(b: ConstExpr, r: u32, c: ConstExpr) -> Self {
        Triple { b, r, c }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DelayDiffOp {
    triples: Vec<Triple>,
}

impl DelayDiffOp {
    /// Builds an operator; at least one weight must be certified non-zero.
    pub fn new(triples: Vec<Triple>) -> Result<Self> {
        let mut undecided = false;
        for t in &triples {
            match t.b.generic_zero_test() {
                ZeroTest::NonZero => return Ok(DelayDiffOp { triples }),
                ZeroTest::Undecided => undecided = true,
                ZeroTest::Zero => {}
            }
        }
        if undecided {
            Err(Error::Undecided("cannot certify a non-zero operator weight".into()))
        } else {
            Err(Error::Invalid("operator is identically zero".into()))
        }
    }

    /// `f(z + c) - f(z)`.
    pub fn delta(c: ConstExpr) -> Result<Self> {
        match c.generic_zero_test() {
            ZeroTest::Zero => Err(Error::Invalid("difference operator with zero step".into())),
            _ => DelayDiffOp::new(vec![
                Triple::new(ConstExpr::from_int(-1), 0, ConstExpr::zero()),
                Triple::new(ConstExpr::one(), 0, c),
            ]),
        }
    }

    pub fn shift(c: ConstExpr) -> Self {
        DelayDiffOp {
            triples: vec![Triple::new(ConstExpr::one(), 0, c)],
        }
    }

    pub fn derivative(r: u32) -> Self {
        DelayDiffOp {
            triples: vec![Triple::new(ConstExpr::one(), r, ConstExpr::zero())],
        }
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Whether the first term is an unshifted, underived `b_0 f(z)`.
    pub fn is_conforming(&self) -> bool {
        self.triples.first().is_some_and(|t| t.r == 0 && t.c.is_zero())
    }

    pub fn apply(&self, f: &ExPoly) -> Result<ExPoly> {
        let mut acc = ExPoly::zero();
        for t in &self.triples {
            let g = f.nth_derivative(t.r).shift(&t.c)?.scale(&t.b);
            acc = acc.add(&g)?;
        }
        Ok(acc)
    }

    /// Merges triples with equal `(r, c)` and drops vanishing weights; the
    /// `(0, 0)` term, if any, comes first.
    pub fn normalized(&self) -> Result<DelayDiffOp> {
        let mut out: Vec<Triple> = Vec::new();
        for t in &self.triples {
            let mut slot = None;
            for (idx, u) in out.iter().enumerate() {
                if u.r == t.r && u.c.same_value(&t.c)? {
                    slot = Some(idx);
                    break;
                }
            }
            match slot {
                Some(idx) => out[idx].b = &out[idx].b + &t.b,
                None => out.push(t.clone()),
            }
        }
        out.retain(|t| !t.b.is_zero());
        if let Some(idx) = out.iter().position(|t| t.r == 0 && t.c.is_zero()) {
            let base = out.remove(idx);
            out.insert(0, base);
        }
        Ok(DelayDiffOp { triples: out })
    }

    /// Weight of the unshifted, underived term (zero if absent).
    pub fn b0(&self) -> Result<ConstExpr> {
        let n = self.normalized()?;
        Ok(n.triples
            .first()
            .filter(|t| t.r == 0 && t.c.is_zero())
            .map(|t| t.b.clone())
            .unwrap_or_else(ConstExpr::zero))
    }

    /// The shifts of every term other than the `(0, 0)` one.
    pub fn other_shifts(&self) -> Result<Vec<ConstExpr>> {
        let n = self.normalized()?;
        Ok(n.triples
            .iter()
            .filter(|t| !(t.r == 0 && t.c.is_zero()))
            .map(|t| t.c.clone())
            .collect())
    }
}

fn fmt_symbol(r: u32) -> String {
    match r {
        0 => "f".into(),
        1 => "f'".into(),
        2 => "f''".into(),
        _ => format!("f^({r})"),
    }
}

pub(crate) fn fmt_argument(c: &ConstExpr) -> String {
    if c.is_zero() {
        return "(z)".into();
    }
    let neg = -c;
    if !c.is_compound() {
        format!("(z + {c})")
    } else if !neg.is_compound() {
        format!("(z - {neg})")
    } else {
        format!("(z + ({c}))")
    }
}

impl fmt::Display for DelayDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .triples
            .iter()
            .map(|t| fmt_scaled(&t.b, &format!("{}{}", fmt_symbol(t.r), fmt_argument(&t.c))));
        write!(f, "{}", join_sum(terms))
    }
}
