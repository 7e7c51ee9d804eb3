//! The equation `f^n + sum a_i f^i + q e^Q L(z, f) = P`, residual
//! verification, solution classes and coefficient functions.

mod theorem;

use std::fmt;

pub use theorem::{check_theorem, ClauseReport, ClauseResult, Status};

use crate::constfield::ConstExpr;
use crate::delayop::DelayDiffOp;
use crate::error::{Error, Result};
use crate::expoly::{ExPoly, NormalizedView};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub n: u32,
    /// `a_1 .. a_{n-1}`.
    pub a: Vec<ConstExpr>,
    pub q: Poly,
    pub big_q: Poly,
    pub p: Poly,
    pub l: DelayDiffOp,
}

impl Equation {
    pub fn new(n: u32, a: Vec<ConstExpr>, q: Poly, big_q: Poly, p: Poly, l: DelayDiffOp) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("n = {n}, expected n >= 2")));
        }
        if a.len() != n as usize - 1 {
            return Err(Error::Invalid(format!(
                "expected {} coefficients a_i, got {}",
                n - 1,
                a.len()
            )));
        }
        if q.checked_degree()?.is_none() {
            return Err(Error::Invalid("q must not vanish identically".into()));
        }
        if big_q.checked_degree()?.unwrap_or(0) == 0 {
            return Err(Error::Invalid("Q must not be constant".into()));
        }
        Ok(Equation { n, a, q, big_q, p, l })
    }

    /// `a_i` for `1 <= i <= n - 1`.
    pub fn a(&self, i: usize) -> &ConstExpr {
        &self.a[i - 1]
    }

    /// `f^n + sum a_i f^i + q e^Q L(z, f) - P`.
    pub fn residual(&self, f: &ExPoly) -> Result<ExPoly> {
        let mut acc = ExPoly::from_poly(self.p.neg());
        let mut power = ExPoly::one();
        for i in 1..=self.n {
            power = power.mul(f)?;
            let term = if i == self.n {
                power.clone()
            } else {
                power.scale(self.a(i as usize))
            };
            acc = acc.add(&term)?;
        }
        let lf = self.l.apply(f)?;
        let eq = ExPoly::term(self.q.clone(), self.big_q.clone())?;
        acc.add(&eq.mul(&lf)?)
    }

    /// `p(z) = z^n + a_{n-1} z^{n-1} + ... + a_1 z`.
    pub fn p_polynomial(&self) -> Poly {
        let mut coeffs = vec![ConstExpr::zero()];
        coeffs.extend(self.a.iter().cloned());
        coeffs.push(ConstExpr::one());
        Poly::from_coeffs(coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Gamma0,
    Gamma1,
    Gamma0P,
    Gamma1P,
    Gamma2P,
    None,
}

impl ClassTag {
    pub const ALL: [ClassTag; 6] = [
        ClassTag::Gamma0,
        ClassTag::Gamma1,
        ClassTag::Gamma0P,
        ClassTag::Gamma1P,
        ClassTag::Gamma2P,
        ClassTag::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::Gamma0 => "GAMMA0",
            ClassTag::Gamma1 => "GAMMA1",
            ClassTag::Gamma0P => "GAMMA0P",
            ClassTag::Gamma1P => "GAMMA1P",
            ClassTag::Gamma2P => "GAMMA2P",
            ClassTag::None => "NONE",
        }
    }

    pub fn from_name(s: &str) -> Option<ClassTag> {
        ClassTag::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Classes containing this one, itself included, tightest first.
    pub fn ancestry(self) -> &'static [ClassTag] {
        use ClassTag::*;
        match self {
            Gamma0 => &[Gamma0, Gamma1, Gamma0P, Gamma1P, Gamma2P],
            Gamma1 => &[Gamma1, Gamma1P, Gamma2P],
            Gamma0P => &[Gamma0P, Gamma1P, Gamma2P],
            Gamma1P => &[Gamma1P, Gamma2P],
            Gamma2P => &[Gamma2P],
            None => &[None],
        }
    }

    /// Whether every member of `self` belongs to `other`.
    pub fn within(self, other: ClassTag) -> bool {
        self.ancestry().contains(&other)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The tightest structural class with its witnesses `(p_i, alpha_i)` and
/// polynomial part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionClass {
    pub tag: ClassTag,
    pub witnesses: Vec<(Poly, Poly)>,
    pub poly_part: Poly,
}

impl SolutionClass {
    pub fn is_member(&self, tag: ClassTag) -> bool {
        self.tag.within(tag)
    }
}

impl fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.tag.ancestry().iter().map(|t| t.name()).collect();
        write!(f, "{}", names.join(" < "))?;
        for (k, (p, alpha)) in self.witnesses.iter().enumerate() {
            write!(f, "; p{} = {p}, alpha{} = {alpha}", k + 1, k + 1)?;
        }
        if !self.poly_part.is_zero() {
            write!(f, "; polynomial part = {}", self.poly_part)?;
        }
        Ok(())
    }
}

/// Structural classification of the canonical term set.
pub fn classify(f: &ExPoly) -> SolutionClass {
    let mut witnesses = Vec::new();
    let mut poly_part = Poly::zero();
    for t in f.terms() {
        if t.exponent.is_zero() {
            poly_part = t.coeff.clone();
        } else {
            witnesses.push((t.coeff.clone(), t.exponent.clone()));
        }
    }
    let unit = |p: &Poly| p.as_constant().is_some_and(|c| c.is_one());
    let tag = match witnesses.as_slice() {
        [(p, _)] if unit(p) && poly_part.is_zero() => ClassTag::Gamma0,
        [(p, _)] if unit(p) && poly_part.is_constant() => ClassTag::Gamma1,
        [_] if poly_part.is_zero() => ClassTag::Gamma0P,
        [_] => ClassTag::Gamma1P,
        [_, _] => ClassTag::Gamma2P,
        _ => ClassTag::None,
    };
    SolutionClass {
        tag,
        witnesses,
        poly_part,
    }
}

/// `A_0 = L(H_0)` and `A_h = L(H_h e^{w_h z^t}) e^{-w_h z^t}`.
pub fn compute_coefficient_functions(l: &DelayDiffOp, view: &NormalizedView) -> Result<(ExPoly, Vec<ExPoly>)> {
    let a0 = l.apply(&view.h0)?;
    let mut ah = Vec::new();
    for (w, h) in &view.groups {
        let lead = Poly::monomial(w.clone(), view.t);
        let g = h.mul(&ExPoly::exp_of(lead.clone())?)?;
        ah.push(l.apply(&g)?.mul(&ExPoly::exp_of(lead.neg())?)?);
    }
    Ok((a0, ah))
}
