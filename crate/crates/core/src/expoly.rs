//! Exponential polynomials `sum P_j(z) exp(Q_j(z))` in a flat canonical form.

use std::fmt;

use crate::constfield::{fmt_scaled, join_sum, Assignment, ComplexBall, ConstExpr, Evaluator, ZeroTest};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// One summand `coeff(z) * exp(exponent(z))`; the exponent has no constant term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpTerm {
    pub coeff: Poly,
    pub exponent: Poly,
}

/// Canonical exponential polynomial: terms sorted by exponent, exponents
/// pairwise distinct, coefficients non-zero. The empty sum is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExPoly {
    terms: Vec<ExpTerm>,
}

/// `H_0 + sum_j H_j exp(omega_j z^t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedView {
    pub t: usize,
    pub h0: ExPoly,
    pub groups: Vec<(ConstExpr, ExPoly)>,
}

impl NormalizedView {
    pub fn m(&self) -> usize {
        self.groups.len()
    }

    pub fn omegas(&self) -> Vec<ConstExpr> {
        self.groups.iter().map(|(w, _)| w.clone()).collect()
    }

    /// Flattens the view back to an exponential polynomial.
    pub fn flatten(&self) -> Result<ExPoly> {
        let mut acc = self.h0.clone();
        for (w, h) in &self.groups {
            let e = ExPoly::exp_of(Poly::monomial(w.clone(), self.t))?;
            acc = acc.add(&h.mul(&e)?)?;
        }
        Ok(acc)
    }
}

fn same_poly(a: &Poly, b: &Poly) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if a.degree() != b.degree() {
        return Ok(false);
    }
    let d = a.sub(b);
    let mut undecided = None;
    for c in d.coeffs() {
        match c.generic_zero_test() {
            ZeroTest::Zero => {}
            ZeroTest::NonZero => return Ok(false),
            ZeroTest::Undecided => undecided = Some(c.clone()),
        }
    }
    match undecided {
        None => Ok(true),
        Some(c) => Err(Error::Undecided(format!(
            "cannot decide whether exponent difference {c} vanishes"
        ))),
    }
}

impl ExPoly {
    pub fn zero() -> Self {
        ExPoly::default()
    }

    pub fn one() -> Self {
        ExPoly::from_poly(Poly::one())
    }

    pub fn constant(c: ConstExpr) -> Self {
        ExPoly::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        if p.is_zero() {
            return ExPoly::zero();
        }
        ExPoly {
            terms: vec![ExpTerm {
                coeff: p,
                exponent: Poly::zero(),
            }],
        }
    }

    /// `exp(q(z))`, folding `exp(q(0))` into the coefficient.
    pub fn exp_of(q: Poly) -> Result<Self> {
        ExPoly::term(Poly::one(), q)
    }

    pub fn term(coeff: Poly, exponent: Poly) -> Result<Self> {
        let mut out = ExPoly::zero();
        out.push(coeff, exponent)?;
        Ok(out)
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Three-valued test for the identically-zero function.
    pub fn zero_test(&self) -> ZeroTest {
        if self.terms.is_empty() {
            return ZeroTest::Zero;
        }
        let certified = self.terms.iter().any(|t| {
            t.coeff
                .coeffs()
                .iter()
                .any(|c| c.generic_zero_test() == ZeroTest::NonZero)
        });
        if certified {
            ZeroTest::NonZero
        } else {
            ZeroTest::Undecided
        }
    }

    pub fn has_params(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.coeff.has_params() || t.exponent.has_params())
    }

    /// The polynomial this is, if every exponent is zero.
    pub fn as_poly(&self) -> Option<Poly> {
        match self.terms.as_slice() {
            [] => Some(Poly::zero()),
            [t] if t.exponent.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.as_poly().is_some()
    }

    /// Adds `coeff * exp(exponent)` in place.
    fn push(&mut self, coeff: Poly, exponent: Poly) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        let k = exponent.constant_term();
        let (coeff, exponent) = if k.is_zero() {
            (coeff, exponent)
        } else {
            (coeff.scale(&k.exp()?), exponent.without_constant())
        };
        let mut found = None;
        for (idx, t) in self.terms.iter().enumerate() {
            if same_poly(&t.exponent, &exponent)? {
                found = Some(idx);
                break;
            }
        }
        match found {
            Some(idx) => {
                let merged = self.terms[idx].coeff.add(&coeff);
                if merged.is_zero() {
                    self.terms.remove(idx);
                } else {
                    self.terms[idx].coeff = merged;
                }
            }
            None => {
                let pos = self.terms.partition_point(|t| t.exponent < exponent);
                self.terms.insert(pos, ExpTerm { coeff, exponent });
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &ExPoly) -> Result<ExPoly> {
        let mut out = self.clone();
        for t in &o.terms {
            out.push(t.coeff.clone(), t.exponent.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExPoly {
        ExPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff.neg(),
                    exponent: t.exponent.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &ExPoly) -> Result<ExPoly> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ExPoly) -> Result<ExPoly> {
        let mut out = ExPoly::zero();
        for a in &self.terms {
            for b in &o.terms {
                out.push(a.coeff.mul(&b.coeff), a.exponent.add(&b.exponent))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ConstExpr) -> ExPoly {
        ExPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff.scale(c),
                    exponent: t.exponent.clone(),
                })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> ExPoly {
        ExPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff.mul(p),
                    exponent: t.exponent.clone(),
                })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<ExPoly> {
        let mut acc = ExPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Term-wise `(P e^Q)' = (P' + P Q') e^Q`.
    pub fn derivative(&self) -> ExPoly {
        ExPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff.derivative().add(&t.coeff.mul(&t.exponent.derivative())),
                    exponent: t.exponent.clone(),
                })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
    }

    pub fn nth_derivative(&self, r: u32) -> ExPoly {
        (0..r).fold(self.clone(), |f, _| f.derivative())
    }

    /// `f(z + c)`.
    pub fn shift(&self, c: &ConstExpr) -> Result<ExPoly> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        let mut out = ExPoly::zero();
        for t in &self.terms {
            out.push(t.coeff.taylor_shift(c), t.exponent.taylor_shift(c))?;
        }
        Ok(out)
    }

    /// Largest exponent degree `t` (0 for polynomials).
    pub fn order(&self) -> usize {
        self.terms.iter().filter_map(|t| t.exponent.degree()).max().unwrap_or(0)
    }

    pub fn normalized_view(&self) -> Result<NormalizedView> {
        if self.is_zero() {
            return Err(Error::Invalid("normalized view of the zero function".into()));
        }
        let t = self.order();
        let mut h0 = ExPoly::zero();
        let mut groups: Vec<(ConstExpr, ExPoly)> = Vec::new();
        for term in &self.terms {
            if t == 0 || term.exponent.degree() != Some(t) {
                h0.push(term.coeff.clone(), term.exponent.clone())?;
                continue;
            }
            let (_, w, rest) = term.exponent.split_leading()?;
            let mut slot = None;
            for (idx, (v, _)) in groups.iter().enumerate() {
                if v.same_value(&w)? {
                    slot = Some(idx);
                    break;
                }
            }
            let idx = match slot {
                Some(idx) => idx,
                None => {
                    groups.push((w, ExPoly::zero()));
                    groups.len() - 1
                }
            };
            groups[idx].1.push(term.coeff.clone(), rest)?;
        }
        Ok(NormalizedView { t, h0, groups })
    }

    pub fn eval_ball(&self, ev: &mut Evaluator<'_>, z: &ComplexBall) -> Result<ComplexBall> {
        let mut acc = ComplexBall::zero(ev.bits());
        for t in &self.terms {
            let mut v = t.coeff.eval_ball(ev, z)?;
            if !t.exponent.is_zero() {
                v = v.mul(&t.exponent.eval_ball(ev, z)?.exp());
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Enclosure of `f(z0)` at `digits` decimal digits.
    pub fn eval(&self, z0: &ConstExpr, digits: u32, assignment: Option<&Assignment>) -> Result<ComplexBall> {
        let mut ev = Evaluator::with_digits(digits);
        if let Some(a) = assignment {
            ev = ev.assign(a);
        }
        let z = z0.eval(&mut ev)?;
        self.eval_ball(&mut ev, &z)
    }
}

impl From<Poly> for ExPoly {
    fn from(p: Poly) -> Self {
        ExPoly::from_poly(p)
    }
}

fn fmt_term(t: &ExpTerm) -> String {
    if t.exponent.is_zero() {
        return t.coeff.to_string();
    }
    let e = format!("exp({})", t.exponent);
    let nonzero: Vec<_> = t
        .coeff
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    match nonzero.as_slice() {
        [(0, c)] => fmt_scaled(c, &e),
        [(1, c)] => fmt_scaled(c, &format!("z*{e}")),
        [(k, c)] => fmt_scaled(c, &format!("z^{k}*{e}")),
        _ => format!("({})*{e}", t.coeff),
    }
}

impl fmt::Display for ExPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_sum(self.terms.iter().rev().map(fmt_term)))
    }
}
