//! Univariate polynomials in `z` with [`ConstExpr`] coefficients.

use std::fmt;

use crate::constfield::{fmt_scaled, join_sum, ComplexBall, ConstExpr, Evaluator, ZeroTest};
use crate::error::{Error, Result};

/// Dense coefficient vector `c_0 .. c_d`; trailing zero coefficients are
/// always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    coeffs: Vec<ConstExpr>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(ConstExpr::one())
    }

    pub fn constant(c: ConstExpr) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Poly::monomial(ConstExpr::one(), 1)
    }

    /// `c * z^k`.
    pub fn monomial(c: ConstExpr, k: usize) -> Self {
        let mut coeffs = vec![ConstExpr::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<ConstExpr>) -> Self {
        while coeffs.last().is_some_and(ConstExpr::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| ConstExpr::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[ConstExpr] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ConstExpr {
        self.coeffs.get(k).cloned().unwrap_or_else(ConstExpr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ConstExpr> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<ConstExpr> {
        match self.coeffs.len() {
            0 => Some(ConstExpr::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn has_params(&self) -> bool {
        self.coeffs.iter().any(ConstExpr::has_params)
    }

    /// Degree with the leading coefficient certified non-vanishing (as a
    /// function of the parameters).
    pub fn checked_degree(&self) -> Result<Option<usize>> {
        match self.leading() {
            None => Ok(None),
            Some(c) => match c.generic_zero_test() {
                ZeroTest::Undecided => Err(Error::Undecided(format!("undecidable degree: leading coefficient {c}"))),
                _ => Ok(self.degree()),
            },
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ConstExpr::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &ConstExpr) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ConstExpr::from_int(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, r: u32) -> Poly {
        (0..r).fold(self.clone(), |p, _| p.derivative())
    }

    /// `p(z + c)`, expanded exactly.
    pub fn taylor_shift(&self, c: &ConstExpr) -> Poly {
        let lin = Poly::from_coeffs(vec![c.clone(), ConstExpr::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, a| acc.mul(&lin).add(&Poly::constant(a.clone())))
    }

    /// `p(c)` for a constant `c`.
    pub fn eval_const(&self, c: &ConstExpr) -> ConstExpr {
        self.coeffs
            .iter()
            .rev()
            .fold(ConstExpr::zero(), |acc, a| &(&acc * c) + a)
    }

    pub fn constant_term(&self) -> ConstExpr {
        self.coeff(0)
    }

    pub fn without_constant(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = ConstExpr::zero();
        }
        Poly::from_coeffs(coeffs)
    }

    /// `(t, v_t, rest)` with `p = v_t z^t + rest` and `deg rest < t`.
    pub fn split_leading(&self) -> Result<(usize, ConstExpr, Poly)> {
        let t = self
            .checked_degree()?
            .ok_or_else(|| Error::Invalid("split_leading of the zero polynomial".into()))?;
        let mut rest = self.coeffs.clone();
        let v = rest.pop().expect("non-zero");
        Ok((t, v, Poly::from_coeffs(rest)))
    }

    pub fn eval_ball(&self, ev: &mut Evaluator<'_>, z: &ComplexBall) -> Result<ComplexBall> {
        let mut acc = ComplexBall::zero(ev.bits());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&c.eval(ev)?);
        }
        Ok(acc)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    fn prem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("non-zero divisor");
        let lb = b.leading().expect("non-zero divisor").clone();
        let Some(da) = self.degree() else { return Poly::zero() };
        if da < db {
            return self.clone();
        }
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let t = Poly::monomial(r.leading().expect("non-zero").clone(), dr - db);
            r = r.scale(&lb).sub(&t.mul(b));
            e -= 1;
        }
        r.scale(&lb.pow(e as i64).expect("non-negative power"))
    }

    fn certified(self) -> Result<Poly> {
        self.checked_degree()
            .map_err(|_| Error::Undecided("undecidable cardinality".into()))?;
        Ok(self)
    }

    fn div_scalar(&self, c: &ConstExpr) -> Result<Poly> {
        let inv = c.inv()?;
        Ok(self.scale(&inv))
    }

    /// A greatest common divisor (up to a constant factor) by the
    /// subresultant remainder sequence.
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone().certified()?, o.clone().certified()?);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_zero() {
            return Ok(a);
        }
        let mut g = ConstExpr::one();
        let mut h = ConstExpr::one();
        loop {
            let delta = (a.degree().expect("non-zero") - b.degree().expect("non-zero")) as i64;
            let r = a.prem(&b).certified()?;
            match r.degree() {
                None => return Ok(b),
                Some(0) => return Ok(Poly::one()),
                Some(_) => {}
            }
            let divisor = &g * &h.pow(delta)?;
            a = b;
            b = r.div_scalar(&divisor)?;
            g = a.leading().expect("non-zero").clone();
            h = &h.pow(1 - delta)? * &g.pow(delta)?;
        }
    }

    fn distinct_roots(&self) -> Result<usize> {
        let Some(d) = self.degree() else { return Ok(0) };
        let g = self.gcd(&self.derivative())?;
        Ok(d - g.degree().expect("gcd of a non-zero polynomial"))
    }

    /// `(card2, card3)`: the numbers of distinct common zeros of `p, p'` and
    /// of `p, p', p''`.
    pub fn multiple_zero_cardinality(&self) -> Result<(usize, usize)> {
        if self.has_params() {
            return Err(Error::Unsupported("cardinality of a polynomial with parameters".into()));
        }
        if self.is_zero() {
            return Err(Error::Invalid("cardinality of the zero polynomial".into()));
        }
        let g = self.gcd(&self.derivative())?;
        let card2 = g.distinct_roots()?;
        let h = g.gcd(&self.nth_derivative(2))?;
        let card3 = if h.is_zero() { 0 } else { h.distinct_roots()? };
        Ok((card2, card3))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => fmt_scaled(c, "z"),
                _ => fmt_scaled(c, &format!("z^{k}")),
            });
        write!(f, "{}", join_sum(terms))
    }
}
