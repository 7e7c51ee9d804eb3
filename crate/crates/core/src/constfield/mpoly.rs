//! Polynomials over the Gaussian rationals in the transcendental atoms
//! `pi`, `log(p)`, named parameters and a single `exp(E)` factor per monomial.
//!
//! Every monomial carries at most one exponential factor: products of
//! exponentials are merged by adding their arguments, and the argument is kept
//! in a reduced form where integer multiples of `log p` and the rational
//! multiples of `pi*i` that give `±1, ±i` are folded into the coefficient.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::gauss::Gauss;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Pi,
    /// Natural logarithm of an integer `> 1` (a prime after factoring, or an
    /// unfactored cofactor).
    Log(BigUint),
    Param(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub(crate) vars: BTreeMap<Var, u32>,
    /// Reduced argument of the exponential factor; zero means no factor.
    pub(crate) exp: MPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    pub(crate) terms: BTreeMap<Monomial, Gauss>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.exp.is_zero()
    }

    pub fn var(v: Var) -> Self {
        let mut vars = BTreeMap::new();
        vars.insert(v, 1);
        Monomial {
            vars,
            exp: MPoly::zero(),
        }
    }

    /// Product of two monomials; the folded part of the merged exponential
    /// comes back as a coefficient.
    pub fn mul(&self, o: &Monomial) -> (Gauss, Monomial) {
        let mut vars = self.vars.clone();
        for (v, k) in &o.vars {
            *vars.entry(v.clone()).or_insert(0) += k;
        }
        if o.exp.is_zero() {
            return (
                Gauss::one(),
                Monomial {
                    vars,
                    exp: self.exp.clone(),
                },
            );
        }
        if self.exp.is_zero() {
            return (
                Gauss::one(),
                Monomial {
                    vars,
                    exp: o.exp.clone(),
                },
            );
        }
        let (factor, exp) = normalize_exponent(self.exp.add(&o.exp));
        (factor, Monomial { vars, exp })
    }

    pub fn has_params(&self) -> bool {
        self.vars.keys().any(|v| matches!(v, Var::Param(_))) || self.exp.has_params()
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(g: Gauss) -> Self {
        let mut p = MPoly::zero();
        if !g.is_zero() {
            p.terms.insert(Monomial::one(), g);
        }
        p
    }

    pub fn one() -> Self {
        MPoly::constant(Gauss::one())
    }

    pub fn term(c: Gauss, m: Monomial) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        MPoly::term(Gauss::one(), Monomial::var(v))
    }

    /// `exp(arg)` as a single reduced monomial times a folded coefficient.
    pub fn exp_of(arg: MPoly) -> MPoly {
        let (factor, exp) = normalize_exponent(arg);
        MPoly::term(
            factor,
            Monomial {
                vars: BTreeMap::new(),
                exp,
            },
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Gauss)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Gauss)> {
        self.terms.iter().next_back()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(Monomial::has_params)
    }

    fn add_term(&mut self, m: Monomial, c: Gauss) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, g: &Gauss) -> MPoly {
        if g.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(g))).collect(),
        }
    }

    pub fn mul_term(&self, g: &Gauss, mono: &Monomial) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (factor, prod) = m.mul(mono);
            out.add_term(prod, c.mul(g).mul(&factor));
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let (factor, prod) = m1.mul(m2);
                out.add_term(prod, c1.mul(c2).mul(&factor));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut sq = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Complex conjugate; parameters have no known conjugate.
    pub fn conj(&self) -> Result<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.vars.keys().any(|v| matches!(v, Var::Param(_))) {
                return Err(Error::Unsupported("conjugate of an expression with parameters".into()));
            }
            let (factor, exp) = if m.exp.is_zero() {
                (Gauss::one(), MPoly::zero())
            } else {
                normalize_exponent(m.exp.conj()?)
            };
            let mono = Monomial {
                vars: m.vars.clone(),
                exp,
            };
            out.add_term(mono, c.conj().mul(&factor));
        }
        Ok(out)
    }

    /// Divides every monomial by the variable powers common to all terms of
    /// `self` and `other`, returning the reduced pair.
    pub(crate) fn cancel_common_vars(num: &MPoly, den: &MPoly) -> (MPoly, MPoly) {
        let mut common: Option<BTreeMap<Var, u32>> = None;
        for m in num.terms.keys().chain(den.terms.keys()) {
            common = Some(match common {
                None => m.vars.clone(),
                Some(c) => c
                    .into_iter()
                    .filter_map(|(v, k)| m.vars.get(&v).map(|&j| (v, k.min(j))))
                    .collect(),
            });
            if common.as_ref().is_some_and(BTreeMap::is_empty) {
                return (num.clone(), den.clone());
            }
        }
        let Some(common) = common else {
            return (num.clone(), den.clone());
        };
        let strip = |p: &MPoly| MPoly {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    for (v, k) in &common {
                        let e = m.vars.get_mut(v).expect("common var");
                        *e -= k;
                        if *e == 0 {
                            m.vars.remove(v);
                        }
                    }
                    (m, c.clone())
                })
                .collect(),
        };
        (strip(num), strip(den))
    }

    /// `Some(k)` when `self == k * other` for a Gaussian rational `k`.
    pub(crate) fn proportional_to(&self, other: &MPoly) -> Option<Gauss> {
        if self.terms.len() != other.terms.len() || other.is_zero() {
            return None;
        }
        let mut ratio: Option<Gauss> = None;
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(other.terms.iter()) {
            if m1 != m2 {
                return None;
            }
            let r = c1.div(c2)?;
            match &ratio {
                None => ratio = Some(r),
                Some(k) if *k == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// Groups terms by their parameter part: each key is the monomial of
    /// parameter powers, each value the parameter-free cofactor.
    pub(crate) fn split_by_params(&self) -> BTreeMap<BTreeMap<Var, u32>, MPoly> {
        let mut groups: BTreeMap<BTreeMap<Var, u32>, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (params, rest): (BTreeMap<_, _>, BTreeMap<_, _>) = m
                .vars
                .iter()
                .map(|(v, k)| (v.clone(), *k))
                .partition(|(v, _)| matches!(v, Var::Param(_)));
            let mono = Monomial {
                vars: rest,
                exp: m.exp.clone(),
            };
            groups.entry(params).or_default().add_term(mono, c.clone());
        }
        groups
    }
}

/// Reduces an exponential argument, returning the folded coefficient and the
/// remaining argument.
///
/// * `a*log p` with rational real part: `floor(a)` is folded into `p^floor(a)`.
/// * `b*pi*i`: `b` is reduced into `[0, 1/2)`, folding `i^floor(2b)`.
pub(crate) fn normalize_exponent(arg: MPoly) -> (Gauss, MPoly) {
    let mut factor = Gauss::one();
    let mut out = MPoly::zero();
    for (m, mut c) in arg.terms {
        if m.exp.is_zero() && m.vars.len() == 1 {
            let (v, &k) = m.vars.iter().next().expect("one var");
            if k == 1 {
                match v {
                    Var::Log(p) => {
                        let fl = c.re.floor();
                        if let Some(e) = fl.to_integer().to_i64().filter(|e| e.unsigned_abs() <= 4096) {
                            let base = BigRational::from_integer(BigInt::from(p.clone()));
                            let pw = Gauss::real(base).pow(e).expect("p > 1");
                            factor = factor.mul(&pw);
                            c.re -= fl;
                        }
                    }
                    Var::Pi => {
                        let two = BigRational::from_integer(BigInt::from(2));
                        let turns = (&c.im * &two).floor();
                        let q = (&turns % BigRational::from_integer(BigInt::from(4)))
                            .to_integer()
                            .to_i64()
                            .expect("small");
                        factor = factor.mul(&Gauss::i_pow(q));
                        c.im -= turns / two;
                    }
                    Var::Param(_) => {}
                }
            }
        }
        if !c.is_zero() {
            out.terms.insert(m, c);
        }
    }
    (factor, out)
}
