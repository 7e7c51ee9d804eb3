//! Exact complex constants.
//!
//! A [`ConstExpr`] is a quotient of two [`MPoly`]s over the Gaussian
//! rationals in the atoms `pi`, `log p`, named parameters and reduced
//! exponentials. Values are kept in canonical form by construction:
//! rational arithmetic is folded, `exp(a + b)` becomes one merged factor,
//! `exp(r log q)` folds integer powers of `q`, and `exp(k pi i)` folds the
//! fourth roots of unity.
//!
//! Zero testing is three-valued. `Zero` is returned only when the numerator
//! is literally empty after rewriting; `NonZero` only when an interval
//! enclosure excludes the origin (or the value is a single non-vanishing
//! monomial).

pub mod ball;
pub mod display;
pub mod eval;
pub mod gauss;
pub mod mpoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use ball::{digits_to_bits, Ball, ComplexBall};
pub use display::{fmt_scaled, join_sum};
pub use eval::{Assignment, Evaluator};
pub use gauss::Gauss;
use mpoly::normalize_exponent;
pub use mpoly::{MPoly, Monomial, Var};

use crate::error::{Error, Result};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

/// Precision ladder used before a zero test gives up.
pub const LADDER: [u32; 3] = [50, 200, 1000];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Undecided,
}

/// Declared parameters and their assumptions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamEnv {
    params: BTreeMap<String, bool>,
}

impl ParamEnv {
    pub fn new() -> Self {
        ParamEnv::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, nonzero: bool) -> &mut Self {
        self.params.insert(name.into(), nonzero);
        self
    }

    pub fn with(mut self, name: impl Into<String>, nonzero: bool) -> Self {
        self.declare(name, nonzero);
        self
    }

    pub fn is_nonzero(&self, name: &str) -> bool {
        self.params.get(name).copied().unwrap_or(false)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.params.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.params.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstExpr {
    num: MPoly,
    den: MPoly,
}

fn ladder_from(digits: u32) -> impl Iterator<Item = u32> {
    std::iter::once(digits).chain(LADDER.into_iter().filter(move |&d| d > digits))
}

/// Certifies a parameter-free polynomial as non-vanishing by interval
/// evaluation, escalating precision along the ladder.
fn numeric_nonzero(p: &MPoly, digits: u32) -> ZeroTest {
    if p.is_zero() {
        return ZeroTest::Zero;
    }
    if p.single_term().is_some() {
        return ZeroTest::NonZero;
    }
    for d in ladder_from(digits) {
        let mut ev = Evaluator::with_digits(d);
        if let Ok(v) = ev.mpoly(p) {
            if v.excludes_zero() {
                return ZeroTest::NonZero;
            }
        }
    }
    ZeroTest::Undecided
}

fn small_factor(n: &BigUint) -> Vec<(BigUint, i64)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut p = BigUint::from(2u32);
    let limit = BigUint::from(1_000_000u32);
    while &p * &p <= n && p <= limit {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

impl ConstExpr {
    fn from_mpoly(num: MPoly) -> Self {
        ConstExpr { num, den: MPoly::one() }
    }

    pub fn zero() -> Self {
        ConstExpr::from_mpoly(MPoly::zero())
    }

    pub fn one() -> Self {
        ConstExpr::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ConstExpr::from_gauss(Gauss::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        ConstExpr::from_gauss(Gauss::ratio(n, d))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ConstExpr::from_gauss(Gauss::real(r))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        ConstExpr::from_mpoly(MPoly::constant(g))
    }

    pub fn i() -> Self {
        ConstExpr::from_gauss(Gauss::i())
    }

    pub fn pi() -> Self {
        ConstExpr::from_mpoly(MPoly::var(Var::Pi))
    }

    pub fn param(name: impl Into<String>) -> Self {
        ConstExpr::from_mpoly(MPoly::var(Var::Param(name.into())))
    }

    /// Natural logarithm of a positive rational, split over its prime factors.
    pub fn log(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Invalid(format!("log of non-positive rational {q}")));
        }
        let mut acc = MPoly::zero();
        let n = q.numer().to_biguint().expect("positive");
        let d = q.denom().to_biguint().expect("positive");
        for (p, e) in small_factor(&n) {
            acc = acc.add(&MPoly::var(Var::Log(p)).scale(&Gauss::from_int(e)));
        }
        for (p, e) in small_factor(&d) {
            acc = acc.add(&MPoly::var(Var::Log(p)).scale(&Gauss::from_int(-e)));
        }
        Ok(ConstExpr::from_mpoly(acc))
    }

    pub fn log_int(n: i64) -> Result<Self> {
        ConstExpr::log(&BigRational::from_integer(BigInt::from(n)))
    }

    /// `exp(self)`; the argument must have a constant denominator.
    pub fn exp(&self) -> Result<Self> {
        let g = self
            .den
            .as_constant()
            .ok_or_else(|| Error::Unsupported("exp of an argument with a non-constant denominator".into()))?;
        let arg = self.num.scale(&g.inv().expect("denominator is non-zero"));
        Ok(ConstExpr::from_mpoly(MPoly::exp_of(arg)))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    /// Structural zero: the canonical numerator is empty.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_gauss().is_some_and(|g| g.is_one())
    }

    pub fn as_gauss(&self) -> Option<Gauss> {
        if self.den.as_constant().is_some_and(|g| g.is_one()) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(Gauss::is_real).map(|g| g.re)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn has_params(&self) -> bool {
        self.num.has_params() || self.den.has_params()
    }

    /// Names of the parameters occurring anywhere in the expression.
    pub fn params(&self) -> Vec<String> {
        fn walk(p: &MPoly, out: &mut Vec<String>) {
            for m in p.terms.keys() {
                for v in m.vars.keys() {
                    if let Var::Param(name) = v {
                        if !out.contains(name) {
                            out.push(name.clone());
                        }
                    }
                }
                walk(&m.exp, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.num, &mut out);
        walk(&self.den, &mut out);
        out.sort();
        out
    }

    /// Re-applies the rewrite rules; values are canonical by construction, so
    /// this is a fixed point.
    pub fn canonicalize(&self) -> ConstExpr {
        normalize(self.num.clone(), self.den.clone())
    }

    pub fn checked_div(&self, o: &ConstExpr) -> Result<ConstExpr> {
        match o.generic_zero_test() {
            ZeroTest::Zero => Err(Error::DivisionByZero),
            ZeroTest::Undecided => Err(Error::Undecided(format!("divisor {o} may vanish"))),
            ZeroTest::NonZero => Ok(normalize(self.num.mul(&o.den), self.den.mul(&o.num))),
        }
    }

    pub fn inv(&self) -> Result<ConstExpr> {
        ConstExpr::one().checked_div(self)
    }

    pub fn pow(&self, k: i64) -> Result<ConstExpr> {
        let e = u32::try_from(k.unsigned_abs()).map_err(|_| Error::Unsupported(format!("exponent {k} too large")))?;
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(normalize(base.num.pow(e), base.den.pow(e)))
    }

    pub fn scale(&self, g: &Gauss) -> ConstExpr {
        normalize(self.num.scale(g), self.den.clone())
    }

    pub fn conj(&self) -> Result<ConstExpr> {
        Ok(normalize(self.num.conj()?, self.den.conj()?))
    }

    pub fn re(&self) -> Result<ConstExpr> {
        Ok((self + &self.conj()?).scale(&Gauss::ratio(1, 2)))
    }

    pub fn im(&self) -> Result<ConstExpr> {
        let two_i_inv = Gauss::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()));
        Ok((self - &self.conj()?).scale(&two_i_inv))
    }

    /// Zero test treating parameters as independent indeterminates: `Zero`
    /// means identically zero, `NonZero` means not identically zero.
    pub fn generic_zero_test(&self) -> ZeroTest {
        generic_zero(&self.num, DEFAULT_DIGITS)
    }

    /// Zero test for the value under the assumptions in `env`, starting at
    /// `digits` and escalating along [`LADDER`].
    pub fn zero_test(&self, env: &ParamEnv, digits: u32) -> ZeroTest {
        if self.num.is_zero() {
            return ZeroTest::Zero;
        }
        if !self.num.has_params() {
            return numeric_nonzero(&self.num, digits);
        }
        let groups = self.num.split_by_params();
        if groups.len() != 1 || self.num.terms.keys().any(|m| m.exp.has_params()) {
            return ZeroTest::Undecided;
        }
        let (params, cofactor) = groups.into_iter().next().expect("one group");
        let all_flagged = params.keys().all(|v| match v {
            Var::Param(name) => env.is_nonzero(name),
            _ => true,
        });
        if !all_flagged {
            return ZeroTest::Undecided;
        }
        match numeric_nonzero(&cofactor, digits) {
            ZeroTest::NonZero => ZeroTest::NonZero,
            _ => ZeroTest::Undecided,
        }
    }

    pub fn eval(&self, ev: &mut Evaluator<'_>) -> Result<ComplexBall> {
        let n = ev.mpoly(&self.num)?;
        if self.den.as_constant().is_some_and(|g| g.is_one()) {
            return Ok(n);
        }
        n.div(&ev.mpoly(&self.den)?)
    }

    /// Interval enclosure at `digits` decimal digits.
    pub fn eval_interval(&self, digits: u32, assignment: Option<&Assignment>) -> Result<ComplexBall> {
        let mut ev = Evaluator::with_digits(digits);
        if let Some(a) = assignment {
            ev = ev.assign(a);
        }
        self.eval(&mut ev)
    }

    /// Sign of a real-valued constant, certified structurally or by
    /// intervals; fails when the sign cannot be decided.
    pub fn sign_real(&self, digits: u32) -> Result<Ordering> {
        if self.num.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Ok(r.cmp(&BigRational::zero()));
        }
        for d in ladder_from(digits) {
            if let Ok(v) = self.eval_interval(d, None) {
                if let Some(s) = v.re.sign() {
                    return Ok(s);
                }
            }
        }
        Err(Error::Undecided(format!("sign of {self}")))
    }

    /// Exact equality decided through the generic zero test of the difference.
    pub fn same_value(&self, o: &ConstExpr) -> Result<bool> {
        if self == o {
            return Ok(true);
        }
        match (self - o).generic_zero_test() {
            ZeroTest::Zero => Ok(true),
            ZeroTest::NonZero => Ok(false),
            ZeroTest::Undecided => Err(Error::Undecided(format!("equality of {self} and {o}"))),
        }
    }
}

fn generic_zero(num: &MPoly, digits: u32) -> ZeroTest {
    if num.is_zero() {
        return ZeroTest::Zero;
    }
    if num.single_term().is_some() {
        return ZeroTest::NonZero;
    }
    if !num.has_params() {
        return numeric_nonzero(num, digits);
    }
    if num.terms.keys().any(|m| m.exp.has_params()) {
        return ZeroTest::Undecided;
    }
    let groups = num.split_by_params();
    if groups.values().any(|c| numeric_nonzero(c, digits) == ZeroTest::NonZero) {
        ZeroTest::NonZero
    } else {
        ZeroTest::Undecided
    }
}

/// Brings `num / den` to canonical form. `den` must be non-zero.
fn normalize(num: MPoly, den: MPoly) -> ConstExpr {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return ConstExpr::zero();
    }
    if let Some(g) = den.as_constant() {
        let inv = g.inv().expect("non-zero denominator");
        return ConstExpr::from_mpoly(num.scale(&inv));
    }
    let (num, den) = MPoly::cancel_common_vars(&num, &den);
    if let Some(g) = den.as_constant() {
        let inv = g.inv().expect("non-zero denominator");
        return ConstExpr::from_mpoly(num.scale(&inv));
    }
    if let Some((m, c)) = den.single_term() {
        // a pure exponential denominator is a unit
        if m.vars.is_empty() {
            let (fold, exp) = normalize_exponent(m.exp.neg());
            let inv = c.inv().expect("non-zero").mul(&fold);
            let mono = Monomial {
                vars: BTreeMap::new(),
                exp,
            };
            return ConstExpr::from_mpoly(num.mul_term(&inv, &mono));
        }
    }
    // Among the unit multiples `c e^x den` with one term made exactly 1,
    // keep the smallest; the choice does not depend on the representative.
    let mut best: Option<(MPoly, Gauss, Monomial)> = None;
    for (m, c) in &den.terms {
        let (fold, exp) = normalize_exponent(m.exp.neg());
        let unit_coeff = c.inv().expect("non-zero coefficient").mul(&fold);
        let unit_mono = Monomial {
            vars: BTreeMap::new(),
            exp,
        };
        let cand = den.mul_term(&unit_coeff, &unit_mono);
        if best.as_ref().is_none_or(|(b, _, _)| cand < *b) {
            best = Some((cand, unit_coeff, unit_mono));
        }
    }
    let (den, unit_coeff, unit_mono) = best.expect("non-empty");
    let num = num.mul_term(&unit_coeff, &unit_mono);
    if let Some(k) = num.proportional_to(&den) {
        return ConstExpr::from_gauss(k);
    }
    ConstExpr { num, den }
}

impl Add for &ConstExpr {
    type Output = ConstExpr;
    fn add(self, o: &ConstExpr) -> ConstExpr {
        if self.den == o.den {
            return normalize(self.num.add(&o.num), self.den.clone());
        }
        normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl Sub for &ConstExpr {
    type Output = ConstExpr;
    fn sub(self, o: &ConstExpr) -> ConstExpr {
        self + &(-o)
    }
}

impl Mul for &ConstExpr {
    type Output = ConstExpr;
    fn mul(self, o: &ConstExpr) -> ConstExpr {
        if self.num.is_zero() || o.num.is_zero() {
            return ConstExpr::zero();
        }
        normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        ConstExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ConstExpr {
            type Output = ConstExpr;
            fn $m(self, o: ConstExpr) -> ConstExpr {
                (&self).$m(&o)
            }
        }
        impl $tr<&ConstExpr> for ConstExpr {
            type Output = ConstExpr;
            fn $m(self, o: &ConstExpr) -> ConstExpr {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        -&self
    }
}

impl From<i64> for ConstExpr {
    fn from(n: i64) -> Self {
        ConstExpr::from_int(n)
    }
}

impl From<Gauss> for ConstExpr {
    fn from(g: Gauss) -> Self {
        ConstExpr::from_gauss(g)
    }
}

/// Rational `p / q` with `q > 0` as an `i64` pair, when small enough.
pub fn rational_parts(r: &BigRational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}
