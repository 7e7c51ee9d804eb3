//! Fixed-point ball arithmetic over big integers.
//!
//! A [`Ball`] with `bits = b` stands for the closed interval
//! `[(mid - rad) / 2^b, (mid + rad) / 2^b]`. Every operation returns a ball
//! that contains the exact result for all inputs drawn from the operand balls.
//! Operands of a binary operation must share the same `bits`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits per decimal digit, rounded up.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

fn pow2(b: u32) -> BigInt {
    BigInt::one() << b as usize
}

fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    x.div_floor(&pow2(s))
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    x.div_ceil(&pow2(s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    bits: u32,
}

impl Ball {
    pub fn zero(bits: u32) -> Self {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Ball {
            mid: BigInt::from(n) << bits as usize,
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << bits as usize;
        let (q, rem) = scaled.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        Ball { mid: q, rad, bits }
    }

    pub(crate) fn from_parts(mid: BigInt, rad: BigInt, bits: u32) -> Self {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigInt {
        &self.rad
    }

    /// Re-expresses the ball at another precision, widening on truncation.
    pub fn with_bits(&self, bits: u32) -> Ball {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (bits - self.bits) as usize;
                Ball {
                    mid: &self.mid << s,
                    rad: &self.rad << s,
                    bits,
                }
            }
            Ordering::Less => {
                let s = self.bits - bits;
                Ball {
                    mid: floor_shr(&self.mid, s),
                    rad: ceil_shr(&self.rad, s) + 1,
                    bits,
                }
            }
        }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.bits, o.bits);
        Ball {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.bits, o.bits);
        Ball {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.bits, o.bits);
        let b = self.bits;
        let prod = &self.mid * &o.mid;
        let spread = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let exact = prod.is_multiple_of(&pow2(b));
        let rad = ceil_shr(&spread, b) + if exact { 0 } else { 1 };
        Ball {
            mid: floor_shr(&prod, b),
            rad,
            bits: b,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        Ball {
            mid: &self.mid * k,
            rad: &self.rad * k.abs(),
            bits: self.bits,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Ball {
        assert!(!k.is_zero(), "division of a ball by zero integer");
        let ka = k.abs();
        let (q, r) = self.mid.div_mod_floor(k);
        let extra = if r.is_zero() { 0 } else { 1 };
        Ball {
            mid: q,
            rad: self.rad.div_ceil(&ka) + extra,
            bits: self.bits,
        }
    }

    /// Exact division by `2^s` up to one ulp of rounding.
    pub fn div_pow2(&self, s: u32) -> Ball {
        if s == 0 {
            return self.clone();
        }
        Ball {
            mid: floor_shr(&self.mid, s),
            rad: ceil_shr(&self.rad, s) + 1,
            bits: self.bits,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Sign of every point of the ball, or `None` when it straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.mid.is_zero() && self.rad.is_zero() {
            Some(Ordering::Equal)
        } else if self.contains_zero() {
            None
        } else if self.mid.is_positive() {
            Some(Ordering::Greater)
        } else {
            Some(Ordering::Less)
        }
    }

    pub fn recip(&self) -> Result<Ball> {
        let m = self.mid.abs();
        if m <= self.rad {
            return Err(Error::Undecided("reciprocal of an interval containing zero".into()));
        }
        let b = self.bits;
        let num = pow2(2 * b);
        let mid = num.div_floor(&self.mid);
        let denom = &m * (&m - &self.rad);
        let rad = (&self.rad * &num).div_ceil(&denom) + 1;
        Ok(Ball { mid, rad, bits: b })
    }

    pub fn div(&self, o: &Ball) -> Result<Ball> {
        Ok(self.mul(&o.recip()?))
    }

    /// Square root, clamping the part of the ball below zero.
    pub fn sqrt(&self) -> Result<Ball> {
        let hi = &self.mid + &self.rad;
        if hi.is_negative() {
            return Err(Error::Invalid("square root of a negative interval".into()));
        }
        let lo = (&self.mid - &self.rad).max(BigInt::zero());
        let b = self.bits as usize;
        let lo_s: BigInt = (lo << b).sqrt();
        let hi_s: BigInt = (hi << b).sqrt() + 1;
        let mid: BigInt = (&lo_s + &hi_s) >> 1usize;
        let rad: BigInt = (&hi_s - &mid).max(&mid - &lo_s);
        Ok(Ball {
            mid,
            rad,
            bits: self.bits,
        })
    }

    /// Lower endpoint as an exact rational.
    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, pow2(self.bits))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, pow2(self.bits))
    }

    /// Width of the ball as an exact rational.
    pub fn width(&self) -> BigRational {
        BigRational::new(&self.rad * 2, pow2(self.bits))
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lower() <= *r && *r <= self.upper()
    }

    pub fn overlaps(&self, o: &Ball) -> bool {
        self.lower() <= o.upper() && o.lower() <= self.upper()
    }

    /// Upper bound on `|x|` rounded up to an integer.
    pub fn abs_ceil(&self) -> BigInt {
        ceil_shr(&(self.mid.abs() + &self.rad), self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let r = BigRational::new(self.mid.clone(), pow2(self.bits));
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint rendered with `digits` decimals after the point.
    pub fn mid_decimal(&self, digits: usize) -> String {
        decimal(&self.mid, self.bits, digits)
    }

    pub fn rad_f64(&self) -> f64 {
        BigRational::new(self.rad.clone(), pow2(self.bits))
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }
}

fn decimal(x: &BigInt, bits: u32, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (x * &scale).div_floor(&pow2(bits));
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(
            f,
            "[{}, {}]",
            decimal(&(&self.mid - &self.rad), self.bits, d),
            decimal(&(&self.mid + &self.rad + 1), self.bits, d)
        )
    }
}

/// Rectangular complex ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        debug_assert_eq!(re.bits, im.bits);
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let bits = re.bits;
        ComplexBall {
            re,
            im: Ball::zero(bits),
        }
    }

    pub fn zero(bits: u32) -> Self {
        ComplexBall::real(Ball::zero(bits))
    }

    pub fn one(bits: u32) -> Self {
        ComplexBall::real(Ball::from_int(1, bits))
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, bits: u32) -> Self {
        ComplexBall::new(Ball::from_rational(re, bits), Ball::from_rational(im, bits))
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        ComplexBall::new(self.re.with_bits(bits), self.im.with_bits(bits))
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBall::new(re, im)
    }

    pub fn mul_real(&self, r: &Ball) -> Self {
        ComplexBall::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        ComplexBall::new(self.re.div_int(k), self.im.div_int(k))
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn recip(&self) -> Result<Self> {
        let inv = self.norm_sqr().recip()?;
        Ok(self.conj().mul_real(&inv))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ComplexBall::one(self.bits());
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

    pub fn abs(&self) -> Result<Ball> {
        self.norm_sqr().sqrt()
    }

    /// True when the box certainly excludes the origin.
    pub fn excludes_zero(&self) -> bool {
        !self.re.contains_zero() || !self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    /// Largest of the two half-widths, as `f64`.
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().max(self.im.rad_f64())
    }

    /// Complex exponential by argument halving, a Taylor polynomial with a
    /// rigorous remainder bound, and repeated squaring.
    pub fn exp(&self) -> Self {
        let bits = self.bits();
        let mag = self.re.abs_ceil() + self.im.abs_ceil();
        let mag_bits = if mag.is_zero() { 0 } else { mag.bits() as u32 };
        let halvings = mag_bits + 8;
        let growth = self
            .re
            .upper()
            .ceil()
            .to_integer()
            .to_i64()
            .unwrap_or(i64::MAX / 4)
            .max(0);
        let growth_bits =
            u32::try_from((growth as f64 * std::f64::consts::LOG2_E).ceil() as i64).unwrap_or(u32::MAX / 4);
        let work = bits + halvings + growth_bits.min(1 << 20) + 24;
        // |y| <= 2^-7 after halving
        let y = self.with_bits(work);
        let y = ComplexBall::new(y.re.div_pow2(halvings), y.im.div_pow2(halvings));
        let terms = (work + 3) / 7 + 1;
        let one = ComplexBall::one(work);
        let mut acc = one.clone();
        for k in (1..=terms).rev() {
            acc = one.add(&y.mul(&acc).div_int(&BigInt::from(k)));
        }
        // remainder 2|y|^(N+1)/(N+1)! < 2^-work
        acc.re.rad += 1;
        acc.im.rad += 1;
        for _ in 0..halvings {
            acc = acc.mul(&acc);
        }
        acc.with_bits(bits)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(f, "{:.*} + {:.*}*i", d, self.re, d, self.im)
    }
}

/// Sum of `sign^k / ((2k+1) x^(2k+1))`, returned as a ball at `bits`.
fn arctan_like(num: &BigInt, den: &BigInt, alternating: bool, bits: u32) -> Ball {
    let one = pow2(bits);
    let mut sum = BigInt::zero();
    let mut errors = BigInt::zero();
    let num2 = num * num;
    let den2 = den * den;
    let mut np = num.clone();
    let mut dp = den.clone();
    let mut k: u64 = 0;
    loop {
        let term = (&one * &np).div_floor(&(&dp * BigInt::from(2 * k + 1)));
        if term.is_zero() {
            break;
        }
        if alternating && k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        errors += 1;
        np *= &num2;
        dp *= &den2;
        k += 1;
    }
    // Each term is floored (< 1 ulp); the omitted tail is below 2 ulps when
    // the ratio is at most 1/3.
    Ball::from_parts(sum, errors + 2, bits)
}

/// `pi` by Machin's formula.
pub fn pi(bits: u32) -> Ball {
    let w = bits + 32;
    let one = BigInt::one();
    let a = arctan_like(&one, &BigInt::from(5), true, w).mul_int(&BigInt::from(16));
    let b = arctan_like(&one, &BigInt::from(239), true, w).mul_int(&BigInt::from(4));
    a.sub(&b).with_bits(bits)
}

/// `log n` for an integer `n >= 1`, via `k log 2 + 2 atanh((n - 2^k)/(n + 2^k))`.
pub fn log_uint(n: &BigUint, bits: u32) -> Ball {
    let w = bits + 32 + n.bits() as u32;
    if n.is_one() {
        return Ball::zero(bits);
    }
    let n = BigInt::from_biguint(Sign::Plus, n.clone());
    let ln2 = arctan_like(&BigInt::one(), &BigInt::from(3), false, w).mul_int(&BigInt::from(2));
    let k = n.bits() - 1;
    let p2 = BigInt::one() << k as usize;
    let rest = if n == p2 {
        Ball::zero(w)
    } else {
        arctan_like(&(&n - &p2), &(&n + &p2), false, w).mul_int(&BigInt::from(2))
    };
    ln2.mul_int(&BigInt::from(k)).add(&rest).with_bits(bits)
}
