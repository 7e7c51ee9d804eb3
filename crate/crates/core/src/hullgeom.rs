//! Convex hulls of finite sets of exact complex points and their
//! circumference, with segments counted twice.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::constfield::{Ball, ConstExpr, Evaluator, ZeroTest};
use crate::error::{Error, Result};

/// A finite point set. Built from frequencies, the points are the complex
/// conjugates of the given values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencySet {
    points: Vec<ConstExpr>,
    with_zero: bool,
}

impl FrequencySet {
    /// The set `{ conj(w) : w in omegas }`, optionally with 0 adjoined.
    pub fn from_frequencies(omegas: &[ConstExpr], with_zero: bool) -> Result<Self> {
        let pts = omegas.iter().map(ConstExpr::conj).collect::<Result<Vec<_>>>()?;
        FrequencySet::from_points(pts, with_zero)
    }

    pub fn from_points(points: Vec<ConstExpr>, with_zero: bool) -> Result<Self> {
        let mut out: Vec<ConstExpr> = Vec::new();
        for p in points {
            if p.has_params() {
                return Err(Error::Unsupported(format!("hull of a parametric point {p}")));
            }
            let mut dup = false;
            for q in &out {
                if q.same_value(&p)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                out.push(p);
            }
        }
        Ok(FrequencySet { points: out, with_zero })
    }

    pub fn points(&self) -> &[ConstExpr] {
        &self.points
    }

    pub fn with_zero(&self) -> bool {
        self.with_zero
    }

    /// All points, with 0 included when adjoined.
    pub fn all_points(&self) -> Vec<ConstExpr> {
        let mut out = self.points.clone();
        if self.with_zero && !out.iter().any(ConstExpr::is_zero) {
            out.push(ConstExpr::zero());
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && !self.with_zero
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HullKind {
    Point,
    Segment,
    Polygon,
}

impl fmt::Display for HullKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullKind::Point => "POINT",
            HullKind::Segment => "SEGMENT",
            HullKind::Polygon => "POLYGON",
        })
    }
}

/// `sum c_k sqrt(k)` with squarefree `k` and positive rational `c_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurdSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_sqrt(&mut self, r: &BigRational) -> bool {
        match sqrt_rational(r) {
            None => false,
            Some((c, k)) => {
                if !c.is_zero() {
                    let e = self.terms.entry(k).or_insert_with(BigRational::zero);
                    *e += c;
                }
                true
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> SurdSum {
        if r.is_zero() {
            return SurdSum::zero();
        }
        SurdSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect(),
        }
    }

    /// Rational value, when the sum has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let c_str = if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                };
                if k.is_one() {
                    c_str
                } else if c.is_one() {
                    format!("sqrt({k})")
                } else {
                    format!("{c_str}*sqrt({k})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// `sqrt(r) = c * sqrt(k)` with `k` squarefree, for `r >= 0`.
fn sqrt_rational(r: &BigRational) -> Option<(BigRational, BigUint)> {
    if r.is_zero() {
        return Some((BigRational::zero(), BigUint::one()));
    }
    let n = (r.numer() * r.denom()).to_biguint()?;
    let (s, k) = square_split(&n)?;
    Some((BigRational::new(BigInt::from(s), r.denom().clone()), k))
}

/// `n = s^2 * k` with `k` squarefree.
fn square_split(n: &BigUint) -> Option<(BigUint, BigUint)> {
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut k = BigUint::one();
    let limit = BigUint::from(1_000_000u32);
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            k *= &p;
        }
        p += 1u32;
    }
    if rest.is_one() {
        return Some((s, k));
    }
    if &p * &p > rest {
        return Some((s, k * rest));
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        Some((s * r, k))
    } else if rest < &limit * &limit * &limit {
        // no prime factor below the limit, so at most two factors remain
        Some((s, k * rest))
    } else {
        None
    }
}

#[derive(Clone, Debug)]
pub struct HullResult {
    pub kind: HullKind,
    /// Counterclockwise for polygons; the two endpoints for a segment.
    pub vertices: Vec<ConstExpr>,
    pub circumference: Ball,
    /// Closed form of the circumference when every edge is a surd.
    pub exact: Option<SurdSum>,
}

impl HullResult {
    pub fn circumference(&self) -> &Ball {
        &self.circumference
    }
}

struct Pt {
    z: ConstExpr,
    x: ConstExpr,
    y: ConstExpr,
}

fn sign(e: &ConstExpr, digits: u32) -> Result<Ordering> {
    e.sign_real(digits)
        .map_err(|_| Error::Undecided(format!("orientation sign of {e}")))
}

fn cross(o: &Pt, a: &Pt, b: &Pt, digits: u32) -> Result<Ordering> {
    let lhs = &(&a.x - &o.x) * &(&b.y - &o.y);
    let rhs = &(&a.y - &o.y) * &(&b.x - &o.x);
    sign(&(&lhs - &rhs), digits)
}

fn cmp_xy(a: &Pt, b: &Pt, digits: u32) -> Result<Ordering> {
    match sign(&(&a.x - &b.x), digits)? {
        Ordering::Equal => sign(&(&a.y - &b.y), digits),
        o => Ok(o),
    }
}

/// Convex hull by the monotone chain with exact orientation tests.
pub fn convex_hull(set: &FrequencySet, digits: u32) -> Result<HullResult> {
    let mut pts = Vec::new();
    for z in set.all_points() {
        pts.push(Pt {
            x: z.re()?,
            y: z.im()?,
            z,
        });
    }
    if pts.is_empty() {
        return Err(Error::Invalid("convex hull of the empty set".into()));
    }
    // insertion sort: the comparator is fallible
    for i in 1..pts.len() {
        let mut j = i;
        while j > 0 && cmp_xy(&pts[j - 1], &pts[j], digits)? == Ordering::Greater {
            pts.swap(j - 1, j);
            j -= 1;
        }
    }
    if pts.len() == 1 {
        return finish(HullKind::Point, pts, digits);
    }
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while lower.len() >= 2
            && cross(
                &pts[lower[lower.len() - 2]],
                &pts[lower[lower.len() - 1]],
                &pts[i],
                digits,
            )? != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for i in (0..pts.len()).rev() {
        while upper.len() >= 2
            && cross(
                &pts[upper[upper.len() - 2]],
                &pts[upper[upper.len() - 1]],
                &pts[i],
                digits,
            )? != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let mut idx = lower;
    idx.extend(upper);
    let kind = if idx.len() <= 2 {
        HullKind::Segment
    } else {
        HullKind::Polygon
    };
    let mut pts: Vec<Option<Pt>> = pts.into_iter().map(Some).collect();
    let hull: Vec<Pt> = idx
        .into_iter()
        .map(|i| pts[i].take().expect("vertex used once"))
        .collect();
    finish(kind, hull, digits)
}

fn finish(kind: HullKind, hull: Vec<Pt>, digits: u32) -> Result<HullResult> {
    let mut ev = Evaluator::with_digits(digits);
    let mut total = Ball::zero(ev.bits());
    let mut exact = Some(SurdSum::zero());
    let n = hull.len();
    if n >= 2 {
        for k in 0..n {
            let (a, b) = (&hull[k], &hull[(k + 1) % n]);
            let d = &b.z - &a.z;
            total = total.add(&d.eval(&mut ev)?.abs()?);
            let sq = (&(&b.x - &a.x) * &(&b.x - &a.x)) + (&(&b.y - &a.y) * &(&b.y - &a.y));
            match (sq.as_rational(), exact.as_mut()) {
                (Some(r), Some(s)) => {
                    if !s.add_sqrt(&r) {
                        exact = None;
                    }
                }
                _ => exact = None,
            }
        }
    }
    Ok(HullResult {
        kind,
        vertices: hull.into_iter().map(|p| p.z).collect(),
        circumference: total,
        exact,
    })
}

/// Whether `0` and all points lie on one line.
pub fn collinear_with_origin(points: &[ConstExpr]) -> Result<bool> {
    let Some(d) = points.iter().find(|p| !p.is_zero()) else {
        return Ok(true);
    };
    let dc = d.conj()?;
    for p in points {
        let c = (&dc * p).im()?;
        match c.generic_zero_test() {
            ZeroTest::Zero => {}
            ZeroTest::NonZero => return Ok(false),
            ZeroTest::Undecided => return Err(Error::Undecided(format!("collinearity cross product {c}"))),
        }
    }
    Ok(true)
}

/// First index pair `(i, j)` with `omega_i = 2 omega_j`.
pub fn has_double_relation(omegas: &[ConstExpr]) -> Result<Option<(usize, usize)>> {
    let two = ConstExpr::from_int(2);
    for (i, wi) in omegas.iter().enumerate() {
        for (j, wj) in omegas.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = wi - &(&two * wj);
            match d.generic_zero_test() {
                ZeroTest::Zero => return Ok(Some((i, j))),
                ZeroTest::NonZero => {}
                ZeroTest::Undecided => return Err(Error::Undecided(format!("frequency relation {d}"))),
            }
        }
    }
    Ok(None)
}
