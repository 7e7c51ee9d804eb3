//! Order, exponent of convergence of zeros, and leading characteristic terms
//! of exponential polynomials.

use std::fmt;

use crate::constfield::{ball, Ball, Evaluator};
use crate::error::{Error, Result};
use crate::expoly::ExPoly;
use crate::hullgeom::{convex_hull, FrequencySet, HullResult, SurdSum};

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub rho: usize,
    pub lambda: usize,
    /// Coefficient of `r^rho` in `T(r, f)`.
    pub t_leading: Ball,
    /// Coefficient of `r^rho` in `N(r, 1/f)`; `None` means `o(r^rho)`.
    pub n_leading: Option<Ball>,
    pub mean_type: bool,
    /// Exact `C(co(W0))` when it is a sum of surds.
    pub t_circumference: Option<SurdSum>,
    pub n_circumference: Option<SurdSum>,
}

fn over_two_pi(c: &Ball, bits: u32) -> Result<Ball> {
    c.div(&ball::pi(bits).mul_int(&2.into()))
}

fn hull(omegas: &[crate::ConstExpr], with_zero: bool, digits: u32) -> Result<HullResult> {
    convex_hull(&FrequencySet::from_frequencies(omegas, with_zero)?, digits)
}

/// Growth indicators of a non-zero exponential polynomial.
pub fn indicators(f: &ExPoly, digits: u32) -> Result<GrowthReport> {
    let bits = Evaluator::with_digits(digits).bits();
    let view = f.normalized_view()?;
    if view.m() == 0 {
        return Ok(GrowthReport {
            rho: 0,
            lambda: 0,
            t_leading: Ball::zero(bits),
            n_leading: None,
            mean_type: false,
            t_circumference: Some(SurdSum::zero()),
            n_circumference: Some(SurdSum::zero()),
        });
    }
    let omegas = view.omegas();
    let w0 = hull(&omegas, true, digits)?;
    let t_leading = over_two_pi(&w0.circumference, bits)?;
    let (n_leading, n_circumference) = if !view.h0.is_zero() {
        (Some(t_leading.clone()), w0.exact.clone())
    } else {
        let w = hull(&omegas, false, digits)?;
        if w.circumference.sign() == Some(std::cmp::Ordering::Equal) || view.m() == 1 {
            (None, Some(SurdSum::zero()))
        } else {
            (Some(over_two_pi(&w.circumference, bits)?), w.exact)
        }
    };
    let lambda = if !view.h0.is_zero() || view.m() >= 2 {
        view.t
    } else {
        let h1 = &view.groups[0].1;
        if h1.is_polynomial() {
            0
        } else {
            indicators(h1, digits)?.lambda
        }
    };
    let mean_type = t_leading.sign() == Some(std::cmp::Ordering::Greater);
    Ok(GrowthReport {
        rho: view.t,
        lambda,
        t_leading,
        n_leading,
        mean_type,
        t_circumference: w0.exact,
        n_circumference,
    })
}

/// `lambda < rho`; polynomials are never counted as exceptional.
pub fn is_borel_exceptional_zero(f: &ExPoly, digits: u32) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Invalid("growth of the zero function".into()));
    }
    let g = indicators(f, digits)?;
    Ok(g.rho > 0 && g.lambda < g.rho)
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rho = {}", self.rho)?;
        writeln!(f, "lambda = {}", self.lambda)?;
        match &self.t_circumference {
            Some(c) => writeln!(f, "T_leading = ({c})/(2*pi) ~ {}", self.t_leading.mid_decimal(20))?,
            None => writeln!(f, "T_leading ~ {}", self.t_leading.mid_decimal(20))?,
        }
        match (&self.n_leading, &self.n_circumference) {
            (None, _) => writeln!(f, "N_leading = o(r^{})", self.rho)?,
            (Some(b), Some(c)) => writeln!(f, "N_leading = ({c})/(2*pi) ~ {}", b.mid_decimal(20))?,
            (Some(b), None) => writeln!(f, "N_leading ~ {}", b.mid_decimal(20))?,
        }
        write!(f, "mean_type = {}", self.mean_type)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constfield::ConstExpr;
    use crate::poly::Poly;

    fn ez(k: i64) -> ExPoly {
        ExPoly::exp_of(Poly::from_ints(&[0, k])).unwrap()
    }

    #[test]
    fn single_exponential_is_borel_exceptional() {
        let g = indicators(&ez(2), 50).unwrap();
        assert_eq!((g.rho, g.lambda), (1, 0));
        assert!(g.n_leading.is_none());
        assert!(g.mean_type);
        assert!(is_borel_exceptional_zero(&ez(2), 50).unwrap());
        let f = ExPoly::term(Poly::from_ints(&[1, 1]), Poly::from_ints(&[0, 1])).unwrap();
        assert_eq!(indicators(&f, 50).unwrap().lambda, 0);
    }

    #[test]
    fn three_term_example() {
        let f = ez(2).sub(&ez(1)).unwrap().add(&ExPoly::one()).unwrap();
        let g = indicators(&f, 50).unwrap();
        assert_eq!((g.rho, g.lambda), (1, 1));
        assert_eq!(g.t_circumference.unwrap().to_string(), "4");
        let expect = 4.0 / (2.0 * std::f64::consts::PI);
        assert!((g.t_leading.to_f64() - expect).abs() < 1e-12);
        assert!(!is_borel_exceptional_zero(&f, 50).unwrap());
    }

    #[test]
    fn polynomials_are_not_exceptional() {
        let f = ExPoly::from_poly(Poly::z());
        let g = indicators(&f, 50).unwrap();
        assert_eq!((g.rho, g.lambda), (0, 0));
        assert!(!is_borel_exceptional_zero(&f, 50).unwrap());
    }

    #[test]
    fn two_frequencies_without_constant() {
        let f = ez(1)
            .add(&ExPoly::exp_of(Poly::from_coeffs(vec![ConstExpr::zero(), ConstExpr::i()])).unwrap())
            .unwrap();
        let g = indicators(&f, 50).unwrap();
        assert_eq!(g.lambda, 1);
        assert!(g.n_leading.is_some());
    }
}
