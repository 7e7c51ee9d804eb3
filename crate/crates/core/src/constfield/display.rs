use std::fmt;

use super::gauss::Gauss;
use super::mpoly::{MPoly, Monomial, Var};
use super::ConstExpr;

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Pi => write!(f, "pi"),
            Var::Log(n) => write!(f, "log({n})"),
            Var::Param(name) => write!(f, "param({name})"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, k) in &self.vars {
            if *k == 1 {
                parts.push(v.to_string());
            } else {
                parts.push(format!("{v}^{k}"));
            }
        }
        if !self.exp.is_zero() {
            parts.push(format!("exp({})", self.exp));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

pub(crate) fn fmt_term(c: &Gauss, m: &Monomial) -> String {
    if m.is_one() {
        return c.to_string();
    }
    if c.is_one() {
        m.to_string()
    } else if c.neg().is_one() {
        format!("-{m}")
    } else {
        format!("{c}*{m}")
    }
}

/// Joins already formatted summands, turning a leading minus into ` - `.
pub fn join_sum<I: IntoIterator<Item = String>>(terms: I) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_sum(self.terms.iter().map(|(m, c)| fmt_term(c, m))))
    }
}

impl ConstExpr {
    /// True when the printed form needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        !self.den.as_constant().is_some_and(|g| g.is_one()) || self.num.len() > 1 || self.to_string().starts_with('-')
    }
}

/// `c*factor` with the sign pulled out and parentheses only where needed.
pub fn fmt_scaled(c: &ConstExpr, factor: &str) -> String {
    if c.is_one() {
        return factor.to_string();
    }
    let neg = -c;
    if neg.is_one() {
        return format!("-{factor}");
    }
    if !c.is_compound() {
        return format!("{c}*{factor}");
    }
    if !neg.is_compound() {
        return format!("-{neg}*{factor}");
    }
    format!("({c})*{factor}")
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|g| g.is_one()) {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{num}/({})", self.den)
    }
}
