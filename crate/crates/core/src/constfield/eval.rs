use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use super::ball::{self, Ball, ComplexBall};
use super::gauss::Gauss;
use super::mpoly::{MPoly, Monomial, Var};
use crate::error::{Error, Result};

/// Test values for named parameters, used only for numeric evaluation.
pub type Assignment = BTreeMap<String, Gauss>;

/// Interval evaluator at a fixed binary precision, memoizing atoms.
pub struct Evaluator<'a> {
    bits: u32,
    assignment: Option<&'a Assignment>,
    pi: Option<Ball>,
    logs: HashMap<BigUint, Ball>,
    exps: HashMap<MPoly, ComplexBall>,
}

impl<'a> Evaluator<'a> {
    pub fn new(bits: u32) -> Self {
        Evaluator {
            bits,
            assignment: None,
            pi: None,
            logs: HashMap::new(),
            exps: HashMap::new(),
        }
    }

    pub fn with_digits(digits: u32) -> Self {
        Evaluator::new(ball::digits_to_bits(digits))
    }

    pub fn assign(mut self, assignment: &'a Assignment) -> Self {
        self.assignment = Some(assignment);
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn gauss(&self, g: &Gauss) -> ComplexBall {
        ComplexBall::from_rationals(&g.re, &g.im, self.bits)
    }

    fn var(&mut self, v: &Var) -> Result<ComplexBall> {
        let bits = self.bits;
        Ok(match v {
            Var::Pi => ComplexBall::real(self.pi.get_or_insert_with(|| ball::pi(bits)).clone()),
            Var::Log(n) => ComplexBall::real(
                self.logs
                    .entry(n.clone())
                    .or_insert_with(|| ball::log_uint(n, bits))
                    .clone(),
            ),
            Var::Param(name) => {
                let g = self
                    .assignment
                    .and_then(|a| a.get(name))
                    .ok_or_else(|| Error::UnassignedParameter(name.clone()))?;
                self.gauss(g)
            }
        })
    }

    fn monomial(&mut self, m: &Monomial) -> Result<ComplexBall> {
        let mut acc = ComplexBall::one(self.bits);
        for (v, k) in &m.vars {
            acc = acc.mul(&self.var(v)?.pow(*k));
        }
        if !m.exp.is_zero() {
            let e = match self.exps.get(&m.exp) {
                Some(e) => e.clone(),
                None => {
                    let e = self.mpoly(&m.exp)?.exp();
                    self.exps.insert(m.exp.clone(), e.clone());
                    e
                }
            };
            acc = acc.mul(&e);
        }
        Ok(acc)
    }

    pub fn mpoly(&mut self, p: &MPoly) -> Result<ComplexBall> {
        let mut acc = ComplexBall::zero(self.bits);
        for (m, c) in &p.terms {
            let term = if m.is_one() {
                self.gauss(c)
            } else {
                self.monomial(m)?.mul(&self.gauss(c))
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}
