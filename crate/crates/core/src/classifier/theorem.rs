//! Clause-by-clause checking of the classification theorem on a concrete
//! solution, in three-valued logic.

use std::fmt;

use super::{classify, compute_coefficient_functions, ClassTag, Equation};
use crate::constfield::{ConstExpr, ParamEnv, ZeroTest};
use crate::error::{Error, Result};
use crate::expoly::ExPoly;
use crate::growth::{indicators, GrowthReport};
use crate::hullgeom::has_double_relation;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Vacuous,
    Counterexample,
    Undecided,
    /// A disjunct of a conclusion that does not occur for this solution.
    NotRealized,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Holds,
        Status::Vacuous,
        Status::Counterexample,
        Status::Undecided,
        Status::NotRealized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Vacuous => "VACUOUS",
            Status::Counterexample => "COUNTEREXAMPLE",
            Status::Undecided => "UNDECIDED",
            Status::NotRealized => "NOT_REALIZED",
        }
    }

    pub fn from_name(s: &str) -> Option<Status> {
        Status::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseReport {
    pub clauses: Vec<ClauseResult>,
}

impl ClauseReport {
    pub const NAMES: [&'static str; 11] = [
        "(i)",
        "(ii)->",
        "(ii)<-",
        "(iii)->",
        "(iii)<-",
        "(iv)",
        "(v)(a)",
        "(v)(b)",
        "(v)(b)(I)",
        "(v)(b)(II)",
        "(v)(b)(III)",
    ];

    pub fn get(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }

    pub fn has_counterexample(&self) -> bool {
        self.clauses.iter().any(|c| c.status == Status::Counterexample)
    }
}

impl fmt::Display for ClauseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{:<12} {:<15} {}", c.name, c.status.name(), c.detail)?;
        }
        Ok(())
    }
}

/// Kleene truth values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn of(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }

    fn all<I: IntoIterator<Item = Tri>>(it: I) -> Tri {
        it.into_iter().fold(Tri::True, Tri::and)
    }

    fn any<I: IntoIterator<Item = Tri>>(it: I) -> Tri {
        it.into_iter().fold(Tri::False, Tri::or)
    }

    fn word(self) -> &'static str {
        match self {
            Tri::True => "yes",
            Tri::False => "no",
            Tri::Unknown => "unknown",
        }
    }
}

fn implication(hyp: Tri, concl: Tri) -> Status {
    match (hyp, concl) {
        (Tri::False, _) => Status::Vacuous,
        (Tri::True, Tri::True) => Status::Holds,
        (Tri::True, Tri::False) => Status::Counterexample,
        (Tri::Unknown, Tri::True) => Status::Holds,
        _ => Status::Undecided,
    }
}

fn disjunct(hyp: Tri, cond: Tri) -> Status {
    match (hyp, cond) {
        (Tri::False, _) => Status::Vacuous,
        (Tri::True, Tri::True) => Status::Holds,
        (Tri::True, Tri::False) => Status::NotRealized,
        _ => Status::Undecided,
    }
}

struct Ctx<'a> {
    eq: &'a Equation,
    f: &'a ExPoly,
    env: &'a ParamEnv,
    digits: u32,
}

impl Ctx<'_> {
    /// The value of `c` vanishes under the parameter assumptions.
    fn value_zero(&self, c: &ConstExpr) -> Tri {
        match c.zero_test(self.env, self.digits) {
            ZeroTest::Zero => Tri::True,
            ZeroTest::NonZero => Tri::False,
            ZeroTest::Undecided => Tri::Unknown,
        }
    }

    fn poly_value_zero(&self, p: &Poly) -> Tri {
        Tri::all(p.coeffs().iter().map(|c| self.value_zero(c)))
    }

    fn all_a_zero(&self) -> Tri {
        Tri::all(self.eq.a.iter().map(|a| self.value_zero(a)))
    }

    fn some_a_zero(&self) -> Tri {
        Tri::any(self.eq.a.iter().map(|a| self.value_zero(a)))
    }

    fn p_zero(&self) -> Tri {
        self.poly_value_zero(&self.eq.p)
    }
}

/// Identity of functions, for all parameter values.
fn identity(e: Result<ExPoly>) -> Tri {
    match e {
        Err(_) => Tri::Unknown,
        Ok(e) => match e.zero_test() {
            ZeroTest::Zero => Tri::True,
            ZeroTest::NonZero => Tri::False,
            ZeroTest::Undecided => Tri::Unknown,
        },
    }
}

fn all_equal(cs: &[ConstExpr]) -> Tri {
    let Some(first) = cs.first() else { return Tri::True };
    Tri::all(cs.iter().map(|c| match c.same_value(first) {
        Ok(b) => Tri::of(b),
        Err(_) => Tri::Unknown,
    }))
}

/// Evaluates every clause on a verified solution `f` of `eq`.
pub fn check_theorem(eq: &Equation, f: &ExPoly, env: &ParamEnv, digits: u32) -> Result<ClauseReport> {
    let r = eq.residual(f)?;
    match r.zero_test() {
        ZeroTest::Zero => {}
        ZeroTest::NonZero => return Err(Error::Invalid(format!("not a solution: residual {r}"))),
        ZeroTest::Undecided => return Err(Error::Undecided(format!("residual {r} may vanish"))),
    }
    let lf = eq.l.apply(f)?;
    if lf.is_zero() {
        let clauses = ClauseReport::NAMES
            .iter()
            .map(|&name| ClauseResult {
                name,
                status: Status::Vacuous,
                detail: "L(z,f) vanishes identically".into(),
            })
            .collect();
        return Ok(ClauseReport { clauses });
    }
    let cx = Ctx { eq, f, env, digits };
    let growth = indicators(f, digits)?;
    let view = f.normalized_view()?;
    let class = classify(f);
    let deg_q = eq.big_q.degree().unwrap_or(0);
    let mut out = Vec::new();
    let mut push = |name: &'static str, status: Status, detail: String| out.push(ClauseResult { name, status, detail });

    // (i)
    let concl = Tri::of(growth.rho == deg_q).and(Tri::of(growth.mean_type));
    push(
        "(i)",
        implication(Tri::True, concl),
        format!("rho = {}, deg Q = {deg_q}, mean type: {}", growth.rho, growth.mean_type),
    );

    let borel = Tri::of(growth.lambda < growth.rho);
    let all_a = cx.all_a_zero();
    let some_a = cx.some_a_zero();
    let p_zero = cx.p_zero();

    // (ii)
    push(
        "(ii)->",
        implication(borel, all_a.and(p_zero)),
        format!(
            "lambda = {}, rho = {}; all a_i = 0: {}, P = 0: {}",
            growth.lambda,
            growth.rho,
            all_a.word(),
            p_zero.word()
        ),
    );
    let conv = p_zero.and(some_a);
    let branch_a = all_a.and(borel);
    let branch_b = Tri::of(growth.lambda == growth.rho);
    let status = match conv {
        Tri::True => implication(Tri::True, branch_a),
        Tri::False => implication(Tri::True, branch_b),
        Tri::Unknown => implication(Tri::Unknown, branch_a.and(branch_b)),
    };
    push(
        "(ii)<-",
        status,
        format!(
            "P = 0 and some a_i = 0: {}; lambda = {}, rho = {}",
            conv.word(),
            growth.lambda,
            growth.rho
        ),
    );

    // (iii)
    let in_g0p = Tri::of(class.is_member(ClassTag::Gamma0P));
    push(
        "(iii)->",
        implication(in_g0p, all_a.and(p_zero)),
        format!(
            "class {}; all a_i = 0: {}, P = 0: {}",
            class.tag,
            all_a.word(),
            p_zero.word()
        ),
    );
    let shifts = eq.l.other_shifts().map(|s| all_equal(&s)).unwrap_or(Tri::Unknown);
    let lambda_drop = Tri::of(growth.rho >= 1 && growth.lambda + 1 == growth.rho);
    push(
        "(iii)<-",
        implication(conv, in_g0p.or(shifts.and(lambda_drop))),
        format!(
            "class {}; equal shifts: {}, lambda = rho - 1: {}",
            class.tag,
            shifts.word(),
            lambda_drop.word()
        ),
    );

    // (iv)
    push_iv(&cx, &class, p_zero, all_a, some_a, &mut push);

    // (v)
    let a1_nonzero = if eq.n == 2 {
        cx.value_zero(eq.a(1)).not()
    } else {
        Tri::False
    };
    let base = Tri::of(eq.n == 2).and(a1_nonzero);
    let m = view.m();
    let hyp_a = base.and(Tri::of(m >= 2));
    let relation = match has_double_relation(&view.omegas()) {
        Ok(r) => Tri::of(r.is_some()),
        Err(_) => Tri::Unknown,
    };
    push(
        "(v)(a)",
        implication(hyp_a, relation.and(Tri::of(class.is_member(ClassTag::Gamma2P)))),
        format!("m = {m}; omega_i = 2 omega_j: {}; class {}", relation.word(), class.tag),
    );

    let hyp_b = base.and(Tri::of(m == 1));
    let (s1, s2, s3) = if hyp_b == Tri::False {
        (Tri::False, Tri::False, Tri::False)
    } else {
        subcases(&cx, &growth)?
    };
    let concl = Tri::of(class.is_member(ClassTag::Gamma1P)).and(s1.or(s2).or(s3));
    push(
        "(v)(b)",
        implication(hyp_b, concl),
        format!(
            "m = {m}; class {}; (I) {}, (II) {}, (III) {}",
            class.tag,
            s1.word(),
            s2.word(),
            s3.word()
        ),
    );
    push(
        "(v)(b)(I)",
        disjunct(hyp_b, s1),
        format!("t = {}, rho = {}, deg Q = {deg_q}", view.t, growth.rho),
    );
    push("(v)(b)(II)", disjunct(hyp_b, s2), String::new());
    push("(v)(b)(III)", disjunct(hyp_b, s3), String::new());
    Ok(ClauseReport { clauses: out })
}

fn push_iv(
    cx: &Ctx<'_>,
    class: &super::SolutionClass,
    p_zero: Tri,
    all_a: Tri,
    some_a: Tri,
    push: &mut impl FnMut(&'static str, Status, String),
) {
    let eq = cx.eq;
    let pp = eq.p_polynomial();
    let cards = if eq.n >= 3 {
        pp.multiple_zero_cardinality().ok()
    } else {
        None
    };
    let (card2, card3) = match cards {
        Some((c2, c3)) => (Tri::of(c2 >= 2), Tri::of(c3 >= 1)),
        None => (Tri::Unknown, Tri::Unknown),
    };
    let hyp = Tri::of(eq.n >= 3).and(some_a).and(card3.or(card2));
    let concl = p_zero
        .and(all_a)
        .and(Tri::of(class.is_member(ClassTag::Gamma0P)))
        .and(card2.not());
    let detail = match cards {
        Some((c2, c3)) => format!("p(z) = {pp}; card2 = {c2}, card3 = {c3}"),
        None if eq.n < 3 => format!("n = {}", eq.n),
        None => format!("p(z) = {pp}; cardinalities undecided"),
    };
    push("(iv)", implication(hyp, concl), detail);
}

/// Truth of the three alternatives of clause (v)(b).
fn subcases(cx: &Ctx<'_>, growth: &GrowthReport) -> Result<(Tri, Tri, Tri)> {
    let eq = cx.eq;
    let view = cx.f.normalized_view()?;
    let (_, h1) = &view.groups[0];
    let (w1, _) = &view.groups[0];
    let s1 = Tri::of(
        view.t == 1 && growth.rho == 1 && view.h0.is_polynomial() && h1.is_polynomial() && eq.big_q.degree() == Some(1),
    );

    let a1 = eq.a(1);
    let half_a1 = a1 * &ConstExpr::rational(-1, 2);
    let h0_ok = identity(view.h0.sub(&ExPoly::constant(half_a1.clone())));
    let p_ok = identity(Ok(ExPoly::from_poly(
        eq.p.sub(&Poly::constant(&(a1 * a1) * &ConstExpr::rational(-1, 4))),
    )));
    let (_, _, q_rest) = eq.big_q.split_leading()?;
    let e_rest = ExPoly::term(eq.q.clone(), q_rest)?;
    let h1_sq = h1.pow(2)?;
    let b0 = eq.l.b0()?;
    let lf = eq.l.apply(cx.f)?;

    let s2 = {
        let k = &(&b0 * a1) * &ConstExpr::rational(1, 2);
        let sq = identity(h1_sq.sub(&e_rest.scale(&k)));
        let lf_ok = identity(lf.sub(&ExPoly::constant(&b0 * &half_a1)));
        h0_ok.and(p_ok).and(sq).and(lf_ok)
    };

    let s3 = {
        let (_, ah) = compute_coefficient_functions(&eq.l, &view)?;
        let a_1 = &ah[0];
        let sq = identity(e_rest.mul(a_1).and_then(|rhs| h1_sq.add(&rhs)));
        let lead = ExPoly::exp_of(Poly::monomial(w1.clone(), view.t))?;
        let lf_ok = identity(a_1.mul(&lead).and_then(|rhs| lf.sub(&rhs)));
        h0_ok.and(p_ok).and(sq).and(lf_ok)
    };
    Ok((s1, s2, s3))
}
