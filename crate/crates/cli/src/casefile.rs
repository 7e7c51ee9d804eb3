//! Case files: a solution, an equation and the expected outcomes.
//!
//! ```text
//! # comment
//! [params]
//! a1 = nonzero
//! [function]
//! f = -param(a1)/2 + 2*exp(3*z)
//! [equation]
//! n = 2
//! a1 = param(a1)
//! q = 8/(3*param(a1))
//! Q = 6*z
//! P = -param(a1)^2/4
//! [operator]
//! L = 3*f(z) + f'(z + log(2)) - 3*f''(z + 2*pi*i)
//! [expect]
//! residual = zero
//! class = GAMMA1P
//! clause (v)(b)(II) = HOLDS
//! ```

use std::collections::BTreeMap;
use std::fmt;

use expoly::classifier::{ClassTag, ClauseReport, Equation, Status};
use expoly::{ConstExpr, DelayDiffOp, ExPoly, ParamEnv, Poly, Triple};

use crate::lower::{lower_const, lower_expoly, lower_operator, lower_poly, Scope};
use crate::syntax::{parse_expr, parse_list, ParseError, Pos};

const SECTIONS: [&str; 5] = ["params", "function", "equation", "operator", "expect"];
const RESERVED: [&str; 8] = ["z", "i", "pi", "f", "exp", "log", "param", "delta"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expect {
    /// `Some(true)` when the residual must vanish.
    pub residual_zero: Option<bool>,
    pub class: Option<ClassTag>,
    pub clauses: Vec<(String, Status)>,
    pub rho: Option<usize>,
    pub lambda: Option<usize>,
}

impl Expect {
    pub fn is_empty(&self) -> bool {
        *self == Expect::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFile {
    /// Parameter names with their non-zero flags, in declaration order.
    pub params: Vec<(String, bool)>,
    pub f: ExPoly,
    pub eq: Equation,
    pub expect: Expect,
}

impl CaseFile {
    pub fn env(&self) -> ParamEnv {
        let mut env = ParamEnv::new();
        for (name, nonzero) in &self.params {
            env.declare(name.clone(), *nonzero);
        }
        env
    }

    pub fn parse(text: &str) -> Result<CaseFile, ParseError> {
        let raw = split(text)?;
        build(&raw, end_pos(text))
    }
}

struct Entry {
    key: String,
    key_pos: Pos,
    value: String,
    value_pos: Pos,
}

struct Raw {
    sections: BTreeMap<&'static str, (Pos, Vec<Entry>)>,
}

fn end_pos(text: &str) -> Pos {
    Pos {
        line: text.lines().count().max(1),
        col: text.lines().last().map_or(0, |l| l.chars().count()) + 1,
    }
}

fn split(text: &str) -> Result<Raw, ParseError> {
    let mut sections: BTreeMap<&'static str, (Pos, Vec<Entry>)> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let chars: Vec<char> = line.chars().collect();
        let body_len = chars.iter().position(|&c| c == '#').unwrap_or(chars.len());
        let body: String = chars[..body_len].iter().collect();
        let lead = body.chars().take_while(|c| c.is_whitespace()).count();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let pos = Pos {
            line: line_no,
            col: lead + 1,
        };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(pos, "unterminated section header"))?
                .trim();
            let sec = SECTIONS
                .iter()
                .find(|s| **s == name)
                .ok_or_else(|| ParseError::new(pos, format!("unknown section '{name}'")))?;
            if sections.contains_key(sec) {
                return Err(ParseError::new(pos, format!("duplicate section '{name}'")));
            }
            sections.insert(sec, (pos, Vec::new()));
            current = Some(sec);
            continue;
        }
        let sec = current.ok_or_else(|| ParseError::new(pos, "entry outside a section"))?;
        let eq = body
            .find('=')
            .ok_or_else(|| ParseError::new(pos, "expected 'key = value'"))?;
        let key = body[..eq].trim().to_string();
        if key.is_empty() {
            return Err(ParseError::new(pos, "missing key"));
        }
        let value_col = body[..eq].chars().count() + 2;
        let entries = &mut sections.get_mut(sec).expect("section").1;
        if key != "triple" && entries.iter().any(|e| e.key == key) {
            return Err(ParseError::new(pos, format!("duplicate key '{key}'")));
        }
        entries.push(Entry {
            key,
            key_pos: pos,
            value: body[eq + 1..].to_string(),
            value_pos: Pos {
                line: line_no,
                col: value_col,
            },
        });
    }
    Ok(Raw { sections })
}

fn entries<'a>(raw: &'a Raw, sec: &str) -> &'a [Entry] {
    raw.sections.get(sec).map_or(&[], |(_, es)| es.as_slice())
}

fn find<'a>(raw: &'a Raw, sec: &str, key: &str) -> Option<&'a Entry> {
    entries(raw, sec).iter().find(|e| e.key == key)
}

fn require<'a>(raw: &'a Raw, sec: &str, key: &str, end: Pos) -> Result<&'a Entry, ParseError> {
    find(raw, sec, key).ok_or_else(|| {
        let pos = raw.sections.get(sec).map_or(end, |(p, _)| *p);
        ParseError::new(pos, format!("missing '{key}' in [{sec}]"))
    })
}

fn word(e: &Entry) -> &str {
    e.value.trim()
}

fn word_pos(e: &Entry) -> Pos {
    let lead = e.value.chars().take_while(|c| c.is_whitespace()).count();
    Pos {
        line: e.value_pos.line,
        col: e.value_pos.col + lead,
    }
}

fn small_int(e: &Entry) -> Result<usize, ParseError> {
    word(e)
        .parse::<usize>()
        .map_err(|_| ParseError::new(word_pos(e), "expected a non-negative integer"))
}

fn unknown(e: &Entry, sec: &str) -> ParseError {
    ParseError::new(e.key_pos, format!("unknown key '{}' in [{sec}]", e.key))
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn build(raw: &Raw, end: Pos) -> Result<CaseFile, ParseError> {
    let mut params = Vec::new();
    for e in entries(raw, "params") {
        if !is_ident(&e.key) || RESERVED.contains(&e.key.as_str()) {
            return Err(ParseError::new(
                e.key_pos,
                format!("invalid parameter name '{}'", e.key),
            ));
        }
        let nonzero = match word(e) {
            "nonzero" => true,
            "any" => false,
            _ => return Err(ParseError::new(word_pos(e), "expected 'nonzero' or 'any'")),
        };
        params.push((e.key.clone(), nonzero));
    }
    let scope = Scope::with_params(params.iter().map(|(n, _)| n.clone()));

    for e in entries(raw, "function") {
        if e.key != "f" {
            return Err(unknown(e, "function"));
        }
    }
    let fe = require(raw, "function", "f", end)?;
    let f = lower_expoly(&parse_expr(&fe.value, fe.value_pos)?, &scope)?;

    let ne = require(raw, "equation", "n", end)?;
    let n = small_int(ne)?;
    if !(2..=64).contains(&n) {
        return Err(ParseError::new(word_pos(ne), "n must lie in 2..=64"));
    }
    let mut a = vec![ConstExpr::zero(); n - 1];
    let (mut q, mut big_q, mut p) = (None, None, Poly::zero());
    for e in entries(raw, "equation") {
        let poly = || -> Result<Poly, ParseError> { lower_poly(&parse_expr(&e.value, e.value_pos)?, &scope) };
        match e.key.as_str() {
            "n" => {}
            "q" => q = Some(poly()?),
            "Q" => big_q = Some(poly()?),
            "P" => p = poly()?,
            k => {
                let idx = k
                    .strip_prefix('a')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|i| (1..n).contains(i) && k == format!("a{i}"))
                    .ok_or_else(|| unknown(e, "equation"))?;
                a[idx - 1] = lower_const(&parse_expr(&e.value, e.value_pos)?, &scope)?;
            }
        }
    }
    let eq_pos = raw.sections.get("equation").map_or(end, |(p, _)| *p);
    let q = q.ok_or_else(|| ParseError::new(eq_pos, "missing 'q' in [equation]"))?;
    let big_q = big_q.ok_or_else(|| ParseError::new(eq_pos, "missing 'Q' in [equation]"))?;

    let l = build_operator(raw, &scope, end)?;
    let eq = Equation::new(n as u32, a, q, big_q, p, l).map_err(|e| ParseError::new(eq_pos, e.to_string()))?;
    let expect = build_expect(raw)?;
    Ok(CaseFile { params, f, eq, expect })
}

fn build_operator(raw: &Raw, scope: &Scope, end: Pos) -> Result<DelayDiffOp, ParseError> {
    let es = entries(raw, "operator");
    let sec_pos = raw.sections.get("operator").map_or(end, |(p, _)| *p);
    if let Some(e) = es.iter().find(|e| e.key != "L" && e.key != "triple") {
        return Err(unknown(e, "operator"));
    }
    if let Some(le) = find(raw, "operator", "L") {
        if let Some(t) = es.iter().find(|e| e.key == "triple") {
            return Err(ParseError::new(
                t.key_pos,
                "'triple' entries cannot be combined with 'L'",
            ));
        }
        return lower_operator(&parse_expr(&le.value, le.value_pos)?, scope);
    }
    let mut triples = Vec::new();
    for e in es {
        let parts = parse_list(&e.value, e.value_pos)?;
        let [b, r, c] = parts.as_slice() else {
            return Err(ParseError::new(word_pos(e), "expected 'b, r, c'"));
        };
        let order = lower_const(r, scope)?
            .as_integer()
            .and_then(|k| u32::try_from(k).ok())
            .ok_or_else(|| ParseError::new(r.pos, "derivative order must be a non-negative integer"))?;
        triples.push(Triple::new(lower_const(b, scope)?, order, lower_const(c, scope)?));
    }
    if triples.is_empty() {
        return Err(ParseError::new(sec_pos, "missing 'L' in [operator]"));
    }
    DelayDiffOp::new(triples).map_err(|e| ParseError::new(sec_pos, e.to_string()))
}

fn build_expect(raw: &Raw) -> Result<Expect, ParseError> {
    let mut out = Expect::default();
    for e in entries(raw, "expect") {
        let w = word(e);
        let bad = |what: &str| ParseError::new(word_pos(e), format!("expected {what}"));
        match e.key.as_str() {
            "residual" => {
                out.residual_zero = Some(match w {
                    "zero" => true,
                    "nonzero" => false,
                    _ => return Err(bad("'zero' or 'nonzero'")),
                })
            }
            "class" => out.class = Some(ClassTag::from_name(w).ok_or_else(|| bad("a class tag"))?),
            "rho" => out.rho = Some(small_int(e)?),
            "lambda" => out.lambda = Some(small_int(e)?),
            k => {
                let name = k
                    .strip_prefix("clause")
                    .map(str::trim)
                    .filter(|n| ClauseReport::NAMES.contains(n))
                    .ok_or_else(|| unknown(e, "expect"))?;
                let status = Status::from_name(w).ok_or_else(|| bad("a clause status"))?;
                out.clauses.push((name.to_string(), status));
            }
        }
    }
    Ok(out)
}

impl fmt::Display for CaseFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.params.is_empty() {
            writeln!(f, "[params]")?;
            for (name, nonzero) in &self.params {
                writeln!(f, "{name} = {}", if *nonzero { "nonzero" } else { "any" })?;
            }
        }
        writeln!(f, "[function]")?;
        writeln!(f, "f = {}", self.f)?;
        writeln!(f, "[equation]")?;
        writeln!(f, "n = {}", self.eq.n)?;
        for (k, a) in self.eq.a.iter().enumerate() {
            writeln!(f, "a{} = {a}", k + 1)?;
        }
        writeln!(f, "q = {}", self.eq.q)?;
        writeln!(f, "Q = {}", self.eq.big_q)?;
        writeln!(f, "P = {}", self.eq.p)?;
        writeln!(f, "[operator]")?;
        writeln!(f, "L = {}", self.eq.l)?;
        let x = &self.expect;
        if !x.is_empty() {
            writeln!(f, "[expect]")?;
            if let Some(z) = x.residual_zero {
                writeln!(f, "residual = {}", if z { "zero" } else { "nonzero" })?;
            }
            if let Some(c) = x.class {
                writeln!(f, "class = {c}")?;
            }
            if let Some(r) = x.rho {
                writeln!(f, "rho = {r}")?;
            }
            if let Some(l) = x.lambda {
                writeln!(f, "lambda = {l}")?;
            }
            for (name, status) in &x.clauses {
                writeln!(f, "clause {name} = {status}")?;
            }
        }
        Ok(())
    }
}
