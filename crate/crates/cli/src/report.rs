//! Serializable report records.

use expoly::classifier::{ClauseReport, SolutionClass};
use expoly::constfield::Ball;
use expoly::growth::GrowthReport;
use expoly::hullgeom::HullResult;
use serde::Serialize;

const DECIMALS: usize = 30;

#[derive(Clone, Debug, Serialize)]
pub struct Interval {
    pub lower: String,
    pub upper: String,
}

impl Interval {
    pub fn of(b: &Ball) -> Self {
        let s = format!("{:.*}", DECIMALS, b);
        let (lo, hi) = s
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split_once(", ")
            .expect("ball format");
        Interval {
            lower: lo.to_string(),
            upper: hi.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRecord {
    pub residual_zero: bool,
    pub residual: String,
    /// Highest term of a non-zero residual.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub tag: String,
    pub ancestry: Vec<String>,
    pub witnesses: Vec<(String, String)>,
    pub poly_part: String,
}

impl ClassRecord {
    pub fn of(c: &SolutionClass) -> Self {
        ClassRecord {
            tag: c.tag.name().to_string(),
            ancestry: c.tag.ancestry().iter().map(|t| t.name().to_string()).collect(),
            witnesses: c
                .witnesses
                .iter()
                .map(|(p, a)| (p.to_string(), a.to_string()))
                .collect(),
            poly_part: c.poly_part.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseRecord {
    pub name: String,
    pub status: String,
    pub diagnostics: String,
}

pub fn clause_records(r: &ClauseReport) -> Vec<ClauseRecord> {
    r.clauses
        .iter()
        .map(|c| ClauseRecord {
            name: c.name.to_string(),
            status: c.status.name().to_string(),
            diagnostics: c.detail.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRecord {
    pub rho: usize,
    pub lambda: usize,
    pub t_leading: Interval,
    pub n_leading: Option<Interval>,
    pub mean_type: bool,
    pub t_circumference: Option<String>,
    pub n_circumference: Option<String>,
}

impl GrowthRecord {
    pub fn of(g: &GrowthReport) -> Self {
        GrowthRecord {
            rho: g.rho,
            lambda: g.lambda,
            t_leading: Interval::of(&g.t_leading),
            n_leading: g.n_leading.as_ref().map(Interval::of),
            mean_type: g.mean_type,
            t_circumference: g.t_circumference.as_ref().map(|s| s.to_string()),
            n_circumference: g.n_circumference.as_ref().map(|s| s.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HullRecord {
    pub kind: String,
    pub vertices: Vec<String>,
    pub circumference: Interval,
    pub exact: Option<String>,
}

impl HullRecord {
    pub fn of(h: &HullResult) -> Self {
        HullRecord {
            kind: h.kind.to_string(),
            vertices: h.vertices.iter().map(|v| v.to_string()).collect(),
            circumference: Interval::of(&h.circumference),
            exact: h.exact.as_ref().map(|s| s.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub file: String,
    pub ok: bool,
    pub mismatches: Vec<String>,
    pub error: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusRecord {
    pub cases: Vec<CaseRecord>,
    pub passed: usize,
    pub failed: usize,
}
