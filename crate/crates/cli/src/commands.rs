//! Command dispatch and exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use expoly::classifier::{check_theorem, classify, Status};
use expoly::growth::indicators;
use expoly::hullgeom::{convex_hull, FrequencySet};
use expoly::{Error, ExPoly};
use serde::Serialize;

use crate::casefile::CaseFile;
use crate::lower::{lower_const, lower_expoly, Scope};
use crate::report::{clause_records, CaseRecord, ClassRecord, CorpusRecord, GrowthRecord, HullRecord, VerifyRecord};
use crate::syntax::{parse_expr, parse_list, ParseError, Pos};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// Case files shipped with the binary, sorted by name.
pub const BUNDLED: [(&str, &str); 11] = [
    ("ex1_1.case", include_str!("../corpus/ex1_1.case")),
    ("ex1_2.case", include_str!("../corpus/ex1_2.case")),
    ("ex1_3.case", include_str!("../corpus/ex1_3.case")),
    ("ex1_4.case", include_str!("../corpus/ex1_4.case")),
    ("ex1_5.case", include_str!("../corpus/ex1_5.case")),
    ("ex1_6.case", include_str!("../corpus/ex1_6.case")),
    ("ex1_6b.case", include_str!("../corpus/ex1_6b.case")),
    ("ex1_7.case", include_str!("../corpus/ex1_7.case")),
    ("ex1_7b.case", include_str!("../corpus/ex1_7b.case")),
    ("ex1_8.case", include_str!("../corpus/ex1_8.case")),
    ("ex1_9.case", include_str!("../corpus/ex1_9.case")),
];

#[derive(Parser, Debug)]
#[command(
    name = "expoly",
    version,
    about = "Exact verification of exponential polynomial solutions"
)]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = expoly::constfield::DEFAULT_DIGITS)]
    pub precision: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that the residual vanishes identically.
    Verify { file: PathBuf },
    /// Structural class of the solution.
    Classify(Target),
    /// Evaluate every clause of the theorem.
    Theorem { file: PathBuf },
    /// Convex hull of a point list such as "0,1,i".
    Hull {
        points: String,
        /// Treat the points as frequencies and add their conjugates.
        #[arg(long)]
        frequencies: bool,
        /// Include the origin.
        #[arg(long)]
        with_zero: bool,
    },
    /// Order, exponent of convergence and leading growth terms.
    Growth(Target),
    /// Run every case file in a directory, or the bundled corpus.
    Corpus { dir: Option<PathBuf> },
}

#[derive(clap::Args, Debug)]
pub struct Target {
    /// A case file.
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    /// An expression in z instead of a case file.
    #[arg(short, long)]
    pub expr: Option<String>,
}

/// Failure carrying its exit code.
struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn parse(source: &str, e: ParseError) -> Fail {
        Fail {
            code: EXIT_PARSE,
            msg: format!("{source}: syntax error at {e}"),
        }
    }

    fn usage(msg: impl Into<String>) -> Fail {
        Fail {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if matches!(e, Error::Undecided(_)) {
            EXIT_UNDECIDED
        } else {
            EXIT_USAGE
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

type CResult = Result<i32, Fail>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, out: &mut dyn Write, record: &T, text: &str) -> Result<(), Fail> {
    let s = if cli.json {
        serde_json::to_string_pretty(record).map_err(|e| Fail::usage(e.to_string()))?
    } else {
        text.trim_end().to_string()
    };
    writeln!(out, "{s}").map_err(|e| Fail::usage(e.to_string()))
}

fn read_case(path: &Path) -> Result<CaseFile, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    CaseFile::parse(&text).map_err(|e| Fail::parse(&path.display().to_string(), e))
}

fn target_function(t: &Target) -> Result<ExPoly, Fail> {
    match (&t.file, &t.expr) {
        (_, Some(e)) => parse_expr(e, Pos { line: 1, col: 1 })
            .and_then(|x| lower_expoly(&x, &Scope::new()))
            .map_err(|err| Fail::parse("expression", err)),
        (Some(p), None) => Ok(read_case(p)?.f),
        (None, None) => Err(Fail::usage("expected a case file or --expr")),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CResult {
    let digits = cli.precision.max(1);
    match &cli.command {
        Command::Verify { file } => {
            let case = read_case(file)?;
            let r = case.eq.residual(&case.f)?;
            let rec = verify_record(&r);
            let text = match &rec.witness {
                None => "residual = 0".to_string(),
                Some(w) => format!("residual = {}\nwitness term: {w}", rec.residual),
            };
            emit(cli, out, &rec, &text)?;
            Ok(if rec.residual_zero { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Classify(t) => {
            let f = target_function(t)?;
            let c = classify(&f);
            emit(cli, out, &ClassRecord::of(&c), &format!("class = {}\n{c}", c.tag))?;
            Ok(EXIT_OK)
        }
        Command::Theorem { file } => {
            let case = read_case(file)?;
            let r = case.eq.residual(&case.f)?;
            if !r.is_zero() {
                return Err(Fail {
                    code: EXIT_MISMATCH,
                    msg: format!("not a solution: residual = {r}"),
                });
            }
            let rep = check_theorem(&case.eq, &case.f, &case.env(), digits)?;
            emit(cli, out, &clause_records(&rep), &rep.to_string())?;
            let statuses: Vec<Status> = rep.clauses.iter().map(|c| c.status).collect();
            Ok(if statuses.contains(&Status::Counterexample) {
                EXIT_MISMATCH
            } else if statuses.contains(&Status::Undecided) {
                EXIT_UNDECIDED
            } else {
                EXIT_OK
            })
        }
        Command::Hull {
            points,
            frequencies,
            with_zero,
        } => {
            let exprs = parse_list(points, Pos { line: 1, col: 1 }).map_err(|e| Fail::parse("points", e))?;
            let scope = Scope::new();
            let pts = exprs
                .iter()
                .map(|e| lower_const(e, &scope))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Fail::parse("points", e))?;
            let set = if *frequencies {
                FrequencySet::from_frequencies(&pts, *with_zero)?
            } else {
                FrequencySet::from_points(pts, *with_zero)?
            };
            let h = convex_hull(&set, digits)?;
            let rec = HullRecord::of(&h);
            let head = match &rec.exact {
                Some(c) => format!("{}, C = {c}", rec.kind),
                None => format!("{}, C ~ {}", rec.kind, h.circumference.mid_decimal(20)),
            };
            let text = format!(
                "{head}\nvertices: {}\nC in [{}, {}]",
                rec.vertices.join(", "),
                rec.circumference.lower,
                rec.circumference.upper
            );
            emit(cli, out, &rec, &text)?;
            Ok(EXIT_OK)
        }
        Command::Growth(t) => {
            let f = target_function(t)?;
            if f.is_zero() {
                return Err(Fail::usage("growth of the zero function"));
            }
            let g = indicators(&f, digits)?;
            emit(cli, out, &GrowthRecord::of(&g), &g.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Corpus { dir } => {
            let files = match dir {
                None => BUNDLED
                    .iter()
                    .map(|(n, t)| (n.to_string(), Ok(t.to_string())))
                    .collect(),
                Some(d) => read_dir(d)?,
            };
            let (rec, code) = run_corpus(&files, digits);
            let mut text = String::new();
            for c in &rec.cases {
                let verdict = if c.ok { "ok".to_string() } else { "FAIL".to_string() };
                text.push_str(&format!("{}: {verdict} ({} ms)\n", c.file, c.millis));
                for m in &c.mismatches {
                    text.push_str(&format!("  mismatch: {m}\n"));
                }
                if let Some(e) = &c.error {
                    text.push_str(&format!("  error: {e}\n"));
                }
            }
            text.push_str(&format!("{} passed, {} failed", rec.passed, rec.failed));
            emit(cli, out, &rec, &text)?;
            Ok(code)
        }
    }
}

fn verify_record(r: &ExPoly) -> VerifyRecord {
    let witness = r
        .terms()
        .last()
        .map(|t| ExPoly::term(t.coeff.clone(), t.exponent.clone()).map_or_else(|_| r.to_string(), |w| w.to_string()));
    VerifyRecord {
        residual_zero: r.is_zero(),
        residual: r.to_string(),
        witness,
    }
}

type Source = (String, Result<String, String>);

fn read_dir(dir: &Path) -> Result<Vec<Source>, Fail> {
    let entries = std::fs::read_dir(dir).map_err(|e| Fail::usage(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "case"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            (name, std::fs::read_to_string(&p).map_err(|e| e.to_string()))
        })
        .collect())
}

enum Outcome {
    Pass,
    Mismatch(Vec<String>),
    Undecided(String),
    Parse(String),
    Failed(String),
}

/// Runs every case in parallel; the record keeps the input order.
pub fn run_corpus(files: &[Source], digits: u32) -> (CorpusRecord, i32) {
    let results: Vec<(Outcome, u128)> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|(name, text)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let o = match text {
                        Ok(t) => check_case(name, t, digits),
                        Err(e) => Outcome::Failed(e.clone()),
                    };
                    (o, start.elapsed().as_millis())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| (Outcome::Failed("internal panic".into()), 0))
            })
            .collect()
    });
    let mut code = EXIT_OK;
    let mut cases = Vec::new();
    for ((name, _), (o, millis)) in files.iter().zip(results) {
        let (mismatches, error, c) = match o {
            Outcome::Pass => (Vec::new(), None, EXIT_OK),
            Outcome::Mismatch(ms) => (ms, None, EXIT_MISMATCH),
            Outcome::Undecided(e) => (Vec::new(), Some(e), EXIT_UNDECIDED),
            Outcome::Parse(e) => (Vec::new(), Some(e), EXIT_PARSE),
            Outcome::Failed(e) => (Vec::new(), Some(e), EXIT_USAGE),
        };
        code = merge_codes(code, c);
        cases.push(CaseRecord {
            file: name.clone(),
            ok: c == EXIT_OK,
            mismatches,
            error,
            millis,
        });
    }
    let passed = cases.iter().filter(|c| c.ok).count();
    let failed = cases.len() - passed;
    (CorpusRecord { cases, passed, failed }, code)
}

fn merge_codes(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        EXIT_PARSE => 4,
        EXIT_MISMATCH => 3,
        EXIT_USAGE => 2,
        EXIT_UNDECIDED => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn check_case(name: &str, text: &str, digits: u32) -> Outcome {
    let case = match CaseFile::parse(text) {
        Ok(c) => c,
        Err(e) => return Outcome::Parse(format!("{name}: syntax error at {e}")),
    };
    match compare(&case, digits) {
        Ok(ms) if ms.is_empty() => Outcome::Pass,
        Ok(ms) => Outcome::Mismatch(ms),
        Err(Error::Undecided(e)) => Outcome::Undecided(e),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

fn compare(case: &CaseFile, digits: u32) -> expoly::Result<Vec<String>> {
    let x = &case.expect;
    let mut ms = Vec::new();
    let residual = case.eq.residual(&case.f)?;
    let zero = residual.is_zero();
    if let Some(want) = x.residual_zero {
        if want != zero {
            ms.push(format!(
                "residual expected {}, got {residual}",
                if want { "zero" } else { "non-zero" }
            ));
        }
    }
    if let Some(tag) = x.class {
        let got = classify(&case.f).tag;
        if got != tag {
            ms.push(format!("class expected {tag}, got {got}"));
        }
    }
    if x.rho.is_some() || x.lambda.is_some() {
        let g = indicators(&case.f, digits)?;
        if x.rho.is_some_and(|r| r != g.rho) {
            ms.push(format!("rho expected {}, got {}", x.rho.unwrap_or_default(), g.rho));
        }
        if x.lambda.is_some_and(|l| l != g.lambda) {
            ms.push(format!(
                "lambda expected {}, got {}",
                x.lambda.unwrap_or_default(),
                g.lambda
            ));
        }
    }
    if !x.clauses.is_empty() {
        if !zero {
            ms.push("clauses not checked: residual is non-zero".to_string());
        } else {
            let rep = check_theorem(&case.eq, &case.f, &case.env(), digits)?;
            for (name, want) in &x.clauses {
                match rep.status(name) {
                    Some(got) if got == *want => {}
                    got => ms.push(format!(
                        "clause {name} expected {want}, got {}",
                        got.map_or("none", |s| s.name())
                    )),
                }
            }
        }
    }
    Ok(ms)
}
