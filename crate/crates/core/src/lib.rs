//! Exact arithmetic for exponential polynomials and delay-differential
//! operators, with growth invariants and equation classification.

pub mod classifier;
pub mod constfield;
pub mod delayop;
pub mod error;
pub mod expoly;
pub mod growth;
pub mod hullgeom;
pub mod poly;

pub use constfield::{Assignment, ConstExpr, Gauss, ParamEnv, ZeroTest};
pub use delayop::{DelayDiffOp, Triple};
pub use error::{Error, Result};
pub use expoly::{ExPoly, ExpTerm, NormalizedView};
pub use poly::Poly;
