//! Exact-arithmetic toolkit for β-expansions of algebraic numbers:
//! digit generation, digit-exchange statistics, algebraic classification
//! of the base (Pisot / Salem and their "quasi" relaxations), and a
//! certified instance-by-instance verification pipeline for an effective
//! lower bound on the number of digit exchanges.
//!
//! Everything on the certified path is exact: number-field arithmetic
//! over arbitrary-precision rationals, dyadic interval/ball enclosures
//! with directed rounding, and integer combinatorics. Floating point
//! appears only in non-certified seeding (root finding starts from an
//! `f64` iteration whose output is then certified exactly) and in
//! plot-oriented output columns that are marked as such.

pub mod ball;
pub mod classify;
pub mod dyadic;
pub mod embed;
pub mod error;
pub mod exchange;
pub mod expansion;
pub mod field;
pub mod config;
pub mod constants;
pub mod linforms;
pub mod report;
pub mod poly;
pub mod roots;

pub use ball::{ComplexBall, RealInterval};
pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
pub use field::{FieldElement, NumberField};
pub use poly::{IntPoly, Polynomial, RatPoly};
