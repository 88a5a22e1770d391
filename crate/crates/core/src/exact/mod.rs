//! Exact arithmetic: rationals, the field `Q(s)` with `s^2 = t`, Laurent
//! polynomials in `t` and in several variables, rational functions and
//! truncated power series.

pub mod laurent;
pub mod paramrat;
pub mod rational;
pub(crate) mod render;
pub mod scalar;
pub mod series;
pub mod tpoly;

pub use laurent::LaurentMulti;
pub use paramrat::{LaurentSeries, ParamRational};
pub use rational::BigRational;
pub use scalar::{SPoly, Scalar};
pub use series::PowerSeries;
pub use tpoly::TPolynomial;
