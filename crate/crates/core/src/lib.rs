//! Exact workbench for the even-coupling Hermitian one-matrix model.
//!
//! Three independent pipelines compute the same invariants:
//!
//! * [`virasoro`]: connected correlators from the Virasoro constraints;
//! * [`npoint`]: the n-point functions `G_{g,n}` in the rational coordinate
//!   `y` of the spectral curve, built by the cut-and-join operator recursion;
//! * [`eo`]: Eynard-Orantin topological recursion on a rational spectral
//!   curve with one branch point.
//!
//! [`airy`] relates the output to intersection-number templates through the
//! local Airy coordinate, and [`report`] runs the verification suites.

pub mod airy;
pub mod deformation;
pub mod eo;
pub mod error;
pub mod exact;
mod memo;
pub mod npoint;
pub mod report;
pub mod virasoro;

pub use error::{Error, Result};
