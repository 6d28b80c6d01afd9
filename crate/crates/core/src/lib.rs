//! Moran-type fractal sets on `[0, 1]`.
//!
//! A set is described by digit rules `(N_j, B_j)`: at level `j` every interval is
//! split into `N_j` equal pieces and the pieces at positions `B_j` are kept. The
//! crate builds the level approximations exactly, evaluates the Fourier
//! transform of the equal-weight Moran measure with certified error bars,
//! estimates Hausdorff dimension over finite windows, finds arithmetic
//! progressions, and emits checkable certificates for Fourier non-decay.

pub mod cli;
pub mod dimension;
pub mod error;
pub mod generator;
pub mod geometry;
pub mod measure;
pub mod numeric;
pub mod progressions;
mod report;
pub mod rules;
pub mod sequences;
pub mod specfile;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use numeric::{Precision, Rational};
pub use rules::{CountRule, DigitRule, DigitSet, SequenceRule, SetTail};
pub use sequences::{CBound, DigitSystem, GrowthDiagnostic, Level, SystemOptions};
