//! Additive complements built from mixed-radix bases.
//!
//! A base `b_1, b_2, ...` (all `>= 2`) fixes place values `a_j = b_1 ... b_j`.
//! Numbers whose odd-index digits vanish form `A`; those whose even-index
//! digits vanish form `B`. Every non-negative integer is `a + b` in exactly
//! one way. The crate counts both sets exactly, tracks `A(x)B(x)/x`, and
//! checks the closed forms for that ratio against brute force.

pub mod complement;
pub mod constructions;
pub mod dk;
pub mod error;
pub mod mixed_radix;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod verify;

pub use complement::{ComplementPair, Side};
pub use dk::{dk, dk_star, ratio_scan, RatioRecord, ScanSummary};
pub use error::{Error, Result};
pub use mixed_radix::{decode, encode, BaseSequence, BaseSpec, DigitVector};
pub use rational::ExactRational;
pub use report::VerificationReport;
