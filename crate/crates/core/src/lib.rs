//! Zero-localization certificates for derivatives of complex polynomials.
//!
//! If `k` pairwise distinct zeros of a degree-`n` polynomial `p` lie in the
//! closed unit disc, a weighted sum of `(z - z_i)^n` is weakly apolar to `p`
//! and its zeros sit inside `|z| <= 2 (n - k + 1) / ln 2`; Grace's theorem
//! then puts a zero of `p^(k-1)` in the same disc. This crate builds that
//! witness, checks every step numerically and locates the zero.

// `!(x <= tol)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apolarity;
pub mod bounds;
pub mod cli;
pub mod construction;
pub mod error;
pub mod poly;
pub mod roots;
pub mod sweep;
pub mod verifier;

pub use error::{Error, Result};
pub use poly::{Complex, Disc, Poly};

/// Version tag embedded in every JSON document the CLI emits.
pub const SCHEMA_VERSION: &str = "kakeya-cert/1";
