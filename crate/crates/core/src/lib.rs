//! Exact tests for linear independence of powers of polynomials.
//!
//! For `k >= 2` nonzero, pairwise linearly independent polynomials over a
//! field of characteristic zero, the powers `p_1^r, ..., p_k^r` are linearly
//! independent for every `r > max(k * C(k-1, 2), 2)`. This crate decides
//! independence exactly over the rationals, checks that bound on sampled
//! families, evaluates the generalized Mason inequality, and projects
//! multivariate dependences to univariate ones.

pub mod cli;
pub mod independence;
pub mod linalg;
pub mod mason;
pub mod oracle;
pub mod poly;
pub mod projection;

pub use independence::{IndependenceVerdict, PowerFamily};
pub use linalg::DependencyCertificate;
pub use poly::{MultiPoly, Rational, UniPoly};
