//! Exact q-series arithmetic and certified congruence checks for broken
//! k-diamond partitions.
//!
//! - [`series`]: truncated power series over arbitrary-precision integers
//! - [`eta`]: eta quotients and their expansion
//! - [`theta`]: Ramanujan theta functions, `psi`, Jacobi's cube series
//! - [`dissect`]: residue-class dissection and progression extraction
//! - [`finite_check`]: finite-check engine and certificates
//! - [`pipelines`]: theorem reproductions and regression congruences

pub mod dissect;
pub mod eta;
pub mod finite_check;
pub mod pipelines;
pub mod series;
pub mod theta;

pub use eta::{eta_factor, expand_eta_quotient, EtaQuotientSpec};
pub use series::{SeriesError, TruncatedSeries};
