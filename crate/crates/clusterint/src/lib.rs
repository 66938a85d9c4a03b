//! Integrable systems extracted from log-canonical cluster coordinates on
//! Poisson varieties, computed with exact rational arithmetic.
//!
//! The crate covers generic Poisson machinery ([`poisson`]), type A Lie data
//! ([`typea`]), three families of examples ([`schubert`], [`bfz`], [`dualgl`])
//! and a seed-mutation engine ([`cluster`]).

#![allow(clippy::needless_range_loop)]

pub mod bfz;
pub mod cluster;
pub mod dualgl;
pub mod error;
pub mod exec;
pub mod poisson;
pub mod polyring;
pub mod probe;
pub mod report;
pub mod schubert;
pub mod typea;

pub use error::{Error, Result};
pub use exec::{Exec, Settings};
