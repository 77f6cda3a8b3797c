//! Exact arithmetic for probability in lambda-rings: big Witt vectors,
//! symmetric-function series with plethysm, admissible Z-sets, motivic Euler
//! products, closed-form moment generating functions of arithmetic families,
//! and a finite-field enumeration harness to test them against.

pub mod cfun;
pub mod error;
pub mod ffenum;
pub mod mep;
pub mod partition;
pub mod scalar;
pub mod selftest;
pub mod symfun;
pub mod witt;
pub mod zset;

pub use error::{Error, Result};
pub use partition::Partition;
pub use scalar::{Scalar, Tower};
pub use symfun::{Basis, ScalarSeries, Sym, SymSeries};
pub use witt::WittVec;
pub use zset::{ZMap, ZSet};
