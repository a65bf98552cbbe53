//! Exact full-cycle censuses in transitive permutation groups, block-chain
//! bounds, wreath-product coset experiments, and stable-prime scans for
//! iterated polynomial sequences over the rationals.

pub mod arith;
pub mod blocks;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod ffpoly;
pub mod group;
pub mod perm;
pub mod report;
pub mod schreier;
pub mod stability;
pub mod wreath;

pub use error::{Error, Result};
pub use group::{generate, Census, GroupSpec, PermGroup};
pub use perm::{CycleType, Permutation};
