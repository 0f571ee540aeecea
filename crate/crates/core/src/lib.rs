//! Representation zeta functions of finite groups and congruence quotients.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod groupcore;
pub mod localzeta;
pub mod liering;
pub mod numtheory;
pub mod orbit;
pub mod rational;
pub mod suites;

pub use error::{Error, Result};
