//! Nilpotent Lie rings over `Z/p^k`, exp and log, Campbell-Hausdorff and the
//! Lazard correspondence.

pub mod bch;
pub mod fuzz;
pub mod matrix;
pub mod ring;

pub use fuzz::{bch_fuzz, exp_log_fuzz, FuzzReport};
pub use bch::{bch, bch_series, CompiledSeries, LieOps, LieSeries};
pub use matrix::{exp_nilpotent, exp_truncated, log_truncated, log_unipotent, nori_lie, ModMatrix, NoriLie, NORI_CAP};
pub use ring::{group_from_liering, LazardLaw, NilpotentLieRing};
