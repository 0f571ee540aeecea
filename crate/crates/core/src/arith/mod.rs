//! Prime-indexed arithmetic: point counts, Lang-Weil fits, Artin sets,
//! congruence quotients and degree fits for finite reductive groups.

pub mod artin;
pub mod langweil;
pub mod points;
pub mod reductive;

pub use artin::{artin_density, artin_membership, ArtinFormula, ArtinSetSpec, DensityReport};
pub use langweil::{langweil_fit, langweil_fit_counts, LangWeilFit, Residual};
pub use points::{count_points, AffineVarietySpec, IntPoly, Monomial};
pub use reductive::{congruence_quotient, reductive_degree_fit, CongruenceQuotient, DegreeFamily, DegreeFitReport};
