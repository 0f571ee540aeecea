//! Dirichlet polynomials, local-factor normal forms, equivalence of series
//! and abscissae of convergence of Euler products.

mod empirical;
mod equivalence;
mod local;
mod poly;

pub use empirical::{empirical_abscissa, log_truncated_product, AbscissaEstimate, BisectionConfig};
pub use equivalence::{
    check_equivalence, equiv_products_same_abscissa, EquivalenceReport, EquivalenceWitness,
    ProductAbscissaReport, SeriesEval,
};
pub use local::{
    archimedean_abscissa, euler_abscissa, jaikin_eval, monomial_family_abscissa, ArchimedeanSpec,
    EulerProductSpec, JaikinLocalFactor, JaikinTerm, LocalPart, MonomialLocalFamily, MonomialTerm,
    RootSystem,
};
pub use poly::{abscissa_from_counts, eval_dirichlet, DirichletPoly};
