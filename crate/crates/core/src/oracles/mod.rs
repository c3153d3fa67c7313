//! Independent ground truth for the coefficient engines, and the identity
//! suites that cross-check every layer of the crate.

pub mod fock;
pub mod jack_poly;
pub mod rates;
pub mod suites;

pub use fock::{fock_moment, gram_schmidt_genbin, InvariantPoly};
pub use jack_poly::{jack_polynomial, binomial_formula_oracle, SymPoly};
pub use suites::{check_identity, Instance, Report, Suite};
