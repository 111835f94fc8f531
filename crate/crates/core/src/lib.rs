//! Exact computer algebra for modules over the coordinate ring of the
//! 2-sphere that carry compatible actions of the functions and of the Lie
//! algebra of polynomial vector fields.
//!
//! Everything is computed over ℚ with arbitrary-precision rationals; there
//! is no floating point anywhere. The main pieces are
//!
//! * [`ring`] — canonical arithmetic in `A = Q[x,y,z]/(x^2+y^2+z^2-1)`,
//!   its localizations at coordinate monomials, chart partial derivatives,
//!   point evaluation and the vanishing-order valuation;
//! * [`vectorfields`] — the Lie algebra of polynomial vector fields on the
//!   sphere, generated by the three rotation fields;
//! * [`glmod`] — finite-dimensional gl2-modules `U_m^alpha`, tensor
//!   products, duals and Clebsch–Gordan projections;
//! * [`avmod`] — modules `A_(z) ⊗ U_m^alpha` with the vector-field action,
//!   degree filtration, the bounded-submodule generators `w_m`, and the
//!   realizations of 1-forms and vector fields inside them;
//! * [`closure`] — a finite certification engine that computes truncated
//!   submodule closures by exact linear algebra and reports boundedness or
//!   density evidence;
//! * [`transition`] — chart-transition matrices, their representation on
//!   `U_m^alpha`, and commuting-diagram checks;
//! * [`suites`] — seeded randomized axiom suites shared by the tests and
//!   the command-line interface.

pub mod avmod;
pub mod closure;
mod error;
pub mod glmod;
pub mod rational;
pub mod ring;
pub mod suites;
pub mod transition;
pub mod vectorfields;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
