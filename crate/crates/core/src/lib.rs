//! Exact symbolic engine for deformation calculus on polynomial algebras
//! over Q.
//!
//! The engine works with four layers of data, all exact over the rationals:
//!
//! * [`poly`] - sparse multivariate polynomials, the function algebra;
//! * [`multivector`] - polyvector fields with wedge, Schouten bracket and
//!   the Lichnerowicz differential `d_pi = [pi, .]`;
//! * [`hochschild`] - polydifferential operators (local Hochschild
//!   cochains) with the differential, cup product, insertion compositions
//!   and the Gerstenhaber bracket, plus the HKR (anti)symmetrization maps;
//! * [`star`] and [`lifting`] - truncated star products with
//!   order-by-order associativity checks, and the extension of Poisson
//!   vector fields and Lie-algebra actions to derivations of the deformed
//!   algebra, reporting explicit obstruction classes when a step fails.
//!
//! Every cohomological verdict is produced by exact sparse linear algebra
//! ([`linalg`]) over a finite, explicitly bounded ansatz; verdict types
//! carry the bounds they were decided at.

pub mod exec;
pub mod hochschild;
pub mod liealg;
pub mod lifting;
pub mod linalg;
pub mod multivector;
pub mod poly;
pub mod rat;
pub mod star;
pub mod testkit;

pub use hochschild::{AnsatzBounds, PolyDiffOp};
pub use liealg::{Action, CECochain, CEShape, CEValue, LieAlgebra};
pub use lifting::{ActionSeries, DerivationSeries, ObstructionReport};
pub use linalg::{LinearProblem, LinearSolution};
pub use multivector::{PoissonStructure, PolyVectorField};
pub use poly::{MultiIndex, Polynomial};
pub use rat::Rat;
pub use star::{FormalFunction, MCDefectReport, StarProduct};
