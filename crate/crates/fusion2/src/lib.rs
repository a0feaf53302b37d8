//! Exact-arithmetic models of rank-two semisimple tensor categories.
//!
//! The crate builds the matrix model of a rank-two tensor category from a
//! fusion rule `r2^2 = m·1 + n·r2`, checks the pentagon constraint in three
//! independent formulations, classifies associators case by case over exact
//! fields, and tests gauge equivalence of solutions.

pub mod blockmat;
pub mod category;
pub mod fusion;
pub mod gauge;
pub mod pentagon;
pub mod scalar;
pub mod solver;
pub mod testkit;

pub use blockmat::{PlainMatrix, Shape, TypedMatrix};
pub use fusion::FusionRule;
pub use pentagon::{Associator, AssociatorData};
pub use scalar::{FieldSpec, Scalar};
