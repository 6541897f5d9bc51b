//! Finite additive relations over commutative monoids.
//!
//! The crate covers the relation model ([`Relation`], [`Monoid`]), the
//! operation algebra ([`ops`]) with an executable law suite ([`laws`]),
//! decomposition of many-variable relations into superpositions of
//! one-variable relations ([`decompose`], [`SuperpositionExpr`]) and a solver
//! for the double-branches equation `(x R1 a) R3 (x R2 b) = c` ([`solver`]).

pub mod compact;
pub mod decompose;
pub mod derived;
pub mod error;
pub mod expr;
pub mod format;
pub mod impossibility;
pub mod laws;
pub mod monoid;
pub mod operator;
pub mod ops;
pub mod relation;
pub mod solver;
pub mod valueset;

pub use crate::decompose::{decompose, DecomposeOptions, DecompositionResult, Method, SingularRelation};
pub use crate::error::{Error, Result};
pub use crate::expr::SuperpositionExpr;
pub use crate::monoid::Monoid;
pub use crate::ops::TransformSpec;
pub use crate::relation::{PointClass, Relation};
pub use crate::solver::{DoubleBranchesEquation, SolveOutcome};
pub use crate::valueset::ValueSet;
