//! Exact computations with Lie rings and finite groups admitting a metacyclic
//! Frobenius group of automorphisms.

pub mod bounds;
pub mod bridge;
pub mod exec;
pub mod field;
pub mod freelie;
pub mod frobenius;
pub mod group;
pub mod instance;
pub mod kms;
pub mod lie;
pub mod linalg;
pub mod tower;
pub mod universal;

pub use exec::Exec;
pub use field::{Elem, Field, FieldError};
pub use lie::{BracketExpr, LieError, LieRing, Nilpotency, StructureTable, Violation};
pub use linalg::{Matrix, Subspace, Vector};
pub use frobenius::{
    FixedBy, FrobeniusAction, FrobeniusError, FrobeniusShape, GradedDecomposition, Homogeneous,
};
