//! Symbolic kernel for coordinate charts of graded supermanifolds.
//!
//! The crate provides exact supercommutative polynomial arithmetic over a
//! chart of coordinates carrying a parity and an integer weight, graded
//! vector fields with their super Lie bracket, the derived operations
//! induced by a weight-one homological field (differential, odd bracket,
//! anchors), verification of the identities they satisfy, the classical
//! weight-one correspondence with Lie algebroid data, homotopy bracket
//! tables on the tangent quotient, and reconstruction of the generating
//! field from its tables.
//!
//! All values are immutable after construction and all operations are pure
//! functions over exact rationals, so results are reproducible bit for bit
//! and safe to evaluate in parallel.

pub mod algebroid;
pub mod context;
pub mod derived;
pub mod error;
pub mod expr;
pub mod field;
pub mod fixtures;
pub mod linfty;
pub mod monomial;
pub mod poly;
pub mod report;
pub mod samples;
pub mod twolayer;

pub use algebroid::{AlgebroidChart, Section};
pub use context::{Context, Coordinate, CoordId, GradedContext, Parity};
pub use derived::{HigherAlgebroid, SampleTuple};
pub use error::{AlgebraError, ParseError};
pub use expr::parse_expression;
pub use field::{
    check_f_related, CoordinateChange, HomologyCheck, RelatednessReport, VectorField,
};
pub use linfty::{LInftyStructure, Lifting};
pub use poly::{set_term_limit, Homogeneity, Polynomial, SubstitutionMap};
pub use report::{CheckLine, CheckReport};
pub use twolayer::TwoLayerStructure;
