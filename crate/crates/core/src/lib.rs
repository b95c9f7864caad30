//! Exact computations with curved dg algebras, Maurer–Cartan elements,
//! bar and cobar constructions, and twisted modules over small fields.

pub mod algebra;
pub mod bar;
pub mod certificate;
pub mod complex;
pub mod duality;
pub mod error;
pub mod field;
pub mod gallery;
pub mod graded;
pub mod io;
pub mod matrix;
pub mod mc;
pub mod module;
pub mod parallel;
pub mod random;
pub mod resolution;
pub mod tensor_alg;
pub mod twisted;
pub mod weq;

pub use algebra::{CurvedDga, DgaBuilder};
pub use certificate::Certificate;
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use graded::{BasisElement, GradedMap, GradedSpace};
pub use matrix::Matrix;
pub use mc::McElement;
pub use module::{DgModule, Side};
pub use parallel::Execution;
