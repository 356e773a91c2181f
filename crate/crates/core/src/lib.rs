//! Finite-type analysis of surfaces in De Sitter and anti De Sitter space
//! through the linearized operator L₁ (the Cheng–Yau operator of the Newton
//! transformation P₁).

pub mod ambient;
pub mod catalog;
pub mod cheng_yau;
pub mod error;
pub mod finite_type;
pub mod jet;
pub mod mat2;
pub mod nonfinite;
pub mod surface;
pub mod tolerances;
pub mod verify;

pub use ambient::{Ambient, AmbientVector, SpaceForm};
pub use error::{Error, Result};
pub use jet::{Jet2, Var};
pub use surface::{Chart, Domain, LocalJets, PointGeometry, ShapeClass};
pub use tolerances::Tolerances;
