//! Surface-induced shift of the electron spin magnetic moment.
//!
//! The central quantity is the dimensionless shape factor `S`, defined by
//! `Delta mu = e^3 / (16 pi^2 m^3 z^2) S`, computed by [`kernel::shape_factor`]
//! for non-dispersive, plasma, Lorentz and perfectly reflecting surfaces.

pub mod analysis;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod kernel;
pub mod materials;
pub mod output;
pub mod quadrature;
pub mod units;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{shape_factor, EvaluationPath, Orientation, Query, ShiftResult};
pub use materials::MaterialModel;
pub use quadrature::QuadratureConfig;
