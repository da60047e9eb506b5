//! In-plane natural vibrations of circular nano-arches with piecewise-constant
//! thickness and edge cracks at the steps, under Eringen nonlocal elasticity.
//!
//! Each constant-thickness segment has a closed-form four-function basis.
//! Simply supported ends and the interface conditions at each step (with a
//! rotational spring for a crack) give a homogeneous linear system whose
//! determinant vanishes at the natural frequencies. A finite-difference
//! discretization of the same equations cross-checks the roots.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod basis;
pub mod cli;
pub mod compliance;
pub mod config;
pub mod error;
pub mod fd;

mod lu;
pub mod model;
pub mod reference;
pub mod solver;

pub use config::{ConfigError, RunConfig, SweepParam, SweepSpec};
pub use error::{Error, FieldError, Result};
pub use lu::LuFactors;
pub use model::{
    validate_model, ArchGeometry, ArchModel, CrackSpec, Formulation, Joint, Material, ModelOptions,
    PlaneState, ReferenceThickness, Segment, ShapeFunction, SolverConfig, ValidatedModel,
};
pub use solver::{mode_shape, natural_frequencies, ModeResult, ModeShape, Spectrum};
