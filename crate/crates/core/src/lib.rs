//! Spherical mean transform on annuli through the Euler-Poisson-Darboux
//! mode decomposition: forward simulation, null-space characterization, and
//! reconstruction from annulus data plus interior or exterior prior knowledge.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod curved;
pub mod darboux;
pub mod dataset;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harmonics;
pub mod io;
pub mod kernel;
pub mod numerics;
pub mod profile;
pub mod reconstruct;
pub mod transform;
pub mod verify;

pub use config::{PriorSide, RunConfig};
pub use dataset::{SphericalMeanDataset, SphericalMeanSample};
pub use error::{Error, Result};
pub use field::ScalarField;
pub use geometry::AnnulusGeometry;
pub use harmonics::{AngularSampleSet, ModeIndex};
pub use profile::RadialProfile;
