//! Reconstruction from annulus data plus prior knowledge: central-trace
//! extraction, the `k_ml` integral, boundary jets and kernel coefficients,
//! the cascade solve of `Q_m f_ml = g_ml(0, ·)`, and the assembled pipeline.

mod cascade;
mod extract;
mod integral;
mod jet;
mod pipeline;

pub use cascade::{cascade_solve, CascadeDirection};
pub use extract::{extract_g0, ExtractOptions, TraceExtraction, TraceIndex};
pub use integral::{k_constant, k_integral, k_profile};
pub use jet::{boundary_jet, extract_kernel_coeffs};
pub use pipeline::{
    cascade_gain, prior_radii, reconstruct_field, relative_l2_error, s_grid, ModeReport,
    Reconstruction,
};
