//! Real spherical harmonics on S^1 and S^2, angular quadrature, and the
//! solid-harmonic decomposition `f(x) = Σ f_ml(r) r^m Y_ml(θ)`.
//!
//! Basis convention (fixed crate-wide):
//! - `n = 2`: `Y_{0,1} = 1/√(2π)`; for `m ≥ 1`, `l = 1` is `cos(mφ)/√π` and
//!   `l = 2` is `sin(mφ)/√π`.
//! - `n = 3`: orthonormal real harmonics without the Condon-Shortley phase,
//!   ordered by azimuthal index `k = -m..=m` mapped to `l = k + m + 1`;
//!   negative `k` carries `sin(|k|φ)`, positive `k` carries `cos(kφ)`.

mod basis;
mod decompose;
mod mode;
mod quadrature;

pub use basis::{eval_harmonic, solid_harmonic};
pub(crate) use decompose::project_unchecked;
pub use decompose::{angular_project, decompose, decompose_fn, synthesize};
pub use mode::{mode_count, modes_up_to, ModeIndex};
pub use quadrature::{AngularLayout, AngularSampleSet};

use crate::error::{Error, Result};

/// Total surface measure of the unit sphere `S^{n-1}`.
pub fn sphere_measure(n: usize) -> f64 {
    match n {
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => f64::NAN,
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "unsupported dimension {n} (only n = 2 and n = 3)"
        )))
    }
}
