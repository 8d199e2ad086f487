//! Low-level one-dimensional numerics shared by the operator and
//! reconstruction layers: finite-difference stencils, quadrature rules,
//! interpolation and extrapolation.

pub mod fd;
pub mod interp;
pub mod quadrature;

pub use fd::{centered_first_derivative, centered_second_derivative, fornberg_weights};
pub use interp::{cubic_interpolate, extrapolate_to_zero};
pub use quadrature::{cumulative_integral, gauss_legendre, integrate_samples};
