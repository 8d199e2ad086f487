//! Null space of the annulus transform: per mode `(m, l)` with `m ≥ 1` it is
//! spanned by the radial coefficients `r^{−n−2i}`, `0 ≤ i < m`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::AnnulusGeometry;
use crate::harmonics::ModeIndex;
use crate::profile::RadialProfile;
use crate::transform::{generate_dataset, Sampling};

/// `coeff · r^{−n−2i} · r^m Y_ml(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelElement {
    mode: ModeIndex,
    power: usize,
    coeff: f64,
}

impl KernelElement {
    pub fn new(mode: ModeIndex, power: usize, coeff: f64) -> Result<Self> {
        if mode.degree() == 0 {
            return Err(Error::invalid("the kernel is trivial at degree 0"));
        }
        if power >= mode.degree() {
            return Err(Error::invalid(format!(
                "power index {power} must be below m = {}",
                mode.degree()
            )));
        }
        Ok(Self { mode, power, coeff })
    }

    pub fn mode(&self) -> ModeIndex {
        self.mode
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Exponent `−n − 2i` of the radial coefficient.
    pub fn exponent(&self) -> i32 {
        -(self.mode.dim() as i32) - 2 * self.power as i32
    }

    pub fn field(&self) -> ScalarField {
        ScalarField::kernel_element(self.mode, self.power, self.coeff)
            .expect("validated at construction")
    }

    /// Radial coefficient `coeff · r^{−n−2i}` on `radii`.
    pub fn profile(&self, radii: &[f64]) -> Result<RadialProfile> {
        let p = kernel_basis_profile(self.mode, self.power, radii)?;
        let v = p.values().iter().map(|x| self.coeff * x).collect();
        Ok(p.with_values(v))
    }
}

/// Samples of `r^{−n−2i}` for the mode's dimension `n`.
pub fn kernel_basis_profile(mode: ModeIndex, i: usize, radii: &[f64]) -> Result<RadialProfile> {
    KernelElement::new(mode, i, 1.0)?;
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::invalid("kernel profiles are sampled on r > 0"));
    }
    let p = -(mode.dim() as i32) - 2 * i as i32;
    RadialProfile::from_grid(mode, radii, radii.iter().map(|r| r.powi(p)).collect())
}

/// Largest `|R(f)|` over the admissible part of `sampling` for the element's field.
pub fn annihilation_check(
    element: &KernelElement,
    geometry: &AnnulusGeometry,
    sampling: &Sampling,
    quad_order: usize,
) -> Result<f64> {
    let run = generate_dataset(&element.field(), geometry, sampling, quad_order)?;
    Ok(run.dataset.max_abs_value())
}

/// Least-squares fit of `Σ_{i<m} c_i r^{−n−2i}` to a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFit {
    pub coefficients: Vec<f64>,
    /// `‖u − Σ c_i r^{−n−2i}‖ / ‖u‖` over the grid (0 for the zero profile).
    pub residual: f64,
    /// Ratio of extreme singular values of the scaled design.
    pub condition: f64,
}

impl KernelFit {
    pub fn is_member(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Fit the degree-`m` kernel family to `profile`, with columns scaled as
/// `(r_min/r)^{n+2i}`.
pub fn kernel_fit(profile: &RadialProfile, n: usize, m: usize) -> Result<KernelFit> {
    if m == 0 {
        return Err(Error::invalid("kernel fit needs m >= 1"));
    }
    if profile.len() < m {
        return Err(Error::invalid(format!(
            "{} nodes cannot determine {m} coefficients",
            profile.len()
        )));
    }
    if !(profile.start() > 0.0) {
        return Err(Error::invalid("kernel fit needs a grid in r > 0"));
    }
    let a = profile.start();
    let radii = profile.radii();
    let design = DMatrix::from_fn(radii.len(), m, |row, i| {
        (a / radii[row]).powi((n + 2 * i) as i32)
    });
    let y = DVector::from_column_slice(profile.values());
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(condition < 1e12) {
        return Err(Error::Singular {
            condition,
            context: format!("kernel design for m = {m} on [{a}, {}]", profile.end()),
        });
    }
    let x = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::invalid(format!("least-squares solve failed: {e}")))?;
    let norm_y = y.norm();
    let residual = if norm_y == 0.0 {
        0.0
    } else {
        (&y - &design * &x).norm() / norm_y
    };
    let coefficients = (0..m).map(|i| x[i] * a.powi((n + 2 * i) as i32)).collect();
    Ok(KernelFit {
        coefficients,
        residual,
        condition,
    })
}
