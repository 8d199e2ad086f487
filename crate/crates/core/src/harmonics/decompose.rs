use rayon::prelude::*;

use super::basis::{harmonic_unchecked, solid_harmonic};
use super::{modes_up_to, AngularSampleSet, ModeIndex};
use crate::error::{Error, Result};
use crate::field::{norm, ScalarField};
use crate::profile::RadialProfile;

/// `∫ h(θ) Y_ml(θ) dθ` by the weighted sum over `set`.
pub fn angular_project(values: &[f64], set: &AngularSampleSet, mode: ModeIndex) -> Result<f64> {
    if values.len() != set.len() {
        return Err(Error::invalid(format!(
            "{} samples for an angular set of {} nodes",
            values.len(),
            set.len()
        )));
    }
    if mode.dim() != set.dim() {
        return Err(Error::invalid("mode and angular set dimensions differ"));
    }
    if mode.degree() > set.resolved_degree() {
        return Err(Error::invalid(format!(
            "angular set resolves degree {} but mode {mode} was requested",
            set.resolved_degree()
        )));
    }
    Ok(project_unchecked(values, set, mode))
}

pub(crate) fn project_unchecked(values: &[f64], set: &AngularSampleSet, mode: ModeIndex) -> f64 {
    values
        .iter()
        .zip(set.weights())
        .enumerate()
        .map(|(k, (v, w))| v * w * harmonic_unchecked(mode, set.node(k)))
        .sum()
}

/// Radial coefficients `f_ml(r_j)` of `field` for every mode with `m ≤ m_max`.
///
/// The radii must be positive, ascending and uniform. Profiles come back in
/// the order of [`modes_up_to`].
pub fn decompose(
    field: &ScalarField,
    radii: &[f64],
    m_max: usize,
    angular: &AngularSampleSet,
) -> Result<Vec<RadialProfile>> {
    if field.dim() != angular.dim() {
        return Err(Error::invalid("field and angular set dimensions differ"));
    }
    decompose_fn(angular.dim(), radii, m_max, angular, |x| field.eval(x))
}

/// [`decompose`] for an arbitrary evaluator `x ↦ f(x)`.
pub fn decompose_fn(
    n: usize,
    radii: &[f64],
    m_max: usize,
    angular: &AngularSampleSet,
    f: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<Vec<RadialProfile>> {
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::invalid(format!(
            "decomposition radius {r} is not positive (r^m normalization is singular at 0)"
        )));
    }
    if m_max > angular.resolved_degree() {
        return Err(Error::invalid(format!(
            "angular set resolves degree {} but M_max = {m_max}",
            angular.resolved_degree()
        )));
    }
    let modes = modes_up_to(n, m_max)?;
    // coeffs[j][k]: projection of mode k at radius j
    let coeffs: Vec<Vec<f64>> = radii
        .par_iter()
        .map(|&r| {
            let mut x = vec![0.0; n];
            let samples: Vec<f64> = (0..angular.len())
                .map(|k| {
                    for (xi, ui) in x.iter_mut().zip(angular.node(k)) {
                        *xi = r * ui;
                    }
                    f(&x)
                })
                .collect();
            modes
                .iter()
                .map(|&mode| {
                    project_unchecked(&samples, angular, mode) / r.powi(mode.degree() as i32)
                })
                .collect()
        })
        .collect();
    modes
        .iter()
        .enumerate()
        .map(|(k, &mode)| {
            RadialProfile::from_grid(mode, radii, coeffs.iter().map(|c| c[k]).collect())
        })
        .collect()
}

/// `Σ f_ml(|x|) |x|^m Y_ml(x/|x|)` over the supplied profiles.
pub fn synthesize(profiles: &[RadialProfile], point: &[f64]) -> Result<f64> {
    let r = norm(point);
    let mut total = 0.0;
    for p in profiles {
        if p.mode.dim() != point.len() {
            return Err(Error::invalid("profile mode and point dimensions differ"));
        }
        total += p.interpolate(r)? * solid_harmonic(p.mode, point);
    }
    Ok(total)
}
