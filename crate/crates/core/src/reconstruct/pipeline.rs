use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::cascade::{cascade_solve, CascadeDirection};
use super::extract::{extract_g0, ExtractOptions, TraceIndex};
use super::integral::k_profile;
use super::jet::{boundary_jet, extract_kernel_coeffs};
use crate::config::{PriorSide, RunConfig};
use crate::dataset::SphericalMeanDataset;
use crate::error::{Error, Result};
use crate::field::{norm, ScalarField};
use crate::geometry::AnnulusGeometry;
use crate::harmonics::{decompose, modes_up_to, synthesize, AngularSampleSet, ModeIndex};
use crate::io::format_f64;
use crate::kernel::kernel_fit;
use crate::numerics::gauss_legendre;
use crate::profile::RadialProfile;

/// Outcome and diagnostics of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub mode: ModeIndex,
    /// `None` when the mode was reconstructed, otherwise the reason it was not.
    pub failure: Option<String>,
    /// Trace nodes filled from neighbours because the data there did not suffice.
    pub filled_nodes: usize,
    /// Estimated factor by which data errors reach this mode's profile.
    pub error_gain: Option<f64>,
    /// Max difference between the cascade solution and `k_ml` plus the kernel
    /// span fitted from the prior jet (interior prior, `m ≥ 1`).
    pub route_gap: Option<f64>,
    /// Relative residual of fitting the kernel family to `f_ml − k_ml`
    /// (interior prior, `m ≥ 1`).
    pub kernel_residual: Option<f64>,
}

/// Reconstructed radial coefficients on `[a, A]`.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub geometry: AnnulusGeometry,
    pub prior: PriorSide,
    /// Profiles of the successfully reconstructed modes.
    pub profiles: Vec<RadialProfile>,
    pub reports: Vec<ModeReport>,
}

impl Reconstruction {
    pub fn dim(&self) -> usize {
        self.reports.first().map(|r| r.mode.dim()).unwrap_or(2)
    }

    /// Synthesized value; zero outside `a ≤ |x| ≤ A`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        if r < self.geometry.inner() || r > self.geometry.outer() {
            return 0.0;
        }
        synthesize(&self.profiles, x).unwrap_or(0.0)
    }

    pub fn field(&self) -> ScalarField {
        let profiles = Arc::new(self.profiles.clone());
        let g = self.geometry;
        ScalarField::from_fn(self.dim(), move |x| synthesize(&profiles, x).unwrap_or(0.0))
            .expect("dimension validated")
            .restricted(g.inner(), g.outer())
    }

    /// Relative L² error against `truth` on `[lo, hi]`.
    pub fn error_against(&self, truth: &ScalarField, lo: f64, hi: f64) -> Result<f64> {
        let order = if self.dim() == 2 { 64 } else { 32 };
        relative_l2_error(&self.field(), truth, lo, hi, order)
    }

    pub fn failed_modes(&self) -> Vec<ModeIndex> {
        self.reports
            .iter()
            .filter(|r| r.failure.is_some())
            .map(|r| r.mode)
            .collect()
    }

    /// Field samples on a polar grid of `[lo, hi]`: header `r,theta,value`
    /// (`n = 2`) or `r,theta,phi,value` (`n = 3`), with `theta` the polar
    /// angle in 3-D and the azimuth in 2-D.
    pub fn field_csv(&self, lo: f64, hi: f64, radial: usize, angular: usize) -> String {
        let n = self.dim();
        let mut out = String::from(if n == 2 {
            "r,theta,value\n"
        } else {
            "r,theta,phi,value\n"
        });
        let radial = radial.max(2);
        for i in 0..radial {
            let r = lo + (hi - lo) * i as f64 / (radial - 1) as f64;
            if n == 2 {
                for k in 0..angular {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / angular as f64;
                    let v = self.eval(&[r * th.cos(), r * th.sin()]);
                    writeln!(
                        out,
                        "{},{},{}",
                        format_f64(r),
                        format_f64(th),
                        format_f64(v)
                    )
                    .unwrap();
                }
            } else {
                for j in 0..angular {
                    let th = std::f64::consts::PI * (j as f64 + 0.5) / angular as f64;
                    for k in 0..2 * angular {
                        let ph = std::f64::consts::PI * k as f64 / angular as f64;
                        let x = [
                            r * th.sin() * ph.cos(),
                            r * th.sin() * ph.sin(),
                            r * th.cos(),
                        ];
                        writeln!(
                            out,
                            "{},{},{},{}",
                            format_f64(r),
                            format_f64(th),
                            format_f64(ph),
                            format_f64(self.eval(&x))
                        )
                        .unwrap();
                    }
                }
            }
        }
        out
    }

    /// Header `m,l,reconstructed,filled_nodes,error_gain,route_gap,kernel_residual`;
    /// absent values are left empty.
    pub fn diagnostics_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        let mut out =
            String::from("m,l,reconstructed,filled_nodes,error_gain,route_gap,kernel_residual\n");
        for r in &self.reports {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.mode.degree(),
                r.mode.index(),
                u8::from(r.failure.is_none()),
                r.filled_nodes,
                opt(r.error_gain),
                opt(r.route_gap),
                opt(r.kernel_residual)
            )
            .unwrap();
        }
        out
    }
}

/// Worst single-stage growth of trace errors through the cascade: 1 when
/// solving outward from `a`, `(A/a)^(n+2m−2)` when solving inward from `A`.
pub fn cascade_gain(geometry: &AnnulusGeometry, side: PriorSide, n: usize, m: usize) -> f64 {
    match side {
        PriorSide::Exterior if m >= 1 => {
            (geometry.outer() / geometry.inner()).powi((n + 2 * m - 2) as i32)
        }
        _ => 1.0,
    }
}

/// Uniform grid of `s_points` radii on `[a, A]`.
pub fn s_grid(geometry: &AnnulusGeometry, s_points: usize) -> Vec<f64> {
    let (a, outer) = (geometry.inner(), geometry.outer());
    (0..s_points)
        .map(|j| a + (outer - a) * j as f64 / (s_points - 1) as f64)
        .collect()
}

/// Radii of the prior grid with spacing `h`: `a, a − h, …` inside `(r0, a]`
/// for an interior prior, `A, A + h, …` inside `[A, R_ext)` for an exterior
/// prior. Returned ascending.
pub fn prior_radii(geometry: &AnnulusGeometry, side: PriorSide, h: f64) -> Result<Vec<f64>> {
    match side {
        PriorSide::Interior => {
            let a = geometry.inner();
            let count = ((a - geometry.r0()) / h - 1e-9).floor() as usize + 1;
            Ok((0..count).rev().map(|k| a - k as f64 * h).collect())
        }
        PriorSide::Exterior => {
            let outer = geometry.outer();
            let re = geometry
                .r_ext()
                .ok_or_else(|| Error::config("exterior prior requires R_ext"))?;
            let count = ((re - outer) / h - 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| outer + k as f64 * h).collect())
        }
    }
}

/// Recover `f` on `Ann(a, A)` from annulus data and the prior field.
///
/// Steps: decompose the prior on its shell; extract each mode's central
/// trace `g_ml(0, s)`; take the prior's jet at the anchor; solve
/// `Q_m f_ml = g_ml(0, ·)` by the cascade; synthesize. Modes that fail are
/// reported and left out of the synthesis.
pub fn reconstruct_field(
    dataset: &SphericalMeanDataset,
    prior: &ScalarField,
    config: &RunConfig,
) -> Result<Reconstruction> {
    let n = config.n;
    if dataset.dim() != n || prior.dim() != n {
        return Err(Error::config("dataset, prior and config dimensions differ"));
    }
    if !dataset.is_admissible() {
        return Err(Error::Geometry(
            "dataset contains spheres outside the admissible region".into(),
        ));
    }
    let geometry = config.geometry;
    let s = s_grid(&geometry, config.s_points);
    let h = s[1] - s[0];
    let radii = prior_radii(&geometry, config.prior, h)?;
    let angular = AngularSampleSet::new(n, config.angular_points)?;
    let prior_profiles = decompose(prior, &radii, config.m_max, &angular)?;
    let index = TraceIndex::new(dataset)?;
    let options = ExtractOptions {
        extrap_radii: config.extrap_radii,
        ..ExtractOptions::default()
    };
    let (anchor, direction) = match config.prior {
        PriorSide::Interior => (geometry.inner(), CascadeDirection::ForwardFromA),
        PriorSide::Exterior => (geometry.outer(), CascadeDirection::BackwardFromOuter),
    };
    let modes = modes_up_to(n, config.m_max)?;
    let results: Vec<(ModeReport, Option<RadialProfile>)> = modes
        .par_iter()
        .zip(prior_profiles.par_iter())
        .map(|(&mode, prior_profile)| {
            let m = mode.degree();
            let mut report = ModeReport {
                mode,
                failure: None,
                filled_nodes: 0,
                error_gain: None,
                route_gap: None,
                kernel_residual: None,
            };
            let mut attempt = || -> Result<RadialProfile> {
                let trace = extract_g0(&index, mode, &s, options)?;
                report.filled_nodes = trace.filled.len();
                let gain = trace.amplification * cascade_gain(&geometry, config.prior, n, m);
                report.error_gain = Some(gain);
                if gain > options.max_amplification {
                    return Err(Error::Reconstruction(format!(
                        "mode {mode} is ill-conditioned on this route (error gain {gain:.1e})"
                    )));
                }
                let jet = boundary_jet(prior_profile, anchor, m, config.fd_order)?;
                let f = cascade_solve(n, m, &trace.profile, &jet, direction)?;
                if m >= 1 && config.prior == PriorSide::Interior {
                    let k = k_profile(n, m, &trace.profile)?;
                    let coeffs = extract_kernel_coeffs(&jet, n, m)?;
                    let gap = f
                        .radii()
                        .iter()
                        .zip(f.values().iter().zip(k.values()))
                        .map(|(r, (fv, kv))| {
                            let span: f64 = coeffs
                                .iter()
                                .enumerate()
                                .map(|(i, c)| c * r.powi(-((n + 2 * i) as i32)))
                                .sum();
                            (fv - kv - span).abs()
                        })
                        .fold(0.0, f64::max);
                    report.route_gap = Some(gap);
                    let q = f.with_values(
                        f.values()
                            .iter()
                            .zip(k.values())
                            .map(|(a, b)| a - b)
                            .collect(),
                    );
                    report.kernel_residual = Some(kernel_fit(&q, n, m)?.residual);
                }
                Ok(f)
            };
            match attempt() {
                Ok(f) => (report, Some(f)),
                Err(e) => {
                    report.failure = Some(e.to_string());
                    (report, None)
                }
            }
        })
        .collect();
    let mut reports = Vec::with_capacity(results.len());
    let mut profiles = Vec::new();
    for (r, p) in results {
        reports.push(r);
        profiles.extend(p);
    }
    if profiles.is_empty() {
        let why = reports
            .first()
            .and_then(|r| r.failure.clone())
            .unwrap_or_default();
        return Err(Error::Reconstruction(format!(
            "no mode could be reconstructed ({why})"
        )));
    }
    Ok(Reconstruction {
        geometry,
        prior: config.prior,
        profiles,
        reports,
    })
}

/// `‖f − g‖ / ‖g‖` in `L²(Ann(lo, hi))`, by Gauss-Legendre in `r` times the
/// angular rule of order `angular_order`.
pub fn relative_l2_error(
    f: &ScalarField,
    g: &ScalarField,
    lo: f64,
    hi: f64,
    angular_order: usize,
) -> Result<f64> {
    let n = g.dim();
    if f.dim() != n {
        return Err(Error::invalid("fields have different dimensions"));
    }
    if !(hi > lo && lo >= 0.0) {
        return Err(Error::invalid("evaluation annulus needs 0 <= lo < hi"));
    }
    let set = AngularSampleSet::new(n, angular_order)?;
    let (x, w) = gauss_legendre(64);
    let half = 0.5 * (hi - lo);
    let (num, den) = x
        .par_iter()
        .zip(w.par_iter())
        .map(|(xq, wq)| {
            let r = lo + half * (xq + 1.0);
            let jac = half * wq * r.powi(n as i32 - 1);
            let mut p = [0.0; 3];
            let (mut a, mut b) = (0.0, 0.0);
            for (u, wu) in set.nodes().iter().zip(set.weights()) {
                for i in 0..n {
                    p[i] = r * u[i];
                }
                let gv = g.eval(&p[..n]);
                let d = f.eval(&p[..n]) - gv;
                a += wu * d * d;
                b += wu * gv * gv;
            }
            (jac * a, jac * b)
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((num / den).sqrt())
}
