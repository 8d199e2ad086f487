//! Forward spherical mean transform by sphere quadrature, the admissible
//! region of the annulus, dataset generation, and a finite-difference check
//! of the Darboux equation `G_tt + (n−1)/t G_t − Δ_x G = 0`.

use rayon::prelude::*;

use crate::dataset::{SphericalMeanDataset, SphericalMeanSample};
use crate::error::{Error, Result};
use crate::field::{norm, ScalarField};
use crate::geometry::AnnulusGeometry;
use crate::harmonics::{check_dim, sphere_measure, AngularSampleSet};

/// A quadrature rule on `S^{n-1}` reused across many spheres.
#[derive(Debug, Clone)]
pub struct SphereRule {
    set: AngularSampleSet,
    scale: f64,
}

impl SphereRule {
    /// `quad_order` is the node count for `n = 2` and the polar node count
    /// for `n = 3`.
    pub fn new(n: usize, quad_order: usize) -> Result<Self> {
        check_dim(n)?;
        if quad_order < 8 {
            return Err(Error::invalid(format!(
                "quad_order must be >= 8, got {quad_order}"
            )));
        }
        Ok(Self {
            set: AngularSampleSet::new(n, quad_order)?,
            scale: 1.0 / sphere_measure(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn angular(&self) -> &AngularSampleSet {
        &self.set
    }

    /// Mean of `field` over `S(center, t)`; `t = 0` returns `field(center)`.
    pub fn mean(&self, field: &ScalarField, center: &[f64], t: f64) -> Result<f64> {
        if center.len() != self.dim() || field.dim() != self.dim() {
            return Err(Error::invalid("center, field and rule dimensions differ"));
        }
        if !(t >= 0.0) {
            return Err(Error::invalid(format!(
                "sphere radius must be nonnegative, got {t}"
            )));
        }
        Ok(self.mean_unchecked(field, center, t))
    }

    pub(crate) fn mean_unchecked(&self, field: &ScalarField, center: &[f64], t: f64) -> f64 {
        if t == 0.0 {
            return field.eval(center);
        }
        let n = self.dim();
        let mut x = [0.0; 3];
        let mut acc = 0.0;
        for (k, w) in self.set.weights().iter().enumerate() {
            let u = self.set.node(k);
            for i in 0..n {
                x[i] = center[i] + t * u[i];
            }
            acc += w * field.eval(&x[..n]);
        }
        acc * self.scale
    }
}

/// `R(f)(center, t)` with a fresh rule of order `quad_order`.
pub fn spherical_mean(
    field: &ScalarField,
    center: &[f64],
    t: f64,
    quad_order: usize,
) -> Result<f64> {
    SphereRule::new(field.dim(), quad_order)?.mean(field, center, t)
}

/// Whether `S(center, t)` lies inside `Ann(a, A)` and encloses `S(0, a)`.
pub fn region_a_contains(geometry: &AnnulusGeometry, center: &[f64], t: f64) -> bool {
    geometry.admits(norm(center), t)
}

/// Requested (center, radius) pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    /// Every center paired with every radius.
    Product {
        centers: Vec<Vec<f64>>,
        radii: Vec<f64>,
    },
    /// Explicit pairs.
    Pairs(Vec<(Vec<f64>, f64)>),
}

impl Sampling {
    /// Sphere radii `s_j` uniform on `[a, A]` (`s_points` nodes, endpoints
    /// included). At each `s_j` the centers are the origin plus `rings`
    /// concentric copies of `angular`, at radii `ρ_k = ρ(s)·k/rings` with
    /// `ρ(s) = min(center_radius_max, 0.9·min(s − a, A − s))`.
    pub fn annulus_rings(
        geometry: &AnnulusGeometry,
        s_points: usize,
        rings: usize,
        angular: &AngularSampleSet,
        center_radius_max: f64,
    ) -> Result<Self> {
        if s_points < 2 || rings == 0 {
            return Err(Error::invalid(
                "need at least two sphere radii and one ring",
            ));
        }
        let n = angular.dim();
        let (a, outer) = (geometry.inner(), geometry.outer());
        let ds = (outer - a) / (s_points - 1) as f64;
        let mut pairs = Vec::new();
        for j in 0..s_points {
            let s = a + j as f64 * ds;
            pairs.push((vec![0.0; n], s));
            let rho = center_radius_max.min(0.9 * geometry.center_cap(s));
            if rho <= 0.0 {
                continue;
            }
            for k in 1..=rings {
                let r = rho * k as f64 / rings as f64;
                for u in angular.nodes() {
                    pairs.push((u.iter().map(|v| r * v).collect(), s));
                }
            }
        }
        Ok(Sampling::Pairs(pairs))
    }

    fn pairs(&self) -> Vec<(&[f64], f64)> {
        match self {
            Sampling::Product { centers, radii } => radii
                .iter()
                .flat_map(|&t| centers.iter().map(move |c| (c.as_slice(), t)))
                .collect(),
            Sampling::Pairs(p) => p.iter().map(|(c, t)| (c.as_slice(), *t)).collect(),
        }
    }
}

/// Output of [`generate_dataset`].
#[derive(Debug, Clone)]
pub struct ForwardRun {
    pub dataset: SphericalMeanDataset,
    /// Requested pairs outside the admissible region.
    pub rejected: usize,
}

/// Evaluate `R(f)` at every admissible requested pair.
pub fn generate_dataset(
    field: &ScalarField,
    geometry: &AnnulusGeometry,
    sampling: &Sampling,
    quad_order: usize,
) -> Result<ForwardRun> {
    let rule = SphereRule::new(field.dim(), quad_order)?;
    let pairs = sampling.pairs();
    if let Some((c, _)) = pairs.iter().find(|(c, _)| c.len() != field.dim()) {
        return Err(Error::invalid(format!(
            "center of dimension {} for a {}-dimensional field",
            c.len(),
            field.dim()
        )));
    }
    let admissible: Vec<(&[f64], f64)> = pairs
        .iter()
        .copied()
        .filter(|(c, t)| region_a_contains(geometry, c, *t))
        .collect();
    let rejected = pairs.len() - admissible.len();
    if admissible.is_empty() {
        return Err(Error::Geometry(format!(
            "no requested sphere satisfies |x| + a < t and |x| + t < A (a = {}, A = {}, {} pairs requested)",
            geometry.inner(),
            geometry.outer(),
            pairs.len()
        )));
    }
    let samples = admissible
        .par_iter()
        .map(|(c, t)| SphericalMeanSample {
            center: c.to_vec(),
            radius: *t,
            value: rule.mean_unchecked(field, c, *t),
        })
        .collect();
    Ok(ForwardRun {
        dataset: SphericalMeanDataset::new(field.dim(), *geometry, samples)?,
        rejected,
    })
}

/// Summary of the Darboux-equation residual over a probe set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
}

/// Centered second-order residual of `G_tt + (n−1)/t G_t − Δ_x G` for
/// `G = R(f)` at each probe `(x, t)`, with common step `h`.
pub fn epd_residual(
    field: &ScalarField,
    probes: &[(Vec<f64>, f64)],
    h: f64,
    quad_order: usize,
) -> Result<ResidualStats> {
    if !(h > 0.0) {
        return Err(Error::invalid("step h must be positive"));
    }
    if probes.is_empty() {
        return Err(Error::invalid("no probes supplied"));
    }
    let n = field.dim();
    let rule = SphereRule::new(n, quad_order)?;
    for (x, t) in probes {
        if x.len() != n {
            return Err(Error::invalid(
                "probe center dimension differs from the field",
            ));
        }
        if !(*t > h) {
            return Err(Error::invalid(format!(
                "probe radius {t} must exceed the step {h} (singular at t = 0)"
            )));
        }
    }
    let residuals: Vec<f64> = probes
        .par_iter()
        .map(|(x, t)| {
            let g = |c: &[f64], s: f64| rule.mean_unchecked(field, c, s);
            let g0 = g(x, *t);
            let gp = g(x, t + h);
            let gm = g(x, t - h);
            let g_tt = (gp - 2.0 * g0 + gm) / (h * h);
            let g_t = (gp - gm) / (2.0 * h);
            let mut lap = 0.0;
            let mut y = x.clone();
            for i in 0..n {
                y[i] = x[i] + h;
                let up = g(&y, *t);
                y[i] = x[i] - h;
                let dn = g(&y, *t);
                y[i] = x[i];
                lap += (up - 2.0 * g0 + dn) / (h * h);
            }
            (g_tt + (n as f64 - 1.0) / t * g_t - lap).abs()
        })
        .collect();
    let max = residuals.iter().copied().fold(0.0, f64::max);
    let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
    Ok(ResidualStats { max, mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_phantom;

    fn sq(n: usize) -> ScalarField {
        ScalarField::from_fn(n, |x| x.iter().map(|v| v * v).sum()).unwrap()
    }

    #[test]
    fn means_of_simple_fields() {
        for n in [2, 3] {
            let c = ScalarField::from_fn(n, |_| 4.5).unwrap();
            let x = vec![0.3; n];
            assert!((spherical_mean(&c, &x, 1.3, 16).unwrap() - 4.5).abs() < 1e-13);
            let v = spherical_mean(&sq(n), &x, 1.3, 16).unwrap();
            assert!((v - (0.09 * n as f64 + 1.69)).abs() < 1e-12);
            let lin = ScalarField::from_fn(n, |x| x[0]).unwrap();
            assert!((spherical_mean(&lin, &x, 2.0, 16).unwrap() - 0.3).abs() < 1e-13);
            assert_eq!(spherical_mean(&lin, &x, 0.0, 16).unwrap(), 0.3);
            assert!(spherical_mean(&lin, &x, -1.0, 16).is_err());
            assert!(spherical_mean(&lin, &x, 1.0, 4).is_err());
        }
    }

    #[test]
    fn pole_enclosing_circle_mean_vanishes() {
        let f = ScalarField::from_fn(2, |x| x[0] / (x[0] * x[0] + x[1] * x[1])).unwrap();
        let v = spherical_mean(&f, &[0.3, -0.2], 1.0, 256).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn region_examples() {
        let g = AnnulusGeometry::new(1.0, 3.0, 0.0, None).unwrap();
        assert!(region_a_contains(&g, &[0.0, 0.0], 2.0));
        assert!(!region_a_contains(&g, &[0.0, 0.0], 1.0));
        assert!(region_a_contains(&g, &[0.4, 0.0], 2.5));
    }

    #[test]
    fn zero_field_dataset_and_rejections() {
        let g = AnnulusGeometry::new(1.0, 3.0, 0.0, None).unwrap();
        let s = Sampling::Product {
            centers: vec![vec![0.0, 0.0], vec![0.5, 0.0]],
            radii: vec![1.0, 1.5, 2.0, 2.8],
        };
        let run = generate_dataset(&ScalarField::zero(2).unwrap(), &g, &s, 16).unwrap();
        assert_eq!(run.dataset.len() + run.rejected, 8);
        assert!(run.dataset.samples().iter().all(|s| s.value == 0.0));
        assert!(run.dataset.is_admissible());
        let bad = Sampling::Pairs(vec![(vec![0.0, 0.0], 0.5)]);
        assert!(matches!(
            generate_dataset(&ScalarField::zero(2).unwrap(), &g, &bad, 16),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn residual_of_quadratic_vanishes() {
        for n in [2, 3] {
            let probes = vec![(vec![0.2; n], 1.0), (vec![-0.4; n], 0.6)];
            let r = epd_residual(&sq(n), &probes, 0.01, 16).unwrap();
            assert!(r.max < 1e-8, "{r:?}");
            let c = ScalarField::from_fn(n, |_| 2.0).unwrap();
            assert!(epd_residual(&c, &probes, 0.01, 16).unwrap().max < 1e-9);
            assert!(epd_residual(&c, &probes, 0.7, 16).is_err());
        }
    }

    #[test]
    fn residual_converges_second_order() {
        let f = parse_phantom(
            2,
            "radial-gaussian-ring(center=0.5, width=0.7); mode-bump(m=1, center=1, width=0.6)",
        )
        .unwrap();
        let probes = vec![(vec![0.3, 0.1], 1.0), (vec![-0.2, 0.4], 0.8)];
        let r1 = epd_residual(&f, &probes, 0.04, 128).unwrap().max;
        let r2 = epd_residual(&f, &probes, 0.02, 128).unwrap().max;
        let ratio = r1 / r2;
        assert!((3.0..=5.0).contains(&ratio), "{r1} {r2} {ratio}");
    }
}
