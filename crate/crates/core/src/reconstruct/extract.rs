use crate::dataset::SphericalMeanDataset;
use crate::error::{Error, Result};
use crate::field::norm;
use crate::harmonics::{project_unchecked, solid_harmonic, AngularSampleSet, ModeIndex};
use crate::numerics::extrapolate_to_zero;
use crate::profile::RadialProfile;

const RADIUS_TOL: f64 = 1e-9;
const DIRECTION_TOL: f64 = 1e-6;

/// Samples `G(ρθ_k, s)` of one sphere radius `s` on a full angular rule at
/// center radius `ρ > 0`.
#[derive(Debug, Clone)]
struct Ring {
    rho: f64,
    set: AngularSampleSet,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
struct Shell {
    origin: Option<f64>,
    rings: Vec<Ring>,
}

/// The samples of a dataset arranged by sphere radius and center ring.
///
/// Samples are grouped by `t`, then by center radius. A group of centers at
/// a common radius is usable when its directions form one of the standard
/// angular rules; repeated samples at the same center are averaged.
#[derive(Debug, Clone)]
pub struct TraceIndex {
    dim: usize,
    shells: Vec<(f64, Shell)>,
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= RADIUS_TOL * x.abs().max(y.abs()).max(1.0)
}

fn cluster<T>(items: &mut [T], key: impl Fn(&T) -> f64) -> Vec<&[T]> {
    items.sort_by(|a, b| key(a).total_cmp(&key(b)));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=items.len() {
        if i == items.len() || !close(key(&items[start]), key(&items[i])) {
            out.push(&items[start..i]);
            start = i;
        }
    }
    out
}

impl TraceIndex {
    pub fn new(dataset: &SphericalMeanDataset) -> Result<Self> {
        let dim = dataset.dim();
        let mut by_t: Vec<(f64, f64, &[f64])> = dataset
            .samples()
            .iter()
            .map(|s| (s.radius, s.value, s.center.as_slice()))
            .collect();
        let mut shells = Vec::new();
        for group in cluster(&mut by_t, |s| s.0) {
            let t = group[0].0;
            let mut by_rho: Vec<(f64, f64, &[f64])> =
                group.iter().map(|(_, v, c)| (norm(c), *v, *c)).collect();
            let mut shell = Shell::default();
            for ring in cluster(&mut by_rho, |s| s.0) {
                let rho = ring[0].0;
                if rho <= RADIUS_TOL {
                    let mean = ring.iter().map(|s| s.1).sum::<f64>() / ring.len() as f64;
                    shell.origin = Some(mean);
                } else if let Some(r) = build_ring(dim, rho, ring) {
                    shell.rings.push(r);
                }
            }
            shells.push((t, shell));
        }
        Ok(Self { dim, shells })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn shell(&self, s: f64) -> Option<&Shell> {
        let i = self
            .shells
            .partition_point(|(t, _)| *t < s - RADIUS_TOL * s.max(1.0));
        self.shells
            .get(i)
            .filter(|(t, _)| close(*t, s))
            .map(|(_, sh)| sh)
    }

    /// Center radii of the usable rings at sphere radius `s`.
    pub fn ring_radii(&self, s: f64) -> Vec<f64> {
        self.shell(s)
            .map(|sh| sh.rings.iter().map(|r| r.rho).collect())
            .unwrap_or_default()
    }
}

fn build_ring(dim: usize, rho: f64, samples: &[(f64, f64, &[f64])]) -> Option<Ring> {
    let count = samples.len();
    for rep in 1..=count {
        if !count.is_multiple_of(rep) {
            continue;
        }
        let Ok(set) = AngularSampleSet::with_node_count(dim, count / rep) else {
            continue;
        };
        let mut sums = vec![0.0; set.len()];
        let mut hits = vec![0usize; set.len()];
        let mut ok = true;
        for (_, v, c) in samples {
            let u: Vec<f64> = c.iter().map(|x| x / rho).collect();
            match set.locate(&u, DIRECTION_TOL) {
                Some(k) => {
                    sums[k] += v;
                    hits[k] += 1;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && hits.iter().all(|h| *h == rep) {
            let values = sums.iter().map(|s| s / rep as f64).collect();
            return Some(Ring { rho, set, values });
        }
    }
    None
}

/// Settings of [`extract_g0`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    /// Number of center rings used in the extrapolation (at least 2).
    pub extrap_radii: usize,
    /// A node is rejected when `(s_max/ρ_min)^m` exceeds this bound: data
    /// errors reach the synthesized field multiplied by roughly that factor.
    pub max_amplification: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            extrap_radii: 4,
            max_amplification: 1e11,
        }
    }
}

/// Central trace of one mode together with the nodes that had to be filled.
#[derive(Debug, Clone)]
pub struct TraceExtraction {
    pub profile: RadialProfile,
    /// Indices into the `s` grid whose values were extrapolated from
    /// neighbouring nodes because the data there did not suffice.
    pub filled: Vec<usize>,
    /// Smallest `(s_max/ρ_min)^m` over the extracted nodes; 1 for `m = 0`.
    pub amplification: f64,
}

/// Estimate `g_ml(0, s)` on a uniform `s` grid.
///
/// At each `s`, every usable ring at radius `ρ_k` gives
/// `g_ml(ρ_k, s) = ⟨G(ρ_k θ, s), Y_ml⟩ / ρ_k^m`; the smallest `extrap_radii`
/// rings are extrapolated in `ρ²` to `ρ = 0`. For `m = 0` a sample at the
/// origin is used directly. Nodes lacking data are filled by cubic
/// extrapolation from the nearest successful nodes.
pub fn extract_g0(
    index: &TraceIndex,
    mode: ModeIndex,
    s_grid: &[f64],
    options: ExtractOptions,
) -> Result<TraceExtraction> {
    if options.extrap_radii < 2 {
        return Err(Error::invalid("extrap_radii must be at least 2"));
    }
    if mode.dim() != index.dim {
        return Err(Error::invalid("mode and dataset dimensions differ"));
    }
    let m = mode.degree();
    let s_max = s_grid.iter().copied().fold(0.0, f64::max);
    let nodes: Vec<Option<(f64, f64)>> = s_grid
        .iter()
        .map(|&s| {
            let shell = index.shell(s)?;
            if m == 0 {
                if let Some(v) = shell.origin {
                    return Some((v / solid_harmonic(mode, &vec![0.0; mode.dim()]), 1.0));
                }
            }
            let mut rings: Vec<&Ring> = shell
                .rings
                .iter()
                .filter(|r| r.set.resolved_degree() >= m)
                .collect();
            if rings.len() < options.extrap_radii {
                return None;
            }
            rings.truncate(options.extrap_radii);
            let gain = (s_max / rings[0].rho).powi(m as i32);
            if gain > options.max_amplification {
                return None;
            }
            let xs: Vec<f64> = rings.iter().map(|r| r.rho * r.rho).collect();
            let ys: Vec<f64> = rings
                .iter()
                .map(|r| project_unchecked(&r.values, &r.set, mode) / r.rho.powi(m as i32))
                .collect();
            Some((extrapolate_to_zero(&xs, &ys), gain))
        })
        .collect();
    let amplification = nodes
        .iter()
        .flatten()
        .map(|n| n.1)
        .fold(f64::INFINITY, f64::min);
    let values: Vec<Option<f64>> = nodes.iter().map(|n| n.map(|n| n.0)).collect();
    let good: Vec<usize> = (0..s_grid.len()).filter(|&j| values[j].is_some()).collect();
    if good.len() < 4 {
        return Err(Error::Reconstruction(format!(
            "trace of mode {mode} could be extracted at only {} of {} radii",
            good.len(),
            s_grid.len()
        )));
    }
    let mut filled = Vec::new();
    let mut out = Vec::with_capacity(s_grid.len());
    for (j, v) in values.iter().enumerate() {
        match v {
            Some(v) => out.push(*v),
            None => {
                filled.push(j);
                out.push(fill_from_neighbours(j, &good, s_grid, &values));
            }
        }
    }
    Ok(TraceExtraction {
        profile: RadialProfile::from_grid(mode, s_grid, out)?,
        filled,
        amplification,
    })
}

/// Cubic through the four successful nodes nearest to `j`.
fn fill_from_neighbours(j: usize, good: &[usize], s: &[f64], values: &[Option<f64>]) -> f64 {
    let mut near: Vec<usize> = good.to_vec();
    near.sort_by_key(|&g| g.abs_diff(j));
    near.truncate(4);
    let x = s[j];
    near.iter()
        .map(|&i| {
            let w: f64 = near
                .iter()
                .filter(|&&k| k != i)
                .map(|&k| (x - s[k]) / (s[i] - s[k]))
                .product();
            w * values[i].unwrap()
        })
        .sum()
}
