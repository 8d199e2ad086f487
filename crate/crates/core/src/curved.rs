//! Radial operators on constant-curvature spaces: `D_{m,r}`, the factors
//! `Γ_k`, the curved `Q_m = Γ_1 ∘ … ∘ Γ_m`, and the identity
//! `Q_m D_{m,r} = D_{0,r} Q_m`.
//!
//! Profiles here are plain coefficients `f_ml(r)`, without the `r^m` factor
//! used by the flat decomposition.

use std::fmt;

use crate::darboux::intertwine_trim;
use crate::error::{Error, Result};
use crate::numerics::{centered_first_derivative, centered_second_derivative};
use crate::profile::RadialProfile;

/// Nodes where the radial sine falls below this are treated as singular.
const SINGULAR_TOL: f64 = 1e-8;

/// Geometry of the ambient space, fixing the pair `(C, S)` that plays the
/// role of `(cosh, sinh)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// `(1, r)`.
    Euclidean,
    /// `(cosh r, sinh r)`.
    Hyperbolic,
    /// `(cos r, sin r)`.
    Spherical,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 3] = [
        SpaceKind::Euclidean,
        SpaceKind::Hyperbolic,
        SpaceKind::Spherical,
    ];

    /// `S(r)`: `r`, `sinh r` or `sin r`.
    pub fn sine(self, r: f64) -> f64 {
        match self {
            SpaceKind::Euclidean => r,
            SpaceKind::Hyperbolic => r.sinh(),
            SpaceKind::Spherical => r.sin(),
        }
    }

    /// `C(r)`: `1`, `cosh r` or `cos r`.
    pub fn cosine(self, r: f64) -> f64 {
        match self {
            SpaceKind::Euclidean => 1.0,
            SpaceKind::Hyperbolic => r.cosh(),
            SpaceKind::Spherical => r.cos(),
        }
    }

    /// `C(r)/S(r)`.
    pub fn cotangent(self, r: f64) -> f64 {
        self.cosine(r) / self.sine(r)
    }

    /// Whether the operators are undefined at `r`: `r ≤ 0` for the flat and
    /// hyperbolic cases, `sin r = 0` for the spherical one.
    pub fn is_singular(self, r: f64) -> bool {
        match self {
            SpaceKind::Euclidean | SpaceKind::Hyperbolic => r <= SINGULAR_TOL,
            SpaceKind::Spherical => r.sin().abs() <= SINGULAR_TOL,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "euclidean" => Ok(SpaceKind::Euclidean),
            "hyperbolic" => Ok(SpaceKind::Hyperbolic),
            "spherical" => Ok(SpaceKind::Spherical),
            other => Err(Error::config(format!(
                "unknown space '{other}' (expected euclidean, hyperbolic or spherical)"
            ))),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Hyperbolic => "hyperbolic",
            SpaceKind::Spherical => "spherical",
        })
    }
}

fn check_grid(space: SpaceKind, profile: &RadialProfile, min_len: usize) -> Result<()> {
    if profile.len() < min_len {
        return Err(Error::invalid(format!(
            "curved operator needs at least {min_len} nodes, got {}",
            profile.len()
        )));
    }
    if let Some(r) = profile.radii().into_iter().find(|&r| space.is_singular(r)) {
        return Err(Error::invalid(format!(
            "radius {r} is a singular node of the {space} operators"
        )));
    }
    Ok(())
}

/// `D_{m,r} u = u'' + (n − 1) C/S · u' − m(m + n − 2)/S² · u` by
/// second-order finite differences.
pub fn apply_d(
    space: SpaceKind,
    n: usize,
    m: usize,
    profile: &RadialProfile,
) -> Result<RadialProfile> {
    check_grid(space, profile, 4)?;
    let h = profile.step();
    let u = profile.values();
    let d1 = centered_first_derivative(u, h);
    let d2 = centered_second_derivative(u, h);
    let potential = (m * (m + n - 2)) as f64;
    let out = profile
        .radii()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let s = space.sine(r);
            d2[i] + (n - 1) as f64 * space.cotangent(r) * d1[i] - potential / (s * s) * u[i]
        })
        .collect();
    Ok(profile.with_values(out))
}

/// `Q_m u = Γ_1 ∘ … ∘ Γ_m u` with `Γ_k = ∂_r + (n + k − 2) C/S`; `Γ_m`
/// acts first.
pub fn apply_curved_q(
    space: SpaceKind,
    n: usize,
    m: usize,
    profile: &RadialProfile,
) -> Result<RadialProfile> {
    check_grid(space, profile, 3)?;
    let h = profile.step();
    let cot: Vec<f64> = profile
        .radii()
        .iter()
        .map(|&r| space.cotangent(r))
        .collect();
    let mut u = profile.values().to_vec();
    for k in (1..=m).rev() {
        let c = (n + k - 2) as f64;
        let du = centered_first_derivative(&u, h);
        for ((v, d), ct) in u.iter_mut().zip(du).zip(&cot) {
            *v = d + c * ct * *v;
        }
    }
    Ok(profile.with_values(u))
}

/// Max over the trimmed interior of `|Q_m(D_{m,r} u) − D_{0,r}(Q_m u)|`.
pub fn curved_intertwine_residual(
    space: SpaceKind,
    n: usize,
    m: usize,
    test: &RadialProfile,
) -> Result<f64> {
    let trim = intertwine_trim(m);
    if test.len() < 2 * trim + 3 {
        return Err(Error::invalid(format!(
            "{} nodes leave too few interior nodes after trimming {trim} per end",
            test.len()
        )));
    }
    let lhs = apply_curved_q(space, n, m, &apply_d(space, n, m, test)?)?;
    let rhs = apply_d(space, n, 0, &apply_curved_q(space, n, m, test)?)?;
    Ok(lhs
        .values()
        .iter()
        .zip(rhs.values())
        .skip(trim)
        .take(test.len() - 2 * trim)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
