//! Line-based `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Keys: `n`, `a`, `A`
//! (required), `r0`, `R_ext`, `M_max`, `radial_points`, `angular_points`,
//! `quad_order`, `cfl`, `s_points`, `extrap_radii`, `fd_order`,
//! `prior = interior|exterior`, `out_dir`, `phantom` (a phantom description),
//! `seed`, `noise_sigma`, `center_radius_max`, `trim`, `kernel_tol`.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{parse_phantom, ScalarField};
use crate::geometry::AnnulusGeometry;
use crate::harmonics::AngularSampleSet;
use crate::io::{format_f64, read_text};
use crate::transform::Sampling;

/// Which side of the annulus supplies the prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorSide {
    Interior,
    Exterior,
}

impl fmt::Display for PriorSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorSide::Interior => "interior",
            PriorSide::Exterior => "exterior",
        })
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub geometry: AnnulusGeometry,
    pub m_max: usize,
    pub radial_points: usize,
    pub angular_points: usize,
    pub quad_order: usize,
    pub cfl: f64,
    pub s_points: usize,
    pub extrap_radii: usize,
    pub fd_order: usize,
    pub prior: PriorSide,
    pub out_dir: Option<PathBuf>,
    pub phantom: Option<String>,
    pub seed: u64,
    pub noise_sigma: f64,
    pub center_radius_max: f64,
    pub trim: f64,
    pub kernel_tol: f64,
}

const KEYS: &[&str] = &[
    "n",
    "a",
    "A",
    "r0",
    "R_ext",
    "M_max",
    "radial_points",
    "angular_points",
    "quad_order",
    "cfl",
    "s_points",
    "extrap_radii",
    "fd_order",
    "prior",
    "out_dir",
    "phantom",
    "seed",
    "noise_sigma",
    "center_radius_max",
    "trim",
    "kernel_tol",
];

impl RunConfig {
    /// Defaults for everything except `n`, `a` and `A`.
    pub fn with_defaults(n: usize, geometry: AnnulusGeometry) -> Self {
        Self {
            n,
            geometry,
            m_max: 8,
            radial_points: 512,
            angular_points: 32,
            quad_order: 256,
            cfl: 0.9,
            s_points: 201,
            extrap_radii: 4,
            fd_order: 4,
            prior: PriorSide::Interior,
            out_dir: None,
            phantom: None,
            seed: 0,
            noise_sigma: 0.0,
            center_radius_max: 0.2,
            trim: 0.2,
            kernel_tol: 1e-6,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
            .map_err(|e| Error::config(format!("{}: {}", path.display(), strip(&e))))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(format!(
                    "line {}: expected key = value, got {line:?}",
                    idx + 1
                ))
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::config(format!(
                    "line {}: unknown key {k:?}",
                    idx + 1
                )));
            }
            if pairs.iter().any(|p| p.1 == k) {
                return Err(Error::config(format!(
                    "line {}: duplicate key {k:?}",
                    idx + 1
                )));
            }
            pairs.push((idx + 1, k.to_string(), v.trim().to_string()));
        }
        let find = |k: &str| pairs.iter().find(|p| p.1 == k);
        let num = |k: &str| -> Result<Option<f64>> {
            match find(k) {
                None => Ok(None),
                Some((line, _, v)) => {
                    let x: f64 = v.parse().map_err(|_| {
                        Error::config(format!("line {line}: {k} is not a number: {v:?}"))
                    })?;
                    if !x.is_finite() {
                        return Err(Error::config(format!("line {line}: {k} is not finite")));
                    }
                    Ok(Some(x))
                }
            }
        };
        let int = |k: &str| -> Result<Option<usize>> {
            match find(k) {
                None => Ok(None),
                Some((line, _, v)) => v.parse().map(Some).map_err(|_| {
                    Error::config(format!(
                        "line {line}: {k} must be a nonnegative integer, got {v:?}"
                    ))
                }),
            }
        };
        let required = |k: &str| Error::config(format!("missing required key {k:?}"));

        let n = int("n")?.ok_or_else(|| required("n"))?;
        if n != 2 && n != 3 {
            return Err(Error::config(format!("n must be 2 or 3, got {n}")));
        }
        let a = num("a")?.ok_or_else(|| required("a"))?;
        let outer = num("A")?.ok_or_else(|| required("A"))?;
        let geometry = AnnulusGeometry::new(a, outer, num("r0")?.unwrap_or(0.0), num("R_ext")?)?;

        let mut c = Self::with_defaults(n, geometry);
        if let Some(v) = int("M_max")? {
            c.m_max = v;
        }
        if let Some(v) = int("radial_points")? {
            c.radial_points = v;
        }
        if let Some(v) = int("angular_points")? {
            c.angular_points = v;
        }
        if let Some(v) = int("quad_order")? {
            c.quad_order = v;
        }
        if let Some(v) = num("cfl")? {
            c.cfl = v;
        }
        if let Some(v) = int("s_points")? {
            c.s_points = v;
        }
        if let Some(v) = int("extrap_radii")? {
            c.extrap_radii = v;
        }
        if let Some(v) = int("fd_order")? {
            c.fd_order = v;
        }
        if let Some((line, _, v)) = find("prior") {
            c.prior = match v.as_str() {
                "interior" => PriorSide::Interior,
                "exterior" => PriorSide::Exterior,
                _ => {
                    return Err(Error::config(format!(
                        "line {line}: prior must be interior or exterior, got {v:?}"
                    )))
                }
            };
        }
        if let Some((_, _, v)) = find("out_dir") {
            c.out_dir = Some(PathBuf::from(v));
        }
        if let Some((_, _, v)) = find("phantom") {
            c.phantom = Some(v.clone());
        }
        if let Some((line, _, v)) = find("seed") {
            c.seed = v.parse().map_err(|_| {
                Error::config(format!("line {line}: seed must be a nonnegative integer"))
            })?;
        }
        if let Some(v) = num("noise_sigma")? {
            c.noise_sigma = v;
        }
        if let Some(v) = num("center_radius_max")? {
            c.center_radius_max = v;
        }
        if let Some(v) = num("trim")? {
            c.trim = v;
        }
        if let Some(v) = num("kernel_tol")? {
            c.kernel_tol = v;
        }
        c.validate()?;
        Ok(c)
    }

    /// Check ranges that do not involve the geometry.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::config(format!("{what} violated")))
            }
        };
        check(self.cfl > 0.0 && self.cfl <= 1.0, "0 < cfl <= 1")?;
        check(self.radial_points >= 8, "radial_points >= 8")?;
        check(self.quad_order >= 8, "quad_order >= 8")?;
        check(self.s_points >= 8, "s_points >= 8")?;
        check(self.extrap_radii >= 2, "extrap_radii >= 2")?;
        check(self.fd_order >= 1, "fd_order >= 1")?;
        check(
            self.angular_points >= 2 * self.m_max + 2,
            "angular_points >= 2*M_max + 2",
        )?;
        check(self.noise_sigma >= 0.0, "noise_sigma >= 0")?;
        check(self.center_radius_max > 0.0, "center_radius_max > 0")?;
        let half = 0.5 * (self.geometry.outer() - self.geometry.inner());
        check(
            self.trim >= 0.0 && self.trim < half,
            "0 <= trim < (A - a)/2",
        )?;
        check(self.kernel_tol > 0.0, "kernel_tol > 0")?;
        if self.prior == PriorSide::Exterior {
            check(
                self.geometry.r_ext().is_some(),
                "exterior prior requires R_ext",
            )?;
        }
        if let Some(p) = &self.phantom {
            parse_phantom(self.n, p)?;
        }
        Ok(())
    }

    /// The configured phantom, if any.
    pub fn phantom_field(&self) -> Result<Option<ScalarField>> {
        self.phantom
            .as_deref()
            .map(|p| parse_phantom(self.n, p))
            .transpose()
    }

    /// Forward sampling matched to reconstruction: at each of `s_points`
    /// sphere radii, the origin plus `extrap_radii` rings of
    /// `angular_points` directions.
    pub fn sampling(&self) -> Result<Sampling> {
        let set = AngularSampleSet::new(self.n, self.angular_points)?;
        Sampling::annulus_rings(
            &self.geometry,
            self.s_points,
            self.extrap_radii,
            &set,
            self.center_radius_max,
        )
    }

    /// The evaluation annulus `[a + trim, A − trim]`.
    pub fn trimmed_range(&self) -> (f64, f64) {
        (
            self.geometry.inner() + self.trim,
            self.geometry.outer() - self.trim,
        )
    }

    /// Serialize in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let g = &self.geometry;
        let mut out = String::new();
        let mut put = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        put("n", self.n.to_string());
        put("a", format_f64(g.inner()));
        put("A", format_f64(g.outer()));
        put("r0", format_f64(g.r0()));
        if let Some(re) = g.r_ext() {
            put("R_ext", format_f64(re));
        }
        put("M_max", self.m_max.to_string());
        put("radial_points", self.radial_points.to_string());
        put("angular_points", self.angular_points.to_string());
        put("quad_order", self.quad_order.to_string());
        put("cfl", format_f64(self.cfl));
        put("s_points", self.s_points.to_string());
        put("extrap_radii", self.extrap_radii.to_string());
        put("fd_order", self.fd_order.to_string());
        put("prior", self.prior.to_string());
        if let Some(d) = &self.out_dir {
            put("out_dir", d.display().to_string());
        }
        if let Some(p) = &self.phantom {
            put("phantom", p.clone());
        }
        put("seed", self.seed.to_string());
        put("noise_sigma", format_f64(self.noise_sigma));
        put("center_radius_max", format_f64(self.center_radius_max));
        put("trim", format_f64(self.trim));
        put("kernel_tol", format_f64(self.kernel_tol));
        out
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}
