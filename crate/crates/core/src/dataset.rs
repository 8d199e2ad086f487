//! Spherical mean samples and their CSV form.
//!
//! File layout: `# key=value` metadata lines (`n`, `a`, `A`, `r0`, optional
//! `R_ext`, `admissible`), then the header `cx,cy[,cz],t,value` and one row per
//! sample.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::AnnulusGeometry;
use crate::harmonics::check_dim;
use crate::io::{format_f64, parse_csv_rows, parse_error, read_text, write_text};

/// One value `R(f)(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalMeanSample {
    pub center: Vec<f64>,
    pub radius: f64,
    pub value: f64,
}

/// A collection of samples over an annulus.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalMeanDataset {
    dim: usize,
    geometry: AnnulusGeometry,
    samples: Vec<SphericalMeanSample>,
    admissible: bool,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl SphericalMeanDataset {
    /// Build a dataset; `admissible` is computed from the samples.
    pub fn new(
        dim: usize,
        geometry: AnnulusGeometry,
        samples: Vec<SphericalMeanSample>,
    ) -> Result<Self> {
        check_dim(dim)?;
        for (k, s) in samples.iter().enumerate() {
            if s.center.len() != dim {
                return Err(Error::invalid(format!(
                    "sample {k}: center has {} components, expected {dim}",
                    s.center.len()
                )));
            }
            if !(s.radius > 0.0) {
                return Err(Error::invalid(format!(
                    "sample {k}: radius must be positive"
                )));
            }
        }
        let admissible = samples
            .iter()
            .all(|s| geometry.admits(norm(&s.center), s.radius));
        Ok(Self {
            dim,
            geometry,
            samples,
            admissible,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn geometry(&self) -> &AnnulusGeometry {
        &self.geometry
    }

    pub fn samples(&self) -> &[SphericalMeanSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Every sample lies in the admissible region of the annulus.
    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    pub fn max_abs_value(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.value.abs()))
    }

    /// Add independent `N(0, sigma²)` noise to every value. `sigma = 0`
    /// leaves the dataset untouched.
    pub fn add_noise(&mut self, sigma: f64, seed: u64) -> Result<()> {
        if sigma == 0.0 {
            return Ok(());
        }
        let normal = Normal::new(0.0, sigma)
            .map_err(|_| Error::config(format!("noise sigma must be nonnegative, got {sigma}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in &mut self.samples {
            s.value += normal.sample(&mut rng);
        }
        Ok(())
    }

    fn header(&self) -> &'static [&'static str] {
        header_for(self.dim)
    }

    pub fn to_csv(&self) -> String {
        let g = &self.geometry;
        let mut out = String::new();
        writeln!(out, "# n={}", self.dim).unwrap();
        writeln!(out, "# a={}", format_f64(g.inner())).unwrap();
        writeln!(out, "# A={}", format_f64(g.outer())).unwrap();
        writeln!(out, "# r0={}", format_f64(g.r0())).unwrap();
        if let Some(re) = g.r_ext() {
            writeln!(out, "# R_ext={}", format_f64(re)).unwrap();
        }
        writeln!(out, "# admissible={}", self.admissible).unwrap();
        writeln!(out, "{}", self.header().join(",")).unwrap();
        for s in &self.samples {
            let mut row: Vec<String> = s.center.iter().map(|v| format_f64(*v)).collect();
            row.push(format_f64(s.radius));
            row.push(format_f64(s.value));
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::parse_csv(&read_text(path)?, path)
    }

    pub fn parse_csv(text: &str, path: &Path) -> Result<Self> {
        let mut meta = std::collections::BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let Some(body) = line.strip_prefix('#') else {
                break;
            };
            if let Some((k, v)) = body.split_once('=') {
                meta.insert(k.trim().to_string(), (idx + 1, v.trim().to_string()));
            }
        }
        let get = |key: &str| -> Result<f64> {
            let (line, v) = meta.get(key).ok_or_else(|| {
                parse_error(path, 1, format!("missing metadata line '# {key}=...'"))
            })?;
            crate::io::parse_finite(v, path, *line)
        };
        let dim = get("n")? as usize;
        check_dim(dim).map_err(|e| parse_error(path, meta["n"].0, e.to_string()))?;
        let r_ext = if meta.contains_key("R_ext") {
            Some(get("R_ext")?)
        } else {
            None
        };
        let geometry = AnnulusGeometry::new(get("a")?, get("A")?, get("r0")?, r_ext)
            .map_err(|e| parse_error(path, 1, e.to_string()))?;
        let rows = parse_csv_rows(text, path, header_for(dim))?;
        let samples = rows
            .into_iter()
            .map(|(line, v)| {
                if !(v[dim] > 0.0) {
                    return Err(parse_error(path, line, "sphere radius must be positive"));
                }
                Ok(SphericalMeanSample {
                    center: v[..dim].to_vec(),
                    radius: v[dim],
                    value: v[dim + 1],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ds = Self::new(dim, geometry, samples)?;
        if let Some((line, flag)) = meta.get("admissible") {
            let stored: bool = flag
                .parse()
                .map_err(|_| parse_error(path, *line, format!("bad admissible flag {flag:?}")))?;
            if stored != ds.admissible {
                return Err(parse_error(
                    path,
                    *line,
                    format!(
                        "stored admissible={stored} but samples give {}",
                        ds.admissible
                    ),
                ));
            }
        }
        Ok(ds)
    }
}

fn header_for(dim: usize) -> &'static [&'static str] {
    if dim == 2 {
        &["cx", "cy", "t", "value"]
    } else {
        &["cx", "cy", "cz", "t", "value"]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> AnnulusGeometry {
        AnnulusGeometry::new(1.0, 3.0, 0.5, Some(3.5)).unwrap()
    }

    #[test]
    fn empty_round_trip() {
        let ds = SphericalMeanDataset::new(2, geom(), vec![]).unwrap();
        let text = ds.to_csv();
        assert!(text.trim_end().ends_with("cx,cy,t,value"));
        let back = SphericalMeanDataset::parse_csv(&text, Path::new("mem")).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn single_round_trip() {
        let s = SphericalMeanSample {
            center: vec![0.1, -0.2, 0.3],
            radius: 2.0 / 3.0 + 1.0,
            value: std::f64::consts::PI * 1e-9,
        };
        let ds = SphericalMeanDataset::new(3, geom(), vec![s]).unwrap();
        let back = SphericalMeanDataset::parse_csv(&ds.to_csv(), Path::new("mem")).unwrap();
        assert_eq!(back, ds);
        assert!(back.is_admissible());
    }

    #[test]
    fn rejects_bad_rows() {
        let ds = SphericalMeanDataset::new(2, geom(), vec![]).unwrap();
        let base = ds.to_csv();
        for (row, line) in [
            ("0,0,2", 8),
            ("0,0,2,NaN", 8),
            ("0,0,2,x", 8),
            ("0,0,-1,1", 8),
        ] {
            let text = format!("{base}{row}\n");
            match SphericalMeanDataset::parse_csv(&text, Path::new("d.csv")) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{row}"),
                other => panic!("{row}: {other:?}"),
            }
        }
    }

    #[test]
    fn admissibility_flag_must_match() {
        let text = "# n=2\n# a=1\n# A=3\n# r0=0\n# admissible=true\ncx,cy,t,value\n0,0,1,0\n";
        assert!(SphericalMeanDataset::parse_csv(text, Path::new("d")).is_err());
        let ok = text.replace("true", "false");
        let ds = SphericalMeanDataset::parse_csv(&ok, Path::new("d")).unwrap();
        assert!(!ds.is_admissible());
    }

    #[test]
    fn zero_sigma_noise_is_identity() {
        let s = SphericalMeanSample {
            center: vec![0.0, 0.0],
            radius: 2.0,
            value: 0.25,
        };
        let mut ds = SphericalMeanDataset::new(2, geom(), vec![s]).unwrap();
        let before = ds.clone();
        ds.add_noise(0.0, 7).unwrap();
        assert_eq!(ds, before);
        ds.add_noise(0.1, 7).unwrap();
        assert_ne!(ds, before);
    }
}
