//! Radial coefficient profiles sampled on uniform grids.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harmonics::ModeIndex;
use crate::io::{format_f64, parse_csv_rows, read_text, write_text};
use crate::numerics::cubic_interpolate;

const UNIFORM_TOL: f64 = 1e-12;

/// Samples of a radial function `r ↦ u(r)` on `start + i·step`, labelled
/// with the harmonic mode they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub mode: ModeIndex,
    start: f64,
    step: f64,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(mode: ModeIndex, start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::invalid(format!(
                "radial grid needs finite start and positive step (start {start}, step {step})"
            )));
        }
        if values.is_empty() {
            return Err(Error::invalid("radial profile has no samples"));
        }
        Ok(Self {
            mode,
            start,
            step,
            values,
        })
    }

    /// Build from explicit radii, checking they are ascending and uniform.
    pub fn from_grid(mode: ModeIndex, radii: &[f64], values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.len() < 2 {
            return Err(Error::invalid("a radial grid needs at least two nodes"));
        }
        let step = (radii[radii.len() - 1] - radii[0]) / (radii.len() - 1) as f64;
        for (i, r) in radii.iter().enumerate() {
            let expect = radii[0] + i as f64 * step;
            if (r - expect).abs() > UNIFORM_TOL * step.max(r.abs()).max(1.0) {
                return Err(Error::invalid(format!(
                    "radial grid is not ascending and uniform at node {i}"
                )));
            }
        }
        Self::new(mode, radii[0], step, values)
    }

    /// Sample a closed form on `count` uniform nodes spanning `[lo, hi]`.
    pub fn sample(
        mode: ModeIndex,
        lo: f64,
        hi: f64,
        count: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if count < 2 || !(hi > lo) {
            return Err(Error::invalid(format!(
                "cannot sample [{lo}, {hi}] with {count} nodes"
            )));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let values = (0..count).map(|i| f(lo + i as f64 * step)).collect();
        Self::new(mode, lo, step, values)
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn end(&self) -> f64 {
        self.radius(self.values.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.radius(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, r: f64) -> bool {
        let slack = 1e-12 * self.end().abs().max(1.0);
        r >= self.start - slack && r <= self.end() + slack
    }

    /// Cubic interpolation; errors outside the sampled range.
    pub fn interpolate(&self, r: f64) -> Result<f64> {
        if !self.contains(r) {
            return Err(Error::invalid(format!(
                "radius {r} outside profile range [{}, {}]",
                self.start,
                self.end()
            )));
        }
        Ok(cubic_interpolate(self.start, self.step, &self.values, r))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Restrict to nodes with index in `[lo, hi)`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if lo >= hi || hi > self.values.len() {
            return Err(Error::invalid(format!(
                "invalid node range {lo}..{hi} of {}",
                self.values.len()
            )));
        }
        Self::new(
            self.mode,
            self.radius(lo),
            self.step,
            self.values[lo..hi].to_vec(),
        )
    }

    /// CSV text with header `r,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{},{}", format_f64(self.radius(i)), format_f64(*v));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }

    pub fn read_csv(path: &Path, mode: ModeIndex) -> Result<Self> {
        let text = read_text(path)?;
        Self::parse_csv(&text, path, mode)
    }

    pub fn parse_csv(text: &str, path: &Path, mode: ModeIndex) -> Result<Self> {
        let rows = parse_csv_rows(text, path, &["r", "value"])?;
        if rows.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "profile has no rows".into(),
            });
        }
        let radii: Vec<f64> = rows.iter().map(|(_, row)| row[0]).collect();
        let values: Vec<f64> = rows.iter().map(|(_, row)| row[1]).collect();
        if radii.len() == 1 {
            return Self::new(mode, radii[0], 1.0, values);
        }
        Self::from_grid(mode, &radii, values).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 2,
            message: e.to_string(),
        })
    }
}
