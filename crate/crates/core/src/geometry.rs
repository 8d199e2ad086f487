//! Annulus geometry and its prior regions.

use crate::error::{Error, Result};

/// The annulus `Ann(a, A)` together with the interior prior bound `r0` and
/// an optional exterior prior bound `R_ext`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusGeometry {
    a: f64,
    outer: f64,
    r0: f64,
    r_ext: Option<f64>,
}

impl AnnulusGeometry {
    /// Validate `0 ≤ r0 < a < A` and, when present, `A < R_ext`.
    pub fn new(a: f64, outer: f64, r0: f64, r_ext: Option<f64>) -> Result<Self> {
        let finite =
            [a, outer, r0].iter().all(|v| v.is_finite()) && r_ext.is_none_or(f64::is_finite);
        if !finite {
            return Err(Error::config("annulus bounds must be finite"));
        }
        if !(a > 0.0) {
            return Err(Error::config(format!("a > 0 violated (a = {a})")));
        }
        if !(a < outer) {
            return Err(Error::config(format!(
                "a < A violated (a = {a}, A = {outer})"
            )));
        }
        if !(r0 >= 0.0) {
            return Err(Error::config(format!("0 <= r0 violated (r0 = {r0})")));
        }
        if !(r0 < a) {
            return Err(Error::config(format!(
                "r0 < a violated (r0 = {r0}, a = {a})"
            )));
        }
        if let Some(re) = r_ext {
            if !(outer < re) {
                return Err(Error::config(format!(
                    "A < R_ext violated (A = {outer}, R_ext = {re})"
                )));
            }
        }
        Ok(Self {
            a,
            outer,
            r0,
            r_ext,
        })
    }

    /// Inner radius `a`.
    pub fn inner(&self) -> f64 {
        self.a
    }

    /// Outer radius `A`.
    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r_ext(&self) -> Option<f64> {
        self.r_ext
    }

    /// Largest center radius usable at sphere radius `s`: `min(s − a, A − s)`.
    pub fn center_cap(&self, s: f64) -> f64 {
        (s - self.a).min(self.outer - s)
    }

    /// `|x| + a < t` and `|x| + t < A`.
    pub fn admits(&self, center_norm: f64, t: f64) -> bool {
        center_norm + self.a < t && center_norm + t < self.outer
    }
}
