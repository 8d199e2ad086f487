use crate::error::{Error, Result};

/// Derivatives `u(anchor), u'(anchor), …` of a radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryJet {
    pub anchor: f64,
    pub values: Vec<f64>,
}

impl BoundaryJet {
    pub fn new(anchor: f64, values: Vec<f64>) -> Result<Self> {
        if !anchor.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("boundary jet must be finite"));
        }
        Ok(Self { anchor, values })
    }

    pub fn zeros(anchor: f64, len: usize) -> Self {
        Self {
            anchor,
            values: vec![0.0; len],
        }
    }

    /// Jet of `c·r^p` at `anchor` with `len` entries.
    pub fn of_power(anchor: f64, p: f64, c: f64, len: usize) -> Self {
        let mut values = Vec::with_capacity(len);
        let mut falling = c;
        for k in 0..len {
            values.push(falling * anchor.powf(p - k as f64));
            falling *= p - k as f64;
        }
        Self { anchor, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Jet of `L u = (r/d) u' + u`, one entry shorter:
    /// `(L u)^{(k)} = (r u^{(k+1)} + k u^{(k)})/d + u^{(k)}`.
    pub fn apply_factor(&self, d: f64) -> Self {
        let r = self.anchor;
        let u = &self.values;
        let values = (0..u.len().saturating_sub(1))
            .map(|k| (r * u[k + 1] + k as f64 * u[k]) / d + u[k])
            .collect();
        Self { anchor: r, values }
    }

    /// Entry-wise sum; the shorter jet is padded with zeros.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        Self {
            anchor: self.anchor,
            values: (0..len)
                .map(|k| at(&self.values, k) + at(&other.values, k))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_jet() {
        let j = BoundaryJet::of_power(1.0, -2.0, 1.0, 3);
        assert_eq!(j.values, vec![1.0, -2.0, 6.0]);
    }

    #[test]
    fn factor_annihilates_its_kernel_power() {
        // (r/2) ∂ + 1 kills r^-2
        let j = BoundaryJet::of_power(1.7, -2.0, 3.0, 4).apply_factor(2.0);
        assert_eq!(j.len(), 3);
        assert!(j.values.iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn factor_scales_powers() {
        let p = 3.0;
        let d = 5.0;
        let j = BoundaryJet::of_power(1.3, p, 1.0, 4).apply_factor(d);
        let want = BoundaryJet::of_power(1.3, p, p / d + 1.0, 3);
        for (a, b) in j.values.iter().zip(&want.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
