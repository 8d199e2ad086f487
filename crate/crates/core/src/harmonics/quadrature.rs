use std::f64::consts::PI;

use super::check_dim;
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// How the nodes of an [`AngularSampleSet`] are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularLayout {
    /// `count` equispaced points on the unit circle, starting at angle 0.
    Circle { count: usize },
    /// Gauss-Legendre in `cos θ` times equispaced azimuths.
    Product { polar: usize, azimuth: usize },
}

/// Quadrature nodes and weights on the unit sphere `S^{n-1}`.
#[derive(Debug, Clone)]
pub struct AngularSampleSet {
    n: usize,
    layout: AngularLayout,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    /// Polar node values `cos θ_j`, ascending (product layout only).
    polar_nodes: Vec<f64>,
}

impl AngularSampleSet {
    /// Standard rule of the given order: `order` equispaced points for
    /// `n = 2`; `order` polar Gauss nodes times `2·order` azimuths for `n = 3`.
    pub fn new(n: usize, order: usize) -> Result<Self> {
        check_dim(n)?;
        if order == 0 {
            return Err(Error::invalid("angular order must be positive"));
        }
        match n {
            2 => Ok(Self::circle(order)),
            _ => Ok(Self::product(order, 2 * order)),
        }
    }

    fn circle(count: usize) -> Self {
        let w = 2.0 * PI / count as f64;
        let nodes = (0..count)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / count as f64;
                [phi.cos(), phi.sin(), 0.0]
            })
            .collect();
        Self {
            n: 2,
            layout: AngularLayout::Circle { count },
            nodes,
            weights: vec![w; count],
            polar_nodes: Vec::new(),
        }
    }

    fn product(polar: usize, azimuth: usize) -> Self {
        let (z, wz) = gauss_legendre(polar);
        let dphi = 2.0 * PI / azimuth as f64;
        let mut nodes = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        for (zj, wj) in z.iter().zip(&wz) {
            let s = (1.0 - zj * zj).max(0.0).sqrt();
            for k in 0..azimuth {
                let phi = dphi * k as f64;
                nodes.push([s * phi.cos(), s * phi.sin(), *zj]);
                weights.push(wj * dphi);
            }
        }
        Self {
            n: 3,
            layout: AngularLayout::Product { polar, azimuth },
            nodes,
            weights,
            polar_nodes: z,
        }
    }

    /// Rebuild the rule that has exactly `count` nodes, if one exists.
    pub fn with_node_count(n: usize, count: usize) -> Result<Self> {
        check_dim(n)?;
        match n {
            2 if count > 0 => Ok(Self::circle(count)),
            3 => {
                let p = ((count as f64 / 2.0).sqrt()).round() as usize;
                if p > 0 && 2 * p * p == count {
                    Ok(Self::product(p, 2 * p))
                } else {
                    Err(Error::invalid(format!(
                        "{count} directions do not form a product sphere grid"
                    )))
                }
            }
            _ => Err(Error::invalid("empty angular sample set")),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> AngularLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unit directions, each padded to three components.
    pub fn nodes(&self) -> Vec<&[f64]> {
        self.nodes.iter().map(|v| &v[..self.n]).collect()
    }

    pub(crate) fn node(&self, k: usize) -> &[f64] {
        &self.nodes[k][..self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Highest degree `m` for which projection onto `Y_ml` is exact for
    /// integrands band-limited to degree `m`.
    pub fn resolved_degree(&self) -> usize {
        match self.layout {
            AngularLayout::Circle { count } => (count.saturating_sub(2)) / 2,
            AngularLayout::Product { polar, azimuth } => {
                polar.saturating_sub(1).min(azimuth.saturating_sub(2) / 2)
            }
        }
    }

    /// Index of the node matching `direction`, if it lies on the grid.
    pub fn locate(&self, direction: &[f64], tol: f64) -> Option<usize> {
        match self.layout {
            AngularLayout::Circle { count } => {
                let phi = direction[1].atan2(direction[0]).rem_euclid(2.0 * PI);
                let k = (phi / (2.0 * PI) * count as f64).round() as usize % count;
                self.close(k, direction, tol)
            }
            AngularLayout::Product { azimuth, .. } => {
                let z = direction[2];
                let j = self
                    .polar_nodes
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))?
                    .0;
                let phi = direction[1].atan2(direction[0]).rem_euclid(2.0 * PI);
                let k = (phi / (2.0 * PI) * azimuth as f64).round() as usize % azimuth;
                self.close(j * azimuth + k, direction, tol)
            }
        }
    }

    fn close(&self, k: usize, direction: &[f64], tol: f64) -> Option<usize> {
        let d: f64 = self.nodes[k][..self.n]
            .iter()
            .zip(direction)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        (d <= tol).then_some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants() {
        for (n, order) in [(2usize, 7usize), (2, 256), (3, 5), (3, 40)] {
            let set = AngularSampleSet::new(n, order).unwrap();
            for u in set.nodes() {
                let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
            assert!(set.weights().iter().all(|w| *w > 0.0));
            let total: f64 = set.weights().iter().sum();
            let expect = if n == 2 { 2.0 * PI } else { 4.0 * PI };
            assert!((total - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn locate_round_trips() {
        for (n, order) in [(2usize, 12usize), (3, 6)] {
            let set = AngularSampleSet::new(n, order).unwrap();
            for k in 0..set.len() {
                assert_eq!(set.locate(set.node(k), 1e-12), Some(k));
            }
            let rebuilt = AngularSampleSet::with_node_count(n, set.len()).unwrap();
            assert_eq!(rebuilt.layout(), set.layout());
        }
        assert!(AngularSampleSet::with_node_count(3, 17).is_err());
    }

    #[test]
    fn resolution() {
        assert_eq!(AngularSampleSet::new(2, 10).unwrap().resolved_degree(), 4);
        assert_eq!(AngularSampleSet::new(2, 9).unwrap().resolved_degree(), 3);
        assert_eq!(AngularSampleSet::new(3, 5).unwrap().resolved_degree(), 4);
    }
}
