use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{cubic_interpolate, gauss_legendre};
use crate::profile::RadialProfile;

const CELL_NODES: usize = 4;

/// `n(n+2)…(n+2(m−1)) / (2^{m−1} (m−1)!)`.
pub fn k_constant(n: usize, m: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..m {
        c *= (n + 2 * i) as f64;
    }
    for j in 1..m {
        c /= 2.0 * j as f64;
    }
    c
}

/// Per-cell Gauss nodes with the cubic interpolant of `g0` evaluated there.
struct CellRule {
    nodes: Vec<f64>,
    weighted: Vec<f64>,
}

impl CellRule {
    fn new(n: usize, g0: &RadialProfile) -> Self {
        let (x, w) = gauss_legendre(CELL_NODES);
        let h = g0.step();
        let cells = g0.len() - 1;
        let mut nodes = Vec::with_capacity(cells * CELL_NODES);
        let mut weighted = Vec::with_capacity(cells * CELL_NODES);
        for k in 0..cells {
            let lo = g0.radius(k);
            for (xq, wq) in x.iter().zip(&w) {
                let tau = lo + 0.5 * h * (xq + 1.0);
                let g = cubic_interpolate(g0.start(), h, g0.values(), tau);
                nodes.push(tau);
                weighted.push(0.5 * h * wq * g * tau.powi(n as i32 - 1));
            }
        }
        Self { nodes, weighted }
    }
}

fn partial_cell(n: usize, m: usize, g0: &RadialProfile, lo: f64, r: f64) -> f64 {
    if r <= lo {
        return 0.0;
    }
    let (x, w) = gauss_legendre(CELL_NODES);
    let half = 0.5 * (r - lo);
    x.iter()
        .zip(&w)
        .map(|(xq, wq)| {
            let tau = lo + half * (xq + 1.0);
            let g = cubic_interpolate(g0.start(), g0.step(), g0.values(), tau);
            half * wq * g * tau.powi(n as i32 - 1) * (r * r - tau * tau).powi(m as i32 - 1)
        })
        .sum()
}

fn check(m: usize, g0: &RadialProfile) -> Result<()> {
    if g0.len() < 4 {
        return Err(Error::invalid("k integral needs at least 4 trace nodes"));
    }
    if m > 0 && !(g0.start() > 0.0) {
        return Err(Error::invalid("k integral anchors at a > 0"));
    }
    Ok(())
}

/// `k_ml(r) = C_m r^{−(n+2(m−1))} ∫_a^r g0(τ) τ^{n−1} (r² − τ²)^{m−1} dτ`,
/// `a = g0.start()`. For `m = 0` this is `g0(r)`.
///
/// The integral uses four Gauss points per grid cell on the cubic
/// interpolant of `g0`, with a partial cell at `r`.
pub fn k_integral(n: usize, m: usize, g0: &RadialProfile, r: f64) -> Result<f64> {
    check(m, g0)?;
    let a = g0.start();
    if r < a - 1e-12 * a.max(1.0) {
        return Err(Error::invalid(format!(
            "k is anchored at a = {a}; got r = {r}"
        )));
    }
    if !g0.contains(r) {
        return Err(Error::invalid(format!(
            "r = {r} beyond the trace grid end {}",
            g0.end()
        )));
    }
    if m == 0 {
        return g0.interpolate(r);
    }
    let r = r.max(a);
    let cells = (((r - a) / g0.step()) + 1e-9).floor() as usize;
    let cells = cells.min(g0.len() - 1);
    let rule = CellRule::new(n, g0);
    let full: f64 = rule.nodes[..cells * CELL_NODES]
        .iter()
        .zip(&rule.weighted)
        .map(|(tau, w)| w * (r * r - tau * tau).powi(m as i32 - 1))
        .sum();
    let part = partial_cell(n, m, g0, g0.radius(cells), r);
    Ok(k_constant(n, m) * r.powi(-((n + 2 * (m - 1)) as i32)) * (full + part))
}

/// [`k_integral`] at every node of the trace grid.
pub fn k_profile(n: usize, m: usize, g0: &RadialProfile) -> Result<RadialProfile> {
    check(m, g0)?;
    if m == 0 {
        return Ok(g0.clone());
    }
    let rule = CellRule::new(n, g0);
    let c = k_constant(n, m);
    let values = (0..g0.len())
        .into_par_iter()
        .map(|i| {
            let r = g0.radius(i);
            let s: f64 = rule.nodes[..i * CELL_NODES]
                .iter()
                .zip(&rule.weighted)
                .map(|(tau, w)| w * (r * r - tau * tau).powi(m as i32 - 1))
                .sum();
            c * r.powi(-((n + 2 * (m - 1)) as i32)) * s
        })
        .collect();
    Ok(g0.with_values(values))
}
