use crate::darboux::BoundaryJet;
use crate::error::{Error, Result};
use crate::numerics::cumulative_integral;
use crate::profile::RadialProfile;

/// Where the cascade is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CascadeDirection {
    /// Anchor at the first node `a` and integrate outwards.
    ForwardFromA,
    /// Anchor at the last node `A` and integrate inwards.
    BackwardFromOuter,
}

/// Solve `Q_m f = g0` on the grid of `g0`, with `f`'s jet given at the anchor.
///
/// Writing `Q_m = L_0 ∘ … ∘ L_{m−1}`, `L_j = (r/(n+2j)) ∂_r + 1`, and
/// `h_0 = g0`, `h_m = f`, each level follows from the exact integrating factor
/// `h_{j+1}(r) = r^{−c} [b^c h_{j+1}(b) + c ∫_b^r τ^{c−1} h_j(τ) dτ]`,
/// `c = n + 2j`, with anchor `b`. The anchor values `h_{j+1}(b)` come from
/// applying `L_{j+1} ∘ … ∘ L_{m−1}` to the jet.
pub fn cascade_solve(
    n: usize,
    m: usize,
    g0: &RadialProfile,
    jet: &BoundaryJet,
    direction: CascadeDirection,
) -> Result<RadialProfile> {
    if m == 0 {
        return Ok(g0.clone());
    }
    if jet.len() != m {
        return Err(Error::invalid(format!(
            "jet has {} entries but m = {m}",
            jet.len()
        )));
    }
    let anchor = match direction {
        CascadeDirection::ForwardFromA => g0.start(),
        CascadeDirection::BackwardFromOuter => g0.end(),
    };
    if (jet.anchor - anchor).abs() > 1e-9 * anchor.abs().max(1.0) {
        return Err(Error::config(format!(
            "jet anchored at {} but the cascade needs a jet at {anchor}",
            jet.anchor
        )));
    }
    if !(g0.start() > 0.0) {
        return Err(Error::invalid("cascade needs a grid in r > 0"));
    }
    // tails[k] is the jet of h_k = L_k ∘ … ∘ L_{m−1} f
    let mut tails = vec![BoundaryJet::zeros(anchor, 0); m + 1];
    tails[m] = jet.clone();
    for k in (1..m).rev() {
        tails[k] = tails[k + 1].apply_factor((n + 2 * k) as f64);
    }
    let radii = g0.radii();
    let h = g0.step();
    let mut level = g0.values().to_vec();
    for j in 0..m {
        let c = (n + 2 * j) as f64;
        let integrand: Vec<f64> = radii
            .iter()
            .zip(&level)
            .map(|(r, v)| r.powf(c - 1.0) * v)
            .collect();
        let cum = cumulative_integral(&integrand, h);
        let total = *cum.last().unwrap();
        let start = anchor.powf(c) * tails[j + 1].value();
        level = radii
            .iter()
            .zip(&cum)
            .map(|(r, s)| {
                let from_anchor = match direction {
                    CascadeDirection::ForwardFromA => *s,
                    CascadeDirection::BackwardFromOuter => s - total,
                };
                (start + c * from_anchor) / r.powf(c)
            })
            .collect();
    }
    Ok(g0.with_values(level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::apply_q;
    use crate::harmonics::ModeIndex;

    fn g(m: usize, f: impl Fn(f64) -> f64) -> RadialProfile {
        RadialProfile::sample(ModeIndex::new(2, m, 1).unwrap(), 1.0, 3.0, 401, f).unwrap()
    }

    #[test]
    fn integrating_factor_closed_form() {
        for ua in [1.0, 0.3] {
            let jet = BoundaryJet::new(1.0, vec![ua]).unwrap();
            let f =
                cascade_solve(2, 1, &g(1, |_| 1.0), &jet, CascadeDirection::ForwardFromA).unwrap();
            for (r, v) in f.radii().iter().zip(f.values()) {
                assert!((v - (1.0 + (ua - 1.0) / (r * r))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn homogeneous_solutions_are_kernel_elements() {
        for m in 1..=4 {
            for i in 0..m {
                let p = -(2.0 + 2.0 * i as f64);
                for (dir, anchor) in [
                    (CascadeDirection::ForwardFromA, 1.0),
                    (CascadeDirection::BackwardFromOuter, 3.0),
                ] {
                    let jet = BoundaryJet::of_power(anchor, p, 1.0, m);
                    let f = cascade_solve(2, m, &g(m, |_| 0.0), &jet, dir).unwrap();
                    for (r, v) in f.radii().iter().zip(f.values()) {
                        assert!((v - r.powf(p)).abs() < 1e-6, "{m} {i} {r} {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn inverts_q() {
        for n in [2, 3] {
            for m in 1..=4 {
                let f_true = |r: f64| (-(r - 2.0) * (r - 2.0)).exp() + 0.1 * r;
                let truth = g(m, f_true);
                let g0 = apply_q(
                    n,
                    m,
                    &RadialProfile::sample(truth.mode, 0.5, 3.5, 1201, f_true).unwrap(),
                )
                .unwrap();
                // resample Q f on the [1, 3] grid
                let g0 = truth.with_values(
                    truth
                        .radii()
                        .iter()
                        .map(|r| g0.interpolate(*r).unwrap())
                        .collect(),
                );
                let jet_nodes = RadialProfile::sample(truth.mode, 0.9, 1.0, 41, f_true).unwrap();
                let jet = crate::reconstruct::boundary_jet(&jet_nodes, 1.0, m, 4).unwrap();
                let f = cascade_solve(n, m, &g0, &jet, CascadeDirection::ForwardFromA).unwrap();
                let err = f
                    .values()
                    .iter()
                    .zip(truth.values())
                    .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
                assert!(err < 1e-4, "{n} {m} {err}");
            }
        }
    }

    #[test]
    fn wrong_anchor_is_config_error() {
        let jet = BoundaryJet::new(1.0, vec![1.0]).unwrap();
        let r = cascade_solve(
            2,
            1,
            &g(1, |_| 1.0),
            &jet,
            CascadeDirection::BackwardFromOuter,
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
