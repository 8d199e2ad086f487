use nalgebra::{DMatrix, DVector};

use crate::darboux::BoundaryJet;
use crate::error::{Error, Result};
use crate::numerics::fornberg_weights;
use crate::profile::RadialProfile;

const ANCHOR_TOL: f64 = 1e-9;

/// One-sided finite-difference jet `(u(anchor), …, u^{(m−1)}(anchor))` of a
/// prior profile that ends (interior prior) or starts (exterior prior) at
/// `anchor`. Uses the `fd_order + m` nodes nearest the anchor.
pub fn boundary_jet(
    prior: &RadialProfile,
    anchor: f64,
    m: usize,
    fd_order: usize,
) -> Result<BoundaryJet> {
    if m == 0 {
        return BoundaryJet::new(anchor, Vec::new());
    }
    let tol = ANCHOR_TOL * anchor.abs().max(1.0);
    let needed = fd_order + m;
    if prior.len() < needed {
        return Err(Error::invalid(format!(
            "prior has {} nodes; a jet of order {m} at accuracy {fd_order} needs {needed}",
            prior.len()
        )));
    }
    let last = prior.len() - 1;
    let idx: Vec<usize> = if (prior.end() - anchor).abs() <= tol {
        (last + 1 - needed..=last).rev().collect()
    } else if (prior.start() - anchor).abs() <= tol {
        (0..needed).collect()
    } else {
        return Err(Error::invalid(format!(
            "prior grid [{}, {}] does not reach the anchor {anchor}",
            prior.start(),
            prior.end()
        )));
    };
    let nodes: Vec<f64> = idx.iter().map(|&i| prior.radius(i) - anchor).collect();
    let w = fornberg_weights(0.0, &nodes, m - 1);
    let values = (0..m)
        .map(|k| {
            idx.iter()
                .zip(&w[k])
                .map(|(&i, wk)| wk * prior.values()[i])
                .sum()
        })
        .collect();
    BoundaryJet::new(anchor, values)
}

/// Coefficients `c_i` with `q^{(j)}(a) = Σ_i c_i D^j[r^{−n−2i}](a)` for
/// `j < m`. Rows are scaled by `a^j` and columns by `a^{n+2i}`, leaving the
/// integer falling-factorial matrix.
pub fn extract_kernel_coeffs(q_jet: &BoundaryJet, n: usize, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::invalid("kernel coefficients need m >= 1"));
    }
    if q_jet.len() != m {
        return Err(Error::invalid(format!(
            "jet has {} entries but m = {m}",
            q_jet.len()
        )));
    }
    let a = q_jet.anchor;
    if !(a > 0.0) {
        return Err(Error::invalid("anchor must be positive"));
    }
    let matrix = DMatrix::from_fn(m, m, |j, i| {
        let p = -((n + 2 * i) as f64);
        (0..j).map(|k| p - k as f64).product::<f64>()
    });
    let rhs = DVector::from_fn(m, |j, _| q_jet.values[j] * a.powi(j as i32));
    let sv = matrix.clone().singular_values();
    let condition = sv.max() / sv.min();
    if !(condition < 1e13) {
        return Err(Error::Singular {
            condition,
            context: format!("kernel coefficient system for m = {m}"),
        });
    }
    let x = matrix.lu().solve(&rhs).ok_or_else(|| Error::Singular {
        condition,
        context: format!("kernel coefficient system for m = {m}"),
    })?;
    Ok((0..m).map(|i| x[i] * a.powi((n + 2 * i) as i32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::ModeIndex;

    fn prior(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> RadialProfile {
        RadialProfile::sample(ModeIndex::radial(2), lo, hi, 41, f).unwrap()
    }

    #[test]
    fn jet_of_inverse_square() {
        let p = prior(0.6, 1.0, |r| r.powi(-2));
        let j = boundary_jet(&p, 1.0, 2, 4).unwrap();
        assert!((j.values[0] - 1.0).abs() < 1e-12);
        assert!((j.values[1] + 2.0).abs() < 1e-5);
        let e = prior(1.0, 1.4, |r| r.powi(-2));
        let j = boundary_jet(&e, 1.0, 2, 4).unwrap();
        assert!((j.values[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn jet_of_constant_and_polynomial() {
        let p = prior(0.6, 1.0, |_| 2.5);
        let j = boundary_jet(&p, 1.0, 4, 4).unwrap();
        assert!((j.values[0] - 2.5).abs() < 1e-13);
        assert!(j.values[1..].iter().all(|v| v.abs() < 1e-7));
        // degree 6 < fd_order + m = 7
        let p = prior(0.6, 1.0, |r| r.powi(6) - 2.0 * r.powi(3) + r);
        let j = boundary_jet(&p, 1.0, 3, 4).unwrap();
        let want = [0.0, 6.0 - 6.0 + 1.0, 30.0 - 12.0];
        for (a, b) in j.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-7, "{a} {b}");
        }
    }

    #[test]
    fn jet_errors() {
        let p = prior(0.6, 1.0, |_| 1.0);
        assert!(boundary_jet(&p, 1.2, 2, 4).is_err());
        let short = RadialProfile::sample(ModeIndex::radial(2), 0.9, 1.0, 5, |_| 1.0).unwrap();
        assert!(boundary_jet(&short, 1.0, 3, 4).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let j = BoundaryJet::new(1.5, vec![0.7]).unwrap();
        let c = extract_kernel_coeffs(&j, 2, 1).unwrap();
        assert!((c[0] - 0.7 * 1.5f64.powi(2)).abs() < 1e-14);

        let q =
            BoundaryJet::of_power(1.0, -2.0, 2.0, 2).add(&BoundaryJet::of_power(1.0, -4.0, 3.0, 2));
        let c = extract_kernel_coeffs(&q, 2, 2).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-10 && (c[1] - 3.0).abs() < 1e-10);

        let c = extract_kernel_coeffs(&BoundaryJet::zeros(1.0, 4), 3, 4).unwrap();
        assert!(c.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn coefficients_well_posed_to_m8() {
        for n in [2, 3] {
            for m in 1..=8 {
                let mut jet = BoundaryJet::zeros(1.3, m);
                for i in 0..m {
                    jet = jet.add(&BoundaryJet::of_power(
                        1.3,
                        -((n + 2 * i) as f64),
                        1.0 + i as f64,
                        m,
                    ));
                }
                let c = extract_kernel_coeffs(&jet, n, m).unwrap();
                for (i, ci) in c.iter().enumerate() {
                    assert!((ci - (1.0 + i as f64)).abs() < 1e-6, "{n} {m} {i} {ci}");
                }
            }
        }
    }
}
