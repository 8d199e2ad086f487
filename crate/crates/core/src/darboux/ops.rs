use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::numerics::{centered_first_derivative, centered_second_derivative};
use crate::profile::RadialProfile;

/// Tolerance for recognizing the node `r = 0` on a profile grid.
const ORIGIN_TOL: f64 = 1e-12;

/// `B_{r,m} u = u'' + (n − 1 + 2m)/r · u'` by second-order finite differences.
///
/// A node at `r = 0` uses the even-symmetry limit `(n + 2m) u''` with a
/// mirrored ghost value. Requires at least five nodes and `r ≥ 0`.
pub fn apply_b(n: usize, m: usize, profile: &RadialProfile) -> Result<RadialProfile> {
    let len = profile.len();
    if len < 5 {
        return Err(Error::invalid(format!(
            "B needs at least 5 nodes, got {len}"
        )));
    }
    let h = profile.step();
    let start = profile.start();
    if start < -ORIGIN_TOL * h {
        return Err(Error::invalid("B is defined for r >= 0 only"));
    }
    let u = profile.values();
    let d1 = centered_first_derivative(u, h);
    let d2 = centered_second_derivative(u, h);
    let c = (n - 1 + 2 * m) as f64;
    let mut out: Vec<f64> = (0..len)
        .map(|i| d2[i] + c / profile.radius(i) * d1[i])
        .collect();
    if start.abs() <= ORIGIN_TOL * h {
        out[0] = (n + 2 * m) as f64 * 2.0 * (u[1] - u[0]) / (h * h);
    }
    Ok(profile.with_values(out))
}

/// Order in which the first-order factors of `Q_m` are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorOrder {
    /// `i = m − 1` first, `i = 0` last (composition order as written).
    #[default]
    InnermostFirst,
    /// `i = 0` first.
    OutermostFirst,
}

/// The factors `(r/d_i) ∂_r + 1` of `Q_m`, by their denominators `d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QFactors {
    denominators: Vec<f64>,
}

impl QFactors {
    /// `d_i = n + 2i`, `i = 0..m`.
    pub fn standard(n: usize, m: usize) -> Self {
        Self {
            denominators: (0..m).map(|i| (n + 2 * i) as f64).collect(),
        }
    }

    /// Arbitrary denominators; used to build perturbed operators for
    /// negative controls.
    pub fn custom(denominators: Vec<f64>) -> Self {
        Self { denominators }
    }

    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn degree(&self) -> usize {
        self.denominators.len()
    }
}

/// `Q_m u = Π_{i<m} ((r/(n+2i)) ∂_r + 1) u`, innermost factor first.
///
/// The grid must lie in `r > 0`. Derivatives are second-order centered,
/// one-sided at the ends.
pub fn apply_q(n: usize, m: usize, profile: &RadialProfile) -> Result<RadialProfile> {
    apply_q_factors(
        &QFactors::standard(n, m),
        profile,
        FactorOrder::InnermostFirst,
    )
}

/// [`apply_q`] with explicit factors and application order.
pub fn apply_q_factors(
    factors: &QFactors,
    profile: &RadialProfile,
    order: FactorOrder,
) -> Result<RadialProfile> {
    if profile.start() <= 0.0 {
        return Err(Error::invalid(format!(
            "Q acts on grids in r > 0; grid starts at {}",
            profile.start()
        )));
    }
    if factors.degree() == 0 {
        return Ok(profile.clone());
    }
    if profile.len() < 3 {
        return Err(Error::invalid("Q needs at least 3 nodes"));
    }
    let radii = profile.radii();
    let h = profile.step();
    let mut u = profile.values().to_vec();
    let mut apply = |d: f64| {
        let du = centered_first_derivative(&u, h);
        for ((v, r), dv) in u.iter_mut().zip(&radii).zip(du) {
            *v += r / d * dv;
        }
    };
    match order {
        FactorOrder::InnermostFirst => factors.denominators.iter().rev().for_each(|&d| apply(d)),
        FactorOrder::OutermostFirst => factors.denominators.iter().for_each(|&d| apply(d)),
    }
    Ok(profile.with_values(u))
}

/// Exact image of a power: `Q_m r^p = coefficient · r^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerImage {
    pub coefficient: Ratio<i128>,
    pub exponent: i64,
}

impl PowerImage {
    pub fn coefficient_f64(&self) -> f64 {
        *self.coefficient.numer() as f64 / *self.coefficient.denom() as f64
    }
}

/// `Π_{i<m} (p/(n+2i) + 1)` in exact rational arithmetic.
pub fn apply_q_power(n: usize, m: usize, p: i64) -> PowerImage {
    let coefficient = (0..m).fold(Ratio::from_integer(1i128), |acc, i| {
        let d = (n + 2 * i) as i128;
        acc * Ratio::new(p as i128 + d, d)
    });
    PowerImage {
        coefficient,
        exponent: p,
    }
}

/// Coefficient of `r^{p−2}` in `Q_m B_{r,m} r^p − B_{r,0} Q_m r^p`, exactly.
pub fn intertwine_power_residual(n: usize, m: usize, p: i64) -> Ratio<i128> {
    let (pn, n_i, m_i) = (p as i128, n as i128, m as i128);
    let lhs = apply_q_power(n, m, p - 2).coefficient * (pn * (pn + n_i - 2 + 2 * m_i));
    let rhs = apply_q_power(n, m, p).coefficient * (pn * (pn + n_i - 2));
    lhs - rhs
}

/// Number of nodes trimmed at each end before comparing the two sides of
/// the intertwining identity.
pub fn intertwine_trim(m: usize) -> usize {
    2 * m + 2
}

/// Max over the trimmed interior of `|Q_m(B_{r,m} u) − B_{r,0}(Q_m u)|`.
pub fn intertwine_residual(n: usize, m: usize, test: &RadialProfile) -> Result<f64> {
    intertwine_residual_with(n, m, test, &QFactors::standard(n, m))
}

/// [`intertwine_residual`] with explicit `Q` factors.
pub fn intertwine_residual_with(
    n: usize,
    m: usize,
    test: &RadialProfile,
    factors: &QFactors,
) -> Result<f64> {
    let trim = intertwine_trim(m);
    if test.len() < 2 * trim + 3 {
        return Err(Error::invalid(format!(
            "{} nodes leave too few interior nodes after trimming {trim} per end",
            test.len()
        )));
    }
    let order = FactorOrder::InnermostFirst;
    let lhs = apply_q_factors(factors, &apply_b(n, m, test)?, order)?;
    let rhs = apply_b(n, 0, &apply_q_factors(factors, test, order)?)?;
    Ok(max_abs_diff(lhs.values(), rhs.values(), trim))
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64], trim: usize) -> f64 {
    a.iter()
        .zip(b)
        .skip(trim)
        .take(a.len().saturating_sub(2 * trim))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::ModeIndex;

    fn prof(lo: f64, hi: f64, count: usize, f: impl Fn(f64) -> f64) -> RadialProfile {
        RadialProfile::sample(ModeIndex::radial(2), lo, hi, count, f).unwrap()
    }

    #[test]
    fn b_on_quadratic_and_constant() {
        for n in [2, 3] {
            for m in 0..4 {
                for lo in [0.0, 0.5] {
                    let b = apply_b(n, m, &prof(lo, 2.0, 21, |r| r * r)).unwrap();
                    let want = 2.0 * (n + 2 * m) as f64;
                    assert!(
                        b.values().iter().all(|v| (v - want).abs() < 1e-10),
                        "{n} {m} {lo}"
                    );
                    let b = apply_b(n, m, &prof(lo, 2.0, 21, |_| 3.0)).unwrap();
                    assert!(b.values().iter().all(|v| v.abs() < 1e-12));
                }
            }
        }
        assert!(apply_b(2, 0, &prof(0.0, 1.0, 4, |r| r)).is_err());
    }

    #[test]
    fn b_annihilates_homogeneous_solution() {
        let n = 2;
        let m = 1;
        let e = -((n - 2 + 2 * m) as i32);
        let errs: Vec<f64> = [101, 201]
            .iter()
            .map(|&k| {
                apply_b(n, m, &prof(1.0, 2.0, k, |r| r.powi(e)))
                    .unwrap()
                    .values()[1..k - 1]
                    .iter()
                    .fold(0.0f64, |a, v| a.max(v.abs()))
            })
            .collect();
        assert!(errs[0] < 1e-3);
        assert!((3.0..=5.0).contains(&(errs[0] / errs[1])));
    }

    #[test]
    fn q_examples() {
        let u = prof(0.5, 2.0, 31, |r| r * r);
        assert_eq!(apply_q(2, 0, &u).unwrap(), u);
        let q = apply_q(2, 1, &u).unwrap();
        for (r, v) in q.radii().iter().zip(q.values()) {
            assert!((v - 2.0 * r * r).abs() < 1e-10);
        }
        let k = apply_q(2, 1, &prof(1.0, 3.0, 401, |r| r.powi(-2))).unwrap();
        assert!(k.max_abs() < 1e-3);
        assert!(apply_q(2, 1, &prof(0.0, 1.0, 11, |r| r)).is_err());
    }

    #[test]
    fn q3_annihilates_kernel_powers() {
        for n in [2usize, 3] {
            for i in 0..3 {
                let p = -(n as i32) - 2 * i;
                let errs: Vec<f64> = [401, 801]
                    .iter()
                    .map(|&k| {
                        let u = prof(1.0, 3.0, k, |r| r.powi(p));
                        max_abs_diff(apply_q(n, 3, &u).unwrap().values(), &vec![0.0; k], 8)
                    })
                    .collect();
                // truncation errors of the factors are largely higher kernel
                // powers, so convergence is at least second order
                assert!(errs[0] < 1e-3, "{n} {i} {errs:?}");
                assert!(
                    errs[1] < errs[0] / 3.0 || errs[1] < 1e-9,
                    "{n} {i} {errs:?}"
                );
            }
        }
    }

    #[test]
    fn power_examples() {
        assert_eq!(apply_q_power(2, 3, 0).coefficient, Ratio::from_integer(1));
        assert_eq!(apply_q_power(2, 2, -4).coefficient, Ratio::from_integer(0));
        assert_eq!(apply_q_power(3, 2, 2).coefficient, Ratio::new(7, 3));
    }

    #[test]
    fn power_zero_set() {
        for n in [2usize, 3] {
            for m in 0..=8usize {
                for p in -30i64..=10 {
                    let zero = apply_q_power(n, m, p).coefficient == Ratio::from_integer(0);
                    let expected = (0..m).any(|i| p == -((n + 2 * i) as i64));
                    assert_eq!(zero, expected, "{n} {m} {p}");
                    assert_eq!(intertwine_power_residual(n, m, p), Ratio::from_integer(0));
                }
            }
        }
    }

    #[test]
    fn factor_orders_agree() {
        let f = |r: f64| (-(r - 2.0) * (r - 2.0)).exp();
        let errs: Vec<f64> = [201, 401]
            .iter()
            .map(|&k| {
                let u = prof(0.5, 4.0, k, f);
                let fac = QFactors::standard(3, 3);
                let a = apply_q_factors(&fac, &u, FactorOrder::InnermostFirst).unwrap();
                let b = apply_q_factors(&fac, &u, FactorOrder::OutermostFirst).unwrap();
                max_abs_diff(a.values(), b.values(), 8)
            })
            .collect();
        // centered factors commute away from the one-sided end stencils
        assert!(errs.iter().all(|e| *e < 1e-10), "{errs:?}");
    }

    #[test]
    fn intertwining_converges() {
        assert_eq!(
            intertwine_residual(2, 0, &prof(0.5, 4.0, 101, |r| (-r * r).exp())).unwrap(),
            0.0
        );
        for n in [2, 3] {
            for m in 1..=4 {
                let e: Vec<f64> = [401, 801]
                    .iter()
                    .map(|&k| {
                        intertwine_residual(n, m, &prof(0.5, 4.0, k, |r| (-r * r).exp())).unwrap()
                    })
                    .collect();
                assert!((3.0..=5.0).contains(&(e[0] / e[1])), "{n} {m} {e:?}");
            }
        }
        assert!(intertwine_residual(2, 3, &prof(0.5, 4.0, 18, |r| r)).is_err());
    }
}
