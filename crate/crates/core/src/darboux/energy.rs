use std::f64::consts::PI;

use super::solver::EpdGrid;
use crate::error::{Error, Result};

/// The shrinking ball `B(y0, r0 + ε − r)` of the energy identity, described
/// by `|y0|`, `r0` and `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBall {
    pub center_norm: f64,
    pub radius: f64,
    pub eps: f64,
}

/// One sample `(r, E(r))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub r: f64,
    pub energy: f64,
}

/// Measure of `S(0, t) ∩ B(y0, ρ)` in `ℝⁿ` with `|y0| = c`.
pub fn shell_ball_measure(n: usize, t: f64, c: f64, rho: f64) -> f64 {
    if rho <= 0.0 || t < 0.0 {
        return 0.0;
    }
    let full = match n {
        2 => 2.0 * PI * t,
        _ => 4.0 * PI * t * t,
    };
    if t + c <= rho {
        return full;
    }
    if t >= c + rho || t <= c - rho {
        return 0.0;
    }
    let cos = ((t * t + c * c - rho * rho) / (2.0 * t * c)).clamp(-1.0, 1.0);
    match n {
        2 => 2.0 * t * cos.acos(),
        _ => 2.0 * PI * t * t * (1.0 - cos),
    }
}

/// Discrete `E(r) = ∫_{B(y0, r0+ε−r)} (u_r² + |∇_y u|²) dy` for
/// `u(r, y) = g(r, |y|)` on the lattice of `grid`, for lattice radii in
/// `[ε, r0 + ε]`.
///
/// Here the mode radius `r` is the evolution variable and the solver time
/// `t = |y|` is the spatial radius. Derivatives are second-order centered
/// differences; the `y` integral is a trapezoid sum over `t` weighted by the
/// measure of `S(0, t) ∩ B`.
pub fn energy_profile(grid: &EpdGrid, ball: EnergyBall) -> Result<Vec<EnergySample>> {
    let n = grid.mode.dim();
    let (dr, dt) = (grid.dr(), grid.dt());
    let r_end = ball.radius + ball.eps;
    if !(ball.radius > 0.0) || ball.eps < 0.0 || ball.center_norm < 0.0 {
        return Err(Error::invalid(
            "energy ball needs r0 > 0, eps >= 0, |y0| >= 0",
        ));
    }
    let r_extent = dr * (grid.radial_len() - 1) as f64;
    let t_extent = dt * (grid.time_len() - 1) as f64;
    if r_end > r_extent - dr || ball.center_norm + r_end > t_extent - dt {
        return Err(Error::invalid(format!(
            "ball (|y0| = {}, r0 + eps = {r_end}) exceeds the lattice [0, {r_extent}] x [0, {t_extent}]",
            ball.center_norm
        )));
    }
    let (nr, nt) = (grid.radial_len(), grid.time_len());
    let first = (ball.eps / dr - 1e-9).ceil() as usize;
    let last = (r_end / dr + 1e-9).floor() as usize;
    let mut out = Vec::with_capacity(last + 1 - first);
    for i in first..=last {
        let r = i as f64 * dr;
        let rho = r_end - r;
        let lo = ((ball.center_norm - rho) / dt).floor().max(0.0) as usize;
        let hi = (((ball.center_norm + rho) / dt).ceil() as usize).min(nt - 1);
        let mut acc = 0.0;
        for j in lo..=hi {
            let t = j as f64 * dt;
            let w = shell_ball_measure(n, t, ball.center_norm, rho);
            if w == 0.0 {
                continue;
            }
            let g_r = if i == 0 {
                0.0
            } else if i + 1 < nr {
                (grid.value(i + 1, j) - grid.value(i - 1, j)) / (2.0 * dr)
            } else {
                (grid.value(i, j) - grid.value(i - 1, j)) / dr
            };
            let g_t = if j == 0 {
                0.0
            } else {
                (grid.value(i, j + 1) - grid.value(i, j - 1)) / (2.0 * dt)
            };
            let trap = if j == lo || j == hi { 0.5 } else { 1.0 };
            acc += trap * w * (g_r * g_r + g_t * g_t);
        }
        out.push(EnergySample {
            r,
            energy: acc * dt,
        });
    }
    Ok(out)
}

/// Largest energy value and largest increase between consecutive samples.
pub fn energy_bounds(profile: &[EnergySample]) -> (f64, f64) {
    let peak = profile.iter().map(|s| s.energy).fold(0.0, f64::max);
    let rise = profile
        .windows(2)
        .map(|w| w[1].energy - w[0].energy)
        .fold(0.0, f64::max);
    (peak, rise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::solver::epd_solve;
    use crate::harmonics::ModeIndex;
    use crate::profile::RadialProfile;

    #[test]
    fn measure_limits() {
        assert!((shell_ball_measure(2, 0.5, 0.0, 1.0) - PI).abs() < 1e-15);
        assert_eq!(shell_ball_measure(3, 3.0, 1.0, 1.0), 0.0);
        // half circle when the sphere passes through the center at a right angle
        let c = 1.0;
        let rho = 2f64.sqrt();
        let v = shell_ball_measure(2, 1.0, c, rho);
        assert!((v - PI).abs() < 1e-12);
        let v = shell_ball_measure(3, 1.0, c, rho);
        assert!((v - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn zero_solution_has_zero_energy() {
        let f = RadialProfile::sample(ModeIndex::radial(2), 0.0, 4.0, 81, |_| 0.0).unwrap();
        let g = epd_solve(2, 0, &f, 3.5, 0.9).unwrap();
        let e = energy_profile(
            &g,
            EnergyBall {
                center_norm: 2.0,
                radius: 1.0,
                eps: 0.0,
            },
        )
        .unwrap();
        assert!(e.iter().all(|s| s.energy == 0.0));
        assert!(energy_profile(
            &g,
            EnergyBall {
                center_norm: 3.0,
                radius: 1.0,
                eps: 0.0
            }
        )
        .is_err());
    }
}
