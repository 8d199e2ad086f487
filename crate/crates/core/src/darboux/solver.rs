use std::fmt::Write as _;
use std::path::Path;

use super::ops::apply_q;
use crate::error::{Error, Result};
use crate::harmonics::ModeIndex;
use crate::io::{format_f64, write_text};
use crate::numerics::cubic_interpolate;
use crate::profile::RadialProfile;

/// `g_ml(r_i, t_j)` on `r_i = i·dr`, `t_j = j·dt`, stored row-major in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpdGrid {
    pub mode: ModeIndex,
    dr: f64,
    dt: f64,
    nr: usize,
    nt: usize,
    values: Vec<f64>,
}

impl EpdGrid {
    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of radial nodes.
    pub fn radial_len(&self) -> usize {
        self.nr
    }

    /// Number of time levels.
    pub fn time_len(&self) -> usize {
        self.nt
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nr + i]
    }

    /// Time level `j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nr..(j + 1) * self.nr]
    }

    /// `t ↦ g(r_i, t)`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.nt).map(|j| self.value(i, j)).collect()
    }

    /// The central trace `s ↦ g(0, s)` on the time lattice.
    pub fn trace(&self) -> RadialProfile {
        RadialProfile::new(self.mode, 0.0, self.dt, self.column(0)).expect("grid is nonempty")
    }

    /// Time level `j` as a radial profile.
    pub fn profile_at(&self, j: usize) -> RadialProfile {
        RadialProfile::new(self.mode, 0.0, self.dr, self.row(j).to_vec()).expect("grid is nonempty")
    }

    /// CSV with header `r,t,value`, row-major in `t` then `r`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,t,value\n");
        for j in 0..self.nt {
            let t = format_f64(j as f64 * self.dt);
            for i in 0..self.nr {
                writeln!(
                    out,
                    "{},{},{}",
                    format_f64(i as f64 * self.dr),
                    t,
                    format_f64(self.value(i, j))
                )
                .unwrap();
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

/// Conservative discretization of `B_{r,m}` on `r_i = i·dr`:
/// `(B u)_i = up_i (u_{i+1} − u_i) − lo_i (u_i − u_{i−1})`, with face fluxes
/// weighted by `r^c` and cell volumes `∫ r^c dr`, `c = n − 1 + 2m`.
/// Row 0 reduces to the even-symmetry limit `2(n + 2m)(u_1 − u_0)/dr²`.
#[derive(Debug, Clone)]
struct FluxOperator {
    up: Vec<f64>,
    lo: Vec<f64>,
}

impl FluxOperator {
    fn new(n: usize, m: usize, nr: usize, dr: f64) -> Self {
        let c = (n - 1 + 2 * m) as f64;
        let d = c + 1.0;
        let mut up = vec![0.0; nr];
        let mut lo = vec![0.0; nr];
        up[0] = 2.0 * d / (dr * dr);
        for i in 1..nr {
            // faces at (i ± 1/2) dr; volume ∝ r_+^d − r_-^d, computed stably
            let xm = i as f64 - 0.5;
            let xp = i as f64 + 0.5;
            let vol = xm.powf(d) * (d * (1.0 / xm).ln_1p()).exp_m1() / d;
            up[i] = xp.powf(c) / (vol * dr * dr);
            lo[i] = xm.powf(c) / (vol * dr * dr);
        }
        Self { up, lo }
    }

    /// Apply to the interior rows `0..nr−1`; the last row is a fixed boundary.
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let nr = u.len();
        out[0] = self.up[0] * (u[1] - u[0]);
        for i in 1..nr - 1 {
            out[i] = self.up[i] * (u[i + 1] - u[i]) - self.lo[i] * (u[i] - u[i - 1]);
        }
        out[nr - 1] = 0.0;
    }

    /// Gershgorin bound on the spectral radius of the symmetrized operator.
    fn spectral_bound(&self) -> f64 {
        let nr = self.up.len();
        (0..nr - 1)
            .map(|i| {
                let right = if i + 1 < nr - 1 {
                    (self.up[i] * self.lo[i + 1]).sqrt()
                } else {
                    0.0
                };
                let left = if i > 0 {
                    (self.lo[i] * self.up[i - 1]).sqrt()
                } else {
                    0.0
                };
                self.up[i] + self.lo[i] + right + left
            })
            .fold(0.0, f64::max)
    }
}

/// Time step used by [`epd_solve`] for a given radial grid: the largest
/// `dt ≤ cfl·min(dr, 2/√λ)` that divides `t_max` evenly, where `λ` bounds the
/// spectrum of the discrete `B_{r,m}`.
pub fn epd_time_step(n: usize, m: usize, nr: usize, dr: f64, t_max: f64, cfl: f64) -> (f64, usize) {
    let op = FluxOperator::new(n, m, nr, dr);
    let dt = cfl * dr.min(2.0 / op.spectral_bound().sqrt());
    let steps = (t_max / dt).ceil().max(1.0) as usize;
    (t_max / steps as f64, steps)
}

fn check_initial(initial: &RadialProfile, t_max: f64, cfl: f64) -> Result<()> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::config(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    if initial.start().abs() > 1e-12 * initial.step() {
        return Err(Error::invalid("the initial profile must start at r = 0"));
    }
    if initial.len() < 5 {
        return Err(Error::invalid("the initial profile needs at least 5 nodes"));
    }
    if !(t_max > 0.0) {
        return Err(Error::invalid("T_max must be positive"));
    }
    if initial.end() < t_max {
        return Err(Error::invalid(format!(
            "radial extent {} is shorter than T_max = {t_max}",
            initial.end()
        )));
    }
    Ok(())
}

/// Solve `g_tt + (n−1)/t g_t = B_{r,m} g`, `g(·,0) = f`, `g_t(·,0) = 0` on
/// `[0, R_max] × [0, T_max]`.
///
/// Explicit leapfrog with the damping term treated by centered averaging;
/// the first level uses the Taylor start `g(·,dt) = f + dt²/(2n) B f`. The
/// outer node keeps its initial value, which only affects `r > R_max − t`.
pub fn epd_solve(
    n: usize,
    m: usize,
    initial: &RadialProfile,
    t_max: f64,
    cfl: f64,
) -> Result<EpdGrid> {
    check_initial(initial, t_max, cfl)?;
    let nr = initial.len();
    let dr = initial.step();
    let op = FluxOperator::new(n, m, nr, dr);
    let (dt, steps) = epd_time_step(n, m, nr, dr, t_max, cfl);
    let nt = steps + 1;
    let mut values = Vec::with_capacity(nr * nt);
    values.extend_from_slice(initial.values());

    let dt2 = dt * dt;
    let mut bu = vec![0.0; nr];
    op.apply(initial.values(), &mut bu);
    let first: Vec<f64> = initial
        .values()
        .iter()
        .zip(&bu)
        .map(|(f, b)| f + dt2 / (2.0 * n as f64) * b)
        .collect();
    values.extend_from_slice(&first);

    let mut prev = initial.values().to_vec();
    let mut cur = first;
    let mut next = vec![0.0; nr];
    for j in 1..steps {
        let beta = (n as f64 - 1.0) / (2.0 * j as f64);
        op.apply(&cur, &mut bu);
        for i in 0..nr - 1 {
            next[i] = (2.0 * cur[i] - (1.0 - beta) * prev[i] + dt2 * bu[i]) / (1.0 + beta);
        }
        next[nr - 1] = cur[nr - 1];
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Instability { step: j + 1 });
        }
        values.extend_from_slice(&next);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(EpdGrid {
        mode: initial.mode,
        dr,
        dt,
        nr,
        nt,
        values,
    })
}

/// Step the solver backwards from the final two levels of `grid` to `t = 0`
/// and return the recovered initial profile.
pub fn epd_reverse(n: usize, m: usize, grid: &EpdGrid) -> Result<RadialProfile> {
    let nr = grid.nr;
    let steps = grid.nt - 1;
    let op = FluxOperator::new(n, m, nr, grid.dr);
    let dt2 = grid.dt * grid.dt;
    let mut bu = vec![0.0; nr];
    let mut later = grid.row(steps).to_vec();
    let mut cur = grid.row(steps - 1).to_vec();
    let mut earlier = vec![0.0; nr];
    for j in (2..steps).rev() {
        let beta = (n as f64 - 1.0) / (2.0 * j as f64);
        op.apply(&cur, &mut bu);
        for i in 0..nr - 1 {
            earlier[i] = (2.0 * cur[i] - (1.0 + beta) * later[i] + dt2 * bu[i]) / (1.0 - beta);
        }
        earlier[nr - 1] = cur[nr - 1];
        std::mem::swap(&mut later, &mut cur);
        std::mem::swap(&mut cur, &mut earlier);
    }
    // cur holds level 1: undo the Taylor start
    op.apply(&cur, &mut bu);
    let f: Vec<f64> = cur
        .iter()
        .zip(&bu)
        .map(|(g, b)| g - dt2 / (2.0 * n as f64) * b)
        .collect();
    RadialProfile::new(grid.mode, 0.0, grid.dr, f)
}

/// `s ↦ |[Q_m f](s) − g(0, s)|` on the time lattice of `grid`, for
/// `s ≤ min(T_max, R_max)`.
///
/// `Q_m f` is evaluated on the radial lattice (nodes `r ≥ dr`, with
/// `[Q_m f](0) = f(0)`) and carried to the time lattice by cubic
/// interpolation, so `dr` and `dt` need not coincide.
pub fn trace_symmetry_check(
    n: usize,
    m: usize,
    f_ml: &RadialProfile,
    grid: &EpdGrid,
) -> Result<RadialProfile> {
    if f_ml.start().abs() > 1e-12 * f_ml.step() || (f_ml.step() - grid.dr).abs() > 1e-12 * grid.dr {
        return Err(Error::invalid(
            "f_ml must live on the radial lattice of the grid",
        ));
    }
    if f_ml.len() != grid.nr {
        return Err(Error::invalid(
            "f_ml and grid have different radial lengths",
        ));
    }
    let positive = f_ml.slice(1, f_ml.len())?;
    let qf_pos = apply_q(n, m, &positive)?;
    let mut qf = Vec::with_capacity(f_ml.len());
    qf.push(f_ml.values()[0]);
    qf.extend_from_slice(qf_pos.values());
    let s_max = (grid.dt * (grid.nt - 1) as f64).min(f_ml.end());
    let count = ((s_max / grid.dt) + 1e-9).floor() as usize + 1;
    let trace = grid.column(0);
    let values = (0..count)
        .map(|j| {
            let s = j as f64 * grid.dt;
            (cubic_interpolate(0.0, grid.dr, &qf, s) - trace[j]).abs()
        })
        .collect();
    RadialProfile::new(grid.mode, 0.0, grid.dt, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::shell_profile;

    fn initial(m: usize, nr: usize, r_max: f64) -> RadialProfile {
        RadialProfile::sample(ModeIndex::new(2, m, 1).unwrap(), 0.0, r_max, nr, |r| {
            shell_profile(r, 1.5, 0.6, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn constants_are_stationary() {
        let f = RadialProfile::sample(ModeIndex::radial(3), 0.0, 2.0, 41, |_| 1.5).unwrap();
        let g = epd_solve(3, 0, &f, 1.5, 0.9).unwrap();
        for j in 0..g.time_len() {
            assert!(g.row(j).iter().all(|v| (v - 1.5).abs() < 1e-13));
        }
        assert_eq!(g.row(0), f.values());
        assert!(g.dt() <= 0.9 * g.dr() + 1e-15);
    }

    #[test]
    fn rejects_bad_setup() {
        let f = initial(0, 41, 2.0);
        assert!(matches!(
            epd_solve(2, 0, &f, 1.0, 1.5),
            Err(Error::Config(_))
        ));
        assert!(epd_solve(2, 0, &f, 3.0, 0.9).is_err());
        let shifted = RadialProfile::sample(ModeIndex::radial(2), 0.5, 2.5, 41, |_| 1.0).unwrap();
        assert!(epd_solve(2, 0, &shifted, 1.0, 0.9).is_err());
    }

    #[test]
    fn stable_for_high_modes() {
        for m in [0, 3, 8] {
            let g = epd_solve(2, m, &initial(m, 257, 4.0), 3.0, 0.9).unwrap();
            let last = g.row(g.time_len() - 1);
            assert!(last.iter().all(|v| v.abs() < 10.0), "m={m}");
        }
    }

    #[test]
    fn zero_trace_discrepancy_for_zero_data() {
        let f =
            RadialProfile::sample(ModeIndex::new(2, 2, 1).unwrap(), 0.0, 4.0, 65, |_| 0.0).unwrap();
        let g = epd_solve(2, 2, &f, 3.0, 0.9).unwrap();
        let d = trace_symmetry_check(2, 2, &f, &g).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn trace_identity_converges() {
        for m in 0..=3 {
            let errs: Vec<f64> = [257, 513]
                .iter()
                .map(|&nr| {
                    let f = initial(m, nr, 4.0);
                    let g = epd_solve(2, m, &f, 3.0, 0.9).unwrap();
                    trace_symmetry_check(2, m, &f, &g).unwrap().max_abs()
                })
                .collect();
            let ratio = errs[0] / errs[1];
            assert!((3.0..=5.0).contains(&ratio), "m={m} {errs:?}");
        }
    }

    #[test]
    fn reverse_recovers_initial() {
        for n in [2, 3] {
            let f = initial(1, 201, 4.0);
            let g = epd_solve(n, 1, &f, 1.0, 0.9).unwrap();
            let back = epd_reverse(n, 1, &g).unwrap();
            let err = back
                .values()
                .iter()
                .zip(f.values())
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            assert!(err < 1e-6, "n={n} {err}");
        }
    }

    #[test]
    fn csv_layout() {
        let f = RadialProfile::sample(ModeIndex::radial(2), 0.0, 1.0, 5, |_| 1.0).unwrap();
        let g = epd_solve(2, 0, &f, 0.25, 1.0).unwrap();
        let text = g.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,t,value"));
        assert_eq!(text.lines().count(), 1 + g.radial_len() * g.time_len());
        let second: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
        assert_eq!(second[1].parse::<f64>().unwrap(), 0.0);
    }
}
