//! Verification suites: each check measures a residual or convergence ratio
//! against a pinned tolerance and reports one row.

use std::fmt;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;

use crate::curved::{curved_intertwine_residual, SpaceKind};
use crate::darboux::{
    apply_q, energy_bounds, energy_profile, epd_reverse, epd_solve, intertwine_power_residual,
    intertwine_residual_with, trace_symmetry_check, EnergyBall, QFactors,
};
use crate::error::{Error, Result};
use crate::field::shell_profile;
use crate::geometry::AnnulusGeometry;
use crate::harmonics::ModeIndex;
use crate::io::format_f64;
use crate::kernel::{annihilation_check, KernelElement};
use crate::profile::RadialProfile;
use crate::reconstruct::{k_integral, k_profile};
use crate::transform::Sampling;

/// Ratio window expected when a second-order error is measured at `h` and `h/2`.
pub const SECOND_ORDER_RATIO: (f64, f64) = (3.0, 5.0);

/// Largest acceptable energy constant `C` in `E ≤ C·h·E_ref`.
pub const ENERGY_C_MAX: f64 = 10.0;

/// A named group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Intertwine,
    Trace,
    Kernel,
    KIntegral,
    Energy,
    Curved,
    EpdConvergence,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Intertwine,
        Suite::Trace,
        Suite::Kernel,
        Suite::KIntegral,
        Suite::Energy,
        Suite::Curved,
        Suite::EpdConvergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Intertwine => "intertwine",
            Suite::Trace => "trace",
            Suite::Kernel => "kernel",
            Suite::KIntegral => "k-integral",
            Suite::Energy => "energy",
            Suite::Curved => "curved",
            Suite::EpdConvergence => "epd-convergence",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == text.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::config(format!(
                    "unknown suite '{text}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Acceptance rule of one check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// `measured < bound`.
    Below(f64),
    /// `measured ≤ bound`.
    AtMost(f64),
    /// `measured > bound`.
    Above(f64),
    /// `measured == value`.
    Exactly(f64),
    /// `lo ≤ measured ≤ hi`.
    Within(f64, f64),
}

impl Tolerance {
    pub fn accepts(self, v: f64) -> bool {
        match self {
            Tolerance::Below(b) => v < b,
            Tolerance::AtMost(b) => v <= b,
            Tolerance::Above(b) => v > b,
            Tolerance::Exactly(x) => v == x,
            Tolerance::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Below(b) => write!(f, "< {b:.3e}"),
            Tolerance::AtMost(b) => write!(f, "<= {b:.3e}"),
            Tolerance::Above(b) => write!(f, "> {b:.3e}"),
            Tolerance::Exactly(x) => write!(f, "== {x}"),
            Tolerance::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

/// One verification result.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl CheckRow {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: Tolerance) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: tolerance.accepts(measured),
        }
    }
}

/// Fixed-width text table with a trailing summary line.
pub fn format_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
    let mut out = format!(
        "{:<width$}  {:>12}  {:<22}  status\n",
        "check", "measured", "tolerance"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>12.4e}  {:<22}  {}",
            r.name,
            r.measured,
            r.tolerance.to_string(),
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", rows.len(), failed);
    out
}

/// CSV with header `check,measured,tolerance,pass`.
pub fn rows_to_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from("check,measured,tolerance,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.name,
            format_f64(r.measured),
            r.tolerance,
            u8::from(r.passed)
        );
    }
    out
}

/// Test hooks for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Relative perturbation of the first factor constant of `Q_m` in the
    /// finite-difference intertwining checks.
    pub corrupt_q: Option<f64>,
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> Result<Vec<CheckRow>> {
    match suite {
        Suite::Intertwine => intertwine_suite(options),
        Suite::Trace => trace_suite(),
        Suite::Kernel => kernel_suite(),
        Suite::KIntegral => k_integral_suite(),
        Suite::Energy => energy_suite(),
        Suite::Curved => curved_suite(),
        Suite::EpdConvergence => epd_convergence_suite(),
    }
}

fn ratio_row(name: String, coarse: f64, fine: f64) -> CheckRow {
    let (lo, hi) = SECOND_ORDER_RATIO;
    CheckRow::new(name, coarse / fine, Tolerance::Within(lo, hi))
}

fn sample(
    n: usize,
    lo: f64,
    hi: f64,
    count: usize,
    f: impl Fn(f64) -> f64,
) -> Result<RadialProfile> {
    RadialProfile::sample(ModeIndex::radial(n), lo, hi, count, f)
}

/// Exact power-path residuals for `n ∈ {2, 3}`, `m ≤ 8`, `p ∈ [−10, 6]`, and
/// second-order convergence of the finite-difference path on `exp(−r²)` for
/// `m ≤ 5`. Beyond that, `m + 2` stacked difference quotients push 800
/// intervals onto the roundoff floor.
pub fn intertwine_suite(options: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for n in [2usize, 3] {
        let nonzero = (0..=8)
            .flat_map(|m| (-10i64..=6).map(move |p| (m, p)))
            .filter(|&(m, p)| *intertwine_power_residual(n, m, p).numer() != 0)
            .count();
        rows.push(CheckRow::new(
            format!("power residuals n={n} m<=8 p in [-10,6] nonzero"),
            nonzero as f64,
            Tolerance::Exactly(0.0),
        ));
    }
    let cases: Vec<(usize, usize)> = [2usize, 3]
        .iter()
        .flat_map(|&n| (1..=5).map(move |m| (n, m)))
        .collect();
    let fd: Vec<Result<CheckRow>> = cases
        .par_iter()
        .map(|&(n, m)| {
            let mut factors = QFactors::standard(n, m).denominators().to_vec();
            if let Some(delta) = options.corrupt_q {
                factors[0] *= 1.0 + delta;
            }
            let factors = QFactors::custom(factors);
            let res = [401, 801]
                .iter()
                .map(|&k| {
                    let u = sample(n, 0.5, 4.0, k, |r| (-r * r).exp())?;
                    intertwine_residual_with(n, m, &u, &factors)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(ratio_row(
                format!("fd residual ratio n={n} m={m} exp(-r^2) [0.5,4] 400->800"),
                res[0],
                res[1],
            ))
        })
        .collect();
    for r in fd {
        rows.push(r?);
    }
    Ok(rows)
}

fn trace_case(m: usize, intervals: usize) -> Result<f64> {
    let (r_max, t_max) = (4.0, 3.0);
    let f = RadialProfile::sample(ModeIndex::new(2, m, 1)?, 0.0, r_max, intervals + 1, |r| {
        shell_profile(r, 1.5, 0.6, 1.0)
    })?;
    let grid = epd_solve(2, m, &f, t_max, 0.9)?;
    Ok(trace_symmetry_check(2, m, &f, &grid)?.max_abs())
}

/// `[Q_m f](s) = g(0, s)` for bump profiles, `n = 2`, `m ≤ 3`, 1024 radial
/// intervals on `[0, 4]`, horizon 3, CFL 0.9; plus the ratio on halving `h`.
pub fn trace_suite() -> Result<Vec<CheckRow>> {
    let results: Vec<Result<(usize, f64, f64)>> = (0..4usize)
        .into_par_iter()
        .map(|m| Ok((m, trace_case(m, 1024)?, trace_case(m, 2048)?)))
        .collect();
    let mut rows = Vec::new();
    for r in results {
        let (m, coarse, fine) = r?;
        rows.push(CheckRow::new(
            format!("trace discrepancy n=2 m={m} N=1024"),
            coarse,
            Tolerance::Below(1e-3),
        ));
        rows.push(ratio_row(
            format!("trace ratio n=2 m={m} N=1024->2048"),
            coarse,
            fine,
        ));
    }
    Ok(rows)
}

/// `count` pairs `(x, t)` in region 𝒜 of `geometry`, drawn with a fixed seed.
pub fn random_admissible_pairs(
    n: usize,
    geometry: &AnnulusGeometry,
    count: usize,
    seed: u64,
) -> Vec<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, outer) = (geometry.inner(), geometry.outer());
    let half = 0.5 * (outer - a);
    let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dir: Vec<f64> = (0..n).map(|_| 2.0 * unit.sample(&mut rng) - 1.0).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(0.1..=1.0).contains(&len) {
            continue;
        }
        let rho = 0.95 * half * unit.sample(&mut rng);
        let lo = rho + a;
        let hi = outer - rho;
        let t = lo + (hi - lo) * (0.02 + 0.96 * unit.sample(&mut rng));
        out.push((dir.iter().map(|v| rho * v / len).collect(), t));
    }
    out
}

/// Spheres inside the annulus that miss the inner ball: centers on the
/// mid-radius shell, radii below the distance to either boundary.
pub fn random_non_enclosing_pairs(
    n: usize,
    geometry: &AnnulusGeometry,
    count: usize,
    seed: u64,
) -> Vec<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, outer) = (geometry.inner(), geometry.outer());
    let mid = 0.5 * (a + outer);
    let cap = 0.5 * (outer - a);
    let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dir: Vec<f64> = (0..n).map(|_| 2.0 * unit.sample(&mut rng) - 1.0).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(0.1..=1.0).contains(&len) {
            continue;
        }
        let t = cap * (0.3 + 0.6 * unit.sample(&mut rng));
        out.push((dir.iter().map(|v| mid * v / len).collect(), t));
    }
    out
}

/// Annihilation of every `r^{−n−2i} Y_ml` (`n = 2`, `1 ≤ m ≤ 4`, `i < m`) on
/// 200 admissible spheres of `Ann(1, 3)`, and the negative control on
/// spheres that do not enclose the inner ball.
pub fn kernel_suite() -> Result<Vec<CheckRow>> {
    let n = 2;
    let geometry = AnnulusGeometry::new(1.0, 3.0, 0.5, None)?;
    let inside = Sampling::Pairs(random_admissible_pairs(n, &geometry, 200, 0));
    let outside = Sampling::Pairs(random_non_enclosing_pairs(n, &geometry, 200, 1));
    let mut rows = Vec::new();
    for m in 1..=4 {
        for i in 0..m {
            let element = KernelElement::new(ModeIndex::new(n, m, 1)?, i, 1.0)?;
            let annihilated = annihilation_check(&element, &geometry, &inside, 512)?;
            rows.push(CheckRow::new(
                format!("kernel m={m} i={i} max |R f| admissible"),
                annihilated,
                Tolerance::Below(1e-8),
            ));
            let control = non_enclosing_max(&element, &outside)?;
            rows.push(CheckRow::new(
                format!("kernel m={m} i={i} max |R f| non-enclosing"),
                control,
                Tolerance::Above(1e-3),
            ));
        }
    }
    Ok(rows)
}

fn non_enclosing_max(element: &KernelElement, sampling: &Sampling) -> Result<f64> {
    let field = element.field();
    let rule = crate::transform::SphereRule::new(field.dim(), 512)?;
    let Sampling::Pairs(pairs) = sampling else {
        return Err(Error::invalid("expected explicit pairs"));
    };
    pairs
        .iter()
        .map(|(c, t)| rule.mean(&field, c, *t).map(f64::abs))
        .try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

/// Smooth synthetic trace used by the `k_ml` checks.
pub fn synthetic_trace(s: f64) -> f64 {
    (-(s - 2.0) * (s - 2.0)).exp() * (1.0 + 0.3 * (2.0 * s).sin())
}

/// Relative residual of `Q_m k_ml − g0` over the trimmed interior.
pub fn k_identity_residual(n: usize, m: usize, nodes: usize) -> Result<f64> {
    let g0 = RadialProfile::sample(ModeIndex::new(n, m, 1)?, 1.0, 3.0, nodes, synthetic_trace)?;
    let k = k_profile(n, m, &g0)?;
    let q = apply_q(n, m, &k)?;
    let trim = 2 * m + 2;
    let scale = g0.max_abs();
    Ok(q.values()
        .iter()
        .zip(g0.values())
        .skip(trim)
        .take(nodes - 2 * trim)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale)
}

/// `Q_m k_ml = g0` for a smooth `g0` on `[1, 3]` at 2048 nodes, `m ≤ 6`,
/// `n ∈ {2, 3}`, and the closed form `k(2) = 3/4` for `n = 2`, `m = 1`, `g0 ≡ 1`.
pub fn k_integral_suite() -> Result<Vec<CheckRow>> {
    let cases: Vec<(usize, usize)> = [2usize, 3]
        .iter()
        .flat_map(|&n| (0..=6).map(move |m| (n, m)))
        .collect();
    let measured: Vec<Result<CheckRow>> = cases
        .par_iter()
        .map(|&(n, m)| {
            Ok(CheckRow::new(
                format!("Q k - g0 relative n={n} m={m} N=2048"),
                k_identity_residual(n, m, 2048)?,
                Tolerance::Below(1e-6),
            ))
        })
        .collect();
    let mut rows = measured.into_iter().collect::<Result<Vec<_>>>()?;
    let one = RadialProfile::sample(ModeIndex::new(2, 1, 1)?, 1.0, 3.0, 201, |_| 1.0)?;
    rows.push(CheckRow::new(
        "k(2) - 0.75 for n=2 m=1 g0=1",
        (k_integral(2, 1, &one, 2.0)? - 0.75).abs(),
        Tolerance::Below(1e-10),
    ));
    Ok(rows)
}

fn compact_bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        a / (a + (-1.0 / (1.0 - x)).exp())
    }
}

/// Initial profile whose central trace `Q_m f` vanishes on `(0.8, 3.2)`
/// shifted inward by the bump widths: `m = 0` uses bumps outside
/// `(1.3, 2.7)`; `m ≥ 1` uses `r^{−n}` (annihilated by `Q_m`) beyond `r = 1.2`.
pub fn cone_initial_profile(n: usize, m: usize, intervals: usize) -> Result<RadialProfile> {
    RadialProfile::sample(ModeIndex::new(n, m, 1)?, 0.0, 4.0, intervals + 1, |r| {
        if m == 0 {
            compact_bump((r - 0.8) / 0.5) + compact_bump((r - 3.2) / 0.5)
        } else if r < 0.6 {
            0.0
        } else {
            smooth_step((r - 0.6) / 0.6) * r.powi(-(n as i32))
        }
    })
}

/// Normalized energy constants of one solver run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyConstants {
    /// `max_r E_cone(r) / (h · E_ref)` on the ball where the data vanish.
    pub cone: f64,
    /// Largest increase of the reference-ball energy, over `h · E_ref`.
    pub monotone: f64,
}

/// Cone ball `B(y0, 0.6)` with `|y0| = 2`; reference ball of radius 1.0 on the
/// same center, whose initial energy is `E_ref`.
pub fn energy_constants(n: usize, m: usize, intervals: usize) -> Result<EnergyConstants> {
    let f = cone_initial_profile(n, m, intervals)?;
    let grid = epd_solve(n, m, &f, 3.5, 0.9)?;
    let h = grid.dr();
    let cone = energy_profile(
        &grid,
        EnergyBall {
            center_norm: 2.0,
            radius: 0.6,
            eps: 0.0,
        },
    )?;
    let reference = energy_profile(
        &grid,
        EnergyBall {
            center_norm: 2.0,
            radius: 1.0,
            eps: 0.0,
        },
    )?;
    let e_ref = reference[0].energy;
    if !(e_ref > 0.0) {
        return Err(Error::invalid("reference energy vanishes"));
    }
    let (peak, _) = energy_bounds(&cone);
    let (_, rise) = energy_bounds(&reference);
    Ok(EnergyConstants {
        cone: peak / (h * e_ref),
        monotone: rise.max(0.0) / (h * e_ref),
    })
}

/// Domain of dependence and monotonicity at 512 and 1024 radial intervals
/// for `n ∈ {2, 3}`, `m ≤ 2`.
pub fn energy_suite() -> Result<Vec<CheckRow>> {
    let cases: Vec<(usize, usize)> = [2usize, 3]
        .iter()
        .flat_map(|&n| (0..=2).map(move |m| (n, m)))
        .collect();
    let results: Vec<Result<(usize, usize, EnergyConstants, EnergyConstants)>> = cases
        .par_iter()
        .map(|&(n, m)| {
            Ok((
                n,
                m,
                energy_constants(n, m, 512)?,
                energy_constants(n, m, 1024)?,
            ))
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        let (n, m, coarse, fine) = r?;
        for (label, c, f) in [
            ("cone", coarse.cone, fine.cone),
            ("monotone", coarse.monotone, fine.monotone),
        ] {
            rows.push(CheckRow::new(
                format!("energy {label} C n={n} m={m} N=512"),
                c,
                Tolerance::Below(ENERGY_C_MAX),
            ));
            rows.push(CheckRow::new(
                format!("energy {label} C n={n} m={m} N=1024"),
                f,
                Tolerance::Below(ENERGY_C_MAX),
            ));
            // one constant must serve both grids
            rows.push(CheckRow::new(
                format!("energy {label} C growth n={n} m={m} N=512->1024"),
                f - 2.0 * c,
                Tolerance::AtMost(0.0),
            ));
        }
    }
    Ok(rows)
}

/// Test profile and grid for the curved checks of one space.
fn curved_test(space: SpaceKind, n: usize, nodes: usize) -> Result<RadialProfile> {
    match space {
        SpaceKind::Spherical => sample(n, 0.6, 2.5, nodes, |r| {
            (-4.0 * (r - 1.55) * (r - 1.55)).exp()
        }),
        _ => sample(n, 0.5, 4.0, nodes, |r| (-4.0 * (r - 2.0) * (r - 2.0)).exp()),
    }
}

/// Second-order convergence of the curved intertwining residual for the
/// hyperbolic and spherical spaces, `n ∈ {2, 3}`, `1 ≤ m ≤ 6`.
pub fn curved_suite() -> Result<Vec<CheckRow>> {
    let cases: Vec<(SpaceKind, usize, usize)> = [SpaceKind::Hyperbolic, SpaceKind::Spherical]
        .iter()
        .flat_map(|&s| {
            [2usize, 3]
                .into_iter()
                .flat_map(move |n| (1..=6).map(move |m| (s, n, m)))
        })
        .collect();
    cases
        .par_iter()
        .map(|&(space, n, m)| {
            let res = [101, 201]
                .iter()
                .map(|&k| curved_intertwine_residual(space, n, m, &curved_test(space, n, k)?))
                .collect::<Result<Vec<f64>>>()?;
            Ok(ratio_row(
                format!("curved residual ratio {space} n={n} m={m} 100->200"),
                res[0],
                res[1],
            ))
        })
        .collect()
}

fn solve_final(n: usize, m: usize, intervals: usize) -> Result<Vec<f64>> {
    let f = RadialProfile::sample(ModeIndex::new(n, m, 1)?, 0.0, 4.0, intervals + 1, |r| {
        shell_profile(r, 1.5, 0.6, 1.0)
    })?;
    let grid = epd_solve(n, m, &f, 3.0, 0.9)?;
    Ok(grid.row(grid.time_len() - 1).to_vec())
}

/// Self-convergence of `g(·, 3)` at 256, 512, 1024 intervals, reversal of a
/// run back to its initial data, and stability at `m = 8`.
pub fn epd_convergence_suite() -> Result<Vec<CheckRow>> {
    let cases: Vec<(usize, usize)> = [2usize, 3]
        .iter()
        .flat_map(|&n| (0..=3).map(move |m| (n, m)))
        .collect();
    let results: Vec<Result<CheckRow>> = cases
        .par_iter()
        .map(|&(n, m)| {
            let g: Vec<Vec<f64>> = [256, 512, 1024]
                .iter()
                .map(|&k| solve_final(n, m, k))
                .collect::<Result<_>>()?;
            // compare on the coarse lattice, r ≤ 1 where the fixed outer node
            // has no influence
            let gap = |a: &[f64], b: &[f64], stride: usize| {
                (0..=a.len() / 4)
                    .map(|i| (a[i] - b[i * stride]).abs())
                    .fold(0.0, f64::max)
            };
            let e1 = gap(&g[0], &g[1], 2);
            let e2 = gap(&g[1], &g[2], 2);
            Ok(ratio_row(
                format!("epd self-convergence n={n} m={m} N=256/512/1024"),
                e1,
                e2,
            ))
        })
        .collect();
    let mut rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let f = RadialProfile::sample(ModeIndex::new(2, 2, 1)?, 0.0, 4.0, 257, |r| {
        shell_profile(r, 1.5, 0.6, 1.0)
    })?;
    let grid = epd_solve(2, 2, &f, 2.0, 0.9)?;
    let back = epd_reverse(2, 2, &grid)?;
    let err = back
        .values()
        .iter()
        .zip(f.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    rows.push(CheckRow::new(
        "epd reverse round trip n=2 m=2",
        err,
        Tolerance::Below(1e-6),
    ));
    for n in [2usize, 3] {
        let last = solve_final(n, 8, 512)?;
        let peak = last.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        rows.push(CheckRow::new(
            format!("epd stability n={n} m=8 max |g(., 3)|"),
            peak,
            Tolerance::Below(10.0),
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("everything").is_err());
    }

    #[test]
    fn tolerance_rules() {
        assert!(Tolerance::Below(1.0).accepts(0.5));
        assert!(!Tolerance::Below(1.0).accepts(1.0));
        assert!(Tolerance::AtMost(0.0).accepts(0.0));
        assert!(Tolerance::Within(3.0, 5.0).accepts(4.0));
        assert!(!Tolerance::Within(3.0, 5.0).accepts(f64::NAN));
        assert!(Tolerance::Exactly(0.0).accepts(0.0));
        assert!(Tolerance::Above(1e-3).accepts(0.1));
    }

    #[test]
    fn sampled_pairs_lie_where_intended() {
        let g = AnnulusGeometry::new(1.0, 3.0, 0.5, None).unwrap();
        for (c, t) in random_admissible_pairs(3, &g, 50, 4) {
            assert!(crate::transform::region_a_contains(&g, &c, t));
        }
        for (c, t) in random_non_enclosing_pairs(2, &g, 50, 4) {
            let x = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(x - t > 1.0 && x + t < 3.0);
        }
        assert_eq!(
            random_admissible_pairs(2, &g, 5, 9),
            random_admissible_pairs(2, &g, 5, 9)
        );
    }

    #[test]
    fn table_marks_failures() {
        let rows = vec![
            CheckRow::new("a", 0.1, Tolerance::Below(1.0)),
            CheckRow::new("b", 2.0, Tolerance::Below(1.0)),
        ];
        let t = format_table(&rows);
        assert!(t.contains("PASS") && t.contains("FAIL"));
        assert!(t.ends_with("2 checks, 1 failed\n"));
        assert!(rows_to_csv(&rows).starts_with("check,measured,tolerance,pass\na,"));
    }
}
