use std::f64::consts::PI;

use super::ModeIndex;
use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-8;

/// Value of the orthonormal real harmonic `Y_ml` at a unit direction.
pub fn eval_harmonic(mode: ModeIndex, direction: &[f64]) -> Result<f64> {
    if direction.len() != mode.dim() {
        return Err(Error::invalid(format!(
            "direction has {} components, expected {}",
            direction.len(),
            mode.dim()
        )));
    }
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::invalid(format!(
            "direction is not a unit vector (norm {norm})"
        )));
    }
    Ok(harmonic_unchecked(mode, direction))
}

/// `Y_ml` at a direction assumed to be of unit length.
pub(crate) fn harmonic_unchecked(mode: ModeIndex, u: &[f64]) -> f64 {
    let (m, l) = (mode.degree(), mode.index());
    match mode.dim() {
        2 => {
            if m == 0 {
                return 1.0 / (2.0 * PI).sqrt();
            }
            let (re, im) = complex_power(u[0], u[1], m);
            if l == 1 {
                re / PI.sqrt()
            } else {
                im / PI.sqrt()
            }
        }
        _ => {
            let k = l as isize - m as isize - 1;
            let ka = k.unsigned_abs();
            let p = legendre_reduced(m, ka, u[2]);
            if k == 0 {
                return p;
            }
            let (re, im) = complex_power(u[0], u[1], ka);
            let trig = if k > 0 { re } else { im };
            std::f64::consts::SQRT_2 * p * trig
        }
    }
}

/// Solid harmonic `|x|^m Y_ml(x/|x|)`, a homogeneous polynomial of degree `m`.
pub fn solid_harmonic(mode: ModeIndex, x: &[f64]) -> f64 {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let m = mode.degree();
    if r == 0.0 {
        return if m == 0 {
            harmonic_unchecked(mode, &[1.0, 0.0, 0.0][..mode.dim()])
        } else {
            0.0
        };
    }
    let mut u = [0.0; 3];
    for (ui, xi) in u.iter_mut().zip(x) {
        *ui = xi / r;
    }
    r.powi(m as i32) * harmonic_unchecked(mode, &u[..mode.dim()])
}

/// `(x + iy)^k` by repeated multiplication.
fn complex_power(x: f64, y: f64, k: usize) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..k {
        let next = re * x - im * y;
        im = re * y + im * x;
        re = next;
    }
    (re, im)
}

/// Orthonormal associated Legendre function `P̄_m^k(z)` with the factor
/// `(1 - z²)^{k/2}` removed (it is supplied by `(x + iy)^k`).
fn legendre_reduced(m: usize, k: usize, z: f64) -> f64 {
    debug_assert!(k <= m);
    let mut pkk = (1.0 / (4.0 * PI)).sqrt();
    for i in 1..=k {
        let fi = i as f64;
        pkk *= ((2.0 * fi + 1.0) / (2.0 * fi)).sqrt();
    }
    if m == k {
        return pkk;
    }
    let kf = k as f64;
    let mut prev = pkk;
    let mut cur = (2.0 * kf + 3.0).sqrt() * z * pkk;
    let a = |l: f64| ((4.0 * l * l - 1.0) / (l * l - kf * kf)).sqrt();
    for deg in (k + 2)..=m {
        let lf = deg as f64;
        let next = a(lf) * (z * cur - prev / a(lf - 1.0));
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{modes_up_to, AngularSampleSet};

    #[test]
    fn planar_reference_values() {
        let y = eval_harmonic(ModeIndex::new(2, 0, 1).unwrap(), &[0.6, 0.8]).unwrap();
        assert!((y - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let y = eval_harmonic(ModeIndex::new(2, 1, 1).unwrap(), &[1.0, 0.0]).unwrap();
        assert!((y - 1.0 / PI.sqrt()).abs() < 1e-15);
        let phi: f64 = 0.7;
        let y = eval_harmonic(ModeIndex::new(2, 3, 2).unwrap(), &[phi.cos(), phi.sin()]).unwrap();
        assert!((y - (3.0 * phi).sin() / PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn spatial_reference_values() {
        // Y_{1,0} = sqrt(3/4π) z
        let mode = ModeIndex::new(3, 1, 2).unwrap();
        let u = [0.48, 0.6, 0.64];
        let y = eval_harmonic(mode, &u).unwrap();
        assert!((y - (3.0 / (4.0 * PI)).sqrt() * 0.64).abs() < 1e-15);
        // Y_{2,2} = sqrt(15/16π) (x² - y²)
        let mode = ModeIndex::new(3, 2, 5).unwrap();
        let y = eval_harmonic(mode, &u).unwrap();
        let expect = (15.0 / (16.0 * PI)).sqrt() * (0.48f64.powi(2) - 0.36);
        assert!((y - expect).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_unit_direction() {
        let mode = ModeIndex::new(2, 1, 1).unwrap();
        assert!(eval_harmonic(mode, &[1.0, 0.1]).is_err());
        assert!(eval_harmonic(mode, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn orthonormal_on_sphere() {
        for n in [2usize, 3] {
            let set = AngularSampleSet::new(n, 24).unwrap();
            let modes = modes_up_to(n, 6).unwrap();
            for a in &modes {
                for b in &modes {
                    let ip: f64 = set
                        .nodes()
                        .iter()
                        .zip(set.weights())
                        .map(|(u, w)| w * harmonic_unchecked(*a, u) * harmonic_unchecked(*b, u))
                        .sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12, "n={n} {a} {b}: {ip}");
                }
            }
        }
    }

    #[test]
    fn solid_harmonic_is_polynomial_at_origin() {
        let mode = ModeIndex::new(3, 2, 3).unwrap();
        assert_eq!(solid_harmonic(mode, &[0.0, 0.0, 0.0]), 0.0);
        let y00 = solid_harmonic(ModeIndex::radial(3), &[0.0, 0.0, 0.0]);
        assert!((y00 - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        // degree-1 planar: r Y_11 = x / sqrt(pi)
        let v = solid_harmonic(ModeIndex::new(2, 1, 1).unwrap(), &[2.0, -1.0]);
        assert!((v - 2.0 / PI.sqrt()).abs() < 1e-14);
    }
}
