//! Local polynomial interpolation on uniform grids and extrapolation to zero.

/// Four-point Lagrange (cubic) interpolation of samples on the uniform grid
/// `start + i*h`. Exact for cubic polynomials. The stencil is clamped at the
/// grid ends, so `x` may lie anywhere in `[start, start + (n-1) h]`.
pub fn cubic_interpolate(start: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    match n {
        0 => return 0.0,
        1 => return values[0],
        2 | 3 => {
            // not enough points for a cubic: fall back to linear
            let s = ((x - start) / h).clamp(0.0, (n - 1) as f64);
            let i = (s.floor() as usize).min(n - 2);
            let w = s - i as f64;
            return values[i] * (1.0 - w) + values[i + 1] * w;
        }
        _ => {}
    }
    let s = (x - start) / h;
    let cell = (s.floor() as isize).clamp(0, n as isize - 2);
    let first = (cell - 1).clamp(0, n as isize - 4) as usize;
    let mut acc = 0.0;
    for j in 0..4 {
        let mut basis = 1.0;
        let sj = (first + j) as f64;
        for k in 0..4 {
            if k != j {
                let sk = (first + k) as f64;
                basis *= (s - sk) / (sj - sk);
            }
        }
        acc += basis * values[first + j];
    }
    acc
}

/// Value at `x = 0` of the polynomial through `(xs[i], ys[i])`, evaluated by
/// Neville's scheme. With `xs = r^2` this is Richardson extrapolation of an
/// even function of `r` to `r = 0`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut p = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p.first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_exact_for_cubics() {
        let h = 0.25;
        let f = |x: f64| 2.0 - x + 0.5 * x * x - 0.3 * x * x * x;
        let v: Vec<f64> = (0..9).map(|i| f(1.0 + i as f64 * h)).collect();
        for &x in &[1.0, 1.1, 1.63, 2.5, 2.99, 3.0] {
            assert!((cubic_interpolate(1.0, h, &v, x) - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn neville_recovers_intercept() {
        let xs = [0.01, 0.04, 0.09, 0.16];
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 3.0 + 2.0 * x - 5.0 * x * x + x * x * x)
            .collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-12);
    }
}
