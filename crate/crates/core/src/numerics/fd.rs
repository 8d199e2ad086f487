//! Finite-difference stencils on uniform grids.

/// Weights of the finite-difference approximations of derivatives
/// `0..=max_order` at `x0` from values at `nodes` (Fornberg 1988).
///
/// Returns `w[k][j]`, the weight of node `j` for the derivative of order `k`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Second-order first derivative: centered in the interior, one-sided
/// three-point stencils at both ends. Requires at least three samples.
pub fn centered_first_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "first derivative needs at least 3 samples");
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    d
}

/// Second-order second derivative: centered in the interior, one-sided
/// four-point stencils at both ends. Requires at least four samples.
pub fn centered_second_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 4, "second derivative needs at least 4 samples");
    let h2 = h * h;
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h2;
    }
    d[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2;
    d[n - 1] =
        (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2;
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_reproduces_classic_stencils() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);

        let w = fornberg_weights(0.0, &[0.0, 1.0, 2.0], 1);
        assert!((w[1][0] + 1.5).abs() < 1e-15);
        assert!((w[1][1] - 2.0).abs() < 1e-15);
        assert!((w[1][2] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fornberg_is_exact_for_polynomials() {
        let nodes: Vec<f64> = (0..6).map(|k| 1.0 - 0.1 * k as f64).collect();
        let w = fornberg_weights(1.0, &nodes, 3);
        // p(x) = x^5 on 6 nodes: derivatives at 1 are 1, 5, 20, 60
        let vals: Vec<f64> = nodes.iter().map(|x| x.powi(5)).collect();
        let expect = [1.0, 5.0, 20.0, 60.0];
        for (k, e) in expect.iter().enumerate() {
            let d: f64 = w[k].iter().zip(&vals).map(|(a, b)| a * b).sum();
            assert!((d - e).abs() < 1e-8, "order {k}: {d} vs {e}");
        }
    }

    #[test]
    fn stencils_exact_for_quadratics() {
        let h = 0.1;
        let v: Vec<f64> = (0..8).map(|i| (i as f64 * h).powi(2)).collect();
        let d1 = centered_first_derivative(&v, h);
        let d2 = centered_second_derivative(&v, h);
        for i in 0..8 {
            assert!((d1[i] - 2.0 * i as f64 * h).abs() < 1e-12);
            assert!((d2[i] - 2.0).abs() < 1e-10);
        }
    }
}
