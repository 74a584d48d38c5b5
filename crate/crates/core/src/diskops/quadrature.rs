//! Gauss–Legendre rules and barycentric interpolation on their nodes.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|t| a + h * (t + 1.0)).collect(),
        w.iter().map(|v| v * h).collect(),
    )
}

/// Barycentric weights for the Gauss–Legendre nodes `x` with weights `w`
/// (`λ_j ∝ (−1)^j √((1 − x_j²) w_j)`).
pub fn gl_barycentric_weights(x: &[f64], w: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(w)
        .enumerate()
        .map(|(j, (xj, wj))| {
            let s = ((1.0 - xj * xj) * wj).sqrt();
            if j % 2 == 0 { s } else { -s }
        })
        .collect()
}

/// Row of interpolation coefficients `c_j` with `p(x) = Σ c_j f_j`.
pub fn barycentric_row(nodes: &[f64], lambda: &[f64], x: f64) -> Vec<f64> {
    if let Some(j) = nodes.iter().position(|&xj| xj == x) {
        let mut row = vec![0.0; nodes.len()];
        row[j] = 1.0;
        return row;
    }
    let mut row: Vec<f64> = nodes.iter().zip(lambda).map(|(xj, lj)| lj / (x - xj)).collect();
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|c| *c /= s);
    row
}

/// Spectral differentiation matrix (row-major) on the given nodes.
pub fn differentiation_matrix(nodes: &[f64], lambda: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (lambda[j] / lambda[i]) / (nodes[i] - nodes[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [3, 8, 33, 128] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 monomial
            let d = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
            assert!((s - 2.0 / (d as f64 + 1.0)).abs() < 1e-12, "n={n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn barycentric_reproduces_polynomials() {
        let (x, w) = gauss_legendre(10);
        let lam = gl_barycentric_weights(&x, &w);
        let f: Vec<f64> = x.iter().map(|t| t.powi(7) - 2.0 * t).collect();
        for probe in [-1.0, -0.3, 0.0, 0.77, 1.0] {
            let row = barycentric_row(&x, &lam, probe);
            let v: f64 = row.iter().zip(&f).map(|(c, f)| c * f).sum();
            assert!((v - (probe.powi(7) - 2.0 * probe)).abs() < 1e-12);
        }
        let d = differentiation_matrix(&x, &lam);
        for i in 0..10 {
            let v: f64 = (0..10).map(|j| d[i * 10 + j] * f[j]).sum();
            assert!((v - (7.0 * x[i].powi(6) - 2.0)).abs() < 1e-11);
        }
    }
}
