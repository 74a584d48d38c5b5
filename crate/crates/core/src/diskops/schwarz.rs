use std::sync::Arc;

use rustfft::FftPlanner;

use super::grid::{BoundaryFunction, DiscGrid, GridFunction};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par;

/// Power series of the Schwarz integral `Sφ(ζ) = Σ a_k ζ^k`, built from the
/// discrete Fourier coefficients of the boundary samples: `a_0 = φ̂_0`,
/// `a_k = 2φ̂_k` and the Nyquist coefficient taken once.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzSeries {
    pub coeffs: Vec<C64>,
}

impl SchwarzSeries {
    pub fn new(phi: &BoundaryFunction) -> Self {
        let n = phi.len();
        let mut buf = phi.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let s = 1.0 / n as f64;
        let half = n / 2;
        let mut coeffs = Vec::with_capacity(half + 1);
        coeffs.push(buf[0] * s);
        for c in &buf[1..half] {
            coeffs.push(*c * (2.0 * s));
        }
        if n % 2 == 0 {
            coeffs.push(buf[half] * s);
        } else {
            coeffs.push(buf[half] * (2.0 * s));
        }
        Self { coeffs }
    }

    pub fn eval(&self, zeta: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * zeta + c)
    }

    pub fn derivative(&self, zeta: C64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, (k, c)| acc * zeta + c * k as f64)
    }

    pub fn second_derivative(&self, zeta: C64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, (k, c)| acc * zeta + c * (k * (k - 1)) as f64)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * t).collect() }
    }

    /// Values on the grid nodes plus the boundary trace.
    pub fn on_grid(&self, grid: &Arc<DiscGrid>) -> GridFunction {
        let nt = grid.n_theta();
        if self.coeffs.len() > nt / 2 + 1 {
            let values = par::map(&grid.nodes(), |z| self.eval(*z));
            let boundary = (0..nt).map(|k| self.eval(C64::from_polar(1.0, grid.theta(k)))).collect();
            return GridFunction { grid: grid.clone(), values, boundary: Some(boundary) };
        }
        let ring_at = |r: f64| {
            let mut ring = vec![C64::new(0.0, 0.0); nt];
            let mut rk = 1.0;
            for (k, c) in self.coeffs.iter().enumerate() {
                ring[k % nt] += c * rk;
                rk *= r;
            }
            grid.ring_inverse(&mut ring);
            ring
        };
        let mut values = Vec::with_capacity(grid.len());
        for &r in grid.radii() {
            values.extend(ring_at(r));
        }
        GridFunction { grid: grid.clone(), values, boundary: Some(ring_at(1.0)) }
    }
}

/// Schwarz integral of `φ` at points of the closed unit disc.
pub fn schwarz(phi: &BoundaryFunction, points: &[C64]) -> Result<Vec<C64>> {
    if let Some(z) = points.iter().find(|z| z.norm() > 1.0) {
        return Err(Error::InvalidArgument(format!("Schwarz integral evaluated outside the disc at {z}")));
    }
    let series = SchwarzSeries::new(phi);
    Ok(par::map(points, |z| series.eval(*z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reproduces_trigonometric_data() {
        let n = 512;
        for k in 1..=2 {
            let phi = BoundaryFunction::from_fn(n, |t| C64::new((k as f64 * t).cos(), 0.0));
            let pts = [C64::new(0.3, 0.4), C64::new(-0.9, 0.1), C64::new(0.0, 0.0)];
            for (z, v) in pts.iter().zip(schwarz(&phi, &pts).unwrap()) {
                assert!((v - z.powu(k)).norm() < 1e-13);
            }
        }
        let phi = BoundaryFunction::from_fn(16, |_| C64::new(-0.25, 0.0));
        assert!((schwarz(&phi, &[C64::new(0.5, 0.5)]).unwrap()[0] - C64::new(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn real_part_traces_the_data_and_imaginary_part_vanishes_at_zero() {
        let n = 256;
        let phi = BoundaryFunction::cutoff(n);
        let s = SchwarzSeries::new(&phi);
        assert!(s.eval(C64::new(0.0, 0.0)).im.abs() < 1e-15);
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            assert!((s.eval(C64::from_polar(1.0, t)).re - phi.values[k].re).abs() < 1e-13);
        }
        let g = DiscGrid::new(16, n).unwrap();
        let on = s.on_grid(&g);
        for (z, v) in g.nodes().iter().zip(&on.values) {
            assert!((s.eval(*z) - v).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let s = SchwarzSeries::new(&BoundaryFunction::cutoff(64));
        let z = C64::new(0.2, -0.3);
        let h = 1e-6;
        let fd = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
        assert!((fd - s.derivative(z)).norm() < 1e-8);
        let fd2 = (s.derivative(z + h) - s.derivative(z - h)) / (2.0 * h);
        assert!((fd2 - s.second_derivative(z)).norm() < 1e-7);
    }

    #[test]
    fn outside_points_rejected() {
        let phi = BoundaryFunction::cutoff(16);
        assert!(schwarz(&phi, &[C64::new(1.5, 0.0)]).is_err());
    }
}
