use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rustfft::{Fft, FftPlanner};

use super::cauchy::CauchyGreen;
use super::quadrature::{barycentric_row, differentiation_matrix, gauss_legendre, gl_barycentric_weights};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Tensor polar grid on the unit disc: Gauss–Legendre radii on `(0, 1)` and
/// `n_theta` equispaced angles `θ_k = 2πk / n_theta`.
pub struct DiscGrid {
    n_r: usize,
    n_theta: usize,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    bary: Vec<f64>,
    diff: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    cauchy: OnceLock<CauchyGreen>,
}

impl fmt::Debug for DiscGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiscGrid({}x{})", self.n_r, self.n_theta)
    }
}

impl PartialEq for DiscGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_r == other.n_r && self.n_theta == other.n_theta
    }
}

pub const MIN_RADIAL: usize = 3;
pub const MIN_ANGULAR: usize = 4;

impl DiscGrid {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Arc<Self>> {
        if n_r < MIN_RADIAL || n_theta < MIN_ANGULAR || n_theta % 2 != 0 {
            return Err(Error::GridTooCoarse(format!(
                "{n_r}x{n_theta}: need n_r >= {MIN_RADIAL} and even n_theta >= {MIN_ANGULAR}"
            )));
        }
        let (x, w) = gauss_legendre(n_r);
        let radii: Vec<f64> = x.iter().map(|t| 0.5 * (t + 1.0)).collect();
        let radial_weights: Vec<f64> = w.iter().map(|v| 0.5 * v).collect();
        let bary = gl_barycentric_weights(&x, &w);
        // d/dr = 2 d/dx
        let diff = differentiation_matrix(&x, &bary).into_iter().map(|v| 2.0 * v).collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n_theta);
        let ifft = planner.plan_fft_inverse(n_theta);
        Ok(Arc::new(Self {
            n_r,
            n_theta,
            radii,
            radial_weights,
            bary,
            diff,
            fft,
            ifft,
            cauchy: OnceLock::new(),
        }))
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn theta(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_theta as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|k| self.theta(k)).collect()
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.n_theta + k
    }

    pub fn node(&self, j: usize, k: usize) -> C64 {
        C64::from_polar(self.radii[j], self.theta(k))
    }

    pub fn nodes(&self) -> Vec<C64> {
        (0..self.n_r)
            .flat_map(|j| (0..self.n_theta).map(move |k| (j, k)))
            .map(|(j, k)| self.node(j, k))
            .collect()
    }

    /// Area weight of node `(j, k)`.
    pub fn weight(&self, j: usize) -> f64 {
        self.radial_weights[j] * self.radii[j] * 2.0 * PI / self.n_theta as f64
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n_r)
            .flat_map(|j| std::iter::repeat_n(self.weight(j), self.n_theta))
            .collect()
    }

    /// Interpolation row for radius `r` over the radial nodes.
    pub fn radial_row(&self, r: f64) -> Vec<f64> {
        barycentric_row(&self.radii, &self.bary, r)
    }

    /// Radial differentiation matrix, row-major `n_r × n_r`.
    pub fn radial_diff(&self) -> &[f64] {
        &self.diff
    }

    /// Angular index of the node closest to `θ`.
    pub fn nearest_k(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(2.0 * PI);
        ((t / (2.0 * PI) * self.n_theta as f64).round() as usize) % self.n_theta
    }

    /// Forward DFT of one ring in place, normalized so that
    /// `u(θ_k) = Σ_m û_m e^{imθ_k}`.
    pub fn ring_forward(&self, ring: &mut [C64]) {
        self.fft.process(ring);
        let s = 1.0 / self.n_theta as f64;
        ring.iter_mut().for_each(|c| *c *= s);
    }

    /// Inverse of [`Self::ring_forward`].
    pub fn ring_inverse(&self, ring: &mut [C64]) {
        self.ifft.process(ring);
    }

    /// Signed mode number stored in slot `i` of a transformed ring.
    pub fn mode_of(&self, i: usize) -> i64 {
        let n = self.n_theta as i64;
        let i = i as i64;
        if i < n / 2 { i } else { i - n }
    }

    /// Slot of signed mode `m`.
    pub fn slot_of(&self, m: i64) -> usize {
        m.rem_euclid(self.n_theta as i64) as usize
    }

    pub fn nyquist_slot(&self) -> usize {
        self.n_theta / 2
    }

    pub(crate) fn cauchy_green(&self) -> &CauchyGreen {
        self.cauchy.get_or_init(|| CauchyGreen::new(self))
    }
}

/// Complex samples at the nodes of a [`DiscGrid`], ring-major, with an
/// optional boundary trace at the angles `θ_k`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: Arc<DiscGrid>,
    pub values: Vec<C64>,
    pub boundary: Option<Vec<C64>>,
}

impl PartialEq for GridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values && self.boundary == other.boundary
    }
}

impl GridFunction {
    pub fn new(grid: Arc<DiscGrid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        if values.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("grid function has non-finite values".into()));
        }
        Ok(Self { grid, values, boundary: None })
    }

    pub fn zeros(grid: &Arc<DiscGrid>) -> Self {
        Self { grid: grid.clone(), values: vec![C64::new(0.0, 0.0); grid.len()], boundary: None }
    }

    /// Sample `f` at the nodes; the boundary trace is sampled as well.
    pub fn from_fn(grid: &Arc<DiscGrid>, f: impl Fn(C64) -> C64) -> Self {
        let values = grid.nodes().into_iter().map(&f).collect();
        let boundary = (0..grid.n_theta()).map(|k| f(C64::from_polar(1.0, grid.theta(k)))).collect();
        Self { grid: grid.clone(), values, boundary: Some(boundary) }
    }

    pub fn with_boundary(mut self, boundary: Vec<C64>) -> Self {
        self.boundary = Some(boundary);
        self
    }

    pub fn at(&self, j: usize, k: usize) -> C64 {
        self.values[self.grid.index(j, k)]
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            boundary: self.boundary.as_ref().map(|b| b.iter().map(|&v| f(v)).collect()),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        let boundary = match (&self.boundary, &other.boundary) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()),
            _ => None,
        };
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect(),
            boundary,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sup-distance at nodes.
    pub fn sup_dist(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Discrete `L^p(𝔻)` norm by the grid quadrature.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let terms: Vec<f64> = (0..self.grid.n_r())
            .flat_map(|j| {
                let w = self.grid.weight(j);
                (0..self.grid.n_theta()).map(move |k| (j, k, w))
            })
            .map(|(j, k, w)| w * self.at(j, k).norm().powf(p))
            .collect();
        crate::par::pairwise_sum(&terms).powf(1.0 / p)
    }

    /// Quadrature of the function over the disc.
    pub fn integrate(&self) -> C64 {
        let re: Vec<f64> = self.values.iter().enumerate().map(|(i, v)| v.re * self.grid.weight(i / self.grid.n_theta())).collect();
        let im: Vec<f64> = self.values.iter().enumerate().map(|(i, v)| v.im * self.grid.weight(i / self.grid.n_theta())).collect();
        C64::new(crate::par::pairwise_sum(&re), crate::par::pairwise_sum(&im))
    }

    /// Angular Fourier modes per ring (`n_r × n_theta`, slot order).
    pub fn modes(&self) -> Vec<C64> {
        let nt = self.grid.n_theta();
        let mut out = self.values.clone();
        for ring in out.chunks_exact_mut(nt) {
            self.grid.ring_forward(ring);
        }
        out
    }

    /// Spectral interpolation at an arbitrary point of the closed disc.
    pub fn eval_at(&self, zeta: C64) -> C64 {
        let modes = self.modes();
        eval_modes(&self.grid, &modes, zeta)
    }

    /// Spectral interpolation at many points (modes computed once).
    pub fn eval_many(&self, points: &[C64]) -> Vec<C64> {
        let modes = self.modes();
        crate::par::map(points, |&z| eval_modes(&self.grid, &modes, z))
    }

    /// Value at the origin (mode 0 extrapolated to `r = 0`).
    pub fn value_at_origin(&self) -> C64 {
        self.eval_at(C64::new(0.0, 0.0))
    }
}

/// Evaluate a mode table (`n_r × n_theta`) at `ζ`.
pub(crate) fn eval_modes(grid: &DiscGrid, modes: &[C64], zeta: C64) -> C64 {
    let nt = grid.n_theta();
    let r = zeta.norm();
    let theta = zeta.arg();
    let row = grid.radial_row(r);
    let mut acc = C64::new(0.0, 0.0);
    for slot in 0..nt {
        let mut c = C64::new(0.0, 0.0);
        for (j, w) in row.iter().enumerate() {
            c += modes[j * nt + slot] * *w;
        }
        if slot == grid.nyquist_slot() {
            acc += c * (nt as f64 / 2.0 * theta).cos();
        } else {
            acc += c * C64::from_polar(1.0, grid.mode_of(slot) as f64 * theta);
        }
    }
    acc
}

/// Samples on the unit circle at the grid angles `θ_k = 2πk / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    pub values: Vec<C64>,
    pub real: bool,
}

impl BoundaryFunction {
    pub fn from_fn(n_theta: usize, f: impl Fn(f64) -> C64) -> Self {
        let values: Vec<C64> = (0..n_theta).map(|k| f(2.0 * PI * k as f64 / n_theta as f64)).collect();
        let real = values.iter().all(|c| c.im == 0.0);
        Self { values, real }
    }

    pub fn from_real(values: Vec<f64>) -> Self {
        Self { values: values.into_iter().map(|v| C64::new(v, 0.0)).collect(), real: true }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn theta(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.values.len() as f64
    }

    /// Built-in cutoff: zero on the closed upper half-circle and
    /// `−(4s(1 − s))³`, `s = (θ − π)/π`, on the lower one. The cube makes the
    /// junctions at `θ = 0, π` twice continuously differentiable; the minimum
    /// `−1` is reached at `θ = 3π/2`.
    pub fn cutoff(n_theta: usize) -> Self {
        Self::from_real((0..n_theta).map(|k| cutoff_value(2.0 * PI * k as f64 / n_theta as f64)).collect())
    }

    /// Check the cutoff requirements: real, values in `[−1, 0]`, zero on the
    /// closed upper half-circle, negative on the open lower half-circle.
    pub fn validate_cutoff(&self) -> Result<()> {
        if !self.real || self.values.iter().any(|c| c.im != 0.0) {
            return Err(Error::BadCutoff("cutoff must be real-valued".into()));
        }
        let n = self.values.len();
        if n < MIN_ANGULAR || n % 2 != 0 {
            return Err(Error::BadCutoff(format!("need an even number of samples, got {n}")));
        }
        for (k, c) in self.values.iter().enumerate() {
            let v = c.re;
            if !(-1.0..=0.0).contains(&v) {
                return Err(Error::BadCutoff(format!("sample {k} = {v} outside [-1, 0]")));
            }
            let upper = 2 * k <= n;
            if upper && v != 0.0 {
                return Err(Error::BadCutoff(format!("sample {k} on the upper half-circle is {v}, not 0")));
            }
            if !upper && v >= 0.0 {
                return Err(Error::BadCutoff(format!("sample {k} on the lower half-circle is not negative")));
            }
        }
        Ok(())
    }

    /// Indices of samples on the closed upper half-circle `θ ∈ [0, π]`.
    pub fn upper_indices(&self) -> impl Iterator<Item = usize> {
        let n = self.values.len();
        (0..n).filter(move |k| 2 * k <= n)
    }
}

pub fn cutoff_value(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t <= PI {
        return 0.0;
    }
    let s = (t - PI) / PI;
    -(4.0 * s * (1.0 - s)).powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        for (nr, nt) in [(8, 16), (64, 64), (128, 256)] {
            let g = DiscGrid::new(nr, nt).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - PI).abs() / PI < 1e-8);
            assert!(g.radii().iter().all(|&r| r > 0.0 && r < 1.0));
        }
    }

    #[test]
    fn coarse_grids_rejected() {
        assert!(matches!(DiscGrid::new(2, 16), Err(Error::GridTooCoarse(_))));
        assert!(matches!(DiscGrid::new(8, 15), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn interpolation_is_spectral() {
        let g = DiscGrid::new(24, 32).unwrap();
        let f = |z: C64| z * z.conj() * z + (0.5 * z).exp() - z.conj().powu(3);
        let u = GridFunction::from_fn(&g, f);
        for p in [C64::new(0.0, 0.0), C64::new(0.3, -0.6), C64::new(-0.999, 0.0), C64::from_polar(1.0, 2.0)] {
            assert!((u.eval_at(p) - f(p)).norm() < 1e-12, "{p}");
        }
    }

    #[test]
    fn cutoff_is_admissible() {
        for n in [16, 256, 512] {
            BoundaryFunction::cutoff(n).validate_cutoff().unwrap();
        }
        let mut bad = BoundaryFunction::cutoff(16);
        bad.values[2] = C64::new(-0.1, 0.0);
        assert!(bad.validate_cutoff().is_err());
        let mut bad = BoundaryFunction::cutoff(16);
        bad.values[12] = C64::new(-1.5, 0.0);
        assert!(bad.validate_cutoff().is_err());
        assert!((cutoff_value(1.5 * PI) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn lp_norm_of_constant() {
        let g = DiscGrid::new(16, 32).unwrap();
        let u = GridFunction::from_fn(&g, |_| C64::new(2.0, 0.0));
        assert!((u.lp_norm(4.0) - 2.0 * PI.powf(0.25)).abs() < 1e-12);
        assert!((u.integrate() - 2.0 * PI).norm() < 1e-12);
    }
}
