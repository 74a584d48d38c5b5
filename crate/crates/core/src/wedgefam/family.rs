use std::sync::Arc;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::wedge::WedgeDomain;
use crate::accal::ComplexMatrixField;
use crate::discsolve::{holomorphy_residual, horner, horner_derivative, DiscMap, SolveInfo};
use crate::diskops::dbar::{d_zeta_spectral, DbarScheme};
use crate::diskops::{cauchy_green_on_grid, BoundaryFunction, DiscGrid, GridFunction, SchwarzSeries};
use crate::error::{Error, Result};
use crate::linalg::{mat_vec, solve_real, RMatrix, C64};
use crate::par;
use crate::poly::RealPoly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyOptions {
    /// Bound on the interior holomorphy residual.
    pub tol: f64,
    /// Picard iteration stops once the update is below this.
    pub step_tol: f64,
    pub max_iter: usize,
    /// Bound on `|Ev(c, t, ζ) − w|` for a successful inversion.
    pub inversion_tol: f64,
    pub multistarts: usize,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self { tol: 1e-8, step_tol: 1e-13, max_iter: 300, inversion_tol: 1e-11, multistarts: 8 }
    }
}

/// Discs `z(c, t)` attached to the edge of a wedge along the upper
/// half-circle: `Re z_j = h_j(Im z) + t_j φ` on the unit circle,
/// `Im z(0) = c`, and `z_ζ̄ = A(z) z̄_ζ̄` inside. On the model wedge with
/// `A = 0` these are the flat discs `t_j Sφ + i c_j`.
///
/// The family is indexed by `c = (0, c')`, `t = (1, t')`.
#[derive(Debug, Clone)]
pub struct DiscFamily {
    pub wedge: WedgeDomain,
    pub a: ComplexMatrixField,
    pub phi: BoundaryFunction,
    pub series: SchwarzSeries,
    pub grid: Arc<DiscGrid>,
    pub opts: FamilyOptions,
}

/// A point of `V × 𝔻` with the inversion diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub c: Vec<f64>,
    pub t: Vec<f64>,
    pub zeta: C64,
    pub residual: f64,
    /// Distinct roots found by the multistart (1 when unique).
    pub roots: usize,
}

impl DiscFamily {
    pub fn new(wedge: WedgeDomain, a: ComplexMatrixField, phi: BoundaryFunction, grid: Arc<DiscGrid>, opts: FamilyOptions) -> Result<Self> {
        phi.validate_cutoff()?;
        if phi.len() != grid.n_theta() {
            return Err(Error::Dimension { expected: grid.n_theta(), got: phi.len() });
        }
        if !wedge.is_totally_real() {
            return Err(Error::InvalidArgument("disc families need a totally real edge (k = n)".into()));
        }
        if a.dim() != wedge.n {
            return Err(Error::Dimension { expected: wedge.n, got: a.dim() });
        }
        let series = SchwarzSeries::new(&phi);
        Ok(Self { wedge, a, phi, series, grid, opts })
    }

    /// Flat family on the model wedge with the built-in cutoff.
    pub fn flat(n: usize, grid: Arc<DiscGrid>) -> Result<Self> {
        let phi = BoundaryFunction::cutoff(grid.n_theta());
        Self::new(WedgeDomain::model(n), ComplexMatrixField::zero(n), phi, grid, FamilyOptions::default())
    }

    /// Glued family for the edge `x_j = ε|y|²`.
    pub fn quadratic(n: usize, eps: f64, a: ComplexMatrixField, grid: Arc<DiscGrid>) -> Result<Self> {
        let phi = BoundaryFunction::cutoff(grid.n_theta());
        Self::new(WedgeDomain::quadratic(n, eps), a, phi, grid, FamilyOptions::default())
    }

    pub fn dim(&self) -> usize {
        self.wedge.n
    }

    pub fn is_flat(&self) -> bool {
        self.wedge.is_model() && self.a.is_zero()
    }

    /// Full parameters from the reduced ones: `c = (0, c')`, `t = (1, t')`.
    pub fn params(c_red: &[f64], t_red: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut c = vec![0.0];
        c.extend_from_slice(c_red);
        let mut t = vec![1.0];
        t.extend_from_slice(t_red);
        (c, t)
    }

    fn check_params(&self, c: &[f64], t: &[f64]) -> Result<()> {
        let n = self.dim();
        if c.len() != n || t.len() != n {
            return Err(Error::Dimension { expected: n, got: c.len().min(t.len()) });
        }
        if let Some(bad) = t.iter().find(|&&x| !(x > 0.0)) {
            return Err(Error::InvalidArgument(format!("t must be positive, got {bad}")));
        }
        Ok(())
    }

    /// Power series of the holomorphic part of `z(c, t)`; exact for
    /// `A = 0`.
    pub fn holomorphic_series(&self, c: &[f64], t: &[f64]) -> Result<Vec<Vec<C64>>> {
        self.check_params(c, t)?;
        if self.wedge.is_model() {
            return Ok(flat_series(&self.series, c, t));
        }
        if self.a.is_zero() {
            return Ok(glue_boundary(&self.wedge.graphs, &self.phi, &self.series, c, t, &self.opts)?.0);
        }
        Ok(self.disc(c, t)?.series)
    }

    /// The disc `z(c, t)` on the family grid.
    pub fn disc(&self, c: &[f64], t: &[f64]) -> Result<DiscMap> {
        self.check_params(c, t)?;
        if self.a.is_zero() {
            let (series, info) = if self.wedge.is_model() {
                (flat_series(&self.series, c, t), SolveInfo { iterations: 0, residual: 0.0, steps: Vec::new(), solved: true })
            } else {
                glue_boundary(&self.wedge.graphs, &self.phi, &self.series, c, t, &self.opts)?
            };
            let mut disc = DiscMap::from_series(&self.grid, series);
            disc.info = info;
            disc.info.residual = holomorphy_residual(&disc, &self.a)?;
            disc.info.solved = disc.info.residual < self.opts.tol;
            return Ok(disc);
        }
        glue_coupled(self, c, t)
    }

    /// `Ev(c, t, ζ) = z(c, t)(ζ)`.
    pub fn eval(&self, c: &[f64], t: &[f64], zeta: C64) -> Result<Vec<C64>> {
        if self.a.is_zero() {
            let s = self.holomorphic_series(c, t)?;
            return Ok(s.iter().map(|p| horner(p, zeta)).collect());
        }
        Ok(self.disc(c, t)?.eval_at(zeta))
    }

    /// Sup over upper-half boundary samples of `|x_j − h_j(y)|`.
    pub fn gluing_residual(&self, disc: &DiscMap) -> f64 {
        gluing_residual(&self.wedge.graphs, disc)
    }
}

fn flat_series(s: &SchwarzSeries, c: &[f64], t: &[f64]) -> Vec<Vec<C64>> {
    c.iter()
        .zip(t)
        .map(|(&cj, &tj)| {
            let mut p: Vec<C64> = s.coeffs.iter().map(|a| a * tj).collect();
            p[0] += C64::new(0.0, cj);
            p
        })
        .collect()
}

/// Flat disc `z_j = t_j Sφ + i c_j`.
pub fn flat_family(c: &[f64], t: &[f64], phi: &BoundaryFunction, grid: &Arc<DiscGrid>) -> Result<DiscMap> {
    phi.validate_cutoff()?;
    flat_disc(c, t, &SchwarzSeries::new(phi), grid)
}

/// Flat disc from a precomputed series, without cutoff validation.
pub fn flat_disc(c: &[f64], t: &[f64], series: &SchwarzSeries, grid: &Arc<DiscGrid>) -> Result<DiscMap> {
    if c.len() != t.len() {
        return Err(Error::Dimension { expected: c.len(), got: t.len() });
    }
    if let Some(bad) = t.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {bad}")));
    }
    let mut disc = DiscMap::from_series(grid, flat_series(series, c, t));
    disc.info.solved = true;
    Ok(disc)
}

/// Glued disc for the edge `x = h(y)`.
pub fn glued_family(
    graphs: &[RealPoly],
    a: &ComplexMatrixField,
    c: &[f64],
    t: &[f64],
    phi: &BoundaryFunction,
    grid: &Arc<DiscGrid>,
    opts: &FamilyOptions,
) -> Result<DiscMap> {
    let n = graphs.len();
    let wedge = WedgeDomain::new(n, graphs.to_vec(), super::wedge::DEFAULT_DELTA)?;
    let family = DiscFamily::new(wedge, a.clone(), phi.clone(), grid.clone(), *opts)?;
    family.disc(c, t)
}

pub fn gluing_residual(graphs: &[RealPoly], disc: &DiscMap) -> f64 {
    let n = disc.dim();
    let nt = disc.grid.n_theta();
    let mut worst: f64 = 0.0;
    for k in (0..nt).filter(|k| 2 * k <= nt) {
        let Some(p) = disc.boundary_point(k) else { return f64::INFINITY };
        let y: Vec<f64> = p.iter().map(|c| c.im).collect();
        for j in 0..n {
            worst = worst.max((p[j].re - graphs[j].eval(&y)).abs());
        }
    }
    worst
}

/// Values of a power series at the `n` equispaced boundary angles.
fn series_on_circle(coeffs: &[C64], n: usize, planner: &mut FftPlanner<f64>) -> Vec<C64> {
    let mut ring = vec![C64::new(0.0, 0.0); n];
    for (k, c) in coeffs.iter().enumerate() {
        ring[k % n] += c;
    }
    planner.plan_fft_inverse(n).process(&mut ring);
    ring
}

fn track_growth(steps: &[f64], growth: &mut usize) {
    if let [.., prev, last] = steps {
        if *prev > 1e-13 && last >= prev {
            *growth += 1;
        } else {
            *growth = 0;
        }
    }
}

/// Boundary-only Picard iteration for `A = 0`: with `y` the imaginary part
/// on the circle, `z = S(tφ + h(y)) + ic`.
fn glue_boundary(
    graphs: &[RealPoly],
    phi: &BoundaryFunction,
    base: &SchwarzSeries,
    c: &[f64],
    t: &[f64],
    opts: &FamilyOptions,
) -> Result<(Vec<Vec<C64>>, SolveInfo)> {
    let n = c.len();
    let nt = phi.len();
    let mut planner = FftPlanner::new();
    let mut series = flat_series(base, c, t);
    let mut y: Vec<Vec<f64>> = series.iter().map(|s| series_on_circle(s, nt, &mut planner).iter().map(|v| v.im).collect()).collect();
    let mut info = SolveInfo::default();
    let mut growth = 0;
    loop {
        info.iterations += 1;
        let mut next_y = vec![vec![0.0; nt]; n];
        for j in 0..n {
            let psi: Vec<f64> = (0..nt)
                .map(|k| {
                    let yk: Vec<f64> = (0..n).map(|i| y[i][k]).collect();
                    t[j] * phi.values[k].re + graphs[j].eval(&yk)
                })
                .collect();
            let mut s = SchwarzSeries::new(&BoundaryFunction::from_real(psi)).coeffs;
            s[0] += C64::new(0.0, c[j]);
            next_y[j] = series_on_circle(&s, nt, &mut planner).iter().map(|v| v.im).collect();
            series[j] = s;
        }
        let step = next_y.iter().zip(&y).flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs())).fold(0.0, f64::max);
        info.steps.push(step);
        track_growth(&info.steps, &mut growth);
        y = next_y;
        if !step.is_finite() || growth >= 3 {
            let ratio = info.ratios().last().copied().unwrap_or(f64::INFINITY);
            return Err(Error::NoContraction { ratio, iterations: info.iterations });
        }
        if step <= opts.step_tol {
            break;
        }
        if info.iterations >= opts.max_iter {
            return Err(Error::BoundaryMismatch { residual: step });
        }
    }
    Ok((series, info))
}

/// Coupled iteration for `A ≠ 0`: `u = T(A(z) z̄_ζ̄)`,
/// `z = S(tφ + h(y) − Re u) + i(c − Im u(0)) + u`.
fn glue_coupled(family: &DiscFamily, c: &[f64], t: &[f64]) -> Result<DiscMap> {
    let grid = &family.grid;
    let n = family.dim();
    let nt = grid.n_theta();
    let opts = &family.opts;
    let graphs = &family.wedge.graphs;
    let mut z: Vec<GridFunction> = flat_series(&family.series, c, t)
        .into_iter()
        .map(|s| SchwarzSeries { coeffs: s }.on_grid(grid))
        .collect();
    let mut info = SolveInfo::default();
    let mut growth = 0;
    let mut series: Vec<Vec<C64>>;
    let mut u: Vec<GridFunction>;
    loop {
        info.iterations += 1;
        let zz: Vec<GridFunction> = z.iter().map(|g| d_zeta_spectral(g).map(|v| v.conj())).collect();
        let rows: Vec<Vec<C64>> = par::map_range(grid.len(), |i| {
            let zi: Vec<C64> = z.iter().map(|g| g.values[i]).collect();
            let wi: Vec<C64> = zz.iter().map(|g| g.values[i]).collect();
            mat_vec(&family.a.eval(&zi), &wi)
        });
        u = (0..n)
            .map(|j| {
                let src = GridFunction { grid: grid.clone(), values: rows.iter().map(|r| r[j]).collect(), boundary: None };
                cauchy_green_on_grid(&src)
            })
            .collect();
        let yb: Vec<Vec<f64>> = z.iter().map(|g| g.boundary.as_ref().expect("trace").iter().map(|v| v.im).collect()).collect();
        series = Vec::with_capacity(n);
        let mut next = Vec::with_capacity(n);
        for j in 0..n {
            let ub = u[j].boundary.as_ref().expect("trace");
            let psi: Vec<f64> = (0..nt)
                .map(|k| {
                    let yk: Vec<f64> = (0..n).map(|i| yb[i][k]).collect();
                    t[j] * family.phi.values[k].re + graphs[j].eval(&yk) - ub[k].re
                })
                .collect();
            let mut s = SchwarzSeries::new(&BoundaryFunction::from_real(psi)).coeffs;
            s[0] += C64::new(0.0, c[j] - u[j].value_at_origin().im);
            let h = SchwarzSeries { coeffs: s.clone() }.on_grid(grid);
            next.push(h.zip_with(&u[j], |a, b| a + b));
            series.push(s);
        }
        let step = next
            .iter()
            .zip(&z)
            .map(|(a, b)| {
                let bd = a.boundary.as_ref().unwrap().iter().zip(b.boundary.as_ref().unwrap()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
                a.sup_dist(b).max(bd)
            })
            .fold(0.0, f64::max);
        info.steps.push(step);
        track_growth(&info.steps, &mut growth);
        z = next;
        if !step.is_finite() || growth >= 3 {
            let ratio = info.ratios().last().copied().unwrap_or(f64::INFINITY);
            return Err(Error::NoContraction { ratio, iterations: info.iterations });
        }
        if step <= opts.step_tol.max(opts.tol * 1e-4) {
            break;
        }
        if info.iterations >= opts.max_iter {
            return Err(Error::BoundaryMismatch { residual: step });
        }
    }
    let mut disc = DiscMap::assemble(grid.clone(), z, series, Some(u), info);
    disc.info.residual = crate::discsolve::holomorphy_residual_with(&disc, &family.a, DbarScheme::Spectral)?;
    disc.info.solved = disc.info.residual < opts.tol;
    Ok(disc)
}

/// `Ev(c, t, ζ)`.
pub fn evaluation_map(family: &DiscFamily, c: &[f64], t: &[f64], zeta: C64) -> Result<Vec<C64>> {
    family.eval(c, t, zeta)
}

/// Parameters `(c, t, ζ)` with `Ev(c, t, ζ) = w`, for `w ∈ W_δ`.
pub fn invert_evaluation(family: &DiscFamily, w: &[C64]) -> Result<FamilyPoint> {
    if w.len() != family.dim() {
        return Err(Error::Dimension { expected: family.dim(), got: w.len() });
    }
    if !family.wedge.in_shrunk(w) {
        return Err(Error::NotInWedge(format!("margin {:.3e} in W_δ", family.wedge.shrunk_margin(w))));
    }
    let flat = flat_inverse(&family.series, w, family.opts.multistarts, family.opts.inversion_tol)?;
    if family.is_flat() {
        return Ok(flat);
    }
    newton_inverse(family, w, flat)
}

/// Multistart Newton for `Sφ(ζ) = w`, then `t_j = x_j / x_1`,
/// `c_j = y_j − t_j y_1`.
pub fn flat_inverse(series: &SchwarzSeries, w: &[C64], starts: usize, tol: f64) -> Result<FamilyPoint> {
    let target = w[0];
    let seeds = multistart_seeds(starts);
    let mut roots: Vec<(C64, f64)> = Vec::new();
    for s in seeds {
        if let Some((z, r)) = newton_holomorphic(series, target, s) {
            if r < tol && !roots.iter().any(|(q, _)| (q - z).norm() < 1e-7) {
                roots.push((z, r));
            }
        }
    }
    let Some(&(zeta, _)) = roots.iter().min_by(|a, b| a.1.total_cmp(&b.1)) else {
        return Err(Error::InversionFailed { residual: (series.eval(C64::new(0.0, 0.0)) - target).norm() });
    };
    let s = series.eval(zeta);
    let t: Vec<f64> = w.iter().map(|v| v.re / s.re).collect();
    let c: Vec<f64> = w.iter().zip(&t).map(|(v, tj)| v.im - tj * s.im).collect();
    let residual = w
        .iter()
        .zip(c.iter().zip(&t))
        .map(|(v, (cj, tj))| (s * tj + C64::new(0.0, *cj) - v).norm())
        .fold(0.0, f64::max);
    Ok(FamilyPoint { c, t, zeta, residual, roots: roots.len() })
}

fn multistart_seeds(count: usize) -> Vec<C64> {
    let mut seeds = vec![C64::new(0.0, 0.0)];
    let ring = count.saturating_sub(1).max(1);
    for k in 0..ring {
        let r = if k % 2 == 0 { 0.5 } else { 0.85 };
        seeds.push(C64::from_polar(r, std::f64::consts::PI * (0.25 + 2.0 * k as f64 / ring as f64)));
    }
    seeds.truncate(count.max(1));
    seeds
}

fn newton_holomorphic(s: &SchwarzSeries, target: C64, mut z: C64) -> Option<(C64, f64)> {
    for _ in 0..100 {
        let f = s.eval(z) - target;
        let d = s.derivative(z);
        if d.norm() == 0.0 {
            return None;
        }
        let mut step = f / d;
        let mut next = z - step;
        let mut tries = 0;
        while (next.norm() >= 1.0 || (s.eval(next) - target).norm() > f.norm()) && tries < 30 {
            step *= 0.5;
            next = z - step;
            tries += 1;
        }
        if next.norm() >= 1.0 {
            return None;
        }
        z = next;
        if step.norm() < 1e-15 {
            break;
        }
    }
    let r = (s.eval(z) - target).norm();
    r.is_finite().then_some((z, r))
}

/// Damped Newton on the reduced parameters `(c', t', ζ)` with a
/// finite-difference Jacobian.
fn newton_inverse(family: &DiscFamily, w: &[C64], start: FamilyPoint) -> Result<FamilyPoint> {
    let n = family.dim();
    let pack = |p: &FamilyPoint| {
        let mut u: Vec<f64> = p.c[1..].to_vec();
        u.extend_from_slice(&p.t[1..]);
        u.push(p.zeta.re);
        u.push(p.zeta.im);
        u
    };
    let unpack = |u: &[f64]| {
        let (c, t) = DiscFamily::params(&u[..n - 1], &u[n - 1..2 * n - 2]);
        (c, t, C64::new(u[2 * n - 2], u[2 * n - 1]))
    };
    let admissible = |u: &[f64]| {
        let (_, t, z) = unpack(u);
        z.norm() < 1.0 && t.iter().all(|&x| x > 0.0)
    };
    let resid = |u: &[f64]| -> Result<Vec<f64>> {
        let (c, t, z) = unpack(u);
        let v = family.eval(&c, &t, z)?;
        Ok(v.iter().zip(w).flat_map(|(a, b)| [a.re - b.re, a.im - b.im]).collect())
    };
    let norm = |r: &[f64]| r.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut u = pack(&start);
    let mut r = resid(&u)?;
    let h = 1e-7;
    for _ in 0..50 {
        if norm(&r) < family.opts.inversion_tol {
            break;
        }
        let dim = 2 * n;
        let mut jac = RMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut up = u.clone();
            let mut um = u.clone();
            up[col] += h;
            um[col] -= h;
            let (rp, rm) = (resid(&up)?, resid(&um)?);
            for row in 0..dim {
                jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        let Some(delta) = solve_real(&jac, &r) else { break };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a - lambda * d).collect();
            if admissible(&trial) {
                let rt = resid(&trial)?;
                if norm(&rt) < norm(&r) {
                    u = trial;
                    r = rt;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let residual = norm(&r);
    if !(residual < family.opts.inversion_tol) {
        return Err(Error::InversionFailed { residual });
    }
    let (c, t, zeta) = unpack(&u);
    Ok(FamilyPoint { c, t, zeta, residual, roots: start.roots })
}

/// `d/dζ` of the holomorphic part of `z(c, t)` at `ζ` (exact for `A = 0`).
pub fn family_derivative(family: &DiscFamily, c: &[f64], t: &[f64], zeta: C64) -> Result<Vec<C64>> {
    Ok(family.holomorphic_series(c, t)?.iter().map(|p| horner_derivative(p, zeta)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn grid() -> Arc<DiscGrid> {
        DiscGrid::new(32, 128).unwrap()
    }

    #[test]
    fn flat_sign_invariant() {
        let g = grid();
        let phi = BoundaryFunction::cutoff(g.n_theta());
        for t in [[1.0, 1.0], [1.0, 2.0]] {
            let d = flat_family(&[0.0, 0.3], &t, &phi, &g).unwrap();
            for c in 0..2 {
                let b = d.boundary(c).unwrap();
                let up = (0..g.n_theta()).filter(|k| 2 * k <= g.n_theta()).map(|k| b[k].re.abs()).fold(0.0, f64::max);
                assert!(up < 1e-12, "{up}");
                assert!(d.components[c].values.iter().all(|v| v.re < 0.0));
            }
            for (a, b) in d.components[0].values.iter().zip(&d.components[1].values) {
                assert!((b.re - t[1] * a.re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_cutoff_gives_constant_disc() {
        let g = grid();
        let zero = SchwarzSeries::new(&BoundaryFunction::from_real(vec![0.0; g.n_theta()]));
        let d = flat_disc(&[0.5, -1.0], &[1.0, 1.0], &zero, &g).unwrap();
        assert!(d.components[1].values.iter().all(|v| *v == C64::new(0.0, -1.0)));
        assert!(matches!(
            flat_family(&[0.0], &[1.0], &BoundaryFunction::from_real(vec![0.0; 16]), &g),
            Err(Error::BadCutoff(_))
        ));
    }

    #[test]
    fn flat_round_trip() {
        let fam = DiscFamily::flat(2, grid()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (c, t) = DiscFamily::params(&[rng.random_range(-1.0..1.0)], &[rng.random_range(0.5..2.0)]);
            let zeta = C64::from_polar(rng.random_range(0.0..0.9f64).sqrt(), rng.random_range(0.0..6.28));
            let w = evaluation_map(&fam, &c, &t, zeta).unwrap();
            let p = invert_evaluation(&fam, &w).unwrap();
            assert_eq!(p.roots, 1);
            assert!((p.zeta - zeta).norm() < 1e-9 && (p.c[1] - c[1]).abs() < 1e-9 && (p.t[1] - t[1]).abs() < 1e-9);
        }
        let edge = [C64::new(0.0, 0.1), C64::new(0.0, 0.2)];
        assert!(matches!(invert_evaluation(&fam, &edge), Err(Error::NotInWedge(_))));
    }

    #[test]
    fn glued_reduces_to_flat_and_matches_constant_structure() {
        let g = grid();
        let phi = BoundaryFunction::cutoff(g.n_theta());
        let zero = vec![RealPoly::zero(1)];
        let opts = FamilyOptions::default();
        let flat = flat_family(&[0.2], &[1.5], &phi, &g).unwrap();
        let glued = glued_family(&zero, &ComplexMatrixField::zero(1), &[0.2], &[1.5], &phi, &g, &opts).unwrap();
        assert_eq!(flat.sup_dist(&glued), 0.0);

        let a = 0.1;
        let d = glued_family(&zero, &ComplexMatrixField::constant(1, C64::new(a, 0.0)), &[0.2], &[1.5], &phi, &g, &opts).unwrap();
        let s = SchwarzSeries::new(&phi);
        let closed = |z: C64| {
            let h = s.eval(z) * (1.5 / (1.0 + a)) + C64::new(0.0, 0.2 / (1.0 - a));
            h + a * h.conj()
        };
        let err = g.nodes().iter().zip(&d.components[0].values).map(|(z, v)| (v - closed(*z)).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn quadratic_edge_glues() {
        let g = grid();
        let fam = DiscFamily::quadratic(2, 0.05, ComplexMatrixField::zero(2), g.clone()).unwrap();
        let (c, t) = DiscFamily::params(&[0.3], &[1.2]);
        let d = fam.disc(&c, &t).unwrap();
        assert!(fam.gluing_residual(&d) < 1e-10);
        assert!(d.info.residual < 1e-8);
        let zeta = C64::new(0.1, -0.4);
        let w = fam.eval(&c, &t, zeta).unwrap();
        let p = invert_evaluation(&fam, &w).unwrap();
        assert!((p.zeta - zeta).norm() < 1e-8 && (p.t[1] - 1.2).abs() < 1e-8, "{p:?}");
    }
}
