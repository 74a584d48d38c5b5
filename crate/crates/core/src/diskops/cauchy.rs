//! Cauchy–Green transform `Tf(ζ) = −(1/π) ∫_𝔻 f(ω) / (ω − ζ) dA(ω)`.
//!
//! Expanding `f` in angular modes `f = Σ f_m(ρ) e^{imφ}` and the kernel in
//! geometric series gives, for `|ζ| = r < 1`,
//!
//! ```text
//! Tf(r e^{iθ}) = Σ_m g_m(r) e^{i(m−1)θ},
//! g_m(r) =  2 ∫_0^r f_m(ρ) (ρ/r)^{1−m} dρ     (m ≤ 0)
//! g_m(r) = −2 ∫_r^1 f_m(ρ) (r/ρ)^{m−1} dρ     (m ≥ 1)
//! ```
//!
//! The radial integrals run over panels between consecutive radii with a
//! local Gauss rule; the cumulative sums are carried by the (bounded)
//! factors `(r_{j−1}/r_j)^{1−m}` so nothing grows with the mode number.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::grid::{DiscGrid, GridFunction};
use super::quadrature::gauss_legendre_on;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par;

const PANEL_ORDER: usize = 12;

pub(crate) struct CauchyGreen {
    /// Panel edges `0 = e_0 < r_0 < … < r_{N−1} < e_{N+1} = 1`.
    edges: Vec<f64>,
    pts: Vec<f64>,
    wts: Vec<f64>,
    /// `ln(ρ_q / right edge)` and `ln(left edge / ρ_q)` per panel point.
    ln_fwd: Vec<f64>,
    ln_bwd: Vec<f64>,
    /// Interpolation from radial nodes to panel points.
    interp: DMatrix<f64>,
}

/// Transform data kept for off-grid evaluation: per-mode cumulative
/// integrals at every panel edge.
#[derive(Debug, Clone)]
pub struct CauchyGreenData {
    grid: Arc<DiscGrid>,
    modes: Vec<C64>,
    /// `fwd[e * n_theta + slot]` is `∫_0^{edge e} f_m (ρ/edge)^{1−m}` for m ≤ 0.
    fwd: Vec<C64>,
    /// `bwd[e * n_theta + slot]` is `∫_{edge e}^1 f_m (edge/ρ)^{m−1}` for m ≥ 1.
    bwd: Vec<C64>,
}

impl CauchyGreen {
    pub(crate) fn new(grid: &DiscGrid) -> Self {
        let n_r = grid.n_r();
        let mut edges = Vec::with_capacity(n_r + 2);
        edges.push(0.0);
        edges.extend_from_slice(grid.radii());
        edges.push(1.0);
        let panels = n_r + 1;
        let mut pts = Vec::with_capacity(panels * PANEL_ORDER);
        let mut wts = Vec::with_capacity(panels * PANEL_ORDER);
        let mut ln_fwd = Vec::with_capacity(panels * PANEL_ORDER);
        let mut ln_bwd = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let (a, b) = (edges[p], edges[p + 1]);
            let (x, w) = gauss_legendre_on(PANEL_ORDER, a, b);
            for (xq, wq) in x.into_iter().zip(w) {
                pts.push(xq);
                wts.push(wq);
                ln_fwd.push((xq / b).ln());
                ln_bwd.push((a / xq).ln());
            }
        }
        let mut interp = DMatrix::zeros(pts.len(), n_r);
        for (q, &x) in pts.iter().enumerate() {
            for (j, c) in grid.radial_row(x).into_iter().enumerate() {
                interp[(q, j)] = c;
            }
        }
        Self { edges, pts, wts, ln_fwd, ln_bwd, interp }
    }

    fn panels(&self) -> usize {
        self.edges.len() - 1
    }

    pub(crate) fn transform(&self, grid: &Arc<DiscGrid>, f: &GridFunction) -> CauchyGreenData {
        let (n_r, nt) = (grid.n_r(), grid.n_theta());
        let mut modes = f.modes();
        // keep m in [−N/2 + 2, N/2 − 1] so the shifted output has no Nyquist term
        for j in 0..n_r {
            modes[j * nt + grid.nyquist_slot()] = C64::new(0.0, 0.0);
            modes[j * nt + grid.slot_of(-(nt as i64) / 2 + 1)] = C64::new(0.0, 0.0);
        }
        let mut re = DMatrix::zeros(n_r, nt);
        let mut im = DMatrix::zeros(n_r, nt);
        for j in 0..n_r {
            for s in 0..nt {
                re[(j, s)] = modes[j * nt + s].re;
                im[(j, s)] = modes[j * nt + s].im;
            }
        }
        let pre = &self.interp * re;
        let pim = &self.interp * im;
        let n_edges = self.edges.len();
        let columns: Vec<(Vec<C64>, Vec<C64>)> = par::map_range(nt, |slot| {
            let m = grid.mode_of(slot);
            let mut fwd = vec![C64::new(0.0, 0.0); n_edges];
            let mut bwd = vec![C64::new(0.0, 0.0); n_edges];
            let value = |q: usize| C64::new(pre[(q, slot)], pim[(q, slot)]);
            if m <= 0 {
                let k = (1 - m) as f64;
                for p in 0..self.panels() {
                    let carry = if p == 0 { 0.0 } else { (self.edges[p] / self.edges[p + 1]).powf(k) };
                    let mut acc = fwd[p] * carry;
                    for q in p * PANEL_ORDER..(p + 1) * PANEL_ORDER {
                        acc += value(q) * (self.wts[q] * (k * self.ln_fwd[q]).exp());
                    }
                    fwd[p + 1] = acc;
                }
            } else {
                let k = (m - 1) as f64;
                for p in (1..self.panels()).rev() {
                    let carry = (self.edges[p] / self.edges[p + 1]).powf(k);
                    let mut acc = bwd[p + 1] * carry;
                    for q in p * PANEL_ORDER..(p + 1) * PANEL_ORDER {
                        let w = if k == 0.0 { 1.0 } else { (k * self.ln_bwd[q]).exp() };
                        acc += value(q) * (self.wts[q] * w);
                    }
                    bwd[p] = acc;
                }
            }
            (fwd, bwd)
        });
        let mut fwd = vec![C64::new(0.0, 0.0); n_edges * nt];
        let mut bwd = vec![C64::new(0.0, 0.0); n_edges * nt];
        for (slot, (f, b)) in columns.into_iter().enumerate() {
            for e in 0..n_edges {
                fwd[e * nt + slot] = f[e];
                bwd[e * nt + slot] = b[e];
            }
        }
        CauchyGreenData { grid: grid.clone(), modes, fwd, bwd }
    }
}

impl CauchyGreenData {
    /// Output modes at panel edge `e`, already shifted by `e^{−iθ}`.
    fn ring_modes(&self, e: usize) -> Vec<C64> {
        let nt = self.grid.n_theta();
        let mut out = vec![C64::new(0.0, 0.0); nt];
        for slot in 0..nt {
            let m = self.grid.mode_of(slot);
            let g = if m <= 0 { 2.0 * self.fwd[e * nt + slot] } else { -2.0 * self.bwd[e * nt + slot] };
            out[self.grid.slot_of(m - 1)] += g;
        }
        out
    }

    /// Values at the grid nodes, with the boundary trace at `r = 1`.
    pub fn on_grid(&self) -> GridFunction {
        let grid = &self.grid;
        let (n_r, nt) = (grid.n_r(), grid.n_theta());
        let rings: Vec<Vec<C64>> = par::map_range(n_r + 1, |j| {
            let mut ring = self.ring_modes(j + 1);
            grid.ring_inverse(&mut ring);
            ring
        });
        let mut values = Vec::with_capacity(n_r * nt);
        for ring in &rings[..n_r] {
            values.extend_from_slice(ring);
        }
        GridFunction { grid: grid.clone(), values, boundary: Some(rings[n_r].clone()) }
    }

    /// Transform at an arbitrary point of the plane.
    pub fn eval_at(&self, zeta: C64) -> C64 {
        let grid = &self.grid;
        let nt = grid.n_theta();
        let cg = grid.cauchy_green();
        let r = zeta.norm();
        if r >= 1.0 {
            // only the m ≤ 0 terms survive: Σ 2 J_m ζ^{m−1}
            let last = cg.edges.len() - 1;
            let inv = 1.0 / zeta;
            let mut acc = C64::new(0.0, 0.0);
            let mut pow = inv;
            for m in 0..(nt as i64 / 2) {
                acc += 2.0 * self.fwd[last * nt + grid.slot_of(-m)] * pow;
                pow *= inv;
            }
            return acc;
        }
        if r == 0.0 {
            // only m = 1 contributes at the origin
            return -2.0 * self.bwd[nt + grid.slot_of(1)] - 2.0 * self.first_panel_m1();
        }
        let p = cg.edges.partition_point(|&e| e <= r).saturating_sub(1).min(cg.panels() - 1);
        let (a, b) = (cg.edges[p], cg.edges[p + 1]);
        let (lo_x, lo_w) = gauss_legendre_on(PANEL_ORDER, a, r);
        let (hi_x, hi_w) = gauss_legendre_on(PANEL_ORDER, r, b);
        let lo_rows: Vec<Vec<f64>> = lo_x.iter().map(|&x| grid.radial_row(x)).collect();
        let hi_rows: Vec<Vec<f64>> = hi_x.iter().map(|&x| grid.radial_row(x)).collect();
        let mode_at = |row: &[f64], slot: usize| -> C64 {
            row.iter().enumerate().map(|(j, c)| self.modes[j * nt + slot] * *c).sum()
        };
        let theta = zeta.arg();
        let mut acc = C64::new(0.0, 0.0);
        for slot in 0..nt {
            let m = grid.mode_of(slot);
            let g = if m <= 0 {
                let k = (1 - m) as f64;
                let mut s = if p == 0 { C64::new(0.0, 0.0) } else { self.fwd[p * nt + slot] * (a / r).powf(k) };
                for (q, row) in lo_rows.iter().enumerate() {
                    s += mode_at(row, slot) * (lo_w[q] * (lo_x[q] / r).powf(k));
                }
                2.0 * s
            } else {
                let k = (m - 1) as f64;
                let mut s = self.bwd[(p + 1) * nt + slot] * (r / b).powf(k);
                for (q, row) in hi_rows.iter().enumerate() {
                    s += mode_at(row, slot) * (hi_w[q] * (r / hi_x[q]).powf(k));
                }
                -2.0 * s
            };
            acc += g * C64::from_polar(1.0, (m - 1) as f64 * theta);
        }
        acc
    }

    /// `∫_0^{r_0} f_1(ρ) dρ`, the part of the m = 1 integral not stored in `bwd`.
    fn first_panel_m1(&self) -> C64 {
        let grid = &self.grid;
        let nt = grid.n_theta();
        let cg = grid.cauchy_green();
        let slot = grid.slot_of(1);
        (0..PANEL_ORDER)
            .map(|q| {
                let row = grid.radial_row(cg.pts[q]);
                let v: C64 = row.iter().enumerate().map(|(j, c)| self.modes[j * nt + slot] * *c).sum();
                v * cg.wts[q]
            })
            .sum()
    }
}

/// Cauchy–Green transform of `f` on its grid (values at the nodes plus the
/// boundary trace).
pub fn cauchy_green_on_grid(f: &GridFunction) -> GridFunction {
    let grid = &f.grid;
    grid.cauchy_green().transform(grid, f).on_grid()
}

/// Cauchy–Green transform of `f` evaluated at arbitrary points of ℂ.
pub fn cauchy_green(f: &GridFunction, points: &[C64]) -> Vec<C64> {
    let grid = &f.grid;
    let data = grid.cauchy_green().transform(grid, f);
    par::map(points, |&z| data.eval_at(z))
}

/// Full transform data, for repeated off-grid evaluation.
pub fn cauchy_green_data(f: &GridFunction) -> CauchyGreenData {
    let grid = &f.grid;
    grid.cauchy_green().transform(grid, f)
}

/// Default exclusion radius of the direct quadrature: one radial cell
/// (the widest gap between consecutive radii).
pub fn default_exclusion(grid: &DiscGrid) -> f64 {
    grid.radii().windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Brute-force node sum of the Cauchy–Green integral. Accurate only away
/// from the disc; used as an independent check of the modal transform.
pub fn cauchy_green_direct(f: &GridFunction, points: &[C64], exclusion: f64) -> Result<Vec<C64>> {
    let grid = &f.grid;
    let nodes = grid.nodes();
    for &z in points {
        if let Some(node) = nodes.iter().find(|w| (**w - z).norm() < exclusion) {
            return Err(Error::SingularityTooClose { point: z.to_string(), radius: (node - z).norm() });
        }
    }
    Ok(par::map(points, |&z| {
        let terms: Vec<C64> = nodes
            .iter()
            .enumerate()
            .map(|(i, w)| f.values[i] * grid.weight(i / grid.n_theta()) / (w - z))
            .collect();
        let re: Vec<f64> = terms.iter().map(|c| c.re).collect();
        let im: Vec<f64> = terms.iter().map(|c| c.im).collect();
        -C64::new(par::pairwise_sum(&re), par::pairwise_sum(&im)) / std::f64::consts::PI
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn transform_of_one_is_conj_inside_and_reciprocal_outside() {
        let g = DiscGrid::new(32, 32).unwrap();
        let f = GridFunction::from_fn(&g, |_| C64::new(1.0, 0.0));
        let t = cauchy_green_on_grid(&f);
        for (w, v) in g.nodes().iter().zip(&t.values) {
            assert!(close(*v, w.conj(), 1e-13), "{w}: {v}");
        }
        let pts = [C64::new(0.2, 0.1), C64::new(0.0, 0.0), C64::new(1.5, -0.3), C64::new(-0.01, 2.0), C64::new(0.0, -0.999)];
        let vals = cauchy_green(&f, &pts);
        for (z, v) in pts.iter().zip(vals) {
            let want = if z.norm() < 1.0 { z.conj() } else { 1.0 / z };
            assert!(close(v, want, 1e-13), "{z}: {v} vs {want}");
        }
    }

    #[test]
    fn polynomial_sources() {
        let g = DiscGrid::new(24, 32).unwrap();
        let cases: Vec<(Box<dyn Fn(C64) -> C64>, Box<dyn Fn(C64) -> C64>)> = vec![
            (Box::new(|w: C64| w.conj()), Box::new(|z: C64| z.conj() * z.conj() / 2.0)),
            (Box::new(|w: C64| w.conj() * w.conj() + 1.0), Box::new(|z: C64| z.conj() + z.conj().powu(3) / 3.0)),
            (Box::new(|w: C64| w), Box::new(|z: C64| C64::new(z.norm_sqr() - 1.0, 0.0))),
            (Box::new(|w: C64| w * w.conj()), Box::new(|z: C64| z.conj() * z.norm_sqr() / 2.0)),
        ];
        for (src, want) in &cases {
            let f = GridFunction::from_fn(&g, src);
            let t = cauchy_green_on_grid(&f);
            for (w, v) in g.nodes().iter().zip(&t.values) {
                assert!(close(*v, want(*w), 1e-12), "{w}: {v} vs {}", want(*w));
            }
            let z = C64::new(-0.37, 0.52);
            assert!(close(cauchy_green(&f, &[z])[0], want(z), 1e-12));
        }
    }

    #[test]
    fn direct_sum_agrees_far_outside() {
        let g = DiscGrid::new(32, 64).unwrap();
        let f = GridFunction::from_fn(&g, |w| (w * 0.7).exp() + w.conj() * w);
        let pts = [C64::new(1.5, 0.0), C64::new(-1.2, 1.4), C64::new(0.0, -2.5)];
        let direct = cauchy_green_direct(&f, &pts, default_exclusion(&g)).unwrap();
        let modal = cauchy_green(&f, &pts);
        for (a, b) in direct.iter().zip(&modal) {
            assert!(close(*a, *b, 1e-12), "{a} vs {b}");
        }
        let err = cauchy_green_direct(&f, &[g.node(3, 5)], default_exclusion(&g));
        assert!(matches!(err, Err(Error::SingularityTooClose { .. })));
    }

    #[test]
    fn zero_source() {
        let g = DiscGrid::new(8, 16).unwrap();
        let f = GridFunction::zeros(&g);
        assert!(cauchy_green_on_grid(&f).values.iter().all(|v| *v == C64::new(0.0, 0.0)));
    }
}
