use serde::{Deserialize, Serialize};

use super::holder::fit_slope;
use super::testfn::TestFunction;
use crate::accal::{dbar_from_gradients, fd_gradient, ComplexMatrixField, FnField, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par;
use crate::wedgefam::{Cone, WedgeDomain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    /// Decreasing scale factors `ε_k`; `F_k(z) = F(p + ε_k (z − p))`.
    pub scales: Vec<f64>,
    pub fd_step: f64,
    /// First rung of the tolerance ladder `tol_m = tol0 · S / (m + 1)`, with
    /// `S` the largest sampled `|F_k|`.
    pub tol0: f64,
    /// Minimum length of an accepted subsequence.
    pub keep_min: usize,
    /// Members averaged into the limit candidate.
    pub average: usize,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        let r = (-std::f64::consts::FRAC_PI_4).exp();
        Self { scales: (0..49).map(|q| r.powi(q)).collect(), fd_step: 1e-4, tol0: 0.5, keep_min: 3, average: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub scales: Vec<f64>,
    /// Sup over the probe set of `|(F_k)_z̄ + (F_k)_z A(p + ε_k(z − p))|`.
    pub residuals: Vec<f64>,
    /// Log-log slope of `residuals` against `scales`, fitted above the floor.
    pub slope: Option<f64>,
    /// Largest difference of `F_k` across probe pairs closer than the mesh.
    pub modulus: f64,
    pub kept: Vec<usize>,
    /// False when fewer than `keep_min` members were selected.
    pub converged: bool,
    pub candidate_residual: f64,
    /// Estimated finite-difference floor for the candidate.
    pub fd_floor: f64,
    pub probes: usize,
}

/// Probe compact inside the cone: axis and mantle points at three depths.
pub fn cone_probes(cone: &Cone) -> Vec<Vec<C64>> {
    let mut out = Vec::new();
    for &depth in &[1.0, 1.5, 2.0] {
        out.push(cone.point(&cone.axis, depth));
        for frac in [0.5, 1.0] {
            for d in cone.mantle_directions(frac * cone.half_angle) {
                out.push(cone.point(&d, depth));
            }
        }
    }
    out
}

pub fn scaling_montel(func: &TestFunction, a: &ComplexMatrixField, wedge: &WedgeDomain, cone: &Cone, opts: &ScalingOptions) -> Result<ScalingReport> {
    let p = cone.vertex.clone();
    if a.norm_at(&p) > 1e-12 {
        return Err(Error::InvalidArgument("A must vanish at the cone vertex".into()));
    }
    if opts.scales.windows(2).any(|w| w[1] >= w[0]) || opts.scales.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("scales must be positive and strictly decreasing".into()));
    }
    let probes = cone_probes(cone);
    if let Some(z) = probes.iter().find(|z| !wedge.contains(z)) {
        return Err(Error::NotInWedge(format!("probe {z:?}")));
    }
    let scaled = |e: f64, z: &[C64]| -> Vec<C64> { p.iter().zip(z).map(|(c, w)| c + (w - c) * e).collect() };
    let values: Vec<Vec<C64>> = par::map(&opts.scales, |&e| probes.iter().map(|z| func.eval(&scaled(e, z))).collect());
    let h = opts.fd_step;
    let measured: Vec<(f64, f64)> = par::map(&opts.scales, |&e| -> Result<(f64, f64)> {
        let fk = FnField { n: func.n, f: |z: &[C64]| func.eval(&scaled(e, z)) };
        let mut worst: f64 = 0.0;
        let mut floor: f64 = 0.0;
        for z in &probes {
            let (fz, fzb, err) = richardson_gradient(&fk, z, h);
            let r = dbar_from_gradients(&fz, &fzb, &a.eval(&scaled(e, z)))?;
            worst = worst.max(r.residual_norm());
            floor = floor.max(err);
        }
        Ok((worst, floor))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let residuals: Vec<f64> = measured.iter().map(|m| m.0).collect();
    let sup = values.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let fd_floor = measured.iter().map(|m| m.1).fold(0.0, f64::max) + sup * 1e-15 / h;
    let fit: Vec<(f64, f64)> = opts
        .scales
        .iter()
        .zip(&residuals)
        .filter(|(_, r)| **r > 1e3 * fd_floor)
        .map(|(e, r)| (e.ln(), r.ln()))
        .collect();
    let slope = fit_slope(&fit);

    let mesh = 0.3;
    let mut modulus: f64 = 0.0;
    for vals in &values {
        for i in 0..probes.len() {
            for j in i + 1..probes.len() {
                let d = probes[i].iter().zip(&probes[j]).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                if d <= mesh {
                    modulus = modulus.max((vals[i] - vals[j]).norm());
                }
            }
        }
    }

    let kept = select_subsequence(&values, opts.tol0 * sup.max(f64::MIN_POSITIVE), opts.keep_min);
    let converged = kept.len() >= opts.keep_min;
    let chosen: Vec<f64> = kept.iter().rev().take(opts.average.max(1)).map(|&k| opts.scales[k]).collect();
    let candidate = FnField {
        n: func.n,
        f: |z: &[C64]| chosen.iter().map(|&e| func.eval(&scaled(e, z))).sum::<C64>() / chosen.len() as f64,
    };
    let candidate_residual = probes
        .iter()
        .map(|z| {
            let (_, fzb, _) = richardson_gradient(&candidate, z, h);
            fzb.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max);
    Ok(ScalingReport {
        scales: opts.scales.clone(),
        residuals,
        slope,
        modulus,
        kept,
        converged,
        candidate_residual,
        fd_floor,
        probes: probes.len(),
    })
}

/// Greedy selection: from the earliest start that works, keep `k` when its
/// sup-distance to the last kept member is below `tol0 / (m + 1)`, `m` the
/// number kept so far. Returns the longest run found if none reaches
/// `keep_min`.
fn select_subsequence(values: &[Vec<C64>], tol0: f64, keep_min: usize) -> Vec<usize> {
    let dist = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let mut best: Vec<usize> = Vec::new();
    for start in 0..values.len() {
        let mut kept = vec![start];
        for k in start + 1..values.len() {
            let tol = tol0 / (kept.len() + 1) as f64;
            if dist(&values[k], &values[*kept.last().unwrap()]) < tol {
                kept.push(k);
            }
        }
        if kept.len() >= keep_min {
            return kept;
        }
        if kept.len() > best.len() {
            best = kept;
        }
    }
    best
}

/// Central differences at `h` and `h/2` combined by Richardson; the error
/// estimate compares with the combination at `h/2` and `h/4`.
fn richardson_gradient(f: &dyn ScalarField, z: &[C64], h: f64) -> (Vec<C64>, Vec<C64>, f64) {
    let g1 = fd_gradient(f, z, h);
    let g2 = fd_gradient(f, z, h / 2.0);
    let g4 = fd_gradient(f, z, h / 4.0);
    let comb = |a: &[C64], b: &[C64]| -> Vec<C64> { a.iter().zip(b).map(|(x, y)| (y * 4.0 - x) / 3.0).collect() };
    let (fz, fzb) = (comb(&g1.0, &g2.0), comb(&g1.1, &g2.1));
    let (fz4, fzb4) = (comb(&g2.0, &g4.0), comb(&g2.1, &g4.1));
    let err = fz.iter().chain(&fzb).zip(fz4.iter().chain(&fzb4)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    (fz, fzb, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedgefam::build_cone;

    fn cone() -> Cone {
        let w = WedgeDomain::model(2);
        build_cone(&[C64::new(0.0, 0.0); 2], &[C64::new(-1.0, 0.0), C64::new(-1.0, 0.0)], 0.3, &w).unwrap()
    }

    #[test]
    fn linear_function_scales_to_zero() {
        let f = TestFunction::catalog("z1", 2).unwrap();
        let r = scaling_montel(&f, &ComplexMatrixField::zero(2), &WedgeDomain::model(2), &cone(), &ScalingOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.candidate_residual <= r.fd_floor.max(1e-12), "{r:?}");
        assert!(r.residuals.iter().all(|&x| x < 1e-9));
    }

    #[test]
    fn conjugate_perturbation_residual_is_linear() {
        let f = TestFunction::power_i_plus_conj(2, 0.1, 2.0);
        let r = scaling_montel(&f, &ComplexMatrixField::zero(2), &WedgeDomain::model(2), &cone(), &ScalingOptions::default()).unwrap();
        let slope = r.slope.unwrap();
        assert!((slope - 1.0).abs() < 0.2, "{r:?}");
        for (e, res) in r.scales.iter().zip(&r.residuals) {
            assert!(*res <= 0.1 * e * (1.0 + 1e-6) + 10.0 * r.fd_floor, "{e} {res}");
        }
        assert!(r.converged);
        assert!(r.candidate_residual <= 10.0 * r.fd_floor, "{} vs {}", r.candidate_residual, r.fd_floor);
    }
}
