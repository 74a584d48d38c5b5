use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::testfn::TestFunction;
use crate::accal::{ComplexMatrixField, ScalarField};
use crate::discsolve::{horner_derivative, DiscMap};
use crate::diskops::{d_zeta_spectral, DiscGrid, GridFunction};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par;
use crate::wedgefam::WedgeDomain;

/// `f = F∘z` on a disc grid together with its chain-rule `∂̄`.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub f: GridFunction,
    /// `f_ζ̄ = (F_z̄ + F_z A) z̄_ζ̄`.
    pub fzb: GridFunction,
    pub sup_fzb: f64,
    /// Declared `∂̄_J` bound times `sup |z̄_ζ̄|`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Restrict `F` to the disc `z`.
pub fn restrict_to_disc(func: &TestFunction, z: &DiscMap, a: &ComplexMatrixField, wedge: &WedgeDomain) -> Result<Restriction> {
    let grid = z.grid.clone();
    let n = z.dim();
    let outside = (0..grid.len())
        .filter(|&i| !wedge.contains(&z.components.iter().map(|c| c.values[i]).collect::<Vec<_>>()))
        .count();
    if outside > 0 {
        return Err(Error::DiscExitsWedge { nodes: outside });
    }
    let dz = zeta_derivatives(z);
    let rows: Vec<(C64, C64, f64)> = par::map_range(grid.len(), |i| -> Result<(C64, C64, f64)> {
        let p: Vec<C64> = z.components.iter().map(|c| c.values[i]).collect();
        let r = func.dbar_residual(a, &p)?;
        let zb: Vec<C64> = dz.iter().map(|g| g.values[i].conj()).collect();
        let fzb = (0..n).map(|j| r[j] * zb[j]).sum();
        let norm = zb.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Ok((func.eval(&p), fzb, norm))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let boundary: Option<Vec<C64>> = (0..grid.n_theta())
        .map(|k| z.boundary_point(k).map(|p| func.eval(&p)).filter(|v| v.re.is_finite() && v.im.is_finite()))
        .collect();
    let mut f = GridFunction::new(grid.clone(), rows.iter().map(|r| r.0).collect())?;
    f.boundary = boundary;
    let fzb = GridFunction::new(grid, rows.iter().map(|r| r.1).collect())?;
    let sup_fzb = fzb.sup_norm();
    let bound = func.dbar_bound * rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(Restriction { f, fzb, sup_fzb, bound, within_bound: sup_fzb <= bound * (1.0 + 1e-9) + 1e-10 })
}

/// `z_ζ` at the nodes: exact for the power-series part, spectral for the
/// correction.
fn zeta_derivatives(z: &DiscMap) -> Vec<GridFunction> {
    let nodes = z.grid.nodes();
    (0..z.dim())
        .map(|c| {
            let spectral = match &z.correction {
                Some(corr) => d_zeta_spectral(&corr[c]),
                None => GridFunction::zeros(&z.grid),
            };
            let series = &z.series[c];
            if series.is_empty() {
                return spectral;
            }
            let values = nodes.iter().zip(&spectral.values).map(|(p, v)| horner_derivative(series, *p) + v).collect();
            GridFunction { grid: z.grid.clone(), values, boundary: None }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub p: f64,
    pub radius: f64,
    /// `max |f(ζ₁) − f(ζ₂)| / ((‖f‖_∞ + ‖f_ζ̄‖_p) |ζ₁ − ζ₂|^{1−2/p})`.
    pub c_hat: f64,
    pub sup_norm: f64,
    pub lp_norm: f64,
    /// Log-log slope of the binned maximum `|Δf|` against `|Δζ|`.
    pub exponent: Option<f64>,
    pub pairs: usize,
}

/// Random pairs in `r𝔻` at log-uniform separations in `[10⁻³ r, r]`.
pub fn holder_pairs(r: f64, count: usize, seed: u64) -> Vec<(C64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = r * 10f64.powf(-rng.random_range(0.0..3.0));
            let rad = (r - d) * rng.random_range(0.0..1.0f64).sqrt();
            let a = C64::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU));
            (a, a + C64::from_polar(d, rng.random_range(0.0..std::f64::consts::TAU)))
        })
        .collect()
}

pub fn holder_bound_check(f: &GridFunction, fzb: &GridFunction, p: f64, pairs: &[(C64, C64)], r: f64) -> Result<HolderReport> {
    if !(p > 2.0) {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must exceed 2")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("radius {r} must lie in (0, 1)")));
    }
    for (a, b) in pairs {
        for z in [a, b] {
            if z.norm() >= r {
                return Err(Error::PairOutsideDisc(z.to_string()));
            }
        }
    }
    let sup_norm = f.sup_norm().max(f.boundary.as_ref().map_or(0.0, |b| b.iter().map(|c| c.norm()).fold(0.0, f64::max)));
    let lp_norm = fzb.lp_norm(p);
    let pts: Vec<C64> = pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
    let vals = f.eval_many(&pts);
    let beta = 1.0 - 2.0 / p;
    let scale = sup_norm + lp_norm;
    let samples: Vec<(f64, f64)> = pairs.iter().enumerate().map(|(i, (a, b))| ((a - b).norm(), (vals[2 * i] - vals[2 * i + 1]).norm())).collect();
    let c_hat = if scale == 0.0 {
        0.0
    } else {
        samples.iter().map(|(d, df)| df / (scale * d.powf(beta))).fold(0.0, f64::max)
    };
    Ok(HolderReport { p, radius: r, c_hat, sup_norm, lp_norm, exponent: binned_slope(&samples), pairs: pairs.len() })
}

/// Slope of `log max |Δf|` against `log |Δζ|` over eight log-spaced bins.
pub fn binned_slope(samples: &[(f64, f64)]) -> Option<f64> {
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min).ln();
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max).ln();
    if !(hi > lo) {
        return None;
    }
    let bins = 8;
    let mut best = vec![0.0f64; bins];
    let mut dist = vec![0.0f64; bins];
    for &(d, df) in samples {
        let b = (((d.ln() - lo) / (hi - lo)) * bins as f64).min(bins as f64 - 1.0) as usize;
        if df > best[b] {
            best[b] = df;
            dist[b] = d;
        }
    }
    let pts: Vec<(f64, f64)> = best.iter().zip(&dist).filter(|(v, _)| **v > 0.0).map(|(v, d)| (d.ln(), v.ln())).collect();
    fit_slope(&pts)
}

/// Least-squares slope.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// The same inequality on `ρ𝔻` with pairs in `α𝔻`, `α = rρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledReport {
    pub quotient: f64,
    pub rhos: Vec<f64>,
    pub c_hat: Vec<f64>,
    /// `max Ĉ_ρ / min Ĉ_ρ`.
    pub spread: f64,
    /// `Ĉ_ρ ≤ 2 Ĉ_{ρ_max}` for every `ρ`.
    pub within: bool,
}

pub fn rescaled_holder_check(
    f: &GridFunction,
    fzb: &GridFunction,
    p: f64,
    quotient: f64,
    rhos: &[f64],
    pairs_per_radius: usize,
    seed: u64,
) -> Result<RescaledReport> {
    if !(quotient > 0.0 && quotient < 1.0) {
        return Err(Error::InvalidArgument(format!("quotient {quotient} must lie in (0, 1)")));
    }
    if rhos.iter().any(|&r| !(r > 0.0 && r <= 1.0)) || rhos.is_empty() {
        return Err(Error::InvalidArgument("radii must lie in (0, 1]".into()));
    }
    let sub = DiscGrid::new(24, 48)?;
    let beta = 1.0 - 2.0 / p;
    let mut c_hat = Vec::with_capacity(rhos.len());
    for (i, &rho) in rhos.iter().enumerate() {
        let nodes: Vec<C64> = sub.nodes().iter().map(|z| z * rho).collect();
        let g = f.eval_many(&nodes);
        let gzb = fzb.eval_many(&nodes);
        let sup = g.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let terms: Vec<f64> = gzb.iter().enumerate().map(|(k, v)| sub.weight(k / sub.n_theta()) * rho * rho * v.norm().powf(p)).collect();
        let lp = par::pairwise_sum(&terms).powf(1.0 / p);
        let alpha = quotient * rho;
        let pairs: Vec<(C64, C64)> = holder_pairs(alpha, pairs_per_radius, seed.wrapping_add(i as u64))
            .into_iter()
            .map(|(a, b)| (a * 0.999_999, b * 0.999_999))
            .collect();
        let pts: Vec<C64> = pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
        let vals = f.eval_many(&pts);
        let scale = (sup + rho * lp) / rho.powf(beta);
        let c = if scale == 0.0 {
            0.0
        } else {
            pairs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| (vals[2 * k] - vals[2 * k + 1]).norm() / (scale * (a - b).norm().powf(beta)))
                .fold(0.0, f64::max)
        };
        c_hat.push(c);
    }
    let max = c_hat.iter().copied().fold(0.0, f64::max);
    let min = c_hat.iter().copied().fold(f64::INFINITY, f64::min);
    let top = rhos.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| c_hat[i]).unwrap_or(0.0);
    Ok(RescaledReport {
        quotient,
        rhos: rhos.to_vec(),
        spread: if min > 0.0 { max / min } else { f64::INFINITY },
        within: c_hat.iter().all(|&c| c <= 2.0 * top + 1e-15),
        c_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accal::ComplexMatrixField;
    use crate::diskops::{BoundaryFunction, SchwarzSeries};
    use crate::wedgefam::flat_family;

    fn grid() -> std::sync::Arc<DiscGrid> {
        DiscGrid::new(32, 64).unwrap()
    }

    #[test]
    fn conjugate_is_lipschitz() {
        let g = grid();
        let f = GridFunction::from_fn(&g, |z| z.conj());
        let fzb = GridFunction::from_fn(&g, |_| C64::new(1.0, 0.0));
        let r = holder_bound_check(&f, &fzb, 4.0, &holder_pairs(0.5, 400, 3), 0.5).unwrap();
        assert!(r.c_hat.is_finite() && r.c_hat > 0.0);
        assert!((r.exponent.unwrap() - 1.0).abs() < 1e-6, "{r:?}");
        assert!((r.lp_norm - std::f64::consts::PI.powf(0.25)).abs() < 1e-10);
    }

    #[test]
    fn constants_have_zero_ratio() {
        let g = grid();
        let f = GridFunction::from_fn(&g, |_| C64::new(2.0, -1.0));
        let r = holder_bound_check(&f, &GridFunction::zeros(&g), 4.0, &holder_pairs(0.5, 50, 3), 0.5).unwrap();
        assert!(r.c_hat < 1e-12);
        assert!(matches!(
            holder_bound_check(&f, &GridFunction::zeros(&g), 4.0, &[(C64::new(0.6, 0.0), C64::new(0.0, 0.0))], 0.5),
            Err(Error::PairOutsideDisc(_))
        ));
    }

    #[test]
    fn chain_rule_on_flat_disc() {
        let g = grid();
        let phi = BoundaryFunction::cutoff(g.n_theta());
        let s = SchwarzSeries::new(&phi);
        let disc = flat_family(&[0.2, -0.1], &[1.0, 1.5], &phi, &g).unwrap();
        let a = ComplexMatrixField::zero(2);
        let wedge = WedgeDomain::model(2);
        let conj = TestFunction::new(2, vec![super::super::testfn::Term::Poly(crate::poly::ComplexPoly::conj_linear(2, 0, C64::new(1.0, 0.0)))], 10.0, 1.0).unwrap();
        let r = restrict_to_disc(&conj, &disc, &a, &wedge).unwrap();
        let err = g.nodes().iter().zip(&r.fzb.values).map(|(z, v)| (v - s.derivative(*z).conj()).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        let hol = TestFunction::new(2, vec![super::super::testfn::Term::Exp { k: 1, coef: C64::new(1.0, 0.0) }], 10.0, 0.0).unwrap();
        assert_eq!(restrict_to_disc(&hol, &disc, &a, &wedge).unwrap().sup_fzb, 0.0);
        let mixed = TestFunction::exp_plus_conj(2, 0.1, 2.0);
        assert!(restrict_to_disc(&mixed, &disc, &a, &wedge).unwrap().within_bound);
    }

    #[test]
    fn disc_leaving_wedge_is_rejected() {
        let g = grid();
        let d = DiscMap::from_series(&g, vec![vec![C64::new(-0.5, 0.0), C64::new(1.0, 0.0)]]);
        let f = TestFunction::exp_plus_conj(1, 0.1, 2.0);
        assert!(matches!(
            restrict_to_disc(&f, &d, &ComplexMatrixField::zero(1), &WedgeDomain::model(1)),
            Err(Error::DiscExitsWedge { .. })
        ));
    }
}
