use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::family::{invert_evaluation, DiscFamily};
use crate::error::Result;
use crate::linalg::{solve_real, RMatrix, C64};
use crate::par;

/// Sampling parameters for [`foliation_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliationSamples {
    /// Full `t` vectors, one sheet `E_t` each.
    pub t_values: Vec<Vec<f64>>,
    pub edge_points: usize,
    /// Half-width of the `y'` box for edge samples and of the `c'` box for
    /// sheet clouds.
    pub box_half: f64,
    pub coverage_points: usize,
    /// Radius of the ball around the origin sampled for coverage.
    pub coverage_radius: f64,
    pub seed: u64,
}

impl Default for FoliationSamples {
    fn default() -> Self {
        Self {
            t_values: Vec::new(),
            edge_points: 24,
            box_half: 0.3,
            coverage_points: 24,
            coverage_radius: 0.05,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliationReport {
    /// Max over edge samples of the distance to the nearest `b𝔻⁺` image.
    pub edge_covering_defect: f64,
    /// Min distance between sampled point clouds of distinct sheets.
    pub sheet_separation: f64,
    /// Fraction of sampled `W_δ` points that were inverted.
    pub coverage_rate: f64,
    pub coverage_failures: usize,
    /// Worst `|Ev(c, t, ζ) − w|` among successful inversions.
    pub coverage_residual: f64,
}

/// Edge covering, sheet disjointness and `W_δ` coverage of a family.
pub fn foliation_check(family: &DiscFamily, samples: &FoliationSamples) -> Result<FoliationReport> {
    let n = family.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(samples.seed);
    let t_values: Vec<Vec<f64>> = if samples.t_values.is_empty() { vec![vec![1.0; n]] } else { samples.t_values.clone() };

    let arc = upper_arc_profile(family);
    let (lo, hi) = arc.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (_, y)| (a.min(*y), b.max(*y)));
    let span = hi - lo;
    let edge: Vec<(Vec<f64>, Vec<f64>)> = (0..samples.edge_points)
        .map(|i| {
            let t = t_values[i % t_values.len()].clone();
            let mut y = vec![lo + span * rng.random_range(0.2..0.8)];
            y.extend((1..n).map(|_| rng.random_range(-samples.box_half..samples.box_half)));
            (t, y)
        })
        .collect();
    let covering = par::map(&edge, |(t, y)| edge_distance(family, t, y, &arc));
    let mut edge_covering_defect: f64 = 0.0;
    for d in covering {
        edge_covering_defect = edge_covering_defect.max(d?);
    }

    let clouds: Vec<Vec<Vec<C64>>> = par::map(&t_values, |t| sheet_cloud(family, t, samples.box_half))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut sheet_separation = f64::INFINITY;
    for a in 0..clouds.len() {
        for b in a + 1..clouds.len() {
            for p in &clouds[a] {
                for q in &clouds[b] {
                    let d = p.iter().zip(q).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                    sheet_separation = sheet_separation.min(d);
                }
            }
        }
    }

    let mut targets = Vec::with_capacity(samples.coverage_points);
    while targets.len() < samples.coverage_points {
        let w: Vec<C64> = (0..n)
            .map(|_| {
                C64::new(
                    -rng.random_range(0.0..samples.coverage_radius),
                    rng.random_range(-samples.coverage_radius..samples.coverage_radius),
                )
            })
            .collect();
        if family.wedge.in_shrunk(&w) {
            targets.push(w);
        }
    }
    let inverted = par::map(&targets, |w| invert_evaluation(family, w));
    let mut failures = 0;
    let mut coverage_residual: f64 = 0.0;
    for r in inverted {
        match r {
            Ok(p) => coverage_residual = coverage_residual.max(p.residual),
            Err(_) => failures += 1,
        }
    }
    Ok(FoliationReport {
        edge_covering_defect,
        sheet_separation,
        coverage_rate: 1.0 - failures as f64 / samples.coverage_points.max(1) as f64,
        coverage_failures: failures,
        coverage_residual,
    })
}

/// `(θ, Im z_1(e^{iθ}))` along the upper arc for `c = 0`, `t = 1`.
fn upper_arc_profile(family: &DiscFamily) -> Vec<(f64, f64)> {
    let m = 181;
    (0..m)
        .map(|k| {
            let th = std::f64::consts::PI * k as f64 / (m - 1) as f64;
            (th, family.series.eval(C64::from_polar(1.0, th)).im)
        })
        .collect()
}

fn boundary_image(family: &DiscFamily, c: &[f64], t: &[f64], theta: f64) -> Result<Vec<C64>> {
    family.eval(c, t, C64::from_polar(1.0, theta))
}

/// Newton on `(c', θ)` for `Im z(c, t)(e^{iθ}) = y`, then the full distance
/// to the edge point `h(y) + iy`.
fn edge_distance(family: &DiscFamily, t: &[f64], y: &[f64], arc: &[(f64, f64)]) -> Result<f64> {
    let n = family.dim();
    let target = family.wedge.edge_point(y);
    let seed = arc.iter().min_by(|a, b| (t[0] * a.1 - y[0]).abs().total_cmp(&(t[0] * b.1 - y[0]).abs())).unwrap();
    let mut u: Vec<f64> = (1..n).map(|j| y[j] - t[j] / t[0] * y[0]).collect();
    u.push(seed.0);
    let resid = |u: &[f64]| -> Result<Vec<f64>> {
        let (c, _) = DiscFamily::params(&u[..n - 1], &[]);
        let z = boundary_image(family, &c, t, u[n - 1])?;
        Ok(z.iter().zip(y).map(|(a, b)| a.im - b).collect())
    };
    let norm = |r: &[f64]| r.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut r = resid(&u)?;
    let h = 1e-7;
    for _ in 0..30 {
        if norm(&r) < 1e-13 {
            break;
        }
        let mut jac = RMatrix::zeros(n, n);
        for col in 0..n {
            let mut up = u.clone();
            let mut um = u.clone();
            up[col] += h;
            um[col] -= h;
            let (rp, rm) = (resid(&up)?, resid(&um)?);
            for row in 0..n {
                jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        let Some(delta) = solve_real(&jac, &r) else { break };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a - lambda * d).collect();
            let rt = resid(&trial)?;
            if norm(&rt) < norm(&r) {
                u = trial;
                r = rt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let (c, _) = DiscFamily::params(&u[..n - 1], &[]);
    let z = boundary_image(family, &c, t, u[n - 1])?;
    Ok(z.iter().zip(&target).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

fn sheet_cloud(family: &DiscFamily, t: &[f64], half: f64) -> Result<Vec<Vec<C64>>> {
    let n = family.dim();
    let steps: usize = 5;
    let probes: Vec<C64> = [0.2, 0.45, 0.7]
        .iter()
        .flat_map(|&r| (0..12).map(move |k| C64::from_polar(r, std::f64::consts::TAU * k as f64 / 12.0)))
        .collect();
    let mut out = Vec::new();
    let total = steps.pow((n - 1) as u32);
    for idx in 0..total {
        let mut rest = idx;
        let cr: Vec<f64> = (1..n)
            .map(|_| {
                let i = rest % steps;
                rest /= steps;
                -half + 2.0 * half * i as f64 / (steps - 1) as f64
            })
            .collect();
        let (c, _) = DiscFamily::params(&cr, &[]);
        if family.a.is_zero() {
            let s = family.holomorphic_series(&c, t)?;
            for z in &probes {
                out.push(s.iter().map(|p| crate::discsolve::horner(p, *z)).collect());
            }
        } else {
            let d = family.disc(&c, t)?;
            for z in &probes {
                out.push(d.eval_at(*z));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskops::DiscGrid;

    #[test]
    fn flat_family_foliates() {
        let s = FoliationSamples { t_values: vec![vec![1.0, 1.0], vec![1.0, 2.0]], ..Default::default() };
        let coarse = foliation_check(&DiscFamily::flat(2, DiscGrid::new(16, 128).unwrap()).unwrap(), &s).unwrap();
        let fine = foliation_check(&DiscFamily::flat(2, DiscGrid::new(16, 512).unwrap()).unwrap(), &s).unwrap();
        assert!(coarse.edge_covering_defect < 1e-5, "{coarse:?}");
        assert!(fine.edge_covering_defect < coarse.edge_covering_defect / 8.0, "{fine:?}");
        assert!(coarse.sheet_separation > 1e-2, "{coarse:?}");
        assert_eq!(coarse.coverage_rate, 1.0, "{coarse:?}");
    }

    #[test]
    fn glued_family_foliates() {
        let g = DiscGrid::new(16, 256).unwrap();
        let fam = DiscFamily::quadratic(2, 0.05, crate::accal::ComplexMatrixField::zero(2), g).unwrap();
        let s = FoliationSamples { t_values: vec![vec![1.0, 1.0], vec![1.0, 2.0]], edge_points: 8, coverage_points: 8, ..Default::default() };
        let r = foliation_check(&fam, &s).unwrap();
        assert!(r.edge_covering_defect < 1e-4, "{r:?}");
        assert!(r.sheet_separation > 1e-2, "{r:?}");
        assert_eq!(r.coverage_rate, 1.0, "{r:?}");
    }
}
