use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::limits::{limit_along, Approach, LimitEstimate, LimitVerdict};
use super::testfn::TestFunction;
use crate::accal::ScalarField;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par;
use crate::wedgefam::WedgeDomain;

/// Finite set of unit directions (interleaved real coordinates) pointing
/// into the wedge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayFamily {
    pub directions: Vec<Vec<f64>>,
}

const PROBE: [f64; 4] = [1e-6, 1e-4, 1e-2, 0.1];

impl RayFamily {
    /// `count` directions in the open negative orthant of `Re ℂⁿ`. For
    /// `n = 2` these are `−(cos α, sin α)` at midpoints of `(0, π/2)`;
    /// otherwise seeded draws from the simplex.
    pub fn quasi_uniform(n: usize, count: usize, seed: u64) -> Self {
        let dirs = if n == 1 {
            vec![vec![-1.0, 0.0]]
        } else if n == 2 {
            (0..count)
                .map(|k| {
                    let a = std::f64::consts::FRAC_PI_2 * (k as f64 + 0.5) / count as f64;
                    vec![-a.cos(), 0.0, -a.sin(), 0.0]
                })
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let w: Vec<f64> = (0..n).map(|_| -(rng.random_range(0.0..1.0f64)).ln().max(1e-3)).collect();
                    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    w.iter().flat_map(|x| [-x / norm, 0.0]).collect()
                })
                .collect()
        };
        Self { directions: dirs }
    }

    /// Reject directions whose probe segment from `p` leaves the wedge.
    pub fn validate(&self, wedge: &WedgeDomain, p: &[C64]) -> Result<()> {
        for (i, d) in self.directions.iter().enumerate() {
            if d.len() != 2 * wedge.n {
                return Err(Error::Dimension { expected: 2 * wedge.n, got: d.len() });
            }
            if !PROBE.iter().all(|&s| wedge.contains(&ray_point(p, d, s))) {
                return Err(Error::DirectionNotInterior(format!("direction {i} leaves the wedge")));
            }
        }
        Ok(())
    }

    /// Directions within `aperture` of `axis`.
    pub fn within(&self, axis: &[f64], aperture: f64) -> Self {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        let directions = self
            .directions
            .iter()
            .filter(|d| {
                let c = d.iter().zip(axis).map(|(a, b)| a * b).sum::<f64>() / norm;
                c.clamp(-1.0, 1.0).acos() <= aperture + 1e-12
            })
            .cloned()
            .collect();
        Self { directions }
    }
}

pub fn ray_point(p: &[C64], d: &[f64], s: f64) -> Vec<C64> {
    p.iter().enumerate().map(|(k, v)| v + C64::new(s * d[2 * k], s * d[2 * k + 1])).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Nontangential,
    Directional,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionLimit {
    pub limit: Option<C64>,
    pub error_bar: f64,
}

/// Verdict JSON record for one edge point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub coords: Vec<C64>,
    pub verdict: Verdict,
    pub limit: Option<C64>,
    pub error_bar: f64,
    pub per_direction: Vec<DirectionLimit>,
    /// Largest deviation of the extra random in-cone rays from `limit`.
    pub extra_ray_defect: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayOptions {
    pub approach: Approach,
    /// Direction limits agreeing within this count as one limit.
    pub agree_tol: f64,
    /// Random in-cone rays used to cross-check a NONTANGENTIAL verdict.
    pub extra_rays: usize,
    pub seed: u64,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self {
            approach: Approach { s0: 1e-3, threshold: 1e-6, ..Approach::default() },
            agree_tol: 1e-5,
            extra_rays: 0,
            seed: 1,
        }
    }
}

fn estimate(func: &TestFunction, p: &[C64], d: &[f64], approach: &Approach) -> LimitEstimate {
    limit_along(&|s| func.eval(&ray_point(p, d, s)), approach)
}

/// Per-point verdicts from limits along the rays of `rays`.
pub fn ray_family_limits(func: &TestFunction, points: &[Vec<C64>], rays: &RayFamily, opts: &RayOptions) -> Vec<PointVerdict> {
    par::map_range(points.len(), |i| point_verdict(func, &points[i], rays, opts, opts.seed.wrapping_add(i as u64)))
}

fn point_verdict(func: &TestFunction, p: &[C64], rays: &RayFamily, opts: &RayOptions, seed: u64) -> PointVerdict {
    let per: Vec<LimitEstimate> = rays.directions.iter().map(|d| estimate(func, p, d, &opts.approach)).collect();
    let per_direction: Vec<DirectionLimit> = per
        .iter()
        .map(|e| DirectionLimit { limit: (e.verdict == LimitVerdict::Limit).then_some(e.limit), error_bar: e.error_bar })
        .collect();
    let all = per.iter().all(|e| e.verdict == LimitVerdict::Limit);
    if !all || per.is_empty() {
        return PointVerdict { coords: p.to_vec(), verdict: Verdict::None, limit: None, error_bar: f64::INFINITY, per_direction, extra_ray_defect: None };
    }
    let first = per[0].limit;
    let spread = per.iter().map(|e| (e.limit - first).norm()).fold(0.0, f64::max);
    let error_bar = per.iter().map(|e| e.error_bar).fold(spread, f64::max);
    if spread > opts.agree_tol {
        return PointVerdict { coords: p.to_vec(), verdict: Verdict::Directional, limit: None, error_bar, per_direction, extra_ray_defect: None };
    }
    let extra_ray_defect = (opts.extra_rays > 0).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..opts.extra_rays)
            .map(|_| {
                let w: Vec<f64> = (0..rays.directions.len()).map(|_| rng.random_range(0.0..1.0)).collect();
                let mut d = vec![0.0; rays.directions[0].len()];
                for (wk, dk) in w.iter().zip(&rays.directions) {
                    d.iter_mut().zip(dk).for_each(|(a, b)| *a += wk * b);
                }
                let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                d.iter_mut().for_each(|x| *x /= norm);
                let e = estimate(func, p, &d, &opts.approach);
                if e.verdict == LimitVerdict::Limit { (e.limit - first).norm() } else { f64::INFINITY }
            })
            .fold(0.0, f64::max)
    });
    PointVerdict { coords: p.to_vec(), verdict: Verdict::Nontangential, limit: Some(first), error_bar, per_direction, extra_ray_defect }
}

/// Uniform edge sample of the model wedge with `y ∈ [−half, half]ⁿ`;
/// a fraction `slice_fraction` of the points is placed on `z_1 = 0`.
pub fn edge_sample(n: usize, count: usize, half: f64, slice_fraction: f64, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let every = if slice_fraction > 0.0 { (1.0 / slice_fraction).round().max(1.0) as usize } else { usize::MAX };
    (0..count)
        .map(|i| {
            let mut p: Vec<C64> = (0..n).map(|_| C64::new(0.0, rng.random_range(-half..half))).collect();
            if i % every == every - 1 {
                p[0] = C64::new(0.0, 0.0);
            }
            p
        })
        .collect()
}

/// Aggregate statistics of a verdict list against an edge-limit oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatouSummary {
    pub points: usize,
    /// Points where the oracle has a limit.
    pub regular: usize,
    pub exceptional: usize,
    pub nontangential_fraction: f64,
    /// Exceptional points that received verdict NONE.
    pub exceptional_none: usize,
    pub max_oracle_error: f64,
    pub max_extra_ray_defect: Option<f64>,
    pub note: String,
}

pub fn summarize(func: &TestFunction, verdicts: &[PointVerdict]) -> FatouSummary {
    let mut regular = 0;
    let mut nt = 0;
    let mut exceptional_none = 0;
    let mut max_err: f64 = 0.0;
    let mut extra: Option<f64> = None;
    for v in verdicts {
        match func.edge_limit(&v.coords) {
            Some(_) => {
                regular += 1;
                if v.verdict == Verdict::Nontangential {
                    nt += 1;
                }
            }
            None => {
                if v.verdict == Verdict::None {
                    exceptional_none += 1;
                }
            }
        }
        if let (Verdict::Nontangential, Some(l), Some(want)) = (v.verdict, v.limit, func.edge_limit(&v.coords)) {
            max_err = max_err.max((l - want).norm());
        }
        if let Some(d) = v.extra_ray_defect {
            extra = Some(extra.map_or(d, |e: f64| e.max(d)));
        }
    }
    FatouSummary {
        points: verdicts.len(),
        regular,
        exceptional: verdicts.len() - regular,
        nontangential_fraction: if regular > 0 { nt as f64 / regular as f64 } else { 0.0 },
        exceptional_none,
        max_oracle_error: max_err,
        max_extra_ray_defect: extra,
        note: "sampled fraction only; no almost-everywhere statement is certified".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_i_verdicts() {
        let f = TestFunction::power_i(2);
        let rays = RayFamily::quasi_uniform(2, 16, 0);
        let pts = edge_sample(2, 200, 1.0, 0.05, 4);
        rays.validate(&WedgeDomain::model(2), &pts[0]).unwrap();
        let v = ray_family_limits(&f, &pts, &rays, &RayOptions { extra_rays: 3, ..RayOptions::default() });
        let s = summarize(&f, &v);
        assert_eq!(s.exceptional, 10);
        assert_eq!(s.exceptional_none, 10);
        assert!(s.nontangential_fraction >= 0.99, "{s:?}");
        assert!(s.max_oracle_error < 1e-3, "{s:?}");
        assert!(s.max_extra_ray_defect.unwrap() < 3e-5, "{s:?}");
    }

    #[test]
    fn narrowing_cone_keeps_nontangential() {
        let f = TestFunction::exp_plus_conj(2, 0.1, 2.0);
        let rays = RayFamily::quasi_uniform(2, 16, 0);
        let pts = edge_sample(2, 20, 1.0, 0.0, 5);
        let axis = [-1.0, 0.0, -1.0, 0.0];
        let wide = ray_family_limits(&f, &pts, &rays, &RayOptions::default());
        let narrow = ray_family_limits(&f, &pts, &rays.within(&axis, 0.3), &RayOptions::default());
        for (a, b) in wide.iter().zip(&narrow) {
            assert_eq!(a.verdict, Verdict::Nontangential);
            assert_eq!(b.verdict, Verdict::Nontangential);
        }
    }
}
