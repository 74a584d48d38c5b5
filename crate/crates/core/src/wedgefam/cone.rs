use serde::{Deserialize, Serialize};

use super::wedge::WedgeDomain;
use crate::error::{Error, Result};
use crate::linalg::{to_real, C64};

/// Circular cone in ℝ²ⁿ (interleaved real coordinates) with vertex on the
/// edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub vertex: Vec<C64>,
    /// Unit axis in real coordinates.
    pub axis: Vec<f64>,
    pub half_angle: f64,
    /// Angle asked for; larger than `half_angle` when the cone was shrunk.
    pub requested_angle: f64,
    pub shrink_steps: usize,
    /// Radius of the sampled containment check.
    pub probe_radius: f64,
}

impl Cone {
    /// Unit axis as a complex vector.
    pub fn axis_complex(&self) -> Vec<C64> {
        self.axis.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
    }

    /// Angle between `z − vertex` and the axis.
    pub fn angle_of(&self, z: &[C64]) -> Option<f64> {
        let d: Vec<f64> = to_real(&z.iter().zip(&self.vertex).map(|(a, b)| a - b).collect::<Vec<_>>());
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let cos = d.iter().zip(&self.axis).map(|(a, b)| a * b).sum::<f64>() / norm;
        Some(cos.clamp(-1.0, 1.0).acos())
    }

    /// Point at distance `s` from the vertex along the unit real direction `d`.
    pub fn point(&self, d: &[f64], s: f64) -> Vec<C64> {
        self.vertex.iter().enumerate().map(|(k, v)| v + C64::new(s * d[2 * k], s * d[2 * k + 1])).collect()
    }

    /// Deterministic directions on the cone's mantle at angle `alpha`:
    /// `cos α · axis + sin α · u` for `u = ±e` over an orthonormal basis of
    /// the axis complement, plus normalized pairwise sums.
    pub fn mantle_directions(&self, alpha: f64) -> Vec<Vec<f64>> {
        let perp = orthonormal_complement(&self.axis);
        let mut us: Vec<Vec<f64>> = Vec::new();
        for e in &perp {
            us.push(e.clone());
            us.push(e.iter().map(|x| -x).collect());
        }
        for i in 0..perp.len() {
            for j in i + 1..perp.len() {
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let v: Vec<f64> = perp[i].iter().zip(&perp[j]).map(|(a, b)| (si * a + sj * b) / 2f64.sqrt()).collect();
                    us.push(v);
                }
            }
        }
        us.into_iter()
            .map(|u| self.axis.iter().zip(&u).map(|(a, b)| alpha.cos() * a + alpha.sin() * b).collect())
            .collect()
    }
}

/// Orthonormal basis of the complement of the unit vector `a`.
pub fn orthonormal_complement(a: &[f64]) -> Vec<Vec<f64>> {
    let d = a.len();
    let mut basis: Vec<Vec<f64>> = vec![a.to_vec()];
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for b in &basis {
            let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// `z ∈ K \ {vertex}`.
pub fn cone_membership(k: &Cone, z: &[C64]) -> bool {
    k.angle_of(z).is_some_and(|a| a <= k.half_angle)
}

pub const DEFAULT_PROBE_RADIUS: f64 = 0.2;
const SHRINK: f64 = 0.9;
const MAX_SHRINK: usize = 60;
const PROBE_STEPS: [f64; 6] = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0];

/// Cone at the edge point `p` directed by `direction`, shrunk by factors of
/// 0.9 until its sampled mantle lies in the wedge.
pub fn build_cone(p: &[C64], direction: &[C64], half_angle: f64, wedge: &WedgeDomain) -> Result<Cone> {
    build_cone_with(p, direction, half_angle, wedge, DEFAULT_PROBE_RADIUS)
}

pub fn build_cone_with(p: &[C64], direction: &[C64], half_angle: f64, wedge: &WedgeDomain, probe_radius: f64) -> Result<Cone> {
    if p.len() != wedge.n || direction.len() != wedge.n {
        return Err(Error::Dimension { expected: wedge.n, got: p.len().max(direction.len()) });
    }
    if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("half-angle {half_angle} must lie in (0, π/2)")));
    }
    let off = wedge.edge_distance(p);
    if off > 1e-12 {
        return Err(Error::DirectionNotInterior(format!("vertex is {off:.3e} away from the edge")));
    }
    let d = to_real(direction);
    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DirectionNotInterior("zero direction".into()));
    }
    let axis: Vec<f64> = d.iter().map(|x| x / norm).collect();
    for j in 0..wedge.faces() {
        let g = wedge.rho_gradient(j, p);
        let slope: f64 = g.iter().zip(&axis).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) {
            return Err(Error::DirectionNotInterior(format!("direction does not decrease face {}", j + 1)));
        }
    }
    let mut cone = Cone {
        vertex: p.to_vec(),
        axis,
        half_angle,
        requested_angle: half_angle,
        shrink_steps: 0,
        probe_radius,
    };
    if !PROBE_STEPS.iter().all(|s| wedge.contains(&cone.point(&cone.axis, s * probe_radius))) {
        return Err(Error::DirectionNotInterior("axis leaves the wedge".into()));
    }
    while !mantle_inside(&cone, wedge) {
        if cone.shrink_steps == MAX_SHRINK {
            return Err(Error::DirectionNotInterior("no admissible aperture found".into()));
        }
        cone.half_angle *= SHRINK;
        cone.shrink_steps += 1;
    }
    Ok(cone)
}

fn mantle_inside(cone: &Cone, wedge: &WedgeDomain) -> bool {
    cone.mantle_directions(cone.half_angle)
        .iter()
        .all(|d| PROBE_STEPS.iter().all(|s| wedge.contains(&cone.point(d, s * cone.probe_radius))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn planar_half_plane() {
        let w = WedgeDomain::model(1);
        let k = build_cone(&[C64::new(0.0, 0.0)], &[C64::new(-1.0, 0.0)], PI / 4.0, &w).unwrap();
        assert_eq!(k.shrink_steps, 0);
        assert!(cone_membership(&k, &[C64::new(-1.0, 0.5)]));
        assert!(!cone_membership(&k, &[C64::new(0.0, 1.0)]));
    }

    #[test]
    fn leaking_cone_is_shrunk() {
        let w = WedgeDomain::model(2);
        let dir = [C64::new(-1.0, 0.0), C64::new(-1.0, 0.0)];
        let k = build_cone(&[C64::new(0.0, 0.0); 2], &dir, 1.4, &w).unwrap();
        assert!(k.shrink_steps > 0);
        assert!(k.half_angle < PI / 4.0 && k.half_angle > 0.9 * 0.9 * PI / 4.0);
    }

    #[test]
    fn rejected_vertices_and_directions() {
        let w = WedgeDomain::model(2);
        let off = [C64::new(-0.5, 0.0), C64::new(0.0, 0.0)];
        let dir = [C64::new(-1.0, 0.0), C64::new(-1.0, 0.0)];
        assert!(matches!(build_cone(&off, &dir, 0.3, &w), Err(Error::DirectionNotInterior(_))));
        let tangent = [C64::new(0.0, 1.0), C64::new(-1.0, 0.0)];
        assert!(matches!(build_cone(&[C64::new(0.0, 0.0); 2], &tangent, 0.3, &w), Err(Error::DirectionNotInterior(_))));
    }
}
