use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Geometric approach `s_k = s₀ qᵏ` towards a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approach {
    pub s0: f64,
    pub ratio: f64,
    pub steps: usize,
    /// Angle between the approach and the inward normal.
    pub angle: f64,
    /// Stolz aperture: approaches with `|angle| ≥ aperture` are rejected.
    pub aperture: f64,
    /// Oscillation below which the tail counts as settled.
    pub threshold: f64,
}

impl Default for Approach {
    fn default() -> Self {
        Self { s0: 0.25, ratio: 0.5, steps: 12, angle: 0.0, aperture: 1.2, threshold: 1e-6 }
    }
}

impl Approach {
    pub fn distances(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.s0 * self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitVerdict {
    Limit,
    NoLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub verdict: LimitVerdict,
    pub limit: C64,
    pub error_bar: f64,
    /// `|v_{k+1} − v_k|`.
    pub differences: Vec<f64>,
    /// Geometric mean of the tail difference ratios.
    pub decay: f64,
}

/// Decay ratio above which a non-settled tail is declared divergent.
pub const NO_LIMIT_DECAY: f64 = 0.75;
const TAIL: usize = 4;

/// Richardson-style extrapolation of the values `v_k` along a geometric
/// approach.
pub fn extrapolate(values: &[C64], threshold: f64) -> LimitEstimate {
    let differences: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let m = differences.len();
    let last = *values.last().expect("at least one value");
    let tail = &differences[m.saturating_sub(TAIL)..];
    let ratios: Vec<f64> = tail.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    let decay = if ratios.is_empty() {
        f64::NEG_INFINITY
    } else {
        ratios.iter().map(|r| r.max(1e-300).ln()).sum::<f64>() / ratios.len() as f64
    }
    .exp();
    let oscillation = tail.iter().copied().fold(0.0, f64::max);
    let floor = 1e-14 * (1.0 + last.norm());
    if oscillation <= floor {
        return LimitEstimate { verdict: LimitVerdict::Limit, limit: last, error_bar: oscillation, differences, decay };
    }
    if decay < NO_LIMIT_DECAY && m >= 2 {
        let gain = decay / (1.0 - decay);
        let at = |k: usize| values[k] + (values[k] - values[k - 1]) * gain;
        let limit = at(m);
        let error_bar = (limit - at(m - 1)).norm() + floor;
        return LimitEstimate { verdict: LimitVerdict::Limit, limit, error_bar, differences, decay };
    }
    let verdict = if oscillation > threshold { LimitVerdict::NoLimit } else { LimitVerdict::Limit };
    LimitEstimate { verdict, limit: last, error_bar: oscillation, differences, decay }
}

/// Limit of `eval(s)` as `s → 0` along the geometric distances of `approach`.
pub fn limit_along(eval: &dyn Fn(f64) -> C64, approach: &Approach) -> LimitEstimate {
    let values: Vec<C64> = approach.distances().into_iter().map(eval).collect();
    extrapolate(&values, approach.threshold)
}

/// Limit of `f` at `ζ₀ ∈ b𝔻` along `ζ = ζ₀(1 − s e^{i·angle})`.
pub fn radial_limit_probe(f: &dyn Fn(C64) -> C64, zeta0: C64, approach: &Approach) -> Result<LimitEstimate> {
    if (zeta0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("{zeta0} is not on the unit circle")));
    }
    let dir = C64::from_polar(1.0, approach.angle);
    for (k, s) in approach.distances().into_iter().enumerate() {
        let z = zeta0 * (1.0 - s * dir);
        let inward = (zeta0 - z) / zeta0;
        if approach.angle.abs() >= approach.aperture || z.norm() >= 1.0 || inward.arg().abs() >= approach.aperture {
            return Err(Error::ApproachTangential { step: k });
        }
    }
    Ok(limit_along(&|s| f(zeta0 * (1.0 - s * dir)), approach))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn continuous_function_reaches_boundary_value() {
        let f = |z: C64| z.exp() + z * z;
        let z0 = C64::from_polar(1.0, 0.7);
        let e = radial_limit_probe(&f, z0, &Approach::default()).unwrap();
        assert_eq!(e.verdict, LimitVerdict::Limit);
        assert!((e.limit - f(z0)).norm() < 1e-6 && e.error_bar < 1e-4, "{e:?}");
    }

    #[test]
    fn log_oscillation_has_no_limit_at_one() {
        let f = |z: C64| (I * (1.0 - z).ln()).exp();
        let e = radial_limit_probe(&f, C64::new(1.0, 0.0), &Approach::default()).unwrap();
        assert_eq!(e.verdict, LimitVerdict::NoLimit, "{e:?}");
        let i = C64::new(0.0, 1.0);
        let e = radial_limit_probe(&f, i, &Approach::default()).unwrap();
        assert_eq!(e.verdict, LimitVerdict::Limit);
        assert!((e.limit - f(i)).norm() < 1e-6);
    }

    #[test]
    fn tangential_approach_rejected() {
        let a = Approach { angle: 1.5, ..Approach::default() };
        assert!(matches!(radial_limit_probe(&|z| z, C64::new(1.0, 0.0), &a), Err(Error::ApproachTangential { .. })));
    }
}
