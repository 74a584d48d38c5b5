//! Browser bindings. Every export returns a flat `Float64Array`.

use holodisc_core::accal::ComplexMatrixField;
use holodisc_core::discsolve::{solve_disc, DiscMap, HolomorphicSeed, SolveOptions};
use holodisc_core::diskops::DiscGrid;
use holodisc_core::fatou::{ray_family_limits, RayFamily, RayOptions, TestFunction, Verdict};
use holodisc_core::wedgefam::DiscFamily;
use num_complex::Complex64 as C64;
use wasm_bindgen::prelude::*;

const LEVELS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
const SPOKES: usize = 12;
const SAMPLES: usize = 96;

fn err(e: holodisc_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Images of the circles `|ζ| = r` (for `r` in `LEVELS`) and of `SPOKES`
/// radii under component `comp`, as `x, y` pairs. Each circle has
/// `SAMPLES + 1` points, each spoke `SAMPLES / 2 + 1`.
fn curves(disc: &DiscMap, comp: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut push = |z: C64| {
        let w = disc.eval_at(z)[comp];
        out.push(w.re);
        out.push(w.im);
    };
    for r in LEVELS {
        for k in 0..=SAMPLES {
            push(C64::from_polar(r * 0.999_999, std::f64::consts::TAU * k as f64 / SAMPLES as f64));
        }
    }
    for s in 0..SPOKES {
        let th = std::f64::consts::TAU * s as f64 / SPOKES as f64;
        for k in 0..=SAMPLES / 2 {
            push(C64::from_polar(0.999_999 * k as f64 / (SAMPLES / 2) as f64, th));
        }
    }
    out
}

/// Disc through the seed `ζ` for `A = a` (`linear = false`) or
/// `A = a z` (`linear = true`). Returns the image curves followed by the
/// Picard iteration count.
#[wasm_bindgen]
pub fn disc_curves(a: f64, linear: bool) -> Result<Vec<f64>, JsValue> {
    let field = if linear { ComplexMatrixField::linear_scalar(1, C64::new(a, 0.0)) } else { ComplexMatrixField::constant(1, C64::new(a, 0.0)) };
    let grid = DiscGrid::new(24, 64).map_err(err)?;
    let seed = HolomorphicSeed::parse("zeta").map_err(err)?;
    let disc = solve_disc(&field, &seed, &grid, &SolveOptions::default()).map_err(err)?;
    let mut out = curves(&disc, 0);
    out.push(disc.info.iterations as f64);
    Ok(out)
}

/// First component of the family disc `z(c, t)` with `c = (0, c2)`,
/// `t = (1, t2)` over the edge `x_j = eps |y|²`.
#[wasm_bindgen]
pub fn family_disc(eps: f64, c2: f64, t2: f64) -> Result<Vec<f64>, JsValue> {
    let grid = DiscGrid::new(16, 64).map_err(err)?;
    let fam = DiscFamily::quadratic(2, eps, ComplexMatrixField::zero(2), grid).map_err(err)?;
    let (c, t) = DiscFamily::params(&[c2], &[t2]);
    let disc = fam.disc(&c, &t).map_err(err)?;
    let mut out = curves(&disc, 0);
    out.push(fam.gluing_residual(&disc));
    Ok(out)
}

/// Ray limits of `(−z₁)^i` at the edge point `(i y1, i y2)` along `dirs`
/// directions. Returns `[verdict, re, im, oracle_re, oracle_im,
/// error_bar, per-direction re/im …]`, verdict 0 = nontangential,
/// 1 = directional, 2 = none; missing values are NaN.
#[wasm_bindgen]
pub fn fatou_probe(y1: f64, y2: f64, dirs: usize) -> Vec<f64> {
    let f = TestFunction::power_i(2);
    let p = vec![C64::new(0.0, y1), C64::new(0.0, y2)];
    let rays = RayFamily::quasi_uniform(2, dirs.clamp(1, 64), 1);
    let v = ray_family_limits(&f, &[p.clone()], &rays, &RayOptions::default()).remove(0);
    let nan = C64::new(f64::NAN, f64::NAN);
    let code = match v.verdict {
        Verdict::Nontangential => 0.0,
        Verdict::Directional => 1.0,
        Verdict::None => 2.0,
    };
    let l = v.limit.unwrap_or(nan);
    let o = f.edge_limit(&p).unwrap_or(nan);
    let mut out = vec![code, l.re, l.im, o.re, o.im, v.error_bar];
    for d in &v.per_direction {
        let z = d.limit.unwrap_or(nan);
        out.push(z.re);
        out.push(z.im);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let n = 2 * (LEVELS.len() * (SAMPLES + 1) + SPOKES * (SAMPLES / 2 + 1));
        let d = disc_curves(0.3, false).unwrap();
        assert_eq!(d.len(), n + 1);
        let first = C64::new(d[0], d[1]);
        assert!((first - C64::new(0.26, 0.0)).norm() < 1e-6, "{first}");
        assert_eq!(family_disc(0.05, 0.2, 1.2).unwrap().len(), n + 1);
        let v = fatou_probe(0.3, -0.2, 16);
        assert_eq!(v[0], 0.0);
        assert!((v[1] - v[3]).abs() < 1e-3 && (v[2] - v[4]).abs() < 1e-3);
        assert_eq!(fatou_probe(0.0, 0.4, 16)[0], 2.0);
    }
}
