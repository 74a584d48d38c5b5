use super::grid::{GridFunction, MIN_ANGULAR, MIN_RADIAL};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// How `∂/∂ζ̄` and `∂/∂ζ` are discretized on a polar grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum DbarScheme {
    /// Fourier in θ, Gauss–Legendre collocation in r.
    #[default]
    Spectral,
    /// Second-order differences.
    FiniteDifference,
}

pub fn dbar(u: &GridFunction, scheme: DbarScheme) -> Result<GridFunction> {
    match scheme {
        DbarScheme::Spectral => Ok(dbar_spectral(u)),
        DbarScheme::FiniteDifference => dbar_fd(u),
    }
}

pub fn d_zeta(u: &GridFunction, scheme: DbarScheme) -> Result<GridFunction> {
    match scheme {
        DbarScheme::Spectral => Ok(d_zeta_spectral(u)),
        DbarScheme::FiniteDifference => d_zeta_fd(u),
    }
}

/// `u_ζ̄` by spectral differentiation:
/// `∂̄(M(r) e^{imθ}) = ½ (M' − mM/r) e^{i(m+1)θ}`.
pub fn dbar_spectral(u: &GridFunction) -> GridFunction {
    spectral(u, 1)
}

/// `u_ζ` by spectral differentiation:
/// `∂(M(r) e^{imθ}) = ½ (M' + mM/r) e^{i(m−1)θ}`.
pub fn d_zeta_spectral(u: &GridFunction) -> GridFunction {
    spectral(u, -1)
}

fn spectral(u: &GridFunction, shift: i64) -> GridFunction {
    let grid = &u.grid;
    let (n_r, nt) = (grid.n_r(), grid.n_theta());
    let mut modes = u.modes();
    for j in 0..n_r {
        modes[j * nt + grid.nyquist_slot()] = C64::new(0.0, 0.0);
    }
    let d = grid.radial_diff();
    let radii = grid.radii();
    let mut out = vec![C64::new(0.0, 0.0); grid.len()];
    for slot in 0..nt {
        let m = grid.mode_of(slot) as f64;
        let target = grid.slot_of(grid.mode_of(slot) + shift);
        for j in 0..n_r {
            let mut dm = C64::new(0.0, 0.0);
            for l in 0..n_r {
                dm += modes[l * nt + slot] * d[j * n_r + l];
            }
            let mr = modes[j * nt + slot] * (m / radii[j]);
            out[j * nt + target] += 0.5 * (dm - shift as f64 * mr);
        }
    }
    for ring in out.chunks_exact_mut(nt) {
        grid.ring_inverse(ring);
    }
    GridFunction { grid: grid.clone(), values: out, boundary: None }
}

/// `u_ζ̄` by second-order finite differences: central in θ, three-point
/// nonuniform in r. The innermost ring uses the mirror node `(−r_0, θ)` =
/// `(r_0, θ + π)`; the outermost ring uses the boundary trace when present
/// and a one-sided stencil otherwise.
pub fn dbar_fd(u: &GridFunction) -> Result<GridFunction> {
    fd(u, 1.0)
}

pub fn d_zeta_fd(u: &GridFunction) -> Result<GridFunction> {
    fd(u, -1.0)
}

fn fd(u: &GridFunction, sign: f64) -> Result<GridFunction> {
    let grid = &u.grid;
    let (n_r, nt) = (grid.n_r(), grid.n_theta());
    if n_r < MIN_RADIAL || nt < MIN_ANGULAR {
        return Err(Error::GridTooCoarse(format!("finite differences need at least {MIN_RADIAL}x{MIN_ANGULAR}")));
    }
    let r = grid.radii();
    let dtheta = 2.0 * std::f64::consts::PI / nt as f64;
    let half = nt / 2;
    let mut out = vec![C64::new(0.0, 0.0); grid.len()];
    for j in 0..n_r {
        for k in 0..nt {
            let ur = if j == 0 {
                three_point_mid(-r[0], r[0], r[1], u.at(0, (k + half) % nt), u.at(0, k), u.at(1, k))
            } else if j + 1 < n_r {
                three_point_mid(r[j - 1], r[j], r[j + 1], u.at(j - 1, k), u.at(j, k), u.at(j + 1, k))
            } else if let Some(b) = &u.boundary {
                three_point_mid(r[j - 1], r[j], 1.0, u.at(j - 1, k), u.at(j, k), b[k])
            } else {
                three_point_end(r[j - 2], r[j - 1], r[j], u.at(j - 2, k), u.at(j - 1, k), u.at(j, k))
            };
            let ut = (u.at(j, (k + 1) % nt) - u.at(j, (k + nt - 1) % nt)) / (2.0 * dtheta);
            let e = C64::from_polar(1.0, sign * grid.theta(k));
            out[grid.index(j, k)] = 0.5 * e * (ur + sign * C64::new(0.0, 1.0) * ut / r[j]);
        }
    }
    Ok(GridFunction { grid: grid.clone(), values: out, boundary: None })
}

fn three_point_mid(x0: f64, x1: f64, x2: f64, u0: C64, u1: C64, u2: C64) -> C64 {
    let (h0, h1) = (x1 - x0, x2 - x1);
    u0 * (-h1 / (h0 * (h0 + h1))) + u1 * ((h1 - h0) / (h0 * h1)) + u2 * (h0 / (h1 * (h0 + h1)))
}

fn three_point_end(x0: f64, x1: f64, x2: f64, u0: C64, u1: C64, u2: C64) -> C64 {
    let (h0, h1) = (x1 - x0, x2 - x1);
    u0 * (h1 / (h0 * (h0 + h1))) - u1 * ((h0 + h1) / (h0 * h1)) + u2 * ((h0 + 2.0 * h1) / (h1 * (h0 + h1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskops::grid::DiscGrid;

    fn max_err(a: &GridFunction, f: impl Fn(C64) -> C64) -> f64 {
        a.grid.nodes().iter().zip(&a.values).map(|(z, v)| (v - f(*z)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn spectral_derivatives_of_polynomials() {
        let g = DiscGrid::new(16, 32).unwrap();
        let u = GridFunction::from_fn(&g, |z| z * z.norm_sqr() + 3.0 * z.conj().powu(2));
        let ub = dbar_spectral(&u);
        assert!(max_err(&ub, |z| z * z + 6.0 * z.conj()) < 1e-11);
        let uz = d_zeta_spectral(&u);
        assert!(max_err(&uz, |z| C64::new(2.0 * z.norm_sqr(), 0.0)) < 1e-11);
    }

    #[test]
    fn fd_examples() {
        let g = DiscGrid::new(64, 128).unwrap();
        let hol = GridFunction::from_fn(&g, |z| z);
        assert!(dbar_fd(&hol).unwrap().sup_norm() < 1e-3);
        let anti = GridFunction::from_fn(&g, |z| z.conj());
        assert!(max_err(&dbar_fd(&anti).unwrap(), |_| C64::new(1.0, 0.0)) < 1e-3);
        let sq = GridFunction::from_fn(&g, |z| C64::new(z.norm_sqr(), 0.0));
        assert!(max_err(&dbar_fd(&sq).unwrap(), |z| z) < 1e-3);
    }

    #[test]
    fn fd_is_second_order() {
        let f = |z: C64| (z.conj() * 1.3).exp() + z * z.conj();
        let fb = |z: C64| 1.3 * (z.conj() * 1.3).exp() + z;
        let mut errs = vec![];
        for n in [32, 64, 128] {
            let g = DiscGrid::new(n, n).unwrap();
            let u = GridFunction::from_fn(&g, f);
            errs.push(max_err(&dbar_fd(&u).unwrap(), fb));
        }
        for w in errs.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!((slope - 2.0).abs() < 0.3, "{errs:?}");
        }
    }
}
