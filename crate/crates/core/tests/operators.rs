use holodisc_core::diskops::{cauchy_green, cauchy_green_on_grid, d_zeta_spectral, schwarz, BoundaryFunction, DiscGrid, GridFunction};
use holodisc_core::fatou::holder_pairs;
use holodisc_core::linalg::C64;

fn sample(z: C64) -> C64 {
    (z * 0.7).exp() * z.conj() + C64::new(0.0, 0.3) * z.norm_sqr()
}

#[test]
fn exterior_values_are_holomorphic() {
    let g = DiscGrid::new(24, 48).unwrap();
    let f = GridFunction::from_fn(&g, sample);
    let h = 1e-4;
    for z in [C64::new(1.6, 0.2), C64::new(-1.2, 1.5), C64::new(0.0, -2.0)] {
        let pts = [z + h, z - h, z + C64::new(0.0, h), z - C64::new(0.0, h)];
        let v = cauchy_green(&f, &pts);
        let dbar = 0.5 * ((v[0] - v[1]) / (2.0 * h) + C64::new(0.0, 1.0) * (v[2] - v[3]) / (2.0 * h));
        assert!(dbar.norm() < 1e-6, "{z}: {dbar}");
    }
}

/// `[∂T f]_{1/2} / ([f]_{1/2} + sup |f|)` on `0.8𝔻`: the `r = 1.5` Hölder
/// ratio of `T`.
fn holder_ratio(n_r: usize, n_theta: usize) -> f64 {
    let g = DiscGrid::new(n_r, n_theta).unwrap();
    let f = GridFunction::from_fn(&g, sample);
    let dt = d_zeta_spectral(&cauchy_green_on_grid(&f));
    let pairs = holder_pairs(0.8, 600, 11);
    let seminorm = |u: &GridFunction| {
        pairs
            .iter()
            .map(|(a, b)| (u.eval_at(*a) - u.eval_at(*b)).norm() / (a - b).norm().sqrt())
            .fold(0.0, f64::max)
    };
    seminorm(&dt) / (seminorm(&f) + f.sup_norm())
}

#[test]
fn holder_ratio_is_stable_under_refinement() {
    let coarse = holder_ratio(16, 32);
    let fine = holder_ratio(32, 64);
    assert!(coarse.is_finite() && fine > 0.0);
    assert!((coarse / fine).max(fine / coarse) < 1.5, "{coarse} {fine}");
}

#[test]
fn schwarz_is_linear() {
    let p1 = BoundaryFunction::from_fn(64, |t| C64::new((2.0 * t).cos() + 0.2, 0.0));
    let p2 = BoundaryFunction::from_fn(64, |t| C64::new(t.sin().powi(3), 0.0));
    let sum = BoundaryFunction::from_fn(64, |t| C64::new(3.0 * ((2.0 * t).cos() + 0.2) - 2.0 * t.sin().powi(3), 0.0));
    let pts = [C64::new(0.3, 0.1), C64::new(-0.5, -0.6)];
    let (a, b, s) = (schwarz(&p1, &pts).unwrap(), schwarz(&p2, &pts).unwrap(), schwarz(&sum, &pts).unwrap());
    for i in 0..pts.len() {
        assert!((s[i] - (3.0 * a[i] - 2.0 * b[i])).norm() < 1e-13);
    }
}
