//! Closed-form and property checks against the public API.

use holodisc_core::accal::{complex_matrix_of, structure_of, ComplexMatrixField, Tolerances};
use holodisc_core::discsolve::{holomorphy_residual, solve_disc, HolomorphicSeed, SolveOptions};
use holodisc_core::diskops::{cauchy_green, cauchy_green_on_grid, dbar_spectral, BoundaryFunction, DiscGrid, GridFunction, SchwarzSeries};
use holodisc_core::linalg::{CMatrix, C64};
use holodisc_core::wedgefam::{evaluation_map, invert_evaluation, DiscFamily};
use proptest::prelude::*;

fn pow(z: C64, k: i32) -> C64 {
    z.powi(k)
}

/// `T(ζ^a ζ̄^b)` by the Cauchy–Pompeiu formula: `ζ^a ζ̄^{b+1}/(b+1)` minus
/// the Cauchy integral of its boundary values `ζ^{a−b−1}/(b+1)`.
fn cg_monomial(a: i32, b: i32, z: C64) -> C64 {
    let u = pow(z, a) * pow(z.conj(), b + 1) / (b + 1) as f64;
    let m = a - b - 1;
    if m >= 0 {
        u - pow(z, m) / (b + 1) as f64
    } else {
        u
    }
}

#[test]
fn cauchy_green_of_monomials() {
    let g = DiscGrid::new(24, 48).unwrap();
    let pts = [C64::new(0.1, 0.2), C64::new(-0.55, 0.3), C64::new(0.0, -0.8), C64::new(0.7, 0.05)];
    for a in 0..4 {
        for b in 0..4 {
            let f = GridFunction::from_fn(&g, |z| pow(z, a) * pow(z.conj(), b));
            let got = cauchy_green(&f, &pts);
            for (z, v) in pts.iter().zip(&got) {
                assert!((v - cg_monomial(a, b, *z)).norm() < 1e-10, "a={a} b={b} z={z}: {v}");
            }
            let on = cauchy_green_on_grid(&f);
            let err = g.nodes().iter().zip(&on.values).map(|(z, v)| (v - cg_monomial(a, b, *z)).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "a={a} b={b}: {err}");
        }
    }
}

#[test]
fn cauchy_green_outside_the_disc_is_holomorphic_decay() {
    let g = DiscGrid::new(24, 48).unwrap();
    let f = GridFunction::from_fn(&g, |_| C64::new(1.0, 0.0));
    let z = C64::new(2.0, 1.0);
    // Outside the disc `T1 = 1/ζ`.
    let v = cauchy_green(&f, &[z])[0];
    assert!((v - 1.0 / z).norm() < 1e-10, "{v}");
}

fn trig(a: &[f64], b: &[f64], th: f64) -> f64 {
    a.iter().enumerate().map(|(k, x)| x * (k as f64 * th).cos()).sum::<f64>() + b.iter().enumerate().map(|(k, x)| x * ((k + 1) as f64 * th).sin()).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn schwarz_of_trig_polynomials(a in prop::collection::vec(-1.0..1.0f64, 1..5), b in prop::collection::vec(-1.0..1.0f64, 0..4), r in 0.0..0.95f64, th in 0.0..6.28f64) {
        let phi = BoundaryFunction::from_fn(64, |t| C64::new(trig(&a, &b, t), 0.0));
        let s = SchwarzSeries::new(&phi);
        let z = C64::from_polar(r, th);
        let mut want = C64::new(a[0], 0.0);
        for k in 1..a.len().max(b.len() + 1) {
            let ak = a.get(k).copied().unwrap_or(0.0);
            let bk = b.get(k - 1).copied().unwrap_or(0.0);
            want += C64::new(ak, -bk) * z.powi(k as i32);
        }
        prop_assert!((s.eval(z) - want).norm() < 1e-12);
        prop_assert!(s.eval(C64::new(0.0, 0.0)).im.abs() < 1e-15);
    }

    #[test]
    fn structure_round_trip(re in prop::collection::vec(-0.3..0.3f64, 4), im in prop::collection::vec(-0.3..0.3f64, 4)) {
        let a = CMatrix::from_fn(2, 2, |i, j| C64::new(re[2 * i + j], im[2 * i + j]));
        let j = structure_of(&a).unwrap();
        let sq = &j * &j + holodisc_core::linalg::RMatrix::identity(4, 4);
        prop_assert!(sq.amax() < 1e-12);
        let back = complex_matrix_of(&j, &Tolerances::default()).unwrap();
        prop_assert!((back - a).map(|c| c.norm()).max() < 1e-12);
    }

    #[test]
    fn spectral_dbar_of_polynomials(a in 0i32..5, b in 1i32..5) {
        let g = DiscGrid::new(16, 32).unwrap();
        let u = GridFunction::from_fn(&g, |z| pow(z, a) * pow(z.conj(), b));
        let d = dbar_spectral(&u);
        let err = g.nodes().iter().zip(&d.values).map(|(z, v)| (v - b as f64 * pow(*z, a) * pow(z.conj(), b - 1)).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn flat_family_round_trip(c in -0.8..0.8f64, t in 0.5..2.0f64, r in 0.0..0.9f64, th in 0.0..6.28f64) {
        let fam = DiscFamily::flat(2, DiscGrid::new(32, 128).unwrap()).unwrap();
        let (cc, tt) = DiscFamily::params(&[c], &[t]);
        let zeta = C64::from_polar(r, th);
        let w = evaluation_map(&fam, &cc, &tt, zeta).unwrap();
        let p = invert_evaluation(&fam, &w).unwrap();
        prop_assert!((p.zeta - zeta).norm() < 1e-8);
        prop_assert!((p.c[1] - c).abs() < 1e-8 && (p.t[1] - t).abs() < 1e-8);
    }
}

#[test]
fn constant_structure_disc_is_affine() {
    let g = DiscGrid::new(16, 32).unwrap();
    for a in [0.1, -0.25, 0.4] {
        let field = ComplexMatrixField::constant(1, C64::new(a, 0.0));
        let disc = solve_disc(&field, &HolomorphicSeed::parse("zeta").unwrap(), &g, &SolveOptions::default()).unwrap();
        for z in [C64::new(0.3, -0.2), C64::new(-0.6, 0.5)] {
            assert!((disc.eval_at(z)[0] - (z + a * z.conj())).norm() < 1e-10);
        }
    }
}

#[test]
fn solver_is_repeatable() {
    let g = DiscGrid::new(32, 64).unwrap();
    let field = ComplexMatrixField::linear_scalar(1, C64::new(0.1, 0.0));
    let seed = HolomorphicSeed::parse("zeta").unwrap();
    let a = solve_disc(&field, &seed, &g, &SolveOptions::default()).unwrap();
    let b = solve_disc(&field, &seed, &g, &SolveOptions::default()).unwrap();
    assert_eq!(a, b);
    assert!(holomorphy_residual(&a, &field).unwrap() < 1e-8);
}
