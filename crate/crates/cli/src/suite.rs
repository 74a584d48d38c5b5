//! The acceptance battery with pinned configurations.

use std::collections::BTreeMap;
use std::time::Instant;

use holodisc_core::accal::ComplexMatrixField;
use holodisc_core::discsolve::{holomorphy_residual, solve_disc, HolomorphicSeed, SolveOptions};
use holodisc_core::diskops::{cauchy_green_on_grid, dbar_fd, BoundaryFunction, DiscGrid, GridFunction};
use holodisc_core::fatou::{
    chirka_lindelof_compare, edge_sample, holder_bound_check, holder_pairs, ray_family_limits, rescaled_holder_check, restrict_to_disc, scaling_montel,
    summarize, AdmissibleCurve, LindelofOptions, RayFamily, RayOptions, ScalingOptions, TestFunction,
};
use holodisc_core::linalg::C64;
use holodisc_core::wedgefam::{build_cone, evaluation_map, flat_family, invert_evaluation, DiscFamily, WedgeDomain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::{Check, RunReport, Timing};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
}

struct Metrics(BTreeMap<String, f64>);

impl Metrics {
    fn new() -> Self {
        Self(BTreeMap::new())
    }

    fn put(&mut self, k: &str, v: f64) -> f64 {
        self.0.insert(k.into(), v);
        v
    }
}

pub const NAMES: [(u32, &str, f64); 10] = [
    (1, "cauchy_green_inversion", 120.0),
    (2, "closed_form_disc", 10.0),
    (3, "variable_structure_disc", 60.0),
    (4, "flat_family", 30.0),
    (5, "glued_family", 120.0),
    (6, "holder_estimate", 120.0),
    (7, "chirka_lindelof", 60.0),
    (8, "scaling_montel", 60.0),
    (9, "fatou_statistic", 300.0),
    (10, "determinism", 600.0),
];

pub const SEED: u64 = 20240601;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn interior_error(u: &GridFunction, f: &dyn Fn(C64) -> C64, r_max: f64) -> f64 {
    u.grid.nodes().iter().zip(&u.values).filter(|(z, _)| z.norm() <= r_max).map(|(z, v)| (v - f(*z)).norm()).fold(0.0, f64::max)
}

fn cauchy_green(m: &mut Metrics) -> Result<bool, CliError> {
    let cases: [(&str, fn(C64) -> C64); 2] = [("one", |_| c(1.0)), ("conj_sq_plus_one", |w| w.conj() * w.conj() + 1.0)];
    let mut pass = true;
    for (name, f) in cases {
        let mut errs = Vec::new();
        for n in [128, 256] {
            let g = DiscGrid::new(n, n)?;
            let u = cauchy_green_on_grid(&GridFunction::from_fn(&g, f));
            errs.push(interior_error(&dbar_fd(&u)?, &f, 0.9));
        }
        let order = m.put(&format!("{name}.order"), (errs[0] / errs[1]).log2());
        m.put(&format!("{name}.error_128"), errs[0]);
        let e = m.put(&format!("{name}.error_256"), errs[1]);
        pass &= e < 1e-3 && (order - 2.0).abs() < 0.5;
    }
    Ok(pass)
}

fn closed_form_disc(m: &mut Metrics) -> Result<bool, CliError> {
    let g = DiscGrid::new(32, 64)?;
    let a = ComplexMatrixField::constant(1, c(0.3));
    let disc = solve_disc(&a, &HolomorphicSeed::parse("zeta")?, &g, &SolveOptions { tol: 1e-12, ..SolveOptions::default() })?;
    let err = m.put("sup_error", interior_error(&disc.components[0], &|z| z + 0.3 * z.conj(), 1.0));
    let it = m.put("iterations", disc.info.iterations as f64);
    let ratio = m.put("contraction", disc.info.contraction());
    Ok(err < 1e-8 && it <= 30.0 && ratio < 0.9)
}

fn variable_structure_disc(m: &mut Metrics) -> Result<bool, CliError> {
    let g = DiscGrid::new(128, 256)?;
    let a = ComplexMatrixField::linear_scalar(1, c(0.1));
    let disc = solve_disc(&a, &HolomorphicSeed::parse("zeta")?, &g, &SolveOptions { tol: 1e-10, ..SolveOptions::default() })?;
    m.put("iterations", disc.info.iterations as f64);
    let r = m.put("residual", holomorphy_residual(&disc, &a)?);
    Ok(r < 1e-6)
}

fn random_params(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    DiscFamily::params(&[rng.random_range(-0.5..0.5)], &[rng.random_range(0.5..2.0)])
}

fn flat_family_props(m: &mut Metrics) -> Result<bool, CliError> {
    let g = DiscGrid::new(32, 128)?;
    let fam = DiscFamily::flat(2, g.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut edge, mut interior) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..10 {
        let (cc, t) = random_params(&mut rng);
        let d = flat_family(&cc, &t, &fam.phi, &g)?;
        for comp in 0..2 {
            let b = d.boundary(comp).expect("flat discs carry a boundary trace");
            edge = fam.phi.upper_indices().map(|k| b[k].re.abs()).fold(edge, f64::max);
            interior = d.components[comp].values.iter().map(|v| v.re).fold(interior, f64::max);
        }
    }
    let mut round_trip = 0.0f64;
    for _ in 0..100 {
        let (cc, t) = random_params(&mut rng);
        let zeta = C64::from_polar(rng.random_range(0.0..0.81f64).sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        let p = invert_evaluation(&fam, &evaluation_map(&fam, &cc, &t, zeta)?)?;
        round_trip = round_trip.max((p.zeta - zeta).norm()).max((p.c[1] - cc[1]).abs()).max((p.t[1] - t[1]).abs());
    }
    m.put("edge_x_max", edge);
    m.put("interior_x_max", interior);
    m.put("round_trip_error", round_trip);
    Ok(edge < 1e-10 && interior < 0.0 && round_trip < 1e-8)
}

fn glued_family(m: &mut Metrics) -> Result<bool, CliError> {
    let g = DiscGrid::new(32, 128)?;
    let phi = BoundaryFunction::cutoff(g.n_theta());
    let params = [(0.0, 1.0), (0.3, 1.2), (-0.2, 0.8), (0.1, 1.6)];
    let mut pass = true;
    let mut consts = Vec::new();
    for eps in [0.01, 0.05] {
        let fam = DiscFamily::quadratic(2, eps, ComplexMatrixField::zero(2), g.clone())?;
        let (mut glue, mut interior, mut dist) = (0.0f64, 0.0f64, 0.0f64);
        for (cr, tr) in params {
            let (cc, t) = DiscFamily::params(&[cr], &[tr]);
            let d = fam.disc(&cc, &t)?;
            glue = glue.max(fam.gluing_residual(&d));
            interior = interior.max(d.info.residual);
            dist = dist.max(d.sup_dist(&flat_family(&cc, &t, &phi, &g)?));
        }
        m.put(&format!("eps_{eps}.gluing"), glue);
        m.put(&format!("eps_{eps}.interior"), interior);
        m.put(&format!("eps_{eps}.distance"), dist);
        consts.push(m.put(&format!("eps_{eps}.constant"), dist / eps));
        pass &= glue < 1e-6 && interior < 1e-8;
    }
    let spread = m.put("constant_spread", consts.iter().copied().fold(0.0, f64::max) / consts.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(pass && spread <= 2.0)
}

fn holder_estimate(m: &mut Metrics) -> Result<bool, CliError> {
    let f = TestFunction::exp_plus_conj(2, 0.1, 2.0);
    let a = ComplexMatrixField::zero(2);
    let wedge = WedgeDomain::model(2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params: Vec<(Vec<f64>, Vec<f64>)> = (0..20).map(|_| random_params(&mut rng)).collect();
    let pairs = holder_pairs(0.5, 400, SEED);
    let mut c_hat = Vec::new();
    let mut rescaled_ok = true;
    let mut rescaled_spread = 0.0f64;
    for (n_r, n_theta) in [(32, 64), (64, 128)] {
        let g = DiscGrid::new(n_r, n_theta)?;
        let phi = BoundaryFunction::cutoff(n_theta);
        let mut row = Vec::new();
        for (i, (cc, t)) in params.iter().enumerate() {
            let r = restrict_to_disc(&f, &flat_family(cc, t, &phi, &g)?, &a, &wedge)?;
            row.push(holder_bound_check(&r.f, &r.fzb, 4.0, &pairs, 0.5)?.c_hat);
            if n_r == 64 {
                let q = rescaled_holder_check(&r.f, &r.fzb, 4.0, 0.5, &[0.2, 0.5, 1.0], 200, SEED + i as u64)?;
                rescaled_ok &= q.within;
                rescaled_spread = rescaled_spread.max(q.spread);
            }
        }
        c_hat.push(row);
    }
    let finite = c_hat.iter().flatten().all(|x| x.is_finite() && *x > 0.0);
    let refine = c_hat[0].iter().zip(&c_hat[1]).map(|(a, b)| (a / b).max(b / a)).fold(0.0, f64::max);
    m.put("c_hat_max", c_hat[1].iter().copied().fold(0.0, f64::max));
    m.put("refinement_ratio", refine);
    m.put("rescaled_spread", rescaled_spread);
    m.put("rescaled_within", rescaled_ok as u8 as f64);
    Ok(finite && refine <= 2.0 && rescaled_ok)
}

fn lindelof(m: &mut Metrics) -> Result<bool, CliError> {
    let g1 = AdmissibleCurve::line(vec![c(0.0); 2], vec![c(-1.0), c(-1.0)]);
    let g2 = g1.bent(vec![C64::new(0.0, 0.5), C64::new(0.0, -0.3)]);
    let f = TestFunction::power_i_plus_conj(2, 0.1, 2.0);
    let r = chirka_lindelof_compare(&f, &ComplexMatrixField::zero(2), &WedgeDomain::model(2), &g1, &g2, &LindelofOptions::default())?;
    let e = m.put("exponent", r.exponent.unwrap_or(f64::NAN));
    m.put("required_exponent", r.required_exponent);
    m.put("empirical_constant", r.empirical_constant);
    Ok(e >= 0.4 && r.pass)
}

fn scaling(m: &mut Metrics) -> Result<bool, CliError> {
    let wedge = WedgeDomain::model(2);
    let cone = build_cone(&[c(0.0); 2], &[c(-1.0), c(-1.0)], 0.3, &wedge)?;
    let f = TestFunction::power_i_plus_conj(2, 0.1, 2.0);
    let a = ComplexMatrixField::linear_scalar(2, c(0.1));
    let r = scaling_montel(&f, &a, &wedge, &cone, &ScalingOptions::default())?;
    let slope = m.put("slope", r.slope.unwrap_or(f64::NAN));
    let cand = m.put("candidate_residual", r.candidate_residual);
    let floor = m.put("fd_floor", r.fd_floor);
    m.put("kept", r.kept.len() as f64);
    Ok((slope - 1.0).abs() <= 0.2 && r.converged && cand <= 10.0 * floor)
}

fn fatou(m: &mut Metrics) -> Result<bool, CliError> {
    let f = TestFunction::power_i(2);
    let rays = RayFamily::quasi_uniform(2, 16, SEED);
    let pts = edge_sample(2, 10_000, 1.0, 0.01, SEED);
    rays.validate(&WedgeDomain::model(2), &pts[0])?;
    let opts = RayOptions { seed: SEED, extra_rays: 10, ..RayOptions::default() };
    let v = ray_family_limits(&f, &pts, &rays, &opts);
    let s = summarize(&f, &v);
    let extra = m.put("max_extra_ray_defect", s.max_extra_ray_defect.unwrap_or(f64::INFINITY));
    let frac = m.put("nontangential_fraction", s.nontangential_fraction);
    m.put("slice_points", s.exceptional as f64);
    m.put("slice_none", s.exceptional_none as f64);
    let err = m.put("max_oracle_error", s.max_oracle_error);
    Ok(frac >= 0.99 && s.exceptional > 0 && s.exceptional_none == s.exceptional && err < 1e-3 && extra <= 3.0 * opts.agree_tol)
}

/// Run numeric criteria 1–9 (those listed in `ids`).
pub fn run_criteria(ids: &[u32]) -> Result<(Vec<Criterion>, Vec<Timing>), CliError> {
    let mut out = Vec::new();
    let mut timings = Vec::new();
    for &(id, name, limit) in NAMES.iter().filter(|(id, ..)| ids.contains(id) && *id <= 9) {
        let mut m = Metrics::new();
        let start = Instant::now();
        let pass = match id {
            1 => cauchy_green(&mut m),
            2 => closed_form_disc(&mut m),
            3 => variable_structure_disc(&mut m),
            4 => flat_family_props(&mut m),
            5 => glued_family(&mut m),
            6 => holder_estimate(&mut m),
            7 => lindelof(&mut m),
            8 => scaling(&mut m),
            _ => fatou(&mut m),
        }?;
        timings.push(Timing { step: format!("{id}.{name}"), seconds: start.elapsed().as_secs_f64(), limit: Some(limit) });
        out.push(Criterion { id, name: name.into(), pass, metrics: m.0 });
    }
    Ok((out, timings))
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config("threads", e.to_string()))?;
    Ok(pool.install(f))
}

/// Criteria 1–9 under the current worker pool; criterion 10 reruns them on
/// one worker and on `threads` workers and compares the JSON bytes.
pub fn scenario_suite(name: &str, ids: &[u32], threads: usize, report: &mut RunReport) -> Result<(), CliError> {
    if name != "acceptance" {
        return Err(CliError::config("command", format!("unknown suite `{name}`")));
    }
    let numeric: Vec<u32> = ids.iter().copied().filter(|&i| i <= 9).collect();
    let (mut criteria, mut timings) = run_criteria(&numeric)?;
    if ids.contains(&10) {
        let start = Instant::now();
        let serial = in_pool(1, || run_criteria(&numeric))??.0;
        let parallel = in_pool(threads.max(2), || run_criteria(&numeric))??.0;
        let a = serde_json::to_string(&serial).expect("serializable");
        let b = serde_json::to_string(&parallel).expect("serializable");
        let c0 = serde_json::to_string(&criteria).expect("serializable");
        let mut m = Metrics::new();
        m.put("threads", threads.max(2) as f64);
        m.put("bytes", a.len() as f64);
        let same = a == b && a == c0;
        m.put("identical", same as u8 as f64);
        timings.push(Timing { step: "10.determinism".into(), seconds: start.elapsed().as_secs_f64(), limit: Some(NAMES[9].2) });
        criteria.push(Criterion { id: 10, name: NAMES[9].1.into(), pass: same, metrics: m.0 });
    }
    report.checks = criteria.iter().map(|c| Check::flag(&format!("{}.{}", c.id, c.name), c.pass)).collect();
    report.results = serde_json::to_value(&criteria).expect("serializable");
    report.timings = timings;
    Ok(())
}
