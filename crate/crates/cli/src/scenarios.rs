//! Single-operation subcommands.

use std::fs::File;
use std::io::BufWriter;

use holodisc_core::accal::ComplexMatrixField;
use holodisc_core::discsolve::{holomorphy_residual, solve_disc, DiscMap, HolomorphicSeed, SolveOptions};
use holodisc_core::diskops::io::{read_boundary, read_grid_function, read_points, read_vector_grid, write_grid_function, write_points, write_vector_grid};
use holodisc_core::diskops::{cauchy_green, cauchy_green_on_grid, schwarz, BoundaryFunction, DiscGrid, SchwarzSeries};
use holodisc_core::fatou::{
    chirka_lindelof_compare, edge_sample, holder_bound_check, holder_pairs, ray_family_limits, restrict_to_disc, summarize, AdmissibleCurve,
    LindelofOptions, RayFamily, RayOptions, TestFunction,
};
use holodisc_core::linalg::C64;
use holodisc_core::wedgefam::{foliation_check, DiscFamily, FamilyOptions, FoliationSamples, WedgeDomain};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Check, RunReport};

fn read_text(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn open(path: &str) -> Result<File, CliError> {
    File::open(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn create(path: &str) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.into(), source })
}

fn parsed<T>(path: &str, r: holodisc_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::InputParse { path: path.into(), source })
}

fn input<'a>(cfg: &'a RunConfig, role: &str) -> Result<&'a str, CliError> {
    cfg.inputs.get(role).map(String::as_str).ok_or_else(|| CliError::config(&format!("input.{role}"), "required"))
}

/// `zero`, `const a`, `linear c` (`A = c z₁ Id`), or a definition file.
pub fn matrix_field(cfg: &RunConfig, n: usize) -> Result<ComplexMatrixField, CliError> {
    if let Some(path) = cfg.inputs.get("A") {
        return parsed(path, ComplexMatrixField::from_text(&read_text(path)?));
    }
    let mut words = cfg.a_spec.split_whitespace();
    let kind = words.next().unwrap_or("zero");
    let value = |w: Option<&str>| -> Result<f64, CliError> {
        w.and_then(|x| x.parse().ok()).ok_or_else(|| CliError::config("A", format!("`{}` needs a number", cfg.a_spec)))
    };
    match kind {
        "zero" => Ok(ComplexMatrixField::zero(n)),
        "const" => Ok(ComplexMatrixField::constant(n, C64::new(value(words.next())?, 0.0))),
        "linear" => Ok(ComplexMatrixField::linear_scalar(n, C64::new(value(words.next())?, 0.0))),
        other => Err(CliError::config("A", format!("unknown matrix field `{other}`"))),
    }
}

pub fn test_function(cfg: &RunConfig, n: usize) -> Result<TestFunction, CliError> {
    match cfg.inputs.get("F") {
        Some(path) => parsed(path, TestFunction::from_text(&read_text(path)?)),
        None => TestFunction::catalog(&cfg.function, n).map_err(|e| CliError::config("function", e.to_string())),
    }
}

pub fn wedge(cfg: &RunConfig, n: usize) -> Result<WedgeDomain, CliError> {
    match cfg.inputs.get("wedge") {
        Some(path) => parsed(path, WedgeDomain::from_text(&read_text(path)?)),
        None => Ok(WedgeDomain::model(n)),
    }
}

fn grid(cfg: &RunConfig) -> Result<std::sync::Arc<DiscGrid>, CliError> {
    DiscGrid::new(cfg.n_r, cfg.n_theta).map_err(|e| CliError::config("grid", e.to_string()))
}

fn write_disc(path: &str, disc: &DiscMap) -> Result<(), CliError> {
    let comps: Vec<&[holodisc_core::linalg::C64]> = disc.components.iter().map(|c| c.values.as_slice()).collect();
    let bnd: Option<Vec<&[C64]>> = (0..disc.dim()).map(|c| disc.boundary(c)).collect();
    write_vector_grid(&disc.grid, &comps, bnd.as_deref(), create(path)?)?;
    Ok(())
}

pub fn cg(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let path = input(cfg, "input")?;
    let f = parsed(path, read_grid_function(open(path)?))?;
    match cfg.inputs.get("points") {
        Some(pp) => {
            let pts = parsed(pp, read_points(open(pp)?))?;
            let vals = cauchy_green(&f, &pts);
            report.results = json!({ "points": pts.len(), "sup": vals.iter().map(|v| v.norm()).fold(0.0, f64::max) });
            if let Some(out) = &cfg.out {
                write_points(&pts, &vals, create(out)?)?;
            }
        }
        None => {
            let u = cauchy_green_on_grid(&f);
            report.results = json!({ "n_r": u.grid.n_r(), "n_theta": u.grid.n_theta(), "sup": u.sup_norm() });
            if let Some(out) = &cfg.out {
                write_grid_function(&u, create(out)?)?;
            }
        }
    }
    Ok(())
}

pub fn schwarz_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let path = input(cfg, "phi")?;
    let phi: BoundaryFunction = parsed(path, read_boundary(open(path)?))?;
    match cfg.inputs.get("points") {
        Some(pp) => {
            let pts = parsed(pp, read_points(open(pp)?))?;
            let vals = schwarz(&phi, &pts)?;
            report.results = json!({ "points": pts.len(), "sup": vals.iter().map(|v| v.norm()).fold(0.0, f64::max) });
            if let Some(out) = &cfg.out {
                write_points(&pts, &vals, create(out)?)?;
            }
        }
        None => {
            let g = grid(cfg)?;
            let u = SchwarzSeries::new(&phi).on_grid(&g);
            report.results = json!({ "sup": u.sup_norm(), "im_at_origin": u.value_at_origin().im });
            if let Some(out) = &cfg.out {
                write_grid_function(&u, create(out)?)?;
            }
        }
    }
    Ok(())
}

pub fn solve_disc_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let seed = HolomorphicSeed::parse(&cfg.disc_seed).map_err(|e| CliError::config("disc_seed", e.to_string()))?;
    let a = matrix_field(cfg, seed.dim())?;
    if a.dim() != seed.dim() {
        return Err(CliError::config("A", format!("dimension {} does not match the seed ({})", a.dim(), seed.dim())));
    }
    let g = grid(cfg)?;
    let disc = solve_disc(&a, &seed, &g, &SolveOptions { tol: cfg.tol, ..SolveOptions::default() })?;
    let residual = holomorphy_residual(&disc, &a)?;
    report.results = json!({
        "iterations": disc.info.iterations,
        "residual": residual,
        "contraction": disc.info.contraction(),
        "steps": disc.info.steps,
    });
    report.checks.push(Check::at_most("holomorphy_residual", residual, cfg.tol));
    if let Some(out) = &cfg.out {
        write_disc(out, &disc)?;
    }
    Ok(())
}

fn family(cfg: &RunConfig) -> Result<DiscFamily, CliError> {
    let w = wedge(cfg, cfg.c.len())?;
    let a = matrix_field(cfg, w.n)?;
    let g = grid(cfg)?;
    let phi = BoundaryFunction::cutoff(g.n_theta());
    Ok(DiscFamily::new(w, a, phi, g, FamilyOptions { tol: cfg.tol, ..FamilyOptions::default() })?)
}

pub fn family_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let fam = family(cfg)?;
    if cfg.c.len() != fam.dim() {
        return Err(CliError::config("c", format!("expected {} entries", fam.dim())));
    }
    let disc = fam.disc(&cfg.c, &cfg.t)?;
    let gluing = fam.gluing_residual(&disc);
    report.results = json!({ "gluing_residual": gluing, "interior_residual": disc.info.residual, "iterations": disc.info.iterations });
    report.checks.push(Check::at_most("gluing_residual", gluing, cfg.tol));
    report.checks.push(Check::at_most("interior_residual", disc.info.residual, cfg.tol));
    if let Some(out) = &cfg.out {
        write_disc(out, &disc)?;
    }
    Ok(())
}

pub fn foliation_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let fam = family(cfg)?;
    let n = fam.dim();
    let t_values = cfg.t_grid.iter().map(|&t| std::iter::once(1.0).chain(std::iter::repeat_n(t, n - 1)).collect()).collect();
    let samples = FoliationSamples { t_values, seed: cfg.seed, ..FoliationSamples::default() };
    let r = foliation_check(&fam, &samples)?;
    report.checks.push(Check::at_least("coverage_rate", r.coverage_rate, 1.0));
    report.checks.push(Check::at_least("sheet_separation", r.sheet_separation, 1e-3));
    report.results = serde_json::to_value(&r).expect("serializable");
    if let Some(path) = &cfg.report {
        serde_json::to_writer_pretty(create(path)?, &r).expect("serializable");
    }
    Ok(())
}

pub fn holder_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let path = input(cfg, "disc")?;
    let (g, values, boundary) = parsed(path, read_vector_grid(open(path)?))?;
    let disc = DiscMap::from_samples(&g, values, boundary)?;
    let n = disc.dim();
    let func = test_function(cfg, n)?;
    let a = matrix_field(cfg, n)?;
    let w = wedge(cfg, n)?;
    let res = restrict_to_disc(&func, &disc, &a, &w)?;
    let r = 0.5;
    let h = holder_bound_check(&res.f, &res.fzb, cfg.p, &holder_pairs(r, 400, cfg.seed), r)?;
    report.checks.push(Check::flag("c_hat_finite", h.c_hat.is_finite()));
    report.checks.push(Check::flag("dbar_within_bound", res.within_bound));
    report.results = json!({ "holder": h, "sup_fzb": res.sup_fzb, "bound": res.bound });
    Ok(())
}

pub fn lindelof_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let p1 = input(cfg, "curve1")?;
    let p2 = input(cfg, "curve2")?;
    let g1 = parsed(p1, AdmissibleCurve::from_text(&read_text(p1)?))?;
    let g2 = parsed(p2, AdmissibleCurve::from_text(&read_text(p2)?))?;
    let n = g1.dim();
    let func = test_function(cfg, n)?;
    let a = matrix_field(cfg, n)?;
    let w = wedge(cfg, n)?;
    let r = chirka_lindelof_compare(&func, &a, &w, &g1, &g2, &LindelofOptions { p: cfg.p, ..LindelofOptions::default() })?;
    report.checks.push(Check::flag("exponent", r.pass));
    report.results = serde_json::to_value(&r).expect("serializable");
    Ok(())
}

pub fn fatou_cmd(cfg: &RunConfig, report: &mut RunReport) -> Result<(), CliError> {
    let n = cfg.c.len().max(2);
    let w = wedge(cfg, n)?;
    let n = w.n;
    let func = test_function(cfg, n)?;
    let rays = RayFamily::quasi_uniform(n, cfg.dirs, cfg.seed);
    let pts: Vec<Vec<C64>> = edge_sample(n, cfg.edge_samples, 1.0, 0.01, cfg.seed)
        .into_iter()
        .map(|p| w.edge_point(&p.iter().map(|c| c.im).collect::<Vec<_>>()))
        .collect();
    if let Some(p) = pts.first() {
        rays.validate(&w, p)?;
    }
    let verdicts = ray_family_limits(&func, &pts, &rays, &RayOptions { seed: cfg.seed, ..RayOptions::default() });
    let s = summarize(&func, &verdicts);
    if s.regular < s.points {
        report.checks.push(Check::at_least("nontangential_fraction", s.nontangential_fraction, 0.99));
        report.checks.push(Check::flag("none_on_slice", s.exceptional_none == s.exceptional));
        report.checks.push(Check::at_most("oracle_error", s.max_oracle_error, 1e-3));
    }
    report.results = serde_json::to_value(&s).expect("serializable");
    if let Some(out) = &cfg.out {
        serde_json::to_writer(create(out)?, &verdicts).expect("serializable");
    }
    Ok(())
}
