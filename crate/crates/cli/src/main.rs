use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use holodisc::{run, thread_count, CliError, RunConfig};

/// Pseudoholomorphic discs and boundary limits on wedges.
#[derive(Parser, Debug)]
#[command(name = "holodisc", version)]
struct Args {
    /// cg, schwarz, solve-disc, family, foliation, holder, lindelof, fatou or acceptance.
    command: String,
    /// Key-value config file; flags override it.
    #[arg(long)]
    config: Option<String>,
    /// Extra `key=value` settings.
    #[arg(long = "set")]
    set: Vec<String>,
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    /// Matrix field: `zero`, `const a`, `linear c` or a definition file.
    #[arg(long = "A")]
    a: Option<String>,
    /// Holomorphic seed for solve-disc, e.g. `zeta`.
    #[arg(long)]
    seed: Option<String>,
    /// Random seed for sampling.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// `NRxNTHETA`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    wedge: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    t_grid: Option<String>,
    #[arg(long)]
    disc: Option<String>,
    /// Test function file or catalog name.
    #[arg(long = "F")]
    f: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    curve1: Option<String>,
    #[arg(long)]
    curve2: Option<String>,
    #[arg(long)]
    edge_samples: Option<usize>,
    #[arg(long)]
    dirs: Option<usize>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    report: Option<String>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn build_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            RunConfig::from_text(&text)?
        }
        None => RunConfig::default(),
    };
    cfg.command = args.command.clone();
    for (role, v) in [
        ("input", &args.input),
        ("points", &args.points),
        ("phi", &args.phi),
        ("wedge", &args.wedge),
        ("disc", &args.disc),
        ("curve1", &args.curve1),
        ("curve2", &args.curve2),
    ] {
        if let Some(v) = v {
            cfg.inputs.insert(role.into(), v.clone());
        }
    }
    if let Some(a) = &args.a {
        if Path::new(a).is_file() {
            cfg.inputs.insert("A".into(), a.clone());
        } else {
            cfg.a_spec = a.clone();
        }
    }
    if let Some(f) = &args.f {
        if Path::new(f).is_file() {
            cfg.inputs.insert("F".into(), f.clone());
        } else {
            cfg.function = f.clone();
        }
    }
    let pairs = [
        ("disc_seed", args.seed.clone()),
        ("seed", args.rng_seed.map(|s| s.to_string())),
        ("grid", args.grid.clone()),
        ("tol", args.tol.map(|x| x.to_string())),
        ("c", args.c.clone()),
        ("t", args.t.clone()),
        ("t_grid", args.t_grid.clone()),
        ("p", args.p.map(|x| x.to_string())),
        ("edge_samples", args.edge_samples.map(|x| x.to_string())),
        ("dirs", args.dirs.map(|x| x.to_string())),
        ("out", args.out.clone()),
        ("report", args.report.clone()),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    for kv in &args.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::config(kv, "expected key=value"))?;
        cfg.set(k.trim(), v)?;
    }
    if args.verbose > 0 {
        cfg.verbosity = args.verbose;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let threads = thread_count();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("holodisc: {e}");
    }
    let outcome = build_config(&args).and_then(|cfg| run(&cfg).map(|r| (cfg, r)));
    match outcome {
        Ok((cfg, report)) => {
            if cfg.verbosity > 0 {
                for t in &report.timings {
                    eprintln!("{}: {:.3}s", t.step, t.seconds);
                }
            }
            println!("{}", report.to_json());
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("holodisc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
