//! Orchestration for the `holodisc` command: configuration, dispatch and
//! report emission.

pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;
pub mod suite;

pub use config::RunConfig;
pub use error::CliError;
pub use report::RunReport;

/// Worker count from `HOLODISC_THREADS`, falling back to the machine.
pub fn thread_count() -> usize {
    std::env::var("HOLODISC_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let mut report = RunReport::new(&config.command, config.to_text(), config.seed);
    let start = std::time::Instant::now();
    match config.command.as_str() {
        "cg" => scenarios::cg(config, &mut report)?,
        "schwarz" => scenarios::schwarz_cmd(config, &mut report)?,
        "solve-disc" => scenarios::solve_disc_cmd(config, &mut report)?,
        "family" => scenarios::family_cmd(config, &mut report)?,
        "foliation" => scenarios::foliation_cmd(config, &mut report)?,
        "holder" => scenarios::holder_cmd(config, &mut report)?,
        "lindelof" => scenarios::lindelof_cmd(config, &mut report)?,
        "fatou" => scenarios::fatou_cmd(config, &mut report)?,
        "acceptance" => {
            let ids: Vec<u32> = suite::NAMES.iter().map(|n| n.0).collect();
            suite::scenario_suite("acceptance", &ids, thread_count(), &mut report)?;
        }
        other => return Err(CliError::config("command", format!("unknown command `{other}`"))),
    }
    if report.timings.is_empty() {
        report.timings.push(report::Timing { step: config.command.clone(), seconds: start.elapsed().as_secs_f64(), limit: None });
    }
    Ok(report)
}
