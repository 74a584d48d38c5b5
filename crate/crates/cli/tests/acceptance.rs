//! Runs the acceptance battery and prints one line per criterion.

use holodisc::report::RunReport;
use holodisc::suite::{scenario_suite, Criterion, NAMES};

fn threads() -> usize {
    std::thread::available_parallelism().map_or(2, |n| n.get()).max(2)
}

fn main() {
    let ids: Vec<u32> = NAMES.iter().map(|n| n.0).collect();
    let mut report = RunReport::new("acceptance", String::new(), holodisc::suite::SEED);
    scenario_suite("acceptance", &ids, threads(), &mut report).expect("suite runs");
    let criteria: Vec<Criterion> = serde_json::from_value(report.results.clone()).unwrap();
    let mut failed = Vec::new();
    for (c, t) in criteria.iter().zip(&report.timings) {
        let limit = t.limit.unwrap_or(f64::INFINITY);
        let ok = c.pass && t.seconds <= limit;
        let metrics: Vec<String> = c.metrics.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
        println!(
            "criterion {:>2} {:<24} {} ({:.1}s of {:.0}s) {}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            t.seconds,
            limit,
            metrics.join(" ")
        );
        if !ok {
            failed.push(c.id);
        }
    }
    if criteria.len() != 10 || !failed.is_empty() {
        eprintln!("failing criteria: {failed:?} of {}", criteria.len());
        std::process::exit(1);
    }
}
