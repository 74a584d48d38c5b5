//! Run configuration: plain `key = value` text, overridable by flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COMMANDS: [&str; 9] = ["cg", "schwarz", "solve-disc", "family", "foliation", "holder", "lindelof", "fatou", "acceptance"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Input files by role (`input`, `points`, `phi`, `A`, `wedge`, `F`,
    /// `disc`, `curve1`, `curve2`).
    pub inputs: BTreeMap<String, String>,
    pub n_r: usize,
    pub n_theta: usize,
    pub tol: f64,
    pub p: f64,
    pub dirs: usize,
    pub edge_samples: usize,
    pub seed: u64,
    /// Holomorphic seed of `solve-disc`, e.g. `zeta`.
    pub disc_seed: String,
    /// Matrix field, either a catalog entry (`zero`, `const 0.3`,
    /// `linear 0.1`) or a file in `inputs["A"]`.
    pub a_spec: String,
    pub c: Vec<f64>,
    pub t: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Test function catalog entry used when no `F` file is given.
    pub function: String,
    pub out: Option<String>,
    pub report: Option<String>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: "acceptance".into(),
            inputs: BTreeMap::new(),
            n_r: 32,
            n_theta: 64,
            tol: 1e-8,
            p: 4.0,
            dirs: 16,
            edge_samples: 1000,
            seed: 1,
            disc_seed: "zeta".into(),
            a_spec: "zero".into(),
            c: vec![0.0],
            t: vec![1.0],
            t_grid: vec![1.0, 1.5],
            function: "power_i".into(),
            out: None,
            report: None,
            verbosity: 0,
        }
    }
}

/// Smallest grid the finite-difference stencils accept.
pub const MIN_GRID: (usize, usize) = (4, 8);

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(field: &str, v: &str) -> Result<Vec<f64>, CliError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_num(field, x.trim())).collect()
}

fn parse_num<T: std::str::FromStr>(field: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::config(field, format!("cannot parse `{v}`")))
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "command" => self.command = v.into(),
            "grid" => {
                let (a, b) = v.split_once('x').ok_or_else(|| CliError::config("grid", "expected NRxNTHETA"))?;
                self.n_r = parse_num("grid", a)?;
                self.n_theta = parse_num("grid", b)?;
            }
            "tol" => self.tol = parse_num(key, v)?,
            "p" => self.p = parse_num(key, v)?,
            "dirs" => self.dirs = parse_num(key, v)?,
            "edge_samples" => self.edge_samples = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "disc_seed" => self.disc_seed = v.into(),
            "A" => self.a_spec = v.into(),
            "c" => self.c = parse_list(key, v)?,
            "t" => self.t = parse_list(key, v)?,
            "t_grid" => self.t_grid = parse_list(key, v)?,
            "function" => self.function = v.into(),
            "out" => self.out = Some(v.into()),
            "report" => self.report = Some(v.into()),
            "verbosity" => self.verbosity = parse_num(key, v)?,
            _ => match key.strip_prefix("input.") {
                Some(role) => {
                    self.inputs.insert(role.into(), v.into());
                }
                None => return Err(CliError::config(key, "unknown key")),
            },
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(&format!("line {}", ln + 1), "expected `key = value`"))?;
            cfg.set(k.trim(), v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Text that [`RunConfig::from_text`] reads back to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        for (role, path) in &self.inputs {
            let _ = writeln!(s, "input.{role} = {path}");
        }
        let _ = writeln!(s, "grid = {}x{}", self.n_r, self.n_theta);
        let _ = writeln!(s, "tol = {}", self.tol);
        let _ = writeln!(s, "p = {}", self.p);
        let _ = writeln!(s, "dirs = {}", self.dirs);
        let _ = writeln!(s, "edge_samples = {}", self.edge_samples);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "disc_seed = {}", self.disc_seed);
        let _ = writeln!(s, "A = {}", self.a_spec);
        let _ = writeln!(s, "c = {}", list(&self.c));
        let _ = writeln!(s, "t = {}", list(&self.t));
        let _ = writeln!(s, "t_grid = {}", list(&self.t_grid));
        let _ = writeln!(s, "function = {}", self.function);
        if let Some(o) = &self.out {
            let _ = writeln!(s, "out = {o}");
        }
        if let Some(r) = &self.report {
            let _ = writeln!(s, "report = {r}");
        }
        let _ = writeln!(s, "verbosity = {}", self.verbosity);
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !COMMANDS.contains(&self.command.as_str()) {
            return Err(CliError::config("command", format!("unknown command `{}`", self.command)));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::config("tol", "must be positive"));
        }
        if !(self.p > 2.0) {
            return Err(CliError::config("p", "must exceed 2"));
        }
        if self.n_r < MIN_GRID.0 || self.n_theta < MIN_GRID.1 {
            return Err(CliError::config("grid", format!("must be at least {}x{}", MIN_GRID.0, MIN_GRID.1)));
        }
        if self.dirs == 0 {
            return Err(CliError::config("dirs", "must be positive"));
        }
        if self.c.len() != self.t.len() {
            return Err(CliError::config("t", "c and t must have the same length"));
        }
        if self.t.iter().chain(&self.t_grid).any(|&x| !(x > 0.0)) {
            return Err(CliError::config("t", "entries must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trip() {
        let mut cfg = RunConfig { command: "family".into(), c: vec![0.0, 0.3], t: vec![1.0, 1.2], tol: 1e-9, ..RunConfig::default() };
        cfg.inputs.insert("wedge".into(), "w.txt".into());
        cfg.out = Some("disc.csv".into());
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(RunConfig::from_text(&RunConfig::default().to_text()).unwrap(), RunConfig::default());
    }

    #[test]
    fn bad_fields_are_named() {
        let e = RunConfig::from_text("tol = -1").unwrap_err();
        assert!(e.to_string().contains("tol"), "{e}");
        let e = RunConfig::from_text("grid = 2x4").unwrap_err();
        assert!(e.to_string().contains("grid"));
        let e = RunConfig::from_text("colour = red").unwrap_err();
        assert!(e.to_string().contains("colour"));
    }
}
