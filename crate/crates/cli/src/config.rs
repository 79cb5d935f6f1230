//! Flat `key=value` run configuration.
//!
//! Settings are resolved as defaults, then the optional config file, then
//! command-line flags. The resolved map is written back to every bundle as
//! `config.txt`, and its SHA-256 is the config hash stamped on each file.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};
use wimp_core::mc::{Dgp, Method};
use wimp_core::rank::TraceLevel;
use wimp_core::ts::{DetrendSpec, SampleConvention};
use wimp_core::vecm::IrfKind;

use crate::error::{CliError, CliResult};

/// Miscoverage for 68% bands, the usual choice in fiscal applications.
pub const GAMMA_68: f64 = 0.32;

const ANALYZE_DEFAULTS: &[(&str, &str)] = &[
    ("c1", "1"),
    ("c2", "0.5"),
    ("convention", "minimal"),
    ("detrend", "constant_and_trend"),
    ("gamma", "0.05"),
    ("h_max", "20"),
    ("input", ""),
    ("irf", "structural"),
    ("methods", "wimp"),
    ("p", "2"),
    ("replications", "399"),
    ("seed", "0"),
    ("trace_level", "0.05"),
];

const SIMULATE_DEFAULTS: &[(&str, &str)] = &[
    ("c1", "1"),
    ("c2", "0.5"),
    ("detrend", "none"),
    ("dgp", "dgp1"),
    ("gamma", "0.05"),
    ("h_max", "60"),
    ("methods", "ols,true_rank,wimp"),
    ("n_mc", "300"),
    ("p", "1"),
    ("replications", "199"),
    ("seed", "0"),
    ("t", "100"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Simulate,
}

impl Command {
    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Analyze => ANALYZE_DEFAULTS,
            Command::Simulate => SIMULATE_DEFAULTS,
        }
    }
}

/// Resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    command: Command,
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(command: Command) -> Self {
        let values = command
            .defaults()
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { command, values }
    }

    /// Applies a `key=value` file; blank lines and `#` comments are skipped.
    pub fn merge_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(CliError::Config(format!("unknown setting '{key}'"))),
        }
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) -> CliResult<()> {
        match value {
            Some(v) => self.set(key, &v.to_string()),
            None => Ok(()),
        }
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_default()
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .parse()
            .map_err(|e| CliError::Config(format!("invalid {key} '{}': {e}", self.get(key))))
    }

    /// `key=value` lines in key order.
    pub fn canonical(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{:?}\n", self.command));
        h.update(self.canonical());
        hex::encode(h.finalize())
    }

    fn gamma(&self) -> CliResult<f64> {
        let gamma = match self.get("gamma") {
            "68" | "fiscal" => GAMMA_68,
            _ => self.parse("gamma")?,
        };
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(CliError::Config(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        Ok(gamma)
    }

    fn methods(&self) -> CliResult<Vec<Method>> {
        let mut out: Vec<Method> = Vec::new();
        for name in self.get("methods").split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let m: Method = name
                .parse()
                .map_err(|e: wimp_core::Error| CliError::Config(e.to_string()))?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        Ok(out)
    }

    fn common(&self) -> CliResult<Common> {
        let replications: usize = self.parse("replications")?;
        if replications < 39 {
            return Err(CliError::Config(format!(
                "replications must be at least 39, got {replications}"
            )));
        }
        let p: usize = self.parse("p")?;
        if p == 0 {
            return Err(CliError::Config("p must be at least 1".into()));
        }
        let c1: f64 = self.parse("c1")?;
        let c2: f64 = self.parse("c2")?;
        if !(c1 > 0.0 && c2 > 0.0 && c2 < 1.0) {
            return Err(CliError::Config("weights need c1 > 0 and 0 < c2 < 1".into()));
        }
        let h_max: usize = self.parse("h_max")?;
        if h_max == 0 {
            return Err(CliError::Config("h_max must be positive".into()));
        }
        Ok(Common {
            p,
            gamma: self.gamma()?,
            replications,
            methods: self.methods()?,
            detrend: self.parse::<DetrendSpec>("detrend")?,
            c1,
            c2,
            seed: self.parse("seed")?,
            h_max,
        })
    }

    pub fn analyze(&self) -> CliResult<AnalyzeConfig> {
        let common = self.common()?;
        if common.methods.contains(&Method::TrueRank) {
            return Err(CliError::Config("true_rank is only available in simulations".into()));
        }
        if self.get("input").is_empty() {
            return Err(CliError::Config("an input file is required".into()));
        }
        let irf = match self.get("irf") {
            "structural" => IrfKind::StructuralCholesky,
            "reduced" => IrfKind::Reduced,
            other => {
                return Err(CliError::Config(format!(
                    "irf must be reduced or structural, got '{other}'"
                )))
            }
        };
        let convention = match self.get("convention") {
            "minimal" => SampleConvention::Minimal,
            "drop_one" => SampleConvention::DropOne,
            other => {
                return Err(CliError::Config(format!(
                    "convention must be minimal or drop_one, got '{other}'"
                )))
            }
        };
        let level: f64 = self.parse("trace_level")?;
        let trace_level = TraceLevel::from_level(level).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(AnalyzeConfig {
            common,
            input: self.get("input").into(),
            irf,
            convention,
            trace_level,
        })
    }

    pub fn simulate(&self) -> CliResult<SimulateConfig> {
        let common = self.common()?;
        let dgp: Dgp = self.parse("dgp")?;
        let t: usize = self.parse("t")?;
        let n_mc: usize = self.parse("n_mc")?;
        if n_mc == 0 {
            return Err(CliError::Config("n_mc must be positive".into()));
        }
        if t < 3 * common.p + 10 {
            return Err(CliError::Config(format!("T = {t} is too short for p = {}", common.p)));
        }
        Ok(SimulateConfig { common, dgp, t, n_mc })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Common {
    pub p: usize,
    pub gamma: f64,
    pub replications: usize,
    pub methods: Vec<Method>,
    pub detrend: DetrendSpec,
    pub c1: f64,
    pub c2: f64,
    pub seed: u64,
    pub h_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub common: Common,
    pub input: std::path::PathBuf,
    pub irf: IrfKind,
    pub convention: SampleConvention,
    pub trace_level: TraceLevel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub common: Common,
    pub dgp: Dgp,
    pub t: usize,
    pub n_mc: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let s = Settings::new(Command::Analyze);
        assert!(matches!(s.analyze(), Err(CliError::Config(_))));
        let mut s = s;
        s.set("input", "x.csv").unwrap();
        let cfg = s.analyze().unwrap();
        assert_eq!(cfg.common.gamma, 0.05);
        assert_eq!(cfg.common.h_max, 20);
        assert_eq!(cfg.irf, IrfKind::StructuralCholesky);
        assert_eq!(cfg.common.detrend, DetrendSpec::ConstantAndTrend);
        let sim = Settings::new(Command::Simulate).simulate().unwrap();
        assert_eq!((sim.n_mc, sim.common.replications, sim.common.h_max), (300, 199, 60));
    }

    #[test]
    fn gamma_preset_and_validation() {
        let mut s = Settings::new(Command::Simulate);
        s.set("gamma", "fiscal").unwrap();
        assert_eq!(s.simulate().unwrap().common.gamma, GAMMA_68);
        s.set("gamma", "1.5").unwrap();
        assert!(s.simulate().is_err());
        assert!(s.set("bogus", "1").is_err());
    }

    #[test]
    fn hash_tracks_values() {
        let mut a = Settings::new(Command::Simulate);
        let h0 = a.hash();
        a.set("seed", "1").unwrap();
        assert_ne!(a.hash(), h0);
        a.set("seed", "0").unwrap();
        assert_eq!(a.hash(), h0);
        assert_ne!(Settings::new(Command::Analyze).hash(), h0);
    }

    #[test]
    fn methods_are_deduplicated() {
        let mut s = Settings::new(Command::Simulate);
        s.set("methods", "wimp, ols,wimp").unwrap();
        assert_eq!(s.simulate().unwrap().common.methods, vec![Method::Wimp, Method::Ols]);
        s.set("methods", "ols,unknown").unwrap();
        assert!(s.simulate().is_err());
    }
}
