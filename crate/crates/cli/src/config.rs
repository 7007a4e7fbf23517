use crate::CliError;
use clap::Args;
use porism_core::verify::Suite;
use porism_core::{PorismConfig, Profile, ToleranceSet};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const PROFILE_VAR: &str = "PORISM_TOLERANCE_PROFILE";

/// Configuration used when no file and no config flags are given.
pub const REFERENCE: (usize, f64, f64, f64) = (3, 1.0, 0.1, 1.0);

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON file with keys n, r, x0, lambda and optional tolerances.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    r: Option<f64>,
    x0: Option<f64>,
    lambda: Option<f64>,
    tolerances: Option<ToleranceSet>,
}

pub fn profile_tolerances() -> Result<ToleranceSet, CliError> {
    match std::env::var(PROFILE_VAR) {
        Err(_) => Ok(ToleranceSet::default()),
        Ok(v) => Profile::parse(&v)
            .map(ToleranceSet::for_profile)
            .ok_or_else(|| CliError::Config(format!("{PROFILE_VAR} must be strict or default, got {v:?}"))),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

impl ConfigArgs {
    fn any_flag(&self) -> bool {
        self.n.is_some() || self.r.is_some() || self.x0.is_some() || self.lambda.is_some()
    }

    /// Flags override the file. With neither, the reference configuration.
    pub fn resolve(&self) -> Result<(PorismConfig, ToleranceSet), CliError> {
        let file = match &self.config {
            Some(p) => serde_json::from_str::<FileConfig>(&read(p)?)
                .map_err(|e| CliError::Config(format!("malformed config {}: {e}", p.display())))?,
            None => FileConfig::default(),
        };
        let tol = match file.tolerances {
            Some(t) => t,
            None => profile_tolerances()?,
        };
        if self.config.is_none() && !self.any_flag() {
            let (n, r, x0, l) = REFERENCE;
            return Ok((PorismConfig::new(n, r, x0, l).map_err(|e| CliError::Config(e.to_string()))?, tol));
        }
        let missing = |name: &str| {
            CliError::Config(format!("missing {name}: pass --{name} or set \"{name}\" in the config file"))
        };
        let n = self.n.or(file.n).ok_or_else(|| missing("n"))?;
        let r = self.r.or(file.r).ok_or_else(|| missing("r"))?;
        let x0 = self.x0.or(file.x0).ok_or_else(|| missing("x0"))?;
        let lambda = self.lambda.or(file.lambda).ok_or_else(|| missing("lambda"))?;
        let cfg = PorismConfig::new(n, r, x0, lambda).map_err(|e| CliError::Config(e.to_string()))?;
        Ok((cfg, tol))
    }
}

/// `default` or a JSON file holding a suite.
pub fn load_suite(spec: &str) -> Result<Suite, CliError> {
    if spec == "default" {
        let mut s = Suite::default_suite();
        s.tolerances = profile_tolerances()?;
        return Ok(s);
    }
    let text = read(Path::new(spec))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("malformed suite {spec}: {e}")))?;
    let has_tol = value.get("tolerances").is_some();
    let mut suite: Suite =
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("malformed suite {spec}: {e}")))?;
    if !has_tol {
        suite.tolerances = profile_tolerances()?;
    }
    Ok(suite)
}
