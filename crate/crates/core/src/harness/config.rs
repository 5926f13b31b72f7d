//! Run configuration: JSON file keys mirror the CLI flags, flags win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::hermite::hermite_generators;
use crate::lie::X3Sign;

pub const SUITES: [&str; 5] = ["heisenberg-hermite", "hille-yosida", "integrator", "lie-core", "nilpotent-l2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(LabError::usage(format!("unknown format '{other}' (json|csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SuiteConfig {
    pub suite: String,
    /// Hermite modes N and block count M; each suite falls back to its own default.
    pub trunc: Option<usize>,
    pub nmax: usize,
    pub seed: u64,
    pub x3_sign: X3Sign,
    pub tol: BTreeMap<String, f64>,
    pub lambda: Vec<f64>,
    /// Times for the type estimate; the sign-symmetric decade grid when absent.
    pub t_grid: Option<Vec<f64>>,
    /// Resolvent working space is `padding · N` modes.
    pub padding: usize,
    pub chart_box: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub record_time: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".into(),
            trunc: None,
            nmax: 3,
            seed: 42,
            x3_sign: X3Sign::Consistent,
            tol: BTreeMap::new(),
            lambda: vec![10.0, 20.0, 50.0, 100.0],
            t_grid: None,
            padding: 4,
            chart_box: 2.0,
            out: None,
            format: Format::Json,
            record_time: false,
        }
    }
}

pub const DEFAULT_HERMITE_MODES: usize = 64;
pub const DEFAULT_BLOCKS: usize = 50;

impl SuiteConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LabError::usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn hermite_modes(&self) -> usize {
        self.trunc.unwrap_or(DEFAULT_HERMITE_MODES)
    }

    pub fn blocks(&self) -> usize {
        self.trunc.unwrap_or(DEFAULT_BLOCKS)
    }

    pub fn suites(&self) -> Vec<&'static str> {
        if self.suite == "all" {
            SUITES.to_vec()
        } else {
            SUITES.iter().copied().filter(|s| *s == self.suite).collect()
        }
    }

    pub fn type_grid(&self) -> Vec<f64> {
        match &self.t_grid {
            Some(g) => g.clone(),
            None => (0..=8).flat_map(|k| [10f64.powi(k), -(10f64.powi(k))]).collect(),
        }
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        Tolerances::with_overrides(&self.tol)
    }

    /// Everything that can be rejected before a suite runs, including the
    /// guard band of the Hermite scale at the configured depth.
    pub fn validate(&self) -> Result<()> {
        if self.suites().is_empty() {
            return Err(LabError::usage(format!(
                "unknown suite '{}' (expected one of {}, all)",
                self.suite,
                SUITES.join(", ")
            )));
        }
        self.tolerances()?;
        if self.nmax < 1 {
            return Err(LabError::usage("nmax must be at least 1"));
        }
        if self.lambda.is_empty() || self.lambda.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(LabError::usage("lambda sequence must be nonempty and positive"));
        }
        if self.lambda.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LabError::usage("lambda sequence must be strictly increasing"));
        }
        if let Some(g) = &self.t_grid {
            if g.is_empty() || g.iter().any(|t| !t.is_finite() || *t == 0.0) {
                return Err(LabError::usage("t grid must be nonempty, finite and free of t = 0"));
            }
        }
        if self.padding < 1 {
            return Err(LabError::usage("padding must be at least 1"));
        }
        if !(self.chart_box.is_finite() && self.chart_box > 0.0) {
            return Err(LabError::usage("chart box must be positive"));
        }
        if self.trunc == Some(0) {
            return Err(LabError::usage("trunc must be positive"));
        }
        let names = self.suites();
        let hermite = names.iter().any(|s| *s != "lie-core" && *s != "nilpotent-l2");
        if hermite {
            let n = self.hermite_modes();
            if n < 16 {
                return Err(LabError::usage(format!("Hermite truncation {n} is below the minimum of 16")));
            }
            // Probes at depth n need two further generator applications.
            let fam = hermite_generators(n, self.x3_sign)?.subfamily(&[0, 1]);
            let need = self.nmax + 2;
            if need > fam.max_safe_depth() {
                return Err(LabError::usage(format!(
                    "nmax {} is too deep for N = {n}: maximal safe depth is {}",
                    self.nmax,
                    fam.max_safe_depth().saturating_sub(2)
                )));
            }
        }
        Ok(())
    }
}

macro_rules! tolerances {
    ($($field:ident = $key:literal => $default:expr),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Serialize)]
        pub struct Tolerances {
            $(pub $field: f64,)*
        }

        impl Default for Tolerances {
            fn default() -> Self {
                Tolerances { $($field: $default,)* }
            }
        }

        impl Tolerances {
            pub const KEYS: &'static [&'static str] = &[$($key),*];

            fn slot(&mut self, key: &str) -> Option<&mut f64> {
                match key {
                    $($key => Some(&mut self.$field),)*
                    _ => None,
                }
            }
        }
    };
}

tolerances! {
    algebra = "algebra" => 1e-12,
    unitarity = "unitarity" => 1e-8,
    route = "route" => 1e-6,
    growth_slack = "growth-slack" => 1e-6,
    phase_equality = "phase-equality" => 1e-9,
    norm_oracle = "norm-oracle" => 1e-9,
    conjugation = "conjugation" => 1e-7,
    continuity = "continuity" => 1e-6,
    type_ = "type" => 1e-6,
    resolvent = "resolvent" => 1e-6,
    resolvent_identity = "resolvent-identity" => 1e-9,
    resolvent_oracle = "resolvent-oracle" => 1e-4,
    yosida = "yosida" => 1e-3,
    equicontinuity_slack = "equicontinuity-slack" => 1e-8,
    beta = "beta" => 1e-3,
    l2 = "l2" => 1e-12,
    level_one_variation = "level-one-variation" => 0.01,
    homomorphism = "homomorphism" => 1e-6,
    int_identity = "int-identity" => 1e-6,
    int_rows = "int-rows" => 1e-8,
    dual = "dual" => 1e-10,
    extension = "extension" => 1e-8,
}

impl Tolerances {
    pub fn with_overrides(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Tolerances::default();
        for (k, &v) in map {
            let slot = t.slot(k).ok_or_else(|| {
                LabError::usage(format!("unknown tolerance key '{k}' (known: {})", Tolerances::KEYS.join(", ")))
            })?;
            if !(v.is_finite() && v > 0.0) {
                return Err(LabError::usage(format!("tolerance '{k}' must be positive, got {v}")));
            }
            *slot = v;
        }
        Ok(t)
    }
}

/// `key=value` as given to `--tol`.
pub fn parse_tol_pair(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| LabError::usage(format!("tolerance override '{s}' is not key=value")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| LabError::usage(format!("tolerance value in '{s}' is not a number")))?;
    Ok((k.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_tolerance_key_is_rejected() {
        let mut m = BTreeMap::new();
        m.insert("route".to_string(), 1e-7);
        assert_eq!(Tolerances::with_overrides(&m).unwrap().route, 1e-7);
        m.insert("bogus".to_string(), 1.0);
        assert!(Tolerances::with_overrides(&m).is_err());
    }

    #[test]
    fn guard_band_is_checked_up_front() {
        let cfg = SuiteConfig {
            suite: "heisenberg-hermite".into(),
            trunc: Some(16),
            nmax: 6,
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("maximal safe depth"), "{err}");
        let ok = SuiteConfig { nmax: 3, ..cfg };
        ok.validate().unwrap();
    }

    #[test]
    fn config_keys_match_flags() {
        let cfg: SuiteConfig =
            serde_json::from_str(r#"{"suite":"lie-core","x3-sign":"paper","tol":{"route":1e-7},"lambda":[1,2]}"#).unwrap();
        assert_eq!(cfg.x3_sign, X3Sign::Paper);
        assert_eq!(cfg.lambda, vec![1.0, 2.0]);
        assert_eq!(cfg.nmax, 3);
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"sweet":"x"}"#).is_err());
        assert!(parse_tol_pair("a=1e-3").is_ok() && parse_tol_pair("a").is_err());
    }
}
