//! Run configuration: a TOML document whose keys mirror the long flags.
//! Flags given on the command line win over file values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub tol: Option<f64>,
    pub max_len: Option<usize>,
    pub budget_bits: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub point: Vec<String>,
    #[serde(rename = "box")]
    pub box_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub place: Vec<String>,
    #[serde(rename = "F")]
    pub f_map: Option<String>,
    #[serde(rename = "G")]
    pub g_map: Option<String>,
    #[serde(rename = "C")]
    pub c_map: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub m_max: Option<usize>,
    pub n_max: Option<usize>,
    pub curve_degree: Option<usize>,
    pub samples: Option<usize>,
    pub period: Option<usize>,
    pub law: Option<String>,
    pub histogram: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// The flag value, else the file value, else an error naming the flag.
pub fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, name: &str) -> Result<T, String> {
    flag.clone().or_else(|| file.clone()).ok_or_else(|| format!("missing required value `--{name}`"))
}

pub fn pick_or<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

pub fn pick_list(flag: &[String], file: &[String]) -> Vec<String> {
    if flag.is_empty() {
        file.to_vec()
    } else {
        flag.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            tol: Some(1e-9),
            map: Some("p1: x^2 - 29/16".into()),
            point: vec!["1/4".into(), "(1, 2)".into()],
            box_bound: Some(5),
            f_map: Some("skew: p = x^2; q = y^2".into()),
            format: Some(Format::Json),
            ..Default::default()
        };
        assert_eq!(RunConfig::parse(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse("mapp = \"p1: x^2\"").is_err());
        let c = RunConfig::parse("F = \"p1: x^2\"\nmax-len = 3\nbox = 2").unwrap();
        assert_eq!((c.f_map.as_deref(), c.max_len, c.box_bound), (Some("p1: x^2"), Some(3), Some(2)));
    }

    #[test]
    fn flags_override_file() {
        assert_eq!(pick(&Some(2), &Some(1), "m").unwrap(), 2);
        assert_eq!(pick(&None, &Some(1), "m").unwrap(), 1);
        assert!(pick::<usize>(&None, &None, "m").unwrap_err().contains("--m"));
    }
}
