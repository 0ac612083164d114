//! Study parameters read from a TOML file.

use std::path::PathBuf;

use anyhow::{bail, Result};
use exspline::approx::NaiveAnchors;
use exspline::studies::StudyConfig;
use serde::Deserialize;

/// Every field is optional; absent fields keep the study defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub degrees: Option<Vec<usize>>,
    pub dk: Option<u32>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_samples: Option<usize>,
    pub trims: Option<Vec<f64>>,
    pub u_hat_min: Option<f64>,
    pub u_hat_max: Option<f64>,
    pub u_hat_samples: Option<usize>,
    pub adaptive: Option<bool>,
    pub ratio: Option<f64>,
    pub naive_anchors: Option<String>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn apply(self, cfg: &mut StudyConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(degrees, dk, t_min, t_max, t_samples, trims, u_hat_min, u_hat_max, u_hat_samples, adaptive, ratio);
        if let Some(rule) = self.naive_anchors {
            cfg.naive_anchors = match rule.as_str() {
                "truncated-greville" => NaiveAnchors::TruncatedGreville,
                "clamp-to-boundary" => NaiveAnchors::ClampToBoundary,
                other => bail!("unknown naive anchor rule '{other}'"),
            };
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        Ok(())
    }
}
