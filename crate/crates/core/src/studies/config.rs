use std::path::PathBuf;

use crate::approx::NaiveAnchors;
use crate::error::{Result, SplineError};
use crate::spline::KnotVector;

/// Offset applied to sweep parameters that fall on a knot or on the end of
/// the domain.
pub const KNOT_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Table1,
    Study1d,
    Study2d,
    Nonuniform,
    WeightsDemo,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Table1 => "table1",
            StudyKind::Study1d => "study1d",
            StudyKind::Study2d => "study2d",
            StudyKind::Nonuniform => "nonuniform",
            StudyKind::WeightsDemo => "weights-demo",
        }
    }
}

impl std::str::FromStr for StudyKind {
    type Err = SplineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(StudyKind::Table1),
            "study1d" => Ok(StudyKind::Study1d),
            "study2d" => Ok(StudyKind::Study2d),
            "nonuniform" => Ok(StudyKind::Nonuniform),
            "weights-demo" => Ok(StudyKind::WeightsDemo),
            _ => Err(SplineError::InvalidConfig(format!("unknown study '{s}'"))),
        }
    }
}

/// Parameters of one study run.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub study: StudyKind,
    pub degrees: Vec<usize>,
    /// Knot insertion depth: `2^d_k` uniform spans on `[-1, 1]`.
    pub dk: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub t_samples: usize,
    /// Trimming parameters of the non-uniform study.
    pub trims: Vec<f64>,
    pub u_hat_min: f64,
    pub u_hat_max: f64,
    pub u_hat_samples: usize,
    pub adaptive: bool,
    pub ratio: f64,
    pub naive_anchors: NaiveAnchors,
    pub out: Option<PathBuf>,
}

impl StudyConfig {
    pub fn new(study: StudyKind) -> Self {
        Self {
            study,
            degrees: vec![2, 3, 4],
            dk: 4,
            t_min: 0.5,
            t_max: 1.0,
            t_samples: 101,
            trims: vec![0.51, 0.80],
            u_hat_min: 0.5,
            u_hat_max: 0.75,
            u_hat_samples: 51,
            adaptive: false,
            ratio: 3.0,
            naive_anchors: NaiveAnchors::default(),
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SplineError::InvalidConfig(m));
        if self.degrees.is_empty() || self.degrees.iter().any(|&p| p == 0) {
            return bad("degrees must be positive".into());
        }
        if self.dk > 10 {
            return bad(format!("d_k = {} is too deep", self.dk));
        }
        if !(self.t_min > -1.0 && self.t_min <= self.t_max && self.t_max <= 1.0) {
            return bad(format!("t range [{}, {}] must lie in (-1, 1]", self.t_min, self.t_max));
        }
        if self.t_samples == 0 || self.u_hat_samples == 0 {
            return bad("sample counts must be positive".into());
        }
        if !(self.ratio > 1.0) {
            return bad(format!("ratio threshold {} must exceed 1", self.ratio));
        }
        if self.study == StudyKind::Nonuniform {
            let h = span_width(self.dk);
            if self.dk < 3 {
                return bad("the non-uniform study needs d_k >= 3 so that 0.625 is a knot".into());
            }
            if !(self.u_hat_min >= 0.625 - h && self.u_hat_min <= self.u_hat_max && self.u_hat_max <= 0.625 + h) {
                return bad(format!("u_hat range must lie in [{}, {}]", 0.625 - h, 0.625 + h));
            }
            if self.trims.iter().any(|&t| !(t > -1.0 && t < NONUNIFORM_END)) {
                return bad("non-uniform trims must lie inside (-1, 1.625)".into());
            }
        }
        Ok(())
    }
}

/// Right end of the non-uniform study domain.
pub const NONUNIFORM_END: f64 = 1.625;

/// Uniform span width `2 / 2^d_k`.
pub fn span_width(dk: u32) -> f64 {
    2.0 / (1u64 << dk) as f64
}

/// Open knot vector of degree `p` with `2^d_k` uniform spans on `[-1, 1]`,
/// as obtained from the single Bézier span by degree elevation and uniform
/// knot insertion.
pub fn build_study_basis(p: usize, dk: u32) -> Result<KnotVector> {
    KnotVector::open_uniform(p, -1.0, 1.0, 1usize << dk)
}

/// Knot vector of the non-uniform study: spans of width `2 / 2^d_k` on
/// `[-1, 1.625]` with the knot `0.625` replaced by `u_hat`.
pub fn nonuniform_basis(p: usize, dk: u32, u_hat: f64) -> Result<KnotVector> {
    let h = span_width(dk);
    let count = ((NONUNIFORM_END + 1.0) / h).round() as usize;
    let interior: Vec<f64> = (1..count)
        .map(|k| -1.0 + k as f64 * h)
        .map(|x| if (x - 0.625).abs() < 1e-12 { u_hat } else { x })
        .collect();
    let mut interior = interior;
    interior.sort_by(f64::total_cmp);
    KnotVector::open(p, -1.0, NONUNIFORM_END, interior)
}

/// `samples` equidistant values on `[a, b]`.
pub fn linspace(a: f64, b: f64, samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![a];
    }
    (0..samples).map(|k| a + (b - a) * k as f64 / (samples - 1) as f64).collect()
}

/// Trimming parameters of a sweep: equidistant on `[t_min, t_max]`, moved
/// off knots by `+1e-9` and off the right end of the domain by `-1e-9`.
pub fn t_sweep(kv: &KnotVector, t_min: f64, t_max: f64, samples: usize) -> Vec<f64> {
    let (_, end) = kv.domain();
    let knots = kv.breakpoints();
    linspace(t_min, t_max, samples)
        .into_iter()
        .map(|t| {
            if t >= end - 1e-12 {
                end - KNOT_OFFSET
            } else if knots.iter().any(|k| (k - t).abs() < 1e-12) {
                t + KNOT_OFFSET
            } else {
                t
            }
        })
        .collect()
}
