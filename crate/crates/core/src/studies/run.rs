use rayon::prelude::*;

use super::config::{build_study_basis, linspace, nonuniform_basis, t_sweep, StudyConfig, StudyKind};
use crate::approx::{
    naive_system, quadrature_1d, quadrature_tensor, relative_l2_error, stabilized_system, tensor_naive_system,
    tensor_stabilized_system, CollocationSystem, Method, NaiveAnchors, StudyResult,
};
use crate::error::Result;
use crate::extension::{TensorTrimmedBasis, TrimmedBasis1D, ValidDomain1D};
use crate::spline::{eval_all, KnotVector, Point, Side};

/// One-dimensional target `1 / |a - u|` with `a = -1.1`.
pub fn target_1d(u: f64) -> f64 {
    1.0 / (-1.1 - u).abs()
}

/// Two-dimensional target `1 / |a - (u, v)|` with `a = (-1.2, -1.2)`.
pub fn target_2d(u: f64, v: f64) -> f64 {
    1.0 / ((-1.2 - u).powi(2) + (-1.2 - v).powi(2)).sqrt()
}

/// One output line of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub study: String,
    pub p: usize,
    pub dk: u32,
    pub u_hat: Option<f64>,
    pub result: StudyResult,
}

/// Valid interval `[a, t)`, or the whole closed domain when `t` reaches its
/// right end.
pub fn trim_domain(kv: &KnotVector, t: f64) -> Result<ValidDomain1D> {
    let (a, b) = kv.domain();
    if t >= b {
        ValidDomain1D::closed(a, b)
    } else {
        ValidDomain1D::trimmed_above(a, t)
    }
}

fn failed(t: f64, method: Method) -> StudyResult {
    StudyResult { t, method, kappa: f64::NAN, err_rel_l2: f64::NAN, dof: 0 }
}

/// κ, error and size of a solved system; a failed solve reports an
/// infinite error.
fn evaluate<const D: usize>(
    t: f64,
    method: Method,
    system: &CollocationSystem<D>,
    rule: &[(Point<D>, f64)],
    f: impl Fn(&Point<D>) -> f64,
    full: impl Fn(&Point<D>) -> Result<Vec<f64>>,
) -> StudyResult {
    let kappa = system.condition_number();
    let err_rel_l2 = match system.solve() {
        Ok(c) => relative_l2_error(rule, f, |x| Ok(system.combine(&c, &full(x)?))).unwrap_or(f64::NAN),
        Err(_) => f64::INFINITY,
    };
    StudyResult { t, method, kappa, err_rel_l2, dof: system.size() }
}

/// Interpolates the 1D target on `[a, t)` of `kv` with one method.
pub fn run_1d_point(kv: &KnotVector, t: f64, method: Method, rule: NaiveAnchors) -> StudyResult {
    let go = || -> Result<StudyResult> {
        let domain = trim_domain(kv, t)?;
        let tb = TrimmedBasis1D::new(kv, domain)?;
        let system = match method {
            Method::Extended => stabilized_system(&tb, &tb.extension_matrix()?, target_1d)?,
            Method::Naive => naive_system(&tb, rule, target_1d)?,
        };
        let q = quadrature_1d(kv, &domain, kv.degree() + 3);
        Ok(evaluate(t, method, &system, &q, |x| target_1d(x[0]), |x| eval_all(kv, x[0], Side::Right)))
    };
    go().unwrap_or_else(|_| failed(t, method))
}

/// Interpolates the 2D target on `[a, t)²` with one method.
pub fn run_2d_point(kv: &KnotVector, t: f64, method: Method, rule: NaiveAnchors) -> StudyResult {
    let go = || -> Result<StudyResult> {
        let domain = trim_domain(kv, t)?;
        let tb = TensorTrimmedBasis::new(kv, domain, kv, domain)?;
        let system = match method {
            Method::Extended => tensor_stabilized_system(&tb, &tb.extension_matrix()?, target_2d)?,
            Method::Naive => tensor_naive_system(&tb, rule, target_2d)?,
        };
        let q = quadrature_tensor(kv, &domain, kv, &domain, kv.degree() + 3);
        let full = |x: &Point<2>| -> Result<Vec<f64>> {
            let (bu, bv) = (eval_all(kv, x[0], Side::Right)?, eval_all(kv, x[1], Side::Right)?);
            Ok(bu.iter().flat_map(|a| bv.iter().map(move |b| a * b)).collect())
        };
        Ok(evaluate(t, method, &system, &q, |x| target_2d(x[0], x[1]), full))
    };
    go().unwrap_or_else(|_| failed(t, method))
}

/// Bisects the span next to each donor span, on the side of the trim, while
/// it is more than `threshold` times longer than the donor span.
pub fn adaptive_refine(kv: &KnotVector, t: f64, threshold: f64) -> Result<KnotVector> {
    let mut kv = kv.clone();
    // every bisection halves a span, so this bound is never reached in practice
    for _ in 0..64 * kv.len() {
        let tb = TrimmedBasis1D::new(&kv, trim_domain(&kv, t)?)?;
        let mut refined = None;
        for j in tb.degenerated() {
            let Some(s) = tb.donor_span(j) else { continue };
            let donor = kv.span(s)?;
            let Some(next) = kv.spans().find(|sp| sp.index > s) else { continue };
            if next.length() / donor.length() > threshold {
                refined = Some(kv.bisect_span(next.index)?);
                break;
            }
        }
        match refined {
            Some(k) => kv = k,
            None => return Ok(kv),
        }
    }
    Ok(kv)
}

fn rows_for(study: &str, p: usize, dk: u32, u_hat: Option<f64>, results: Vec<StudyResult>) -> Vec<StudyRow> {
    results.into_iter().map(|result| StudyRow { study: study.to_string(), p, dk, u_hat, result }).collect()
}

/// Untrimmed 1D and 2D interpolation for every degree (`table1` and
/// `table2` rows).
pub fn run_table1(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    let mut rows = Vec::new();
    for &p in &cfg.degrees {
        let kv = build_study_basis(p, cfg.dk)?;
        let (r1, r2) = rayon::join(
            || run_1d_point(&kv, 1.0, Method::Extended, cfg.naive_anchors),
            || run_2d_point(&kv, 1.0, Method::Extended, cfg.naive_anchors),
        );
        rows.extend(rows_for("table1", p, cfg.dk, None, vec![r1]));
        rows.extend(rows_for("table2", p, cfg.dk, None, vec![r2]));
    }
    Ok(rows)
}

fn sweep(cfg: &StudyConfig, name: &str, point: fn(&KnotVector, f64, Method, NaiveAnchors) -> StudyResult) -> Result<Vec<StudyRow>> {
    let mut rows = Vec::new();
    for &p in &cfg.degrees {
        let kv = build_study_basis(p, cfg.dk)?;
        let ts = t_sweep(&kv, cfg.t_min, cfg.t_max, cfg.t_samples);
        let results: Vec<Vec<StudyResult>> = ts
            .par_iter()
            .map(|&t| [Method::Extended, Method::Naive].iter().map(|&m| point(&kv, t, m, cfg.naive_anchors)).collect())
            .collect();
        rows.extend(rows_for(name, p, cfg.dk, None, results.into_iter().flatten().collect()));
    }
    Ok(rows)
}

/// Sweep over `t` for the 1D trim `[-1, t)`, both methods.
pub fn run_study_1d(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    sweep(cfg, "study1d", run_1d_point)
}

/// Sweep over `t` for the tensor trim `[-1, t)²`, both methods.
pub fn run_study_2d(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    sweep(cfg, "study2d", run_2d_point)
}

/// Extended-method sweep over the variable knot `u_hat` for every trim and
/// degree; with `cfg.adaptive` each point is repeated on the adaptively
/// refined knot vector (study name `nonuniform-adaptive`).
pub fn run_nonuniform(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    let u_hats = linspace(cfg.u_hat_min, cfg.u_hat_max, cfg.u_hat_samples);
    let mut rows = Vec::new();
    for &t in &cfg.trims {
        for &p in &cfg.degrees {
            let points: Vec<Result<Vec<StudyRow>>> = u_hats
                .par_iter()
                .map(|&u_hat| {
                    let kv = nonuniform_basis(p, cfg.dk, u_hat)?;
                    let mut out = rows_for("nonuniform", p, cfg.dk, Some(u_hat), vec![run_1d_point(&kv, t, Method::Extended, cfg.naive_anchors)]);
                    if cfg.adaptive {
                        let refined = adaptive_refine(&kv, t, cfg.ratio)?;
                        let r = run_1d_point(&refined, t, Method::Extended, cfg.naive_anchors);
                        out.extend(rows_for("nonuniform-adaptive", p, cfg.dk, Some(u_hat), vec![r]));
                    }
                    Ok(out)
                })
                .collect();
            for r in points {
                rows.extend(r?);
            }
        }
    }
    Ok(rows)
}

/// Runs the CSV-producing study selected by `cfg.study`.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    cfg.validate()?;
    match cfg.study {
        StudyKind::Table1 => run_table1(cfg),
        StudyKind::Study1d => run_study_1d(cfg),
        StudyKind::Study2d => run_study_2d(cfg),
        StudyKind::Nonuniform => run_nonuniform(cfg),
        StudyKind::WeightsDemo => Ok(Vec::new()),
    }
}
