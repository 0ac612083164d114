use std::collections::BTreeMap;
use std::io::Write;

use super::config::StudyKind;
use super::run::StudyRow;
use crate::approx::Method;
use crate::error::{Result, SplineError};

pub const CSV_HEADER: [&str; 9] = ["study", "p", "d_k", "t", "u_hat", "method", "kappa", "err_rel_l2", "dof"];

/// Seventeen significant digits.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes rows as CSV with the fixed column order; `u_hat` is empty when
/// not applicable.
pub fn write_csv<W: Write>(rows: &[StudyRow], out: W) -> Result<()> {
    let io = |e: csv::Error| SplineError::InvalidConfig(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let res = &r.result;
        w.write_record([
            r.study.clone(),
            r.p.to_string(),
            r.dk.to_string(),
            float(res.t),
            r.u_hat.map(float).unwrap_or_default(),
            res.method.to_string(),
            float(res.kappa),
            float(res.err_rel_l2),
            res.dof.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| SplineError::InvalidConfig(format!("writing CSV: {e}")))?;
    Ok(())
}

pub fn to_csv_string(rows: &[StudyRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

/// Outcome of one golden comparison or property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Published untrimmed reference values `(p, κ, ε_rel)` for `d_k = 4`.
pub const TABLE1: [(usize, f64, f64); 3] = [(2, 2.5, 1.98946e-2), (3, 4.30981, 5.73360e-3), (4, 7.93821, 1.75000e-3)];
pub const TABLE2: [(usize, f64, f64); 3] = [(2, 6.25, 2.10822e-4), (3, 18.57448, 4.48755e-5), (4, 63.01519, 7.65653e-6)];

fn relative_check(name: String, got: f64, want: f64, tol: f64) -> Check {
    let rel = ((got - want) / want).abs();
    Check { passed: rel <= tol, detail: format!("{got:.6e} vs {want:.6e} (rel. dev. {rel:.2e}, tol {tol:.1e})"), name }
}

/// Checks for `--check`: published values for the untrimmed tables and the
/// stability properties for the sweeps.
pub fn golden_checks(kind: StudyKind, rows: &[StudyRow]) -> Vec<Check> {
    let mut out = Vec::new();
    match kind {
        StudyKind::Table1 => {
            for (study, table, err_tol) in [("table1", TABLE1, 0.01), ("table2", TABLE2, 0.02)] {
                for (p, kappa, err) in table {
                    let Some(r) = rows.iter().find(|r| r.study == study && r.p == p && r.dk == 4) else { continue };
                    out.push(relative_check(format!("{study} p={p} kappa"), r.result.kappa, kappa, 0.005));
                    out.push(relative_check(format!("{study} p={p} err"), r.result.err_rel_l2, err, err_tol));
                }
            }
        }
        StudyKind::Study1d | StudyKind::Study2d => {
            let mut by_p: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
            for r in rows {
                let e = by_p.entry(r.p).or_default();
                match r.result.method {
                    Method::Extended => e.0.push(r.result.kappa),
                    Method::Naive => e.1.push(r.result.kappa),
                }
            }
            for (p, (ext, naive)) in by_p {
                let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
                let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
                let ratio = max(&ext) / min(&ext);
                out.push(Check {
                    name: format!("p={p} extended kappa max/min <= 2"),
                    passed: ratio <= 2.0,
                    detail: format!("{ratio:.4}"),
                });
                let factor = max(&naive) / max(&ext);
                out.push(Check {
                    name: format!("p={p} naive kappa max >= 100 x extended max"),
                    passed: factor >= 100.0,
                    detail: format!("{factor:.3e}"),
                });
            }
        }
        StudyKind::Nonuniform => {
            let key = |r: &StudyRow| (r.p, r.result.t.to_bits(), r.u_hat.map(f64::to_bits));
            let plain: BTreeMap<_, f64> = rows.iter().filter(|r| r.study == "nonuniform").map(|r| (key(r), r.result.kappa)).collect();
            for r in rows.iter().filter(|r| r.study == "nonuniform-adaptive") {
                if let Some(&k) = plain.get(&key(r)) {
                    if r.result.kappa > k * (1.0 + 1e-12) {
                        out.push(Check {
                            name: format!("p={} t={} u_hat={:?} adaptive <= plain", r.p, r.result.t, r.u_hat),
                            passed: false,
                            detail: format!("{:.6e} > {k:.6e}", r.result.kappa),
                        });
                    }
                }
            }
            if out.is_empty() {
                out.push(Check { name: "adaptive kappa <= plain kappa".into(), passed: true, detail: "all samples".into() });
            }
        }
        StudyKind::WeightsDemo => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::StudyResult;

    fn row(study: &str, p: usize, method: Method, kappa: f64) -> StudyRow {
        StudyRow {
            study: study.into(),
            p,
            dk: 4,
            u_hat: None,
            result: StudyResult { t: 0.75, method, kappa, err_rel_l2: 0.001, dof: 17 },
        }
    }

    #[test]
    fn csv_layout() {
        let mut r = row("study1d", 2, Method::Naive, 12.5);
        r.u_hat = Some(0.5625);
        let text = to_csv_string(&[row("study1d", 2, Method::Extended, 2.5), r]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "study,p,d_k,t,u_hat,method,kappa,err_rel_l2,dof");
        assert_eq!(lines[1], "study1d,2,4,7.5000000000000000e-1,,extended,2.5000000000000000e0,1.0000000000000000e-3,17");
        assert_eq!(lines[2].split(',').nth(4), Some("5.6250000000000000e-1"));
        assert_eq!(lines[2].split(',').nth(5), Some("naive"));
    }

    #[test]
    fn sweep_checks() {
        let rows = vec![
            row("study1d", 2, Method::Extended, 2.5),
            row("study1d", 2, Method::Extended, 3.0),
            row("study1d", 2, Method::Naive, 400.0),
        ];
        let c = golden_checks(StudyKind::Study1d, &rows);
        assert!(c.iter().all(|c| c.passed), "{c:?}");
        let rows = vec![row("study1d", 2, Method::Extended, 2.5), row("study1d", 2, Method::Extended, 5.5)];
        assert!(golden_checks(StudyKind::Study1d, &rows).iter().any(|c| !c.passed));
    }

    #[test]
    fn table_checks_use_relative_tolerance() {
        let mut r = row("table1", 2, Method::Extended, 2.51);
        r.result.err_rel_l2 = 1.98946e-2;
        let c = golden_checks(StudyKind::Table1, &[r]);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.passed));
        let mut r = row("table1", 3, Method::Extended, 4.4);
        r.result.err_rel_l2 = 5.73360e-3;
        assert!(!golden_checks(StudyKind::Table1, &[r])[0].passed);
    }
}
