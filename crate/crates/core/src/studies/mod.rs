//! Interpolation studies on trimmed bases, the non-uniform knot study with
//! adaptive refinement, and CSV output.

pub mod config;
pub mod demo;
pub mod output;
pub mod run;

pub use config::{build_study_basis, linspace, nonuniform_basis, span_width, t_sweep, StudyConfig, StudyKind, KNOT_OFFSET, NONUNIFORM_END};
pub use demo::{weights_demo, WeightsDemo};
pub use output::{golden_checks, to_csv_string, write_csv, Check, CSV_HEADER, TABLE1, TABLE2};
pub use run::{
    adaptive_refine, run_1d_point, run_2d_point, run_nonuniform, run_study, run_study_1d, run_study_2d, run_table1,
    target_1d, target_2d, trim_domain, StudyRow,
};
