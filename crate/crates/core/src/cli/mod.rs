//! Suite runner, configuration and reports for the `qcheck` command.

mod config;
mod report;
mod suites;

pub use config::{
    parse_d_params, ConfigFile, FieldSpec, Jacobians, PerturbationSpec, RunConfig, Suite, Term, MAX_FD_STEP,
    MAX_PERTURBATION_DEGREE,
};
pub use report::{emit_report, to_json, to_text, Aggregate, Format, PointRecord, Report};
pub use suites::{
    conformal_factors, default_galicki_family, perturbed_structure, run_suite, seeded_d, suite_passes,
    BIANCHI_MIN_TORSION, BIANCHI_STEP, DETECTION_FRACTION, GAUGE_FIELDS, RICHARDSON_FLOOR, RICHARDSON_SLACK,
    SHIFT_TOL, SLOPE_DIRECTIONS, SLOPE_STEPS, SLOPE_TOL,
};
