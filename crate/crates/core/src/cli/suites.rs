//! The verification suites behind `qcheck`.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Jacobians, RunConfig, Suite};
use super::report::{Aggregate, PointRecord, Report};
use crate::connection::bianchi_richardson;
use crate::deform::{a_operator, diffeo_deformation, random_tangent_field, DeformationField};
use crate::error::Result;
use crate::geometry::{sample_points, JacobianPath, Poly};
use crate::qcstruct::{
    adapted_complement, integrability_residual, predicted_conformal_complement, validate_qc, ContactTriple,
    PipelineOptions,
};
use crate::quatalg::{AmbientVector, QuatMatrix2};
use crate::symbols::{covector_design, dimension_ledger, exactness};

/// Required fraction of detected points in the perturbation suite.
pub const DETECTION_FRACTION: f64 = 0.8;
/// Bound on the deviation of the adapted complement from its conformal prediction.
pub const SHIFT_TOL: f64 = 1e-5;
/// Relative bound on the slope mismatch in the linearization check.
pub const SLOPE_TOL: f64 = 0.05;
/// Minimal torsion for a meaningful Bianchi check.
pub const BIANCHI_MIN_TORSION: f64 = 1e-4;
pub const BIANCHI_STEP: f64 = 2e-3;
/// Allowed relative deviation from the factor 4 when the Bianchi step doubles.
pub const RICHARDSON_SLACK: f64 = 0.1;
pub const RICHARDSON_FLOOR: f64 = 1e-10;
pub const GAUGE_FIELDS: usize = 20;
pub const SLOPE_DIRECTIONS: usize = 5;
pub const SLOPE_STEPS: [f64; 2] = [1e-3, 5e-4];

fn options(cfg: &RunConfig) -> PipelineOptions {
    PipelineOptions {
        path: match cfg.jacobians {
            Jacobians::Analytic => JacobianPath::Analytic,
            Jacobians::FiniteDifference => JacobianPath::FiniteDifference(cfg.fd_step),
        },
        fd_step: cfg.fd_step,
        seed_axis: None,
    }
}

fn prepare(cfg: &RunConfig, ct: ContactTriple) -> ContactTriple {
    match cfg.jacobians {
        Jacobians::Analytic => ct,
        Jacobians::FiniteDifference => ct.without_jacobians(),
    }
}

/// Skew-hermitian `D` of Frobenius norm `norm` along a seeded random direction.
pub fn seeded_d(seed: u64, norm: f64) -> QuatMatrix2 {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: [f64; 10] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let scale = norm / QuatMatrix2::skew_hermitian(&params).norm();
    QuatMatrix2::skew_hermitian(&params.map(|p| p * scale))
}

/// The default Galicki family: five `D` of norm 0.1 and five of norm 0.5.
pub fn default_galicki_family(seed: u64) -> Vec<(String, QuatMatrix2)> {
    let mut out = Vec::new();
    for (k, norm) in [0.1, 0.5].into_iter().enumerate() {
        for j in 0..5u64 {
            let s = seed.wrapping_mul(1000).wrapping_add(k as u64 * 100 + j);
            out.push((format!("D{}|{norm}", k * 5 + j as usize), seeded_d(s, norm)));
        }
    }
    out
}

/// Positive factors used for the conformal suite.
pub fn conformal_factors() -> Vec<Poly> {
    vec![
        Poly::constant(1.0).add(&Poly::coordinate(0).scale(0.1)),
        Poly::constant(1.2)
            .add(&Poly::coordinate(5).scale(-0.2))
            .add(&Poly::coordinate(2).mul(&Poly::coordinate(3)).scale(0.1)),
        Poly::constant(0.9).add(&Poly::coordinate(1).mul(&Poly::coordinate(1)).scale(0.3)),
    ]
}

pub fn perturbed_structure(cfg: &RunConfig) -> ContactTriple {
    let spec = cfg.perturbation_or_default();
    spec.direction().deformed_canonical(spec.magnitude)
}

fn residual_record(label: String, ct: &ContactTriple, p: &AmbientVector, opts: &PipelineOptions) -> (PointRecord, Option<bool>) {
    let qc = match validate_qc(ct, p, opts.path) {
        Ok(r) => r,
        Err(e) => return (PointRecord::failed(label, p.as_slice(), &e), None),
    };
    match integrability_residual(ct, p, opts) {
        Ok(r) => {
            let mut rec = PointRecord::new(label, p.as_slice());
            if let Some(d) = qc.tangent_null_defect {
                rec = rec.with("tangent_null_defect", d);
            }
            rec.residual = Some(r.normalized);
            rec.raw = Some(r.raw);
            rec.normalized = Some(r.normalized);
            rec.gram_eigenvalues = Some(r.gram_eigenvalues);
            (rec, Some(qc.is_qc()))
        }
        Err(e) => (PointRecord::failed(label, p.as_slice(), &e), None),
    }
}

fn integrable_points(cfg: &RunConfig, structures: Vec<(String, ContactTriple)>) -> Result<Vec<PointRecord>> {
    let opts = options(cfg);
    let mut out = Vec::new();
    for (name, ct) in structures {
        let ct = prepare(cfg, ct);
        for (k, p) in sample_points(&ct.surface, cfg.points, cfg.seed)?.iter().enumerate() {
            let (mut rec, qc) = residual_record(format!("{name}#{k}"), &ct, p, &opts);
            rec.pass = qc == Some(true) && rec.residual.is_some_and(|r| r < cfg.tol);
            out.push(rec);
        }
    }
    Ok(out)
}

fn check_canonical(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    integrable_points(cfg, vec![("canonical".into(), ContactTriple::canonical())])
}

fn check_galicki(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    let family = match cfg.d_matrix() {
        Some(d) => vec![("D".to_string(), d)],
        None => default_galicki_family(cfg.seed),
    };
    integrable_points(
        cfg,
        family.into_iter().map(|(n, d)| (n, ContactTriple::galicki(d))).collect(),
    )
}

fn check_conformal(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    let opts = options(cfg);
    let d = cfg.d_matrix().unwrap_or_else(|| seeded_d(cfg.seed, 0.3));
    let structures = vec![
        ("canonical", ContactTriple::canonical()),
        ("galicki", ContactTriple::galicki(d)),
        ("perturbed", perturbed_structure(cfg)),
    ];
    let mut out = Vec::new();
    for (name, ct) in structures {
        let ct = prepare(cfg, ct);
        let pts = sample_points(&ct.surface, cfg.points, cfg.seed)?;
        for (fi, f) in conformal_factors().iter().enumerate() {
            let rescaled = ct.conformal_rescale(f);
            for (k, p) in pts.iter().enumerate() {
                let label = format!("{name}/f{fi}#{k}");
                let run = || -> Result<PointRecord> {
                    let before = integrability_residual(&ct, p, &opts)?;
                    let after = integrability_residual(&rescaled, p, &opts)?;
                    let base = adapted_complement(&ct, p, &opts)?;
                    let pinned = PipelineOptions {
                        seed_axis: Some(base.seed),
                        ..opts
                    };
                    let shifted = adapted_complement(&rescaled, p, &pinned)?;
                    let predicted = predicted_conformal_complement(&base, f);
                    let shift = (0..3)
                        .map(|i| (shifted.reeb[i] - predicted[i]).norm())
                        .fold(0.0, f64::max);
                    let same_class = (before.normalized < cfg.tol) == (after.normalized < cfg.tol);
                    let mut rec = PointRecord::new(label.clone(), p.as_slice())
                        .with("base_residual", before.normalized)
                        .with("shift_deviation", shift)
                        .with("integrable", (before.normalized < cfg.tol) as u8 as f64);
                    rec.residual = Some(after.normalized);
                    rec.raw = Some(after.raw);
                    rec.normalized = Some(after.normalized);
                    rec.gram_eigenvalues = Some(after.gram_eigenvalues);
                    rec.pass = same_class && shift < SHIFT_TOL;
                    Ok(rec)
                };
                out.push(run().unwrap_or_else(|e| PointRecord::failed(label, p.as_slice(), &e)));
            }
        }
    }
    Ok(out)
}

fn perturb(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    let opts = options(cfg);
    let ct = prepare(cfg, perturbed_structure(cfg));
    let mut out = Vec::new();
    for (k, p) in sample_points(&ct.surface, cfg.points, cfg.seed)?.iter().enumerate() {
        let (mut rec, _) = residual_record(format!("perturbed#{k}"), &ct, p, &opts);
        rec.pass = rec.residual.is_some_and(|r| r > cfg.tol);
        out.push(rec);
    }
    Ok(out)
}

fn bianchi(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    let opts = options(cfg);
    let ct = prepare(cfg, perturbed_structure(cfg));
    let mut out = Vec::new();
    for (k, p) in sample_points(&ct.surface, cfg.points, cfg.seed)?.iter().enumerate() {
        let label = format!("perturbed#{k}");
        let rec = match bianchi_richardson(&ct, p, BIANCHI_STEP, &opts) {
            Ok(r) => {
                let mut rec = PointRecord::new(label, p.as_slice())
                    .with("torsion_norm", r.fine.torsion_norm)
                    .with("coarse_residual", r.coarse.residual)
                    .with("step_ratio", r.ratio())
                    .with("s20_part", r.fine.s20_part);
                rec.residual = Some(r.fine.residual);
                rec.pass = r.fine.residual < cfg.tol
                    && r.fine.torsion_norm > BIANCHI_MIN_TORSION
                    && r.second_order(RICHARDSON_SLACK, RICHARDSON_FLOOR);
                rec
            }
            Err(e) => PointRecord::failed(label, p.as_slice(), &e),
        };
        out.push(rec);
    }
    Ok(out)
}

fn symbols(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    Ok(covector_design(cfg.points, cfg.seed)
        .iter()
        .enumerate()
        .map(|(k, xi)| {
            let r = exactness(xi);
            let mut rec = PointRecord::new(format!("xi#{k}"), xi.as_slice())
                .with("rank_d", r.ranks[0] as f64)
                .with("rank_a", r.ranks[1] as f64)
                .with("rank_b", r.ranks[2] as f64)
                .with("kernel_a", r.kernel_a)
                .with("kernel_b", r.kernel_b)
                .with("unreduced_a", r.unreduced_a);
            rec.residual = Some(r.max_distance());
            rec.pass = r.ranks == [3, 5, 7] && r.max_distance() < cfg.tol;
            rec
        })
        .collect())
}

fn deform_linearization(cfg: &RunConfig) -> Result<Vec<PointRecord>> {
    let opts = options(cfg);
    let pts = sample_points(&crate::geometry::LevelSurface::Sphere, cfg.points, cfg.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for g in 0..GAUGE_FIELDS {
        let theta = diffeo_deformation(&random_tangent_field(&mut rng, 1));
        for (k, p) in pts.iter().enumerate() {
            let label = format!("gauge{g}#{k}");
            out.push(match a_operator(&theta, p) {
                Ok(a) => {
                    let mut rec = PointRecord::new(label, p.as_slice()).with("a0_norm", a.coords.norm());
                    rec.residual = Some(a.norm());
                    rec.pass = a.norm() < cfg.tol;
                    rec
                }
                Err(e) => PointRecord::failed(label, p.as_slice(), &e),
            });
        }
    }
    let p = &pts[0];
    for dir in 0..SLOPE_DIRECTIONS {
        let theta = DeformationField::random(&mut rng, 2);
        let a = a_operator(&theta, p).map(|a| a.norm());
        for t in SLOPE_STEPS {
            let label = format!("slope{dir}@{t:e}");
            let run = || -> Result<PointRecord> {
                let a = a.clone()?;
                let r = integrability_residual(&theta.deformed_canonical(t), p, &opts)?;
                let slope = r.raw / t;
                let rel = (slope - a).abs() / a;
                let mut rec = PointRecord::new(label.clone(), p.as_slice())
                    .with("slope", slope)
                    .with("a_norm", a)
                    .with("t", t);
                rec.residual = Some(rel);
                rec.raw = Some(r.raw);
                rec.pass = rel < SLOPE_TOL;
                Ok(rec)
            };
            out.push(run().unwrap_or_else(|e| PointRecord::failed(label, p.as_slice(), &e)));
        }
    }
    Ok(out)
}

/// Suite-level verdict from per-point verdicts.
pub fn suite_passes(suite: Suite, records: &[PointRecord]) -> bool {
    if records.is_empty() {
        return true;
    }
    match suite {
        Suite::Perturb => {
            let hits = records.iter().filter(|r| r.pass).count();
            hits as f64 >= DETECTION_FRACTION * records.len() as f64
        }
        _ => records.iter().all(|r| r.pass),
    }
}

pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let points = match cfg.suite {
        Suite::CheckCanonical => check_canonical(cfg),
        Suite::CheckGalicki => check_galicki(cfg),
        Suite::CheckConformal => check_conformal(cfg),
        Suite::Perturb => perturb(cfg),
        Suite::Bianchi => bianchi(cfg),
        Suite::Symbols => symbols(cfg),
        Suite::DeformLinearization => deform_linearization(cfg),
    }?;
    let aggregate = Aggregate::from_records(&points, suite_passes(cfg.suite, &points));
    Ok(Report {
        suite: cfg.suite,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        points,
        aggregate,
        constants: dimension_ledger(),
        wall_time: Some(start.elapsed().as_secs_f64()),
    })
}
