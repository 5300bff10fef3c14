//! Run configuration: a JSON document plus command-line overrides.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deform::DeformationField;
use crate::error::{QcError, Result};
use crate::geometry::{exponents_up_to, FormRef, Poly, PolyForm, PolyVector};
use crate::quatalg::QuatMatrix2;

pub const MAX_PERTURBATION_DEGREE: u32 = 3;
pub const MAX_FD_STEP: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CheckCanonical,
    CheckGalicki,
    CheckConformal,
    Perturb,
    Bianchi,
    Symbols,
    DeformLinearization,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::CheckCanonical,
        Suite::CheckGalicki,
        Suite::CheckConformal,
        Suite::Perturb,
        Suite::Bianchi,
        Suite::Symbols,
        Suite::DeformLinearization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CheckCanonical => "check-canonical",
            Suite::CheckGalicki => "check-galicki",
            Suite::CheckConformal => "check-conformal",
            Suite::Perturb => "perturb",
            Suite::Bianchi => "bianchi",
            Suite::Symbols => "symbols",
            Suite::DeformLinearization => "deform-linearization",
        }
    }

    pub fn default_points(self) -> usize {
        match self {
            Suite::Bianchi => 8,
            Suite::Symbols => 200,
            Suite::DeformLinearization => 2,
            _ => 64,
        }
    }

    pub fn default_tolerance(self, jacobians: Jacobians) -> f64 {
        let fd = jacobians == Jacobians::FiniteDifference;
        match self {
            Suite::CheckCanonical if fd => 1e-4,
            Suite::CheckCanonical => 1e-8,
            Suite::CheckGalicki | Suite::CheckConformal if fd => 1e-4,
            Suite::CheckGalicki | Suite::CheckConformal => 1e-6,
            Suite::Perturb => 1e-4,
            Suite::Bianchi => 1e-3,
            Suite::Symbols => 1e-8,
            Suite::DeformLinearization => 1e-4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = QcError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            QcError::Config(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// How Jacobians of the contact forms are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Jacobians {
    #[default]
    Analytic,
    FiniteDifference,
}

/// One monomial `coefficient * x^exponent` in component `component` of a form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub component: usize,
    pub exponent: [u8; 8],
    pub coefficient: f64,
}

/// Three ambient one-forms with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub forms: [Vec<Term>; 3],
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        for t in self.forms.iter().flatten() {
            if t.component >= 8 {
                return Err(QcError::Config(format!("component {} out of range 0..8", t.component)));
            }
            let degree: u32 = t.exponent.iter().map(|&e| e as u32).sum();
            if degree > MAX_PERTURBATION_DEGREE {
                return Err(QcError::Config(format!(
                    "monomial of degree {degree} exceeds {MAX_PERTURBATION_DEGREE}"
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(QcError::Config("non-finite coefficient".into()));
            }
        }
        Ok(())
    }

    pub fn polynomials(&self) -> [PolyVector; 3] {
        std::array::from_fn(|i| {
            let mut v = PolyVector::default();
            for t in &self.forms[i] {
                v.components[t.component].add_term(t.exponent, t.coefficient);
            }
            v
        })
    }

    pub fn from_polynomials(p: &[PolyVector; 3]) -> Self {
        FieldSpec {
            forms: std::array::from_fn(|i| {
                let mut terms = Vec::new();
                for (a, c) in p[i].components.iter().enumerate() {
                    for (e, v) in c.terms() {
                        terms.push(Term {
                            component: a,
                            exponent: *e,
                            coefficient: *v,
                        });
                    }
                }
                terms
            }),
        }
    }
}

/// `magnitude * sum_k coefficients[k] * basis[k]`, applied to the canonical triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub magnitude: f64,
    pub basis: Vec<FieldSpec>,
    pub coefficients: Vec<f64>,
}

impl PerturbationSpec {
    /// One random field with uniform coefficients in `[-1, 1]` on all monomials up to `degree`.
    pub fn random(seed: u64, degree: u32, magnitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exps = exponents_up_to(degree);
        let field: [PolyVector; 3] = std::array::from_fn(|_| PolyVector {
            components: std::array::from_fn(|_| {
                let mut p = Poly::zero();
                for e in &exps {
                    p.add_term(*e, rng.random_range(-1.0..1.0));
                }
                p
            }),
        });
        PerturbationSpec {
            magnitude,
            basis: vec![FieldSpec::from_polynomials(&field)],
            coefficients: vec![1.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.magnitude.is_finite() {
            return Err(QcError::Config("perturbation magnitude must be finite".into()));
        }
        if self.basis.len() != self.coefficients.len() {
            return Err(QcError::Config(format!(
                "{} basis fields but {} coefficients",
                self.basis.len(),
                self.coefficients.len()
            )));
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(QcError::Config("non-finite perturbation coefficient".into()));
        }
        self.basis.iter().try_for_each(FieldSpec::validate)
    }

    /// The combined direction, without the magnitude.
    pub fn direction(&self) -> DeformationField {
        let mut total: [PolyVector; 3] = Default::default();
        for (field, c) in self.basis.iter().zip(&self.coefficients) {
            let p = field.polynomials();
            for i in 0..3 {
                total[i] = total[i].add(&p[i].scale(*c));
            }
        }
        DeformationField::new(total.map(|v| Arc::new(PolyForm(v)) as FormRef))
    }
}

/// Ten reals of a skew-hermitian `D`: imaginary parts of `D_11` and `D_22`, then
/// the quaternion `D_12`. Separated by commas or whitespace.
pub fn parse_d_params(s: &str) -> Result<[f64; 10]> {
    let parts: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if parts.len() != 10 {
        return Err(QcError::Config(format!("--D expects 10 numbers, got {}", parts.len())));
    }
    let mut out = [0.0; 10];
    for (o, p) in out.iter_mut().zip(parts) {
        let v: f64 = p
            .parse()
            .map_err(|_| QcError::Config(format!("--D entry `{p}` is not a number")))?;
        if !v.is_finite() {
            return Err(QcError::Config(format!("--D entry `{p}` is not finite")));
        }
        *o = v;
    }
    Ok(out)
}

/// Contents of a config file; every field optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub suite: Option<Suite>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub fd_step: Option<f64>,
    pub tol: Option<f64>,
    pub jacobians: Option<Jacobians>,
    #[serde(rename = "D")]
    pub d: Option<[f64; 10]>,
    pub perturbation: Option<PerturbationSpec>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QcError::Config(format!("config: {e}")))
    }

    /// Fields of `other` that are set win.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            suite: other.suite.or(self.suite),
            seed: other.seed.or(self.seed),
            points: other.points.or(self.points),
            fd_step: other.fd_step.or(self.fd_step),
            tol: other.tol.or(self.tol),
            jacobians: other.jacobians.or(self.jacobians),
            d: other.d.or(self.d),
            perturbation: other.perturbation.or(self.perturbation),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let suite = self.suite.ok_or_else(|| QcError::Config("no suite given".into()))?;
        let jacobians = self.jacobians.unwrap_or_default();
        let cfg = RunConfig {
            suite,
            seed: self.seed.unwrap_or(0),
            points: self.points.unwrap_or(suite.default_points()),
            fd_step: self.fd_step.unwrap_or(crate::geometry::FD_STEP),
            tol: self.tol.unwrap_or(suite.default_tolerance(jacobians)),
            jacobians,
            d: self.d,
            perturbation: self.perturbation,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Fully resolved configuration, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub suite: Suite,
    pub seed: u64,
    pub points: usize,
    pub fd_step: f64,
    pub tol: f64,
    pub jacobians: Jacobians,
    #[serde(rename = "D")]
    pub d: Option<[f64; 10]>,
    pub perturbation: Option<PerturbationSpec>,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        ConfigFile {
            suite: Some(suite),
            ..Default::default()
        }
        .resolve()
        .expect("defaults are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(QcError::Config("points must be at least 1".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step <= MAX_FD_STEP) {
            return Err(QcError::Config(format!("fd_step must lie in (0, {MAX_FD_STEP}]")));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(QcError::Config("tolerance must be positive and finite".into()));
        }
        if let Some(d) = &self.d {
            if d.iter().any(|v| !v.is_finite()) {
                return Err(QcError::Config("D entries must be finite".into()));
            }
        }
        if let Some(p) = &self.perturbation {
            p.validate()?;
        }
        Ok(())
    }

    pub fn d_matrix(&self) -> Option<QuatMatrix2> {
        self.d.as_ref().map(QuatMatrix2::skew_hermitian)
    }

    /// The configured perturbation, or a seeded random quadratic one of magnitude `1e-2`.
    pub fn perturbation_or_default(&self) -> PerturbationSpec {
        self.perturbation
            .clone()
            .unwrap_or_else(|| PerturbationSpec::random(self.seed, 2, 1e-2))
    }
}
