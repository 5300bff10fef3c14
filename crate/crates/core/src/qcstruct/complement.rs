//! Complements of `H`, the covectors `alpha_ij`, vertical torsion and the
//! integrability residual.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Matrix3, SMatrix, Vector3, Vector4};

use super::local::{local_structure, validate_qc, LocalStructure};
use super::triple::ContactTriple;
use crate::error::{QcError, Result};
use crate::geometry::{JacobianPath, Poly, FD_STEP};
use crate::quatalg::AmbientVector;
use crate::rep4::{quaternionic_triple, torsion_projectors, SymFamily, TORSION_DIM};
use nalgebra::Matrix4;

/// Default residual thresholds for closed-form and difference Jacobians.
pub const ANALYTIC_THRESHOLD: f64 = 1e-6;
pub const FD_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub path: JacobianPath,
    /// Step for differentiating the pointwise normalizer along `H`.
    pub fd_step: f64,
    /// Coordinate axis seeding the horizontal frame; chosen per point when absent.
    pub seed_axis: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            path: JacobianPath::Analytic,
            fd_step: FD_STEP,
            seed_axis: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplementKind {
    /// Euclidean orthogonal complement of `H` in the tangent space.
    Orthogonal,
    /// Spanned by caller-supplied vectors.
    Hinted,
    /// The unique complement with torsion in `S^{5,1}`.
    Adapted,
}

#[derive(Clone, Debug)]
pub struct FramePack {
    pub local: LocalStructure,
    pub seed: usize,
    /// `g`-orthonormal frame of `H` in which `I_i` is [`frame_complex`].
    pub h: [AmbientVector; 4],
    /// `eta~_j(R_i) = delta_ij` for the normalized triple `eta~ = N eta`.
    pub reeb: [AmbientVector; 3],
    /// `alpha[i][j][b] = d eta~_j(R_i, h_b)`.
    pub alpha: [[Vector4<f64>; 3]; 3],
    /// `h_b(N)`, derivative of the normalizer along each frame vector.
    pub normalizer_derivative: [Matrix3<f64>; 4],
    pub complement: ComplementKind,
    /// Horizontal shift `r_i` (frame coordinates) applied to reach the adapted complement.
    pub shift: Option<[Vector4<f64>; 3]>,
}

impl FramePack {
    pub fn point(&self) -> &AmbientVector {
        &self.local.point
    }

    /// `(eta~_1(v), eta~_2(v), eta~_3(v))`.
    pub fn eta(&self, v: &AmbientVector) -> Vector3<f64> {
        let raw = Vector3::from_fn(|k, _| self.local.coefficients[k].dot(v));
        self.local.normalizer() * raw
    }

    /// Projection of a tangent vector onto `H` along the complement.
    pub fn horizontal_part(&self, u: &AmbientVector) -> AmbientVector {
        let e = self.eta(u);
        let mut out = *u;
        for i in 0..3 {
            out -= self.reeb[i] * e[i];
        }
        out
    }

    /// Frame coordinates `g(u_H, h_a)` of the horizontal part.
    pub fn frame_coords(&self, u: &AmbientVector) -> Vector4<f64> {
        let uh = self.horizontal_part(u);
        let g = self.local.ambient_metric();
        Vector4::from_fn(|a, _| self.h[a].dot(&(g * uh)))
    }

    pub fn torsion(&self) -> TorsionElement {
        let family = SymFamily::from_fn(|i, j| self.alpha[i][j] + self.alpha[j][i]);
        TorsionElement {
            coords: family.to_coords(),
            family,
            complement: self.complement,
        }
    }

    /// `d eta~_j(u, v)` for tangent `u, v` at the base point, including the
    /// normalizer's derivative along horizontal `v`.
    pub fn d_eta(&self, j: usize, u: &AmbientVector, v: &AmbientVector) -> f64 {
        let n = self.local.normalizer();
        (0..3).map(|k| n[(j, k)] * (u.transpose() * self.local.dforms[k] * v)[(0, 0)]).sum()
    }
}

/// Symmetrized torsion `t_ij = alpha_ij + alpha_ji` in frame coordinates.
#[derive(Clone, Debug)]
pub struct TorsionElement {
    pub family: SymFamily,
    pub coords: DVector<f64>,
    pub complement: ComplementKind,
}

impl TorsionElement {
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn s51(&self) -> DVector<f64> {
        torsion_projectors().projector(5, 1).unwrap() * &self.coords
    }

    pub fn part(&self, n: u32) -> DVector<f64> {
        torsion_projectors().projector(n, 1).unwrap() * &self.coords
    }
}

fn normalizer_at(ct: &ContactTriple, q: &AmbientVector, path: JacobianPath) -> Result<Matrix3<f64>> {
    Ok(*local_structure(ct, q, path)?.normalizer())
}

fn normalizer_derivative(
    ct: &ContactTriple,
    p: &AmbientVector,
    dir: &AmbientVector,
    opts: &PipelineOptions,
) -> Result<Matrix3<f64>> {
    let len = dir.norm();
    let d = dir / len;
    let step = opts.fd_step;
    let plus = normalizer_at(ct, &(p + d * step), opts.path)?;
    let minus = normalizer_at(ct, &(p - d * step), opts.path)?;
    Ok((plus - minus) * (len / (2.0 * step)))
}

/// Dual basis `R_i` of the normalized forms on the Euclidean orthogonal
/// complement of `H`, or on the span of `hint` when given.
pub fn dual_complement(
    ct: &ContactTriple,
    p: &AmbientVector,
    hint: Option<&[AmbientVector; 3]>,
    opts: &PipelineOptions,
) -> Result<FramePack> {
    ct.surface.check_on_surface(p)?;
    dual_complement_extended(ct, p, hint, opts)
}

/// [`dual_complement`] on the level set through `p`, which need not be the surface;
/// used for finite-difference stencils.
pub fn dual_complement_extended(
    ct: &ContactTriple,
    p: &AmbientVector,
    hint: Option<&[AmbientVector; 3]>,
    opts: &PipelineOptions,
) -> Result<FramePack> {
    let local = local_structure(ct, p, opts.path)?;
    if !local.pack.orientation_ok {
        return Err(QcError::OrientationMismatch);
    }
    let n = *local.normalizer();
    let n_inv = n.try_inverse().ok_or(QcError::DegenerateComplement)?;
    let proj = local.tangent_projector();
    let raw = SMatrix::<f64, 8, 3>::from_columns(&local.coefficients);
    let (vectors, kind) = match hint {
        None => (proj * raw, ComplementKind::Orthogonal),
        Some(v) => (SMatrix::<f64, 8, 3>::from_columns(v), ComplementKind::Hinted),
    };
    let pairing = n * raw.transpose() * vectors;
    let sv = pairing.svd(false, false).singular_values;
    if !(sv.min() > 1e-10 * sv.max().max(1e-300)) {
        return Err(QcError::DegenerateComplement);
    }
    let reeb_m = vectors * pairing.try_inverse().ok_or(QcError::DegenerateComplement)?;
    let reeb: [AmbientVector; 3] = std::array::from_fn(|i| reeb_m.column(i).into_owned());

    let seed = opts.seed_axis.unwrap_or_else(|| local.seed_axis());
    let h = local.frame(seed);
    let mut dn = [Matrix3::zeros(); 4];
    for b in 0..4 {
        dn[b] = normalizer_derivative(ct, p, &h[b], opts)?;
    }
    let alpha = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            Vector4::from_fn(|b, _| {
                let mut v = 0.0;
                for k in 0..3 {
                    v += n[(j, k)] * (reeb[i].transpose() * local.dforms[k] * h[b])[(0, 0)];
                    v -= dn[b][(j, k)] * n_inv[(k, i)];
                }
                v
            })
        })
    });
    Ok(FramePack {
        local,
        seed,
        h,
        reeb,
        alpha,
        normalizer_derivative: dn,
        complement: kind,
        shift: None,
    })
}

/// `I_i` in the frame of [`FramePack::h`]: minus left multiplication by `q_i`.
pub fn frame_complex() -> [Matrix4<f64>; 3] {
    quaternionic_triple().map(|m| -m)
}

/// Linear map `(r_1, r_2, r_3) -> (I_j r_i + I_i r_j)_ij` into the torsion space, 24 x 12.
pub fn shift_matrix() -> &'static DMatrix<f64> {
    static L: OnceLock<DMatrix<f64>> = OnceLock::new();
    L.get_or_init(|| {
        let triple = frame_complex();
        let mut m = DMatrix::zeros(TORSION_DIM, 12);
        for i in 0..3 {
            for a in 0..4 {
                let e = Vector4::from_fn(|k, _| (k == a) as u8 as f64);
                let fam = SymFamily::from_fn(|k, l| {
                    let mut v = Vector4::zeros();
                    if k == i {
                        v += triple[l] * e;
                    }
                    if l == i {
                        v += triple[k] * e;
                    }
                    v
                });
                m.set_column(i * 4 + a, &fam.to_coords());
            }
        }
        m
    })
}

/// Shifts `R_i` by horizontal `r_i` so the symmetrized torsion lies in `S^{5,1}`.
pub fn adapt(pack: FramePack) -> Result<FramePack> {
    let t = pack.torsion();
    let rest = &t.coords - t.s51();
    let l = shift_matrix();
    let svd = l.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-8 {
        return Err(QcError::SingularShift);
    }
    let rho = svd.solve(&(-rest), 1e-13).map_err(|_| QcError::SingularShift)?;
    let shift: [Vector4<f64>; 3] = std::array::from_fn(|i| Vector4::from_fn(|a, _| rho[i * 4 + a]));
    let triple = frame_complex();
    let mut out = pack;
    for i in 0..3 {
        let r: AmbientVector = (0..4).map(|a| out.h[a] * shift[i][a]).sum();
        out.reeb[i] += r;
        for j in 0..3 {
            out.alpha[i][j] += triple[j] * shift[i];
        }
    }
    out.complement = ComplementKind::Adapted;
    out.shift = Some(shift);
    Ok(out)
}

pub fn adapted_complement(ct: &ContactTriple, p: &AmbientVector, opts: &PipelineOptions) -> Result<FramePack> {
    adapt(dual_complement(ct, p, None, opts)?)
}

/// [`adapted_complement`] on the level set through `p`.
pub fn adapted_complement_extended(ct: &ContactTriple, p: &AmbientVector, opts: &PipelineOptions) -> Result<FramePack> {
    adapt(dual_complement_extended(ct, p, None, opts)?)
}

pub fn vertical_torsion(pack: &FramePack) -> TorsionElement {
    pack.torsion()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityResidual {
    /// `|P51 t|`.
    pub raw: f64,
    /// `|P51 t| / (1 + |t|)`.
    pub normalized: f64,
    pub torsion_norm: f64,
    pub gram_eigenvalues: [f64; 3],
}

pub fn integrability_residual(
    ct: &ContactTriple,
    p: &AmbientVector,
    opts: &PipelineOptions,
) -> Result<IntegrabilityResidual> {
    let report = validate_qc(ct, p, opts.path)?;
    if !report.positive_definite {
        return Err(QcError::IndefiniteGram(report.eigenvalues));
    }
    if !report.orientation_ok {
        return Err(QcError::OrientationMismatch);
    }
    let pack = adapted_complement(ct, p, opts)?;
    let t = pack.torsion();
    let raw = t.s51().norm();
    Ok(IntegrabilityResidual {
        raw,
        normalized: raw / (1.0 + t.norm()),
        torsion_norm: t.norm(),
        gram_eigenvalues: report.eigenvalues,
    })
}

/// Adapted complement of `f^2 eta` predicted from that of `eta`:
/// `R'_i = f^-2 (R_i + r_i)` with `r_i = -2 I_i grad_H f / f`.
pub fn predicted_conformal_complement(pack: &FramePack, f: &Poly) -> [AmbientVector; 3] {
    let p = pack.point();
    let fv = f.eval(p);
    let grad = f.gradient(p);
    let grad_h: AmbientVector = (0..4).map(|a| pack.h[a] * pack.h[a].dot(&grad)).sum();
    std::array::from_fn(|i| {
        let r = pack.local.ambient_complex(i) * grad_h * (-2.0 / fv);
        (pack.reeb[i] + r) / (fv * fv)
    })
}
