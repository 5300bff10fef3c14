//! Pointwise linear algebra of a contact triple at a point of a level set.

use nalgebra::{Matrix3, Matrix4, SMatrix, SVector, Vector4};

use super::metric::{gram, metric_from_triple, sorted_eigenvalues, CompatiblePack};
use super::triple::ContactTriple;
use crate::error::{QcError, Result};
use crate::geometry::{exterior_derivative_matrix, JacobianPath};
use crate::quatalg::{AmbientMatrix, AmbientVector};

pub type HorizontalBasis = SMatrix<f64, 8, 4>;

/// Everything at `q` that needs no derivative of the normalizer. Valid on the
/// level set through `q`, which extends all fields off the surface.
#[derive(Clone, Debug)]
pub struct LocalStructure {
    pub point: AmbientVector,
    pub normal: AmbientVector,
    pub coefficients: [AmbientVector; 3],
    /// `d eta_i(u, v) = u^T A_i v`.
    pub dforms: [AmbientMatrix; 3],
    /// Euclidean orthonormal basis of `H_q`, oriented so the triple is self-dual.
    pub basis: HorizontalBasis,
    pub pack: CompatiblePack,
}

impl LocalStructure {
    pub fn normalizer(&self) -> &Matrix3<f64> {
        &self.pack.normalizer
    }

    /// `I_i` as endomorphisms of `R^8` supported on `H_q`.
    pub fn ambient_complex(&self, i: usize) -> AmbientMatrix {
        self.basis * self.pack.complex[i] * self.basis.transpose()
    }

    /// `g` on `H_q`, extended by zero.
    pub fn ambient_metric(&self) -> AmbientMatrix {
        self.basis * self.pack.metric * self.basis.transpose()
    }

    /// Euclidean projector onto `H_q`.
    pub fn horizontal_projector(&self) -> AmbientMatrix {
        self.basis * self.basis.transpose()
    }

    pub fn tangent_projector(&self) -> AmbientMatrix {
        AmbientMatrix::identity() - self.normal * self.normal.transpose()
    }

    /// `g`-orthonormal frame `(h_1, -I_1 h_1, -I_2 h_1, -I_3 h_1)` seeded by the
    /// coordinate axis `seed`; in it `-I_i` is left multiplication by `q_i`.
    pub fn frame(&self, seed: usize) -> [AmbientVector; 4] {
        let s: Vector4<f64> = self.basis.row(seed).transpose();
        let x = s / (s.transpose() * self.pack.metric * s)[(0, 0)].sqrt();
        let coords = [
            x,
            -self.pack.complex[0] * x,
            -self.pack.complex[1] * x,
            -self.pack.complex[2] * x,
        ];
        coords.map(|c| self.basis * c)
    }

    /// First coordinate axis whose Euclidean projection onto `H_q` is long enough
    /// to seed a well-conditioned frame.
    pub fn seed_axis(&self) -> usize {
        let norms: Vec<f64> = (0..8).map(|k| self.basis.row(k).norm()).collect();
        (0..8)
            .find(|&k| norms[k] > 0.3)
            .unwrap_or_else(|| (0..8).max_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap())
    }
}

/// Greedy Gram-Schmidt completion of `span(known)` by coordinate axes, largest residual first.
fn complete_basis(known: &[AmbientVector]) -> Vec<AmbientVector> {
    let mut all: Vec<AmbientVector> = Vec::new();
    for v in known {
        let mut w = *v;
        for _ in 0..2 {
            for u in &all {
                w -= u * u.dot(&w);
            }
        }
        all.push(w.normalize());
    }
    let mut added = Vec::new();
    while all.len() < 8 {
        let mut best: Option<(f64, AmbientVector)> = None;
        for k in 0..8 {
            let mut w = AmbientVector::zeros();
            w[k] = 1.0;
            for _ in 0..2 {
                for u in &all {
                    w -= u * u.dot(&w);
                }
            }
            let n = w.norm();
            if best.map_or(true, |(b, _)| n > b + 1e-12) {
                best = Some((n, w / n));
            }
        }
        let v = best.unwrap().1;
        all.push(v);
        added.push(v);
    }
    added
}

/// Euclidean orthonormal basis of `{n, c_1, c_2, c_3}^perp`.
pub fn horizontal_basis(normal: &AmbientVector, coefficients: &[AmbientVector; 3]) -> Result<HorizontalBasis> {
    let k = SMatrix::<f64, 8, 4>::from_columns(&[
        normal.normalize(),
        coefficients[0].normalize(),
        coefficients[1].normalize(),
        coefficients[2].normalize(),
    ]);
    let sv: SVector<f64, 4> = k.svd(false, false).singular_values;
    let rank = sv.iter().filter(|&&s| s > 1e-8 * sv.max()).count();
    if rank != 4 || coefficients.iter().any(|c| !(c.norm() > 0.0)) {
        return Err(QcError::NotCodimensionThree(8 - rank));
    }
    let added = complete_basis(&[*normal, coefficients[0], coefficients[1], coefficients[2]]);
    Ok(HorizontalBasis::from_columns(&added))
}

fn restrict(a: &AmbientMatrix, e: &HorizontalBasis) -> Matrix4<f64> {
    let m = e.transpose() * a * e;
    (m - m.transpose()) * 0.5
}

/// Restricted two-forms in a basis whose orientation makes their Gram matrix positive,
/// flipping the last basis vector when needed.
fn oriented_forms(dforms: &[AmbientMatrix; 3], basis: &mut HorizontalBasis) -> Result<[Matrix4<f64>; 3]> {
    let w = dforms.map(|a| restrict(&a, basis));
    let ev = sorted_eigenvalues(&gram(&w));
    if ev[0] > 0.0 {
        return Ok(w);
    }
    if ev[2] < 0.0 {
        let mut col = basis.column_mut(3);
        col.neg_mut();
        return Ok(dforms.map(|a| restrict(&a, basis)));
    }
    Err(QcError::IndefiniteGram(ev))
}

pub fn local_structure(ct: &ContactTriple, q: &AmbientVector, path: JacobianPath) -> Result<LocalStructure> {
    let normal = ct.surface.unit_normal(q)?;
    let coefficients = ct.coefficients(q);
    let dforms = std::array::from_fn(|i| exterior_derivative_matrix(ct.forms[i].as_ref(), q, path));
    let mut basis = horizontal_basis(&normal, &coefficients)?;
    let w = oriented_forms(&dforms, &mut basis)?;
    let pack = metric_from_triple(&w)?;
    Ok(LocalStructure {
        point: *q,
        normal,
        coefficients,
        dforms,
        basis,
        pack,
    })
}

/// Outcome of the pointwise definiteness test.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    /// Eigenvalues of `(w_i ^ w_j) / (2 vol)` against the Euclidean volume of `H`,
    /// in the orientation making them positive when definite.
    pub eigenvalues: [f64; 3],
    pub positive_definite: bool,
    pub orientation_ok: bool,
    /// Largest `|Re phi(v)|` coefficient over the tangent space, when the triple carries such a check.
    pub tangent_null_defect: Option<f64>,
}

impl GramReport {
    pub fn is_qc(&self) -> bool {
        self.positive_definite && self.orientation_ok && self.tangent_null_defect.map_or(true, |d| d < 1e-10)
    }
}

pub fn validate_qc(ct: &ContactTriple, p: &AmbientVector, path: JacobianPath) -> Result<GramReport> {
    let proj = ct.surface.tangent_projector(p)?;
    let tangent_null_defect = ct.tangent_null.as_ref().map(|f| (proj * f.coefficients(p)).norm());
    let normal = ct.surface.unit_normal(p)?;
    let coefficients = ct.coefficients(p);
    let dforms = std::array::from_fn(|i| exterior_derivative_matrix(ct.forms[i].as_ref(), p, path));
    let mut basis = horizontal_basis(&normal, &coefficients)?;
    match oriented_forms(&dforms, &mut basis) {
        Ok(w) => {
            let pack = metric_from_triple(&w)?;
            Ok(GramReport {
                eigenvalues: pack.gram_eigenvalues,
                positive_definite: true,
                orientation_ok: pack.orientation_ok,
                tangent_null_defect,
            })
        }
        Err(QcError::IndefiniteGram(ev)) => Ok(GramReport {
            eigenvalues: ev,
            positive_definite: false,
            orientation_ok: false,
            tangent_null_defect,
        }),
        Err(e) => Err(e),
    }
}
