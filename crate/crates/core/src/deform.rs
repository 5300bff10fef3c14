//! Linearized deformation theory of the canonical structure on the round sphere.

use std::sync::Arc;

use nalgebra::{DVector, Matrix3, Matrix4, Vector4};
use rand::Rng;

use crate::error::Result;
use crate::geometry::{
    directional, exterior_derivative_matrix, FormRef, HorizontalForm, JacobianPath, Poly, PolyForm,
    PolyVector,
};
use crate::qcstruct::{adapted_complement, local_structure, wedge, ContactTriple, FramePack, PipelineOptions};
use crate::quatalg::{right_mul_matrix, AmbientMatrix, AmbientVector, Quaternion, QuatMatrix2};
use crate::rep4::{torsion_projectors, SymFamily};

/// Step for derivatives of the normalization correction, which is itself built
/// from finite differences.
pub const TRACE_FD_STEP: f64 = 1e-4;

/// A `W`-valued one-form vanishing on `W`: three covectors `theta_i` on `H`,
/// represented by ambient forms composed with the canonical horizontal projector.
#[derive(Clone, Debug)]
pub struct DeformationField {
    pub raw: [FormRef; 3],
    horizontal: [FormRef; 3],
}

impl DeformationField {
    pub fn new(raw: [FormRef; 3]) -> Self {
        let horizontal = std::array::from_fn(|i| Arc::new(HorizontalForm { inner: raw[i].clone() }) as FormRef);
        DeformationField { raw, horizontal }
    }

    pub fn polynomial(coefficients: [PolyVector; 3]) -> Self {
        Self::new(coefficients.map(|c| Arc::new(PolyForm(c)) as FormRef))
    }

    pub fn zero() -> Self {
        Self::polynomial(std::array::from_fn(|_| PolyVector::default()))
    }

    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        Self::polynomial(std::array::from_fn(|_| PolyVector::random(rng, degree)))
    }

    pub fn horizontal(&self) -> &[FormRef; 3] {
        &self.horizontal
    }

    /// `theta_i(v)` at `p`.
    pub fn value(&self, p: &AmbientVector, v: &AmbientVector) -> [f64; 3] {
        std::array::from_fn(|i| self.horizontal[i].coefficients(p).dot(v))
    }

    /// Matrix of `d theta_i` at `p`.
    pub fn d_matrix(&self, i: usize, p: &AmbientVector) -> AmbientMatrix {
        exterior_derivative_matrix(self.horizontal[i].as_ref(), p, JacobianPath::Analytic)
    }

    /// The canonical structure deformed to `eta + t theta`.
    pub fn deformed_canonical(&self, t: f64) -> ContactTriple {
        ContactTriple::canonical().perturbed(&self.raw, t)
    }

    /// `a self + b other`.
    pub fn combine(&self, a: f64, other: &DeformationField, b: f64) -> Self {
        Self::new(std::array::from_fn(|i| {
            Arc::new(crate::geometry::LinearCombination {
                terms: vec![(a, self.raw[i].clone()), (b, other.raw[i].clone())],
            }) as FormRef
        }))
    }
}

/// Linearized normalization at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSolveResult {
    /// `s_ij = (d theta_i ^ d eta_j + d theta_j ^ d eta_i)|_H / nu^c`.
    pub source: Matrix3<f64>,
    pub a_sym: Matrix3<f64>,
    pub trace: f64,
}

impl TraceSolveResult {
    /// Largest entry of `a + a^T + s + tr(a) delta`.
    pub fn relation_residual(&self) -> f64 {
        (self.a_sym * 2.0 + self.source + Matrix3::identity() * self.trace).amax()
    }
}

fn restrict(a: &AmbientMatrix, e: &crate::qcstruct::HorizontalBasis) -> Matrix4<f64> {
    let m = e.transpose() * a * e;
    (m - m.transpose()) * 0.5
}

/// Solves `a_ij + a_ji + s_ij + tr(a) delta_ij = 0` for the symmetric part and
/// trace of `a`. Four-forms on `H` are read as functions through `nu^c`, fixed
/// by `d eta_1 ^ d eta_1 = nu^c` on `H`.
pub fn solve_trace(theta: &DeformationField, p: &AmbientVector) -> Result<TraceSolveResult> {
    let local = local_structure(&ContactTriple::canonical(), p, JacobianPath::Analytic)?;
    let w = &local.pack.w;
    let wd: [Matrix4<f64>; 3] = std::array::from_fn(|i| restrict(&theta.d_matrix(i, p), &local.basis));
    let nu = wedge(&w[0], &w[0]);
    let source = Matrix3::from_fn(|i, j| (wedge(&wd[i], &w[j]) + wedge(&w[i], &wd[j])) / nu);
    let trace = -source.trace() / 5.0;
    let a_sym = -(source + Matrix3::identity() * trace) * 0.5;
    Ok(TraceSolveResult { source, a_sym, trace })
}

/// `A_0(theta)` and its `S^{5,1}` part at a point of the sphere.
#[derive(Clone, Debug)]
pub struct LinearizedTorsion {
    pub a0: SymFamily,
    pub coords: DVector<f64>,
    pub s51: DVector<f64>,
}

impl LinearizedTorsion {
    pub fn norm(&self) -> f64 {
        self.s51.norm()
    }
}

fn canonical_pack(p: &AmbientVector) -> Result<FramePack> {
    adapted_complement(&ContactTriple::canonical(), p, &PipelineOptions::default())
}

/// `A_0(theta) = -d(a_ij + a_ji)|_H + (i_{R_i} d theta_j + i_{R_j} d theta_i)|_H`
/// in the adapted canonical frame at `p`.
pub fn a0_operator(theta: &DeformationField, p: &AmbientVector) -> Result<SymFamily> {
    let pack = canonical_pack(p)?;
    let mut da = [Matrix3::zeros(); 4];
    for b in 0..4 {
        let len = pack.h[b].norm();
        let d = pack.h[b] / len;
        let plus = solve_trace(theta, &(p + d * TRACE_FD_STEP))?;
        let minus = solve_trace(theta, &(p - d * TRACE_FD_STEP))?;
        // h_b(a_ij + a_ji), twice the central difference of the symmetric part.
        da[b] = (plus.a_sym - minus.a_sym) * (len / TRACE_FD_STEP);
    }
    let dtheta: [AmbientMatrix; 3] = std::array::from_fn(|i| theta.d_matrix(i, p));
    let contract = |i: usize, j: usize, b: usize| (pack.reeb[i].transpose() * dtheta[j] * pack.h[b])[(0, 0)];
    Ok(SymFamily::from_fn(|i, j| {
        Vector4::from_fn(|b, _| -da[b][(i, j)] + contract(i, j, b) + contract(j, i, b))
    }))
}

/// `A = P51 o A_0`.
pub fn a_operator(theta: &DeformationField, p: &AmbientVector) -> Result<LinearizedTorsion> {
    let a0 = a0_operator(theta, p)?;
    let coords = a0.to_coords();
    let s51 = torsion_projectors().projector(5, 1).unwrap() * &coords;
    Ok(LinearizedTorsion { a0, coords, s51 })
}

/// `D(zeta)`: the horizontal part of `L_zeta eta`, as a polynomial deformation
/// for a polynomial field `zeta`.
pub fn diffeo_deformation(zeta: &PolyVector) -> DeformationField {
    DeformationField::polynomial(std::array::from_fn(|i| {
        let m = right_mul_matrix(Quaternion::imaginary_unit(i));
        let eta_zeta: Poly = PolyVector::linear(&(m * 0.5)).dot(zeta);
        PolyVector::gradient_of(&eta_zeta).add(&zeta.left_mul(&m))
    }))
}

/// `X -> X.eta_i(zeta) + d eta_i(zeta, X)` on the canonical frame at `p`, by
/// central differences for the first term.
pub fn diffeo_to_deformation<Z>(zeta: Z, p: &AmbientVector) -> Result<[Vector4<f64>; 3]>
where
    Z: Fn(&AmbientVector) -> AmbientVector,
{
    let ct = ContactTriple::canonical();
    let pack = canonical_pack(p)?;
    let z = zeta(p);
    Ok(std::array::from_fn(|i| {
        let form = &ct.forms[i];
        let d = exterior_derivative_matrix(form.as_ref(), p, JacobianPath::Analytic);
        Vector4::from_fn(|b, _| {
            let h = pack.h[b];
            let lie = directional(|q: &AmbientVector| form.coefficients(q).dot(&zeta(q)), p, &h, TRACE_FD_STEP);
            lie + (z.transpose() * d * h)[(0, 0)]
        })
    }))
}

/// Tangent field `x -> K(x) x` for an antisymmetric matrix `K` with polynomial
/// entries of degree at most `degree`.
pub fn random_tangent_field<R: Rng>(rng: &mut R, degree: u32) -> PolyVector {
    let mut k: Vec<Vec<Poly>> = vec![vec![Poly::zero(); 8]; 8];
    for a in 0..8 {
        for b in a + 1..8 {
            let e = Poly::random(rng, degree);
            k[b][a] = e.scale(-1.0);
            k[a][b] = e;
        }
    }
    PolyVector {
        components: std::array::from_fn(|a| {
            (0..8).fold(Poly::zero(), |acc, b| acc.add(&k[a][b].mul(&Poly::coordinate(b))))
        }),
    }
}

/// Infinitesimal `Sp(2)` action `x -> D x` for skew-hermitian `D`.
pub fn symmetry_field(d: &QuatMatrix2) -> PolyVector {
    PolyVector::linear(&d.real_matrix())
}
