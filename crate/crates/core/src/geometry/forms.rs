//! Ambient one-form fields and their exterior derivatives.

use std::fmt::Debug;
use std::sync::Arc;

use super::poly::{Poly, PolyVector};
use super::surface::SquashedSphere;
use crate::quatalg::{hermitian, right_mul_matrix, AmbientMatrix, AmbientVector, Quaternion};

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// A one-form `theta_x(v) = c(x) . v` on an open set of `R^8`.
pub trait OneForm: Debug + Send + Sync {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector;

    /// `J_ab = d c_a / d x_b`, when known in closed form.
    fn jacobian(&self, _x: &AmbientVector) -> Option<AmbientMatrix> {
        None
    }
}

pub type FormRef = Arc<dyn OneForm>;

/// How Jacobians of coefficient functions are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JacobianPath {
    /// Closed form when the field provides one, otherwise central differences.
    Analytic,
    /// Always central differences with the given step.
    FiniteDifference(f64),
}

impl Default for JacobianPath {
    fn default() -> Self {
        JacobianPath::Analytic
    }
}

pub fn fd_jacobian(form: &dyn OneForm, x: &AmbientVector, h: f64) -> AmbientMatrix {
    let step = h * x.norm().max(1.0);
    let mut j = AmbientMatrix::zeros();
    for b in 0..8 {
        let mut xp = *x;
        let mut xm = *x;
        xp[b] += step;
        xm[b] -= step;
        let col = (form.coefficients(&xp) - form.coefficients(&xm)) / (2.0 * step);
        j.set_column(b, &col);
    }
    j
}

pub fn jacobian(form: &dyn OneForm, x: &AmbientVector, path: JacobianPath) -> AmbientMatrix {
    match path {
        JacobianPath::Analytic => form.jacobian(x).unwrap_or_else(|| fd_jacobian(form, x, FD_STEP)),
        JacobianPath::FiniteDifference(h) => fd_jacobian(form, x, h),
    }
}

/// Matrix `A` with `d theta_x(u, v) = u^T A v`.
pub fn exterior_derivative_matrix(form: &dyn OneForm, x: &AmbientVector, path: JacobianPath) -> AmbientMatrix {
    let j = jacobian(form, x, path);
    j.transpose() - j
}

/// `d theta_p(u, v) = u(theta(v)) - v(theta(u))` for constant extensions of `u, v`.
pub fn exterior_derivative(
    form: &dyn OneForm,
    p: &AmbientVector,
    u: &AmbientVector,
    v: &AmbientVector,
    path: JacobianPath,
) -> f64 {
    (u.transpose() * exterior_derivative_matrix(form, p, path) * v)[(0, 0)]
}

/// Central difference `(f(p + h d) - f(p - h d)) / 2h` along a unit-normalized
/// direction, rescaled to the length of `dir`.
pub fn directional<T, F>(f: F, p: &AmbientVector, dir: &AmbientVector, h: f64) -> T
where
    F: Fn(&AmbientVector) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let len = dir.norm();
    if len == 0.0 {
        return (f(p) - f(p)) * 0.0;
    }
    let d = dir / len;
    (f(&(p + d * h)) - f(&(p - d * h))) * (len / (2.0 * h))
}

/// `[X, Y] = D_X Y - D_Y X`, projected with `proj` (the tangent projector at `p`).
pub fn lie_bracket<X, Y>(x: X, y: Y, p: &AmbientVector, proj: &AmbientMatrix, h: f64) -> AmbientVector
where
    X: Fn(&AmbientVector) -> AmbientVector,
    Y: Fn(&AmbientVector) -> AmbientVector,
{
    let xp = x(p);
    let yp = y(p);
    let dxy = directional(&y, p, &xp, h);
    let dyx = directional(&x, p, &yp, h);
    proj * (dxy - dyx)
}

#[derive(Clone, Debug)]
pub struct ConstantForm(pub AmbientVector);

impl OneForm for ConstantForm {
    fn coefficients(&self, _x: &AmbientVector) -> AmbientVector {
        self.0
    }

    fn jacobian(&self, _x: &AmbientVector) -> Option<AmbientMatrix> {
        Some(AmbientMatrix::zeros())
    }
}

/// Polynomial coefficients with exact Jacobian.
#[derive(Clone, Debug)]
pub struct PolyForm(pub PolyVector);

impl PolyForm {
    /// The exact form `df`.
    pub fn exact(f: &Poly) -> Self {
        PolyForm(PolyVector::gradient_of(f))
    }
}

impl OneForm for PolyForm {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        self.0.eval(x)
    }

    fn jacobian(&self, x: &AmbientVector) -> Option<AmbientMatrix> {
        Some(self.0.jacobian(x))
    }
}

/// Same coefficients, Jacobian withheld so every consumer falls back to differences.
#[derive(Debug)]
pub struct WithoutJacobian(pub FormRef);

impl OneForm for WithoutJacobian {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        self.0.coefficients(x)
    }
}

/// `eta_i(v)_x = 1/2 <x q_i, v>` on `S^7`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    half_matrix: AmbientMatrix,
}

impl CanonicalForm {
    pub fn new(index: usize) -> Self {
        CanonicalForm {
            half_matrix: right_mul_matrix(Quaternion::imaginary_unit(index)) * 0.5,
        }
    }
}

impl OneForm for CanonicalForm {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        self.half_matrix * x
    }

    fn jacobian(&self, _x: &AmbientVector) -> Option<AmbientMatrix> {
        Some(self.half_matrix)
    }
}

/// Imaginary component `index` of `x* v - (x* D x / 4)(x* D v + v* D x)`.
#[derive(Clone, Debug)]
pub struct GalickiForm {
    surface: SquashedSphere,
    component: usize,
}

impl GalickiForm {
    pub fn new(surface: SquashedSphere, index: usize) -> Self {
        assert!(index < 3);
        GalickiForm {
            surface,
            component: index + 1,
        }
    }

    /// The quaternion-valued expression `phi_x(v)`.
    pub fn phi(surface: &SquashedSphere, x: &AmbientVector, v: &AmbientVector) -> Quaternion {
        let d = surface.d_real();
        let mu = hermitian(x, &(d * x));
        let cross = hermitian(x, &(d * v)) + hermitian(v, &(d * x));
        hermitian(x, v) - (mu * cross).scale(0.25)
    }

    /// Derivative of `phi_x(v)` with respect to `x` along `w`.
    pub fn phi_derivative(
        surface: &SquashedSphere,
        x: &AmbientVector,
        w: &AmbientVector,
        v: &AmbientVector,
    ) -> Quaternion {
        let d = surface.d_real();
        let (dx, dv, dw) = (d * x, d * v, d * w);
        let mu = hermitian(x, &dx);
        let dmu = hermitian(w, &dx) + hermitian(x, &dw);
        let cross = hermitian(x, &dv) + hermitian(v, &dx);
        let dcross = hermitian(w, &dv) + hermitian(v, &dw);
        hermitian(w, v) - (dmu * cross + mu * dcross).scale(0.25)
    }

    fn component(&self, q: Quaternion) -> f64 {
        q.to_array()[self.component]
    }
}

fn unit(a: usize) -> AmbientVector {
    let mut e = AmbientVector::zeros();
    e[a] = 1.0;
    e
}

impl OneForm for GalickiForm {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        AmbientVector::from_fn(|a, _| self.component(Self::phi(&self.surface, x, &unit(a))))
    }

    fn jacobian(&self, x: &AmbientVector) -> Option<AmbientMatrix> {
        Some(AmbientMatrix::from_fn(|a, b| {
            self.component(Self::phi_derivative(&self.surface, x, &unit(b), &unit(a)))
        }))
    }
}

/// `sum_k w_k theta_k`.
#[derive(Debug, Clone)]
pub struct LinearCombination {
    pub terms: Vec<(f64, FormRef)>,
}

impl OneForm for LinearCombination {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        self.terms
            .iter()
            .fold(AmbientVector::zeros(), |acc, (w, f)| acc + f.coefficients(x) * *w)
    }

    fn jacobian(&self, x: &AmbientVector) -> Option<AmbientMatrix> {
        let mut j = AmbientMatrix::zeros();
        for (w, f) in &self.terms {
            j += f.jacobian(x)? * *w;
        }
        Some(j)
    }
}

/// `f^2 theta` for a positive polynomial `f`.
#[derive(Debug, Clone)]
pub struct ConformalForm {
    pub base: FormRef,
    pub factor: Poly,
}

impl OneForm for ConformalForm {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        let f = self.factor.eval(x);
        self.base.coefficients(x) * (f * f)
    }

    fn jacobian(&self, x: &AmbientVector) -> Option<AmbientMatrix> {
        let f = self.factor.eval(x);
        let grad = self.factor.gradient(x);
        let c = self.base.coefficients(x);
        Some(self.base.jacobian(x)? * (f * f) + c * grad.transpose() * (2.0 * f))
    }
}

/// Orthogonal projector of `R^8` onto `(x H)^perp`, the canonical horizontal space
/// of the sphere through `x`.
pub fn canonical_horizontal_projector(x: &AmbientVector) -> AmbientMatrix {
    let r2 = x.norm_squared();
    let mut p = AmbientMatrix::identity();
    for k in 0..4 {
        let v = right_mul_matrix(Quaternion::basis(k)) * x;
        p -= v * v.transpose() / r2;
    }
    p
}

/// `theta^H = theta o Pi_H`: the form made to vanish on the canonical vertical space `x Im H`
/// and along the radial direction.
#[derive(Debug, Clone)]
pub struct HorizontalForm {
    pub inner: FormRef,
}

impl OneForm for HorizontalForm {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        canonical_horizontal_projector(x) * self.inner.coefficients(x)
    }

    fn jacobian(&self, x: &AmbientVector) -> Option<AmbientMatrix> {
        let theta = self.inner.coefficients(x);
        let mut j = canonical_horizontal_projector(x) * self.inner.jacobian(x)?;
        let r2 = x.norm_squared();
        for k in 0..4 {
            let m = right_mul_matrix(Quaternion::basis(k));
            let mx = m * x;
            let s = mx.dot(&theta);
            let mt_theta = m.transpose() * theta;
            // d/dx_b of -(M x)(M x)^T theta / |x|^2.
            j -= (m * s + mx * mt_theta.transpose()) / r2;
            j += mx * x.transpose() * (2.0 * s / (r2 * r2));
        }
        Some(j)
    }
}
