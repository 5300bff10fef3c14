use std::sync::Arc;

use nalgebra::Matrix3;

use crate::geometry::{
    CanonicalForm, ConformalForm, FormRef, GalickiForm, HorizontalForm, LevelSurface, LinearCombination, OneForm,
    Poly, SquashedSphere, WithoutJacobian,
};
use crate::quatalg::{AmbientVector, QuatMatrix2};

/// Three ambient one-forms whose common kernel on the surface is the distribution.
#[derive(Clone, Debug)]
pub struct ContactTriple {
    pub surface: LevelSurface,
    pub forms: [FormRef; 3],
    /// A form that must vanish on the tangent space (the real part of the
    /// Galicki expression); checked, not assumed.
    pub tangent_null: Option<FormRef>,
}

impl ContactTriple {
    pub fn new(surface: LevelSurface, forms: [FormRef; 3]) -> Self {
        ContactTriple {
            surface,
            forms,
            tangent_null: None,
        }
    }

    /// `eta_i(v)_x = 1/2 <x q_i, v>` on the round sphere.
    pub fn canonical() -> Self {
        Self::new(
            LevelSurface::Sphere,
            std::array::from_fn(|i| Arc::new(CanonicalForm::new(i)) as FormRef),
        )
    }

    /// The structure `H^D` on `S^D`.
    pub fn galicki(d: QuatMatrix2) -> Self {
        let sq = SquashedSphere::new(d);
        let forms = std::array::from_fn(|i| Arc::new(GalickiForm::new(sq.clone(), i)) as FormRef);
        let mut t = Self::new(LevelSurface::Squashed(sq.clone()), forms);
        t.tangent_null = Some(Arc::new(GalickiRealPart(sq)));
        t
    }

    /// `eta_i + eps theta_i^H` with `theta^H` the canonical-horizontal part of `theta`.
    pub fn perturbed(&self, theta: &[FormRef; 3], eps: f64) -> Self {
        let forms = std::array::from_fn(|i| {
            let horizontal: FormRef = Arc::new(HorizontalForm {
                inner: theta[i].clone(),
            });
            Arc::new(LinearCombination {
                terms: vec![(1.0, self.forms[i].clone()), (eps, horizontal)],
            }) as FormRef
        });
        self.with_forms(forms)
    }

    /// `(f^2 eta_1, f^2 eta_2, f^2 eta_3)`.
    pub fn conformal_rescale(&self, f: &Poly) -> Self {
        let forms = std::array::from_fn(|i| {
            Arc::new(ConformalForm {
                base: self.forms[i].clone(),
                factor: f.clone(),
            }) as FormRef
        });
        self.with_forms(forms)
    }

    /// `eta'_i = sum_j A_ij eta_j` for a constant matrix.
    pub fn mixed(&self, a: &Matrix3<f64>) -> Self {
        let forms = std::array::from_fn(|i| {
            Arc::new(LinearCombination {
                terms: (0..3).map(|j| (a[(i, j)], self.forms[j].clone())).collect(),
            }) as FormRef
        });
        self.with_forms(forms)
    }

    /// Same forms with closed-form Jacobians hidden.
    pub fn without_jacobians(&self) -> Self {
        let forms = std::array::from_fn(|i| Arc::new(WithoutJacobian(self.forms[i].clone())) as FormRef);
        self.with_forms(forms)
    }

    fn with_forms(&self, forms: [FormRef; 3]) -> Self {
        ContactTriple {
            surface: self.surface.clone(),
            forms,
            tangent_null: self.tangent_null.clone(),
        }
    }

    pub fn coefficients(&self, x: &AmbientVector) -> [AmbientVector; 3] {
        std::array::from_fn(|i| self.forms[i].coefficients(x))
    }
}

/// Real part of the Galicki expression, `v -> Re phi_x(v)`, equal to `dF / 2`.
#[derive(Clone, Debug)]
struct GalickiRealPart(SquashedSphere);

impl OneForm for GalickiRealPart {
    fn coefficients(&self, x: &AmbientVector) -> AmbientVector {
        AmbientVector::from_fn(|a, _| {
            let mut e = AmbientVector::zeros();
            e[a] = 1.0;
            GalickiForm::phi(&self.0, x, &e).w
        })
    }
}
