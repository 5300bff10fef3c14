//! Hypersurfaces `F = 1` in `R^8`.

use crate::error::{QcError, Result};
use crate::quatalg::{hermitian, right_mul_matrix, AmbientMatrix, AmbientVector, QuatMatrix2, Quaternion};

const ON_SURFACE_TOL: f64 = 1e-10;
const RETRACT_TOL: f64 = 1e-13;
const RETRACT_MAX_ITER: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub enum LevelSurface {
    /// The unit sphere `|x|^2 = 1`.
    Sphere,
    /// `|x|^2 + |x* D x|^2 / 4 = 1` for `D` in `sp(2)`.
    Squashed(SquashedSphere),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquashedSphere {
    pub d: QuatMatrix2,
    d_real: AmbientMatrix,
    /// `M_k^T D + D^T M_k`, so the gradient of the `k`-th component of `x* D x` is `sym[k] x`.
    sym: [AmbientMatrix; 4],
}

impl SquashedSphere {
    pub fn new(d: QuatMatrix2) -> Self {
        let d_real = d.real_matrix();
        let sym = std::array::from_fn(|k| {
            let m = right_mul_matrix(Quaternion::basis(k));
            m.transpose() * d_real + d_real.transpose() * m
        });
        SquashedSphere { d, d_real, sym }
    }

    pub fn d_real(&self) -> &AmbientMatrix {
        &self.d_real
    }

    /// The quaternion `x* D x`.
    pub fn moment(&self, x: &AmbientVector) -> Quaternion {
        hermitian(x, &(self.d_real * x))
    }
}

impl LevelSurface {
    pub fn squashed(d: QuatMatrix2) -> Self {
        LevelSurface::Squashed(SquashedSphere::new(d))
    }

    pub fn value(&self, x: &AmbientVector) -> f64 {
        match self {
            LevelSurface::Sphere => x.norm_squared(),
            LevelSurface::Squashed(s) => x.norm_squared() + s.moment(x).norm_squared() / 4.0,
        }
    }

    pub fn gradient(&self, x: &AmbientVector) -> AmbientVector {
        match self {
            LevelSurface::Sphere => x * 2.0,
            LevelSurface::Squashed(s) => {
                let mu = s.moment(x).to_array();
                let mut g = x * 2.0;
                for k in 0..4 {
                    g += (s.sym[k] * x) * (mu[k] / 2.0);
                }
                g
            }
        }
    }

    /// Unit normal of the level set through `x` (not necessarily the `F = 1` set).
    pub fn unit_normal(&self, x: &AmbientVector) -> Result<AmbientVector> {
        let g = self.gradient(x);
        let n = g.norm();
        if !(n > 1e-12) {
            return Err(QcError::SingularPoint);
        }
        Ok(g / n)
    }

    pub fn check_on_surface(&self, p: &AmbientVector) -> Result<()> {
        let defect = (self.value(p) - 1.0).abs();
        if defect > ON_SURFACE_TOL || !defect.is_finite() {
            return Err(QcError::OffSurface(defect));
        }
        Ok(())
    }

    /// Orthogonal projector onto `ker dF_p` for `p` on the surface.
    pub fn tangent_projector(&self, p: &AmbientVector) -> Result<AmbientMatrix> {
        self.check_on_surface(p)?;
        self.level_projector(p)
    }

    /// Tangent projector of the level set through `x`, used to extend fields off the surface.
    pub fn level_projector(&self, x: &AmbientVector) -> Result<AmbientMatrix> {
        let n = self.unit_normal(x)?;
        Ok(AmbientMatrix::identity() - n * n.transpose())
    }

    /// Newton iteration along the gradient onto `F = 1`.
    pub fn retract(&self, p: &AmbientVector) -> Result<AmbientVector> {
        if let LevelSurface::Sphere = self {
            let n = p.norm();
            if !(n > 1e-12) || !n.is_finite() {
                return Err(QcError::RetractionFailed);
            }
            return Ok(p / n);
        }
        let mut x = *p;
        for _ in 0..RETRACT_MAX_ITER {
            let f = self.value(&x) - 1.0;
            if !f.is_finite() {
                return Err(QcError::RetractionFailed);
            }
            if f.abs() < RETRACT_TOL {
                return Ok(x);
            }
            let g = self.gradient(&x);
            let gg = g.norm_squared();
            if !(gg > 1e-24) {
                return Err(QcError::RetractionFailed);
            }
            x -= g * (f / gg);
        }
        if (self.value(&x) - 1.0).abs() < 1e-12 {
            Ok(x)
        } else {
            Err(QcError::RetractionFailed)
        }
    }
}
