//! Level-set hypersurfaces of `R^8`, ambient one-forms and finite-difference calculus.

mod forms;
pub mod poly;
mod sampling;
mod surface;

pub use forms::{
    canonical_horizontal_projector, directional, exterior_derivative, exterior_derivative_matrix, fd_jacobian,
    jacobian, lie_bracket, CanonicalForm, ConformalForm, ConstantForm, FormRef, GalickiForm, HorizontalForm,
    JacobianPath, LinearCombination, OneForm, PolyForm, WithoutJacobian, FD_STEP,
};
pub use poly::{exponents_up_to, Poly, PolyVector};
pub use sampling::sample_points;
pub use surface::{LevelSurface, SquashedSphere};
