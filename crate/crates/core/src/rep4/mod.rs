//! Representations of `Spin(4) = Sp(1) x Sp(1)` on tensor spaces over `R^4`.

pub mod cache;
mod explicit;
mod projectors;
mod space;

pub use explicit::{
    constrain_s31_params, explicit_basis, explicit_s51_membership, s11_element, s31_element, SymFamily,
    TORSION_DIM,
};
pub use projectors::{build_projectors, spin_casimir, IrrepProjector, ProjectorDefects, ProjectorTable};
pub use space::{
    adjoint_generators, leibniz, levi_civita, lift_generators, quaternionic_triple, so4_generators, sym_embedding,
    Factor, LiftedGenerators, So4Generators, TensorSpace,
};

use std::sync::OnceLock;

/// Projectors on `R^4 (x) Sym^2(L2+)`, built once per process.
pub fn torsion_projectors() -> &'static ProjectorTable {
    static TABLE: OnceLock<ProjectorTable> = OnceLock::new();
    TABLE.get_or_init(|| build_projectors(&TensorSpace::torsion()).expect("torsion space decomposes"))
}

/// Projectors on `Sym^3(L2+)`, built once per process.
pub fn sym3_projectors() -> &'static ProjectorTable {
    static TABLE: OnceLock<ProjectorTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        build_projectors(&TensorSpace::new(vec![Factor::Sym3SelfDual])).expect("Sym^3 decomposes")
    })
}
