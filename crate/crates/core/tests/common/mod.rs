#![allow(dead_code)]

use std::sync::Arc;

use qc_core::geometry::{FormRef, PolyForm, PolyVector};
use qc_core::qcstruct::ContactTriple;
use qc_core::quatalg::QuatMatrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Skew-hermitian `D` with Frobenius norm `norm`, from a seeded direction.
pub fn random_d(seed: u64, norm: f64) -> QuatMatrix2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: [f64; 10] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let d = QuatMatrix2::skew_hermitian(&params);
    let s = norm / d.norm();
    QuatMatrix2::skew_hermitian(&params.map(|p| p * s))
}

pub fn random_forms(seed: u64, degree: u32) -> [FormRef; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| Arc::new(PolyForm(PolyVector::random(&mut rng, degree))) as FormRef)
}

pub fn perturbed_canonical(seed: u64, eps: f64) -> ContactTriple {
    ContactTriple::canonical().perturbed(&random_forms(seed, 2), eps)
}
