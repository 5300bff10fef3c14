mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qc_core::deform::*;
use qc_core::geometry::{sample_points, FormRef, LevelSurface, PolyForm, PolyVector};
use qc_core::qcstruct::{integrability_residual, PipelineOptions};
use qc_core::quatalg::{right_mul, AmbientVector, Quaternion, QuatMatrix2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn points(n: usize, seed: u64) -> Vec<AmbientVector> {
    sample_points(&LevelSurface::Sphere, n, seed).unwrap()
}

#[test]
fn zero_deformation_gives_zero() {
    let theta = DeformationField::zero();
    for p in points(3, 1) {
        let s = solve_trace(&theta, &p).unwrap();
        assert_eq!(s.trace, 0.0);
        assert!(s.a_sym.amax() == 0.0);
        assert!(a_operator(&theta, &p).unwrap().coords.amax() < 1e-14);
    }
}

#[test]
fn trace_relation_is_solved() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in points(5, 2) {
        let theta = DeformationField::random(&mut rng, 2);
        let s = solve_trace(&theta, &p).unwrap();
        assert!(s.source.amax() > 1e-3);
        assert!(s.relation_residual() < 1e-10);
    }
}

#[test]
fn anti_self_dual_derivative_has_no_source() {
    // d(Sx/2) restricted to H is anti-self-dual for S in sp(2); at a point with
    // x*Sx = 0 the horizontal projection adds nothing self-dual.
    let s = QuatMatrix2 {
        entries: [[Quaternion::ZERO, Quaternion::ONE], [-Quaternion::ONE, Quaternion::ZERO]],
    };
    let coeff = PolyVector::linear(&(s.real_matrix() * 0.5));
    let theta = DeformationField::polynomial([coeff.clone(), coeff.scale(-2.0), coeff.scale(0.5)]);
    let mut p = AmbientVector::zeros();
    p[0] = 1.0;
    p[4] = 1.0;
    let p = p.normalize();
    let r = solve_trace(&theta, &p).unwrap();
    assert!(r.source.amax() < 1e-8, "{r:?}");
    assert!(r.a_sym.amax() < 1e-8);
}

#[test]
fn reeb_field_gives_no_deformation() {
    let reeb = |q: &AmbientVector| right_mul(q, Quaternion::I) * 2.0;
    for p in points(4, 5) {
        let d = diffeo_to_deformation(reeb, &p).unwrap();
        for v in d {
            assert!(v.amax() < 1e-6, "{v:?}");
        }
    }
}

#[test]
fn polynomial_and_pointwise_diffeo_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in points(4, 6) {
        let zeta = random_tangent_field(&mut rng, 1);
        let theta = diffeo_deformation(&zeta);
        let pointwise = diffeo_to_deformation(|q: &AmbientVector| zeta.eval(q), &p).unwrap();
        let pack = qc_core::qcstruct::adapted_complement(
            &qc_core::qcstruct::ContactTriple::canonical(),
            &p,
            &PipelineOptions::default(),
        )
        .unwrap();
        for b in 0..4 {
            let v = theta.value(&p, &pack.h[b]);
            for i in 0..3 {
                assert!((v[i] - pointwise[i][b]).abs() < 1e-6, "{} {}", v[i], pointwise[i][b]);
            }
        }
    }
}

#[test]
fn infinitesimal_diffeomorphisms_lie_in_the_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ps = points(2, 7);
    for k in 0..20 {
        let zeta = random_tangent_field(&mut rng, 1);
        let theta = diffeo_deformation(&zeta);
        for p in &ps {
            let a = a_operator(&theta, p).unwrap();
            assert!(a.coords.norm() > 1e-3, "field {k} gives trivial A_0");
            assert!(a.norm() < 1e-4, "field {k}: {}", a.norm());
        }
    }
}

#[test]
fn symmetry_fields_lie_in_the_kernel() {
    for seed in 0..3 {
        let zeta = symmetry_field(&random_d(seed, 1.0));
        let theta = diffeo_deformation(&zeta);
        for p in points(2, seed) {
            assert!(a_operator(&theta, &p).unwrap().norm() < 1e-5);
        }
    }
}

#[test]
fn linearization_matches_nonlinear_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = points(1, 4)[0];
    let opts = PipelineOptions::default();
    for _ in 0..5 {
        let theta = DeformationField::random(&mut rng, 2);
        let a = a_operator(&theta, &p).unwrap().norm();
        for t in [1e-3, 5e-4] {
            let r = integrability_residual(&theta.deformed_canonical(t), &p, &opts).unwrap();
            let slope = r.raw / t;
            assert!((slope - a).abs() < 0.05 * a, "slope {slope} vs {a}");
        }
    }
}

fn form(c: PolyVector) -> FormRef {
    Arc::new(PolyForm(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn a_is_linear(seed in 0u64..1000, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t1 = DeformationField::random(&mut rng, 2);
        let t2 = DeformationField::new(std::array::from_fn(|_| form(PolyVector::random(&mut rng, 1))));
        let p = points(1, seed)[0];
        let lhs = a_operator(&t1.combine(x, &t2, y), &p).unwrap().s51;
        let rhs = a_operator(&t1, &p).unwrap().s51 * x + a_operator(&t2, &p).unwrap().s51 * y;
        prop_assert!((lhs - rhs).amax() < 1e-8);
    }
}
