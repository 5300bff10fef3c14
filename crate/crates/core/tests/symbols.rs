use std::time::Instant;

use nalgebra::{DMatrix, Vector4};
use proptest::prelude::*;
use qc_core::rep4::{lift_generators, torsion_projectors, Factor, TensorSpace};
use qc_core::symbols::*;

fn e1() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 0.0, 0.0)
}

#[test]
fn zero_covector_gives_zero_maps() {
    let z = Vector4::zeros();
    assert_eq!(symbol_d(&z).matrix.amax(), 0.0);
    assert_eq!(symbol_d(&z).kernel().ncols(), 3);
    assert_eq!(symbol_a(&z).matrix.amax(), 0.0);
    assert_eq!(symbol_b(&z).kernel().ncols(), 12);
}

#[test]
fn ranks_at_a_coordinate_covector() {
    let d = symbol_d(&e1());
    assert_eq!(d.matrix.shape(), (8, 3));
    assert_eq!(d.rank(), 3);
    let a = symbol_a(&e1());
    assert_eq!(a.matrix.shape(), (12, 8));
    assert_eq!(a.rank(), 5);
    let b = symbol_b(&e1());
    assert_eq!(b.matrix.shape(), (7, 12));
    assert_eq!(b.rank(), 7);
    assert_eq!(symbol_a_unreduced(&e1()).rank(), 5);
    // Alternating sum of the dimensions 3, 8, 12, 7.
    let dims = [d.matrix.ncols(), a.matrix.ncols(), b.matrix.ncols(), b.matrix.nrows()];
    assert_eq!(dims[0] as i64 - dims[1] as i64 + dims[2] as i64 - dims[3] as i64, 0);
}

#[test]
fn symbol_sequence_is_exact_on_a_covector_design() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for xi in covector_design(200, 2024) {
        let r = exactness(&xi);
        assert_eq!(r.ranks, [3, 5, 7], "{r:?}");
        worst = worst.max(r.max_distance());
    }
    assert!(worst < 1e-8, "{worst}");
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn homogeneity_in_the_covector() {
    let xi = covector_design(1, 3)[0];
    let t = 2.7;
    assert!((symbol_d(&(xi * t)).matrix - symbol_d(&xi).matrix * t).amax() < 1e-12);
    assert!((symbol_a(&(xi * t)).matrix - symbol_a(&xi).matrix * (t * t)).amax() < 1e-12);
    assert!((symbol_b(&(xi * t)).matrix - symbol_b(&xi).matrix * t).amax() < 1e-12);
}

#[test]
fn ledger_is_quoted() {
    let l = dimension_ledger();
    assert_eq!((l.h0, l.h1, l.h2, l.h3, l.index), (10, 35, 0, 0, 35));
    assert!(!l.recompute);
}

/// Group action restricted to the `(n, m)` piece of `factors`.
fn restricted(factors: Vec<Factor>, label: Option<(u32, u32)>, plus: [f64; 3], minus: [f64; 3]) -> DMatrix<f64> {
    let space = TensorSpace::new(factors);
    let g = lift_generators(&space).exponentiate(plus, minus);
    match label {
        None => g,
        Some((n, m)) => {
            let q = match space.factors() {
                [Factor::Vector, Factor::SelfDual] => vector_self_dual_projectors().get(n, m).unwrap().basis.clone(),
                [Factor::Vector, Factor::Sym2SelfDual] => torsion_projectors().get(n, m).unwrap().basis.clone(),
                [Factor::Sym3SelfDual] => qc_core::rep4::sym3_projectors().get(n, m).unwrap().basis.clone(),
                _ => unreachable!(),
            };
            q.transpose() * g * q
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symbols_are_equivariant(
        plus in prop::array::uniform3(-1.5f64..1.5),
        minus in prop::array::uniform3(-1.5f64..1.5),
        seed in 0u64..500,
    ) {
        let xi = covector_design(1, seed)[0];
        let g4 = restricted(vec![Factor::Vector], None, plus, minus);
        let gxi = Vector4::from_column_slice((&g4 * DMatrix::from_column_slice(4, 1, xi.as_slice())).as_slice());
        let rho_sd = restricted(vec![Factor::SelfDual], None, plus, minus);
        let rho31 = restricted(vec![Factor::Vector, Factor::SelfDual], Some((3, 1)), plus, minus);
        let rho51 = restricted(vec![Factor::Vector, Factor::Sym2SelfDual], Some((5, 1)), plus, minus);
        let rho60 = restricted(vec![Factor::Sym3SelfDual], Some((6, 0)), plus, minus);

        let d = (&rho31 * symbol_d(&xi).matrix - symbol_d(&gxi).matrix * &rho_sd).amax();
        let a = (&rho51 * symbol_a(&xi).matrix - symbol_a(&gxi).matrix * &rho31).amax();
        let b = (&rho60 * symbol_b(&xi).matrix - symbol_b(&gxi).matrix * &rho51).amax();
        prop_assert!(d < 1e-10 && a < 1e-10 && b < 1e-10, "{d} {a} {b}");
    }
}
