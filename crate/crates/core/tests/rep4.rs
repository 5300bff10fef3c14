use proptest::prelude::*;
use qc_core::rep4::cache::{decode, encode};
use qc_core::rep4::{build_projectors, sym3_projectors, torsion_projectors, TensorSpace};

#[test]
fn torsion_projectors_resolve_the_identity() {
    let table = torsion_projectors();
    let n = table.dim();
    let sum = table.entries.iter().fold(nalgebra::DMatrix::zeros(n, n), |acc, e| acc + &e.projector);
    assert!((sum - nalgebra::DMatrix::<f64>::identity(n, n)).amax() < 1e-10);
    assert!(table.self_check().max() < 1e-9);
    let total: usize = table.entries.iter().map(|e| e.rank()).sum();
    assert_eq!(total, n);
}

#[test]
fn cache_round_trip_preserves_projectors() {
    for table in [torsion_projectors(), sym3_projectors()] {
        let back = decode(&encode(table)).unwrap();
        assert_eq!(back.labels(), table.labels());
        for (a, b) in back.entries.iter().zip(&table.entries) {
            assert!((&a.projector - &b.projector).amax() < 1e-14);
        }
    }
}

#[test]
fn truncated_cache_is_rejected() {
    let bytes = encode(sym3_projectors());
    for cut in [0, 3, 8, 20, bytes.len() - 1] {
        assert!(decode(&bytes[..cut]).is_err(), "cut {cut}");
    }
}

#[test]
fn rebuilding_is_deterministic() {
    let a = build_projectors(&TensorSpace::torsion()).unwrap();
    assert_eq!(encode(&a), encode(torsion_projectors()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projectors_commute_with_the_group(
        plus in prop::array::uniform3(-1.0f64..1.0),
        minus in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let table = torsion_projectors();
        let g = table.generators.exponentiate(plus, minus);
        prop_assert!((g.transpose() * &g - nalgebra::DMatrix::<f64>::identity(g.nrows(), g.ncols())).amax() < 1e-10);
        for e in &table.entries {
            prop_assert!((&g * &e.projector - &e.projector * &g).amax() < 1e-10);
        }
    }
}
