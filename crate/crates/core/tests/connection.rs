mod common;

use qc_core::connection::*;
use qc_core::geometry::sample_points;
use qc_core::qcstruct::*;
use qc_core::QcError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn opts() -> PipelineOptions {
    PipelineOptions::default()
}

fn structures() -> Vec<ContactTriple> {
    vec![
        ContactTriple::canonical(),
        ContactTriple::galicki(random_d(11, 0.5)),
        perturbed_canonical(4, 1e-2),
    ]
}

#[test]
fn koszul_connection_is_metric_and_horizontally_torsion_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ct in structures() {
        for p in sample_points(&ct.surface, 3, 8).unwrap() {
            let conn = connection_coefficients(&ct, &p, &opts()).unwrap();
            let fields = std::array::from_fn(|_| AffineField::random(&mut rng));
            let d = koszul_defects(&ct, &conn, &fields, &opts());
            assert!(d.max() < 1e-4, "{d:?}");
        }
    }
}

#[test]
fn connection_preserves_the_quaternionic_structure_on_galicki() {
    for (k, norm) in [0.1, 0.5].into_iter().enumerate() {
        let ct = ContactTriple::galicki(random_d(20 + k as u64, norm));
        for p in sample_points(&ct.surface, 4, 3).unwrap() {
            let conn = connection_coefficients(&ct, &p, &opts()).unwrap();
            let report = gamma_check(&conn).unwrap();
            assert!(report.max_deviation < 1e-3, "{report:?}");
        }
    }
}

#[test]
fn gamma_refuses_unadapted_frames() {
    let ct = ContactTriple::galicki(random_d(1, 0.3));
    let p = sample_points(&ct.surface, 1, 1).unwrap()[0];
    let pack = dual_complement(&ct, &p, None, &opts()).unwrap();
    assert!(matches!(connection_for(&ct, pack.clone(), &opts()), Err(QcError::NotAdapted)));
    assert!(matches!(reeb_derivative_check(&ct, &pack, &opts()), Err(QcError::NotAdapted)));
}

#[test]
fn reeb_derivative_follows_alpha() {
    for ct in structures() {
        for p in sample_points(&ct.surface, 3, 12).unwrap() {
            let pack = adapted_complement(&ct, &p, &opts()).unwrap();
            let report = reeb_derivative_check(&ct, &pack, &opts()).unwrap();
            assert!(report.max_deviation < 1e-4, "{report:?}");
            assert!(report.bracket_deviation < 1e-4, "{report:?}");
        }
    }
}

#[test]
fn vertical_correction_removes_skew_torsion() {
    for ct in structures() {
        let p = sample_points(&ct.surface, 1, 2).unwrap()[0];
        let conn = connection_coefficients(&ct, &p, &opts()).unwrap();
        let v = vertical_extension(&conn, &ct, &opts()).unwrap();
        assert!(v.skew_torsion_defect() < 1e-12);
        for i in 0..3 {
            assert!((v.nabla[i] + v.nabla[i].transpose()).amax() < 1e-12);
        }
    }
}

#[test]
fn bianchi_identity_on_perturbed_sphere() {
    let ct = perturbed_canonical(7, 1e-2);
    for p in sample_points(&ct.surface, 3, 4).unwrap() {
        let r = bianchi_richardson(&ct, &p, 2e-3, &opts()).unwrap();
        assert!(r.fine.torsion_norm > 1e-4);
        assert!(r.fine.residual < 1e-3, "{r:?}");
        assert!(r.second_order(0.1, 1e-10), "{r:?}");
    }
}
