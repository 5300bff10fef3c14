#![no_main]

use libfuzzer_sys::fuzz_target;
use qc_core::cli::PerturbationSpec;
use qc_core::quatalg::AmbientVector;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<PerturbationSpec>(data) else { return };
    if spec.validate().is_err() {
        return;
    }
    let field = spec.direction();
    let p = AmbientVector::from_fn(|k, _| (k == 0) as u8 as f64);
    let v = AmbientVector::from_fn(|k, _| (k == 1) as u8 as f64);
    let _ = field.value(&p, &v);
    for i in 0..3 {
        let _ = field.d_matrix(i, &p);
    }
});
