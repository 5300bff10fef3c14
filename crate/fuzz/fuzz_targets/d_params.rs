#![no_main]

use libfuzzer_sys::fuzz_target;
use qc_core::cli::parse_d_params;
use qc_core::quatalg::QuatMatrix2;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(params) = parse_d_params(text) {
        assert!(params.iter().all(|p| p.is_finite()));
        let _ = QuatMatrix2::skew_hermitian(&params);
    }
});
