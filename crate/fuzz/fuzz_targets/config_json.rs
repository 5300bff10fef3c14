#![no_main]

use libfuzzer_sys::fuzz_target;
use qc_core::cli::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ConfigFile::parse(text) {
        if let Ok(run) = cfg.resolve() {
            assert!(run.points > 0);
            assert!(run.tol > 0.0 && run.tol.is_finite());
            let _ = run.d_matrix();
        }
    }
});
