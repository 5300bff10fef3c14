#![no_main]

use libfuzzer_sys::fuzz_target;
use qc_core::cli::{to_json, Report};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = Report::parse(text) {
        // Anything accepted must survive a round trip unchanged.
        let again = to_json(&report);
        let back = Report::parse(std::str::from_utf8(&again).unwrap()).expect("re-parse");
        assert_eq!(to_json(&back), again);
    }
});
