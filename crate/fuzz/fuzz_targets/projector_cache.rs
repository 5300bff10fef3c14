#![no_main]

use libfuzzer_sys::fuzz_target;
use qc_core::rep4::cache::{decode, encode};

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = decode(data) {
        let bytes = encode(&table);
        let back = decode(&bytes).expect("encoded table decodes");
        assert_eq!(back.entries.len(), table.entries.len());
    }
});
