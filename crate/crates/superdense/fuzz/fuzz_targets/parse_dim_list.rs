//! Fuzz target for the dimension-list parser.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(dims) = superdense::cli::parse::parse_dim_list(s) {
            assert!(!dims.is_empty());
            assert!(dims.iter().all(|&d| d > 0));
        }
    }
});
