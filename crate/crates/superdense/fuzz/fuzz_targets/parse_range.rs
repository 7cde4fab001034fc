//! Fuzz target for the sweep-range parser. Accepted ranges must expand to
//! exactly `steps` finite grid points without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(range) = superdense::cli::parse::parse_range(s) {
            let values = range.values();
            assert_eq!(values.len(), range.steps);
            assert!(values.iter().all(|v| v.is_finite()));
        }
    }
});
