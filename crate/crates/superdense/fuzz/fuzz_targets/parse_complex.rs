//! Fuzz target for the complex-number flag parser.
//!
//! Arbitrary text must parse to a finite value or return an error, never
//! panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(z) = superdense::cli::parse::parse_complex(s) {
            assert!(z.re.is_finite() && z.im.is_finite());
        }
    }
});
