//! Fuzz target for the spectrum flag parser.
//!
//! Accepted output must be a normalized probability vector; anything else
//! must come back as an error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spectrum) = superdense::cli::parse::parse_spectrum(s) {
            assert!(!spectrum.is_empty());
            assert!(spectrum.iter().all(|p| p.is_finite() && *p >= 0.0));
            let sum: f64 = spectrum.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }
});
