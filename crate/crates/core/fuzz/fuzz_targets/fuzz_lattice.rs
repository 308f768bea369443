#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Malformed lattices must produce errors, never panics.
        let _ = gestura_core::config::parse_lattice(text);
    }
});
