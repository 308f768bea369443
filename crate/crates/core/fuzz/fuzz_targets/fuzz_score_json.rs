#![no_main]

use std::sync::OnceLock;

use gestura_core::timing::ParameterTable;
use libfuzzer_sys::fuzz_target;

fn table() -> &'static ParameterTable {
    static TABLE: OnceLock<ParameterTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        gestura_core::config::parse_params(gestura_core::config::DEFAULT_PARAMS)
            .expect("built-in params")
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(score) = gestura_core::score_json::score_from_json(text, table()) {
            // Decoded scores must re-encode without panicking.
            let _ = gestura_core::score_json::score_to_json(&score);
        }
    }
});
