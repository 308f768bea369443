#![no_main]

use std::sync::OnceLock;

use gestura_core::pipeline::{load_knowledge, synthesize_word, Knowledge, RunConfig};
use libfuzzer_sys::fuzz_target;

fn knowledge() -> &'static Knowledge {
    static KNOWLEDGE: OnceLock<Knowledge> = OnceLock::new();
    KNOWLEDGE.get_or_init(|| load_knowledge(&RunConfig::default()).expect("built-ins load"))
}

// Arbitrary word specs through the whole pipeline: lookup, syllabification,
// constraint solving and score assembly must reject bad input with errors,
// never panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let ids: Vec<&str> = text.split_whitespace().take(24).collect();
        let _ = synthesize_word(knowledge(), &ids);
    }
});
