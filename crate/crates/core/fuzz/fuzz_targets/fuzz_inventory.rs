#![no_main]

use std::sync::OnceLock;

use gestura_core::lattice::TypeLattice;
use gestura_core::timing::ParameterTable;
use libfuzzer_sys::fuzz_target;

fn setup() -> &'static (TypeLattice, ParameterTable) {
    static SETUP: OnceLock<(TypeLattice, ParameterTable)> = OnceLock::new();
    SETUP.get_or_init(|| {
        let lattice = gestura_core::config::parse_lattice(gestura_core::config::DEFAULT_LATTICE)
            .expect("built-in lattice");
        let table = gestura_core::config::parse_params(gestura_core::config::DEFAULT_PARAMS)
            .expect("built-in params");
        (lattice, table)
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let (lattice, table) = setup();
        let _ = gestura_core::config::parse_inventory(text, lattice, table);
    }
});
