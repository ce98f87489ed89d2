#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use sra_core::algebra::PredicateLibrary;
use sra_core::pattern::{parse_condition, parse_declarations};

fn library() -> &'static PredicateLibrary {
    static LIB: OnceLock<PredicateLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        parse_declarations("pred IsT(x): x.type = \"T\"\npred Big(x): x.value > 50\npred SameId(x, y): x.id = y.id")
            .unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_condition(src, library()) {
        assert_eq!(parse_condition(&c.to_string(), library()).expect("printed condition reparses"), c);
    }
});
