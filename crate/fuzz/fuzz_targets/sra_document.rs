#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::automaton::Sra;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = Sra::from_json(text) {
        assert_eq!(Sra::from_json(&a.to_json()).expect("written document reads back"), a);
    }
});
