#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::forecast::Pst;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Pst::from_json(text) {
        assert_eq!(Pst::from_json(&t.to_json()).expect("written tree reads back"), t);
        let _ = t.predict(&[0, 0, 0]);
    }
});
