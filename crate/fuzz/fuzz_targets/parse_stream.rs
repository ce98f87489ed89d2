#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::shell::{parse_csv, parse_jsonl};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let j = parse_jsonl(text);
    assert_eq!(j.events.len() + j.diagnostics.len() + j.blank, text.lines().count());
    let _ = parse_csv(text);
});
