#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::shell::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = RunConfig::from_json(text);
});
