#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::shell::{ForecastSession, LearnedArtifact};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = LearnedArtifact::from_json(text) {
        let _ = ForecastSession::new(&a, 4, 1, 0.5, true);
    }
});
