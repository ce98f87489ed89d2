#![no_main]

use libfuzzer_sys::fuzz_target;
use sra_core::pattern::{parse_expr, parse_pattern};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_pattern(src) {
        // Printing and reparsing must give the same tree.
        let again = parse_expr(&p.expr.to_string(), &p.library).expect("printed pattern reparses");
        assert_eq!(again, p.expr);
    }
});
