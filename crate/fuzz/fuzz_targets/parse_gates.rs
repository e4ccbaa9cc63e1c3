//! The gate-list parser must never panic, and anything it accepts must
//! survive an emit/reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(circuit) = cnfdecomp::io::parse_gates(text) else {
        return;
    };
    let emitted = cnfdecomp::io::emit_gates(&circuit);
    let again = cnfdecomp::io::parse_gates(&emitted).expect("emitted text parses");
    assert_eq!(again, circuit);
    assert_eq!(
        cnfdecomp::io::emit_gates(&again),
        emitted,
        "emission is a fixpoint"
    );
});
