//! The constraint-table parser must never panic, and anything it accepts
//! must survive an emit/reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(table) = cnfdecomp::io::parse_table(text) else {
        return;
    };
    let emitted = cnfdecomp::io::emit_table(&table);
    let again = cnfdecomp::io::parse_table(&emitted).expect("emitted text parses");
    assert_eq!(again, table);
    assert_eq!(
        cnfdecomp::io::emit_table(&again),
        emitted,
        "emission is a fixpoint"
    );
});
