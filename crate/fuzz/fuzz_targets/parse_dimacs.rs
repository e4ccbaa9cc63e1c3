//! The annotated-DIMACS parser must never panic, and anything it accepts
//! must survive an emit/reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = cnfdecomp::io::parse_dimacs(text) else {
        return;
    };
    let emitted = cnfdecomp::io::emit_dimacs(&parsed.formula, parsed.encoding.as_ref())
        .expect("parser output is always emittable");
    let again = cnfdecomp::io::parse_dimacs(&emitted).expect("emitted text parses");
    assert_eq!(again.formula, parsed.formula);
    assert_eq!(again.encoding, parsed.encoding);
    assert_eq!(
        cnfdecomp::io::emit_dimacs(&again.formula, again.encoding.as_ref()).unwrap(),
        emitted,
        "emission is a fixpoint"
    );
});
