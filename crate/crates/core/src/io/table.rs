//! Constraint-table text format:
//!
//! ```text
//! table <arity> <d_1> ... <d_k>
//! <v_1> ... <v_k>
//! ```
//!
//! One header line, then one solution tuple per line as space-separated
//! 0-based value indices. Comments start with `#`. The format carries
//! positions only, so parsed constraints always have the identity scope
//! `0..k-1`.

use crate::csp::ExtensionalConstraint;

use super::{expect_end, parse_number, ParseError};

/// Serializes a table: header with arity and domain sizes, then tuples in
/// declaration order. Scope variable ids are positional in this format.
pub fn emit_table(constraint: &ExtensionalConstraint) -> String {
    let mut out = String::from("table");
    out.push_str(&format!(" {}", constraint.arity()));
    for d in constraint.domain_sizes() {
        out.push_str(&format!(" {d}"));
    }
    out.push('\n');
    for tuple in constraint.tuples() {
        let row: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the table format; value ranges and duplicate tuples are checked
/// on assembly.
pub fn parse_table(src: &str) -> Result<ExtensionalConstraint, ParseError> {
    let mut header: Option<Vec<usize>> = None;
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 0usize;

    for (offset, raw) in src.lines().enumerate() {
        let line = offset + 1;
        last_line = line;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        if first.starts_with('#') {
            continue;
        }
        match &header {
            None => {
                if first != "table" {
                    return Err(ParseError::syntax(
                        line,
                        "expected `table <arity> <sizes...>`",
                    ));
                }
                let arity: usize = parse_number(line, &mut tokens, "arity")?;
                let mut sizes = Vec::with_capacity(arity);
                for _ in 0..arity {
                    sizes.push(parse_number(line, &mut tokens, "domain size")?);
                }
                expect_end(line, &mut tokens)?;
                header = Some(sizes);
            }
            Some(sizes) => {
                let mut tuple = Vec::with_capacity(sizes.len());
                tuple.push(
                    first
                        .parse()
                        .map_err(|_| ParseError::syntax(line, format!("bad value `{first}`")))?,
                );
                for _ in 1..sizes.len() {
                    tuple.push(parse_number(line, &mut tokens, "value")?);
                }
                expect_end(line, &mut tokens)?;
                tuples.push(tuple);
            }
        }
    }

    let Some(sizes) = header else {
        return Err(ParseError::syntax(last_line + 1, "missing `table` header"));
    };
    Ok(ExtensionalConstraint::with_identity_scope(sizes, tuples)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::ModelError;
    use crate::fixtures::pair_table;

    #[test]
    fn tables_round_trip_bit_exactly() {
        let table = pair_table();
        let text = emit_table(&table);
        assert_eq!(text, "table 2 2 2\n0 0\n1 1\n0 1\n");
        let parsed = parse_table(&text).unwrap();
        assert_eq!(parsed, table);
        assert_eq!(emit_table(&parsed), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let parsed = parse_table("# all-equal over two bits\n\ntable 2 2 2\n0 0\n1 1\n").unwrap();
        assert_eq!(parsed.tuples().len(), 2);
    }

    #[test]
    fn empty_tables_parse_to_no_tuples() {
        let parsed = parse_table("table 1 3\n").unwrap();
        assert_eq!(parsed.arity(), 1);
        assert!(parsed.tuples().is_empty());
    }

    #[test]
    fn malformed_tables_are_reported_with_their_line_numbers() {
        let cases = [
            (
                "0 0\ntable 2 2 2\n",
                1,
                "expected `table <arity> <sizes...>`",
            ),
            ("table 2 2\n", 1, "missing domain size"),
            ("table 2 2 2\n0\n", 2, "missing value"),
            ("table 2 2 2\n0 0 0\n", 2, "unexpected trailing `0`"),
            ("table 1 x\n", 1, "bad domain size `x`"),
        ];
        for (src, line, message) in cases {
            assert_eq!(
                parse_table(src).unwrap_err(),
                ParseError::Syntax {
                    line,
                    message: message.into()
                },
                "for input {src:?}"
            );
        }
        assert_eq!(
            parse_table("# nothing\n").unwrap_err(),
            ParseError::Syntax {
                line: 2,
                message: "missing `table` header".into()
            }
        );
    }

    #[test]
    fn value_rules_are_checked_on_assembly() {
        assert_eq!(
            parse_table("table 1 2\n2\n").unwrap_err(),
            ParseError::Model(ModelError::ValueOutOfRange { var: 0, value: 2 })
        );
        assert_eq!(
            parse_table("table 1 2\n0\n0\n").unwrap_err(),
            ParseError::Model(ModelError::DuplicateTuple { tuple: vec![0] })
        );
    }
}
