//! Gate-list text format for circuits:
//!
//! ```text
//! input <id>
//! ...
//! gate <id> AND|OR|NOT <fanin ids...>
//! ...
//! output <id>
//! ```
//!
//! Inputs come first, then gates in topological order (every fan-in must
//! already be declared), then exactly one output line. Blank lines and
//! `#` comments are allowed.

use crate::circuit::{Circuit, Gate, GateKind};

use super::{expect_end, parse_number, ParseError};

/// Serializes a circuit in declaration order.
pub fn emit_gates(circuit: &Circuit) -> String {
    let mut out = String::new();
    for &id in circuit.inputs() {
        out.push_str(&format!("input {id}\n"));
    }
    for gate in circuit.gates() {
        out.push_str(&format!("gate {} {}", gate.id, gate.kind.name()));
        for fanin in &gate.fanins {
            out.push_str(&format!(" {fanin}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("output {}\n", circuit.output()));
    out
}

/// Parses the gate-list format, enforcing the input/gate/output section
/// order; structural rules (fan-ins declared before use, fan-in counts,
/// unique ids) are checked on assembly.
pub fn parse_gates(src: &str) -> Result<Circuit, ParseError> {
    let mut inputs: Vec<usize> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut output: Option<usize> = None;
    let mut past_inputs = false;
    let mut last_line = 0usize;

    for (offset, raw) in src.lines().enumerate() {
        let line = offset + 1;
        last_line = line;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        if first.starts_with('#') {
            continue;
        }
        if output.is_some() {
            return Err(ParseError::syntax(line, "content after the output line"));
        }
        match first {
            "input" => {
                if past_inputs {
                    return Err(ParseError::syntax(line, "input line after a gate line"));
                }
                inputs.push(parse_number(line, &mut tokens, "input id")?);
            }
            "gate" => {
                past_inputs = true;
                let id = parse_number(line, &mut tokens, "gate id")?;
                let kind = match tokens.next() {
                    Some("AND") => GateKind::And,
                    Some("OR") => GateKind::Or,
                    Some("NOT") => GateKind::Not,
                    Some(other) => {
                        return Err(ParseError::syntax(
                            line,
                            format!("unknown gate kind `{other}`"),
                        ))
                    }
                    None => return Err(ParseError::syntax(line, "missing gate kind")),
                };
                let mut fanins = Vec::new();
                for token in tokens.by_ref() {
                    fanins.push(token.parse().map_err(|_| {
                        ParseError::syntax(line, format!("bad fan-in id `{token}`"))
                    })?);
                }
                gates.push(Gate { id, kind, fanins });
            }
            "output" => {
                output = Some(parse_number(line, &mut tokens, "output id")?);
            }
            other => {
                return Err(ParseError::syntax(
                    line,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
        if first != "gate" {
            expect_end(line, &mut tokens)?;
        }
    }

    let Some(output) = output else {
        return Err(ParseError::syntax(last_line + 1, "missing output line"));
    };
    Ok(Circuit::new(inputs, gates, output)?)
}
