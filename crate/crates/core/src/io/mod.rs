//! Text formats: role-annotated DIMACS for formulas, gate lists for
//! circuits, and constraint tables.
//!
//! Emitters are canonical: the same value always serializes to the same
//! bytes (clauses in declaration order, literals as given, one role
//! comment per variable). Parsers accept exactly the documented grammar
//! and report the first offending line.

mod dimacs;
mod gates;
mod table;

pub use dimacs::{emit_dimacs, parse_dimacs, ParsedDimacs};
pub use gates::{emit_gates, parse_gates};
pub use table::{emit_table, parse_table};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::cnf::CnfError;
use crate::csp::ModelError;

/// A failure while reading one of the text formats.
#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    /// A line that does not match the grammar.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    /// The lines parsed but do not assemble into a valid formula.
    #[error(transparent)]
    Formula(#[from] CnfError),
    /// The lines parsed but do not assemble into a valid constraint or
    /// encoding map.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The lines parsed but do not assemble into a valid circuit.
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl ParseError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    tokens: &mut dyn Iterator<Item = &str>,
    what: &str,
) -> Result<T, ParseError> {
    let token = tokens
        .next()
        .ok_or_else(|| ParseError::syntax(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("bad {what} `{token}`")))
}

fn expect_end(line: usize, tokens: &mut dyn Iterator<Item = &str>) -> Result<(), ParseError> {
    match tokens.next() {
        Some(extra) => Err(ParseError::syntax(
            line,
            format!("unexpected trailing `{extra}`"),
        )),
        None => Ok(()),
    }
}

/// A failure while serializing: the value cannot be represented in the
/// format.
#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum EmitError {
    /// The formula has input variables but no encoding map was supplied,
    /// so their (variable, value) annotations cannot be written.
    #[error("the formula has input-role variables but no encoding map was supplied")]
    MissingEncoding,
    /// An input-role variable is not a pair of the supplied encoding map.
    #[error("input variable {0} is not mapped to a (variable, value) pair")]
    UnmappedInput(crate::cnf::Var),
    /// An encoding pair's variable does not have input role in the formula.
    #[error("mapped variable {0} does not have input role in the formula")]
    UnannotatedPair(crate::cnf::Var),
}
