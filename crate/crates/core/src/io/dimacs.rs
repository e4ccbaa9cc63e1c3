//! Role-annotated DIMACS.
//!
//! Standard `p cnf V C` header and one clause per line; variable roles as
//! comment lines before the header:
//!
//! ```text
//! c role input <var> <csp-var> <value>
//! c role aux <var>
//! c role output <var>
//! ```
//!
//! `<var>` is the 1-based DIMACS variable; `<csp-var>` and `<value>` are
//! the 0-based pair the input variable encodes. Variables without a role
//! line default to auxiliary. Other `c` comments are ignored.

use std::collections::BTreeMap;

use crate::cnf::{Clause, ClauseSet, Var, VarRole};
use crate::csp::{CspVariable, DirectEncodingMap, ModelError};

use super::{expect_end, parse_number, EmitError, ParseError};

/// A parsed formula plus the encoding map reconstructed from its input
/// annotations, if it has any.
#[derive(Clone, Debug)]
pub struct ParsedDimacs {
    pub formula: ClauseSet,
    pub encoding: Option<DirectEncodingMap>,
}

/// Serializes a formula. A formula with input-role variables needs the
/// encoding map that places them; the map must cover exactly the
/// input-role variables.
pub fn emit_dimacs(
    formula: &ClauseSet,
    encoding: Option<&DirectEncodingMap>,
) -> Result<String, EmitError> {
    let mut pair_of: BTreeMap<Var, (usize, usize)> = BTreeMap::new();
    if let Some(map) = encoding {
        for (i, j, v) in map.pairs() {
            if v.index() >= formula.num_vars() || formula.role(v) != VarRole::Input {
                return Err(EmitError::UnannotatedPair(v));
            }
            pair_of.insert(v, (i, j));
        }
    }
    let mut out = String::new();
    for index in 0..formula.num_vars() {
        let v = Var(index);
        match formula.role(v) {
            VarRole::Input => {
                let &(i, j) = pair_of.get(&v).ok_or(if encoding.is_none() {
                    EmitError::MissingEncoding
                } else {
                    EmitError::UnmappedInput(v)
                })?;
                out.push_str(&format!("c role input {} {i} {j}\n", index + 1));
            }
            VarRole::Aux => out.push_str(&format!("c role aux {}\n", index + 1)),
            VarRole::Output => out.push_str(&format!("c role output {}\n", index + 1)),
        }
    }
    out.push_str(&format!(
        "p cnf {} {}\n",
        formula.num_vars(),
        formula.num_clauses()
    ));
    for clause in formula.clauses() {
        for lit in clause.lits() {
            out.push_str(&format!("{} ", lit.to_dimacs()));
        }
        out.push_str("0\n");
    }
    Ok(out)
}

enum RoleLine {
    Input { csp_var: usize, value: usize },
    Aux,
    Output,
}

/// Parses role-annotated DIMACS. The encoding map is reconstructed when
/// the file annotates input variables; their (variable, value) pairs must
/// form dense value ranges per variable.
pub fn parse_dimacs(src: &str) -> Result<ParsedDimacs, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut role_lines: Vec<(usize, usize, RoleLine)> = Vec::new();
    let mut last_line = 0usize;

    for (offset, raw) in src.lines().enumerate() {
        let line = offset + 1;
        last_line = line;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        match first {
            "c" => {
                if tokens.next() != Some("role") {
                    continue;
                }
                let kind = tokens
                    .next()
                    .ok_or_else(|| ParseError::syntax(line, "role comment without a kind"))?;
                let var: usize = parse_number(line, &mut tokens, "variable")?;
                let role = match kind {
                    "input" => RoleLine::Input {
                        csp_var: parse_number(line, &mut tokens, "variable index")?,
                        value: parse_number(line, &mut tokens, "value index")?,
                    },
                    "aux" => RoleLine::Aux,
                    "output" => RoleLine::Output,
                    other => {
                        return Err(ParseError::syntax(line, format!("unknown role `{other}`")))
                    }
                };
                expect_end(line, &mut tokens)?;
                role_lines.push((line, var, role));
            }
            "p" => {
                if header.is_some() {
                    return Err(ParseError::syntax(line, "duplicate `p cnf` header"));
                }
                if tokens.next() != Some("cnf") {
                    return Err(ParseError::syntax(
                        line,
                        "expected `p cnf <vars> <clauses>`",
                    ));
                }
                let vars = parse_number(line, &mut tokens, "variable count")?;
                let count = parse_number(line, &mut tokens, "clause count")?;
                expect_end(line, &mut tokens)?;
                header = Some((vars, count));
            }
            _ => {
                let Some((num_vars, _)) = header else {
                    return Err(ParseError::syntax(line, "clause before the `p cnf` header"));
                };
                let mut ints: Vec<i64> = Vec::new();
                for token in raw.split_whitespace() {
                    let n: i64 = token
                        .parse()
                        .map_err(|_| ParseError::syntax(line, format!("bad literal `{token}`")))?;
                    ints.push(n);
                }
                if ints.last() != Some(&0) {
                    return Err(ParseError::syntax(line, "clause line must end with 0"));
                }
                ints.pop();
                if ints.is_empty() {
                    return Err(ParseError::syntax(line, "empty clause"));
                }
                if ints.contains(&0) {
                    return Err(ParseError::syntax(line, "literal 0 inside a clause"));
                }
                if let Some(&n) = ints.iter().find(|&&n| n.unsigned_abs() > num_vars as u64) {
                    return Err(ParseError::syntax(
                        line,
                        format!("literal {n} outside the declared {num_vars} variables"),
                    ));
                }
                clauses.push(
                    Clause::from_dimacs(&ints)
                        .map_err(|e| ParseError::syntax(line, e.to_string()))?,
                );
            }
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(ParseError::syntax(last_line + 1, "missing `p cnf` header"));
    };
    if clauses.len() != num_clauses {
        return Err(ParseError::syntax(
            last_line + 1,
            format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }

    let mut roles = vec![VarRole::Aux; num_vars];
    let mut annotated = vec![false; num_vars];
    // csp var -> value -> annotated propositional variable
    let mut placements: BTreeMap<usize, BTreeMap<usize, Var>> = BTreeMap::new();
    for (line, var, role) in role_lines {
        if var == 0 || var > num_vars {
            return Err(ParseError::syntax(
                line,
                format!("role for variable {var} outside 1..={num_vars}"),
            ));
        }
        let v = Var(var - 1);
        if annotated[v.index()] {
            return Err(ParseError::syntax(
                line,
                format!("second role line for variable {var}"),
            ));
        }
        annotated[v.index()] = true;
        match role {
            RoleLine::Input { csp_var, value } => {
                roles[v.index()] = VarRole::Input;
                if placements
                    .entry(csp_var)
                    .or_default()
                    .insert(value, v)
                    .is_some()
                {
                    return Err(ParseError::syntax(
                        line,
                        format!("value {value} of variable {csp_var} annotated twice"),
                    ));
                }
            }
            RoleLine::Aux => roles[v.index()] = VarRole::Aux,
            RoleLine::Output => roles[v.index()] = VarRole::Output,
        }
    }

    let encoding = match placements.last_key_value() {
        None => None,
        Some((&max_csp, _)) => {
            let mut vars = Vec::with_capacity(max_csp + 1);
            let mut rows = Vec::with_capacity(max_csp + 1);
            for i in 0..=max_csp {
                let Some(values) = placements.get(&i) else {
                    return Err(ParseError::Model(ModelError::NonDenseVariableIds {
                        expected: i,
                        found: max_csp,
                    }));
                };
                let domain_size = *values.last_key_value().expect("nonempty").0 + 1;
                let mut row = Vec::with_capacity(domain_size);
                for j in 0..domain_size {
                    match values.get(&j) {
                        Some(&pv) => row.push(pv),
                        None => {
                            return Err(ParseError::Model(ModelError::ValueOutOfRange {
                                var: i,
                                value: j,
                            }))
                        }
                    }
                }
                vars.push(CspVariable { id: i, domain_size });
                rows.push(row);
            }
            Some(DirectEncodingMap::with_placement(&vars, rows)?)
        }
    };

    let formula = ClauseSet::new(roles, clauses)?;
    Ok(ParsedDimacs { formula, encoding })
}
