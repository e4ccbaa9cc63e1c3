//! Rewrites that bring a checker decomposition into propagation normal
//! form: no negative input literals, auxiliaries only ever forced FALSE,
//! and exactly one negative literal per clause. In that form unit
//! propagation is pure FALSE-propagation, which is what the layered
//! circuit lowering mirrors.

use std::collections::BTreeSet;

use crate::cnf::{Clause, ClauseSet, Lit, TruthValue, Var, VarRole};
use crate::csp::{enumerate_domain_states, EnumerationBudget};
use crate::decomp::{variants, CheckerDecomposition};
use crate::propagate::unit_propagate;

use super::TransformError;

/// How to eliminate negative input literals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StripMode {
    /// Delete every clause containing a negative input literal. Sound for
    /// a valid checker: such clauses can fire only by assigning an input,
    /// which a checker never does.
    Remove,
    /// Rewrite each negative input literal into the disjunction of its
    /// sibling values' positive literals. Sound in any context that also
    /// asserts each CSP variable keeps at least one value (the resolvent
    /// with that at-least-one clause).
    Substitute,
}

/// Removes or rewrites every negative literal on an input variable, per
/// the chosen mode. Rewrites that reproduce an existing clause are emitted
/// once.
pub fn strip_negative_input_literals(
    d: &CheckerDecomposition,
    mode: StripMode,
) -> Result<CheckerDecomposition, TransformError> {
    let map = d.encoding();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<Lit>> = BTreeSet::new();
    'clause: for (ci, clause) in d.formula().clauses().iter().enumerate() {
        let mut lits: Vec<Lit> = Vec::with_capacity(clause.len());
        let mut present: BTreeSet<Lit> = BTreeSet::new();
        for &l in clause.lits() {
            match map.pair_of(l.var()) {
                Some((i, j)) if !l.is_positive() => match mode {
                    StripMode::Remove => continue 'clause,
                    StripMode::Substitute => {
                        let domain = map.csp_vars()[i].domain_size;
                        for k in (0..domain).filter(|&k| k != j) {
                            let sibling = Lit::pos(map.prop_var(i, k));
                            if present.insert(sibling) {
                                lits.push(sibling);
                            }
                        }
                    }
                },
                _ => {
                    if present.insert(l) {
                        lits.push(l);
                    }
                }
            }
        }
        if lits.is_empty() {
            return Err(TransformError::EmptyClauseAfterStripping { clause_index: ci });
        }
        let rewritten = Clause::new(lits)?;
        if seen.insert(rewritten.lit_set()) {
            clauses.push(rewritten);
        }
    }
    let formula = ClauseSet::new(d.formula().roles().to_vec(), clauses)?;
    Ok(CheckerDecomposition::new(formula, map.clone())?)
}

/// Flips the polarity of every auxiliary variable that unit propagation
/// ever forces TRUE while driving the output FALSE, determined by
/// exhaustive enumeration of domain states (under both faithful domain
/// encodings). Afterwards those propagations only ever set auxiliaries
/// FALSE.
pub fn normalize_auxiliary_polarity(
    d: &CheckerDecomposition,
    budget: EnumerationBudget,
) -> Result<CheckerDecomposition, TransformError> {
    let f = d.formula();
    let map = d.encoding();
    let output = d.output_var();
    let mut flip: BTreeSet<Var> = BTreeSet::new();
    for state in enumerate_domain_states(map.csp_vars(), budget)? {
        for (_, start) in variants(map, &state, f.num_vars()) {
            let out = unit_propagate(f, &start);
            if out.is_conflict() || out.assignment.value(output) != TruthValue::False {
                continue;
            }
            for (var, value) in out.forced_vars(&start) {
                if value == TruthValue::True && f.role(var) == VarRole::Aux {
                    flip.insert(var);
                }
            }
        }
    }
    if flip.is_empty() {
        return Ok(d.clone());
    }
    let clauses = f
        .clauses()
        .iter()
        .map(|c| {
            Clause::new(
                c.lits()
                    .iter()
                    .map(|&l| {
                        if flip.contains(&l.var()) {
                            l.negated()
                        } else {
                            l
                        }
                    })
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let formula = ClauseSet::new(f.roles().to_vec(), clauses)?;
    Ok(CheckerDecomposition::new(formula, map.clone())?)
}

/// Reduces a checker with no negative input literals to clauses with
/// exactly one negative literal each (on an auxiliary or the output).
///
/// Clauses with two or more negative non-input literals can never become
/// unit under pure FALSE-propagation — firing them would need some
/// auxiliary or the output forced TRUE first — so they are dropped.
/// Clauses with no negative literal at all could only force a variable
/// TRUE or conflict, which a checker in this form must never do, so their
/// presence is an error.
pub fn to_exactly_one_negative_form(
    d: &CheckerDecomposition,
) -> Result<CheckerDecomposition, TransformError> {
    let f = d.formula();
    let map = d.encoding();
    let mut clauses: Vec<Clause> = Vec::new();
    for (ci, clause) in f.clauses().iter().enumerate() {
        let negatives: Vec<Lit> = clause
            .lits()
            .iter()
            .copied()
            .filter(|l| !l.is_positive())
            .collect();
        if let Some(l) = negatives.iter().find(|l| map.pair_of(l.var()).is_some()) {
            return Err(TransformError::NegativeInputLiteral {
                clause_index: ci,
                var: l.var(),
            });
        }
        match negatives.len() {
            0 => return Err(TransformError::AllPositiveClause { clause_index: ci }),
            1 => clauses.push(clause.clone()),
            _ => {}
        }
    }
    let formula = ClauseSet::new(f.roles().to_vec(), clauses)?;
    Ok(CheckerDecomposition::new(formula, map.clone())?)
}

/// The full normalization pipeline: strip negative input literals, orient
/// auxiliaries so propagation only sets them FALSE, then reduce to the
/// exactly-one-negative form.
pub fn to_propagation_normal_form(
    d: &CheckerDecomposition,
    mode: StripMode,
    budget: EnumerationBudget,
) -> Result<CheckerDecomposition, TransformError> {
    let stripped = strip_negative_input_literals(d, mode)?;
    let oriented = normalize_auxiliary_polarity(&stripped, budget)?;
    to_exactly_one_negative_form(&oriented)
}

/// Flips the named variables throughout a formula. Test helper for
/// constructing polarity mutants.
#[cfg(test)]
pub(crate) fn flip_variables(f: &ClauseSet, flip: &BTreeSet<Var>) -> ClauseSet {
    let clauses: Vec<Clause> = f
        .clauses()
        .iter()
        .map(|c| {
            Clause::new(
                c.lits()
                    .iter()
                    .map(|&l| {
                        if flip.contains(&l.var()) {
                            l.negated()
                        } else {
                            l
                        }
                    })
                    .collect(),
            )
            .expect("flipping preserves clause validity")
        })
        .collect();
    ClauseSet::new(f.roles().to_vec(), clauses).expect("flipping preserves formula validity")
}
