//! Reference semantics used to judge decompositions.
//!
//! These functions are deliberately direct: the enumeration checker scans
//! tuples, the lifted propagator probes every (variable, value) restriction,
//! and the AllDifferent checker runs an augmenting-path matching. They are
//! the ground truth the validators compare clause sets against, so they
//! share no code with the clause-level machinery.

use thiserror::Error;

use crate::cnf::{Clause, ClauseSet, Lit, Var};
use crate::csp::{DirectEncodingMap, DomainState, ExtensionalConstraint, ModelError};
use crate::decomp::PropagatorDecomposition;

/// A consistency checker: 0 (`false`) means no assignment within the
/// domains can satisfy the constraint.
pub type CheckerFunction<'a> = Box<dyn Fn(&DomainState) -> bool + 'a>;

/// A propagator: maps a domain state to the pruned domain state.
pub type PropagatorFunction<'a> = Box<dyn Fn(&DomainState) -> DomainState + 'a>;

/// The complete checker of an extensional constraint: scans the tuple list
/// for one that lies within the current domains.
pub fn enumeration_checker(c: &ExtensionalConstraint) -> CheckerFunction<'_> {
    Box::new(move |state: &DomainState| {
        assert_eq!(state.num_vars(), c.arity(), "state arity mismatch");
        c.tuples().iter().any(|t| state.admits_tuple(t))
    })
}

/// Lifts a checker to the propagator that prunes `X_i = j` exactly when the
/// checker rejects the state restricted to `X_i ∈ {j}`. If the checker
/// rejects the state itself (equivalently: some variable loses every
/// value), the canonical wipeout state is returned.
pub fn lift_checker_to_propagator<'a>(checker: CheckerFunction<'a>) -> PropagatorFunction<'a> {
    Box::new(move |state: &DomainState| {
        if state.is_wipeout() {
            return state.clone();
        }
        let mut result = state.clone();
        for var in 0..state.num_vars() {
            for value in state.values(var) {
                if !checker(&state.restricted_to(var, value)) {
                    result = result.without(var, value);
                }
            }
        }
        if result.any_empty() {
            return DomainState::wipeout(state.num_vars());
        }
        result
    })
}

/// AllDifferent consistency via bipartite matching: the constraint is
/// consistent iff every variable can be matched to a distinct in-domain
/// value. Variables are processed in ascending order (Kuhn's algorithm
/// with deterministic augmenting paths).
pub fn alldifferent_checker<'a>(n: usize) -> CheckerFunction<'a> {
    Box::new(move |state: &DomainState| {
        assert_eq!(state.num_vars(), n, "state arity mismatch");
        let num_values = 64;
        let mut value_match: Vec<Option<usize>> = vec![None; num_values];
        for var in 0..n {
            let mut visited = vec![false; num_values];
            if !augment(state, var, &mut visited, &mut value_match) {
                return false;
            }
        }
        true
    })
}

fn augment(
    state: &DomainState,
    var: usize,
    visited: &mut [bool],
    value_match: &mut [Option<usize>],
) -> bool {
    for value in state.values(var) {
        if visited[value] {
            continue;
        }
        visited[value] = true;
        match value_match[value] {
            None => {
                value_match[value] = Some(var);
                return true;
            }
            Some(other) => {
                if augment(state, other, visited, value_match) {
                    value_match[value] = Some(var);
                    return true;
                }
            }
        }
    }
    false
}

/// Builds the support-literal encoding of an extensional constraint: one
/// auxiliary variable per allowed tuple.
///
/// Clauses, in order:
/// 1. per (variable, value) pair, variable-major: the support clause
///    `x_{i,v} => (disjunction of the tuples containing v at i)`; a value
///    with no support gets the unit clause `(~x_{i,v})`;
/// 2. per tuple t, per scope position i: `y_t => x_{i,t[i]}`;
/// 3. the at-least-one-tuple clause `(y_1, ..., y_m)`.
///
/// Unit propagation on the result enforces domain consistency: a value is
/// forced FALSE exactly when no tuple within the current domains supports
/// it, and the empty clause appears exactly when no tuple survives at all.
/// An empty table is refused; its propagator would be the constant wipeout.
pub fn bacchus_table_encoding(
    c: &ExtensionalConstraint,
) -> Result<PropagatorDecomposition, OracleError> {
    if c.tuples().is_empty() {
        return Err(OracleError::EmptyTable);
    }
    let map = DirectEncodingMap::new(&c.scope_vars()).map_err(OracleError::Model)?;
    let num_inputs = map.num_prop_vars();
    let tuple_var = |t: usize| Var(num_inputs + t);
    let mut clauses: Vec<Clause> = Vec::new();

    for (i, &d) in c.domain_sizes().iter().enumerate() {
        for v in 0..d {
            let mut lits = vec![Lit::neg(map.prop_var(i, v))];
            lits.extend(
                c.tuples()
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t[i] == v)
                    .map(|(ti, _)| Lit::pos(tuple_var(ti))),
            );
            clauses.push(Clause::new(lits).expect("support clause is well formed"));
        }
    }
    for (ti, t) in c.tuples().iter().enumerate() {
        for (i, &v) in t.iter().enumerate() {
            clauses.push(
                Clause::new(vec![Lit::neg(tuple_var(ti)), Lit::pos(map.prop_var(i, v))])
                    .expect("tuple clause is well formed"),
            );
        }
    }
    clauses.push(
        Clause::new(
            (0..c.tuples().len())
                .map(|t| Lit::pos(tuple_var(t)))
                .collect(),
        )
        .expect("tuple list is nonempty"),
    );

    let roles = map.roles_with(c.tuples().len(), false);
    let formula = ClauseSet::new(roles, clauses).map_err(OracleError::Cnf)?;
    PropagatorDecomposition::new(formula, map).map_err(OracleError::Decomp)
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    #[error("an empty table has no decomposition: its propagator is the constant wipeout")]
    EmptyTable,
    #[error(transparent)]
    Model(ModelError),
    #[error(transparent)]
    Cnf(crate::cnf::CnfError),
    #[error(transparent)]
    Decomp(crate::decomp::DecompError),
}
