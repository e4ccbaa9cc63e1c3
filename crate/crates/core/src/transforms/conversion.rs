//! Conversions between propagator and checker decompositions.
//!
//! Forward: a propagator becomes a checker by simulating its unit
//! propagation on reified shadow variables (one "forced TRUE" and one
//! "forced FALSE" witness per source variable) and reporting any simulated
//! conflict on a fresh output variable. The simulation only ever sets
//! shadows TRUE and the output FALSE, so the result never touches the
//! inputs and never conflicts, as a checker must.
//!
//! Reverse: a checker becomes a propagator by instantiating one renamed
//! copy of the checker per input variable. Inside the copy for variable
//! x(i,j), every sibling value of CSP variable i is fixed FALSE by clause
//! simplification, so the copy's output reports whether value j would
//! survive alone; a bridge clause then prunes x(i,j) when it would not.

use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{convert_3cnf, Clause, ClauseSet, Lit, Var, VarRole};
use crate::decomp::{CheckerDecomposition, PropagatorDecomposition};

use super::TransformError;

/// The two shadow variables witnessing the forcing state of a base
/// variable: `forced_true` is made TRUE exactly when propagation on the
/// source would assign the base variable TRUE, and `forced_false` likewise
/// for FALSE. Setting both reveals a conflict in the source.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReifiedVariablePair {
    pub base: Var,
    pub forced_true: Var,
    pub forced_false: Var,
}

/// The deterministic shadow numbering used by [`propagator_to_checker`]:
/// base variables `0..num_base` keep their ids, and base variable `k` gets
/// the shadows `num_base + 2k` (forced TRUE) and `num_base + 2k + 1`
/// (forced FALSE).
pub fn reified_variable_pairs(num_base: usize) -> Vec<ReifiedVariablePair> {
    (0..num_base)
        .map(|k| ReifiedVariablePair {
            base: Var(k),
            forced_true: Var(num_base + 2 * k),
            forced_false: Var(num_base + 2 * k + 1),
        })
        .collect()
}

/// Shadow variable that is TRUE when the literal holds.
fn shadow_when_holds(pairs: &[ReifiedVariablePair], l: Lit) -> Var {
    let p = pairs[l.var().index()];
    if l.is_positive() {
        p.forced_true
    } else {
        p.forced_false
    }
}

/// Shadow variable that is TRUE when the literal is falsified.
fn shadow_when_falsified(pairs: &[ReifiedVariablePair], l: Lit) -> Var {
    let p = pairs[l.var().index()];
    if l.is_positive() {
        p.forced_false
    } else {
        p.forced_true
    }
}

/// Rebuilds a propagator decomposition as a checker decomposition whose
/// output is forced FALSE exactly when unit propagation on the source
/// formula would conflict.
///
/// Long clauses are first split into three-literal chains (which preserves
/// unit propagation behaviour over the original variables). Then, per base
/// variable, channeling clauses record direct assignments on the shadows;
/// per source clause, one simulation clause per literal fires the target's
/// shadow once every other literal's falsified-shadow is TRUE; and a final
/// conflict clause per variable drives the output FALSE when both shadows
/// of the same variable are TRUE.
pub fn propagator_to_checker(
    d: &PropagatorDecomposition,
) -> Result<CheckerDecomposition, TransformError> {
    let source = convert_3cnf(d.formula());
    let base = source.num_vars();
    let pairs = reified_variable_pairs(base);
    let output = Var(3 * base);

    let mut clauses: Vec<Clause> = Vec::new();
    // Channeling: an external assignment of a base variable counts as a
    // (trivial) forcing of it.
    for p in &pairs {
        clauses.push(Clause::new(vec![
            Lit::neg(p.base),
            Lit::pos(p.forced_true),
        ])?);
        clauses.push(Clause::new(vec![
            Lit::pos(p.base),
            Lit::pos(p.forced_false),
        ])?);
    }
    // Simulation: when all but one literal of a source clause are
    // falsified, the remaining literal is forced to hold. Targets are
    // emitted last-literal first; antecedents keep clause order and come
    // before the consequent.
    for clause in source.clauses() {
        let lits = clause.lits();
        for target in (0..lits.len()).rev() {
            let mut sim = Vec::with_capacity(lits.len());
            for (i, &l) in lits.iter().enumerate() {
                if i != target {
                    sim.push(Lit::neg(shadow_when_falsified(&pairs, l)));
                }
            }
            sim.push(Lit::pos(shadow_when_holds(&pairs, lits[target])));
            clauses.push(Clause::new(sim)?);
        }
    }
    // Conflict detection: a variable forced both ways refutes the source.
    for p in &pairs {
        clauses.push(Clause::new(vec![
            Lit::neg(p.forced_true),
            Lit::neg(p.forced_false),
            Lit::neg(output),
        ])?);
    }

    let mut roles = source.roles().to_vec();
    roles.resize(3 * base + 1, VarRole::Aux);
    roles[output.index()] = VarRole::Output;
    let formula = ClauseSet::new(roles, clauses)?;
    Ok(CheckerDecomposition::new(formula, d.encoding().clone())?)
}

/// Rebuilds a checker decomposition as a propagator decomposition: one
/// renamed copy of the checker per input variable, sibling values fixed
/// FALSE inside the copy, plus a bridge clause pruning the watched input
/// when the copy's output fires.
///
/// Fixed sibling literals are applied by clause simplification — clauses
/// satisfied by a fixed FALSE sibling disappear, falsified positive
/// sibling literals are deleted — rather than by adding unit clauses, so
/// the result conflicts exactly when the source formula would. Renamed
/// variables are numbered densely: copy k (in encoding-pair order) maps
/// the source's non-input variables, ascending, onto a fresh block after
/// the input range. Identical clauses arising in several copies (for
/// example clauses that mention no renamed variable) are emitted once.
pub fn checker_to_propagator(
    d: &CheckerDecomposition,
) -> Result<PropagatorDecomposition, TransformError> {
    let source = d.formula();
    let map = d.encoding();
    let inputs: BTreeSet<Var> = map.pairs().map(|(_, _, v)| v).collect();
    let renamed: Vec<Var> = (0..source.num_vars())
        .map(Var)
        .filter(|v| !inputs.contains(v))
        .collect();
    let rank: BTreeMap<Var, usize> = renamed.iter().enumerate().map(|(r, &v)| (v, r)).collect();
    let copy_width = renamed.len();
    let first_fresh = inputs.iter().next_back().map_or(0, |v| v.index() + 1);

    let mut clauses: Vec<Clause> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<Lit>> = BTreeSet::new();

    for (k, (i, j, watched)) in map.pairs().enumerate() {
        let fresh_base = first_fresh + k * copy_width;
        let rename = |v: Var| -> Var { rank.get(&v).map_or(v, |&r| Var(fresh_base + r)) };
        'clause: for (ci, clause) in source.clauses().iter().enumerate() {
            let mut lits = Vec::with_capacity(clause.len());
            for &l in clause.lits() {
                let sibling = map
                    .pair_of(l.var())
                    .is_some_and(|(vi, vj)| vi == i && vj != j);
                if sibling {
                    if !l.is_positive() {
                        // The fixed FALSE sibling satisfies the clause.
                        continue 'clause;
                    }
                    // The fixed FALSE sibling falsifies this literal.
                    continue;
                }
                lits.push(Lit::new(rename(l.var()), l.is_positive()));
            }
            if lits.is_empty() {
                return Err(TransformError::EmptyClauseAfterFixing { clause_index: ci });
            }
            let simplified = Clause::new(lits)?;
            if seen.insert(simplified.lit_set()) {
                clauses.push(simplified);
            }
        }
        // Bridge: the copy's output fires exactly when value j of CSP
        // variable i is dis-entailed, which prunes the watched input.
        let bridge = Clause::new(vec![Lit::pos(rename(d.output_var())), Lit::neg(watched)])?;
        if seen.insert(bridge.lit_set()) {
            clauses.push(bridge);
        }
    }

    let mut roles = vec![VarRole::Aux; first_fresh + map.num_prop_vars() * copy_width];
    for (_, _, v) in map.pairs() {
        roles[v.index()] = VarRole::Input;
    }
    let formula = ClauseSet::new(roles, clauses)?;
    Ok(PropagatorDecomposition::new(formula, map.clone())?)
}
