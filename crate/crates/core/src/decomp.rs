//! Propagator and checker decompositions, and their validation.
//!
//! A decomposition pairs a clause set with the direct-encoding map that
//! gives its input variables meaning. Validation enumerates every domain
//! state (within budget), runs unit propagation and compares the observable
//! behaviour with an oracle. A domain state has several faithful partial
//! assignments: the canonical one marks singleton domains TRUE, the
//! FALSE-only one does not. A decomposition must behave correctly under
//! both, so every state is checked twice.

use std::fmt;

use thiserror::Error;

use crate::cnf::{ClauseSet, PartialAssignment, TruthValue, Var, VarRole};
use crate::csp::{
    enumerate_domain_states, DirectEncodingMap, DomainState, EnumerationBudget, ModelError,
};
use crate::oracle::PropagatorFunction;
use crate::propagate::unit_propagate;

/// A clause set on which unit propagation prunes direct-encoding variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropagatorDecomposition {
    formula: ClauseSet,
    encoding: DirectEncodingMap,
}

/// A clause set whose single output variable reports inconsistency.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckerDecomposition {
    formula: ClauseSet,
    encoding: DirectEncodingMap,
}

fn check_inputs_match(
    formula: &ClauseSet,
    encoding: &DirectEncodingMap,
) -> Result<(), DecompError> {
    let tagged: Vec<Var> = formula.input_vars().collect();
    let mapped: std::collections::BTreeSet<Var> = encoding.pairs().map(|(_, _, v)| v).collect();
    if tagged.len() != mapped.len() || tagged.iter().any(|v| !mapped.contains(v)) {
        return Err(DecompError::InputRolesDisagreeWithEncoding);
    }
    Ok(())
}

impl PropagatorDecomposition {
    pub fn new(formula: ClauseSet, encoding: DirectEncodingMap) -> Result<Self, DecompError> {
        if formula.output_var().is_some() {
            return Err(DecompError::PropagatorHasOutput);
        }
        check_inputs_match(&formula, &encoding)?;
        Ok(PropagatorDecomposition { formula, encoding })
    }

    pub fn formula(&self) -> &ClauseSet {
        &self.formula
    }

    pub fn encoding(&self) -> &DirectEncodingMap {
        &self.encoding
    }

    pub fn size_summary(&self) -> SizeSummary {
        SizeSummary {
            inputs: self.formula.num_inputs(),
            aux: self.formula.num_aux(),
            clauses: self.formula.num_clauses(),
        }
    }
}

impl CheckerDecomposition {
    pub fn new(formula: ClauseSet, encoding: DirectEncodingMap) -> Result<Self, DecompError> {
        if formula.output_var().is_none() {
            return Err(DecompError::CheckerMissingOutput);
        }
        check_inputs_match(&formula, &encoding)?;
        Ok(CheckerDecomposition { formula, encoding })
    }

    pub fn formula(&self) -> &ClauseSet {
        &self.formula
    }

    pub fn encoding(&self) -> &DirectEncodingMap {
        &self.encoding
    }

    pub fn output_var(&self) -> Var {
        self.formula
            .output_var()
            .expect("validated at construction")
    }

    pub fn size_summary(&self) -> SizeSummary {
        SizeSummary {
            inputs: self.formula.num_inputs(),
            aux: self.formula.num_aux(),
            clauses: self.formula.num_clauses(),
        }
    }
}

/// Clause and variable counts of a decomposition, reported by transforms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SizeSummary {
    pub inputs: usize,
    pub aux: usize,
    pub clauses: usize,
}

impl fmt::Display for SizeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inputs={} aux={} clauses={}",
            self.inputs, self.aux, self.clauses
        )
    }
}

/// Which partial assignment represented the domain state in a check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EncodeVariant {
    /// Singleton domains set TRUE.
    Canonical,
    /// Only pruned values set FALSE.
    FalseOnly,
}

impl fmt::Display for EncodeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeVariant::Canonical => write!(f, "canonical"),
            EncodeVariant::FalseOnly => write!(f, "false-only"),
        }
    }
}

/// A validation failure at one domain state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub state: DomainState,
    pub variant: EncodeVariant,
    pub issue: Issue,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Issue {
    /// Unit propagation assigned an input variable of a checker.
    InputForced { var: Var, value: TruthValue },
    /// A conflict where the oracle sees no wipeout (or any conflict, for a
    /// checker).
    UnexpectedConflict { clause: usize },
    /// The oracle wipes out but propagation found no conflict.
    MissingConflict,
    /// Output forced FALSE disagrees with the checker oracle.
    OutputMismatch {
        oracle_consistent: bool,
        forced_false: bool,
    },
    /// Values forced FALSE differ from the oracle's pruning.
    PruneMismatch {
        expected: Vec<(usize, usize)>,
        observed: Vec<(usize, usize)>,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state={} encoding={} ", self.state, self.variant)?;
        match &self.issue {
            Issue::InputForced { var, value } => {
                write!(f, "issue=input-forced var={var} value={value:?}")
            }
            Issue::UnexpectedConflict { clause } => {
                write!(f, "issue=unexpected-conflict clause={clause}")
            }
            Issue::MissingConflict => write!(f, "issue=missing-conflict"),
            Issue::OutputMismatch { oracle_consistent, forced_false } => write!(
                f,
                "issue=output-mismatch oracle-consistent={oracle_consistent} output-forced-false={forced_false}"
            ),
            Issue::PruneMismatch { expected, observed } => {
                write!(f, "issue=prune-mismatch expected=")?;
                write_pairs(f, expected)?;
                write!(f, " observed=")?;
                write_pairs(f, observed)
            }
        }
    }
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &[(usize, usize)]) -> fmt::Result {
    write!(f, "{{")?;
    for (k, (var, value)) in pairs.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "x{var}={value}")?;
    }
    write!(f, "}}")
}

/// Outcome of validating a decomposition against an oracle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub states_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states-checked={}", self.states_checked)?;
        for c in &self.counterexamples {
            writeln!(f, "{c}")?;
        }
        write!(f, "verdict={}", if self.passed() { "pass" } else { "fail" })
    }
}

pub(crate) fn variants(
    map: &DirectEncodingMap,
    state: &DomainState,
    num_vars: usize,
) -> [(EncodeVariant, PartialAssignment); 2] {
    [
        (
            EncodeVariant::Canonical,
            map.encode_domain(state).extended_to(num_vars),
        ),
        (
            EncodeVariant::FalseOnly,
            map.encode_domain_false_only(state).extended_to(num_vars),
        ),
    ]
}

/// Checks that unit propagation on the formula forces the output FALSE
/// exactly at the states the oracle rejects, never touches an input
/// variable and never conflicts.
pub fn validate_checker_decomposition(
    d: &CheckerDecomposition,
    oracle: &dyn Fn(&DomainState) -> bool,
    budget: EnumerationBudget,
) -> Result<ValidationReport, ModelError> {
    let map = d.encoding();
    let z = d.output_var();
    let mut report = ValidationReport {
        states_checked: 0,
        counterexamples: Vec::new(),
    };
    for state in enumerate_domain_states(map.csp_vars(), budget)? {
        report.states_checked += 1;
        let consistent = oracle(&state);
        for (variant, start) in variants(map, &state, d.formula().num_vars()) {
            let out = unit_propagate(d.formula(), &start);
            let mut issues = Vec::new();
            if let Some(clause) = out.conflict {
                issues.push(Issue::UnexpectedConflict { clause });
            }
            for (var, value) in out.forced_vars(&start) {
                if d.formula().role(var) == VarRole::Input {
                    issues.push(Issue::InputForced { var, value });
                }
            }
            let forced_false = out.assignment.value(z) == TruthValue::False;
            if forced_false == consistent {
                issues.push(Issue::OutputMismatch {
                    oracle_consistent: consistent,
                    forced_false,
                });
            }
            report
                .counterexamples
                .extend(issues.into_iter().map(|issue| Counterexample {
                    state: state.clone(),
                    variant,
                    issue,
                }));
        }
    }
    Ok(report)
}

/// Checks that unit propagation forces FALSE exactly the input variables the
/// oracle prunes, and conflicts exactly at wipeout states.
pub fn validate_propagator_decomposition(
    d: &PropagatorDecomposition,
    oracle: &dyn Fn(&DomainState) -> DomainState,
    budget: EnumerationBudget,
) -> Result<ValidationReport, ModelError> {
    let map = d.encoding();
    let mut report = ValidationReport {
        states_checked: 0,
        counterexamples: Vec::new(),
    };
    for state in enumerate_domain_states(map.csp_vars(), budget)? {
        report.states_checked += 1;
        let expected = oracle(&state);
        let expect_wipeout = expected.is_wipeout();
        let expected_pruned: Vec<(usize, usize)> = pairs_in(&state)
            .filter(|&(i, j)| !expected.contains(i, j))
            .collect();
        for (variant, start) in variants(map, &state, d.formula().num_vars()) {
            let out = unit_propagate(d.formula(), &start);
            let issue = if out.is_conflict() {
                if expect_wipeout {
                    None
                } else {
                    Some(Issue::UnexpectedConflict {
                        clause: out.conflict.unwrap(),
                    })
                }
            } else if expect_wipeout {
                Some(Issue::MissingConflict)
            } else {
                let observed: Vec<(usize, usize)> = pairs_in(&state)
                    .filter(|&(i, j)| out.assignment.value(map.prop_var(i, j)) == TruthValue::False)
                    .collect();
                if observed != expected_pruned {
                    Some(Issue::PruneMismatch {
                        expected: expected_pruned.clone(),
                        observed,
                    })
                } else {
                    None
                }
            };
            if let Some(issue) = issue {
                report.counterexamples.push(Counterexample {
                    state: state.clone(),
                    variant,
                    issue,
                });
            }
        }
    }
    Ok(report)
}

fn pairs_in(state: &DomainState) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..state.num_vars()).flat_map(move |i| state.values(i).map(move |j| (i, j)))
}

/// The propagator computed by the clause set itself: encode the state
/// canonically, propagate, decode. A conflict decodes to wipeout.
pub fn induced_propagator(d: &PropagatorDecomposition) -> PropagatorFunction<'_> {
    Box::new(move |state: &DomainState| {
        let start = d
            .encoding()
            .encode_domain(state)
            .extended_to(d.formula().num_vars());
        let out = unit_propagate(d.formula(), &start);
        if out.is_conflict() {
            return DomainState::wipeout(state.num_vars());
        }
        d.encoding().decode_assignment(&out.assignment)
    })
}

/// Pointwise function properties of a propagator over every domain state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropagatorProperties {
    pub states_checked: usize,
    pub contracting: bool,
    pub idempotent: bool,
    pub monotone: bool,
}

impl PropagatorProperties {
    pub fn all_hold(&self) -> bool {
        self.contracting && self.idempotent && self.monotone
    }
}

/// Exhaustively checks that `f` is contracting (`f(D) ⊆ D`), idempotent
/// (`f(f(D)) = f(D)`) and monotone (`D' ⊆ D` implies `f(D') ⊆ f(D)`).
pub fn check_propagator_properties(
    f: &dyn Fn(&DomainState) -> DomainState,
    vars: &[crate::csp::CspVariable],
    budget: EnumerationBudget,
) -> Result<PropagatorProperties, ModelError> {
    let states: Vec<DomainState> = enumerate_domain_states(vars, budget)?.collect();
    let images: Vec<DomainState> = states.iter().map(f).collect();
    let contracting = states.iter().zip(&images).all(|(s, i)| i.subset_of(s));
    let idempotent = images.iter().all(|i| &f(i) == i);
    let mut monotone = true;
    'outer: for (a, fa) in states.iter().zip(&images) {
        for (b, fb) in states.iter().zip(&images) {
            if a.subset_of(b) && !fa.subset_of(fb) {
                monotone = false;
                break 'outer;
            }
        }
    }
    Ok(PropagatorProperties {
        states_checked: states.len(),
        contracting,
        idempotent,
        monotone,
    })
}

/// Exhaustively checks that a checker is monotone: shrinking domains can
/// only move its answer from consistent to inconsistent.
pub fn check_checker_monotone(
    f: &dyn Fn(&DomainState) -> bool,
    vars: &[crate::csp::CspVariable],
    budget: EnumerationBudget,
) -> Result<bool, ModelError> {
    let states: Vec<DomainState> = enumerate_domain_states(vars, budget)?.collect();
    let values: Vec<bool> = states.iter().map(f).collect();
    for (a, &fa) in states.iter().zip(&values) {
        for (b, &fb) in states.iter().zip(&values) {
            if a.subset_of(b) && fa && !fb {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum DecompError {
    #[error("a propagator decomposition must not declare an output variable")]
    PropagatorHasOutput,
    #[error("a checker decomposition needs exactly one output variable")]
    CheckerMissingOutput,
    #[error("input-tagged variables do not match the encoding map")]
    InputRolesDisagreeWithEncoding,
}
