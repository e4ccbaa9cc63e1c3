//! Unit propagation to fixpoint.
//!
//! The engine is counter-based: each clause keeps counts of satisfied and
//! unassigned literals, and a FIFO queue of clause indices (ascending on
//! ties) drives the search for unit clauses. This gives a deterministic
//! derivation trail. Unit propagation is confluent, so any fair strategy
//! reaches the same fixpoint; the queue order only fixes the trail.

use thiserror::Error;

use crate::cnf::{Clause, ClauseSet, Lit, PartialAssignment, TruthValue, Var};

/// One forced assignment: `lit` became true because clause `clause` was unit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrailEntry {
    pub lit: Lit,
    pub clause: usize,
}

/// Result of running unit propagation to fixpoint (or to the first conflict).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropagationOutcome {
    /// Assignment at the fixpoint, or at the moment the conflict surfaced.
    pub assignment: PartialAssignment,
    /// Index of the first clause found with every literal false, if any.
    pub conflict: Option<usize>,
    /// Forced literals in derivation order.
    pub trail: Vec<TrailEntry>,
}

impl PropagationOutcome {
    pub fn is_conflict(&self) -> bool {
        self.conflict.is_some()
    }

    /// Variables that were unset in `start` and are set in the outcome.
    pub fn forced_vars<'a>(
        &'a self,
        start: &'a PartialAssignment,
    ) -> impl Iterator<Item = (Var, TruthValue)> + 'a {
        self.assignment
            .assigned_vars()
            .filter(move |(v, _)| !start.value(*v).is_set())
    }
}

struct ClauseState {
    satisfied: usize,
    unassigned: usize,
}

fn classify(clause: &Clause, a: &PartialAssignment) -> ClauseState {
    let mut satisfied = 0;
    let mut unassigned = 0;
    for &l in clause.lits() {
        match a.lit_value(l) {
            TruthValue::True => satisfied += 1,
            TruthValue::Unset => unassigned += 1,
            TruthValue::False => {}
        }
    }
    ClauseState {
        satisfied,
        unassigned,
    }
}

/// Runs unit propagation on `f` starting from `start`.
///
/// `start.len()` must equal `f.num_vars()`. The start assignment itself is
/// never contradicted: a clause already false under `start` reports a
/// conflict, it does not flip anything.
pub fn unit_propagate(f: &ClauseSet, start: &PartialAssignment) -> PropagationOutcome {
    assert_eq!(
        start.len(),
        f.num_vars(),
        "assignment must cover the formula's variables"
    );
    let clauses = f.clauses();
    let mut assignment = start.clone();
    let mut state: Vec<ClauseState> = clauses.iter().map(|c| classify(c, &assignment)).collect();

    // occ[v] = (clause index, polarity of v there), ascending by index.
    // A variable appears at most once per clause, so the update is exact.
    let mut occ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); f.num_vars()];
    for (ci, c) in clauses.iter().enumerate() {
        for &l in c.lits() {
            occ[l.var().index()].push((ci, l.is_positive()));
        }
    }

    let mut queue: std::collections::VecDeque<usize> = Default::default();
    let mut queued = vec![false; clauses.len()];
    for (ci, st) in state.iter().enumerate() {
        if st.satisfied == 0 && st.unassigned <= 1 {
            queue.push_back(ci);
            queued[ci] = true;
        }
    }

    let mut trail = Vec::new();
    while let Some(ci) = queue.pop_front() {
        queued[ci] = false;
        let st = &state[ci];
        if st.satisfied > 0 {
            continue;
        }
        if st.unassigned == 0 {
            return PropagationOutcome {
                assignment,
                conflict: Some(ci),
                trail,
            };
        }
        let lit = clauses[ci]
            .lits()
            .iter()
            .copied()
            .find(|&l| !assignment.value(l.var()).is_set())
            .expect("clause has exactly one unassigned literal");
        assignment.assign(lit);
        trail.push(TrailEntry { lit, clause: ci });
        for &(cj, positive) in &occ[lit.var().index()] {
            let st = &mut state[cj];
            if positive == lit.is_positive() {
                st.satisfied += 1;
            } else {
                st.unassigned -= 1;
            }
            if st.satisfied == 0 && st.unassigned <= 1 && !queued[cj] {
                queue.push_back(cj);
                queued[cj] = true;
            }
        }
    }
    PropagationOutcome {
        assignment,
        conflict: None,
        trail,
    }
}

/// Result of breadth-first unit propagation rounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoundsOutcome {
    pub assignment: PartialAssignment,
    /// Literals forced in each round, in clause-index order within a round.
    pub rounds: Vec<Vec<TrailEntry>>,
    /// 1-based round in which a conflict surfaced, if any.
    pub conflict_round: Option<usize>,
}

/// Breadth-first unit propagation: each round inspects every clause against
/// the assignment reached after the previous round, then applies all forced
/// literals at once. Used to cross-check layer semantics of circuits built
/// from clause sets. `max_rounds` limits the number of rounds; `None` runs
/// to fixpoint.
pub fn propagate_by_rounds(
    f: &ClauseSet,
    start: &PartialAssignment,
    max_rounds: Option<usize>,
) -> RoundsOutcome {
    assert_eq!(
        start.len(),
        f.num_vars(),
        "assignment must cover the formula's variables"
    );
    let mut assignment = start.clone();
    let mut rounds: Vec<Vec<TrailEntry>> = Vec::new();
    let mut round_no = 0usize;
    loop {
        if let Some(limit) = max_rounds {
            if round_no >= limit {
                break;
            }
        }
        round_no += 1;
        let mut forced: Vec<TrailEntry> = Vec::new();
        for (ci, c) in f.clauses().iter().enumerate() {
            let st = classify(c, &assignment);
            if st.satisfied > 0 {
                continue;
            }
            if st.unassigned == 0 {
                rounds.push(forced);
                return RoundsOutcome {
                    assignment,
                    rounds,
                    conflict_round: Some(round_no),
                };
            }
            if st.unassigned == 1 {
                let lit = c
                    .lits()
                    .iter()
                    .copied()
                    .find(|&l| !assignment.value(l.var()).is_set())
                    .expect("clause has exactly one unassigned literal");
                forced.push(TrailEntry { lit, clause: ci });
            }
        }
        if forced.is_empty() {
            break;
        }
        // Two clauses may force complementary literals in the same round.
        for w in &forced {
            if assignment.lit_value(w.lit) == TruthValue::False {
                rounds.push(forced);
                return RoundsOutcome {
                    assignment,
                    rounds,
                    conflict_round: Some(round_no),
                };
            }
            assignment.assign(w.lit);
        }
        rounds.push(forced);
    }
    RoundsOutcome {
        assignment,
        rounds,
        conflict_round: None,
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ProbeError {
    #[error("literal {lit} is already assigned")]
    AlreadyAssigned { lit: Lit },
}

/// Failed literal test: make `l` true on top of `a`, propagate, and report
/// whether a conflict follows. Errors if `l`'s variable is already assigned.
pub fn failed_literal_test(
    f: &ClauseSet,
    a: &PartialAssignment,
    l: Lit,
) -> Result<bool, ProbeError> {
    if a.value(l.var()).is_set() {
        return Err(ProbeError::AlreadyAssigned { lit: l });
    }
    let mut probe = a.clone();
    probe.assign(l);
    Ok(unit_propagate(f, &probe).is_conflict())
}
