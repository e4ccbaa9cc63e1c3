//! Finite-domain CSP model and the direct propositional encoding.
//!
//! Values are dense indices `0..domain_size` per variable; named values are
//! a concern of parsers only. The direct encoding introduces one Boolean
//! variable per (variable, value) pair: FALSE means the value is pruned,
//! TRUE is used only when a domain is a singleton, and UNSET otherwise, so
//! the same domain can be represented by several partial assignments.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cnf::{Clause, Lit, PartialAssignment, TruthValue, Var, VarRole};

/// A CSP variable. Ids are dense `0..n` within a model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CspVariable {
    pub id: usize,
    pub domain_size: usize,
}

/// Convenience constructor: `n` variables, all with domain `{0..d-1}`.
pub fn uniform_vars(n: usize, d: usize) -> Vec<CspVariable> {
    (0..n)
        .map(|id| CspVariable { id, domain_size: d })
        .collect()
}

fn check_vars(vars: &[CspVariable]) -> Result<(), ModelError> {
    for (i, v) in vars.iter().enumerate() {
        if v.id != i {
            return Err(ModelError::NonDenseVariableIds {
                expected: i,
                found: v.id,
            });
        }
        if v.domain_size == 0 {
            return Err(ModelError::EmptyInitialDomain { var: i });
        }
        if v.domain_size > 63 {
            return Err(ModelError::DomainTooLarge {
                var: i,
                size: v.domain_size,
            });
        }
    }
    Ok(())
}

/// Current domains of every variable of a model.
///
/// An empty per-variable set is allowed only in the canonical wipeout state,
/// in which every variable is empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DomainState {
    masks: Vec<u64>,
}

impl DomainState {
    /// Every variable keeps its full initial domain.
    pub fn full(vars: &[CspVariable]) -> Self {
        DomainState {
            masks: vars.iter().map(|v| (1u64 << v.domain_size) - 1).collect(),
        }
    }

    /// The canonical wipeout state: every domain empty.
    pub fn wipeout(num_vars: usize) -> Self {
        DomainState {
            masks: vec![0; num_vars],
        }
    }

    /// Builds a state from explicit value sets, validating against `vars`.
    pub fn from_sets(sets: &[Vec<usize>], vars: &[CspVariable]) -> Result<Self, ModelError> {
        if sets.len() != vars.len() {
            return Err(ModelError::WrongVariableCount {
                expected: vars.len(),
                found: sets.len(),
            });
        }
        let mut masks = vec![0u64; vars.len()];
        for (i, set) in sets.iter().enumerate() {
            for &v in set {
                if v >= vars[i].domain_size {
                    return Err(ModelError::ValueOutOfRange { var: i, value: v });
                }
                masks[i] |= 1 << v;
            }
        }
        let state = DomainState { masks };
        if state.masks.contains(&0) && !state.is_wipeout() {
            return Err(ModelError::PartiallyEmptyState);
        }
        Ok(state)
    }

    pub fn num_vars(&self) -> usize {
        self.masks.len()
    }

    pub fn contains(&self, var: usize, value: usize) -> bool {
        self.masks[var] >> value & 1 == 1
    }

    pub fn values(&self, var: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.masks[var];
        (0..64).filter(move |v| mask >> v & 1 == 1)
    }

    pub fn domain_len(&self, var: usize) -> usize {
        self.masks[var].count_ones() as usize
    }

    pub fn is_singleton(&self, var: usize) -> bool {
        self.domain_len(var) == 1
    }

    pub fn is_wipeout(&self) -> bool {
        self.masks.iter().all(|&m| m == 0)
    }

    pub fn any_empty(&self) -> bool {
        self.masks.contains(&0)
    }

    /// This state with value `value` removed from `var`'s domain.
    pub fn without(&self, var: usize, value: usize) -> Self {
        let mut masks = self.masks.clone();
        masks[var] &= !(1 << value);
        DomainState { masks }
    }

    /// This state with `var`'s domain restricted to `{value}` (intersected
    /// with the current domain, so the result may be empty on `var`).
    pub fn restricted_to(&self, var: usize, value: usize) -> Self {
        let mut masks = self.masks.clone();
        masks[var] &= 1 << value;
        DomainState { masks }
    }

    /// Pointwise inclusion of domains.
    pub fn subset_of(&self, other: &DomainState) -> bool {
        self.masks.len() == other.masks.len()
            && self
                .masks
                .iter()
                .zip(&other.masks)
                .all(|(a, b)| a & !b == 0)
    }

    /// Does `tuple` (one value per variable) lie within the domains?
    pub fn admits_tuple(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.masks.len()
            && tuple.iter().enumerate().all(|(i, &v)| self.contains(i, v))
    }
}

impl fmt::Display for DomainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, _) in self.masks.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{{")?;
            let mut first = true;
            for v in self.values(i) {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// A constraint given extensionally by its allowed tuples.
///
/// Tuple order is preserved: generated encodings index their auxiliary
/// variables by tuple position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionalConstraint {
    scope: Vec<usize>,
    domain_sizes: Vec<usize>,
    tuples: Vec<Vec<usize>>,
}

impl ExtensionalConstraint {
    pub fn new(
        scope: Vec<usize>,
        domain_sizes: Vec<usize>,
        tuples: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        if scope.is_empty() || scope.len() != domain_sizes.len() {
            return Err(ModelError::BadScope);
        }
        let mut seen_vars = BTreeSet::new();
        for &v in &scope {
            if !seen_vars.insert(v) {
                return Err(ModelError::BadScope);
            }
        }
        if domain_sizes.contains(&0) {
            return Err(ModelError::EmptyInitialDomain {
                var: scope[domain_sizes.iter().position(|&d| d == 0).unwrap()],
            });
        }
        let mut seen = BTreeSet::new();
        for t in &tuples {
            if t.len() != scope.len() {
                return Err(ModelError::BadTupleArity {
                    expected: scope.len(),
                    found: t.len(),
                });
            }
            for (i, &v) in t.iter().enumerate() {
                if v >= domain_sizes[i] {
                    return Err(ModelError::ValueOutOfRange {
                        var: scope[i],
                        value: v,
                    });
                }
            }
            if !seen.insert(t.clone()) {
                return Err(ModelError::DuplicateTuple { tuple: t.clone() });
            }
        }
        Ok(ExtensionalConstraint {
            scope,
            domain_sizes,
            tuples,
        })
    }

    /// A table over variables `0..k-1` in scope order.
    pub fn with_identity_scope(
        domain_sizes: Vec<usize>,
        tuples: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let scope = (0..domain_sizes.len()).collect();
        ExtensionalConstraint::new(scope, domain_sizes, tuples)
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn domain_sizes(&self) -> &[usize] {
        &self.domain_sizes
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// The scope as a standalone list of CSP variables (ids renumbered to
    /// scope positions).
    pub fn scope_vars(&self) -> Vec<CspVariable> {
        self.domain_sizes
            .iter()
            .enumerate()
            .map(|(id, &domain_size)| CspVariable { id, domain_size })
            .collect()
    }

    /// The table of every injective tuple: the AllDifferent constraint.
    pub fn all_different(n: usize, d: usize) -> Result<Self, ModelError> {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &tuples {
                for v in 0..d {
                    if !t.contains(&v) {
                        let mut t2 = t.clone();
                        t2.push(v);
                        next.push(t2);
                    }
                }
            }
            tuples = next;
        }
        ExtensionalConstraint::with_identity_scope(vec![d; n], tuples)
    }
}

/// The direct encoding: a bijection between (variable, value) pairs and
/// propositional variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirectEncodingMap {
    vars: Vec<CspVariable>,
    var_of: Vec<Vec<Var>>,
    csp_of: Vec<(usize, usize)>, // indexed by dense prop var position
    prop_index: std::collections::BTreeMap<Var, usize>,
}

impl DirectEncodingMap {
    /// The canonical map: propositional variables numbered variable-major,
    /// value-ascending, starting at 0.
    pub fn new(vars: &[CspVariable]) -> Result<Self, ModelError> {
        check_vars(vars)?;
        let mut var_of = Vec::with_capacity(vars.len());
        let mut csp_of = Vec::new();
        let mut next = 0usize;
        for v in vars {
            let mut row = Vec::with_capacity(v.domain_size);
            for value in 0..v.domain_size {
                row.push(Var(next));
                csp_of.push((v.id, value));
                next += 1;
            }
            var_of.push(row);
        }
        let prop_index = csp_of
            .iter()
            .enumerate()
            .map(|(pos, _)| (Var(pos), pos))
            .collect();
        Ok(DirectEncodingMap {
            vars: vars.to_vec(),
            var_of,
            csp_of,
            prop_index,
        })
    }

    /// A map with explicit propositional variable placement, e.g. recovered
    /// from an annotated file. `placement[i][j]` is the propositional
    /// variable of (variable i, value j).
    pub fn with_placement(
        vars: &[CspVariable],
        placement: Vec<Vec<Var>>,
    ) -> Result<Self, ModelError> {
        check_vars(vars)?;
        if placement.len() != vars.len()
            || placement
                .iter()
                .zip(vars)
                .any(|(row, v)| row.len() != v.domain_size)
        {
            return Err(ModelError::BadPlacement);
        }
        let mut csp_of = Vec::new();
        let mut prop_index = std::collections::BTreeMap::new();
        for (i, row) in placement.iter().enumerate() {
            for (j, &pv) in row.iter().enumerate() {
                if prop_index.insert(pv, csp_of.len()).is_some() {
                    return Err(ModelError::BadPlacement);
                }
                csp_of.push((i, j));
            }
        }
        Ok(DirectEncodingMap {
            vars: vars.to_vec(),
            var_of: placement,
            csp_of,
            prop_index,
        })
    }

    pub fn csp_vars(&self) -> &[CspVariable] {
        &self.vars
    }

    pub fn num_csp_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_prop_vars(&self) -> usize {
        self.csp_of.len()
    }

    pub fn prop_var(&self, var: usize, value: usize) -> Var {
        self.var_of[var][value]
    }

    /// The (variable, value) pair of a propositional variable, if it is one
    /// of the encoding's variables.
    pub fn pair_of(&self, v: Var) -> Option<(usize, usize)> {
        self.prop_index.get(&v).map(|&pos| self.csp_of[pos])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Var)> + '_ {
        self.vars.iter().flat_map(move |cv| {
            (0..cv.domain_size).map(move |value| (cv.id, value, self.prop_var(cv.id, value)))
        })
    }

    /// Role vector for a formula over exactly the encoding's variables plus
    /// `extra_aux` auxiliaries and optionally an output appended at the end.
    pub fn roles_with(&self, extra_aux: usize, output: bool) -> Vec<VarRole> {
        let mut roles = vec![VarRole::Aux; self.min_num_vars()];
        for (_, _, pv) in self.pairs() {
            roles[pv.index()] = VarRole::Input;
        }
        roles.extend(std::iter::repeat_n(VarRole::Aux, extra_aux));
        if output {
            roles.push(VarRole::Output);
        }
        roles
    }

    /// Smallest variable count covering every encoding variable.
    pub fn min_num_vars(&self) -> usize {
        self.prop_index
            .keys()
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Encodes a domain state: FALSE for pruned values, TRUE for the value
    /// of a singleton domain, UNSET otherwise.
    pub fn encode_domain(&self, state: &DomainState) -> PartialAssignment {
        self.encode(state, true)
    }

    /// The FALSE-only representation of the same domain state: singleton
    /// domains are left UNSET rather than set TRUE.
    pub fn encode_domain_false_only(&self, state: &DomainState) -> PartialAssignment {
        self.encode(state, false)
    }

    fn encode(&self, state: &DomainState, mark_singletons: bool) -> PartialAssignment {
        assert_eq!(
            state.num_vars(),
            self.vars.len(),
            "state and map disagree on variables"
        );
        let mut a = PartialAssignment::new(self.min_num_vars());
        for cv in &self.vars {
            let singleton = state.is_singleton(cv.id);
            for value in 0..cv.domain_size {
                let pv = self.prop_var(cv.id, value);
                if !state.contains(cv.id, value) {
                    a.set(pv, TruthValue::False);
                } else if singleton && mark_singletons {
                    a.set(pv, TruthValue::True);
                }
            }
        }
        a
    }

    /// Decodes an assignment: a value is in the domain iff its variable is
    /// not FALSE. If some variable loses every value, the canonical wipeout
    /// state is returned.
    pub fn decode_assignment(&self, a: &PartialAssignment) -> DomainState {
        let mut masks = vec![0u64; self.vars.len()];
        for cv in &self.vars {
            for value in 0..cv.domain_size {
                let pv = self.prop_var(cv.id, value);
                if a.value(pv) != TruthValue::False {
                    masks[cv.id] |= 1 << value;
                }
            }
        }
        if masks.contains(&0) {
            return DomainState::wipeout(self.vars.len());
        }
        DomainState { masks }
    }

    /// One at-least-one clause per variable: some value stays.
    pub fn at_least_one_clauses(&self) -> Vec<Clause> {
        self.vars
            .iter()
            .map(|cv| {
                let lits = (0..cv.domain_size)
                    .map(|value| Lit::pos(self.prop_var(cv.id, value)))
                    .collect();
                Clause::new(lits).expect("initial domains are nonempty")
            })
            .collect()
    }

    /// Pairwise at-most-one clauses per variable.
    pub fn at_most_one_clauses(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        for cv in &self.vars {
            for a in 0..cv.domain_size {
                for b in a + 1..cv.domain_size {
                    out.push(
                        Clause::new(vec![
                            Lit::neg(self.prop_var(cv.id, a)),
                            Lit::neg(self.prop_var(cv.id, b)),
                        ])
                        .expect("two distinct variables"),
                    );
                }
            }
        }
        out
    }
}

/// Cap on exhaustive domain-state enumeration, expressed as a power of two.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumerationBudget {
    pub log2_states: u32,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { log2_states: 24 }
    }
}

impl EnumerationBudget {
    pub fn new(log2_states: u32) -> Self {
        EnumerationBudget { log2_states }
    }

    /// The enumeration space is bounded by `2^(sum of domain sizes)`.
    pub fn check(&self, vars: &[CspVariable]) -> Result<(), ModelError> {
        let required: usize = vars.iter().map(|v| v.domain_size).sum();
        if required as u64 > self.log2_states as u64 {
            return Err(ModelError::BudgetExceeded {
                required_log2: required as u32,
                allowed_log2: self.log2_states,
            });
        }
        Ok(())
    }
}

/// Enumerates every domain state in which each variable keeps a nonempty
/// subset of its initial domain. Deterministic lexicographic order: the
/// last variable's mask varies fastest, masks ascending. The number of
/// states is the product over variables of `2^domain_size - 1`.
pub fn enumerate_domain_states(
    vars: &[CspVariable],
    budget: EnumerationBudget,
) -> Result<DomainStateIter, ModelError> {
    check_vars(vars)?;
    budget.check(vars)?;
    Ok(DomainStateIter {
        limits: vars.iter().map(|v| (1u64 << v.domain_size) - 1).collect(),
        current: vec![1; vars.len()],
        done: vars.is_empty(),
    })
}

#[derive(Clone, Debug)]
pub struct DomainStateIter {
    limits: Vec<u64>,
    current: Vec<u64>,
    done: bool,
}

impl Iterator for DomainStateIter {
    type Item = DomainState;

    fn next(&mut self) -> Option<DomainState> {
        if self.done {
            return None;
        }
        let state = DomainState {
            masks: self.current.clone(),
        };
        // Odometer step, last position fastest.
        let mut pos = self.current.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.current[pos] < self.limits[pos] {
                self.current[pos] += 1;
                for later in pos + 1..self.current.len() {
                    self.current[later] = 1;
                }
                break;
            }
        }
        Some(state)
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ModelError {
    #[error("variable ids must be dense: expected {expected}, found {found}")]
    NonDenseVariableIds { expected: usize, found: usize },
    #[error("variable {var} has an empty initial domain")]
    EmptyInitialDomain { var: usize },
    #[error("variable {var} has domain size {size}, larger than supported")]
    DomainTooLarge { var: usize, size: usize },
    #[error("expected {expected} variables, found {found}")]
    WrongVariableCount { expected: usize, found: usize },
    #[error("value {value} out of range for variable {var}")]
    ValueOutOfRange { var: usize, value: usize },
    #[error("a non-wipeout state may not have an empty domain")]
    PartiallyEmptyState,
    #[error("scope must be nonempty, duplicate-free and match the domain list")]
    BadScope,
    #[error("tuple arity mismatch: expected {expected}, found {found}")]
    BadTupleArity { expected: usize, found: usize },
    #[error("duplicate tuple {tuple:?}")]
    DuplicateTuple { tuple: Vec<usize> },
    #[error("propositional variable placement is not a bijection")]
    BadPlacement,
    #[error("enumeration needs 2^{required_log2} states, budget allows 2^{allowed_log2}")]
    BudgetExceeded {
        required_log2: u32,
        allowed_log2: u32,
    },
}
