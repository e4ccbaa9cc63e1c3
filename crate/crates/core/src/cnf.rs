//! Propositional clause sets with per-variable role tags.
//!
//! Variables are dense indices `0..num_vars`. Every variable carries a role:
//! `Input` variables are the direct-encoding literals set from outside,
//! `Aux` variables may only be touched by unit propagation, and the single
//! optional `Output` variable signals inconsistency when forced FALSE.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A propositional variable, a dense index into a [`ClauseSet`]'s variable table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based, as in the DIMACS text form.
        write!(f, "{}", self.0 + 1)
    }
}

/// A literal: a variable with a polarity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit {
    var: Var,
    positive: bool,
}

impl Lit {
    pub fn pos(var: Var) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Var) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn new(var: Var, positive: bool) -> Self {
        Lit { var, positive }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// 1-based signed integer form, negative for negated literals.
    pub fn to_dimacs(self) -> i64 {
        let v = (self.var.0 + 1) as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    /// Parses a 1-based signed integer literal. Zero is not a literal.
    pub fn from_dimacs(n: i64) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        let var = Var((n.unsigned_abs() - 1) as usize);
        Ok(Lit {
            var,
            positive: n > 0,
        })
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Nonempty, no duplicate or complementary pair.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, rejecting the empty clause, duplicate literals and
    /// tautological (complementary) pairs. Literal order is preserved.
    pub fn new(lits: Vec<Lit>) -> Result<Self, CnfError> {
        if lits.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        let mut seen: BTreeSet<Lit> = BTreeSet::new();
        for &l in &lits {
            if seen.contains(&l) {
                return Err(CnfError::DuplicateLiteral { var: l.var() });
            }
            if seen.contains(&l.negated()) {
                return Err(CnfError::TautologicalClause { var: l.var() });
            }
            seen.insert(l);
        }
        Ok(Clause { lits })
    }

    /// Builds a clause from 1-based signed integers.
    pub fn from_dimacs(ints: &[i64]) -> Result<Self, CnfError> {
        let lits = ints
            .iter()
            .map(|&n| Lit::from_dimacs(n))
            .collect::<Result<Vec<_>, _>>()?;
        Clause::new(lits)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the empty clause is unrepresentable
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    pub fn max_var(&self) -> Var {
        self.lits
            .iter()
            .map(|l| l.var())
            .max()
            .expect("clause is nonempty")
    }

    /// The literal set irrespective of order, used for duplicate detection.
    pub fn lit_set(&self) -> BTreeSet<Lit> {
        self.lits.iter().copied().collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.lits {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        write!(f, " 0")
    }
}

/// Role of a variable inside a clause set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarRole {
    /// A direct-encoding variable, set from outside by the domain encoding.
    Input,
    /// Internal variable; only unit propagation may assign it.
    Aux,
    /// The single consistency flag; forced FALSE signals inconsistency.
    Output,
}

/// A CNF formula plus the role of every variable.
///
/// Invariants: `roles.len() == num_vars`; every literal references a declared
/// variable; at most one variable is tagged `Output`; no two clauses have the
/// same literal set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClauseSet {
    roles: Vec<VarRole>,
    clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn new(roles: Vec<VarRole>, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        let num_vars = roles.len();
        let mut outputs = roles.iter().filter(|r| **r == VarRole::Output);
        if outputs.nth(1).is_some() {
            return Err(CnfError::MultipleOutputs);
        }
        let mut seen: BTreeSet<BTreeSet<Lit>> = BTreeSet::new();
        for (idx, c) in clauses.iter().enumerate() {
            if c.max_var().index() >= num_vars {
                return Err(CnfError::VarOutOfRange {
                    var: c.max_var(),
                    num_vars,
                });
            }
            if !seen.insert(c.lit_set()) {
                return Err(CnfError::DuplicateClause { index: idx });
            }
        }
        Ok(ClauseSet { roles, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.roles.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn role(&self, var: Var) -> VarRole {
        self.roles[var.index()]
    }

    pub fn output_var(&self) -> Option<Var> {
        self.roles
            .iter()
            .position(|r| *r == VarRole::Output)
            .map(Var)
    }

    pub fn input_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == VarRole::Input)
            .map(|(i, _)| Var(i))
    }

    pub fn aux_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == VarRole::Aux)
            .map(|(i, _)| Var(i))
    }

    pub fn num_inputs(&self) -> usize {
        self.input_vars().count()
    }

    pub fn num_aux(&self) -> usize {
        self.aux_vars().count()
    }

    /// Returns the clauses reordered by `perm` (a permutation of clause
    /// indices). Used by confluence tests; roles are unchanged.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, CnfError> {
        if perm.len() != self.clauses.len() {
            return Err(CnfError::BadPermutation);
        }
        let mut used = vec![false; perm.len()];
        let mut clauses = Vec::with_capacity(perm.len());
        for &p in perm {
            if p >= perm.len() || used[p] {
                return Err(CnfError::BadPermutation);
            }
            used[p] = true;
            clauses.push(self.clauses[p].clone());
        }
        ClauseSet::new(self.roles.clone(), clauses)
    }
}

/// Three-valued assignment state of a single variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TruthValue {
    True,
    False,
    Unset,
}

impl TruthValue {
    pub fn is_set(self) -> bool {
        self != TruthValue::Unset
    }
}

/// A three-valued assignment over a fixed variable range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialAssignment {
    values: Vec<TruthValue>,
}

impl PartialAssignment {
    pub fn new(num_vars: usize) -> Self {
        PartialAssignment {
            values: vec![TruthValue::Unset; num_vars],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, var: Var) -> TruthValue {
        self.values[var.index()]
    }

    pub fn set(&mut self, var: Var, value: TruthValue) {
        self.values[var.index()] = value;
    }

    /// Makes `lit` true (sets its variable to the literal's polarity).
    pub fn assign(&mut self, lit: Lit) {
        let v = if lit.is_positive() {
            TruthValue::True
        } else {
            TruthValue::False
        };
        self.set(lit.var(), v);
    }

    /// Value of a literal under the assignment.
    pub fn lit_value(&self, lit: Lit) -> TruthValue {
        match (self.value(lit.var()), lit.is_positive()) {
            (TruthValue::Unset, _) => TruthValue::Unset,
            (TruthValue::True, true) | (TruthValue::False, false) => TruthValue::True,
            _ => TruthValue::False,
        }
    }

    /// The same assignment over a wider variable range, new variables unset.
    pub fn extended_to(&self, num_vars: usize) -> Self {
        assert!(num_vars >= self.values.len(), "cannot shrink an assignment");
        let mut values = self.values.clone();
        values.resize(num_vars, TruthValue::Unset);
        PartialAssignment { values }
    }

    pub fn assigned_vars(&self) -> impl Iterator<Item = (Var, TruthValue)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_set())
            .map(|(i, v)| (Var(i), *v))
    }
}

/// Splits every clause of more than three literals into an equivalent chain
/// of three-literal clauses over fresh auxiliary variables.
///
/// A clause `(l1, ..., lk)` becomes `(l1, l2, s1), (~s1, l3, s2), ...,
/// (~s_{k-3}, l_{k-1}, lk)`. Unit propagation forces exactly the same
/// literals over the original variables, and conflicts in exactly the same
/// situations. Fresh variables are appended after the existing range in
/// clause order.
pub fn convert_3cnf(f: &ClauseSet) -> ClauseSet {
    let mut roles = f.roles().to_vec();
    let mut clauses: Vec<Clause> = Vec::with_capacity(f.num_clauses());
    for clause in f.clauses() {
        let lits = clause.lits();
        if lits.len() <= 3 {
            clauses.push(clause.clone());
            continue;
        }
        let mut s = Var(roles.len());
        roles.push(VarRole::Aux);
        clauses.push(
            Clause::new(vec![lits[0], lits[1], Lit::pos(s)]).expect("chain head is well formed"),
        );
        let mut i = 2;
        while i + 2 < lits.len() {
            let next = Var(roles.len());
            roles.push(VarRole::Aux);
            clauses.push(
                Clause::new(vec![Lit::neg(s), lits[i], Lit::pos(next)])
                    .expect("chain link is well formed"),
            );
            s = next;
            i += 1;
        }
        clauses.push(
            Clause::new(vec![Lit::neg(s), lits[i], lits[i + 1]])
                .expect("chain tail is well formed"),
        );
    }
    ClauseSet::new(roles, clauses).expect("splitting preserves clause set invariants")
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum CnfError {
    #[error("the empty clause cannot be constructed")]
    EmptyClause,
    #[error("literal 0 is not a literal")]
    ZeroLiteral,
    #[error("duplicate literal on variable {var} in clause")]
    DuplicateLiteral { var: Var },
    #[error("clause contains both polarities of variable {var}")]
    TautologicalClause { var: Var },
    #[error("variable {var} out of range (formula declares {num_vars})")]
    VarOutOfRange { var: Var, num_vars: usize },
    #[error("duplicate clause at index {index}")]
    DuplicateClause { index: usize },
    #[error("more than one output variable")]
    MultipleOutputs,
    #[error("clause permutation is not a permutation")]
    BadPermutation,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(n: i64) -> Lit {
        Lit::from_dimacs(n).unwrap()
    }

    #[test]
    fn clause_rejects_empty_duplicate_tautology() {
        assert_eq!(Clause::new(vec![]).unwrap_err(), CnfError::EmptyClause);
        assert_eq!(
            Clause::from_dimacs(&[1, 2, 1]).unwrap_err(),
            CnfError::DuplicateLiteral { var: Var(0) }
        );
        assert_eq!(
            Clause::from_dimacs(&[1, -1]).unwrap_err(),
            CnfError::TautologicalClause { var: Var(0) }
        );
    }

    #[test]
    fn clause_set_rejects_out_of_range_and_duplicates() {
        let c1 = Clause::from_dimacs(&[1, 2]).unwrap();
        let c2 = Clause::from_dimacs(&[2, 1]).unwrap(); // same literal set
        let roles = vec![VarRole::Input; 2];
        assert_eq!(
            ClauseSet::new(roles.clone(), vec![c1.clone(), c2]).unwrap_err(),
            CnfError::DuplicateClause { index: 1 }
        );
        let c3 = Clause::from_dimacs(&[3]).unwrap();
        assert_eq!(
            ClauseSet::new(roles, vec![c1, c3]).unwrap_err(),
            CnfError::VarOutOfRange {
                var: Var(2),
                num_vars: 2
            }
        );
    }

    #[test]
    fn clause_set_allows_at_most_one_output() {
        let roles = vec![VarRole::Input, VarRole::Output, VarRole::Output];
        let c = Clause::from_dimacs(&[1]).unwrap();
        assert_eq!(
            ClauseSet::new(roles, vec![c]).unwrap_err(),
            CnfError::MultipleOutputs
        );
    }

    #[test]
    fn lit_value_respects_polarity() {
        let mut a = PartialAssignment::new(2);
        a.assign(lit(-1));
        assert_eq!(a.lit_value(lit(-1)), TruthValue::True);
        assert_eq!(a.lit_value(lit(1)), TruthValue::False);
        assert_eq!(a.lit_value(lit(2)), TruthValue::Unset);
    }

    #[test]
    fn four_literal_clause_splits_once() {
        // (a, b, c, d) -> (a, b, s), (~s, c, d)
        let f = ClauseSet::new(
            vec![VarRole::Input; 4],
            vec![Clause::from_dimacs(&[1, 2, 3, 4]).unwrap()],
        )
        .unwrap();
        let g = convert_3cnf(&f);
        assert_eq!(g.num_vars(), 5);
        assert_eq!(g.role(Var(4)), VarRole::Aux);
        assert_eq!(
            g.clauses(),
            &[
                Clause::from_dimacs(&[1, 2, 5]).unwrap(),
                Clause::from_dimacs(&[-5, 3, 4]).unwrap(),
            ]
        );
    }

    #[test]
    fn six_literal_clause_splits_into_chain() {
        let f = ClauseSet::new(
            vec![VarRole::Input; 6],
            vec![Clause::from_dimacs(&[1, 2, 3, 4, 5, 6]).unwrap()],
        )
        .unwrap();
        let g = convert_3cnf(&f);
        assert_eq!(g.num_vars(), 9);
        assert_eq!(
            g.clauses(),
            &[
                Clause::from_dimacs(&[1, 2, 7]).unwrap(),
                Clause::from_dimacs(&[-7, 3, 8]).unwrap(),
                Clause::from_dimacs(&[-8, 4, 9]).unwrap(),
                Clause::from_dimacs(&[-9, 5, 6]).unwrap(),
            ]
        );
    }
}
