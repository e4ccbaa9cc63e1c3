//! Boolean circuits as gate DAGs.
//!
//! Gates are declared in topological order (a fan-in may only reference an
//! input or an earlier gate). The circuits of interest are structurally
//! monotone (AND/OR only); NOT is supported so that non-monotone
//! counterexamples can be expressed and rejected where monotonicity is a
//! precondition.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cnf::{Clause, ClauseSet, Lit, PartialAssignment, TruthValue, Var, VarRole};
use crate::csp::{DirectEncodingMap, DomainState};

pub type GateId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GateKind {
    And,
    Or,
    Not,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub fanins: Vec<GateId>,
}

/// A gate DAG with one output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    inputs: Vec<GateId>,
    gates: Vec<Gate>,
    output: GateId,
    slot_of: BTreeMap<GateId, usize>, // inputs first, then gates in order
}

/// One Boolean value per circuit input, in input declaration order.
pub type CircuitInput = Vec<bool>;

impl Circuit {
    pub fn new(
        inputs: Vec<GateId>,
        gates: Vec<Gate>,
        output: GateId,
    ) -> Result<Self, CircuitError> {
        if inputs.is_empty() {
            return Err(CircuitError::NoInputs);
        }
        let mut slot_of = BTreeMap::new();
        for (i, &id) in inputs.iter().enumerate() {
            if slot_of.insert(id, i).is_some() {
                return Err(CircuitError::DuplicateId { id });
            }
        }
        for g in &gates {
            match g.kind {
                GateKind::Not => {
                    if g.fanins.len() != 1 {
                        return Err(CircuitError::BadNotFanIn { id: g.id });
                    }
                }
                GateKind::And | GateKind::Or => {
                    if g.fanins.is_empty() {
                        return Err(CircuitError::EmptyFanIn { id: g.id });
                    }
                }
            }
            for &f in &g.fanins {
                if !slot_of.contains_key(&f) {
                    return Err(CircuitError::ForwardReference { id: g.id, fanin: f });
                }
            }
            let slot = slot_of.len();
            if slot_of.insert(g.id, slot).is_some() {
                return Err(CircuitError::DuplicateId { id: g.id });
            }
        }
        if !slot_of.contains_key(&output) {
            return Err(CircuitError::UnknownOutput { id: output });
        }
        Ok(Circuit {
            inputs,
            gates,
            output,
            slot_of,
        })
    }

    pub fn inputs(&self) -> &[GateId] {
        &self.inputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    /// Evaluates the circuit on a complete input vector.
    pub fn evaluate(&self, input: &[bool]) -> bool {
        assert_eq!(input.len(), self.inputs.len(), "input width mismatch");
        let mut values = Vec::with_capacity(self.slot_of.len());
        values.extend_from_slice(input);
        for g in &self.gates {
            let mut vals = g.fanins.iter().map(|f| values[self.slot_of[f]]);
            let v = match g.kind {
                GateKind::And => vals.all(|b| b),
                GateKind::Or => vals.any(|b| b),
                GateKind::Not => !vals.next().expect("NOT has one fan-in"),
            };
            values.push(v);
        }
        values[self.slot_of[&self.output]]
    }

    /// True iff the circuit contains no NOT gate.
    pub fn is_structurally_monotone(&self) -> bool {
        self.gates.iter().all(|g| g.kind != GateKind::Not)
    }
}

/// Default cap on inputs for the exhaustive semantic monotonicity check.
pub const SEMANTIC_MONOTONE_BUDGET: u32 = 20;

/// Exhaustively checks that flipping any input from 0 to 1 never flips the
/// output from 1 to 0. Refuses circuits with more than `budget_inputs`
/// inputs rather than running an oversized enumeration.
pub fn is_semantically_monotone(s: &Circuit, budget_inputs: u32) -> Result<bool, CircuitError> {
    let n = s.num_inputs();
    if n as u64 > budget_inputs as u64 {
        return Err(CircuitError::MonotonicityBudgetExceeded {
            inputs: n,
            budget: budget_inputs,
        });
    }
    let mut table = Vec::with_capacity(1usize << n);
    let mut input = vec![false; n];
    for bits in 0..(1u64 << n) {
        for (i, b) in input.iter_mut().enumerate() {
            *b = bits >> i & 1 == 1;
        }
        table.push(s.evaluate(&input));
    }
    for bits in 0..(1u64 << n) {
        for i in 0..n {
            if bits >> i & 1 == 0 && table[bits as usize] && !table[(bits | 1 << i) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The circuit input of a domain state: one bit per (variable, value) pair
/// of `map`, variable-major, 1 iff the value is still in the domain.
pub fn build_circuit_input(state: &DomainState, map: &DirectEncodingMap) -> CircuitInput {
    map.pairs().map(|(i, j, _)| state.contains(i, j)).collect()
}

/// The circuit input of a partial assignment over `input_vars`: 0 iff the
/// variable is FALSE (UNSET and TRUE both map to 1).
pub fn input_from_assignment(a: &PartialAssignment, input_vars: &[Var]) -> CircuitInput {
    input_vars
        .iter()
        .map(|&v| a.value(v) != TruthValue::False)
        .collect()
}

/// Tseitin encoding whose unit propagation mirrors circuit evaluation.
///
/// Propositional variables: inputs first (in declaration order), then one
/// variable per AND/OR gate in topological order after fan-ins above two
/// are split into left-deep two-input chains. NOT gates get no variable;
/// consumers use the negated operand literal instead. Per two-input gate
/// `g`: AND emits `(a, ~g) (b, ~g) (~a, ~b, g)`, OR emits
/// `(~a, g) (~b, g) (a, b, ~g)`. The output gate's variable is tagged as
/// the formula output; if the output literal is an input or negative, a
/// fresh output variable is reified onto it (for a NOT output via
/// `(x, g) (~x, ~g)`).
pub fn tseitin_encode(s: &Circuit) -> ClauseSet {
    let n = s.num_inputs();
    let mut roles: Vec<VarRole> = vec![VarRole::Input; n];
    let mut clauses: Vec<Clause> = Vec::new();
    let mut lit_of: BTreeMap<GateId, Lit> = BTreeMap::new();
    for (i, &id) in s.inputs().iter().enumerate() {
        lit_of.insert(id, Lit::pos(Var(i)));
    }

    let fresh = |roles: &mut Vec<VarRole>| {
        let v = Var(roles.len());
        roles.push(VarRole::Aux);
        v
    };

    let emit_binary = |kind: GateKind,
                       a: Lit,
                       b: Lit,
                       roles: &mut Vec<VarRole>,
                       clauses: &mut Vec<Clause>|
     -> Lit {
        if a == b {
            return a; // AND(x,x) = OR(x,x) = x
        }
        let g = fresh(roles);
        if a == b.negated() {
            // AND(x,~x) is constant 0, OR(x,~x) is constant 1.
            let unit = match kind {
                GateKind::And => Lit::neg(g),
                GateKind::Or => Lit::pos(g),
                GateKind::Not => unreachable!("NOT is folded"),
            };
            clauses.push(Clause::new(vec![unit]).expect("unit clause"));
            return Lit::pos(g);
        }
        match kind {
            GateKind::And => {
                clauses.push(Clause::new(vec![a, Lit::neg(g)]).expect("well formed"));
                clauses.push(Clause::new(vec![b, Lit::neg(g)]).expect("well formed"));
                clauses.push(
                    Clause::new(vec![a.negated(), b.negated(), Lit::pos(g)]).expect("well formed"),
                );
            }
            GateKind::Or => {
                clauses.push(Clause::new(vec![a.negated(), Lit::pos(g)]).expect("well formed"));
                clauses.push(Clause::new(vec![b.negated(), Lit::pos(g)]).expect("well formed"));
                clauses.push(Clause::new(vec![a, b, Lit::neg(g)]).expect("well formed"));
            }
            GateKind::Not => unreachable!("NOT is folded"),
        }
        Lit::pos(g)
    };

    for g in s.gates() {
        let lit = match g.kind {
            GateKind::Not => lit_of[&g.fanins[0]].negated(),
            GateKind::And | GateKind::Or => {
                let operands: Vec<Lit> = g.fanins.iter().map(|f| lit_of[f]).collect();
                if operands.len() == 1 {
                    // Unary gate: reify the identity so the gate has a variable.
                    let a = operands[0];
                    let v = fresh(&mut roles);
                    clauses.push(Clause::new(vec![a.negated(), Lit::pos(v)]).expect("well formed"));
                    clauses.push(Clause::new(vec![a, Lit::neg(v)]).expect("well formed"));
                    Lit::pos(v)
                } else {
                    let mut acc = operands[0];
                    for &next in &operands[1..] {
                        acc = emit_binary(g.kind, acc, next, &mut roles, &mut clauses);
                    }
                    acc
                }
            }
        };
        lit_of.insert(g.id, lit);
    }

    let out = lit_of[&s.output()];
    let out_var = if out.is_positive() && roles[out.var().index()] == VarRole::Aux {
        out.var()
    } else {
        // Output is an input or a negative literal: reify a dedicated
        // output variable equivalent to it.
        let z = fresh(&mut roles);
        if out.is_positive() {
            clauses.push(Clause::new(vec![out.negated(), Lit::pos(z)]).expect("well formed"));
            clauses.push(Clause::new(vec![out, Lit::neg(z)]).expect("well formed"));
        } else {
            let x = out.negated();
            clauses.push(Clause::new(vec![x, Lit::pos(z)]).expect("well formed"));
            clauses.push(Clause::new(vec![x.negated(), Lit::neg(z)]).expect("well formed"));
        }
        z
    };
    roles[out_var.index()] = VarRole::Output;
    ClauseSet::new(roles, clauses).expect("encoding satisfies clause set invariants")
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum CircuitError {
    #[error("a circuit must declare at least one input")]
    NoInputs,
    #[error("duplicate gate id {id}")]
    DuplicateId { id: GateId },
    #[error("gate {id} references {fanin}, which is not declared before it")]
    ForwardReference { id: GateId, fanin: GateId },
    #[error("NOT gate {id} must have exactly one fan-in")]
    BadNotFanIn { id: GateId },
    #[error("gate {id} has no fan-ins")]
    EmptyFanIn { id: GateId },
    #[error("output {id} is not a declared gate or input")]
    UnknownOutput { id: GateId },
    #[error("semantic monotonicity check over {inputs} inputs exceeds budget of {budget}")]
    MonotonicityBudgetExceeded { inputs: usize, budget: u32 },
}
