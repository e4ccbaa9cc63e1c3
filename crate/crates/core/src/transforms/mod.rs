//! Constructive transformations between the three shapes of a constraint's
//! clausal machinery: propagator decompositions (unit propagation prunes
//! domain values), checker decompositions (unit propagation reports
//! dis-entailment on an output variable), and monotone circuits (gate
//! evaluation mirrors breadth-first propagation).
//!
//! Every transform is a pure function on immutable inputs. Fresh variables
//! are always numbered densely after the existing range, so outputs are
//! byte-identical across runs.

mod conversion;
mod layered;
mod normal_form;

pub use conversion::{
    checker_to_propagator, propagator_to_checker, reified_variable_pairs, ReifiedVariablePair,
};
pub use layered::{
    checker_to_circuit, circuit_to_checker, CheckerCircuit, ClauseGatePlan, GateProvenance,
    LayerPlan, LayeredCircuitPlan, Omission, PlanEvaluation, PlanFanin, VariableGatePlan,
};
pub use normal_form::{
    normalize_auxiliary_polarity, strip_negative_input_literals, to_exactly_one_negative_form,
    to_propagation_normal_form, StripMode,
};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::cnf::{CnfError, Var};
use crate::csp::ModelError;
use crate::decomp::DecompError;

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum TransformError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("clause {clause_index} loses all its literals once the copy's sibling values are fixed FALSE; the source formula conflicts on its own")]
    EmptyClauseAfterFixing { clause_index: usize },
    #[error("clause {clause_index} would become empty: every literal is a negative input literal whose variable has no sibling values")]
    EmptyClauseAfterStripping { clause_index: usize },
    #[error("clause {clause_index} contains a negative literal on input variable {var}; strip negative input literals first")]
    NegativeInputLiteral { clause_index: usize, var: Var },
    #[error("clause {clause_index} has no negative literal, so unit propagation on it could only force a variable TRUE or conflict; not a pure FALSE-propagating checker")]
    AllPositiveClause { clause_index: usize },
    #[error("clause {clause_index} has {negatives} negative literals; the layered lowering needs exactly one per clause")]
    NotExactlyOneNegative {
        clause_index: usize,
        negatives: usize,
    },
    #[error("clause {clause_index} has no positive literals, so it fires unconditionally; no gate of the lowering can represent that")]
    NoPositiveLiterals { clause_index: usize },
    #[error("no clause can ever force the output variable FALSE; the lowered circuit would be the constant 1")]
    OutputNeverForced,
    #[error("the circuit contains a NOT gate; clausal encodings of non-monotone circuits are not unit-refutation complete, so a partial input can make the output semantically 0 while propagation leaves it UNSET")]
    NonMonotoneCircuit,
    #[error("the circuit has {circuit_inputs} inputs but the encoding map provides {encoding_inputs} propositional variables; they must be the dense range 0..n in pair order")]
    InputsDoNotMatchEncoding {
        circuit_inputs: usize,
        encoding_inputs: usize,
    },
}
