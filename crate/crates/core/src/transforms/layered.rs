//! Lowering a checker in exactly-one-negative form to a monotone circuit,
//! and the reverse direction via the clausal gate encoding.
//!
//! In that normal form unit propagation only ever sets variables FALSE, so
//! one breadth-first propagation round is a monotone function of which
//! variables are still alive. The lowering materializes one layer per
//! auxiliary variable plus a final output stage. Within a layer, an OR
//! "clause gate" per clause goes to 0 exactly when the clause has fired
//! (all its positive literals dead), and an AND "variable gate" per
//! variable goes to 0 exactly when some defining clause has fired, i.e.
//! the variable is forced FALSE within that many rounds. A gate whose
//! antecedent gate does not exist one layer down is omitted: no derivation
//! of that depth can exist. The final circuit is the output variable's gate
//! at the last layer, after sweeping gates that cannot reach it and
//! collapsing single-input variable gates (clause gates never collapse).

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{tseitin_encode, Circuit, Gate, GateId, GateKind};
use crate::cnf::Var;
use crate::csp::DirectEncodingMap;
use crate::decomp::CheckerDecomposition;

use super::TransformError;

/// One fan-in of a clause gate in the layer plan.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PlanFanin {
    /// The bit of the k-th encoding pair (1 = value still in its domain).
    InputBit(usize),
    /// The previous layer's gate for a non-input variable.
    PreviousLayer(Var),
}

/// OR gate mirroring one clause at one layer: 0 exactly when the clause
/// has fired within this layer's round count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClauseGatePlan {
    pub clause_index: usize,
    /// Fan-ins in clause literal order.
    pub fanins: Vec<PlanFanin>,
}

/// AND gate mirroring one variable at one layer: 0 exactly when the
/// variable is forced FALSE within this layer's round count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VariableGatePlan {
    pub var: Var,
    /// Indices of the defining clauses whose gates exist at this layer.
    pub fanins: Vec<usize>,
}

/// A gate left out of a layer, per the construction's omission rules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Omission {
    /// The clause reads a variable with no gate one layer down, so the
    /// whole clause gate is omitted.
    ClauseGate {
        layer: usize,
        clause_index: usize,
        undefined: Var,
    },
    /// This defining clause's gate is omitted at this layer, so the
    /// variable gate skips that fan-in.
    VariableGateFanin {
        layer: usize,
        var: Var,
        clause_index: usize,
    },
    /// Every defining clause gate is omitted, so the variable has no gate
    /// at this layer at all.
    VariableGate { layer: usize, var: Var },
}

/// The gates of one layer, defined gates only.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct LayerPlan {
    /// By clause index ascending.
    pub clause_gates: Vec<ClauseGatePlan>,
    /// By variable ascending.
    pub variable_gates: Vec<VariableGatePlan>,
}

/// The full layered construction before sweeping: one layer per auxiliary
/// variable, then an output stage holding the output variable's clause
/// gates and its final AND.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayeredCircuitPlan {
    num_inputs: usize,
    aux_layer_count: usize,
    output_var: Var,
    layers: Vec<LayerPlan>,
    omissions: Vec<Omission>,
}

/// Every gate value of a plan under one input vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanEvaluation {
    /// By (layer, clause index).
    pub clause_gates: BTreeMap<(usize, usize), bool>,
    /// By (layer, variable).
    pub variable_gates: BTreeMap<(usize, Var), bool>,
    pub output: bool,
}

impl LayeredCircuitPlan {
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// Number of auxiliary layers; the plan has one more stage for the
    /// output.
    pub fn aux_layer_count(&self) -> usize {
        self.aux_layer_count
    }

    /// Total stage count: auxiliary layers plus the output stage.
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// `layers()[i]` holds layer `i + 1`.
    pub fn layers(&self) -> &[LayerPlan] {
        &self.layers
    }

    pub fn omissions(&self) -> &[Omission] {
        &self.omissions
    }

    pub fn output_var(&self) -> Var {
        self.output_var
    }

    /// Evaluates every defined gate. A variable gate at layer i is 0
    /// exactly when breadth-first unit propagation on the source formula
    /// forces that variable FALSE within i rounds.
    pub fn evaluate(&self, bits: &[bool]) -> PlanEvaluation {
        assert_eq!(bits.len(), self.num_inputs, "input width mismatch");
        let mut ev = PlanEvaluation {
            clause_gates: BTreeMap::new(),
            variable_gates: BTreeMap::new(),
            output: false,
        };
        for (idx, layer) in self.layers.iter().enumerate() {
            let layer_no = idx + 1;
            for g in &layer.clause_gates {
                let v = g.fanins.iter().any(|f| match *f {
                    PlanFanin::InputBit(k) => bits[k],
                    PlanFanin::PreviousLayer(var) => ev.variable_gates[&(layer_no - 1, var)],
                });
                ev.clause_gates.insert((layer_no, g.clause_index), v);
            }
            for g in &layer.variable_gates {
                let v = g.fanins.iter().all(|ci| ev.clause_gates[&(layer_no, *ci)]);
                ev.variable_gates.insert((layer_no, g.var), v);
            }
        }
        ev.output = ev.variable_gates[&(self.layers.len(), self.output_var)];
        ev
    }
}

/// A positive literal of a clause, as the plan sees it.
#[derive(Clone, Copy)]
enum PlanLiteral {
    Bit(usize),
    Gate(Var),
}

struct ClauseShape {
    negated: Var,
    positives: Vec<PlanLiteral>,
}

fn clause_shapes(d: &CheckerDecomposition) -> Result<Vec<ClauseShape>, TransformError> {
    let map = d.encoding();
    let bit_of: BTreeMap<Var, usize> = map
        .pairs()
        .enumerate()
        .map(|(k, (_, _, v))| (v, k))
        .collect();
    let mut shapes = Vec::with_capacity(d.formula().num_clauses());
    for (ci, clause) in d.formula().clauses().iter().enumerate() {
        let mut negated = None;
        let mut negatives = 0usize;
        let mut positives = Vec::with_capacity(clause.len());
        for &l in clause.lits() {
            if l.is_positive() {
                positives.push(match bit_of.get(&l.var()) {
                    Some(&k) => PlanLiteral::Bit(k),
                    None => PlanLiteral::Gate(l.var()),
                });
            } else {
                if bit_of.contains_key(&l.var()) {
                    return Err(TransformError::NegativeInputLiteral {
                        clause_index: ci,
                        var: l.var(),
                    });
                }
                negated = Some(l.var());
                negatives += 1;
            }
        }
        if negatives != 1 {
            return Err(TransformError::NotExactlyOneNegative {
                clause_index: ci,
                negatives,
            });
        }
        if positives.is_empty() {
            return Err(TransformError::NoPositiveLiterals { clause_index: ci });
        }
        shapes.push(ClauseShape {
            negated: negated.expect("counted above"),
            positives,
        });
    }
    Ok(shapes)
}

fn build_plan(d: &CheckerDecomposition) -> Result<LayeredCircuitPlan, TransformError> {
    let output = d.output_var();
    let shapes = clause_shapes(d)?;
    let mut defining: BTreeMap<Var, Vec<usize>> = BTreeMap::new();
    for (ci, s) in shapes.iter().enumerate() {
        defining.entry(s.negated).or_default().push(ci);
    }

    let aux_layer_count = d.formula().num_aux();
    let stage_count = aux_layer_count + 1;
    let mut layers: Vec<LayerPlan> = Vec::with_capacity(stage_count);
    let mut omissions: Vec<Omission> = Vec::new();
    let mut prev_defined: BTreeSet<Var> = BTreeSet::new();

    for layer_no in 1..=stage_count {
        let output_stage = layer_no == stage_count;
        let mut layer = LayerPlan::default();
        for (ci, shape) in shapes.iter().enumerate() {
            if (shape.negated == output) != output_stage {
                continue;
            }
            let mut fanins = Vec::with_capacity(shape.positives.len());
            let mut undefined = None;
            for lit in &shape.positives {
                match *lit {
                    PlanLiteral::Bit(k) => fanins.push(PlanFanin::InputBit(k)),
                    PlanLiteral::Gate(v) => {
                        if prev_defined.contains(&v) {
                            fanins.push(PlanFanin::PreviousLayer(v));
                        } else {
                            undefined = Some(v);
                            break;
                        }
                    }
                }
            }
            match undefined {
                Some(v) => omissions.push(Omission::ClauseGate {
                    layer: layer_no,
                    clause_index: ci,
                    undefined: v,
                }),
                None => layer.clause_gates.push(ClauseGatePlan {
                    clause_index: ci,
                    fanins,
                }),
            }
        }
        let defined_clauses: BTreeSet<usize> =
            layer.clause_gates.iter().map(|g| g.clause_index).collect();
        for (&v, clause_indices) in &defining {
            if (v == output) != output_stage {
                continue;
            }
            let mut fanins = Vec::new();
            for &ci in clause_indices {
                if defined_clauses.contains(&ci) {
                    fanins.push(ci);
                } else {
                    omissions.push(Omission::VariableGateFanin {
                        layer: layer_no,
                        var: v,
                        clause_index: ci,
                    });
                }
            }
            if fanins.is_empty() {
                omissions.push(Omission::VariableGate {
                    layer: layer_no,
                    var: v,
                });
            } else {
                layer
                    .variable_gates
                    .push(VariableGatePlan { var: v, fanins });
            }
        }
        prev_defined = layer.variable_gates.iter().map(|g| g.var).collect();
        layers.push(layer);
    }

    let output_defined = layers
        .last()
        .is_some_and(|l| l.variable_gates.iter().any(|g| g.var == output));
    if !output_defined {
        return Err(TransformError::OutputNeverForced);
    }
    Ok(LayeredCircuitPlan {
        num_inputs: d.encoding().num_prop_vars(),
        aux_layer_count,
        output_var: output,
        layers,
        omissions,
    })
}

/// Where a circuit gate came from in the layered construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GateProvenance {
    /// OR gate mirroring a clause.
    Clause { layer: usize, clause_index: usize },
    /// AND gate mirroring a variable.
    Variable { layer: usize, var: Var },
}

/// The lowered monotone circuit, the plan it was swept from, and each
/// gate's provenance (aligned with the circuit's gate list).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckerCircuit {
    circuit: Circuit,
    plan: LayeredCircuitPlan,
    provenance: Vec<GateProvenance>,
}

impl CheckerCircuit {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn plan(&self) -> &LayeredCircuitPlan {
        &self.plan
    }

    pub fn provenance(&self) -> &[GateProvenance] {
        &self.provenance
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }
}

/// Plan node key: layer, then clause gates by clause index, then variable
/// gates by variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum NodeKind {
    Clause(usize),
    Variable(Var),
}

type NodeKey = (usize, NodeKind);

/// Lowers a checker in exactly-one-negative form to a monotone circuit
/// whose output is 0 exactly when unit propagation forces the checker's
/// output variable FALSE (inputs: 1 = the value is still in its domain;
/// partial assignments map UNSET and TRUE to 1).
pub fn checker_to_circuit(d: &CheckerDecomposition) -> Result<CheckerCircuit, TransformError> {
    let plan = build_plan(d)?;
    let (circuit, provenance) = lower_plan(&plan)?;
    Ok(CheckerCircuit {
        circuit,
        plan,
        provenance,
    })
}

fn lower_plan(plan: &LayeredCircuitPlan) -> Result<(Circuit, Vec<GateProvenance>), TransformError> {
    let mut clause_plans: BTreeMap<(usize, usize), &ClauseGatePlan> = BTreeMap::new();
    let mut var_plans: BTreeMap<(usize, Var), &VariableGatePlan> = BTreeMap::new();
    for (idx, layer) in plan.layers().iter().enumerate() {
        let layer_no = idx + 1;
        for g in &layer.clause_gates {
            clause_plans.insert((layer_no, g.clause_index), g);
        }
        for g in &layer.variable_gates {
            var_plans.insert((layer_no, g.var), g);
        }
    }

    // A single-input variable gate is an alias for its clause gate.
    let resolve = |key: NodeKey| -> NodeKey {
        if let (layer, NodeKind::Variable(v)) = key {
            if let Some(g) = var_plans.get(&(layer, v)) {
                if g.fanins.len() == 1 {
                    return (layer, NodeKind::Clause(g.fanins[0]));
                }
            }
        }
        key
    };

    // Sweep: keep only gates that reach the output.
    let root = resolve((plan.num_layers(), NodeKind::Variable(plan.output_var())));
    let mut reachable: BTreeSet<NodeKey> = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(key) = stack.pop() {
        if !reachable.insert(key) {
            continue;
        }
        match key {
            (layer, NodeKind::Clause(ci)) => {
                for f in &clause_plans[&(layer, ci)].fanins {
                    if let PlanFanin::PreviousLayer(v) = *f {
                        stack.push(resolve((layer - 1, NodeKind::Variable(v))));
                    }
                }
            }
            (layer, NodeKind::Variable(v)) => {
                for &ci in &var_plans[&(layer, v)].fanins {
                    stack.push((layer, NodeKind::Clause(ci)));
                }
            }
        }
    }

    // Dense ids after the inputs, in key order.
    let n = plan.num_inputs();
    let id_of: BTreeMap<NodeKey, GateId> = reachable
        .iter()
        .enumerate()
        .map(|(pos, &k)| (k, n + pos))
        .collect();
    let mut gates = Vec::with_capacity(reachable.len());
    let mut provenance = Vec::with_capacity(reachable.len());
    for &key in &reachable {
        match key {
            (layer, NodeKind::Clause(ci)) => {
                let fanins = clause_plans[&(layer, ci)]
                    .fanins
                    .iter()
                    .map(|f| match *f {
                        PlanFanin::InputBit(k) => k,
                        PlanFanin::PreviousLayer(v) => {
                            id_of[&resolve((layer - 1, NodeKind::Variable(v)))]
                        }
                    })
                    .collect();
                gates.push(Gate {
                    id: id_of[&key],
                    kind: GateKind::Or,
                    fanins,
                });
                provenance.push(GateProvenance::Clause {
                    layer,
                    clause_index: ci,
                });
            }
            (layer, NodeKind::Variable(v)) => {
                let fanins = var_plans[&(layer, v)]
                    .fanins
                    .iter()
                    .map(|ci| id_of[&(layer, NodeKind::Clause(*ci))])
                    .collect();
                gates.push(Gate {
                    id: id_of[&key],
                    kind: GateKind::And,
                    fanins,
                });
                provenance.push(GateProvenance::Variable { layer, var: v });
            }
        }
    }
    let circuit = Circuit::new((0..n).collect(), gates, id_of[&root])?;
    Ok((circuit, provenance))
}

/// Wraps a structurally monotone circuit as a checker decomposition via
/// the clausal gate encoding. The circuit's inputs must line up with the
/// encoding map: pair k of the map must be propositional variable k.
pub fn circuit_to_checker(
    s: &Circuit,
    map: &DirectEncodingMap,
) -> Result<CheckerDecomposition, TransformError> {
    if !s.is_structurally_monotone() {
        return Err(TransformError::NonMonotoneCircuit);
    }
    let aligned = s.num_inputs() == map.num_prop_vars()
        && map.pairs().enumerate().all(|(k, (_, _, v))| v == Var(k));
    if !aligned {
        return Err(TransformError::InputsDoNotMatchEncoding {
            circuit_inputs: s.num_inputs(),
            encoding_inputs: map.num_prop_vars(),
        });
    }
    Ok(CheckerDecomposition::new(tseitin_encode(s), map.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Clause, ClauseSet, Lit, PartialAssignment, TruthValue};
    use crate::csp::uniform_vars;
    use crate::fixtures::{chained_aux_checker, non_monotone_two_input_circuit};
    use crate::propagate::{propagate_by_rounds, unit_propagate};

    #[test]
    fn chained_checker_lowers_to_nine_gates_in_three_layers() {
        let lowered = checker_to_circuit(&chained_aux_checker()).unwrap();
        let circuit = lowered.circuit();
        assert_eq!(circuit.num_inputs(), 7);
        assert_eq!(circuit.num_gates(), 9);
        assert_eq!(circuit.output(), 15);

        let expect = [
            (7, GateKind::Or, vec![0, 1]),
            (8, GateKind::Or, vec![4, 5]),
            (9, GateKind::Or, vec![0, 1]),
            (10, GateKind::Or, vec![4, 5]),
            (11, GateKind::Or, vec![3, 7]),
            (12, GateKind::Or, vec![2, 8]),
            (13, GateKind::And, vec![9, 12]),
            (14, GateKind::And, vec![10, 11]),
            (15, GateKind::Or, vec![13, 14, 6]),
        ];
        for (gate, (id, kind, fanins)) in circuit.gates().iter().zip(expect.iter()) {
            assert_eq!(gate.id, *id);
            assert_eq!(gate.kind, *kind);
            assert_eq!(&gate.fanins, fanins);
        }

        let provenance = lowered.provenance();
        let layers: Vec<usize> = provenance
            .iter()
            .map(|p| match *p {
                GateProvenance::Clause { layer, .. } => layer,
                GateProvenance::Variable { layer, .. } => layer,
            })
            .collect();
        assert_eq!(layers, vec![1, 1, 2, 2, 2, 2, 2, 2, 3]);
        let variable_gate_positions: Vec<usize> = provenance
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, GateProvenance::Variable { .. }))
            .map(|(k, _)| k)
            .collect();
        assert_eq!(variable_gate_positions, vec![6, 7]);
    }

    #[test]
    fn chained_checker_plan_logs_the_first_layer_omissions() {
        let lowered = checker_to_circuit(&chained_aux_checker()).unwrap();
        let plan = lowered.plan();
        assert_eq!(plan.aux_layer_count(), 2);
        assert_eq!(plan.num_layers(), 3);
        assert_eq!(
            plan.omissions(),
            &[
                Omission::ClauseGate {
                    layer: 1,
                    clause_index: 2,
                    undefined: Var(7)
                },
                Omission::ClauseGate {
                    layer: 1,
                    clause_index: 3,
                    undefined: Var(8)
                },
                Omission::VariableGateFanin {
                    layer: 1,
                    var: Var(7),
                    clause_index: 3
                },
                Omission::VariableGateFanin {
                    layer: 1,
                    var: Var(8),
                    clause_index: 2
                },
            ]
        );
    }

    #[test]
    fn plan_layers_mirror_breadth_first_propagation_rounds() {
        let d = chained_aux_checker();
        let lowered = checker_to_circuit(&d).unwrap();
        let plan = lowered.plan();
        let f = d.formula();
        for mask in 0u32..(1 << 7) {
            let bits: Vec<bool> = (0..7).map(|k| mask >> k & 1 == 1).collect();
            let mut start = PartialAssignment::new(f.num_vars());
            for (k, &alive) in bits.iter().enumerate() {
                if !alive {
                    start.set(Var(k), TruthValue::False);
                }
            }
            let out = propagate_by_rounds(f, &start, None);
            assert_eq!(out.conflict_round, None);
            let mut forced_round: BTreeMap<Var, usize> = BTreeMap::new();
            for (r, round) in out.rounds.iter().enumerate() {
                for entry in round {
                    assert!(!entry.lit.is_positive(), "this form only propagates FALSE");
                    forced_round.insert(entry.lit.var(), r + 1);
                }
            }
            let ev = plan.evaluate(&bits);
            for (&(layer, var), &value) in &ev.variable_gates {
                let forced_by_layer = forced_round.get(&var).is_some_and(|&r| r <= layer);
                assert_eq!(
                    !value, forced_by_layer,
                    "gate for {var} at layer {layer} under bits {bits:?}"
                );
            }
            assert_eq!(lowered.circuit().evaluate(&bits), ev.output);
        }
    }

    #[test]
    fn single_output_clause_lowers_to_its_support_bit() {
        let vars = uniform_vars(1, 2);
        let map = crate::csp::DirectEncodingMap::new(&vars).unwrap();
        let clause = Clause::new(vec![Lit::pos(Var(0)), Lit::neg(Var(2))]).unwrap();
        let formula = ClauseSet::new(map.roles_with(0, true), vec![clause]).unwrap();
        let d = CheckerDecomposition::new(formula, map).unwrap();
        let lowered = checker_to_circuit(&d).unwrap();
        let circuit = lowered.circuit();
        assert_eq!(circuit.num_gates(), 1);
        assert_eq!(circuit.gates()[0].kind, GateKind::Or);
        assert_eq!(circuit.gates()[0].fanins, vec![0]);
        assert!(!circuit.evaluate(&[false, false]));
        assert!(!circuit.evaluate(&[false, true]));
        assert!(circuit.evaluate(&[true, false]));
        assert!(circuit.evaluate(&[true, true]));
    }

    #[test]
    fn lowering_refuses_out_of_form_and_constant_checkers() {
        let vars = uniform_vars(1, 2);
        let map = crate::csp::DirectEncodingMap::new(&vars).unwrap();
        let build = |extra_aux: usize, clauses: Vec<Clause>| {
            let formula = ClauseSet::new(map.roles_with(extra_aux, true), clauses).unwrap();
            CheckerDecomposition::new(formula, map.clone()).unwrap()
        };
        // Unconditional firing: no positive literals.
        let d = build(0, vec![Clause::new(vec![Lit::neg(Var(2))]).unwrap()]);
        assert_eq!(
            checker_to_circuit(&d).unwrap_err(),
            TransformError::NoPositiveLiterals { clause_index: 0 }
        );
        // The output variable is never the sole negative of any clause.
        let d = build(
            1,
            vec![Clause::new(vec![Lit::pos(Var(2)), Lit::neg(Var(3))]).unwrap()],
        );
        assert_eq!(
            checker_to_circuit(&d).unwrap_err(),
            TransformError::OutputNeverForced
        );
        // Two negative literals in one clause.
        let d = build(
            1,
            vec![
                Clause::new(vec![Lit::pos(Var(0)), Lit::neg(Var(2))]).unwrap(),
                Clause::new(vec![Lit::pos(Var(0)), Lit::neg(Var(2)), Lit::neg(Var(3))]).unwrap(),
            ],
        );
        assert_eq!(
            checker_to_circuit(&d).unwrap_err(),
            TransformError::NotExactlyOneNegative {
                clause_index: 1,
                negatives: 2
            }
        );
        // A lingering negative input literal.
        let d = build(
            0,
            vec![Clause::new(vec![Lit::neg(Var(0)), Lit::neg(Var(2))]).unwrap()],
        );
        assert_eq!(
            checker_to_circuit(&d).unwrap_err(),
            TransformError::NegativeInputLiteral {
                clause_index: 0,
                var: Var(0)
            }
        );
    }

    #[test]
    fn wrapping_requires_monotone_circuits_with_aligned_inputs() {
        let vars = uniform_vars(2, 1);
        let map = crate::csp::DirectEncodingMap::new(&vars).unwrap();
        assert_eq!(
            circuit_to_checker(&non_monotone_two_input_circuit(), &map).unwrap_err(),
            TransformError::NonMonotoneCircuit
        );
        let or = Circuit::new(
            vec![0, 1],
            vec![Gate {
                id: 2,
                kind: GateKind::Or,
                fanins: vec![0, 1],
            }],
            2,
        )
        .unwrap();
        let narrow = crate::csp::DirectEncodingMap::new(&uniform_vars(1, 1)).unwrap();
        assert_eq!(
            circuit_to_checker(&or, &narrow).unwrap_err(),
            TransformError::InputsDoNotMatchEncoding {
                circuit_inputs: 2,
                encoding_inputs: 1
            }
        );
        let d = circuit_to_checker(&or, &map).unwrap();
        assert_eq!(d.formula().num_inputs(), 2);
        assert!(d.formula().output_var().is_some());
    }

    #[test]
    fn self_or_of_one_input_wraps_and_never_reports_on_full_domains() {
        // OR of an input with itself reduces to the input; wrapping it
        // still yields a checker whose output is only FALSE once the
        // value dies.
        let or = Circuit::new(
            vec![0],
            vec![Gate {
                id: 1,
                kind: GateKind::Or,
                fanins: vec![0, 0],
            }],
            1,
        )
        .unwrap();
        let map = crate::csp::DirectEncodingMap::new(&uniform_vars(1, 1)).unwrap();
        let d = circuit_to_checker(&or, &map).unwrap();
        let f = d.formula();
        let z = d.output_var();
        // Nothing assigned: quiet.
        let out = unit_propagate(f, &PartialAssignment::new(f.num_vars()));
        assert!(!out.is_conflict());
        assert_eq!(out.assignment.value(z), TruthValue::Unset);
        // The single value alive and asserted: the output must not go FALSE.
        let mut start = PartialAssignment::new(f.num_vars());
        start.set(Var(0), TruthValue::True);
        let out = unit_propagate(f, &start);
        assert!(!out.is_conflict());
        assert_ne!(out.assignment.value(z), TruthValue::False);
        // The value dead: the output reports it.
        let mut start = PartialAssignment::new(f.num_vars());
        start.set(Var(0), TruthValue::False);
        let out = unit_propagate(f, &start);
        assert!(!out.is_conflict());
        assert_eq!(out.assignment.value(z), TruthValue::False);
    }
}
