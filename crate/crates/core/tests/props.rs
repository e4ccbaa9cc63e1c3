//! Randomized cross-module invariants. Each property draws a seed and
//! builds deterministic random structures from it, so failures reproduce
//! from the seed proptest reports.

// Not every shared generator is used by this binary.
#[allow(dead_code)]
mod common;

use cnfdecomp::circuit::{is_semantically_monotone, tseitin_encode};
use cnfdecomp::cnf::{Clause, ClauseSet, Lit, PartialAssignment, TruthValue, Var};
use cnfdecomp::csp::{
    enumerate_domain_states, uniform_vars, CspVariable, DirectEncodingMap, DomainState,
    EnumerationBudget,
};
use cnfdecomp::decomp::{
    check_checker_monotone, check_propagator_properties, induced_propagator,
    validate_propagator_decomposition,
};
use cnfdecomp::fixtures::{chained_aux_checker, pair_table_checker};
use cnfdecomp::io::{emit_dimacs, emit_gates, emit_table, parse_dimacs, parse_gates, parse_table};
use cnfdecomp::oracle::{bacchus_table_encoding, enumeration_checker, lift_checker_to_propagator};
use cnfdecomp::propagate::{failed_literal_test, propagate_by_rounds, unit_propagate};
use cnfdecomp::transforms::{checker_to_circuit, strip_negative_input_literals, StripMode};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_vars(rng: &mut ChaCha8Rng) -> Vec<CspVariable> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|id| CspVariable {
            id,
            domain_size: rng.gen_range(1..=4),
        })
        .collect()
}

/// A random nonempty substate of `s`.
fn random_substate(rng: &mut ChaCha8Rng, s: &DomainState, vars: &[CspVariable]) -> DomainState {
    let sets: Vec<Vec<usize>> = (0..s.num_vars())
        .map(|i| {
            let values: Vec<usize> = s.values(i).collect();
            loop {
                let kept: Vec<usize> = values
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if !kept.is_empty() {
                    break kept;
                }
            }
        })
        .collect();
    DomainState::from_sets(&sets, vars).unwrap()
}

/// A random assignment over all `num_vars` variables: each UNSET, FALSE
/// or TRUE with equal probability.
fn random_assignment(rng: &mut ChaCha8Rng, num_vars: usize) -> PartialAssignment {
    let mut a = PartialAssignment::new(num_vars);
    for v in 0..num_vars {
        match rng.gen_range(0..3) {
            1 => a.set(Var(v), TruthValue::False),
            2 => a.set(Var(v), TruthValue::True),
            _ => {}
        }
    }
    a
}

fn classify(clause: &Clause, a: &PartialAssignment) -> (usize, usize) {
    let mut satisfied = 0;
    let mut unassigned = 0;
    for &l in clause.lits() {
        match a.lit_value(l) {
            TruthValue::True => satisfied += 1,
            TruthValue::Unset => unassigned += 1,
            TruthValue::False => {}
        }
    }
    (satisfied, unassigned)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Decoding either faithful encoding of a state recovers the state.
    #[test]
    fn decoding_recovers_the_encoded_state(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = random_vars(&mut rng);
        let map = DirectEncodingMap::new(&vars).unwrap();
        let s = common::random_domain_state(&mut rng, &vars);
        prop_assert_eq!(&map.decode_assignment(&map.encode_domain(&s)), &s);
        prop_assert_eq!(&map.decode_assignment(&map.encode_domain_false_only(&s)), &s);
    }

    /// Shrinking a state only grows its encoding: every variable assigned
    /// for the larger state keeps the same value for the smaller one.
    #[test]
    fn encoding_is_antitone_in_the_state(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = random_vars(&mut rng);
        let map = DirectEncodingMap::new(&vars).unwrap();
        let larger = common::random_domain_state(&mut rng, &vars);
        let smaller = random_substate(&mut rng, &larger, &vars);
        for (make, name) in [
            (DirectEncodingMap::encode_domain as fn(&DirectEncodingMap, &DomainState) -> PartialAssignment, "canonical"),
            (DirectEncodingMap::encode_domain_false_only, "false-only"),
        ] {
            let of_larger = make(&map, &larger);
            let of_smaller = make(&map, &smaller);
            for v in 0..map.min_num_vars() {
                let big = of_larger.value(Var(v));
                if big.is_set() {
                    prop_assert_eq!(
                        of_smaller.value(Var(v)), big,
                        "{} encoding lost Var({}) when shrinking {} to {}", name, v, larger, smaller
                    );
                }
            }
        }
    }

    /// The number of nonempty-domain states is the product over variables
    /// of `2^domain_size - 1`.
    #[test]
    fn state_enumeration_count_matches_the_closed_form(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = random_vars(&mut rng);
        let expected: usize =
            vars.iter().map(|v| (1usize << v.domain_size) - 1).product();
        let count = enumerate_domain_states(&vars, EnumerationBudget::default())
            .unwrap()
            .count();
        prop_assert_eq!(count, expected);
    }

    /// Permuting the clauses changes neither the conflict verdict nor, in
    /// the conflict-free case, the fixpoint.
    #[test]
    fn propagation_fixpoint_ignores_clause_order(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let f = d.formula();
        let start = random_assignment(&mut rng, f.num_vars());
        let base = unit_propagate(f, &start);
        let mut perm: Vec<usize> = (0..f.num_clauses()).collect();
        perm.shuffle(&mut rng);
        let out = unit_propagate(&f.permuted(&perm).unwrap(), &start);
        prop_assert_eq!(out.is_conflict(), base.is_conflict());
        if !base.is_conflict() {
            prop_assert_eq!(out.assignment, base.assignment);
        }
    }

    /// Propagation is monotone in the start assignment: extending the
    /// start preserves every forced value, unless it introduces a
    /// conflict.
    #[test]
    fn propagation_is_monotone_in_the_start(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let f = d.formula();
        let smaller = random_assignment(&mut rng, f.num_vars());
        let mut larger = smaller.clone();
        for v in 0..f.num_vars() {
            if !larger.value(Var(v)).is_set() && rng.gen_bool(0.3) {
                larger.set(
                    Var(v),
                    if rng.gen_bool(0.5) { TruthValue::True } else { TruthValue::False },
                );
            }
        }
        let small_out = unit_propagate(f, &smaller);
        let large_out = unit_propagate(f, &larger);
        if !large_out.is_conflict() {
            prop_assert!(!small_out.is_conflict());
            for (v, value) in small_out.assignment.assigned_vars() {
                prop_assert_eq!(
                    large_out.assignment.value(v), value,
                    "Var({}) lost its forced value under the larger start", v.index()
                );
            }
        }
    }

    /// The derivation trail replays: each trail clause is unit at its
    /// point, the replay ends at the reported assignment, and a reported
    /// conflict clause really is empty there.
    #[test]
    fn trail_replays_to_the_reported_fixpoint(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let f = d.formula();
        let start = random_assignment(&mut rng, f.num_vars());
        let out = unit_propagate(f, &start);
        let mut replay = start.clone();
        for e in &out.trail {
            let (satisfied, unassigned) = classify(&f.clauses()[e.clause], &replay);
            prop_assert_eq!(satisfied, 0, "trail clause {} already satisfied", e.clause);
            prop_assert_eq!(unassigned, 1, "trail clause {} not unit", e.clause);
            prop_assert_eq!(replay.lit_value(e.lit), TruthValue::Unset);
            replay.assign(e.lit);
        }
        prop_assert_eq!(&replay, &out.assignment);
        if let Some(ci) = out.conflict {
            let (satisfied, unassigned) = classify(&f.clauses()[ci], &replay);
            prop_assert_eq!((satisfied, unassigned), (0, 0), "conflict clause not empty");
        }
    }

    /// Serializing a formula with its input annotations and parsing it
    /// back recovers both the formula and the encoding map, and the text
    /// is a fixpoint of the round trip.
    #[test]
    fn annotated_dimacs_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let text = emit_dimacs(d.formula(), Some(d.encoding())).unwrap();
        let parsed = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&parsed.formula, d.formula());
        prop_assert_eq!(parsed.encoding.as_ref(), Some(d.encoding()));
        let again = emit_dimacs(&parsed.formula, parsed.encoding.as_ref()).unwrap();
        prop_assert_eq!(again, text);
    }

    /// Gate lists round-trip through their text form.
    #[test]
    fn gate_lists_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_monotone_circuit(&mut rng);
        prop_assert_eq!(parse_gates(&emit_gates(&c)).unwrap(), c);
    }

    /// Constraint tables round-trip through their text form.
    #[test]
    fn tables_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_table(&mut rng);
        prop_assert_eq!(parse_table(&emit_table(&t)).unwrap(), t);
    }

    /// Consistency checkers derived from tables or the alldifferent
    /// matching test are monotone: shrinking a state never turns
    /// inconsistent back into consistent.
    #[test]
    fn derived_checkers_are_monotone(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_table(&mut rng);
        prop_assert!(check_checker_monotone(
            &enumeration_checker(&t),
            &t.scope_vars(),
            EnumerationBudget::default(),
        )
        .unwrap());
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=4);
        prop_assert!(check_checker_monotone(
            &cnfdecomp::oracle::alldifferent_checker(n),
            &uniform_vars(n, d),
            EnumerationBudget::default(),
        )
        .unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// On a monotone circuit's clausal encoding, propagation forces the
    /// output FALSE exactly when the circuit evaluates to 0 under the
    /// FALSE maps-to-0, UNSET/TRUE maps-to-1 reading — equivalently,
    /// exactly when every completion of the unset inputs evaluates to 0.
    #[test]
    fn monotone_encoding_forces_output_iff_every_completion_is_zero(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = loop {
            let c = common::random_monotone_circuit(&mut rng);
            if c.num_inputs() <= 5 {
                break c;
            }
        };
        let f = tseitin_encode(&s);
        let z = f.output_var().unwrap();
        let n = s.num_inputs();
        for _ in 0..25 {
            let mut a = PartialAssignment::new(f.num_vars());
            let mut unset = Vec::new();
            for k in 0..n {
                match rng.gen_range(0..3) {
                    1 => a.set(Var(k), TruthValue::False),
                    2 => a.set(Var(k), TruthValue::True),
                    _ => unset.push(k),
                }
            }
            let out = unit_propagate(&f, &a);
            prop_assert!(!out.is_conflict());
            let forced = out.assignment.value(z) == TruthValue::False;
            prop_assert_eq!(forced, !s.evaluate(&common::bits_of(&a, n)));
            let mut all_zero = true;
            for mask in 0..1u32 << unset.len() {
                let mut bits = common::bits_of(&a, n);
                for (pos, &k) in unset.iter().enumerate() {
                    bits[k] = mask >> pos & 1 == 1;
                }
                if s.evaluate(&bits) {
                    all_zero = false;
                    break;
                }
            }
            prop_assert_eq!(forced, all_zero);
        }
    }

    /// Circuits built from AND/OR gates alone are monotone both
    /// structurally and semantically.
    #[test]
    fn and_or_circuits_are_monotone(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::random_monotone_circuit(&mut rng);
        prop_assert!(c.is_structurally_monotone());
        prop_assert!(is_semantically_monotone(&c, 20).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The lowered circuit's layers mean something: a layer-i variable
    /// gate computes 0 exactly when i rounds of breadth-first propagation
    /// force that variable FALSE, the plan and the circuit agree, and the
    /// output is 0 exactly when the fixpoint forces the output FALSE.
    #[test]
    fn lowered_layers_mirror_propagation_rounds(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let f = d.formula();
        let z = d.output_var();
        let lowered = checker_to_circuit(&d).unwrap();
        let n = d.encoding().num_prop_vars();
        for mask in 0..1u32 << n {
            let mut start = PartialAssignment::new(f.num_vars());
            for k in 0..n {
                let value =
                    if mask >> k & 1 == 1 { TruthValue::True } else { TruthValue::False };
                start.set(Var(k), value);
            }
            let bits = common::bits_of(&start, n);

            let ev = lowered.plan().evaluate(&bits);
            prop_assert_eq!(ev.output, lowered.circuit().evaluate(&bits));

            let full = unit_propagate(f, &start);
            prop_assert!(!full.is_conflict());
            prop_assert_eq!(ev.output, full.assignment.value(z) != TruthValue::False);

            for (&(layer, var), &value) in &ev.variable_gates {
                let rounds = propagate_by_rounds(f, &start, Some(layer));
                prop_assert!(rounds.conflict_round.is_none());
                for entry in rounds.rounds.iter().flatten() {
                    prop_assert!(!entry.lit.is_positive(), "a round forced a literal TRUE");
                }
                prop_assert_eq!(
                    value,
                    rounds.assignment.value(var) != TruthValue::False,
                    "layer {} gate for Var({}) disagrees with {} rounds", layer, var.index(), layer
                );
            }
        }
    }

    /// Adding the inverse-substitution mutant of an existing clause
    /// changes nothing: substitute mode rewrites it back into the
    /// original clause (then deduplicates), remove mode deletes it.
    #[test]
    fn inverse_substitution_mutants_strip_away(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = common::random_one_negative_checker(&mut rng);
        let map = d.encoding();
        let formula = d.formula();

        // Both modes are the identity on clean one-negative checkers.
        for mode in [StripMode::Remove, StripMode::Substitute] {
            let stripped = strip_negative_input_literals(&d, mode).unwrap();
            prop_assert_eq!(stripped.formula(), formula);
        }

        // Find a positive input literal on a two-valued variable whose
        // sibling value does not also appear in the clause.
        let target = formula.clauses().iter().find_map(|clause| {
            clause.lits().iter().copied().find_map(|l| {
                let (i, j) = map.pair_of(l.var()).filter(|_| l.is_positive())?;
                let sibling = (map.csp_vars()[i].domain_size == 2)
                    .then(|| map.prop_var(i, 1 - j))?;
                let sibling_free =
                    clause.lits().iter().all(|other| other.var() != sibling);
                sibling_free.then(|| (clause.clone(), l, Lit::neg(sibling)))
            })
        });
        let Some((clause, replaced, inverse)) = target else { return Ok(()) };

        let mutant_clause = Clause::new(
            clause
                .lits()
                .iter()
                .map(|&l| if l == replaced { inverse } else { l })
                .collect(),
        )
        .unwrap();
        let mut clauses = formula.clauses().to_vec();
        clauses.push(mutant_clause);
        let mutated = cnfdecomp::decomp::CheckerDecomposition::new(
            ClauseSet::new(formula.roles().to_vec(), clauses).unwrap(),
            map.clone(),
        )
        .unwrap();
        for mode in [StripMode::Remove, StripMode::Substitute] {
            let stripped = strip_negative_input_literals(&mutated, mode).unwrap();
            prop_assert_eq!(stripped.formula(), formula);
        }
    }

    /// The support-clause encoding of a random table validates against
    /// the enumeration oracle, and its induced propagator is monotone,
    /// contracting and idempotent.
    #[test]
    fn table_encodings_validate_against_enumeration(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_table(&mut rng);
        let p = bacchus_table_encoding(&t).unwrap();
        let oracle = lift_checker_to_propagator(enumeration_checker(&t));
        let report =
            validate_propagator_decomposition(&p, &oracle, EnumerationBudget::default())
                .unwrap();
        prop_assert!(report.passed(), "{}", report);
        let induced = induced_propagator(&p);
        let props = check_propagator_properties(
            &induced,
            p.encoding().csp_vars(),
            EnumerationBudget::default(),
        )
        .unwrap();
        prop_assert!(props.all_hold(), "{:?}", props);
    }
}

/// Probing a value on top of removals matches the enumeration oracle on
/// the pair table once the checker's output is asserted: committing the
/// second variable to its surviving value is supported (tuple (0,0)
/// remains), while removing that value empties the domain and the
/// asserted output clause turns the forced output FALSE into a conflict.
#[test]
fn failed_literal_probe_matches_the_table_oracle() {
    let d = pair_table_checker();
    let mut clauses = d.formula().clauses().to_vec();
    clauses.push(Clause::new(vec![Lit::pos(d.output_var())]).unwrap());
    let f = ClauseSet::new(d.formula().roles().to_vec(), clauses).unwrap();

    let mut a = PartialAssignment::new(f.num_vars());
    a.set(d.encoding().prop_var(0, 1), TruthValue::False);
    a.set(d.encoding().prop_var(1, 1), TruthValue::False);

    let commit = Lit::pos(d.encoding().prop_var(1, 0));
    assert_eq!(failed_literal_test(&f, &a, commit), Ok(false));
    assert_eq!(failed_literal_test(&f, &a, commit.negated()), Ok(true));
}

/// With nothing pruned, the lowered chained checker reports consistent.
#[test]
fn lowered_chained_circuit_accepts_full_domains() {
    let lowered = checker_to_circuit(&chained_aux_checker()).unwrap();
    assert!(lowered.circuit().evaluate(&[true; 7]));
}
