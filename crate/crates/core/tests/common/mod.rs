//! Seeded random structure generators and enumeration helpers shared by
//! the integration suites. Everything is deterministic: the same seed
//! yields the same structures on every run.

use cnfdecomp::circuit::{Circuit, Gate, GateKind};
use cnfdecomp::cnf::{Clause, ClauseSet, Lit, PartialAssignment, TruthValue, Var};
use cnfdecomp::csp::{CspVariable, DirectEncodingMap, DomainState, ExtensionalConstraint};
use cnfdecomp::decomp::CheckerDecomposition;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random AND/OR circuit: 2–8 inputs, 1–30 gates, every gate wired to
/// two distinct earlier nodes, the last gate as output.
pub fn random_monotone_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let num_inputs = rng.gen_range(2..=8);
    let num_gates = rng.gen_range(1..=30);
    let mut gates = Vec::with_capacity(num_gates);
    for g in 0..num_gates {
        let id = num_inputs + g;
        let kind = if rng.gen_bool(0.5) {
            GateKind::And
        } else {
            GateKind::Or
        };
        let a = rng.gen_range(0..id);
        let mut b = rng.gen_range(0..id - 1);
        if b >= a {
            b += 1;
        }
        gates.push(Gate {
            id,
            kind,
            fanins: vec![a, b],
        });
    }
    Circuit::new((0..num_inputs).collect(), gates, num_inputs + num_gates - 1).unwrap()
}

/// Every tuple over the given domain sizes, in lexicographic order.
pub fn product_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// A random nonempty extensional constraint: arity 1–3, per-position
/// domain sizes 1–3, each product tuple kept with probability one half.
pub fn random_table(rng: &mut ChaCha8Rng) -> ExtensionalConstraint {
    loop {
        let arity = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..arity).map(|_| rng.gen_range(1..=3)).collect();
        let tuples: Vec<Vec<usize>> = product_tuples(&sizes)
            .into_iter()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        if !tuples.is_empty() {
            return ExtensionalConstraint::with_identity_scope(sizes, tuples).unwrap();
        }
    }
}

/// A random checker whose clauses each have exactly one negative literal:
/// every auxiliary is defined by 1–2 clauses over inputs and earlier
/// auxiliaries, and the output by 1–2 clauses over inputs and auxiliaries.
pub fn random_one_negative_checker(rng: &mut ChaCha8Rng) -> CheckerDecomposition {
    let num_csp = rng.gen_range(1..=3);
    let vars: Vec<CspVariable> = (0..num_csp)
        .map(|id| CspVariable {
            id,
            domain_size: rng.gen_range(1..=2),
        })
        .collect();
    let map = DirectEncodingMap::new(&vars).unwrap();
    let num_inputs = map.num_prop_vars();
    let num_aux = rng.gen_range(1..=4);
    let output = Var(num_inputs + num_aux);

    let mut clauses: Vec<Clause> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut add_defining = |rng: &mut ChaCha8Rng, negated: Var, pool_len: usize| {
        for _ in 0..rng.gen_range(1..=2) {
            let mut pool: Vec<Var> = (0..pool_len).map(Var).collect();
            pool.shuffle(rng);
            let picked = rng.gen_range(1..=pool.len().min(3));
            let mut lits: Vec<Lit> = pool[..picked].iter().map(|&v| Lit::pos(v)).collect();
            lits.sort();
            lits.push(Lit::neg(negated));
            let clause = Clause::new(lits).unwrap();
            if seen.insert(clause.lit_set()) {
                clauses.push(clause);
            }
        }
    };
    for k in 0..num_aux {
        add_defining(rng, Var(num_inputs + k), num_inputs + k);
    }
    add_defining(rng, output, num_inputs + num_aux);

    let formula = ClauseSet::new(map.roles_with(num_aux, true), clauses).unwrap();
    CheckerDecomposition::new(formula, map).unwrap()
}

/// A uniformly random nonempty subset per variable.
pub fn random_domain_state(rng: &mut ChaCha8Rng, vars: &[CspVariable]) -> DomainState {
    let sets: Vec<Vec<usize>> = vars
        .iter()
        .map(|v| loop {
            let set: Vec<usize> = (0..v.domain_size).filter(|_| rng.gen_bool(0.5)).collect();
            if !set.is_empty() {
                break set;
            }
        })
        .collect();
    DomainState::from_sets(&sets, vars).unwrap()
}

/// All `3^n` assignments of the first `n` variables (the rest UNSET),
/// in base-3 counter order: UNSET, FALSE, TRUE per position.
pub fn all_partial_assignments(n: usize, num_vars: usize) -> Vec<PartialAssignment> {
    let total = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut a = PartialAssignment::new(num_vars);
        for k in 0..n {
            match code % 3 {
                1 => a.set(Var(k), TruthValue::False),
                2 => a.set(Var(k), TruthValue::True),
                _ => {}
            }
            code /= 3;
        }
        out.push(a);
    }
    out
}

/// The circuit-input vector of an assignment over the first `n`
/// variables: 0 exactly where the variable is FALSE.
pub fn bits_of(a: &PartialAssignment, n: usize) -> Vec<bool> {
    (0..n)
        .map(|k| a.value(Var(k)) != TruthValue::False)
        .collect()
}
