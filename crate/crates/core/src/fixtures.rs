//! Worked fixtures shared across the test suites and exported by the CLI:
//! a small extensional table with its generated propagator and hand-built
//! checker, a non-monotone circuit whose clausal encoding is incomplete,
//! and a checker with chained auxiliary definitions that exercises the
//! layered circuit lowering.

use crate::circuit::{Circuit, Gate, GateKind};
use crate::cnf::{Clause, ClauseSet, Lit, Var};
use crate::csp::{uniform_vars, DirectEncodingMap, ExtensionalConstraint};
use crate::decomp::{CheckerDecomposition, PropagatorDecomposition};
use crate::oracle::bacchus_table_encoding;

/// Two CSP variables over the domain {0, 1}, constrained to the tuples
/// (0,0), (1,1) and (0,1).
pub fn pair_table() -> ExtensionalConstraint {
    ExtensionalConstraint::with_identity_scope(vec![2, 2], vec![vec![0, 0], vec![1, 1], vec![0, 1]])
        .expect("the pair table is well formed")
}

/// The generated propagator decomposition of [`pair_table`]: support
/// clauses, tuple implications, and the at-least-one-tuple clause — eleven
/// clauses over four input and three auxiliary variables.
pub fn pair_table_propagator() -> PropagatorDecomposition {
    bacchus_table_encoding(&pair_table()).expect("the pair table is nonempty")
}

/// The checker companion of [`pair_table`]: the tuple implications of the
/// generated encoding plus an output clause that fires when every tuple
/// witness is dead.
///
/// Propositional variables: x(0,0)=0, x(0,1)=1, x(1,0)=2, x(1,1)=3;
/// tuple witnesses y1=4, y2=5, y3=6 (for tuples (0,0), (1,1), (0,1));
/// output z=7.
pub fn pair_table_checker() -> CheckerDecomposition {
    let vars = uniform_vars(2, 2);
    let map = DirectEncodingMap::new(&vars).expect("two binary variables");
    let c = |lits: Vec<Lit>| Clause::new(lits).expect("fixture clause is well formed");
    let clauses = vec![
        c(vec![Lit::neg(Var(4)), Lit::pos(Var(0))]),
        c(vec![Lit::neg(Var(4)), Lit::pos(Var(2))]),
        c(vec![Lit::neg(Var(5)), Lit::pos(Var(1))]),
        c(vec![Lit::neg(Var(5)), Lit::pos(Var(3))]),
        c(vec![Lit::neg(Var(6)), Lit::pos(Var(0))]),
        c(vec![Lit::neg(Var(6)), Lit::pos(Var(3))]),
        c(vec![
            Lit::pos(Var(4)),
            Lit::pos(Var(5)),
            Lit::pos(Var(6)),
            Lit::neg(Var(7)),
        ]),
    ];
    let formula =
        ClauseSet::new(map.roles_with(3, true), clauses).expect("fixture formula is well formed");
    CheckerDecomposition::new(formula, map).expect("roles match the encoding")
}

/// Two-input circuit (x1 OR x2) AND (x1 OR NOT x2).
///
/// It computes x1 whenever x2 is set, yet the clausal encoding cannot see
/// that: with only x1=FALSE assigned, the output stays UNSET even though
/// every completion evaluates to 0. The canonical witness that encodings
/// of non-monotone circuits are not unit-refutation complete.
pub fn non_monotone_two_input_circuit() -> Circuit {
    Circuit::new(
        vec![0, 1],
        vec![
            Gate {
                id: 2,
                kind: GateKind::Or,
                fanins: vec![0, 1],
            },
            Gate {
                id: 3,
                kind: GateKind::Not,
                fanins: vec![1],
            },
            Gate {
                id: 4,
                kind: GateKind::Or,
                fanins: vec![0, 3],
            },
            Gate {
                id: 5,
                kind: GateKind::And,
                fanins: vec![2, 4],
            },
        ],
        5,
    )
    .expect("the two-input circuit is well formed")
}

/// A checker over one CSP variable with seven values whose auxiliaries
/// chain: y2's support depends on y1, so breadth-first propagation needs
/// two rounds for the auxiliaries and a third for the output.
///
/// Propositional variables: inputs x1..x7 = 0..6, y1 = 7, y2 = 8, z = 9.
/// Clauses: c1 = (x1, x2, ~y1), c2 = (x5, x6, ~y2), c3 = (x4, y1, ~y2),
/// c4 = (x3, y2, ~y1), c5 = (y1, y2, x7, ~z).
pub fn chained_aux_checker() -> CheckerDecomposition {
    let vars = uniform_vars(1, 7);
    let map = DirectEncodingMap::new(&vars).expect("one seven-valued variable");
    let c = |lits: Vec<Lit>| Clause::new(lits).expect("fixture clause is well formed");
    let clauses = vec![
        c(vec![Lit::pos(Var(0)), Lit::pos(Var(1)), Lit::neg(Var(7))]),
        c(vec![Lit::pos(Var(4)), Lit::pos(Var(5)), Lit::neg(Var(8))]),
        c(vec![Lit::pos(Var(3)), Lit::pos(Var(7)), Lit::neg(Var(8))]),
        c(vec![Lit::pos(Var(2)), Lit::pos(Var(8)), Lit::neg(Var(7))]),
        c(vec![
            Lit::pos(Var(7)),
            Lit::pos(Var(8)),
            Lit::pos(Var(6)),
            Lit::neg(Var(9)),
        ]),
    ];
    let formula =
        ClauseSet::new(map.roles_with(2, true), clauses).expect("fixture formula is well formed");
    CheckerDecomposition::new(formula, map).expect("roles match the encoding")
}
