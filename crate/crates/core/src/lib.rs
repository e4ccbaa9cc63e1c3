//! CNF decompositions of constraint propagators and consistency checkers.
//!
//! A finite-domain constraint is represented propositionally through the
//! direct encoding: one Boolean variable per (CSP variable, value) pair,
//! FALSE meaning the value has been pruned. A *propagator decomposition* is
//! a clause set on which unit propagation prunes exactly the values the
//! propagator would prune; a *checker decomposition* is a clause set whose
//! output variable is forced FALSE by unit propagation exactly when the
//! checker reports inconsistency. This crate provides:
//!
//! - the CSP-side model: variables, domain states, extensional constraints
//!   and the direct encoding map ([`csp`]);
//! - clause sets with role tags and a deterministic counter-based unit
//!   propagation engine ([`cnf`], [`propagate`]);
//! - monotone Boolean circuits, evaluation, monotonicity checks and a
//!   propagation-faithful Tseitin encoding ([`circuit`]);
//! - executable reference semantics used as test oracles ([`oracle`]);
//! - validators that compare a decomposition against an oracle over every
//!   domain state ([`decomp`]);
//! - the conversions between propagator decompositions, checker
//!   decompositions and monotone circuits ([`transforms`]);
//! - text formats for clause sets, circuits and constraint tables ([`io`]);
//! - small worked fixtures used throughout the test suites ([`fixtures`]).

pub mod circuit;
pub mod cnf;
pub mod csp;
pub mod decomp;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod propagate;
pub mod transforms;
