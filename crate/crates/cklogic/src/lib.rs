//! Conditional logics over finite selection-function models.
//!
//! The crate provides, in dependency order:
//!
//! - [`syntax`]: the formula language (atoms, negation, disjunction, the
//!   defeasible conditional `=>`, and derived connectives) with a parser
//!   and printer;
//! - [`semantics`]: finite selection-function models and the satisfaction
//!   relation — the ground-truth evaluator;
//! - [`hol`] and [`interp`]: a simply-typed lambda calculus with
//!   beta-eta-normalization and valuation over finite standard models;
//! - [`embed`]: the translation of conditional formulas into HOL predicates
//!   and of models into HOL interpretations;
//! - [`correspondence`]: the axiom catalog (ID, MP, CS, CEM, AC, RT, CV, CA),
//!   rule closures, and claim checking over a given model;
//! - [`search`]: exhaustive and randomized countermodel search;
//! - [`thf`] and [`suite`]: TPTP THF0 emission and the benchmark suite with
//!   its expected-status manifest;
//! - [`prover`]: dispatch of THF problems to external reasoners and SZS
//!   verdict parsing;
//! - [`cli`]: the command-line interface.
//!
//! The `examples/` directory contains one runnable example per capability;
//! start with `parse_print` and `evaluate_models`.

pub mod embed;
pub mod hol;
pub mod interp;
pub mod semantics;
pub mod syntax;
