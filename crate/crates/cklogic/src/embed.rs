//! Translation of conditional-logic formulas into HOL predicates over
//! states, the validity wrapper, and the construction turning a finite
//! selection-function model into a standard HOL interpretation.
//!
//! A formula maps to a term of type `i -> o`. The connective translations:
//!
//! ```text
//!   p        |->  p : i -> o                  (constant, or variable for schema atoms)
//!   neg      |->  \A. \X. ~(A X)
//!   or       |->  \A. \B. \X. (A X) | (B X)
//!   cond     |->  \A. \B. \X. forall W. (f X A W) -> (B W)
//!   vld      |->  \A. forall S. (A S)
//! ```
//!
//! `f : i -> (i -> o) -> i -> o` is the relational guise of the selection
//! function. Sugar connectives translate through their definitions in terms
//! of negation and disjunction. Translation output is *not* normalized;
//! normalization is a separate observable step.

use crate::hol::{HolTerm, HolType};
use crate::interp::{HolInterpretation, Value};
use crate::semantics::{Environment, SelectionModel, StateSet};
use crate::syntax::Formula;
use std::collections::BTreeMap;

/// Name of the selection-function constant in translated terms.
pub const SELECTION_CONST: &str = "f";

fn pred() -> HolType {
    HolType::pred()
}

/// `\A: i->o. \X: i. ~(A X)`
pub fn neg_translation() -> HolTerm {
    HolTerm::lam(
        "A",
        pred(),
        HolTerm::lam(
            "X",
            HolType::I,
            HolTerm::not(HolTerm::app(HolTerm::var("A", pred()), HolTerm::var("X", HolType::I))),
        ),
    )
}

/// `\A: i->o. \B: i->o. \X: i. (A X) | (B X)`
pub fn or_translation() -> HolTerm {
    HolTerm::lam(
        "A",
        pred(),
        HolTerm::lam(
            "B",
            pred(),
            HolTerm::lam(
                "X",
                HolType::I,
                HolTerm::or(
                    HolTerm::app(HolTerm::var("A", pred()), HolTerm::var("X", HolType::I)),
                    HolTerm::app(HolTerm::var("B", pred()), HolTerm::var("X", HolType::I)),
                ),
            ),
        ),
    )
}

/// `\A: i->o. \B: i->o. \X: i. forall W: i. (f X A W) -> (B W)`
pub fn cond_translation() -> HolTerm {
    let f = HolTerm::cnst(SELECTION_CONST, HolType::selection());
    HolTerm::lam(
        "A",
        pred(),
        HolTerm::lam(
            "B",
            pred(),
            HolTerm::lam(
                "X",
                HolType::I,
                HolTerm::forall(
                    "W",
                    HolType::I,
                    HolTerm::implies(
                        HolTerm::app(
                            HolTerm::app2(f, HolTerm::var("X", HolType::I), HolTerm::var("A", pred())),
                            HolTerm::var("W", HolType::I),
                        ),
                        HolTerm::app(HolTerm::var("B", pred()), HolTerm::var("W", HolType::I)),
                    ),
                ),
            ),
        ),
    )
}

/// `\A: i->o. forall S: i. (A S)`
pub fn vld_translation() -> HolTerm {
    HolTerm::lam(
        "A",
        pred(),
        HolTerm::forall(
            "S",
            HolType::I,
            HolTerm::app(HolTerm::var("A", pred()), HolTerm::var("S", HolType::I)),
        ),
    )
}

/// Translate a formula into a HOL term of type `i -> o`. Atoms become
/// constants, schema atoms (uppercase) become variables of type `i -> o`;
/// sugar connectives go through their primitive definitions.
pub fn embed(f: &Formula) -> HolTerm {
    match f {
        Formula::Atom(name) => {
            if Formula::is_schema_name(name) {
                HolTerm::var(name, pred())
            } else {
                HolTerm::cnst(name, pred())
            }
        }
        Formula::Neg(a) => HolTerm::app(neg_translation(), embed(a)),
        Formula::Or(a, b) => HolTerm::app2(or_translation(), embed(a), embed(b)),
        Formula::Cond(a, b) => HolTerm::app2(cond_translation(), embed(a), embed(b)),
        Formula::And(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            embed(&Formula::neg(Formula::or(Formula::neg(a), Formula::neg(b))))
        }
        Formula::Implies(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            embed(&Formula::or(Formula::neg(a), b))
        }
        Formula::Iff(a, b) => {
            let fwd = Formula::implies((**a).clone(), (**b).clone());
            let bwd = Formula::implies((**b).clone(), (**a).clone());
            embed(&Formula::and(fwd, bwd))
        }
    }
}

/// Wrap a predicate-over-states into its validity statement `(vld t)`.
pub fn vld_wrap(t: HolTerm) -> HolTerm {
    HolTerm::app(vld_translation(), t)
}

/// Validity of a formula as a closed HOL proposition (unnormalized).
pub fn embed_valid(f: &Formula) -> HolTerm {
    vld_wrap(embed(f))
}

/// Characteristic predicate of a state set as a function table over the
/// model's states.
pub fn charpred(set: StateSet, n: usize) -> Value {
    Value::Func((0..n).map(|w| Value::Bool(set.contains(w))).collect())
}

fn value_to_stateset(v: &Value) -> StateSet {
    let mut set = StateSet::EMPTY;
    if let Value::Func(results) = v {
        for (i, r) in results.iter().enumerate() {
            if r.as_bool() == Some(true) {
                set.insert(i);
            }
        }
    }
    set
}

/// Build the standard interpretation induced by a model: individuals are the
/// model's states, each bound atom denotes its characteristic predicate, and
/// the selection constant denotes the curried relational table
/// `s -> q -> t -> (t in f(s, {x | q x}))`.
///
/// Lowercase bindings (from the valuation, or environment overrides) become
/// constant denotations; schema variables from the environment belong in the
/// variable assignment, see [`schema_assignment`].
pub fn model_to_interpretation(m: &SelectionModel, env: &Environment) -> HolInterpretation {
    let n = m.state_count();
    let mut interp = HolInterpretation::new(n);

    let mut atoms: BTreeMap<String, StateSet> = m.valuation().clone();
    for (name, set) in env {
        if !Formula::is_schema_name(name) {
            atoms.insert(name.clone(), *set);
        }
    }
    for (name, set) in atoms {
        interp.consts.insert(name, charpred(set, n));
    }

    let preds = crate::interp::enumerate_domain(&HolType::pred(), n, interp.domain_cap)
        .expect("predicate domain within cap");
    let mut per_state = Vec::with_capacity(n);
    for s in 0..n {
        let mut per_pred = Vec::with_capacity(preds.len());
        for q in &preds {
            let selected = m.select(s, value_to_stateset(q));
            per_pred.push(charpred(selected, n));
        }
        per_state.push(Value::Func(per_pred));
    }
    interp.consts.insert(SELECTION_CONST.to_string(), Value::Func(per_state));
    interp
}

/// Variable assignment giving each schema variable of the environment its
/// characteristic predicate.
pub fn schema_assignment(m: &SelectionModel, env: &Environment) -> BTreeMap<String, Value> {
    let n = m.state_count();
    env.iter()
        .filter(|(name, _)| Formula::is_schema_name(name))
        .map(|(name, set)| (name.clone(), charpred(*set, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hol::{alpha_eq, beta_eta_normalize, typecheck};
    use crate::semantics::{satisfies, valid_in_model};
    use crate::syntax::parse_formula;
    use rand::{Rng, SeedableRng};

    #[test]
    fn atom_embeds_to_constant() {
        assert_eq!(embed(&Formula::atom("p")), HolTerm::cnst("p", HolType::pred()));
        assert_eq!(embed(&Formula::atom("A")), HolTerm::var("A", HolType::pred()));
    }

    #[test]
    fn conditional_embeds_structurally() {
        let f = parse_formula("p => p").unwrap();
        let p = HolTerm::cnst("p", HolType::pred());
        assert_eq!(embed(&f), HolTerm::app2(cond_translation(), p.clone(), p));
    }

    #[test]
    fn embedding_is_well_typed() {
        use proptest::strategy::{Strategy, ValueTree};
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::deterministic();
        for _ in 0..200 {
            let f = crate::syntax::tests::arb_formula(4)
                .new_tree(&mut runner)
                .unwrap()
                .current();
            let t = embed(&f);
            assert_eq!(typecheck(&t, &[]), Ok(HolType::pred()), "for {f}");
            assert_eq!(typecheck(&vld_wrap(t), &[]), Ok(HolType::O), "for {f}");
        }
    }

    #[test]
    fn negation_normalizes_to_pointwise() {
        // neg p normalizes to \X. ~(p X) in one beta step
        let t = embed(&parse_formula("~p").unwrap());
        let expected = HolTerm::lam(
            "X",
            HolType::I,
            HolTerm::not(HolTerm::app(
                HolTerm::cnst("p", HolType::pred()),
                HolTerm::var("X", HolType::I),
            )),
        );
        assert!(alpha_eq(&beta_eta_normalize(&t), &beta_eta_normalize(&expected)));
    }

    #[test]
    fn worked_example_normal_form() {
        let got = beta_eta_normalize(&embed_valid(&parse_formula("p => p").unwrap()));
        let f = HolTerm::cnst(SELECTION_CONST, HolType::selection());
        let p = HolTerm::cnst("p", HolType::pred());
        let expected = HolTerm::forall(
            "S",
            HolType::I,
            HolTerm::forall(
                "W",
                HolType::I,
                HolTerm::implies(
                    HolTerm::app(
                        HolTerm::app2(f, HolTerm::var("S", HolType::I), p.clone()),
                        HolTerm::var("W", HolType::I),
                    ),
                    HolTerm::app(p, HolTerm::var("W", HolType::I)),
                ),
            ),
        );
        assert!(alpha_eq(&got, &beta_eta_normalize(&expected)));
    }

    #[test]
    fn vld_of_atom_normalizes_to_universal() {
        let got = beta_eta_normalize(&embed_valid(&parse_formula("p").unwrap()));
        let expected = HolTerm::forall(
            "S",
            HolType::I,
            HolTerm::app(HolTerm::cnst("p", HolType::pred()), HolTerm::var("S", HolType::I)),
        );
        assert!(alpha_eq(&got, &beta_eta_normalize(&expected)));
    }

    #[test]
    fn tautology_lifts_to_hol_validity() {
        let t = beta_eta_normalize(&embed_valid(&parse_formula("p | ~p").unwrap()));
        for n in 1..=2usize {
            let preds = crate::interp::enumerate_domain(&HolType::pred(), n, 1 << 16).unwrap();
            let fs = crate::interp::enumerate_domain(&HolType::selection(), n, 1 << 16).unwrap();
            for p in &preds {
                for fv in fs.iter().take(8) {
                    let interp = HolInterpretation::new(n)
                        .with_const("p", p.clone())
                        .with_const(SELECTION_CONST, fv.clone());
                    assert_eq!(
                        interp.evaluate(&BTreeMap::new(), &t),
                        Ok(Value::Bool(true))
                    );
                }
            }
        }
    }

    #[test]
    fn single_state_interpretation_tables() {
        let mut m = SelectionModel::empty(1);
        m.set_valuation("p", StateSet::full(1));
        let interp = model_to_interpretation(&m, &Environment::new());
        assert_eq!(interp.consts.get("p"), Some(&Value::Func(vec![Value::Bool(true)])));
    }

    #[test]
    fn selection_denotation_matches_table() {
        // the one-state countermodel to the conditional-vs-material formula:
        // f(i1, {}) = {i1} means the relational table maps
        // state 0, empty predicate, state 0 to true
        let mut m = SelectionModel::empty(1);
        m.set_valuation("p", StateSet::EMPTY);
        m.set_valuation("q", StateSet::full(1));
        m.set_selection(0, StateSet::EMPTY, StateSet::full(1));
        m.set_selection(0, StateSet::full(1), StateSet::EMPTY);
        let interp = model_to_interpretation(&m, &Environment::new());
        let f = interp.consts.get(SELECTION_CONST).unwrap();
        let Value::Func(states) = f else { panic!() };
        let Value::Func(by_pred) = &states[0] else { panic!() };
        // predicate index 0 is the empty predicate
        let Value::Func(row) = &by_pred[0] else { panic!() };
        assert_eq!(row[0], Value::Bool(true));
        // predicate index 1 is {i1}: f(i1, {i1}) = {} so row is all false
        let Value::Func(row) = &by_pred[1] else { panic!() };
        assert_eq!(row[0], Value::Bool(false));
    }

    #[test]
    fn countermodel_falsifies_translated_formula() {
        // f(s, {}) = {s}, p nowhere: the translated validity of `p => p`
        // evaluates to false
        let mut m = SelectionModel::empty(1);
        m.set_valuation("p", StateSet::EMPTY);
        m.set_selection(0, StateSet::EMPTY, StateSet::full(1));
        let interp = model_to_interpretation(&m, &Environment::new());
        let t = beta_eta_normalize(&embed_valid(&parse_formula("p => p").unwrap()));
        assert_eq!(interp.evaluate(&BTreeMap::new(), &t), Ok(Value::Bool(false)));
    }

    /// The two independently implemented evaluators must agree: direct
    /// satisfaction over the model versus HOL valuation of the translated
    /// formula applied to the state.
    #[test]
    fn evaluator_bridge_on_random_triples() {
        use proptest::strategy::{Strategy, ValueTree};
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::deterministic();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xbeef);
        for _ in 0..1000 {
            let m = crate::semantics::tests::arb_model(3, &["p", "q"])
                .new_tree(&mut runner)
                .unwrap()
                .current();
            let f = crate::syntax::tests::arb_formula(4)
                .new_tree(&mut runner)
                .unwrap()
                .current();
            if f.atoms().iter().any(|a| a != "p" && a != "q") {
                continue;
            }
            let s = rng.random_range(0..m.state_count());
            check_bridge(&m, &Environment::new(), s, &f);
        }
    }

    pub(crate) fn check_bridge(m: &SelectionModel, env: &Environment, s: usize, f: &Formula) {
        let direct = satisfies(m, env, s, f).unwrap();
        let interp = model_to_interpretation(m, env);
        let mut assignment = schema_assignment(m, env);
        assignment.insert("S".to_string(), Value::Indiv(s));
        let term = HolTerm::app(embed(f), HolTerm::var("S", HolType::I));
        let hol = interp.evaluate(&assignment, &term).unwrap();
        assert_eq!(
            hol,
            Value::Bool(direct),
            "evaluator divergence at state {s} on {f} over\n{}",
            crate::semantics::format_model(m)
        );
        // validity agrees with the wrapped translation as well
        let vld = interp
            .evaluate(&assignment, &beta_eta_normalize(&embed_valid(f)))
            .unwrap();
        assert_eq!(vld, Value::Bool(valid_in_model(m, env, f).unwrap()));
    }
}
