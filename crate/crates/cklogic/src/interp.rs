//! Valuation of HOL terms over finite standard models.
//!
//! Domains: booleans are `[F, T]`, individuals are `0..n` in declaration
//! order, and every arrow domain is the *full* function space, enumerated
//! lexicographically by output tuple. Functions are exhaustive
//! argument-indexed tables, so evaluation and domain enumeration agree on
//! indices by construction.

use crate::hol::{HolTerm, HolType};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default bound on the size of any quantifier or tabulated domain.
pub const DEFAULT_DOMAIN_CAP: usize = 1 << 16;

/// An element of some finite domain. Functions store one result per element
/// of their argument domain, in canonical enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Indiv(usize),
    Func(Vec<Value>),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// Number of elements in the domain this value belongs to; `n` is the
    /// size of the individual domain.
    pub fn space_size(&self, n: usize) -> usize {
        match self {
            Value::Bool(_) => 2,
            Value::Indiv(_) => n,
            Value::Func(results) => {
                let result_space = results[0].space_size(n);
                result_space.pow(results.len() as u32)
            }
        }
    }

    /// Position of this value in the canonical enumeration of its domain.
    pub fn index(&self, n: usize) -> usize {
        match self {
            Value::Bool(b) => *b as usize,
            Value::Indiv(k) => *k,
            Value::Func(results) => {
                let result_space = results[0].space_size(n);
                results.iter().fold(0, |acc, r| acc * result_space + r.index(n))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HolEvalError {
    #[error("domain of type `{ty}` has {size} elements, above the cap of {cap}")]
    DomainTooLarge { ty: String, size: usize, cap: usize },
    #[error("no denotation for constant `{0}`")]
    UnknownConst(String),
    #[error("no assignment for variable `{0}`")]
    UnassignedVar(String),
    #[error("term is not well-typed at evaluation: {0}")]
    IllTyped(String),
}

/// Number of elements of each type's domain when individuals have `n`
/// elements. Errors out instead of overflowing or exceeding `cap`.
pub fn domain_size(ty: &HolType, n: usize, cap: usize) -> Result<usize, HolEvalError> {
    let too_large = || HolEvalError::DomainTooLarge { ty: ty.to_string(), size: 0, cap };
    let size = match ty {
        HolType::O => 2,
        HolType::I => n,
        HolType::Arrow(a, b) => {
            let da = domain_size(a, n, cap)?;
            let db = domain_size(b, n, cap)?;
            let mut size: usize = 1;
            for _ in 0..da {
                size = size.checked_mul(db).ok_or_else(too_large)?;
                if size > cap {
                    return Err(HolEvalError::DomainTooLarge { ty: ty.to_string(), size, cap });
                }
            }
            size
        }
    };
    if size > cap {
        return Err(HolEvalError::DomainTooLarge { ty: ty.to_string(), size, cap });
    }
    Ok(size)
}

/// All elements of a type's domain in canonical order.
pub fn enumerate_domain(ty: &HolType, n: usize, cap: usize) -> Result<Vec<Value>, HolEvalError> {
    match ty {
        HolType::O => Ok(vec![Value::Bool(false), Value::Bool(true)]),
        HolType::I => Ok((0..n).map(Value::Indiv).collect()),
        HolType::Arrow(a, b) => {
            let total = domain_size(ty, n, cap)?;
            let dom_a = domain_size(a, n, cap)?;
            let range = enumerate_domain(b, n, cap)?;
            let mut out = Vec::with_capacity(total);
            for k in 0..total {
                // digits of k base |range|, most significant first
                let mut results = vec![range[0].clone(); dom_a];
                let mut rem = k;
                for slot in (0..dom_a).rev() {
                    results[slot] = range[rem % range.len()].clone();
                    rem /= range.len();
                }
                out.push(Value::Func(results));
            }
            Ok(out)
        }
    }
}

/// A finite standard interpretation: the size of the individual domain plus
/// denotations for constants. Logical primitives have fixed meanings and
/// need no entries.
#[derive(Clone, Debug)]
pub struct HolInterpretation {
    pub domain_size: usize,
    pub consts: BTreeMap<String, Value>,
    pub domain_cap: usize,
}

impl HolInterpretation {
    pub fn new(domain_size: usize) -> HolInterpretation {
        HolInterpretation { domain_size, consts: BTreeMap::new(), domain_cap: DEFAULT_DOMAIN_CAP }
    }

    pub fn with_const(mut self, name: &str, value: Value) -> HolInterpretation {
        self.consts.insert(name.to_string(), value);
        self
    }

    /// Evaluate a term under a variable assignment.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<String, Value>,
        t: &HolTerm,
    ) -> Result<Value, HolEvalError> {
        let mut scope: Vec<(String, Value)> =
            assignment.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        self.eval(&mut scope, t)
    }

    fn eval(&self, scope: &mut Vec<(String, Value)>, t: &HolTerm) -> Result<Value, HolEvalError> {
        match t {
            HolTerm::TrueC => Ok(Value::Bool(true)),
            HolTerm::FalseC => Ok(Value::Bool(false)),
            HolTerm::Var(name, _) => scope
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| HolEvalError::UnassignedVar(name.clone())),
            HolTerm::Const(name, _) => self
                .consts
                .get(name)
                .cloned()
                .ok_or_else(|| HolEvalError::UnknownConst(name.clone())),
            HolTerm::Not(a) => {
                let v = self.eval_bool(scope, a)?;
                Ok(Value::Bool(!v))
            }
            HolTerm::Or(a, b) => {
                let va = self.eval_bool(scope, a)?;
                let vb = self.eval_bool(scope, b)?;
                Ok(Value::Bool(va || vb))
            }
            HolTerm::App(f, a) => {
                let fv = self.eval(scope, f)?;
                let av = self.eval(scope, a)?;
                match fv {
                    Value::Func(results) => {
                        let idx = av.index(self.domain_size);
                        results.get(idx).cloned().ok_or_else(|| {
                            HolEvalError::IllTyped(format!("application index {idx} out of range"))
                        })
                    }
                    _ => Err(HolEvalError::IllTyped("application of a non-function".into())),
                }
            }
            HolTerm::Lam(x, ty, body) => {
                let domain = enumerate_domain(ty, self.domain_size, self.domain_cap)?;
                let mut results = Vec::with_capacity(domain.len());
                for v in domain {
                    scope.push((x.clone(), v));
                    let r = self.eval(scope, body);
                    scope.pop();
                    results.push(r?);
                }
                Ok(Value::Func(results))
            }
            HolTerm::Pi(alpha, p) => {
                // guard before tabulating the quantifier domain
                domain_size(alpha, self.domain_size, self.domain_cap)?;
                let pv = self.eval(scope, p)?;
                match pv {
                    Value::Func(results) => Ok(Value::Bool(
                        results.iter().all(|r| r.as_bool() == Some(true)),
                    )),
                    _ => Err(HolEvalError::IllTyped("quantifier over a non-predicate".into())),
                }
            }
        }
    }

    fn eval_bool(&self, scope: &mut Vec<(String, Value)>, t: &HolTerm) -> Result<bool, HolEvalError> {
        self.eval(scope, t)?
            .as_bool()
            .ok_or_else(|| HolEvalError::IllTyped("expected a boolean".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hol::{beta_eta_normalize, HolTerm, HolType};

    #[test]
    fn truth_table_negation_of_disjunction() {
        let interp = HolInterpretation::new(1);
        let mut assignment = BTreeMap::new();
        assignment.insert("x".to_string(), Value::Bool(false));
        assignment.insert("y".to_string(), Value::Bool(false));
        let t = HolTerm::not(HolTerm::or(
            HolTerm::var("x", HolType::O),
            HolTerm::var("y", HolType::O),
        ));
        assert_eq!(interp.evaluate(&assignment, &t), Ok(Value::Bool(true)));
    }

    #[test]
    fn enumeration_and_index_agree() {
        for ty in crate::hol::tests::small_types() {
            for n in 1..=3usize {
                let domain = enumerate_domain(&ty, n, DEFAULT_DOMAIN_CAP).unwrap();
                assert_eq!(domain.len(), domain_size(&ty, n, DEFAULT_DOMAIN_CAP).unwrap());
                for (i, v) in domain.iter().enumerate() {
                    assert_eq!(v.index(n), i, "index mismatch for {ty} at n={n}");
                    assert_eq!(v.space_size(n), domain.len());
                }
            }
        }
    }

    #[test]
    fn quantifier_cap_is_enforced() {
        let mut interp = HolInterpretation::new(2);
        interp.domain_cap = 8;
        // forall P: (i -> o) -> o. ... needs 2^(2^2) = 16 > 8 elements
        let big = HolType::arrow(HolType::pred(), HolType::O);
        let t = HolTerm::forall("P", big, HolTerm::TrueC);
        assert!(matches!(
            interp.evaluate(&BTreeMap::new(), &t),
            Err(HolEvalError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn forall_over_individuals() {
        // forall X: i. (p X) with p = {0 -> T, 1 -> F}
        let p = Value::Func(vec![Value::Bool(true), Value::Bool(false)]);
        let interp = HolInterpretation::new(2).with_const("p", p);
        let t = HolTerm::forall(
            "X",
            HolType::I,
            HolTerm::app(HolTerm::cnst("p", HolType::pred()), HolTerm::var("X", HolType::I)),
        );
        assert_eq!(interp.evaluate(&BTreeMap::new(), &t), Ok(Value::Bool(false)));
    }

    /// The valuation clauses for the derived connectives, checked on all
    /// boolean pairs and both quantifier shapes over tiny domains.
    #[test]
    fn valuation_clauses_for_derived_connectives() {
        let interp = HolInterpretation::new(2);
        for a in [false, true] {
            for b in [false, true] {
                let mut assignment = BTreeMap::new();
                assignment.insert("x".to_string(), Value::Bool(a));
                assignment.insert("y".to_string(), Value::Bool(b));
                let x = HolTerm::var("x", HolType::O);
                let y = HolTerm::var("y", HolType::O);
                let cases = [
                    (HolTerm::not(x.clone()), !a),
                    (HolTerm::or(x.clone(), y.clone()), a || b),
                    (HolTerm::and(x.clone(), y.clone()), a && b),
                    (HolTerm::implies(x.clone(), y.clone()), !a || b),
                    (HolTerm::iff(x.clone(), y.clone()), a == b),
                ];
                for (t, expected) in cases {
                    assert_eq!(interp.evaluate(&assignment, &t), Ok(Value::Bool(expected)));
                }
            }
        }
    }

    #[test]
    fn beta_eta_equal_terms_evaluate_equal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let types = [HolType::O, HolType::pred(), HolType::arrow(HolType::O, HolType::O)];
        let mut done = 0;
        while done < 500 {
            let ty = &types[done % types.len()];
            let t = crate::hol::tests::gen_term(&mut rng, ty, &mut Vec::new(), 5);
            if !t.free_vars().is_empty() {
                continue;
            }
            for n in 1..=2usize {
                let interp = HolInterpretation::new(n).with_const("c0", Value::Indiv(0));
                let direct = interp.evaluate(&BTreeMap::new(), &t);
                let normal = interp.evaluate(&BTreeMap::new(), &beta_eta_normalize(&t));
                assert_eq!(direct, normal, "divergence on {t:?} at n={n}");
            }
            done += 1;
        }
    }
}
