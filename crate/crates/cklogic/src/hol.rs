//! Simply-typed lambda calculus over base types `o` (booleans) and `i`
//! (individuals): typechecking, capture-avoiding substitution and
//! beta-eta-normalization.
//!
//! Negation, disjunction and the quantifier `Pi` are primitive node kinds
//! with fixed meanings, so the normalizer stays purely beta-eta. Truth
//! constants exist as leaves so emitted problems can use the `$true`/`$false`
//! builtins. Conjunction, implication and the universal binder are provided
//! as derived constructors.

use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HolType {
    /// Booleans.
    O,
    /// Individuals (possible states).
    I,
    Arrow(Box<HolType>, Box<HolType>),
}

impl HolType {
    pub fn arrow(from: HolType, to: HolType) -> HolType {
        HolType::Arrow(Box::new(from), Box::new(to))
    }

    /// `i -> o`, the type of embedded formulas / predicates over states.
    pub fn pred() -> HolType {
        HolType::arrow(HolType::I, HolType::O)
    }

    /// The curried type of the selection-function constant:
    /// `i -> (i -> o) -> i -> o`.
    pub fn selection() -> HolType {
        HolType::arrow(
            HolType::I,
            HolType::arrow(HolType::pred(), HolType::pred()),
        )
    }
}

impl fmt::Display for HolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolType::O => write!(f, "o"),
            HolType::I => write!(f, "i"),
            HolType::Arrow(a, b) => {
                if matches!(**a, HolType::Arrow(_, _)) {
                    write!(f, "({a}) > {b}")
                } else {
                    write!(f, "{a} > {b}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HolTerm {
    Const(String, HolType),
    Var(String, HolType),
    Lam(String, HolType, Box<HolTerm>),
    App(Box<HolTerm>, Box<HolTerm>),
    Not(Box<HolTerm>),
    Or(Box<HolTerm>, Box<HolTerm>),
    /// The quantifier at a given argument type, applied to a predicate term:
    /// `Pi(a, p)` requires `p : a -> o` and has type `o`.
    Pi(HolType, Box<HolTerm>),
    TrueC,
    FalseC,
}

impl HolTerm {
    pub fn cnst(name: &str, ty: HolType) -> HolTerm {
        HolTerm::Const(name.to_string(), ty)
    }

    pub fn var(name: &str, ty: HolType) -> HolTerm {
        HolTerm::Var(name.to_string(), ty)
    }

    pub fn lam(name: &str, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::Lam(name.to_string(), ty, Box::new(body))
    }

    pub fn app(f: HolTerm, a: HolTerm) -> HolTerm {
        HolTerm::App(Box::new(f), Box::new(a))
    }

    pub fn app2(f: HolTerm, a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::app(HolTerm::app(f, a), b)
    }

    pub fn not(t: HolTerm) -> HolTerm {
        HolTerm::Not(Box::new(t))
    }

    pub fn or(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::Or(Box::new(a), Box::new(b))
    }

    /// `a & b` as `~(~a | ~b)`.
    pub fn and(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::not(HolTerm::or(HolTerm::not(a), HolTerm::not(b)))
    }

    /// `a -> b` as `~a | b`.
    pub fn implies(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::or(HolTerm::not(a), b)
    }

    /// `a <-> b` as `(a -> b) & (b -> a)`.
    pub fn iff(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::and(HolTerm::implies(a.clone(), b.clone()), HolTerm::implies(b, a))
    }

    /// `forall x: ty. body`, i.e. `Pi(ty, \x: ty. body)`.
    pub fn forall(name: &str, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::Pi(ty.clone(), Box::new(HolTerm::lam(name, ty, body)))
    }

    /// `exists x: ty. body` as `~forall x. ~body`.
    pub fn exists(name: &str, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::not(HolTerm::forall(name, ty, HolTerm::not(body)))
    }

    pub fn free_vars(&self) -> Vec<(String, HolType)> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }
}

fn collect_free(t: &HolTerm, bound: &mut Vec<String>, out: &mut Vec<(String, HolType)>) {
    match t {
        HolTerm::Var(name, ty) => {
            if !bound.iter().any(|b| b == name) && !out.iter().any(|(n, _)| n == name) {
                out.push((name.clone(), ty.clone()));
            }
        }
        HolTerm::Const(_, _) | HolTerm::TrueC | HolTerm::FalseC => {}
        HolTerm::Lam(x, _, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        HolTerm::App(a, b) | HolTerm::Or(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        HolTerm::Not(a) | HolTerm::Pi(_, a) => collect_free(a, bound, out),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("cannot apply term of type `{fun}` to argument of type `{arg}`")]
    BadApplication { fun: String, arg: String },
    #[error("expected type `{expected}`, found `{found}`")]
    Mismatch { expected: String, found: String },
}

/// Infer the unique type of `t`; free variables are looked up in `ctx`.
pub fn typecheck(t: &HolTerm, ctx: &[(String, HolType)]) -> Result<HolType, TypeError> {
    let mut scope: Vec<(String, HolType)> = ctx.to_vec();
    infer(t, &mut scope)
}

fn infer(t: &HolTerm, scope: &mut Vec<(String, HolType)>) -> Result<HolType, TypeError> {
    match t {
        HolTerm::Const(_, ty) => Ok(ty.clone()),
        HolTerm::Var(name, ty) => {
            match scope.iter().rev().find(|(n, _)| n == name) {
                Some((_, bound_ty)) => {
                    if bound_ty == ty {
                        Ok(ty.clone())
                    } else {
                        Err(TypeError::Mismatch {
                            expected: bound_ty.to_string(),
                            found: ty.to_string(),
                        })
                    }
                }
                None => Err(TypeError::UnboundVar(name.clone())),
            }
        }
        HolTerm::Lam(x, ty, body) => {
            scope.push((x.clone(), ty.clone()));
            let body_ty = infer(body, scope)?;
            scope.pop();
            Ok(HolType::arrow(ty.clone(), body_ty))
        }
        HolTerm::App(f, a) => {
            let fun_ty = infer(f, scope)?;
            let arg_ty = infer(a, scope)?;
            match fun_ty {
                HolType::Arrow(from, to) if *from == arg_ty => Ok(*to),
                other => Err(TypeError::BadApplication {
                    fun: other.to_string(),
                    arg: arg_ty.to_string(),
                }),
            }
        }
        HolTerm::Not(a) => {
            expect(infer(a, scope)?, HolType::O)?;
            Ok(HolType::O)
        }
        HolTerm::Or(a, b) => {
            expect(infer(a, scope)?, HolType::O)?;
            expect(infer(b, scope)?, HolType::O)?;
            Ok(HolType::O)
        }
        HolTerm::Pi(alpha, p) => {
            let p_ty = infer(p, scope)?;
            expect(p_ty, HolType::arrow(alpha.clone(), HolType::O))?;
            Ok(HolType::O)
        }
        HolTerm::TrueC | HolTerm::FalseC => Ok(HolType::O),
    }
}

fn expect(found: HolType, expected: HolType) -> Result<(), TypeError> {
    if found == expected {
        Ok(())
    } else {
        Err(TypeError::Mismatch { expected: expected.to_string(), found: found.to_string() })
    }
}

/// Capture-avoiding substitution `[a/x]t`. The public entry checks that the
/// replacement has the variable's type.
pub fn substitute(t: &HolTerm, x: &str, x_ty: &HolType, a: &HolTerm) -> Result<HolTerm, TypeError> {
    let free: Vec<(String, HolType)> = a.free_vars();
    let ctx: Vec<(String, HolType)> = free;
    let a_ty = typecheck(a, &ctx)?;
    if a_ty != *x_ty {
        return Err(TypeError::Mismatch { expected: x_ty.to_string(), found: a_ty.to_string() });
    }
    Ok(subst(t, x, a))
}

pub(crate) fn subst(t: &HolTerm, x: &str, a: &HolTerm) -> HolTerm {
    match t {
        HolTerm::Var(name, _) if name == x => a.clone(),
        HolTerm::Var(_, _) | HolTerm::Const(_, _) | HolTerm::TrueC | HolTerm::FalseC => t.clone(),
        HolTerm::App(f, arg) => HolTerm::app(subst(f, x, a), subst(arg, x, a)),
        HolTerm::Not(b) => HolTerm::not(subst(b, x, a)),
        HolTerm::Or(l, r) => HolTerm::or(subst(l, x, a), subst(r, x, a)),
        HolTerm::Pi(ty, p) => HolTerm::Pi(ty.clone(), Box::new(subst(p, x, a))),
        HolTerm::Lam(y, ty, body) => {
            if y == x {
                return t.clone();
            }
            let a_free = a.free_vars();
            if a_free.iter().any(|(n, _)| n == y) {
                // rename the binder away from the replacement's free variables
                let mut avoid: Vec<String> = a_free.into_iter().map(|(n, _)| n).collect();
                avoid.extend(body.free_vars().into_iter().map(|(n, _)| n));
                avoid.push(x.to_string());
                let fresh = fresh_name(y, &avoid);
                let renamed = subst(body, y, &HolTerm::var(&fresh, ty.clone()));
                HolTerm::lam(&fresh, ty.clone(), subst(&renamed, x, a))
            } else {
                HolTerm::lam(y, ty.clone(), subst(body, x, a))
            }
        }
    }
}

fn fresh_name(base: &str, avoid: &[String]) -> String {
    let stem: String = base.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let stem = if stem.is_empty() { "v".to_string() } else { stem };
    for k in 1u32.. {
        let candidate = format!("{stem}{k}");
        if !avoid.iter().any(|n| *n == candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// Reduce to beta-eta normal form and rename bound variables canonically
/// (by binder depth), so alpha-equivalent normal forms are structurally
/// equal. Callers must pass well-typed terms; simply-typed terms strongly
/// normalize.
pub fn beta_eta_normalize(t: &HolTerm) -> HolTerm {
    canonicalize_bound(&nf(t))
}

fn nf(t: &HolTerm) -> HolTerm {
    match t {
        HolTerm::Var(_, _) | HolTerm::Const(_, _) | HolTerm::TrueC | HolTerm::FalseC => t.clone(),
        HolTerm::Not(a) => HolTerm::not(nf(a)),
        HolTerm::Or(a, b) => HolTerm::or(nf(a), nf(b)),
        HolTerm::Pi(ty, p) => HolTerm::Pi(ty.clone(), Box::new(nf(p))),
        HolTerm::App(f, a) => {
            let f = nf(f);
            if let HolTerm::Lam(x, _, body) = f {
                nf(&subst(&body, &x, a))
            } else {
                HolTerm::app(f, nf(a))
            }
        }
        HolTerm::Lam(x, ty, body) => {
            let body = nf(body);
            // eta: \x. (s x) reduces to s when x is not free in s
            if let HolTerm::App(s, arg) = &body {
                if matches!(&**arg, HolTerm::Var(n, _) if n == x)
                    && !s.free_vars().iter().any(|(n, _)| n == x)
                {
                    return (**s).clone();
                }
            }
            HolTerm::lam(x, ty.clone(), body)
        }
    }
}

/// Rename bound variables to `X1, X2, ...` by binder depth. The prefix is
/// chosen so it cannot clash with any free variable of the term.
fn canonicalize_bound(t: &HolTerm) -> HolTerm {
    let free: Vec<String> = t.free_vars().into_iter().map(|(n, _)| n).collect();
    let prefix = ["X", "Y", "Z", "XX"]
        .iter()
        .find(|p| {
            !free.iter().any(|n| {
                n.strip_prefix(*p)
                    .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            })
        })
        .unwrap_or(&"XX0")
        .to_string();
    let mut map: Vec<(String, String)> = Vec::new();
    rename(t, &prefix, 0, &mut map)
}

fn rename(t: &HolTerm, prefix: &str, depth: u32, map: &mut Vec<(String, String)>) -> HolTerm {
    match t {
        HolTerm::Var(name, ty) => {
            let new = map
                .iter()
                .rev()
                .find(|(old, _)| old == name)
                .map(|(_, n)| n.clone())
                .unwrap_or_else(|| name.clone());
            HolTerm::Var(new, ty.clone())
        }
        HolTerm::Const(_, _) | HolTerm::TrueC | HolTerm::FalseC => t.clone(),
        HolTerm::App(a, b) => {
            HolTerm::app(rename(a, prefix, depth, map), rename(b, prefix, depth, map))
        }
        HolTerm::Not(a) => HolTerm::not(rename(a, prefix, depth, map)),
        HolTerm::Or(a, b) => {
            HolTerm::or(rename(a, prefix, depth, map), rename(b, prefix, depth, map))
        }
        HolTerm::Pi(ty, p) => HolTerm::Pi(ty.clone(), Box::new(rename(p, prefix, depth, map))),
        HolTerm::Lam(x, ty, body) => {
            let new = format!("{prefix}{}", depth + 1);
            map.push((x.clone(), new.clone()));
            let body = rename(body, prefix, depth + 1, map);
            map.pop();
            HolTerm::Lam(new, ty.clone(), Box::new(body))
        }
    }
}

/// Structural equality modulo bound-variable names.
pub fn alpha_eq(a: &HolTerm, b: &HolTerm) -> bool {
    fn go(a: &HolTerm, b: &HolTerm, pairs: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (HolTerm::Var(x, tx), HolTerm::Var(y, ty)) => {
                if tx != ty {
                    return false;
                }
                match pairs.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
            }
            (HolTerm::Const(x, tx), HolTerm::Const(y, ty)) => x == y && tx == ty,
            (HolTerm::TrueC, HolTerm::TrueC) | (HolTerm::FalseC, HolTerm::FalseC) => true,
            (HolTerm::App(f, x), HolTerm::App(g, y)) => go(f, g, pairs) && go(x, y, pairs),
            (HolTerm::Not(x), HolTerm::Not(y)) => go(x, y, pairs),
            (HolTerm::Or(l1, r1), HolTerm::Or(l2, r2)) => go(l1, l2, pairs) && go(r1, r2, pairs),
            (HolTerm::Pi(t1, p1), HolTerm::Pi(t2, p2)) => t1 == t2 && go(p1, p2, pairs),
            (HolTerm::Lam(x, tx, b1), HolTerm::Lam(y, ty, b2)) => {
                if tx != ty {
                    return false;
                }
                pairs.push((x.clone(), y.clone()));
                let ok = go(b1, b2, pairs);
                pairs.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}
