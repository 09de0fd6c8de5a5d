//! Finite selection-function models and the satisfaction relation.
//!
//! A model is a triple: a non-empty set of states, a total selection
//! function `f : S x 2^S -> 2^S` stored as a dense table, and a valuation
//! assigning each atom the set of states where it holds. This evaluator is
//! the independent ground truth the rest of the crate is checked against.

use crate::syntax::Formula;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Maximum number of states a model may declare. Keeps the dense selection
/// table (`n * 2^n` entries) and subset bitmasks comfortably in range.
pub const MAX_STATES: usize = 16;

/// A subset of a model's states as a bitmask over state indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(pub u32);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn full(n: usize) -> StateSet {
        StateSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> StateSet {
        StateSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn subset_of(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn inter(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn complement(self, n: usize) -> StateSet {
        StateSet(!self.0 & StateSet::full(n).0)
    }

    pub fn iter(self, n: usize) -> impl Iterator<Item = usize> {
        (0..n).filter(move |i| self.contains(*i))
    }
}

/// Bindings for schema variables (and atom overrides) used when a claim
/// quantifies over arbitrary subsets rather than the model's valuation.
pub type Environment = BTreeMap<String, StateSet>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model must have at least one state")]
    NoStates,
    #[error("too many states: {0} (maximum {MAX_STATES})")]
    TooManyStates(usize),
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("selection table has {got} entries, expected {expected}")]
    BadTableSize { expected: usize, got: usize },
    #[error("subset out of range for a {n}-state model")]
    SubsetOutOfRange { n: usize },
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("atom `{0}` is bound by neither the environment nor the valuation")]
    UnboundAtom(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
}

/// A finite selection-function model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionModel {
    states: Vec<String>,
    /// `selection[w][mask]` = f(w, subset-with-bitmask-`mask`).
    selection: Vec<Vec<StateSet>>,
    valuation: BTreeMap<String, StateSet>,
}

impl SelectionModel {
    pub fn new(
        states: Vec<String>,
        selection: Vec<Vec<StateSet>>,
        valuation: BTreeMap<String, StateSet>,
    ) -> Result<SelectionModel, ModelError> {
        let n = states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        if n > MAX_STATES {
            return Err(ModelError::TooManyStates(n));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let subsets = 1usize << n;
        if selection.len() != n {
            return Err(ModelError::BadTableSize { expected: n, got: selection.len() });
        }
        let full = StateSet::full(n);
        for row in &selection {
            if row.len() != subsets {
                return Err(ModelError::BadTableSize { expected: subsets, got: row.len() });
            }
            if row.iter().any(|s| !s.subset_of(full)) {
                return Err(ModelError::SubsetOutOfRange { n });
            }
        }
        if valuation.values().any(|s| !s.subset_of(full)) {
            return Err(ModelError::SubsetOutOfRange { n });
        }
        Ok(SelectionModel { states, selection, valuation })
    }

    /// Model with `n` states named `i1..in`, every selection entry empty and
    /// no atoms. Useful as a canvas for tests and search.
    pub fn empty(n: usize) -> SelectionModel {
        let states = (1..=n).map(|i| format!("i{i}")).collect();
        let selection = vec![vec![StateSet::EMPTY; 1 << n]; n];
        SelectionModel::new(states, selection, BTreeMap::new()).expect("valid empty model")
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Result<usize, ModelError> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn select(&self, w: usize, subset: StateSet) -> StateSet {
        self.selection[w][subset.0 as usize]
    }

    pub fn set_selection(&mut self, w: usize, subset: StateSet, value: StateSet) {
        self.selection[w][subset.0 as usize] = value;
    }

    pub fn valuation(&self) -> &BTreeMap<String, StateSet> {
        &self.valuation
    }

    pub fn set_valuation(&mut self, atom: &str, set: StateSet) {
        self.valuation.insert(atom.to_string(), set);
    }

    fn atom_set(&self, env: &Environment, name: &str) -> Result<StateSet, EvalError> {
        env.get(name)
            .or_else(|| self.valuation.get(name))
            .copied()
            .ok_or_else(|| EvalError::UnboundAtom(name.to_string()))
    }

    /// Render a subset with the model's state names, e.g. `{i1, i2}`.
    pub fn format_set(&self, set: StateSet) -> String {
        let names: Vec<&str> =
            set.iter(self.state_count()).map(|i| self.states[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Does `f` hold at state `s`? The conditional clause reads: `phi => psi`
/// holds at `s` iff `psi` holds at every state in `f(s, [phi])`.
pub fn satisfies(
    m: &SelectionModel,
    env: &Environment,
    s: usize,
    f: &Formula,
) -> Result<bool, EvalError> {
    if s >= m.state_count() {
        return Err(EvalError::StateOutOfRange(s));
    }
    match f {
        Formula::Atom(name) => Ok(m.atom_set(env, name)?.contains(s)),
        Formula::Neg(a) => Ok(!satisfies(m, env, s, a)?),
        Formula::Or(a, b) => Ok(satisfies(m, env, s, a)? || satisfies(m, env, s, b)?),
        Formula::And(a, b) => Ok(satisfies(m, env, s, a)? && satisfies(m, env, s, b)?),
        Formula::Implies(a, b) => Ok(!satisfies(m, env, s, a)? || satisfies(m, env, s, b)?),
        Formula::Iff(a, b) => Ok(satisfies(m, env, s, a)? == satisfies(m, env, s, b)?),
        Formula::Cond(a, b) => {
            let antecedent = proof_set(m, env, a)?;
            let selected = m.select(s, antecedent);
            for t in selected.iter(m.state_count()) {
                if !satisfies(m, env, t, b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The set of states where `f` holds.
pub fn proof_set(m: &SelectionModel, env: &Environment, f: &Formula) -> Result<StateSet, EvalError> {
    let mut set = StateSet::EMPTY;
    for s in 0..m.state_count() {
        if satisfies(m, env, s, f)? {
            set.insert(s);
        }
    }
    Ok(set)
}

/// True iff `f` holds at every state of the model.
pub fn valid_in_model(m: &SelectionModel, env: &Environment, f: &Formula) -> Result<bool, EvalError> {
    for s in 0..m.state_count() {
        if !satisfies(m, env, s, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Model file format
//
//   states: i1 i2
//   valuation p: {i1}
//   selection:
//   (i1, {}) -> {i1}
//   ...
//
// Writers emit the canonical ordering: states in declaration order, valuation
// atoms sorted by name, selection rows by state then ascending subset mask.
// Fixture files may also carry `env`, `claim`, `formula` and `state` lines;
// those are handled by the fixture layer on top of this parser.
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelFormatError {
    #[error("line {0}: {1}")]
    Line(u32, String),
    #[error("missing `states:` line")]
    MissingStates,
    #[error("incomplete selection table: missing entry ({0}, {1})")]
    MissingEntry(String, String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A parsed model document: the model itself plus any fixture metadata.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModelDocument {
    pub states: Vec<String>,
    pub valuation: BTreeMap<String, StateSet>,
    pub env: Environment,
    pub claim: Option<String>,
    pub formula: Option<String>,
    pub state: Option<String>,
    pub selection: Vec<Vec<Option<StateSet>>>,
}

pub fn format_model(m: &SelectionModel) -> String {
    let mut out = String::new();
    out.push_str("states:");
    for s in m.state_names() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    for (atom, set) in m.valuation() {
        out.push_str(&format!("valuation {atom}: {}\n", m.format_set(*set)));
    }
    out.push_str("selection:\n");
    let n = m.state_count();
    for w in 0..n {
        for mask in 0..(1u32 << n) {
            let arg = StateSet(mask);
            out.push_str(&format!(
                "({}, {}) -> {}\n",
                m.state_names()[w],
                m.format_set(arg),
                m.format_set(m.select(w, arg))
            ));
        }
    }
    out
}

/// Parse the model file format, tolerating fixture metadata lines.
pub fn parse_model_document(text: &str) -> Result<ModelDocument, ModelFormatError> {
    let mut doc = ModelDocument::default();
    let err = |lineno: u32, msg: String| ModelFormatError::Line(lineno, msg);

    let state_index = |doc: &ModelDocument, name: &str, lineno: u32| -> Result<usize, ModelFormatError> {
        doc.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| err(lineno, format!("unknown state `{name}`")))
    };

    fn parse_set(
        doc: &ModelDocument,
        text: &str,
        lineno: u32,
    ) -> Result<StateSet, ModelFormatError> {
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| ModelFormatError::Line(lineno, format!("expected a set, got `{text}`")))?;
        let mut set = StateSet::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let idx = doc
                .states
                .iter()
                .position(|s| s == part)
                .ok_or_else(|| ModelFormatError::Line(lineno, format!("unknown state `{part}`")))?;
            set.insert(idx);
        }
        Ok(set)
    }

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx as u32 + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() || line == "selection:" {
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            doc.states = rest.split_whitespace().map(String::from).collect();
            let n = doc.states.len();
            if n == 0 {
                return Err(err(lineno, "states line lists no states".into()));
            }
            doc.selection = vec![vec![None; 1 << n]; n];
        } else if let Some(rest) = line.strip_prefix("valuation ") {
            let (atom, set) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `valuation <atom>: {..}`".into()))?;
            let set = parse_set(&doc, set, lineno)?;
            doc.valuation.insert(atom.trim().to_string(), set);
        } else if let Some(rest) = line.strip_prefix("env ") {
            let (name, set) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `env <name>: {..}`".into()))?;
            let set = parse_set(&doc, set, lineno)?;
            doc.env.insert(name.trim().to_string(), set);
        } else if let Some(rest) = line.strip_prefix("claim:") {
            doc.claim = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("formula:") {
            doc.formula = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("state:") {
            doc.state = Some(rest.trim().to_string());
        } else if line.starts_with('(') {
            if doc.states.is_empty() {
                return Err(ModelFormatError::MissingStates);
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err(lineno, "expected `(state, {..}) -> {..}`".into()))?;
            let lhs = lhs.trim();
            let inner = lhs
                .strip_prefix('(')
                .and_then(|t| t.trim_end().strip_suffix(')'))
                .ok_or_else(|| err(lineno, "expected `(state, {..})` on the left".into()))?;
            let (state, arg) = inner
                .split_once(',')
                .ok_or_else(|| err(lineno, "expected `(state, {..})` on the left".into()))?;
            let w = state_index(&doc, state.trim(), lineno)?;
            let arg = parse_set(&doc, arg, lineno)?;
            let val = parse_set(&doc, rhs, lineno)?;
            doc.selection[w][arg.0 as usize] = Some(val);
        } else {
            return Err(err(lineno, format!("unrecognised line `{line}`")));
        }
    }

    if doc.states.is_empty() {
        return Err(ModelFormatError::MissingStates);
    }
    Ok(doc)
}

impl ModelDocument {
    /// Build the model, requiring the selection table to be total.
    pub fn into_model(self) -> Result<(SelectionModel, Environment, Option<String>, Option<String>, Option<String>), ModelFormatError> {
        let n = self.states.len();
        let mut table = Vec::with_capacity(n);
        for (w, row) in self.selection.iter().enumerate() {
            let mut out = Vec::with_capacity(1 << n);
            for (mask, entry) in row.iter().enumerate() {
                match entry {
                    Some(v) => out.push(*v),
                    None => {
                        let arg = StateSet(mask as u32);
                        let names: Vec<&str> =
                            arg.iter(n).map(|i| self.states[i].as_str()).collect();
                        return Err(ModelFormatError::MissingEntry(
                            self.states[w].clone(),
                            format!("{{{}}}", names.join(", ")),
                        ));
                    }
                }
            }
            table.push(out);
        }
        let model = SelectionModel::new(self.states, table, self.valuation)?;
        Ok((model, self.env, self.claim, self.formula, self.state))
    }
}

/// Parse a model file that carries no fixture metadata.
pub fn parse_model(text: &str) -> Result<SelectionModel, ModelFormatError> {
    let (model, _, _, _, _) = parse_model_document(text)?.into_model()?;
    Ok(model)
}

impl fmt::Display for SelectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_model(self))
    }
}
