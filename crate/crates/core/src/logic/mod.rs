//! Formula syntax and Tarskian evaluation over finite structures.
//!
//! The language is relational: relation symbols with fixed arities plus
//! constant symbols. Functions are represented by their graph relations.

mod enumerate;
mod eval;
mod parse;

pub use enumerate::{definable_relations, definable_relations_witnessed, EnumLimits, Relation};
pub use eval::{evaluate, satisfying_tuples, Assignment};
pub use parse::parse_formula;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("arity mismatch at byte {pos}: `{name}` takes {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        pos: usize,
        expected: usize,
        got: usize,
    },
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("free variable `{0}` is not covered by the assignment")]
    UncoveredVariable(String),
    #[error("symbol `{0}` is not interpreted in the structure")]
    MissingInterpretation(String),
    #[error("enumeration cap of {0} candidate formulas exceeded")]
    ResourceCap(usize),
}

/// A relational signature: relation symbols with arities and constant symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<R, C>(relations: R, constants: C) -> Result<Self, LogicError>
    where
        R: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = String>,
    {
        let mut rel_map = BTreeMap::new();
        for (name, arity) in relations {
            if !valid_ident(&name) {
                return Err(LogicError::BadSignature(format!(
                    "`{name}` is not a valid symbol name"
                )));
            }
            if arity == 0 {
                return Err(LogicError::BadSignature(format!(
                    "relation `{name}` must have arity >= 1"
                )));
            }
            if rel_map.insert(name.clone(), arity).is_some() {
                return Err(LogicError::BadSignature(format!(
                    "duplicate symbol `{name}`"
                )));
            }
        }
        let mut const_set = BTreeSet::new();
        for name in constants {
            if !valid_ident(&name) {
                return Err(LogicError::BadSignature(format!(
                    "`{name}` is not a valid symbol name"
                )));
            }
            if rel_map.contains_key(&name) || !const_set.insert(name.clone()) {
                return Err(LogicError::BadSignature(format!(
                    "duplicate symbol `{name}`"
                )));
            }
        }
        Ok(Signature {
            relations: rel_map,
            constants: const_set,
        })
    }

    pub fn empty() -> Self {
        Signature {
            relations: BTreeMap::new(),
            constants: BTreeSet::new(),
        }
    }

    /// The signature of ∈-structures: a single binary relation `E`.
    pub fn membership() -> Self {
        Signature::new([("E".to_string(), 2)], []).unwrap()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(|c| c.as_str())
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    /// Extends the signature with additional constants, e.g. the fresh
    /// parameter constants used during enumeration.
    pub fn with_constants<I: IntoIterator<Item = String>>(
        &self,
        extra: I,
    ) -> Result<Self, LogicError> {
        Signature::new(
            self.relations.iter().map(|(n, &a)| (n.clone(), a)),
            self.constants.iter().cloned().chain(extra),
        )
    }
}

/// A term is a named variable or a constant symbol from the ambient signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var<S: Into<String>>(s: S) -> Self {
        Term::Var(s.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(s) | Term::Const(s) => write!(f, "{s}"),
        }
    }
}

/// Abstract syntax of first-order formulas over a relational signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists<S: Into<String>>(v: S, f: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall<S: Into<String>>(v: S, f: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn eq_vars<A: Into<String>, B: Into<String>>(a: A, b: B) -> Formula {
        Formula::Eq(Term::Var(a.into()), Term::Var(b.into()))
    }

    /// Conjunction of a nonempty list; `None` for an empty one.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Disjunction of a nonempty list; `None` for an empty one.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Total count of connectives and quantifiers, the enumeration measure.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth() + b.depth()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Rel(_, args) => args.iter().for_each(term),
            Formula::Eq(a, b) => {
                term(a);
                term(b);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Rel(_, args) => args.iter().for_each(term),
            Formula::Eq(a, b) => {
                term(a);
                term(b);
            }
            Formula::Not(f) => f.collect_all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                out.insert(v.clone());
                f.collect_all_vars(out);
            }
        }
    }

    /// Checks every atomic symbol against the signature.
    pub fn validate(&self, sig: &Signature) -> Result<(), LogicError> {
        let term = |t: &Term| match t {
            Term::Const(c) if !sig.has_constant(c) => Err(LogicError::UnknownSymbol {
                name: c.clone(),
                pos: 0,
            }),
            _ => Ok(()),
        };
        match self {
            Formula::Rel(name, args) => {
                let arity = sig
                    .relation_arity(name)
                    .ok_or_else(|| LogicError::UnknownSymbol {
                        name: name.clone(),
                        pos: 0,
                    })?;
                if arity != args.len() {
                    return Err(LogicError::ArityMismatch {
                        name: name.clone(),
                        pos: 0,
                        expected: arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(term)
            }
            Formula::Eq(a, b) => {
                term(a)?;
                term(b)
            }
            Formula::Not(f) => f.validate(sig),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.validate(sig),
        }
    }

    /// Capture-avoiding substitution of terms for free variables.
    ///
    /// Binders whose name collides with a variable free in any replacement
    /// are renamed to a fresh name before descending.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        let mut counter = 0usize;
        self.substitute_inner(map, &mut counter)
    }

    fn substitute_inner(&self, map: &BTreeMap<String, Term>, counter: &mut usize) -> Formula {
        let term = |t: &Term| match t {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        };
        match self {
            Formula::Rel(name, args) => Formula::Rel(name.clone(), args.iter().map(term).collect()),
            Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
            Formula::Not(f) => Formula::not(f.substitute_inner(map, counter)),
            Formula::And(a, b) => Formula::and(
                a.substitute_inner(map, counter),
                b.substitute_inner(map, counter),
            ),
            Formula::Or(a, b) => Formula::or(
                a.substitute_inner(map, counter),
                b.substitute_inner(map, counter),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.substitute_inner(map, counter),
                b.substitute_inner(map, counter),
            ),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut inner_map: BTreeMap<String, Term> = map.clone();
                inner_map.remove(v);
                let captured = inner_map.values().any(|t| t.as_var() == Some(v.as_str()));
                let (v, f) = if captured {
                    let body_vars = f.all_vars();
                    let fresh = loop {
                        let cand = format!("{v}__r{counter}__z");
                        *counter += 1;
                        if !body_vars.contains(&cand)
                            && !inner_map
                                .values()
                                .any(|t| t.as_var() == Some(cand.as_str()))
                        {
                            break cand;
                        }
                    };
                    inner_map.insert(v.clone(), Term::Var(fresh.clone()));
                    (fresh, f.substitute_inner(&inner_map, counter))
                } else {
                    (v.clone(), f.substitute_inner(&inner_map, counter))
                };
                match self {
                    Formula::Exists(..) => Formula::exists(v, f),
                    _ => Formula::forall(v, f),
                }
            }
        }
    }

    /// Canonical concrete syntax; `parse_formula` inverts this exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Formula::Rel(name, args) => {
                out.push_str(name);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&a.to_string());
                }
                out.push(')');
            }
            Formula::Eq(a, b) => {
                out.push_str(&a.to_string());
                out.push('=');
                out.push_str(&b.to_string());
            }
            Formula::Not(f) => {
                out.push('~');
                f.render_into(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                out.push('(');
                a.render_into(out);
                out.push_str(match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " -> ",
                });
                b.render_into(out);
                out.push(')');
            }
            Formula::Exists(v, f) => {
                out.push('E');
                out.push_str(v);
                out.push('.');
                f.render_into(out);
            }
            Formula::Forall(v, f) => {
                out.push('A');
                out.push_str(v);
                out.push('.');
                f.render_into(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
