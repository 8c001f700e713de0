//! Interpretations between finite structures as first-class data: formula
//! translation, interpreted-model construction, composition, and the
//! mutual / bi-interpretation / synonymy checks.
//!
//! An interpretation of a source language inside a target language consists
//! of a dimension `k`, a domain formula over `k` target variables carving out
//! the tuples that stand for source elements, an interpreted-equality formula
//! over `2k` variables, and one formula per source symbol. Formula slots are
//! flat: the formula for an arity-`m` symbol uses variables `x1..x{m·k}`,
//! argument `j` occupying the block `x{(j-1)k+1}..x{jk}`. Parameters are
//! target elements, available in the formulas as constants `p1..pr`.

mod apply;
mod checks;
mod scott;
mod translate;

pub use apply::{apply, Applied};
pub use checks::{
    check_bi, check_mutual, check_synonymy, check_theory_interpretation, theory_disjunction,
    BiReport, IsoSideReport, MutualReport, SynonymyReport, TheoryReport,
};
pub use scott::scott_reduce;
pub use translate::translate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{parse_formula, Formula, LogicError, Signature};
use crate::model::ModelError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid interpretation: {0}")]
    BadInterpretation(String),
    #[error("symbol `{0}` has no translation formula")]
    MissingTranslation(String),
    #[error("the domain formula defines an empty set of tuples")]
    EmptyDomain,
    #[error("interpreted equality is not an equivalence on the domain: {0}")]
    NotEquivalenceOnDomain(String),
    #[error("interpreted equality is not a congruence: {0}")]
    NotCongruence(String),
    #[error("constant formula for `{0}` does not define a single equivalence class")]
    ConstantNotClass(String),
    #[error("cannot compose through an interpretation with parameters")]
    ComposeWithParams,
    #[error("parameter {index} is outside the target domain 0..{size}")]
    BadParam { index: usize, size: usize },
    #[error("the structure is not a well-founded membership structure")]
    NotWellFoundedModel,
    #[error("the structure is not extensional")]
    NotExtensionalModel,
    #[error("theory axiom `{0}` has free variables")]
    OpenAxiom(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub(crate) fn slot_name(i: usize) -> String {
    format!("x{i}")
}

pub(crate) fn slot_names(count: usize) -> Vec<String> {
    (1..=count).map(slot_name).collect()
}

/// Substitution mapping slot block `block` (1-based) of width `k` to the
/// given variable names.
pub(crate) fn block_subst(k: usize, block: usize, names: &[String]) -> BTreeMap<String, crate::logic::Term> {
    assert_eq!(names.len(), k);
    (0..k)
        .map(|i| {
            (
                slot_name((block - 1) * k + i + 1),
                crate::logic::Term::Var(names[i].clone()),
            )
        })
        .collect()
}

/// An interpretation of `source`-structures inside `target`-structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    source: Signature,
    target: Signature,
    dim: usize,
    domain: Formula,
    equality: Formula,
    relations: BTreeMap<String, Formula>,
    constants: BTreeMap<String, Formula>,
    params: Vec<usize>,
}

impl Interpretation {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: Signature,
        target: Signature,
        dim: usize,
        domain: Formula,
        equality: Formula,
        relations: BTreeMap<String, Formula>,
        constants: BTreeMap<String, Formula>,
        params: Vec<usize>,
    ) -> Result<Self, InterpError> {
        if dim == 0 {
            return Err(InterpError::BadInterpretation(
                "dimension must be at least 1".to_string(),
            ));
        }
        let param_sig = target
            .with_constants((1..=params.len()).map(|i| format!("p{i}")))
            .map_err(|e| {
                InterpError::BadInterpretation(format!("parameter constants clash: {e}"))
            })?;
        for c in target.constants() {
            if is_reserved_name(c) {
                return Err(InterpError::BadInterpretation(format!(
                    "target constant `{c}` collides with slot/parameter naming"
                )));
            }
        }
        let check = |f: &Formula, slots: usize, what: &str| -> Result<(), InterpError> {
            f.validate(&param_sig)?;
            let allowed = slot_names(slots);
            for v in f.free_vars() {
                if !allowed.contains(&v) {
                    return Err(InterpError::BadInterpretation(format!(
                        "{what} formula has unexpected free variable `{v}` (allowed: x1..x{slots})"
                    )));
                }
            }
            Ok(())
        };
        check(&domain, dim, "domain")?;
        check(&equality, 2 * dim, "equality")?;
        for (name, arity) in source.relations() {
            let f = relations
                .get(name)
                .ok_or_else(|| InterpError::MissingTranslation(name.to_string()))?;
            check(f, arity * dim, &format!("relation `{name}`"))?;
        }
        for (name, f) in &relations {
            if source.relation_arity(name).is_none() {
                return Err(InterpError::BadInterpretation(format!(
                    "relation formula for `{name}` has no source symbol"
                )));
            }
            let _ = f;
        }
        for (name, f) in &constants {
            if !source.has_constant(name) {
                return Err(InterpError::BadInterpretation(format!(
                    "constant formula for `{name}` has no source symbol"
                )));
            }
            check(f, dim, &format!("constant `{name}`"))?;
        }
        Ok(Interpretation {
            source,
            target,
            dim,
            domain,
            equality,
            relations,
            constants,
            params,
        })
    }

    /// The identity interpretation of a signature in itself.
    pub fn identity(sig: &Signature) -> Interpretation {
        let relations = sig
            .relations()
            .map(|(name, arity)| {
                let args = (1..=arity)
                    .map(|i| crate::logic::Term::Var(slot_name(i)))
                    .collect();
                (name.to_string(), Formula::Rel(name.to_string(), args))
            })
            .collect();
        let constants = sig
            .constants()
            .map(|c| {
                (
                    c.to_string(),
                    Formula::Eq(
                        crate::logic::Term::Var(slot_name(1)),
                        crate::logic::Term::Const(c.to_string()),
                    ),
                )
            })
            .collect();
        Interpretation::new(
            sig.clone(),
            sig.clone(),
            1,
            Formula::eq_vars("x1", "x1"),
            Formula::eq_vars("x1", "x2"),
            relations,
            constants,
            Vec::new(),
        )
        .expect("identity interpretation is valid")
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain_formula(&self) -> &Formula {
        &self.domain
    }

    pub fn equality_formula(&self) -> &Formula {
        &self.equality
    }

    pub fn relation_formula(&self, name: &str) -> Option<&Formula> {
        self.relations.get(name)
    }

    pub fn constant_formula(&self, name: &str) -> Option<&Formula> {
        self.constants.get(name)
    }

    pub fn params(&self) -> &[usize] {
        &self.params
    }

    /// The target signature extended with the parameter constants `p1..pr`.
    pub fn target_with_params(&self) -> Signature {
        self.target
            .with_constants((1..=self.params.len()).map(|i| format!("p{i}")))
            .expect("validated at construction")
    }

    /// Composition: the formulas of `inner` are translated through `outer`,
    /// yielding an interpretation of `inner`'s source inside `outer`'s
    /// target with dimension `outer.dim * inner.dim`.
    ///
    /// Applying the composite to a structure is the same as applying `outer`
    /// first and `inner` to the result.
    pub fn compose(outer: &Interpretation, inner: &Interpretation) -> Result<Interpretation, InterpError> {
        if inner.target != outer.source {
            return Err(InterpError::SignatureMismatch(
                "inner target differs from outer source".to_string(),
            ));
        }
        if !inner.params.is_empty() {
            return Err(InterpError::ComposeWithParams);
        }
        let k = outer.dim * inner.dim;
        let comp = |f: &Formula, arity: usize| -> Result<Formula, InterpError> {
            let translated = translate(f, outer)?;
            // flatten x{s}__{i} into composite slots
            let mut map = BTreeMap::new();
            for s in 1..=arity * inner.dim {
                for i in 1..=outer.dim {
                    map.insert(
                        format!("x{s}__{i}"),
                        crate::logic::Term::Var(slot_name((s - 1) * outer.dim + i)),
                    );
                }
            }
            Ok(translated.substitute(&map))
        };
        // domain: inner's domain translated, each inner slot block also
        // constrained to outer's domain
        let mut domain_parts = Vec::new();
        for s in 1..=inner.dim {
            let names: Vec<String> = (1..=outer.dim)
                .map(|i| slot_name((s - 1) * outer.dim + i))
                .collect();
            domain_parts.push(outer.domain.substitute(&block_subst(outer.dim, 1, &names)));
        }
        domain_parts.push(comp(&inner.domain, 1)?);
        let domain = Formula::conj(domain_parts).expect("nonempty");

        let equality = comp(&inner.equality, 2)?;
        let relations = inner
            .relations
            .iter()
            .map(|(name, f)| {
                let arity = inner.source.relation_arity(name).expect("validated");
                Ok((name.clone(), comp(f, arity)?))
            })
            .collect::<Result<BTreeMap<_, _>, InterpError>>()?;
        let constants = inner
            .constants
            .iter()
            .map(|(name, f)| Ok((name.clone(), comp(f, 1)?)))
            .collect::<Result<BTreeMap<_, _>, InterpError>>()?;
        Interpretation::new(
            inner.source.clone(),
            outer.target.clone(),
            k,
            domain,
            equality,
            relations,
            constants,
            outer.params.clone(),
        )
    }

    pub fn from_json(text: &str, default_target: Option<&Signature>) -> Result<Self, InterpError> {
        let doc: InterpretationDoc = serde_json::from_str(text)
            .map_err(|e| InterpError::BadInterpretation(format!("bad JSON: {e}")))?;
        Interpretation::from_doc(&doc, default_target)
    }

    pub fn from_doc(
        doc: &InterpretationDoc,
        default_target: Option<&Signature>,
    ) -> Result<Self, InterpError> {
        let target = match (&doc.target, default_target) {
            (Some(sig_doc), _) => sig_doc.to_signature()?,
            (None, Some(sig)) => sig.clone(),
            (None, None) => {
                return Err(InterpError::BadInterpretation(
                    "no target signature available".to_string(),
                ))
            }
        };
        let source = match &doc.source {
            Some(sig_doc) => sig_doc.to_signature()?,
            None => target.clone(),
        };
        let parse_sig = target
            .with_constants((1..=doc.params.len()).map(|i| format!("p{i}")))
            .map_err(InterpError::Logic)?;
        let parse = |text: &str| -> Result<Formula, InterpError> {
            Ok(parse_formula(text, &parse_sig)?)
        };
        let relations = doc
            .relations
            .iter()
            .map(|(name, text)| Ok((name.clone(), parse(text)?)))
            .collect::<Result<BTreeMap<_, _>, InterpError>>()?;
        let constants = doc
            .constants
            .iter()
            .map(|(name, text)| Ok((name.clone(), parse(text)?)))
            .collect::<Result<BTreeMap<_, _>, InterpError>>()?;
        Interpretation::new(
            source,
            target,
            doc.dimension,
            parse(&doc.domain)?,
            parse(&doc.equality)?,
            relations,
            constants,
            doc.params.clone(),
        )
    }

    pub fn to_doc(&self) -> InterpretationDoc {
        InterpretationDoc {
            dimension: self.dim,
            domain: self.domain.render(),
            equality: self.equality.render(),
            relations: self
                .relations
                .iter()
                .map(|(n, f)| (n.clone(), f.render()))
                .collect(),
            constants: self
                .constants
                .iter()
                .map(|(n, f)| (n.clone(), f.render()))
                .collect(),
            params: self.params.clone(),
            source: Some(SignatureDoc::from_signature(&self.source)),
            target: Some(SignatureDoc::from_signature(&self.target)),
        }
    }
}

fn is_reserved_name(name: &str) -> bool {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    (name.starts_with('x') && digits(&name[1..])) || (name.starts_with('p') && digits(&name[1..]))
}

/// JSON form of an interpretation. `source`/`target` signatures are optional:
/// the target usually comes from the structure a command applies it to, and
/// the source defaults to the target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretationDoc {
    pub dimension: usize,
    pub domain: String,
    pub equality: String,
    #[serde(default)]
    pub relations: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SignatureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SignatureDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureDoc {
    #[serde(default)]
    pub relations: BTreeMap<String, usize>,
    #[serde(default)]
    pub constants: Vec<String>,
}

impl SignatureDoc {
    pub fn to_signature(&self) -> Result<Signature, InterpError> {
        Ok(Signature::new(
            self.relations.iter().map(|(n, &a)| (n.clone(), a)),
            self.constants.iter().cloned(),
        )?)
    }

    pub fn from_signature(sig: &Signature) -> SignatureDoc {
        SignatureDoc {
            relations: sig.relations().map(|(n, a)| (n.to_string(), a)).collect(),
            constants: sig.constants().map(|c| c.to_string()).collect(),
        }
    }
}

/// A pair of interpretations with candidate isomorphism formulas for both
/// composite self-embeddings. `i` interprets the first language in the
/// second, `j` the second in the first. The iso formulas relate a point
/// (slot `x1`) to a composite tuple (slots `x2..`).
#[derive(Debug, Clone)]
pub struct BiInterpretation {
    pub i: Interpretation,
    pub j: Interpretation,
    pub iso_source: Formula,
    pub iso_target: Formula,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiInterpretationDoc {
    pub i: InterpretationDoc,
    pub j: InterpretationDoc,
    pub iso_source: String,
    pub iso_target: String,
}

impl BiInterpretation {
    pub fn from_json(
        text: &str,
        source_sig: &Signature,
        target_sig: &Signature,
    ) -> Result<Self, InterpError> {
        let doc: BiInterpretationDoc = serde_json::from_str(text)
            .map_err(|e| InterpError::BadInterpretation(format!("bad JSON: {e}")))?;
        let i = Interpretation::from_doc(&doc.i, Some(target_sig))?;
        let j = Interpretation::from_doc(&doc.j, Some(source_sig))?;
        let iso_source = parse_formula(&doc.iso_source, source_sig)?;
        let iso_target = parse_formula(&doc.iso_target, target_sig)?;
        Ok(BiInterpretation {
            i,
            j,
            iso_source,
            iso_target,
        })
    }
}

/// A named finite list of sentences over a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub sig: Signature,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new(name: String, sig: Signature, axioms: Vec<Formula>) -> Result<Self, InterpError> {
        for ax in &axioms {
            ax.validate(&sig)?;
            if !ax.is_sentence() {
                return Err(InterpError::OpenAxiom(ax.render()));
            }
        }
        Ok(Theory { name, sig, axioms })
    }

    pub fn from_json(text: &str) -> Result<Self, InterpError> {
        #[derive(Deserialize)]
        struct TheoryDoc {
            #[serde(default)]
            name: String,
            #[serde(flatten)]
            sig: SignatureDoc,
            axioms: Vec<String>,
        }
        let doc: TheoryDoc = serde_json::from_str(text)
            .map_err(|e| InterpError::BadInterpretation(format!("bad JSON: {e}")))?;
        let sig = doc.sig.to_signature()?;
        let axioms = doc
            .axioms
            .iter()
            .map(|t| Ok(parse_formula(t, &sig)?))
            .collect::<Result<Vec<_>, InterpError>>()?;
        Theory::new(doc.name, sig, axioms)
    }
}
