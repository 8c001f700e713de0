//! Eliminating the interpreted equivalence over a well-founded extensional
//! membership structure: each equivalence class is replaced by its canonical
//! minimal-rank representative, so the reduced interpretation's equality is
//! extensionally the identity.

use std::collections::BTreeMap;

use crate::logic::{Formula, Term};
use crate::model::{is_extensional, is_wellfounded, BinRel, EqRelation, FinStructure};

use super::{apply, slot_name, Interpretation, InterpError};

/// Rebuilds `interp` over `m` with a trivial equivalence.
///
/// The domain of the result consists of one tuple per class of the original
/// interpreted equality: among the class's tuples of minimal possible ∈-rank
/// (the maximum of the component ranks), the lexicographically least. The
/// new formulas are explicit finite descriptions using the chosen elements
/// as parameters, so `apply(scott_reduce(interp, m), m)` is isomorphic to
/// `apply(interp, m)` with identity equality.
///
/// `m` must interpret `mem_sym` as a well-founded extensional relation, so
/// that ranks exist.
pub fn scott_reduce(
    interp: &Interpretation,
    m: &FinStructure,
    mem_sym: &str,
) -> Result<Interpretation, InterpError> {
    if m.signature() != interp.target() {
        return Err(InterpError::SignatureMismatch(
            "structure signature differs from the interpretation target".to_string(),
        ));
    }
    let arity = m.signature().relation_arity(mem_sym);
    if arity != Some(2) {
        return Err(InterpError::BadInterpretation(format!(
            "`{mem_sym}` is not a binary relation of the target"
        )));
    }
    let edges: Vec<(usize, usize)> = m
        .relation(mem_sym)
        .expect("checked")
        .iter()
        .map(|t| (t[0], t[1]))
        .collect();
    let rel = BinRel::new(m.size(), edges)?;
    if !is_wellfounded(&rel) {
        return Err(InterpError::NotWellFoundedModel);
    }
    if !is_extensional(&rel, &EqRelation::identity(m.size())) {
        return Err(InterpError::NotExtensionalModel);
    }
    let rank = element_ranks(&rel);

    let applied = apply(interp, m)?;
    let k = interp.dim();

    // canonical representative per class: minimal tuple rank, then lex order
    let mut members: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); applied.class_count()];
    for (tuple, &class) in &applied.class_of {
        members[class].push(tuple);
    }
    let tuple_rank = |t: &[usize]| -> usize { t.iter().map(|&e| rank[e]).max().unwrap_or(0) };
    let reps: Vec<Vec<usize>> = members
        .iter()
        .map(|tuples| {
            tuples
                .iter()
                .copied()
                .min_by_key(|t| (tuple_rank(t), (*t).clone()))
                .expect("classes are nonempty")
                .clone()
        })
        .collect();

    // parameters: the elements mentioned by the representatives
    let mut elements: Vec<usize> = reps.iter().flatten().copied().collect();
    elements.sort_unstable();
    elements.dedup();
    let param_of: BTreeMap<usize, String> = elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, format!("p{}", i + 1)))
        .collect();

    let tuple_eq = |block: usize, tuple: &[usize]| -> Formula {
        Formula::conj(tuple.iter().enumerate().map(|(i, e)| {
            Formula::Eq(
                Term::Var(slot_name((block - 1) * k + i + 1)),
                Term::Const(param_of[e].clone()),
            )
        }))
        .expect("k >= 1")
    };
    let falsum = || Formula::not(Formula::eq_vars("x1", "x1"));

    let domain = Formula::disj(reps.iter().map(|r| tuple_eq(1, r))).expect("nonempty domain");
    let equality = Formula::disj(
        reps.iter()
            .map(|r| Formula::and(tuple_eq(1, r), tuple_eq(2, r))),
    )
    .expect("nonempty domain");

    let mut relations = BTreeMap::new();
    for (name, rel_arity) in interp.source().relations() {
        let table = applied.structure.relation(name).expect("table");
        let formula = Formula::disj(table.iter().map(|class_tuple| {
            Formula::conj(
                class_tuple
                    .iter()
                    .enumerate()
                    .map(|(j, &class)| tuple_eq(j + 1, &reps[class])),
            )
            .expect("arity >= 1")
        }))
        .unwrap_or_else(falsum);
        let _ = rel_arity;
        relations.insert(name.to_string(), formula);
    }
    let mut constants = BTreeMap::new();
    for c in interp.source().constants() {
        let class = applied.structure.constant(c).expect("constant");
        constants.insert(c.to_string(), tuple_eq(1, &reps[class]));
    }

    Interpretation::new(
        interp.source().clone(),
        interp.target().clone(),
        k,
        domain,
        equality,
        relations,
        constants,
        elements,
    )
}

/// ∈-rank of every element of a well-founded relation.
fn element_ranks(rel: &BinRel) -> Vec<usize> {
    let mut rank = vec![usize::MAX; rel.size];
    fn compute(i: usize, rel: &BinRel, rank: &mut Vec<usize>) -> usize {
        if rank[i] != usize::MAX {
            return rank[i];
        }
        let r = rel
            .preds(i)
            .into_iter()
            .map(|j| compute(j, rel, rank) + 1)
            .max()
            .unwrap_or(0);
        rank[i] = r;
        r
    }
    for i in 0..rel.size {
        compute(i, rel, &mut rank);
    }
    rank
}
