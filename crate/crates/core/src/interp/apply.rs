//! Constructing the interpreted model inside a concrete structure: evaluate
//! the domain formula, validate that interpreted equality is a congruence
//! equivalence on it, and form the quotient.

use std::collections::BTreeMap;

use crate::logic::{evaluate, Assignment, Formula};
use crate::model::FinStructure;

use super::{slot_names, Interpretation, InterpError};

/// The result of applying an interpretation: the quotient structure over the
/// source signature, with classes indexed by lexicographically least
/// representative tuple.
#[derive(Debug, Clone)]
pub struct Applied {
    pub structure: FinStructure,
    /// class index → its least representative tuple
    pub reps: Vec<Vec<usize>>,
    /// all domain tuples, ascending
    pub domain: Vec<Vec<usize>>,
    /// domain tuple → class index
    pub class_of: BTreeMap<Vec<usize>, usize>,
}

impl Applied {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }
}

fn eval_at(
    m: &FinStructure,
    f: &Formula,
    vars: &[String],
    tuple: &[usize],
) -> Result<bool, InterpError> {
    let asg: Assignment = vars
        .iter()
        .cloned()
        .zip(tuple.iter().copied())
        .collect();
    Ok(evaluate(m, f, &asg)?)
}

pub fn apply(interp: &Interpretation, m: &FinStructure) -> Result<Applied, InterpError> {
    if m.signature() != interp.target() {
        return Err(InterpError::SignatureMismatch(
            "structure signature differs from the interpretation target".to_string(),
        ));
    }
    for (idx, &p) in interp.params().iter().enumerate() {
        if p >= m.size() {
            let _ = idx;
            return Err(InterpError::BadParam {
                index: p,
                size: m.size(),
            });
        }
    }
    let m = m
        .with_extra_constants(
            interp
                .params()
                .iter()
                .enumerate()
                .map(|(i, &e)| (format!("p{}", i + 1), e)),
        )
        .map_err(InterpError::Logic)?;
    let k = interp.dim();

    // the interpreted domain: all k-tuples satisfying U, in lex order
    let u_vars = slot_names(k);
    let domain: Vec<Vec<usize>> =
        crate::logic::satisfying_tuples(&m, interp.domain_formula(), &u_vars)?;
    if domain.is_empty() {
        return Err(InterpError::EmptyDomain);
    }

    // interpreted equality, restricted to the domain
    let eq_vars = slot_names(2 * k);
    let mut related = vec![vec![false; domain.len()]; domain.len()];
    for (i, a) in domain.iter().enumerate() {
        for (j, b) in domain.iter().enumerate() {
            let mut tuple = a.clone();
            tuple.extend_from_slice(b);
            related[i][j] = eval_at(&m, interp.equality_formula(), &eq_vars, &tuple)?;
        }
    }
    for (i, row) in related.iter().enumerate() {
        if !row[i] {
            return Err(InterpError::NotEquivalenceOnDomain(format!(
                "not reflexive at {:?}",
                domain[i]
            )));
        }
        for (j, &r) in row.iter().enumerate() {
            if r && !related[j][i] {
                return Err(InterpError::NotEquivalenceOnDomain(format!(
                    "not symmetric at {:?}, {:?}",
                    domain[i], domain[j]
                )));
            }
            if r {
                for (l, &r2) in related[j].iter().enumerate() {
                    if r2 && !related[i][l] {
                        return Err(InterpError::NotEquivalenceOnDomain(format!(
                            "not transitive at {:?}, {:?}, {:?}",
                            domain[i], domain[j], domain[l]
                        )));
                    }
                }
            }
        }
    }

    // classes in order of least representative; domain is lex-sorted already
    let mut class_of_idx = vec![usize::MAX; domain.len()];
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for i in 0..domain.len() {
        if class_of_idx[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(domain[i].clone());
        for (j, row) in related[i].iter().enumerate() {
            if *row {
                class_of_idx[j] = c;
            }
        }
    }
    let class_sizes: Vec<usize> = (0..reps.len())
        .map(|c| class_of_idx.iter().filter(|&&x| x == c).count())
        .collect();

    // relation tables: enumerate domain-tuple combinations, check congruence
    // by counting members of each class product
    let mut tables: Vec<(String, Vec<Vec<usize>>)> = Vec::new();
    for (name, arity) in interp.source().relations() {
        let f = interp
            .relation_formula(name)
            .ok_or_else(|| InterpError::MissingTranslation(name.to_string()))?;
        let vars = slot_names(arity * k);
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut combo = vec![0usize; arity];
        loop {
            let mut tuple = Vec::with_capacity(arity * k);
            for &d in &combo {
                tuple.extend_from_slice(&domain[d]);
            }
            if eval_at(&m, f, &vars, &tuple)? {
                let class_tuple: Vec<usize> = combo.iter().map(|&d| class_of_idx[d]).collect();
                *counts.entry(class_tuple).or_insert(0) += 1;
            }
            let mut pos = arity;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                combo[pos] += 1;
                if combo[pos] < domain.len() {
                    break;
                }
                combo[pos] = 0;
            }
            if combo.iter().all(|&d| d == 0) {
                break;
            }
        }
        for (class_tuple, &count) in &counts {
            let expected: usize = class_tuple.iter().map(|&c| class_sizes[c]).product();
            if count != expected {
                return Err(InterpError::NotCongruence(format!(
                    "relation `{name}` holds for {count} of {expected} members of class tuple {class_tuple:?}"
                )));
            }
        }
        tables.push((name.to_string(), counts.into_keys().collect()));
    }

    // constants: each must carve out exactly one full class
    let mut consts: Vec<(String, usize)> = Vec::new();
    for c in interp.source().constants() {
        let f = interp
            .constant_formula(c)
            .ok_or_else(|| InterpError::MissingTranslation(c.to_string()))?;
        let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
        for (d, tuple) in domain.iter().enumerate() {
            if eval_at(&m, f, &u_vars, tuple)? {
                *hits.entry(class_of_idx[d]).or_insert(0) += 1;
            }
        }
        if hits.len() != 1 {
            return Err(InterpError::ConstantNotClass(c.to_string()));
        }
        let (&class, &count) = hits.iter().next().expect("one entry");
        if count != class_sizes[class] {
            return Err(InterpError::ConstantNotClass(c.to_string()));
        }
        consts.push((c.to_string(), class));
    }

    let structure = FinStructure::new(interp.source().clone(), reps.len(), tables, consts)?;
    let class_of: BTreeMap<Vec<usize>, usize> = domain
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), class_of_idx[i]))
        .collect();
    Ok(Applied {
        structure,
        reps,
        domain,
        class_of,
    })
}
