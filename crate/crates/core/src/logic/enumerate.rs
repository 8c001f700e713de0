//! Bounded enumeration of definable relations.
//!
//! Formulas are enumerated level by level in the connective/quantifier count,
//! deduplicated semantically: two candidates with the same truth table over
//! all evaluation contexts are interchangeable in every larger formula, so
//! only the first is kept. Free variables of result relations are `x1..xr`;
//! quantifiers draw from a bound pool `y1..yd`.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, LogicError, Term};
use crate::model::FinStructure;

/// A relation on the domain: a set of tuples of a fixed arity.
pub type Relation = BTreeSet<Vec<usize>>;

#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    /// Cap on the number of candidate formulas constructed.
    pub max_formulas: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_formulas: 2_000_000,
        }
    }
}

/// The relations of the given arity definable on `m` by formulas of depth at
/// most `depth`, with the listed elements available as parameters.
pub fn definable_relations(
    m: &FinStructure,
    arity: usize,
    depth: usize,
    params: &[usize],
    limits: EnumLimits,
) -> Result<BTreeSet<Relation>, LogicError> {
    Ok(
        definable_relations_witnessed(m, arity, depth, params, limits)?
            .into_keys()
            .collect(),
    )
}

/// Like [`definable_relations`], but keeps one witnessing formula per
/// relation. Parameters appear in witnesses as constants `p1..pr`.
pub fn definable_relations_witnessed(
    m: &FinStructure,
    arity: usize,
    depth: usize,
    params: &[usize],
    limits: EnumLimits,
) -> Result<BTreeMap<Relation, Formula>, LogicError> {
    assert!(arity >= 1, "arity must be >= 1");
    let param_names: Vec<String> = (1..=params.len()).map(|i| format!("p{i}")).collect();
    let m = m.with_extra_constants(param_names.iter().cloned().zip(params.iter().copied()))?;

    let free: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
    let bound: Vec<String> = (1..=depth).map(|i| format!("y{i}")).collect();
    let vars: Vec<String> = free.iter().chain(bound.iter()).cloned().collect();
    let contexts = m
        .size()
        .checked_pow(vars.len() as u32)
        .ok_or(LogicError::ResourceCap(limits.max_formulas))?;

    let mut en = Enumerator {
        m: &m,
        vars: &vars,
        bound: &bound,
        n: m.size(),
        contexts,
        limits,
        enumerated: 0,
        seen: BTreeSet::new(),
        levels: Vec::new(),
    };
    en.atoms()?;
    for d in 1..=depth {
        en.level(d)?;
    }

    let mut out: BTreeMap<Relation, Formula> = BTreeMap::new();
    for level in &en.levels {
        for (table, f) in level {
            if f.free_vars().iter().all(|v| free.contains(v)) {
                let rel = restrict_to_free(table, arity, &vars, m.size());
                out.entry(rel).or_insert_with(|| f.clone());
            }
        }
    }
    Ok(out)
}

struct Enumerator<'a> {
    m: &'a FinStructure,
    vars: &'a [String],
    bound: &'a [String],
    n: usize,
    contexts: usize,
    limits: EnumLimits,
    enumerated: usize,
    seen: BTreeSet<Vec<bool>>,
    levels: Vec<Vec<(Vec<bool>, Formula)>>,
}

impl Enumerator<'_> {
    fn admit(
        &mut self,
        table: Vec<bool>,
        f: Formula,
        level: &mut Vec<(Vec<bool>, Formula)>,
    ) -> Result<(), LogicError> {
        self.enumerated += 1;
        if self.enumerated > self.limits.max_formulas {
            return Err(LogicError::ResourceCap(self.limits.max_formulas));
        }
        if self.seen.insert(table.clone()) {
            level.push((table, f));
        }
        Ok(())
    }

    fn atoms(&mut self) -> Result<(), LogicError> {
        let terms: Vec<Term> = self
            .vars
            .iter()
            .map(|v| Term::Var(v.clone()))
            .chain(
                self.m
                    .signature()
                    .constants()
                    .map(|c| Term::Const(c.to_string())),
            )
            .collect();
        let rels: Vec<(String, usize)> = self
            .m
            .signature()
            .relations()
            .map(|(n, a)| (n.to_string(), a))
            .collect();
        let mut level = Vec::new();
        for (rel, rel_arity) in rels {
            let mut idx = vec![0usize; rel_arity];
            loop {
                let args: Vec<Term> = idx.iter().map(|&i| terms[i].clone()).collect();
                let f = Formula::Rel(rel.clone(), args);
                let table = self.truth_table(&f)?;
                self.admit(table, f, &mut level)?;
                if !bump(&mut idx, terms.len()) {
                    break;
                }
            }
        }
        for a in &terms {
            for b in &terms {
                let f = Formula::Eq(a.clone(), b.clone());
                let table = self.truth_table(&f)?;
                self.admit(table, f, &mut level)?;
            }
        }
        self.levels.push(level);
        Ok(())
    }

    fn level(&mut self, d: usize) -> Result<(), LogicError> {
        let mut level = Vec::new();
        let prev: Vec<(Vec<bool>, Formula)> = self.levels[d - 1].clone();
        for (table, f) in &prev {
            let neg: Vec<bool> = table.iter().map(|b| !b).collect();
            self.admit(neg, Formula::not(f.clone()), &mut level)?;
            let fv = f.free_vars();
            for (yi, y) in self.bound.iter().enumerate() {
                if !fv.contains(y) {
                    continue;
                }
                let var_idx = self.vars.len() - self.bound.len() + yi;
                let ex = self.project(table, var_idx, true);
                let all = self.project(table, var_idx, false);
                self.admit(ex, Formula::exists(y.clone(), f.clone()), &mut level)?;
                self.admit(all, Formula::forall(y.clone(), f.clone()), &mut level)?;
            }
        }
        for da in 0..d {
            let db = d - 1 - da;
            let pa = self.levels[da].clone();
            let pb = self.levels[db].clone();
            for (ta, fa) in &pa {
                for (tb, fb) in &pb {
                    let and: Vec<bool> = ta.iter().zip(tb).map(|(a, b)| *a && *b).collect();
                    self.admit(and, Formula::and(fa.clone(), fb.clone()), &mut level)?;
                    let or: Vec<bool> = ta.iter().zip(tb).map(|(a, b)| *a || *b).collect();
                    self.admit(or, Formula::or(fa.clone(), fb.clone()), &mut level)?;
                    let imp: Vec<bool> = ta.iter().zip(tb).map(|(a, b)| !*a || *b).collect();
                    self.admit(imp, Formula::implies(fa.clone(), fb.clone()), &mut level)?;
                }
            }
        }
        self.levels.push(level);
        Ok(())
    }

    fn truth_table(&self, f: &Formula) -> Result<Vec<bool>, LogicError> {
        let mut table = Vec::with_capacity(self.contexts);
        let mut tuple = vec![0usize; self.vars.len()];
        let mut asg = super::Assignment::new();
        for _ in 0..self.contexts {
            asg.clear();
            for (v, &e) in self.vars.iter().zip(tuple.iter()) {
                asg.insert(v.clone(), e);
            }
            table.push(super::evaluate(self.m, f, &asg)?);
            bump(&mut tuple, self.n);
        }
        Ok(table)
    }

    /// Truth table of `∃v.f` or `∀v.f` computed directly from `f`'s table.
    fn project(&self, table: &[bool], var_idx: usize, exists: bool) -> Vec<bool> {
        // context index = odometer with the last variable fastest
        let stride = self.n.pow((self.vars.len() - 1 - var_idx) as u32);
        let mut out = vec![!exists; table.len()];
        for (ctx, &truth) in table.iter().enumerate() {
            if truth != exists {
                continue;
            }
            let base = ctx - (ctx / stride % self.n) * stride;
            for e in 0..self.n {
                out[base + e * stride] = exists;
            }
        }
        out
    }
}

fn bump(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

fn restrict_to_free(table: &[bool], arity: usize, vars: &[String], n: usize) -> Relation {
    // the formula does not depend on bound-pool vars, so fix them to 0
    let mut rel = Relation::new();
    if n == 0 {
        return rel;
    }
    let tail = vars.len() - arity;
    let mut tuple = vec![0usize; arity];
    loop {
        let mut ctx = 0usize;
        for &e in &tuple {
            ctx = ctx * n + e;
        }
        ctx *= n.pow(tail as u32);
        if table[ctx] {
            rel.insert(tuple.clone());
        }
        if !bump(&mut tuple, n) {
            break;
        }
    }
    rel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Signature;

    fn structure(sig: Signature, n: usize, edges: Vec<Vec<usize>>) -> FinStructure {
        FinStructure::new(sig, n, [("E".to_string(), edges)], []).unwrap()
    }

    #[test]
    fn empty_signature_depth_zero_gives_full_domain_only() {
        let m = FinStructure::new(Signature::empty(), 2, [], []).unwrap();
        let rels = definable_relations(&m, 1, 0, &[], EnumLimits::default()).unwrap();
        let full: Relation = [vec![0], vec![1]].into_iter().collect();
        assert_eq!(rels, BTreeSet::from([full]));
    }

    #[test]
    fn empty_signature_depth_one_adds_empty_set() {
        let m = FinStructure::new(Signature::empty(), 2, [], []).unwrap();
        let rels = definable_relations(&m, 1, 1, &[], EnumLimits::default()).unwrap();
        let full: Relation = [vec![0], vec![1]].into_iter().collect();
        assert_eq!(rels, BTreeSet::from([Relation::new(), full]));
    }

    #[test]
    fn v2_membership_depth_zero_contains_empty_and_domain() {
        // ⟨V₂,∈⟩: 0 = ∅, 1 = {∅}, single edge 0 ∈ 1
        let m = structure(Signature::membership(), 2, vec![vec![0, 1]]);
        let rels = definable_relations(&m, 1, 0, &[], EnumLimits::default()).unwrap();
        let full: Relation = [vec![0], vec![1]].into_iter().collect();
        assert!(rels.contains(&full), "x=x defines the domain");
        assert!(
            rels.contains(&Relation::new()),
            "E(x,x) defines the empty set"
        );
    }

    #[test]
    fn linear_order_least_element_definable_at_depth_two() {
        // strict order 0 < 1 < 2 under symbol E
        let m = structure(
            Signature::membership(),
            3,
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        );
        let rels = definable_relations(&m, 1, 2, &[], EnumLimits::default()).unwrap();
        let least: Relation = [vec![0]].into_iter().collect();
        assert!(rels.contains(&least));
    }

    #[test]
    fn monotone_in_depth() {
        let m = structure(Signature::membership(), 2, vec![vec![0, 1]]);
        let mut prev = BTreeSet::new();
        for d in 0..=3 {
            let cur = definable_relations(&m, 1, d, &[], EnumLimits::default()).unwrap();
            assert!(prev.is_subset(&cur), "depth {d} lost relations");
            prev = cur;
        }
    }

    #[test]
    fn parameters_make_singletons_definable() {
        let m = FinStructure::new(Signature::empty(), 3, [], []).unwrap();
        let rels = definable_relations(&m, 1, 0, &[1], EnumLimits::default()).unwrap();
        let singleton: Relation = [vec![1]].into_iter().collect();
        assert!(rels.contains(&singleton), "x = p1 defines {{1}}");
    }

    #[test]
    fn witnesses_define_their_relations() {
        let m = structure(Signature::membership(), 3, vec![vec![0, 1], vec![1, 2]]);
        let wit = definable_relations_witnessed(&m, 1, 2, &[2], EnumLimits::default()).unwrap();
        let m_aug = m.with_extra_constants([("p1".to_string(), 2)]).unwrap();
        for (rel, f) in &wit {
            let tuples: Relation = crate::logic::satisfying_tuples(&m_aug, f, &["x1".to_string()])
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(&tuples, rel, "witness {f} disagrees with its relation");
        }
    }

    #[test]
    fn resource_cap_is_enforced() {
        let m = structure(Signature::membership(), 3, vec![vec![0, 1]]);
        let err = definable_relations(&m, 2, 3, &[], EnumLimits { max_formulas: 50 }).unwrap_err();
        assert_eq!(err, LogicError::ResourceCap(50));
    }
}
