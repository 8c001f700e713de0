//! Finite first-order structures, congruences, quotients, and a brute-force
//! isomorphism oracle used as ground truth throughout the crate.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{LogicError, Signature};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid structure: {0}")]
    BadStructure(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("not a congruence: {0}")]
    NotCongruence(String),
    #[error("structure size {size} exceeds the isomorphism search cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("signatures differ")]
    SignatureMismatch,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A finite structure: domain `0..n`, one table per relation symbol, and an
/// element per constant symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    sig: Signature,
    size: usize,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    constants: BTreeMap<String, usize>,
}

/// Raw JSON document form of a structure:
/// `{"domain": 3, "relations": {"E": [[0,1]]}, "constants": {"c": 0}}`.
///
/// `arities` is only needed for relation symbols whose table is empty.
#[derive(Debug, Serialize, Deserialize)]
pub struct StructureDoc {
    pub domain: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub constants: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arities: BTreeMap<String, usize>,
}

impl FinStructure {
    pub fn new<R, C>(sig: Signature, size: usize, relations: R, constants: C) -> Result<Self, ModelError>
    where
        R: IntoIterator<Item = (String, Vec<Vec<usize>>)>,
        C: IntoIterator<Item = (String, usize)>,
    {
        let mut rel_map: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
        for (name, tuples) in relations {
            let arity = sig.relation_arity(&name).ok_or_else(|| {
                ModelError::BadStructure(format!("relation `{name}` is not in the signature"))
            })?;
            let mut table = BTreeSet::new();
            for t in tuples {
                if t.len() != arity {
                    return Err(ModelError::BadStructure(format!(
                        "tuple {t:?} has wrong arity for `{name}` (expected {arity})"
                    )));
                }
                if t.iter().any(|&e| e >= size) {
                    return Err(ModelError::BadStructure(format!(
                        "tuple {t:?} of `{name}` mentions an element outside 0..{size}"
                    )));
                }
                table.insert(t);
            }
            rel_map.insert(name, table);
        }
        // every signature symbol gets a table, empty if not supplied
        for (name, _) in sig.relations() {
            rel_map.entry(name.to_string()).or_default();
        }
        let mut const_map = BTreeMap::new();
        for (name, e) in constants {
            if !sig.has_constant(&name) {
                return Err(ModelError::BadStructure(format!(
                    "constant `{name}` is not in the signature"
                )));
            }
            if e >= size {
                return Err(ModelError::BadStructure(format!(
                    "constant `{name}` = {e} is outside 0..{size}"
                )));
            }
            const_map.insert(name, e);
        }
        for c in sig.constants() {
            if !const_map.contains_key(c) {
                return Err(ModelError::BadStructure(format!(
                    "constant `{c}` has no value"
                )));
            }
            if size == 0 {
                return Err(ModelError::BadStructure(
                    "constants require a nonempty domain".to_string(),
                ));
            }
        }
        Ok(FinStructure {
            sig,
            size,
            relations: rel_map,
            constants: const_map,
        })
    }

    pub fn from_doc(doc: StructureDoc) -> Result<Self, ModelError> {
        let mut arities = doc.arities.clone();
        for (name, tuples) in &doc.relations {
            if let Some(t) = tuples.first() {
                let inferred = t.len();
                if *arities.entry(name.clone()).or_insert(inferred) != inferred {
                    return Err(ModelError::BadStructure(format!(
                        "declared arity of `{name}` disagrees with its tuples"
                    )));
                }
            } else if !arities.contains_key(name) {
                return Err(ModelError::BadStructure(format!(
                    "relation `{name}` has an empty table; declare its arity under \"arities\""
                )));
            }
        }
        let sig = Signature::new(arities, doc.constants.keys().cloned())?;
        FinStructure::new(sig, doc.domain, doc.relations, doc.constants)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: StructureDoc = serde_json::from_str(text)
            .map_err(|e| ModelError::BadStructure(format!("bad JSON: {e}")))?;
        FinStructure::from_doc(doc)
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            domain: self.size,
            relations: self
                .relations
                .iter()
                .map(|(n, t)| (n.clone(), t.iter().cloned().collect()))
                .collect(),
            constants: self.constants.clone(),
            arities: self
                .sig
                .relations()
                .map(|(n, a)| (n.to_string(), a))
                .collect(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.relations.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, usize)> {
        self.constants.iter().map(|(n, &e)| (n.as_str(), e))
    }

    /// A copy with extra constants adjoined, used for enumeration parameters
    /// and interpretation parameters.
    pub fn with_extra_constants<I>(&self, extra: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = (String, usize)>,
    {
        let extra: Vec<(String, usize)> = extra.into_iter().collect();
        let sig = self.sig.with_constants(extra.iter().map(|(n, _)| n.clone()))?;
        let mut out = self.clone();
        for (name, e) in extra {
            assert!(e < self.size, "parameter element out of range");
            out.constants.insert(name, e);
        }
        out.sig = sig;
        Ok(out)
    }
}

/// A binary relation on `0..size`, the raw material for membership-like
/// relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinRel {
    pub size: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl BinRel {
    pub fn new(size: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ModelError> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= size || b >= size) {
            return Err(ModelError::BadStructure(format!(
                "edge ({a},{b}) is outside 0..{size}"
            )));
        }
        Ok(BinRel { size, edges })
    }

    /// Predecessors of `i`: all `j` with `j E i`.
    pub fn preds(&self, i: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter(|&&(_, b)| b == i)
            .map(|&(a, _)| a)
            .collect()
    }

    /// The structure ⟨0..size, E⟩ over the membership signature.
    pub fn as_structure(&self) -> FinStructure {
        FinStructure::new(
            Signature::membership(),
            self.size,
            [(
                "E".to_string(),
                self.edges.iter().map(|&(a, b)| vec![a, b]).collect(),
            )],
            [],
        )
        .expect("edges validated")
    }
}

/// An equivalence relation given by its full pair table on `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRelation {
    size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl EqRelation {
    /// Validates reflexivity, symmetry and transitivity on `0..size`.
    pub fn new(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= size || b >= size) {
            return Err(ModelError::NotEquivalence(format!(
                "pair ({a},{b}) is outside 0..{size}"
            )));
        }
        for i in 0..size {
            if !pairs.contains(&(i, i)) {
                return Err(ModelError::NotEquivalence(format!("missing ({i},{i})")));
            }
        }
        for &(a, b) in &pairs {
            if !pairs.contains(&(b, a)) {
                return Err(ModelError::NotEquivalence(format!(
                    "({a},{b}) present but ({b},{a}) missing"
                )));
            }
        }
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                if b == c && !pairs.contains(&(a, d)) {
                    return Err(ModelError::NotEquivalence(format!(
                        "({a},{b}) and ({c},{d}) present but ({a},{d}) missing"
                    )));
                }
            }
        }
        Ok(EqRelation { size, pairs })
    }

    pub fn identity(size: usize) -> Self {
        EqRelation {
            size,
            pairs: (0..size).map(|i| (i, i)).collect(),
        }
    }

    /// The equivalence generated by the given pairs (reflexive-symmetric-
    /// transitive closure), for callers that work from a partition sketch.
    pub fn generated(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ModelError> {
        let mut parent: Vec<usize> = (0..size).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for (a, b) in pairs {
            if a >= size || b >= size {
                return Err(ModelError::NotEquivalence(format!(
                    "pair ({a},{b}) is outside 0..{size}"
                )));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut full = BTreeSet::new();
        for a in 0..size {
            for b in 0..size {
                if find(&mut parent, a) == find(&mut parent, b) {
                    full.insert((a, b));
                }
            }
        }
        Ok(EqRelation { size, pairs: full })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a == b)
    }

    /// Equivalence classes sorted by least representative; each class sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for i in 0..self.size {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..self.size).filter(|&j| self.related(i, j)).collect();
            for &j in &class {
                seen[j] = true;
            }
            out.push(class);
        }
        out
    }

    /// Index of the class of each element, classes ordered as in [`classes`].
    ///
    /// [`classes`]: EqRelation::classes
    pub fn class_index(&self) -> Vec<usize> {
        let classes = self.classes();
        let mut idx = vec![0usize; self.size];
        for (ci, class) in classes.iter().enumerate() {
            for &e in class {
                idx[e] = ci;
            }
        }
        idx
    }
}

/// True iff replacing any tuple entry by an equivalent element preserves
/// membership in every relation table, up to the equivalence: the substituted
/// tuple must again lie in the table after adjusting the remaining entries
/// within their classes. Exactly the condition for the induced relations on
/// classes to mirror the original edge profiles.
pub fn check_congruence(m: &FinStructure, eq: &EqRelation) -> Result<bool, ModelError> {
    if eq.size() != m.size() {
        return Err(ModelError::NotEquivalence(
            "equivalence carrier differs from the domain".to_string(),
        ));
    }
    for (name, _) in m.signature().relations() {
        let table = m.relation(name).expect("table exists");
        for t in table {
            for (pos, &e) in t.iter().enumerate() {
                for e2 in 0..m.size() {
                    if !eq.related(e, e2) {
                        continue;
                    }
                    let witness = table.iter().any(|s| {
                        s[pos] == e2
                            && s.iter()
                                .zip(t.iter())
                                .enumerate()
                                .all(|(i, (&si, &ti))| i == pos || eq.related(si, ti))
                    });
                    if !witness {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The quotient structure and the projection map element → class index.
///
/// Classes are indexed by least representative, in ascending order.
pub fn quotient(m: &FinStructure, eq: &EqRelation) -> Result<(FinStructure, Vec<usize>), ModelError> {
    if !check_congruence(m, eq)? {
        return Err(ModelError::NotCongruence(
            "the equivalence does not respect the relation tables".to_string(),
        ));
    }
    let proj = eq.class_index();
    let classes = eq.classes();
    let relations: Vec<(String, Vec<Vec<usize>>)> = m
        .signature()
        .relations()
        .map(|(name, _)| {
            let table: BTreeSet<Vec<usize>> = m
                .relation(name)
                .expect("table exists")
                .iter()
                .map(|t| t.iter().map(|&e| proj[e]).collect())
                .collect();
            (name.to_string(), table.into_iter().collect())
        })
        .collect();
    let constants: Vec<(String, usize)> = m.constants().map(|(n, e)| (n.to_string(), proj[e])).collect();
    let q = FinStructure::new(m.signature().clone(), classes.len(), relations, constants)?;
    Ok((q, proj))
}

/// All bijections `0..|A| → 0..|B|` preserving every relation and constant in
/// both directions; empty iff the structures are not isomorphic.
pub fn find_isomorphisms(
    a: &FinStructure,
    b: &FinStructure,
    cap: usize,
) -> Result<Vec<Vec<usize>>, ModelError> {
    iso_search(a, b, cap, None)
}

/// Like [`find_isomorphisms`] but stops at the first hit, which keeps large
/// highly-symmetric instances cheap.
pub fn first_isomorphism(
    a: &FinStructure,
    b: &FinStructure,
    cap: usize,
) -> Result<Option<Vec<usize>>, ModelError> {
    Ok(iso_search(a, b, cap, Some(1))?.into_iter().next())
}

fn iso_search(
    a: &FinStructure,
    b: &FinStructure,
    cap: usize,
    limit: Option<usize>,
) -> Result<Vec<Vec<usize>>, ModelError> {
    if a.signature() != b.signature() {
        return Err(ModelError::SignatureMismatch);
    }
    if a.size() > cap || b.size() > cap {
        return Err(ModelError::SizeCap {
            size: a.size().max(b.size()),
            cap,
        });
    }
    if a.size() != b.size() {
        return Ok(Vec::new());
    }
    let n = a.size();

    // degree-profile pruning: per element, per relation, occurrence counts by
    // position must agree between matched elements
    let profile = |m: &FinStructure, e: usize| -> Vec<usize> {
        let mut p = Vec::new();
        for (name, arity) in m.signature().relations() {
            let table = m.relation(name).expect("table exists");
            for pos in 0..arity {
                p.push(table.iter().filter(|t| t[pos] == e).count());
            }
        }
        p
    };
    let pa: Vec<Vec<usize>> = (0..n).map(|e| profile(a, e)).collect();
    let pb: Vec<Vec<usize>> = (0..n).map(|e| profile(b, e)).collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    search(a, b, &pa, &pb, &mut map, &mut used, 0, &mut out, limit);
    Ok(out)
}

fn respects_tables(a: &FinStructure, b: &FinStructure, map: &[usize], upto: usize) -> bool {
    for (name, _) in a.signature().relations() {
        let ta = a.relation(name).expect("table");
        let tb = b.relation(name).expect("table");
        for t in ta {
            if t.iter().all(|&e| map[e] != usize::MAX) {
                let image: Vec<usize> = t.iter().map(|&e| map[e]).collect();
                if !tb.contains(&image) {
                    return false;
                }
            }
        }
        for t in tb {
            if t.iter().all(|&e| map.iter().take(upto).any(|&m| m == e)) {
                // preimage exists because map is injective on 0..upto
                let pre: Vec<usize> = t
                    .iter()
                    .map(|&e| map.iter().position(|&m| m == e).expect("checked"))
                    .collect();
                if !ta.contains(&pre) {
                    return false;
                }
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &FinStructure,
    b: &FinStructure,
    pa: &[Vec<usize>],
    pb: &[Vec<usize>],
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    next: usize,
    out: &mut Vec<Vec<usize>>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    let n = map.len();
    if next == n {
        for name in a.signature().constants() {
            if map[a.constant(name).expect("constant")] != b.constant(name).expect("constant") {
                return;
            }
        }
        out.push(map.clone());
        return;
    }
    for target in 0..n {
        if used[target] || pa[next] != pb[target] {
            continue;
        }
        map[next] = target;
        used[target] = true;
        if respects_tables(a, b, map, next + 1) {
            search(a, b, pa, pb, map, used, next + 1, out, limit);
        }
        map[next] = usize::MAX;
        used[target] = false;
    }
}

/// True iff every nonempty subset of the domain has a minimal element; on a
/// finite domain this is acyclicity, decided by Kahn's algorithm.
pub fn is_wellfounded(rel: &BinRel) -> bool {
    let mut indeg = vec![0usize; rel.size];
    for &(_, b) in &rel.edges {
        indeg[b] += 1;
    }
    let mut queue: Vec<usize> = (0..rel.size).filter(|&i| indeg[i] == 0).collect();
    let mut removed = 0usize;
    while let Some(i) = queue.pop() {
        removed += 1;
        for &(a, b) in &rel.edges {
            if a == i {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push(b);
                }
            }
        }
    }
    removed == rel.size
}

/// True iff distinct-modulo-eq elements have distinct-modulo-eq predecessor
/// sets. With the identity equivalence this is plain extensionality.
pub fn is_extensional(rel: &BinRel, eq: &EqRelation) -> bool {
    assert_eq!(rel.size, eq.size(), "carrier mismatch");
    let idx = eq.class_index();
    let pred_classes = |i: usize| -> BTreeSet<usize> {
        rel.preds(i).into_iter().map(|p| idx[p]).collect()
    };
    for x in 0..rel.size {
        for y in x + 1..rel.size {
            if idx[x] != idx[y] && pred_classes(x) == pred_classes(y) {
                return false;
            }
        }
    }
    true
}

/// The quotient of `rel` by `eq`: edges between classes whenever some members
/// are related.
pub fn quotient_rel(rel: &BinRel, eq: &EqRelation) -> BinRel {
    let idx = eq.class_index();
    let edges: BTreeSet<(usize, usize)> = rel
        .edges
        .iter()
        .map(|&(a, b)| (idx[a], idx[b]))
        .collect();
    BinRel {
        size: eq.classes().len(),
        edges,
    }
}
