//! Hereditarily finite sets in canonical form.
//!
//! A set is a sorted, deduplicated list of child sets behind an `Arc`; the
//! sort order is numeric order of Ackermann codes, so two sets are equal iff
//! their codes are equal. Rank and a structural hash are cached per node.

mod ack;
mod coded;
mod collapse;

pub use ack::{ack_decode, ack_decode_u64, ack_encode, DEFAULT_ACK_CAP};
pub use coded::{
    canonical_double_iso, coded_equiv, coded_member, decode_coded_pair, encode_coded_pair,
    CodedPair, DoubleStructure,
};
pub use collapse::mostowski_collapse;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HfError {
    #[error("bit index {index} exceeds the coding cap {cap}")]
    BitCap { index: u64, cap: u64 },
    #[error("stage {0} is too large to materialize (max 5)")]
    StageTooLarge(usize),
    #[error("relation is not well-founded")]
    NotWellFounded,
    #[error("relation is not extensional (modulo the given equivalence)")]
    NotExtensional,
    #[error("invalid coded pair: {0}")]
    BadCodedPair(String),
    #[error("bad set literal at byte {pos}: {msg}")]
    BadLiteral { pos: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

struct Node {
    children: Vec<HFSet>,
    rank: u32,
    hash: u64,
}

/// A hereditarily finite set.
#[derive(Clone)]
pub struct HFSet(Arc<Node>);

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet(Arc::new(Node {
            children: Vec::new(),
            rank: 0,
            hash: hash_children(&[]),
        }))
    }

    /// Builds a set from arbitrary children, sorting and deduplicating.
    pub fn from_children(mut children: Vec<HFSet>) -> HFSet {
        children.sort();
        children.dedup();
        let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        let hash = hash_children(&children);
        HFSet(Arc::new(Node {
            children,
            rank,
            hash,
        }))
    }

    pub fn singleton(x: HFSet) -> HFSet {
        HFSet::from_children(vec![x])
    }

    pub fn children(&self) -> &[HFSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Rank: 0 for ∅, otherwise 1 + the maximum rank of an element.
    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.children.binary_search(x).is_ok()
    }

    pub fn union(&self, other: &HFSet) -> HFSet {
        let mut children = self.0.children.clone();
        children.extend(other.0.children.iter().cloned());
        HFSet::from_children(children)
    }

    pub fn insert(&self, x: HFSet) -> HFSet {
        let mut children = self.0.children.clone();
        children.push(x);
        HFSet::from_children(children)
    }

    /// Every element of an element is an element.
    pub fn is_transitive(&self) -> bool {
        self.0
            .children
            .iter()
            .all(|c| c.children().iter().all(|g| self.contains(g)))
    }

    /// The transitive closure: all sets hereditarily below `self`, excluding
    /// `self` itself.
    pub fn transitive_closure(&self) -> BTreeSet<HFSet> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<HFSet> = self.0.children.to_vec();
        while let Some(x) = stack.pop() {
            if out.insert(x.clone()) {
                stack.extend(x.children().iter().cloned());
            }
        }
        out
    }

    /// `TC({self})`: the transitive closure together with the set itself.
    pub fn tc_with_self(&self) -> BTreeSet<HFSet> {
        let mut out = self.transitive_closure();
        out.insert(self.clone());
        out
    }

    /// The von Neumann natural `m`: {0, 1, …, m−1}.
    pub fn von_neumann(m: usize) -> HFSet {
        let mut cur = HFSet::empty();
        for _ in 0..m {
            cur = cur.insert(cur.clone());
        }
        cur
    }

    /// Parses the literal syntax: `{}`, `{{},{{}}}`. Whitespace is allowed
    /// around braces and commas.
    pub fn parse(text: &str) -> Result<HFSet, HfError> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let set = parse_set(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(HfError::BadLiteral {
                pos,
                msg: "unexpected trailing input".to_string(),
            });
        }
        Ok(set)
    }
}

fn hash_children(children: &[HFSet]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    children.len().hash(&mut h);
    for c in children {
        c.0.hash.hash(&mut h);
    }
    h.finish()
}

impl PartialEq for HFSet {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.hash == other.0.hash
            && self.0.children.len() == other.0.children.len()
            && self.0.children == other.0.children
    }
}

impl Eq for HFSet {}

impl Hash for HFSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// Numeric order of Ackermann codes, computed structurally: viewing a set as
/// the bitset of its children's codes, the largest differing bit decides.
impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let a = &self.0.children;
        let b = &other.0.children;
        let mut i = a.len();
        let mut j = b.len();
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            match a[i - 1].cmp(&b[j - 1]) {
                Ordering::Equal => {
                    i -= 1;
                    j -= 1;
                }
                ord => return ord,
            }
        }
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while bytes.get(*pos).is_some_and(|b| b.is_ascii_whitespace()) {
        *pos += 1;
    }
}

fn parse_set(bytes: &[u8], pos: &mut usize) -> Result<HFSet, HfError> {
    skip_ws(bytes, pos);
    if bytes.get(*pos) != Some(&b'{') {
        return Err(HfError::BadLiteral {
            pos: *pos,
            msg: "expected `{`".to_string(),
        });
    }
    *pos += 1;
    let mut children = Vec::new();
    skip_ws(bytes, pos);
    if bytes.get(*pos) == Some(&b'}') {
        *pos += 1;
        return Ok(HFSet::empty());
    }
    loop {
        children.push(parse_set(bytes, pos)?);
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet::from_children(children));
            }
            _ => {
                return Err(HfError::BadLiteral {
                    pos: *pos,
                    msg: "expected `,` or `}`".to_string(),
                })
            }
        }
    }
}

/// All hereditarily finite sets of rank < n, in ascending Ackermann-code
/// order. `n` is capped at 5: |V₅| = 65536 and |V₆| is out of reach.
pub fn v_stage(n: usize) -> Result<Vec<HFSet>, HfError> {
    if n > 5 {
        return Err(HfError::StageTooLarge(n));
    }
    let mut stage: Vec<HFSet> = Vec::new();
    for _ in 0..n {
        stage = subsets_of(&stage);
    }
    Ok(stage)
}

/// The structure ⟨V_n, ∈⟩ with elements indexed by Ackermann code, so the
/// edge relation is the bit test. Capped at n = 4 (16 elements).
pub fn v_structure(n: usize) -> Result<crate::model::FinStructure, HfError> {
    if n > 4 {
        return Err(HfError::StageTooLarge(n));
    }
    let size = v_stage(n)?.len();
    let edges: Vec<(usize, usize)> = (0..size)
        .flat_map(|j| (0..size).filter(move |i| j >> i & 1 == 1).map(move |i| (i, j)))
        .collect();
    Ok(crate::model::BinRel::new(size, edges)
        .expect("edges in range")
        .as_structure())
}

/// All subsets of a code-sorted pool, in ascending code order.
fn subsets_of(pool: &[HFSet]) -> Vec<HFSet> {
    assert!(pool.len() <= 16, "pool too large to power-set");
    let mut out = Vec::with_capacity(1 << pool.len());
    for mask in 0u32..(1 << pool.len()) {
        let children: Vec<HFSet> = (0..pool.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pool[i].clone())
            .collect();
        out.push(HFSet::from_children(children));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> HFSet {
        HFSet::parse(text).unwrap()
    }

    #[test]
    fn literal_round_trip() {
        for text in ["{}", "{{}}", "{{},{{}}}", "{{},{{}},{{},{{}}}}"] {
            let x = s(text);
            assert_eq!(x.to_string(), text);
        }
    }

    #[test]
    fn literal_rejects_garbage() {
        assert!(HFSet::parse("{").is_err());
        assert!(HFSet::parse("{}}").is_err());
        assert!(HFSet::parse("{,}").is_err());
    }

    #[test]
    fn duplicates_collapse() {
        let x = HFSet::from_children(vec![HFSet::empty(), HFSet::empty()]);
        assert_eq!(x, s("{{}}"));
        assert_eq!(x.len(), 1);
    }

    #[test]
    fn transitive_closure_and_rank() {
        // x = {∅, {∅}}: TC(x) = {∅, {∅}}, rank 2
        let x = s("{{},{{}}}");
        let tc: Vec<String> = x.transitive_closure().iter().map(|s| s.to_string()).collect();
        assert_eq!(tc, vec!["{}", "{{}}"]);
        assert_eq!(x.rank(), 2);

        assert!(HFSet::empty().transitive_closure().is_empty());
        assert_eq!(HFSet::empty().rank(), 0);
    }

    #[test]
    fn von_neumann_rank_is_the_number() {
        for m in 0..=6 {
            assert_eq!(HFSet::von_neumann(m).rank() as usize, m);
        }
    }

    #[test]
    fn v_stage_sizes() {
        assert_eq!(v_stage(0).unwrap().len(), 0);
        assert_eq!(v_stage(1).unwrap().len(), 1);
        assert_eq!(v_stage(2).unwrap().len(), 2);
        assert_eq!(v_stage(3).unwrap().len(), 4);
        assert_eq!(v_stage(4).unwrap().len(), 16);
        assert_eq!(v_stage(5).unwrap().len(), 65536);
        assert_eq!(v_stage(6).unwrap_err(), HfError::StageTooLarge(6));
    }

    #[test]
    fn v2_contents() {
        let v2: Vec<String> = v_stage(2).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(v2, vec!["{}", "{{}}"]);
    }

    #[test]
    fn stages_are_rank_initial_segments() {
        for n in 0..=4 {
            for x in v_stage(n).unwrap() {
                assert!((x.rank() as usize) < n);
            }
        }
    }
}
