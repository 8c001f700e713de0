//! Sets coded as pairs (α, E): a point of a well-founded extensional relation
//! stands for the set it collapses to. This is the finite counterpart of
//! coding a set by a relation on a fixed index domain, together with the
//! canonical-isomorphism kernel for structures carrying two membership
//! relations.

use serde::{Deserialize, Serialize};

use crate::model::BinRel;

use super::{mostowski_collapse, HFSet, HfError};

/// A set coded by a pointed relation: domain `0..n`, edges `E`, point `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedPair {
    pub n: usize,
    #[serde(rename = "E")]
    pub edges: Vec<(usize, usize)>,
    pub alpha: usize,
}

impl CodedPair {
    pub fn validate(&self) -> Result<BinRel, HfError> {
        if self.alpha >= self.n {
            return Err(HfError::BadCodedPair(format!(
                "alpha = {} is outside 0..{}",
                self.alpha, self.n
            )));
        }
        let rel = BinRel::new(self.n, self.edges.iter().copied())
            .map_err(|e| HfError::BadCodedPair(e.to_string()))?;
        Ok(rel)
    }

    pub fn from_json(text: &str) -> Result<Self, HfError> {
        serde_json::from_str(text).map_err(|e| HfError::BadCodedPair(format!("bad JSON: {e}")))
    }

    /// The substructure of hereditary E-predecessors of `alpha`, including
    /// `alpha`, as a pointed relation of its own.
    pub fn hereditary_part(&self) -> Result<CodedPair, HfError> {
        let rel = self.validate()?;
        let mut reachable = vec![false; self.n];
        let mut stack = vec![self.alpha];
        reachable[self.alpha] = true;
        while let Some(i) = stack.pop() {
            for j in rel.preds(i) {
                if !reachable[j] {
                    reachable[j] = true;
                    stack.push(j);
                }
            }
        }
        let index: Vec<usize> = {
            let mut map = vec![usize::MAX; self.n];
            let mut next = 0;
            for (i, &r) in reachable.iter().enumerate() {
                if r {
                    map[i] = next;
                    next += 1;
                }
            }
            map
        };
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| reachable[a] && reachable[b])
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        Ok(CodedPair {
            n: reachable.iter().filter(|&&r| r).count(),
            edges,
            alpha: index[self.alpha],
        })
    }
}

/// Codes a set: `TC({x})` is enumerated in ascending Ackermann-code order,
/// `E` is the induced membership, and `alpha` indexes `x` itself.
pub fn encode_coded_pair(x: &HFSet) -> CodedPair {
    let elements: Vec<HFSet> = x.tc_with_self().into_iter().collect();
    let mut edges = Vec::new();
    for (j, outer) in elements.iter().enumerate() {
        for (i, inner) in elements.iter().enumerate() {
            if outer.contains(inner) {
                edges.push((i, j));
            }
        }
    }
    let alpha = elements.iter().position(|e| e == x).expect("x is in TC({x})");
    CodedPair {
        n: elements.len(),
        edges,
        alpha,
    }
}

/// Decodes a pair by collapsing and reading off the distinguished point.
pub fn decode_coded_pair(c: &CodedPair) -> Result<HFSet, HfError> {
    let rel = c.validate()?;
    let pi = mostowski_collapse(&rel, None)?;
    Ok(pi[c.alpha].clone())
}

/// Two codes denote the same set iff the hereditary predecessor structures of
/// their points are isomorphic; decoding both decides this.
pub fn coded_equiv(c1: &CodedPair, c2: &CodedPair) -> Result<bool, HfError> {
    Ok(decode_coded_pair(c1)? == decode_coded_pair(c2)?)
}

/// Membership between codes: (α,E) encodes a member of (β,F) iff (α,E) is
/// equivalent to (γ,F) for some γ F β.
pub fn coded_member(c1: &CodedPair, c2: &CodedPair) -> Result<bool, HfError> {
    let x = decode_coded_pair(c1)?;
    let rel2 = c2.validate()?;
    let pi2 = mostowski_collapse(&rel2, None)?;
    Ok(rel2.preds(c2.alpha).into_iter().any(|gamma| pi2[gamma] == x))
}

/// A domain carrying two membership relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStructure {
    pub size: usize,
    pub e1: Vec<(usize, usize)>,
    pub e2: Vec<(usize, usize)>,
}

impl DoubleStructure {
    pub fn rels(&self) -> Result<(BinRel, BinRel), HfError> {
        let r1 = BinRel::new(self.size, self.e1.iter().copied())?;
        let r2 = BinRel::new(self.size, self.e2.iter().copied())?;
        Ok((r1, r2))
    }
}

/// The canonical isomorphism ⟨M,E₁⟩ ≅ ⟨M,E₂⟩, when one exists.
///
/// Both relations are collapsed; if the collapse images coincide as families
/// of sets, the bijection matching equal collapse values is returned. It is
/// the only isomorphism, because transitive sets are rigid.
pub fn canonical_double_iso(d: &DoubleStructure) -> Result<Option<Vec<usize>>, HfError> {
    let (r1, r2) = d.rels()?;
    let pi1 = mostowski_collapse(&r1, None)?;
    let pi2 = mostowski_collapse(&r2, None)?;
    let mut bij = Vec::with_capacity(d.size);
    for x in &pi1 {
        match pi2.iter().position(|y| y == x) {
            Some(j) => bij.push(j),
            None => return Ok(None),
        }
    }
    Ok(Some(bij))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::v_stage;

    #[test]
    fn encode_singleton_of_empty() {
        // x = {∅}: TC({x}) = [∅, {∅}], E = {(0,1)}, α = 1
        let x = HFSet::parse("{{}}").unwrap();
        let c = encode_coded_pair(&x);
        assert_eq!(c.n, 2);
        assert_eq!(c.edges, vec![(0, 1)]);
        assert_eq!(c.alpha, 1);
    }

    #[test]
    fn encode_empty_set() {
        let c = encode_coded_pair(&HFSet::empty());
        assert_eq!((c.n, c.alpha), (1, 0));
        assert!(c.edges.is_empty());
    }

    #[test]
    fn round_trip_on_v4() {
        for x in v_stage(4).unwrap() {
            let c = encode_coded_pair(&x);
            assert_eq!(decode_coded_pair(&c).unwrap(), x);
        }
    }

    #[test]
    fn round_trip_on_v5_samples() {
        // a deterministic spread of 100 elements of V5
        let v5 = v_stage(5).unwrap();
        for i in 0..100usize {
            let x = &v5[(i * 653) % v5.len()];
            let c = encode_coded_pair(x);
            assert_eq!(&decode_coded_pair(&c).unwrap(), x, "sample {i}");
        }
    }

    #[test]
    fn double_iso_matches_the_search_oracle_on_six_points() {
        // deterministic pool of valid 6-point relations: membership induced
        // on ∈-closed six-element families under random relabelings
        use crate::model::find_isomorphisms;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let v4 = v_stage(4).unwrap();
        let mut pool: Vec<Vec<(usize, usize)>> = Vec::new();
        while pool.len() < 12 {
            let mut family: std::collections::BTreeSet<HFSet> = std::collections::BTreeSet::new();
            while family.len() < 6 {
                let x = &v4[(next() % v4.len() as u64) as usize];
                for y in x.tc_with_self() {
                    family.insert(y);
                }
            }
            if family.len() != 6 {
                continue;
            }
            let family: Vec<HFSet> = family.into_iter().collect();
            let mut relabel: Vec<usize> = (0..6).collect();
            for i in (1..6usize).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                relabel.swap(i, j);
            }
            let edges: Vec<(usize, usize)> = family
                .iter()
                .enumerate()
                .flat_map(|(a, x)| {
                    family
                        .iter()
                        .enumerate()
                        .filter(move |(_, y)| y.contains(x))
                        .map(move |(b, _)| (a, b))
                })
                .map(|(a, b)| (relabel[a], relabel[b]))
                .collect();
            pool.push(edges);
        }
        let mut compared = 0;
        let mut present = 0;
        for e1 in &pool {
            for e2 in &pool {
                let d = DoubleStructure {
                    size: 6,
                    e1: e1.clone(),
                    e2: e2.clone(),
                };
                let canonical = canonical_double_iso(&d).unwrap();
                let (r1, r2) = d.rels().unwrap();
                let oracle =
                    find_isomorphisms(&r1.as_structure(), &r2.as_structure(), 8).unwrap();
                match canonical {
                    Some(bij) => {
                        assert_eq!(oracle.len(), 1, "rigidity: exactly one isomorphism");
                        assert_eq!(oracle[0], bij);
                        present += 1;
                    }
                    None => assert!(oracle.is_empty()),
                }
                compared += 1;
            }
        }
        assert_eq!(compared, 144);
        assert!(present >= 12, "at least the diagonal pairs are isomorphic");
    }

    #[test]
    fn equivalence_absorbs_the_enumeration_choice() {
        // two enumerations of {∅,{∅}}: canonical order and a permuted one
        let canonical = CodedPair {
            n: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
            alpha: 2,
        };
        let permuted = CodedPair {
            n: 3,
            edges: vec![(1, 0), (1, 2), (0, 2)],
            alpha: 2,
        };
        assert!(coded_equiv(&canonical, &permuted).unwrap());
        assert!(coded_equiv(&canonical, &canonical).unwrap());
    }

    #[test]
    fn distinct_sets_are_inequivalent() {
        let zero = encode_coded_pair(&HFSet::empty());
        let one = encode_coded_pair(&HFSet::parse("{{}}").unwrap());
        assert!(!coded_equiv(&zero, &one).unwrap());
        assert!(coded_member(&zero, &one).unwrap());
        assert!(!coded_member(&one, &zero).unwrap());
    }

    #[test]
    fn member_agrees_with_decoded_membership() {
        let v4 = v_stage(4).unwrap();
        for x in v4.iter().take(8) {
            for y in v4.iter().take(8) {
                let cx = encode_coded_pair(x);
                let cy = encode_coded_pair(y);
                assert_eq!(coded_member(&cx, &cy).unwrap(), y.contains(x));
            }
        }
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let cyclic = CodedPair {
            n: 2,
            edges: vec![(0, 1), (1, 0)],
            alpha: 0,
        };
        assert!(decode_coded_pair(&cyclic).is_err());
        let bad_alpha = CodedPair {
            n: 1,
            edges: vec![],
            alpha: 3,
        };
        assert!(matches!(
            decode_coded_pair(&bad_alpha),
            Err(HfError::BadCodedPair(_))
        ));
    }

    #[test]
    fn hereditary_part_trims_unreachable_points() {
        // point 2 is unrelated to alpha's cone
        let c = CodedPair {
            n: 3,
            edges: vec![(0, 1)],
            alpha: 1,
        };
        let h = c.hereditary_part().unwrap();
        assert_eq!(h.n, 2);
        assert_eq!(h.alpha, 1);
    }

    #[test]
    fn double_iso_identity_when_relations_agree() {
        let d = DoubleStructure {
            size: 3,
            e1: vec![(0, 1), (0, 2), (1, 2)],
            e2: vec![(0, 1), (0, 2), (1, 2)],
        };
        assert_eq!(canonical_double_iso(&d).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn double_iso_swap() {
        let d = DoubleStructure {
            size: 2,
            e1: vec![(0, 1)],
            e2: vec![(1, 0)],
        };
        assert_eq!(canonical_double_iso(&d).unwrap(), Some(vec![1, 0]));
    }

    #[test]
    fn double_iso_absent_when_shapes_differ() {
        // E₁ collapses to {∅,{∅},{{∅}}}, E₂ to {∅,{∅},{∅,{∅}}}
        let d = DoubleStructure {
            size: 3,
            e1: vec![(0, 1), (1, 2)],
            e2: vec![(0, 1), (0, 2), (1, 2)],
        };
        assert_eq!(canonical_double_iso(&d).unwrap(), None);
    }
}
