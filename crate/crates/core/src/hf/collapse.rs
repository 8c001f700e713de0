//! The Mostowski collapse π(a) = { π(b) : b E a } of a well-founded
//! extensional relation, optionally modulo an equivalence.

use crate::model::{is_extensional, is_wellfounded, quotient_rel, BinRel, EqRelation};

use super::{HFSet, HfError};

/// Collapses `rel` to a family of hereditarily finite sets, one per point.
///
/// Equivalent points collapse identically; each class is collapsed through
/// its least-index representative. Requires the quotient of `rel` by `eq` to
/// be well-founded and `rel` to be extensional modulo `eq` (with the identity
/// equivalence this is the usual well-founded + extensional condition, under
/// which the collapse is injective and membership-reflecting).
pub fn mostowski_collapse(rel: &BinRel, eq: Option<&EqRelation>) -> Result<Vec<HFSet>, HfError> {
    let identity;
    let eq = match eq {
        Some(eq) => {
            assert_eq!(eq.size(), rel.size, "carrier mismatch");
            eq
        }
        None => {
            identity = EqRelation::identity(rel.size);
            &identity
        }
    };
    if !is_wellfounded(&quotient_rel(rel, eq)) {
        return Err(HfError::NotWellFounded);
    }
    if !is_extensional(rel, eq) {
        return Err(HfError::NotExtensional);
    }

    let classes = eq.classes();
    let class_of = eq.class_index();
    let mut collapsed: Vec<Option<HFSet>> = vec![None; classes.len()];
    for c in 0..classes.len() {
        collapse_class(c, &classes, &class_of, rel, &mut collapsed);
    }
    Ok((0..rel.size)
        .map(|i| collapsed[class_of[i]].clone().expect("collapsed"))
        .collect())
}

fn collapse_class(
    c: usize,
    classes: &[Vec<usize>],
    class_of: &[usize],
    rel: &BinRel,
    collapsed: &mut Vec<Option<HFSet>>,
) -> HFSet {
    if let Some(x) = &collapsed[c] {
        return x.clone();
    }
    let rep = classes[c][0];
    let children: Vec<HFSet> = rel
        .preds(rep)
        .into_iter()
        .map(|j| collapse_class(class_of[j], classes, class_of, rel, collapsed))
        .collect();
    let x = HFSet::from_children(children);
    collapsed[c] = Some(x.clone());
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, edges: &[(usize, usize)]) -> BinRel {
        BinRel::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn three_chain_collapses_to_von_neumann() {
        let r = rel(3, &[(0, 1), (0, 2), (1, 2)]);
        let pi = mostowski_collapse(&r, None).unwrap();
        let strs: Vec<String> = pi.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, vec!["{}", "{{}}", "{{},{{}}}"]);
    }

    #[test]
    fn single_point_collapses_to_empty() {
        let r = rel(1, &[]);
        assert_eq!(mostowski_collapse(&r, None).unwrap(), vec![HFSet::empty()]);
    }

    #[test]
    fn ackermann_relation_collapses_to_decode() {
        let edges: Vec<(usize, usize)> = (0..16usize)
            .flat_map(|m| (0..16usize).filter(move |n| (m >> n) & 1 == 1).map(move |n| (n, m)))
            .collect();
        let r = rel(16, &edges);
        let pi = mostowski_collapse(&r, None).unwrap();
        for (i, x) in pi.iter().enumerate() {
            assert_eq!(
                x,
                &crate::hf::ack_decode_u64(i as u64, crate::hf::DEFAULT_ACK_CAP).unwrap()
            );
        }
    }

    #[test]
    fn rejects_cycles_and_non_extensional() {
        assert_eq!(
            mostowski_collapse(&rel(2, &[(0, 1), (1, 0)]), None).unwrap_err(),
            HfError::NotWellFounded
        );
        assert_eq!(
            mostowski_collapse(&rel(2, &[]), None).unwrap_err(),
            HfError::NotExtensional
        );
    }

    #[test]
    fn merged_points_collapse_identically() {
        // 0 is a member of both 1 and 2, and 1 ≈ 2
        let r = rel(3, &[(0, 1), (0, 2)]);
        let eq = EqRelation::generated(3, [(1, 2)]).unwrap();
        let pi = mostowski_collapse(&r, Some(&eq)).unwrap();
        assert_eq!(pi[0], HFSet::empty());
        assert_eq!(pi[1], HFSet::parse("{{}}").unwrap());
        assert_eq!(pi[1], pi[2]);
    }

    #[test]
    fn rejects_quotient_cycles() {
        // 1 E 0 with 0 ≈ 1 gives a self-loop in the quotient
        let r = rel(2, &[(1, 0)]);
        let eq = EqRelation::generated(2, [(0, 1)]).unwrap();
        assert_eq!(
            mostowski_collapse(&r, Some(&eq)).unwrap_err(),
            HfError::NotWellFounded
        );
    }
}
