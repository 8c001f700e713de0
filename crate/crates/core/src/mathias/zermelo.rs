//! The Zermelo tower: the cumulative hierarchy rebuilt with a set `a` in
//! place of ∅ at the bottom, the substitution mapping the ordinary hierarchy
//! onto it, and the terminal-descent membership criterion.

use std::collections::{BTreeSet, HashMap};

use super::MathiasError;
use crate::hf::{HFSet, HfError};

/// `x ↦ x^(a)`: replaces every hereditary occurrence of ∅ with `a`.
///
/// `∅^(a) = a` and `x^(a) = { y^(a) : y ∈ x }`; membership is preserved.
pub fn tower_sub(x: &HFSet, a: &HFSet) -> HFSet {
    let mut memo: HashMap<HFSet, HFSet> = HashMap::new();
    sub_rec(x, a, &mut memo)
}

fn sub_rec(x: &HFSet, a: &HFSet, memo: &mut HashMap<HFSet, HFSet>) -> HFSet {
    if x.is_empty() {
        return a.clone();
    }
    if let Some(y) = memo.get(x) {
        return y.clone();
    }
    let children = x.children().iter().map(|y| sub_rec(y, a, memo)).collect();
    let y = HFSet::from_children(children);
    memo.insert(x.clone(), y.clone());
    y
}

/// Stage `α` of the tower over `a`:
///
/// * stage 0 is empty;
/// * stage α+1 is `{a} ∪ (P(stage α) − {∅})`.
///
/// Stage sizes match the ordinary hierarchy, so α is capped at 5.
pub fn zermelo_stage(a: &HFSet, alpha: usize) -> Result<Vec<HFSet>, HfError> {
    if alpha > 5 {
        return Err(HfError::StageTooLarge(alpha));
    }
    let mut stage: BTreeSet<HFSet> = BTreeSet::new();
    for _ in 0..alpha {
        let pool: Vec<HFSet> = stage.iter().cloned().collect();
        assert!(pool.len() <= 16, "stage pool too large");
        let mut next = BTreeSet::new();
        next.insert(a.clone());
        for mask in 1u32..(1 << pool.len()) {
            let children: Vec<HFSet> = (0..pool.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pool[b].clone())
                .collect();
            next.insert(HFSet::from_children(children));
        }
        stage = next;
    }
    Ok(stage.into_iter().collect())
}

/// All terminal ∈-descents from `x`: chains `x = x_n ∋ … ∋ x_1 ∋ x_0 = ∅`.
///
/// The number of chains can be exponential; enumeration fails once it would
/// exceed `cap`.
pub fn terminal_descents(x: &HFSet, cap: u64) -> Result<Vec<Vec<HFSet>>, MathiasError> {
    let mut counts: HashMap<HFSet, u64> = HashMap::new();
    let total = count_descents(x, &mut counts);
    if total > cap {
        return Err(MathiasError::DescentCap { count: total, cap });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect_descents(x, &mut prefix, &mut out);
    Ok(out)
}

fn count_descents(x: &HFSet, counts: &mut HashMap<HFSet, u64>) -> u64 {
    if x.is_empty() {
        return 1;
    }
    if let Some(&c) = counts.get(x) {
        return c;
    }
    let c = x
        .children()
        .iter()
        .map(|y| count_descents(y, counts))
        .fold(0u64, u64::saturating_add);
    counts.insert(x.clone(), c);
    c
}

fn collect_descents(x: &HFSet, prefix: &mut Vec<HFSet>, out: &mut Vec<Vec<HFSet>>) {
    prefix.push(x.clone());
    if x.is_empty() {
        out.push(prefix.clone());
    } else {
        for y in x.children() {
            collect_descents(y, prefix, out);
        }
    }
    prefix.pop();
}

/// True iff every terminal ∈-descent from `x` passes through `a`, which
/// characterizes membership in the tower over `a`.
///
/// Computed by recursion rather than by materializing chains: `x = a` passes;
/// otherwise `x` must be nonempty with every element passing.
pub fn in_tower(x: &HFSet, a: &HFSet) -> bool {
    let mut memo: HashMap<HFSet, bool> = HashMap::new();
    in_tower_rec(x, a, &mut memo)
}

fn in_tower_rec(x: &HFSet, a: &HFSet, memo: &mut HashMap<HFSet, bool>) -> bool {
    if x == a {
        return true;
    }
    if x.is_empty() {
        return false;
    }
    if let Some(&b) = memo.get(x) {
        return b;
    }
    let b = x.children().iter().all(|y| in_tower_rec(y, a, memo));
    memo.insert(x.clone(), b);
    b
}
