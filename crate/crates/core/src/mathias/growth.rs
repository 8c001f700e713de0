//! Growth profiles of hereditarily finite sets against the superexponential
//! bounds, and the finite fruitful-class closure clauses.

use std::collections::HashMap;

use super::tower::{tower_b, tower_cmp, vcard, TowerCap, TowerInt};
use super::MathiasError;
use crate::hf::{v_stage, HFSet};

/// `n ↦ |TC({x}) ∩ V_n|`, tabulated until it reaches its eventual constant
/// `|TC({x})|` at `n = rank(x) + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthProfile {
    /// `counts[n]` is the number of members of `TC({x})` of rank below `n`,
    /// for `0 <= n <= rank(x) + 1`.
    pub counts: Vec<u64>,
    /// `|TC({x})|`, the value of every later entry.
    pub constant: u64,
}

impl GrowthProfile {
    pub fn at(&self, n: usize) -> u64 {
        self.counts.get(n).copied().unwrap_or(self.constant)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "counts": self.counts, "constant": self.constant })
    }
}

pub fn growth_profile(x: &HFSet) -> GrowthProfile {
    let tc = x.tc_with_self();
    let rank = x.rank() as usize;
    let mut counts = vec![0u64; rank + 2];
    for y in &tc {
        // y contributes to every n > rank(y)
        for slot in counts.iter_mut().skip(y.rank() as usize + 1) {
            *slot += 1;
        }
    }
    let constant = tc.len() as u64;
    debug_assert_eq!(counts[rank + 1], constant);
    GrowthProfile { counts, constant }
}

/// The least `k` such that `|TC({x}) ∩ V_n| <= b_k(n)` for all `n >= 1`.
///
/// Once the profile is constant and `b_k` has caught up with the constant,
/// both sides are monotone, so checking up to `rank(x) + 1` decides the
/// universal quantifier. Some `k` always works because `b_k(1)` grows without
/// bound in `k`.
pub fn min_depth(x: &HFSet) -> u32 {
    let profile = growth_profile(x);
    let cap = TowerCap::default();
    for k in 0.. {
        let ok = (1..profile.counts.len()).all(|n| {
            tower_cmp(
                &TowerInt::exact_u64(profile.counts[n]),
                &tower_b(k, n as u64, cap),
            ) != std::cmp::Ordering::Greater
        });
        if ok {
            return k;
        }
    }
    unreachable!("b_k(1) is unbounded in k");
}

/// `min_depth` of the stage `V_m` as a single set, computed symbolically so
/// that it works far past the materialization bound.
///
/// The profile of `V_m` is `n ↦ |V_min(n,m)|` up to `n = m`, then the
/// constant `|V_m| + 1`; the `+1` comparison against `b_k(m+1)` is the strict
/// inequality `|V_m| < b_k(m+1)`.
pub fn min_depth_vstage(m: u32) -> u32 {
    let cap = TowerCap::default();
    for k in 0.. {
        let stages_ok = (1..=m).all(|n| {
            tower_cmp(&vcard(n, cap), &tower_b(k, n as u64, cap)) != std::cmp::Ordering::Greater
        });
        let constant_ok = tower_cmp(&vcard(m, cap), &tower_b(k, m as u64 + 1, cap))
            == std::cmp::Ordering::Less;
        if stages_ok && constant_ok {
            return k;
        }
    }
    unreachable!("b_k is unbounded in k");
}

/// A counterexample to one of the closure clauses.
#[derive(Debug, Clone)]
pub struct FruitfulViolation {
    pub clause: u8,
    pub operands: Vec<String>,
    pub result: String,
    pub result_depth: u32,
}

#[derive(Debug, Clone, Default)]
pub struct FruitfulReport {
    pub violations: Vec<FruitfulViolation>,
    pub pairs_checked: usize,
    pub unions_checked: usize,
}

impl FruitfulReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the closure clauses of the class `C_K` of transitive sets of
/// min-depth at most `K`, restricted to the sample and to results inside V₅:
///
/// * clause 3: `x, y ∈ C_K` implies `x ∪ y ∈ C_K`;
/// * clause 4: `x ∈ C_K` and `y ⊆ P(x)` implies `x ∪ y ∈ C_K`.
///
/// For clause 4, `y` ranges over sets of subsets of `x` whose union stays in
/// V₅, which means subsets of `x ∩ V₃`.
pub fn fruitful_closure_check(
    k_bound: u32,
    sample: &[HFSet],
) -> Result<FruitfulReport, MathiasError> {
    for x in sample {
        if x.rank() > 4 {
            return Err(MathiasError::SampleOutsideV5(x.to_string()));
        }
        if !x.is_transitive() {
            return Err(MathiasError::SampleNotTransitive(x.to_string()));
        }
    }
    let mut depth_cache: HashMap<HFSet, u32> = HashMap::new();
    let depth = |x: &HFSet, cache: &mut HashMap<HFSet, u32>| -> u32 {
        if let Some(&d) = cache.get(x) {
            return d;
        }
        let d = min_depth(x);
        cache.insert(x.clone(), d);
        d
    };

    let in_class: Vec<bool> = sample
        .iter()
        .map(|x| depth(x, &mut depth_cache) <= k_bound)
        .collect();
    let mut report = FruitfulReport::default();

    for i in 0..sample.len() {
        for j in i..sample.len() {
            if !(in_class[i] && in_class[j]) {
                continue;
            }
            report.pairs_checked += 1;
            let u = sample[i].union(&sample[j]);
            debug_assert!(u.is_transitive());
            let d = depth(&u, &mut depth_cache);
            if d > k_bound {
                report.violations.push(FruitfulViolation {
                    clause: 3,
                    operands: vec![sample[i].to_string(), sample[j].to_string()],
                    result: u.to_string(),
                    result_depth: d,
                });
            }
        }
    }

    let v3: Vec<HFSet> = v_stage(3).expect("stage 3 is materializable");
    for (i, x) in sample.iter().enumerate() {
        if !in_class[i] {
            continue;
        }
        // candidate elements of y: subsets of x built from x ∩ V₃, the ones
        // of rank ≤ 3, keeping x ∪ y inside V₅
        let low: Vec<HFSet> = x
            .children()
            .iter()
            .filter(|c| v3.contains(c))
            .cloned()
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << low.len()) {
            let subset = HFSet::from_children(
                (0..low.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| low[b].clone())
                    .collect(),
            );
            seen.insert(subset);
        }
        // y is any set of such subsets; distinct unions only
        let candidates: Vec<HFSet> = seen.into_iter().filter(|s| !x.contains(s)).collect();
        let mut unions = std::collections::BTreeSet::new();
        for mask in 0u64..(1u64 << candidates.len().min(16)) {
            let mut children = x.children().to_vec();
            for (b, c) in candidates.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    children.push(c.clone());
                }
            }
            unions.insert(HFSet::from_children(children));
        }
        for u in unions {
            report.unions_checked += 1;
            debug_assert!(u.is_transitive());
            debug_assert!(u.rank() <= 4);
            let d = depth(&u, &mut depth_cache);
            if d > k_bound {
                report.violations.push(FruitfulViolation {
                    clause: 4,
                    operands: vec![x.to_string()],
                    result: u.to_string(),
                    result_depth: d,
                });
            }
        }
    }
    Ok(report)
}
