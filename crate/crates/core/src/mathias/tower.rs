//! Exact-or-symbolic iterated-exponential integers.
//!
//! A value is either `Exact(n)` with `n` below the cap `2^cap_bits`, or
//! `Tower { twos, top }` denoting `2^2^…^2^top` with `twos` twos. Towers are
//! normalized by folding the top through exponentiation while the folded
//! value stays below the cap, so representable values have a unique form.
//! Comparison is exact: equalizing depths reduces to comparing a numeral
//! against a power of two, which bit lengths decide without materializing.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact/symbolic boundary: `Exact` holds values below `2^bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerCap {
    pub bits: u64,
}

impl Default for TowerCap {
    fn default() -> Self {
        TowerCap { bits: 4096 }
    }
}

impl TowerCap {
    pub fn new(bits: u64) -> Self {
        assert!(bits >= 64, "cap below 2^64 breaks depth equalization");
        TowerCap { bits }
    }
}

#[derive(Debug, Clone)]
pub enum TowerInt {
    Exact(BigUint),
    Tower { twos: u32, top: BigUint },
}

impl TowerInt {
    pub fn exact_u64(n: u64) -> TowerInt {
        TowerInt::Exact(BigUint::from(n))
    }

    /// `2^2^…^2^top` with `twos` twos, normalized against `cap`.
    pub fn tower(twos: u32, top: BigUint, cap: TowerCap) -> TowerInt {
        let mut twos = twos;
        let mut top = top;
        while twos > 0 {
            match top.to_u64() {
                Some(t) if t < cap.bits => {
                    top = BigUint::one() << t;
                    twos -= 1;
                }
                _ => break,
            }
        }
        if twos == 0 {
            TowerInt::Exact(top)
        } else {
            TowerInt::Tower { twos, top }
        }
    }

    /// `2^self`.
    pub fn pow2(&self, cap: TowerCap) -> TowerInt {
        match self {
            TowerInt::Exact(a) => TowerInt::tower(1, a.clone(), cap),
            TowerInt::Tower { twos, top } => TowerInt::Tower {
                twos: twos + 1,
                top: top.clone(),
            },
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            TowerInt::Exact(a) => Some(a),
            TowerInt::Tower { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            TowerInt::Exact(a) => serde_json::json!({ "exact": a.to_string() }),
            TowerInt::Tower { twos, top } => {
                serde_json::json!({ "tower": { "twos": twos, "top": top.to_string() } })
            }
        }
    }
}

/// The superexponential bound `b_k(n)`: `k = 0` gives `n` itself, otherwise a
/// tower of `k` twos over `n`.
pub fn tower_b(k: u32, n: u64, cap: TowerCap) -> TowerInt {
    let mut v = TowerInt::exact_u64(n);
    for _ in 0..k {
        v = v.pow2(cap);
    }
    v
}

/// `|V_n|`: zero at 0, then doubling exponentially, `|V_{n+1}| = 2^|V_n|`.
pub fn vcard(n: u32, cap: TowerCap) -> TowerInt {
    let mut v = TowerInt::Exact(BigUint::zero());
    for _ in 0..n {
        v = v.pow2(cap);
    }
    v
}

/// Total order agreeing with true numeric order.
pub fn tower_cmp(a: &TowerInt, b: &TowerInt) -> Ordering {
    // fold tops below 64 so depth equalization may assume top ≥ 64 even for
    // towers built outside the normalizing constructors
    let (a, b) = (canon_for_cmp(a), canon_for_cmp(b));
    let (a, b) = (&a, &b);
    match (a, b) {
        (TowerInt::Exact(a), TowerInt::Exact(b)) => a.cmp(b),
        (TowerInt::Exact(a), TowerInt::Tower { twos, top }) => cmp_big_vs_tower(a, *twos, top),
        (TowerInt::Tower { twos, top }, TowerInt::Exact(b)) => {
            cmp_big_vs_tower(b, *twos, top).reverse()
        }
        (
            TowerInt::Tower { twos: d1, top: t1 },
            TowerInt::Tower { twos: d2, top: t2 },
        ) => {
            // applying 2^x min(d1,d2) times to both sides preserves order
            match d1.cmp(d2) {
                Ordering::Equal => t1.cmp(t2),
                Ordering::Less => cmp_big_vs_tower(t1, d2 - d1, t2),
                Ordering::Greater => cmp_big_vs_tower(t2, d1 - d2, t1).reverse(),
            }
        }
    }
}

fn canon_for_cmp(t: &TowerInt) -> TowerInt {
    match t {
        TowerInt::Exact(_) => t.clone(),
        TowerInt::Tower { twos, top } => TowerInt::tower(*twos, top.clone(), TowerCap { bits: 64 }),
    }
}

/// `a` versus `2^^j(b)` for `j >= 1`, where `b >= 64`.
fn cmp_big_vs_tower(a: &BigUint, j: u32, b: &BigUint) -> Ordering {
    debug_assert!(j >= 1);
    if j >= 2 {
        // log2 of the tower is 2^^(j-1)(b) ≥ 2^b ≥ 2^64, beyond any bit length
        return Ordering::Less;
    }
    match b.to_u64() {
        // b ≥ 2^64, so 2^b dwarfs any representable numeral
        None => Ordering::Less,
        Some(b64) => cmp_big_vs_pow2(a, b64),
    }
}

/// `a` versus `2^e`, decided by bit length.
fn cmp_big_vs_pow2(a: &BigUint, e: u64) -> Ordering {
    let bits = a.bits();
    if bits <= e {
        Ordering::Less
    } else if bits == e + 1 {
        if a.count_ones() == 1 {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    } else {
        Ordering::Greater
    }
}

impl PartialEq for TowerInt {
    fn eq(&self, other: &Self) -> bool {
        tower_cmp(self, other) == Ordering::Equal
    }
}

impl Eq for TowerInt {}

impl PartialOrd for TowerInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerInt {
    fn cmp(&self, other: &Self) -> Ordering {
        tower_cmp(self, other)
    }
}

impl fmt::Display for TowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerInt::Exact(a) => write!(f, "{a}"),
            TowerInt::Tower { twos, top } => write!(f, "2^^{twos}({top})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cap() -> TowerCap {
        TowerCap::default()
    }

    #[test]
    fn small_bounds_unfold_exactly() {
        assert_eq!(tower_b(0, 5, cap()), TowerInt::exact_u64(5));
        assert_eq!(tower_b(1, 3, cap()), TowerInt::exact_u64(8));
        assert_eq!(tower_b(2, 2, cap()), TowerInt::exact_u64(16));
        for n in 0..=100 {
            assert_eq!(tower_b(0, n, cap()), TowerInt::exact_u64(n));
        }
    }

    #[test]
    fn b3_of_6_is_two_to_the_two_to_the_64() {
        let b = tower_b(3, 6, cap());
        let expected = TowerInt::tower(2, BigUint::from(64u32), cap());
        assert_eq!(b, expected);
        // 2^64 exceeds u64, so the normalized top is the folded exponent
        match &b {
            TowerInt::Tower { twos: 1, top } => assert_eq!(top, &(BigUint::one() << 64u32)),
            other => panic!("unexpected form {other}"),
        }
    }

    #[test]
    fn vcard_small_values() {
        let expected = [0u64, 1, 2, 4, 16, 65536];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(vcard(n as u32, cap()), TowerInt::exact_u64(e));
        }
    }

    #[test]
    fn vcard_seven_is_a_depth_two_tower() {
        match vcard(7, cap()) {
            TowerInt::Tower { twos: 2, top } => assert_eq!(top, BigUint::from(65536u32)),
            other => panic!("unexpected form {other}"),
        }
    }

    #[test]
    fn equal_across_representations() {
        // 2^16 = 65536 folds to an exact value
        let t = TowerInt::tower(1, BigUint::from(16u32), cap());
        assert_eq!(t, TowerInt::exact_u64(65536));
    }

    #[test]
    fn vcard6_below_b3_of_6() {
        // compare exponents: 65536 < 2^64
        assert_eq!(
            tower_cmp(&vcard(6, cap()), &tower_b(3, 6, cap())),
            Ordering::Less
        );
    }

    #[test]
    fn strictly_increasing_in_k() {
        for k in 0..=5u32 {
            for n in 1..=20u64 {
                assert_eq!(
                    tower_cmp(&tower_b(k, n, cap()), &tower_b(k + 1, n, cap())),
                    Ordering::Less,
                    "b_{k}({n}) vs b_{}({n})",
                    k + 1
                );
            }
        }
    }

    #[test]
    fn nondecreasing_in_n() {
        for k in 0..=4u32 {
            for n in 1..=30u64 {
                assert_ne!(
                    tower_cmp(&tower_b(k, n, cap()), &tower_b(k, n + 1, cap())),
                    Ordering::Greater
                );
            }
        }
    }

    #[test]
    fn cmp_agrees_with_exact_arithmetic_when_exact() {
        // deterministic pseudo-random pairs
        let mut x: u64 = 0x2545f4914f6cdd1d;
        let mut next = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x
        };
        for _ in 0..200 {
            let a = BigUint::from(next() >> (next() % 48));
            let b = BigUint::from(next() >> (next() % 48));
            assert_eq!(
                tower_cmp(&TowerInt::Exact(a.clone()), &TowerInt::Exact(b.clone())),
                a.cmp(&b)
            );
        }
    }

    #[test]
    fn reflexive_equality_over_mixed_forms() {
        let samples = [
            TowerInt::exact_u64(0),
            TowerInt::exact_u64(65536),
            vcard(6, cap()),
            vcard(9, cap()),
            tower_b(4, 7, cap()),
        ];
        for s in &samples {
            assert_eq!(tower_cmp(s, s), Ordering::Equal);
        }
    }

    #[test]
    fn exact_always_below_normalized_tower() {
        let big_exact = TowerInt::Exact((BigUint::one() << 4095u32) + BigUint::one());
        let small_tower = vcard(6, cap());
        assert_eq!(tower_cmp(&big_exact, &small_tower), Ordering::Less);
    }
}
