//! The Ackermann coding: `n E m` iff the `n`th binary digit of `m` is 1.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{HFSet, HfError};

/// Default cap on the bit indices arising while coding, in either direction.
/// `decode(2^k)` requires decoding `k`, and `encode` of a deeply nested
/// singleton needs `2^2^…` bits, so both sides are guarded.
pub const DEFAULT_ACK_CAP: u64 = 1 << 20;

/// `encode(x) = Σ 2^encode(y)` over the elements `y` of `x`.
///
/// Fails when some hereditary element's code reaches `cap`, since the result
/// would then need at least `2^cap` bits.
pub fn ack_encode(x: &HFSet, cap: u64) -> Result<BigUint, HfError> {
    let mut memo: HashMap<HFSet, BigUint> = HashMap::new();
    encode_rec(x, cap, &mut memo)
}

fn encode_rec(
    x: &HFSet,
    cap: u64,
    memo: &mut HashMap<HFSet, BigUint>,
) -> Result<BigUint, HfError> {
    if let Some(c) = memo.get(x) {
        return Ok(c.clone());
    }
    let mut code = BigUint::zero();
    for child in x.children() {
        let exp = encode_rec(child, cap, memo)?;
        let index = exp.to_u64().filter(|&i| i < cap).ok_or(HfError::BitCap {
            index: exp.to_u64().unwrap_or(u64::MAX),
            cap,
        })?;
        code |= BigUint::one() << index;
    }
    memo.insert(x.clone(), code.clone());
    Ok(code)
}

/// Inverse of [`ack_encode`]. Every set-bit index arising hereditarily must
/// stay below `cap`.
pub fn ack_decode(n: &BigUint, cap: u64) -> Result<HFSet, HfError> {
    let mut memo: HashMap<u64, HFSet> = HashMap::new();
    let mut children = Vec::new();
    for index in set_bits(n, cap)? {
        children.push(decode_index(index, cap, &mut memo)?);
    }
    Ok(HFSet::from_children(children))
}

/// [`ack_decode`] for machine-sized codes.
pub fn ack_decode_u64(n: u64, cap: u64) -> Result<HFSet, HfError> {
    ack_decode(&BigUint::from(n), cap)
}

fn decode_index(index: u64, cap: u64, memo: &mut HashMap<u64, HFSet>) -> Result<HFSet, HfError> {
    if index >= cap {
        return Err(HfError::BitCap { index, cap });
    }
    if let Some(x) = memo.get(&index) {
        return Ok(x.clone());
    }
    let mut children = Vec::new();
    for bit in 0..64 {
        if index >> bit & 1 == 1 {
            children.push(decode_index(bit, cap, memo)?);
        }
    }
    let x = HFSet::from_children(children);
    memo.insert(index, x.clone());
    Ok(x)
}

fn set_bits(n: &BigUint, cap: u64) -> Result<Vec<u64>, HfError> {
    let mut out = Vec::new();
    for index in 0..n.bits() {
        if n.bit(index) {
            if index >= cap {
                return Err(HfError::BitCap { index, cap });
            }
            out.push(index);
        }
    }
    Ok(out)
}
