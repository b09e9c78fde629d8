//! Block-binary arithmetic over arbitrary-precision naturals.
//!
//! The binary expansion of any `k >= 1` splits uniquely into maximal runs
//! of ones and zeros, written most-significant first as
//! `1^(q_b) 0^(l_b) ... 1^(q_1) 0^(l_1)` with every `q_i >= 1`, every
//! `l_i >= 1` except the trailing `l_1 >= 0`. The number of one-runs is the
//! block count `bl(k)`, and it governs both the lower and upper bounds on
//! the number of terms a formula with exactly `k` satisfying assignments
//! needs:
//!
//! ```text
//! ceil(log2(bl(k)+1))  <=  beta(k)  <=  min(20*sqrt(log2 k)*log2(log2 k), bl(k)+1)
//! ```

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision natural number. All counts, bounds and cardinalities
/// in this crate are `Nat`s; non-negativity is guaranteed by the type.
pub type Nat = BigUint;

/// Convenience constructor for small literals in tests and examples.
pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    /// A signed power sum evaluated to zero or below; block counts are
    /// only defined for values `>= 1`.
    #[error("signed power sum evaluates to {0}, expected a value >= 1")]
    NonPositiveSum(BigInt),
}

/// One maximal run pair of the block-binary representation: `ones` ones
/// followed by `zeros` zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    /// Run of ones, `>= 1`.
    pub ones: u64,
    /// Run of zeros that follows; `>= 1` everywhere except the least
    /// significant block, where it may be 0.
    pub zeros: u64,
}

/// The unique block-binary decomposition of a positive natural, most
/// significant block first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRep {
    blocks: Vec<Block>,
}

impl BlockRep {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `bl(k)`: the number of one-runs.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Least significant block `(q_1, l_1)`.
    pub fn last(&self) -> Block {
        *self.blocks.last().expect("BlockRep is never empty")
    }

    /// Concatenates the runs back into a binary string and returns the
    /// value it denotes.
    pub fn reassemble(&self) -> Nat {
        let mut bits = Vec::new();
        for b in &self.blocks {
            bits.extend(std::iter::repeat_n(1u8, b.ones as usize));
            bits.extend(std::iter::repeat_n(0u8, b.zeros as usize));
        }
        Nat::from_radix_be(&bits, 2).expect("binary digits are valid")
    }
}

/// Decomposes `k` into its block-binary representation.
///
/// Panics if `k = 0`: zero has no block representation.
pub fn block_rep(k: &Nat) -> BlockRep {
    assert!(!k.is_zero(), "block representation is defined for k >= 1");
    let bits = k.to_radix_be(2);
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < bits.len() {
        let mut ones = 0u64;
        while i < bits.len() && bits[i] == 1 {
            ones += 1;
            i += 1;
        }
        let mut zeros = 0u64;
        while i < bits.len() && bits[i] == 0 {
            zeros += 1;
            i += 1;
        }
        blocks.push(Block { ones, zeros });
    }
    BlockRep { blocks }
}

/// `bl(k)` without materializing the runs.
pub fn block_count(k: &Nat) -> usize {
    block_rep(k).block_count()
}

/// Exact `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let m = n - 1;
    64 - u64::from(m.leading_zeros())
}

/// Smallest admissible integer value of the lower bound
/// `log2(bl(k)+1) <= beta(k)`, i.e. `ceil(log2(bl(k)+1))`.
pub fn lower_bound_terms(k: &Nat) -> u64 {
    let bl = block_count(k) as u64;
    ceil_log2(bl + 1)
}

/// The block upper bound `bl(k) + 1`.
pub fn block_bound(k: &Nat) -> u64 {
    block_count(k) as u64 + 1
}

/// `log2(k)` as a float, exact for powers of two and accurate to roughly
/// one part in 1e15 otherwise. Used for reporting and for guarded
/// comparisons with wide margins, never for exact integer decisions.
pub fn log2_approx(k: &Nat) -> f64 {
    let bits = k.bits();
    assert!(bits > 0, "log2 of zero is undefined");
    if bits <= 64 {
        (k.to_u64().expect("fits in u64") as f64).log2()
    } else {
        let top = (k >> (bits - 64)).to_u64().expect("top 64 bits fit");
        (bits - 64) as f64 + (top as f64).log2()
    }
}

/// Downward slop applied to guarded float bounds so that an achieved
/// integer count compared with `<=` can never pass on rounding alone.
const FLOAT_GUARD: f64 = 1.0 - 1e-9;

/// The square-root upper bound `floor(20 * sqrt(log2 k) * log2(log2 k))`
/// for `k >= 3`; `None` below that range.
///
/// The value is computed with a small downward guard, so it never exceeds
/// the real bound and any count `<=` it satisfies the real inequality.
pub fn sqrt_bound(k: &Nat) -> Option<u64> {
    if *k < nat(3) {
        return None;
    }
    let x = log2_approx(k);
    let v = 20.0 * x.sqrt() * x.log2();
    Some((v * FLOAT_GUARD).floor() as u64)
}

/// Both upper bounds on the achievable term count:
/// `(bl(k)+1, sqrt bound)`. The square-root bound is unavailable for
/// `k < 3`.
pub fn upper_bound_terms(k: &Nat) -> (u64, Option<u64>) {
    (block_bound(k), sqrt_bound(k))
}

/// A term `(-1)^sign * 2^exponent` of a signed power sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedPower {
    pub negative: bool,
    pub exponent: u64,
}

impl SignedPower {
    pub fn positive(exponent: u64) -> Self {
        SignedPower { negative: false, exponent }
    }

    pub fn negative(exponent: u64) -> Self {
        SignedPower { negative: true, exponent }
    }

    fn to_bigint(self) -> BigInt {
        let mag = BigInt::from(1) << self.exponent;
        if self.negative {
            -mag
        } else {
            mag
        }
    }
}

/// Evaluates a signed sum of powers of two and returns the value together
/// with the bound `t` = number of terms. Whenever the sum is positive its
/// block count is at most `t`; that inequality is asserted here.
pub fn bl_of_signed_sum(terms: &[SignedPower]) -> Result<(Nat, usize), NumericError> {
    let sum: BigInt = terms.iter().map(|t| t.to_bigint()).sum();
    if !sum.is_positive() {
        return Err(NumericError::NonPositiveSum(sum));
    }
    let value = sum.to_biguint().expect("positive");
    let t = terms.len();
    let bl = block_count(&value);
    assert!(
        bl <= t,
        "bl({value}) = {bl} exceeds the signed-sum term count {t}"
    );
    Ok((value, t))
}

/// Guarded check of `ceil(0.5*x + 1) < 20*sqrt(x)*log2(x)`.
///
/// Uses the strict majorant `ceil(y) < y + 1` on the left and a downward
/// guard on the right, so a `true` answer certifies the inequality.
pub fn half_log_bound_holds(x: f64) -> bool {
    assert!(x > 1.0, "the bound is evaluated for x = log2(k) >= log2(3)");
    let lhs = 0.5 * x + 2.0;
    let rhs = 20.0 * x.sqrt() * x.log2() * FLOAT_GUARD;
    lhs < rhs
}
