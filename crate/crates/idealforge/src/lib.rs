//! Families of sets with ideals of a prescribed size, and the monotone
//! DNF/CNF formulas they induce.
//!
//! Given an arbitrary-precision natural `k`, this crate constructs a
//! family of sets whose generated ideal (downward closure) has cardinality
//! exactly `k`, certifies that count through a recountable derivation
//! trace, converts the family to a monotone DNF with exactly `k`
//! satisfying assignments (or a monotone CNF with exactly `k` falsifying
//! assignments), and reports the bounds
//! `ceil(log2(bl(k)+1)) <= beta(k) <= min(20*sqrt(log2 k)*log2 log2 k, bl(k)+1)`
//! on the number of terms any such formula needs, where `bl(k)` counts the
//! runs of ones in `k`'s binary expansion.
//!
//! Module map:
//!
//! * [`numeric`] — block-binary representation and the bound formulas;
//! * [`family`] — set systems, ideal semantics, two exact counters;
//! * [`combinators`] — certified splitting and lifting with audit traces;
//! * [`constructions`] — the block and square-root constructions;
//! * [`formula`] — DNF/CNF conversion, exact model counters, file formats;
//! * [`oracle`] — exhaustive ground truth for tiny `k`.

pub mod combinators;
pub mod constructions;
pub mod family;
pub mod formula;
pub mod numeric;
pub mod oracle;

pub use numeric::Nat;
