//! Exhaustive computation of the true minimum generator count for tiny
//! ideals.
//!
//! `alpha(k)` is the least number of sets whose ideal has cardinality
//! exactly `k`. The ideal cardinality of an `m`-member family depends only
//! on the sizes of the `2^m - 1` overlap regions between the members, so
//! the search enumerates region-size vectors directly — every family shape
//! up to element relabeling appears exactly once. Member count ascends;
//! the first witness found is minimal.
//!
//! Minimality at `m` members is certified only when a family over
//! `m * floor(log2 k)` elements would have fit under the universe cap
//! (every member of a size-`k` ideal has at most `floor(log2 k)`
//! elements, so that many suffice for any witness). When the cap is too
//! small to certify, the search reports a budget error instead of a
//! possibly wrong answer.

use std::io::Write;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::family::{ideal_count_ie, Element, FiniteSet, SetFamily};
use crate::numeric::{block_bound, lower_bound_terms, Nat};

/// Practical ceiling on `k` for the exhaustive search.
pub const ALPHA_K_CEILING: u64 = 64;
/// Default cap on the witness universe size.
pub const DEFAULT_ALPHA_UNIVERSE: u32 = 12;
/// Default cap on the member count.
pub const DEFAULT_ALPHA_MEMBERS: usize = 4;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("k = {k} is above the exhaustive-search ceiling of {max}")]
    KTooLarge { k: Nat, max: u64 },
    #[error("no family with at most {max_members} members over at most {max_universe} elements generates an ideal of size {k}")]
    BudgetExhausted { k: Nat, max_members: usize, max_universe: u32 },
    #[error("cannot certify minimality beyond {members} members: the universe cap {max_universe} is below the sound search bound {needed}")]
    UniverseCapTooSmall { members: usize, max_universe: u32, needed: u64 },
}

/// A certified value of `alpha(k)` with a minimal witness family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaRecord {
    pub k: Nat,
    pub alpha: usize,
    pub witness: SetFamily,
}

impl AlphaRecord {
    /// Number of universe elements the witness uses.
    pub fn universe_size(&self) -> usize {
        self.witness.universe().len()
    }
}

struct RegionSearch {
    k: i128,
    /// `floor(log2 k)`: no member may exceed this size.
    max_member: u64,
    max_universe: u64,
    /// Nonempty subsets of the member index set, as bitmasks, ordered by
    /// (popcount, value).
    regions: Vec<u32>,
    sizes: Vec<u64>,
    member_used: Vec<u64>,
    total_used: u64,
}

impl RegionSearch {
    fn new(m: usize, k: u64, max_member: u64, max_universe: u64) -> Self {
        let mut regions: Vec<u32> = (1..(1u32 << m)).collect();
        regions.sort_by_key(|r| (r.count_ones(), *r));
        RegionSearch {
            k: i128::from(k),
            max_member,
            max_universe,
            sizes: vec![0; regions.len()],
            member_used: vec![0; m],
            total_used: 0,
            regions,
        }
    }

    fn members(&self) -> usize {
        self.member_used.len()
    }

    /// Depth-first over region sizes in lexicographic order; returns the
    /// first complete assignment realizing `k`.
    fn run(&mut self) -> Option<Vec<u64>> {
        self.place(0)
    }

    fn place(&mut self, idx: usize) -> Option<Vec<u64>> {
        if idx == self.regions.len() {
            return if self.is_antichain() && self.ideal_size() == self.k {
                Some(self.sizes.clone())
            } else {
                None
            };
        }
        let region = self.regions[idx];
        let member_room = (0..self.members())
            .filter(|i| region & (1 << i) != 0)
            .map(|i| self.max_member - self.member_used[i])
            .min()
            .expect("regions are nonempty");
        let room = member_room.min(self.max_universe - self.total_used);
        for size in 0..=room {
            self.sizes[idx] = size;
            self.apply(region, size, 1);
            let found = self.place(idx + 1);
            self.apply(region, size, -1);
            if found.is_some() {
                return found;
            }
        }
        self.sizes[idx] = 0;
        None
    }

    fn apply(&mut self, region: u32, size: u64, sign: i64) {
        for i in 0..self.members() {
            if region & (1 << i) != 0 {
                self.member_used[i] =
                    (self.member_used[i] as i64 + sign * size as i64) as u64;
            }
        }
        self.total_used = (self.total_used as i64 + sign * size as i64) as u64;
    }

    /// `S_i ⊆ S_j` exactly when every region containing `i` but not `j`
    /// is empty.
    fn is_antichain(&self) -> bool {
        let m = self.members();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let contained = self
                    .regions
                    .iter()
                    .zip(&self.sizes)
                    .all(|(r, s)| *s == 0 || r & (1 << i) == 0 || r & (1 << j) != 0);
                if contained {
                    return false;
                }
            }
        }
        true
    }

    /// Inclusion-exclusion over member subsets; the intersection of the
    /// members in `J` has size `sum of regions containing all of J`.
    fn ideal_size(&self) -> i128 {
        let m = self.members();
        let mut total: i128 = 0;
        for subset in 1u32..(1 << m) {
            let inter: u64 = self
                .regions
                .iter()
                .zip(&self.sizes)
                .filter(|(r, _)| *r & subset == subset)
                .map(|(_, s)| *s)
                .sum();
            let sign: i128 = if subset.count_ones() % 2 == 1 { 1 } else { -1 };
            total += sign * (1i128 << inter);
        }
        total
    }
}

fn materialize(m: usize, regions: &[u32], sizes: &[u64]) -> SetFamily {
    let mut next_index = 1u32;
    let mut members: Vec<FiniteSet> = vec![FiniteSet::empty(); m];
    for (region, size) in regions.iter().zip(sizes) {
        for _ in 0..*size {
            let e = Element::new(1, next_index);
            next_index += 1;
            for (i, member) in members.iter_mut().enumerate() {
                if region & (1 << i) != 0 {
                    member.insert(e);
                }
            }
        }
    }
    SetFamily::new(members)
}

/// Finds the minimum member count of a family whose ideal has size
/// exactly `k`, searching member counts in ascending order, with caps on
/// the witness universe and the member count.
pub fn alpha_exhaustive(
    k: &Nat,
    max_universe: u32,
    max_members: usize,
) -> Result<AlphaRecord, OracleError> {
    let k_small = k
        .to_u64()
        .filter(|v| *v >= 1 && *v <= ALPHA_K_CEILING)
        .ok_or_else(|| OracleError::KTooLarge { k: k.clone(), max: ALPHA_K_CEILING })?;
    let max_member = 63 - u64::from(k_small.leading_zeros());
    for m in 1..=max_members {
        let mut search = RegionSearch::new(m, k_small, max_member, u64::from(max_universe));
        if let Some(sizes) = search.run() {
            let witness = materialize(m, &search.regions, &sizes);
            debug_assert_eq!(
                ideal_count_ie(&witness, m).expect("m members fit"),
                k.clone()
            );
            return Ok(AlphaRecord { k: k.clone(), alpha: m, witness });
        }
        // Concluding that no m-member witness exists is only sound when
        // every m-member witness would have fit under the universe cap.
        let needed = (m as u64) * max_member;
        if needed > u64::from(max_universe) {
            return Err(OracleError::UniverseCapTooSmall {
                members: m,
                max_universe,
                needed,
            });
        }
    }
    Err(OracleError::BudgetExhausted {
        k: k.clone(),
        max_members,
        max_universe,
    })
}

/// Emits the bounds-gap table for `k = 1..=k_max` as CSV:
/// `k, alpha, lower_bound, block_bound, witness-JSON`.
pub fn write_alpha_csv<W: Write>(
    out: W,
    k_max: u64,
    max_universe: u32,
    max_members: usize,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "alpha", "lower_bound", "block_bound", "witness"])?;
    for k in 1..=k_max {
        let n = Nat::from(k);
        let record = alpha_exhaustive(&n, max_universe, max_members)?;
        w.write_record([
            k.to_string(),
            record.alpha.to_string(),
            lower_bound_terms(&n).to_string(),
            block_bound(&n).to_string(),
            record.witness.to_canonical_json(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::nat;

    fn alpha(k: u64) -> usize {
        alpha_exhaustive(&nat(k), DEFAULT_ALPHA_UNIVERSE, DEFAULT_ALPHA_MEMBERS)
            .unwrap()
            .alpha
    }

    #[test]
    fn alpha_of_one_is_the_trivial_family() {
        let rec = alpha_exhaustive(&nat(1), 12, 4).unwrap();
        assert_eq!(rec.alpha, 1);
        assert_eq!(rec.witness.members().len(), 1);
        assert!(rec.witness.members()[0].is_empty());
    }

    #[test]
    fn alpha_of_three_needs_two_members() {
        assert_eq!(alpha(3), 2);
    }

    #[test]
    fn alpha_of_seven_matches_the_disjoint_pair() {
        let rec = alpha_exhaustive(&nat(7), 12, 4).unwrap();
        assert_eq!(rec.alpha, 2);
        // 4 + 4 - 1: two disjoint 2-element members
        let sizes: Vec<usize> = rec.witness.members().iter().map(|m| m.len()).collect();
        assert_eq!(sizes, vec![2, 2]);
        assert_eq!(rec.universe_size(), 4);
    }

    #[test]
    fn alpha_of_powers_is_one() {
        for q in 0..=5u32 {
            assert_eq!(alpha(1 << q), 1, "2^{q}");
        }
    }

    #[test]
    fn alpha_is_not_monotone() {
        assert!(alpha(7) > alpha(8));
    }

    #[test]
    fn alpha_of_31_needs_a_universe_beyond_six() {
        // The minimal witness is two disjoint 4-element members; a
        // 6-element cap cannot certify that no 2-member witness exists.
        let rec = alpha_exhaustive(&nat(31), 12, 4).unwrap();
        assert_eq!(rec.alpha, 2);
        assert_eq!(rec.universe_size(), 8);
        assert!(matches!(
            alpha_exhaustive(&nat(31), 6, 4),
            Err(OracleError::UniverseCapTooSmall { .. })
        ));
    }

    #[test]
    fn alpha_of_21_is_three() {
        assert_eq!(alpha(21), 3);
    }

    #[test]
    fn rejects_k_beyond_the_ceiling() {
        assert!(matches!(
            alpha_exhaustive(&nat(65), 12, 4),
            Err(OracleError::KTooLarge { .. })
        ));
    }

    #[test]
    fn csv_table_emits_one_row_per_k() {
        let mut buf = Vec::new();
        write_alpha_csv(&mut buf, 8, 12, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "k,alpha,lower_bound,block_bound,witness");
        assert!(lines[7].starts_with("7,2,1,2,"));
        assert!(lines[8].starts_with("8,1,1,2,"));
    }
}
