//! Finite set systems and their generated ideals.
//!
//! A family `S = {S_1, ..., S_t}` generates the ideal
//! `ID(S) = 2^(S_1) ∪ ... ∪ 2^(S_t)`, the downward closure of its members.
//! Elements are `(group, index)` pairs: distinct groups are disjoint copy
//! pools, which makes the disjointness preconditions of the construction
//! combinators checkable by inspection.
//!
//! Two independent exact counters are provided: [`ideal_count_ie`]
//! evaluates the inclusion-exclusion sum over all nonempty sub-collections,
//! and [`ideal_enumerate`] materializes the ideal set by set.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numeric::Nat;
use num_bigint::BigInt;
use num_traits::Zero;

/// Default ceiling on the member count accepted by [`ideal_count_ie`];
/// the counter visits `2^t - 1` sub-collections.
pub const DEFAULT_IE_BUDGET: usize = 30;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family has {members} members, above the inclusion-exclusion budget of {budget}; use certified counting instead")]
    IeBudgetExceeded { members: usize, budget: usize },
    #[error("ideal enumeration exceeded the cap of {cap} sets")]
    EnumerationCapExceeded { cap: usize },
    #[error("invalid set family JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// One element `index_group` of the universe: `index` is the value `w`
/// in the copy set `[w]_group`, so it is always `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub group: u32,
    pub index: u32,
}

impl Element {
    pub fn new(group: u32, index: u32) -> Self {
        assert!(index >= 1, "element indices start at 1");
        Element { group, index }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.group, self.index).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (group, index) = <(u32, u32)>::deserialize(d)?;
        if index == 0 {
            return Err(D::Error::custom("element indices start at 1"));
        }
        Ok(Element { group, index })
    }
}

/// A finite set of elements. Iteration order is the canonical
/// `(group, index)` order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteSet {
    elements: BTreeSet<Element>,
}

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet::default()
    }

    /// The copy set `[w]_group = {1_group, ..., w_group}`.
    pub fn copy_range(group: u32, w: u32) -> Self {
        (1..=w).map(|i| Element::new(group, i)).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }

    pub fn insert(&mut self, e: Element) {
        self.elements.insert(e);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet {
            elements: self.elements.union(&other.elements).copied().collect(),
        }
    }

    pub fn intersection_len(&self, other: &FiniteSet) -> usize {
        self.elements.intersection(&other.elements).count()
    }

    pub fn groups(&self) -> BTreeSet<u32> {
        self.elements.iter().map(|e| e.group).collect()
    }

    pub fn rename_groups(&self, map: &BTreeMap<u32, u32>) -> FiniteSet {
        self.elements
            .iter()
            .map(|e| Element {
                group: *map.get(&e.group).unwrap_or(&e.group),
                index: e.index,
            })
            .collect()
    }
}

impl FromIterator<Element> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        FiniteSet { elements: iter.into_iter().collect() }
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.elements.iter())
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let elements = Vec::<Element>::deserialize(d)?;
        Ok(elements.into_iter().collect())
    }
}

/// A finite family of finite sets. The member order is preserved as given;
/// [`SetFamily::normalize`] produces the canonical antichain form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SetFamily {
    members: Vec<FiniteSet>,
}

impl SetFamily {
    pub fn new(members: Vec<FiniteSet>) -> Self {
        SetFamily { members }
    }

    pub fn members(&self) -> &[FiniteSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Union of all members.
    pub fn universe(&self) -> FiniteSet {
        let mut u = FiniteSet::empty();
        for m in &self.members {
            u = u.union(m);
        }
        u
    }

    pub fn groups(&self) -> BTreeSet<u32> {
        self.members.iter().flat_map(|m| m.groups()).collect()
    }

    /// Canonical member order: by size, then lexicographically by element
    /// sequence. Duplicates are kept; see [`SetFamily::normalize`].
    pub fn canonical_sorted(&self) -> SetFamily {
        let mut members = self.members.clone();
        members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SetFamily { members }
    }

    /// Removes duplicates and members contained in another member, then
    /// sorts canonically. The generated ideal is unchanged.
    pub fn normalize(&self) -> SetFamily {
        let mut members = self.canonical_sorted().members;
        members.dedup();
        let kept: Vec<FiniteSet> = members
            .iter()
            .filter(|m| {
                !members
                    .iter()
                    .any(|other| *m != other && m.is_subset(other))
            })
            .cloned()
            .collect();
        SetFamily { members: kept }
    }

    pub fn rename_groups(&self, map: &BTreeMap<u32, u32>) -> SetFamily {
        SetFamily {
            members: self.members.iter().map(|m| m.rename_groups(map)).collect(),
        }
    }

    /// Bit-exact canonical JSON: members sorted by `(size, lexicographic)`,
    /// elements sorted by `(group, index)`, no whitespace.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&self.canonical_sorted()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<SetFamily, FamilyError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Members rendered as bitmask chunks over an indexed universe.
struct MaskedFamily {
    universe_len: usize,
    words: usize,
    masks: Vec<Vec<u64>>,
}

impl MaskedFamily {
    fn build(fam: &SetFamily) -> Self {
        let universe: Vec<Element> = fam.universe().iter().copied().collect();
        let index: BTreeMap<Element, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        let words = universe.len().div_ceil(64).max(1);
        let masks = fam
            .members()
            .iter()
            .map(|m| {
                let mut mask = vec![0u64; words];
                for e in m.iter() {
                    let i = index[e];
                    mask[i / 64] |= 1 << (i % 64);
                }
                mask
            })
            .collect();
        MaskedFamily { universe_len: universe.len(), words, masks }
    }
}

/// Exact ideal cardinality by the inclusion-exclusion sum
/// `sum over nonempty J of (-1)^(|J|+1) * 2^(|intersection over J|)`.
///
/// The raw sum is evaluated as written over every nonempty sub-collection;
/// signed contributions are bucketed by intersection size and combined at
/// the end, which reassociates but never drops terms.
pub fn ideal_count_ie(fam: &SetFamily, budget: usize) -> Result<Nat, FamilyError> {
    let t = fam.len();
    if t > budget {
        return Err(FamilyError::IeBudgetExceeded { members: t, budget });
    }
    if t == 0 {
        return Ok(Nat::zero());
    }
    let masked = MaskedFamily::build(fam);
    // histogram[s] accumulates the signed number of sub-collections whose
    // intersection has exactly s elements; |entry| <= 2^t fits i64.
    let mut histogram = vec![0i64; masked.universe_len + 1];
    let full = vec![u64::MAX; masked.words];
    fn visit(
        masked: &MaskedFamily,
        histogram: &mut [i64],
        start: usize,
        current: &[u64],
        picked: usize,
    ) {
        for j in start..masked.masks.len() {
            let inter: Vec<u64> = current
                .iter()
                .zip(&masked.masks[j])
                .map(|(a, b)| a & b)
                .collect();
            let size: u32 = inter.iter().map(|w| w.count_ones()).sum();
            let sign = if (picked + 1) % 2 == 1 { 1 } else { -1 };
            histogram[size as usize] += sign;
            visit(masked, histogram, j + 1, &inter, picked + 1);
        }
    }
    visit(&masked, &mut histogram, 0, &full, 0);
    let mut total = BigInt::zero();
    for (size, count) in histogram.iter().enumerate() {
        if *count != 0 {
            total += BigInt::from(*count) << size;
        }
    }
    Ok(total
        .to_biguint()
        .expect("an ideal cardinality is never negative"))
}

/// Materializes `ID(fam)` as an explicit, canonically ordered list of sets.
/// Errors once more than `cap` sets have been discovered.
pub fn ideal_enumerate(fam: &SetFamily, cap: usize) -> Result<Vec<FiniteSet>, FamilyError> {
    let mut seen: BTreeSet<FiniteSet> = BTreeSet::new();
    fn visit(
        seen: &mut BTreeSet<FiniteSet>,
        cap: usize,
        set: &FiniteSet,
    ) -> Result<(), FamilyError> {
        if seen.contains(set) {
            return Ok(());
        }
        if seen.len() >= cap {
            return Err(FamilyError::EnumerationCapExceeded { cap });
        }
        seen.insert(set.clone());
        for e in set.iter() {
            let smaller: FiniteSet = set.iter().filter(|x| *x != e).copied().collect();
            visit(seen, cap, &smaller)?;
        }
        Ok(())
    }
    for m in fam.members() {
        visit(&mut seen, cap, m)?;
    }
    let mut out: Vec<FiniteSet> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
