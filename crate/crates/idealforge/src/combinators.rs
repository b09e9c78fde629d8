//! Certified composition of set families.
//!
//! Two operations combine families while tracking exact ideal
//! cardinalities:
//!
//! * splitting: for families over disjoint element groups,
//!   `|ID(S ∪ T)| = |ID(S)| + |ID(T)| - 1` (only the empty set is shared);
//! * lifting: adjoining `t` fresh elements to every member multiplies the
//!   ideal cardinality by `2^t`.
//!
//! Every constructed family carries a [`BuildTrace`], a derivation tree
//! from which [`recount`] recomputes the cardinality bottom-up while
//! checking each node's side conditions (group disjointness, freshness of
//! lifted elements, leaf counts). A [`CertifiedFamily`] is valid exactly
//! when its recount succeeds and reproduces both its count and its family.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU32, Ordering};

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::BaseCasePlan;
use crate::family::{ideal_count_ie, FiniteSet, SetFamily};
use crate::numeric::Nat;

/// Leaves with at most this many members are re-verified by
/// inclusion-exclusion during a recount.
pub const LEAF_RECOUNT_BUDGET: usize = 16;

/// Square-root base systems with at most this many members get an
/// independent inclusion-exclusion check on top of the closed form.
pub const SQRT_RECOUNT_IE_BUDGET: usize = 20;

/// Monotone source of fresh element groups. Shared by every builder that
/// participates in one construction so that fresh groups never collide.
#[derive(Debug)]
pub struct GroupAllocator {
    next: AtomicU32,
}

impl GroupAllocator {
    /// Starts allocating at group 1.
    pub fn new() -> Self {
        GroupAllocator { next: AtomicU32::new(1) }
    }

    pub fn fresh(&self) -> u32 {
        self.next.fetch_add(1, Ordering::Relaxed)
    }

    /// Guarantees that every future [`GroupAllocator::fresh`] call returns
    /// a group strictly above `g`.
    pub fn ensure_above(&self, g: u32) {
        self.next.fetch_max(g + 1, Ordering::Relaxed);
    }
}

impl Default for GroupAllocator {
    fn default() -> Self {
        GroupAllocator::new()
    }
}

mod nat_string {
    use super::Nat;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| D::Error::custom("expected a decimal natural"))
    }
}

/// How a leaf's count is re-checked during a recount.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafMethod {
    /// Single-member family: the ideal is the member's power set.
    PowerSet,
    /// Count verified by the inclusion-exclusion counter.
    InclusionExclusion,
}

/// Derivation tree certifying the ideal cardinality of a constructed
/// family. Node families are recorded as built, before normalization, so
/// side conditions refer to the constructed sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum BuildTrace {
    Leaf {
        family: SetFamily,
        #[serde(with = "nat_string")]
        count: Nat,
        method: LeafMethod,
    },
    Split {
        left: Box<BuildTrace>,
        right: Box<BuildTrace>,
    },
    Lift {
        child: Box<BuildTrace>,
        added: u64,
        group: u32,
    },
    /// The `S ∪ T` system of the square-root base case; its count is the
    /// closed form determined by `(q, beta)`.
    SqrtBase {
        q: u32,
        #[serde(with = "nat_string")]
        beta: Nat,
        family: SetFamily,
    },
}

impl BuildTrace {
    /// Every element group mentioned anywhere in the trace.
    pub fn groups(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_groups(&mut out);
        out
    }

    fn collect_groups(&self, out: &mut BTreeSet<u32>) {
        match self {
            BuildTrace::Leaf { family, .. } | BuildTrace::SqrtBase { family, .. } => {
                out.extend(family.groups());
            }
            BuildTrace::Split { left, right } => {
                left.collect_groups(out);
                right.collect_groups(out);
            }
            BuildTrace::Lift { child, group, .. } => {
                child.collect_groups(out);
                out.insert(*group);
            }
        }
    }

    fn rename_groups(&self, map: &BTreeMap<u32, u32>) -> BuildTrace {
        match self {
            BuildTrace::Leaf { family, count, method } => BuildTrace::Leaf {
                family: family.rename_groups(map),
                count: count.clone(),
                method: *method,
            },
            BuildTrace::Split { left, right } => BuildTrace::Split {
                left: Box::new(left.rename_groups(map)),
                right: Box::new(right.rename_groups(map)),
            },
            BuildTrace::Lift { child, added, group } => BuildTrace::Lift {
                child: Box::new(child.rename_groups(map)),
                added: *added,
                group: *map.get(group).unwrap_or(group),
            },
            BuildTrace::SqrtBase { q, beta, family } => BuildTrace::SqrtBase {
                q: *q,
                beta: beta.clone(),
                family: family.rename_groups(map),
            },
        }
    }

    /// Node-tagged JSON export with canonical field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    /// Traces nest one level per derivation step, so parsing runs with the
    /// recursion limit lifted and a growable stack.
    pub fn from_json(text: &str) -> Result<BuildTrace, serde_json::Error> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        BuildTrace::deserialize(serde_stacker::Deserializer::new(&mut de))
    }
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("split node: element groups {shared:?} appear on both sides")]
    SplitGroupsOverlap { shared: Vec<u32> },
    #[error("lift node: group {group} already occurs in the child family")]
    LiftGroupNotFresh { group: u32 },
    #[error("a certified family needs at least one member; the minimum is {{∅}} with count 1")]
    EmptyFamily,
    #[error("power-set leaf must have exactly one member, found {members}")]
    LeafNotPowerSet { members: usize },
    #[error("leaf claims count {claimed} but inclusion-exclusion gives {actual}")]
    LeafCountMismatch { claimed: Nat, actual: Nat },
    #[error("leaf with {members} members is beyond the recount budget {budget}")]
    LeafBeyondBudget { members: usize, budget: usize },
    #[error("sqrt base node (q = {q}, beta = {beta}): family does not match the plan")]
    SqrtFamilyMismatch { q: u32, beta: Nat },
    #[error("sqrt base closed form {closed} disagrees with inclusion-exclusion {actual}")]
    SqrtCountMismatch { closed: Nat, actual: Nat },
    #[error("certified count {claimed} disagrees with the trace recount {actual}")]
    CountMismatch { claimed: Nat, actual: Nat },
    #[error("certified family does not match the family rebuilt from its trace")]
    FamilyMismatch,
}

/// A set family paired with its claimed ideal cardinality and the
/// derivation that certifies it. The stored family is normalized; the
/// trace retains the as-built members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedFamily {
    pub family: SetFamily,
    pub count: Nat,
    pub trace: BuildTrace,
    /// Cache of `trace.groups()`, maintained across combinators so deep
    /// builds need not re-walk their traces at every level.
    trace_groups: BTreeSet<u32>,
}

impl CertifiedFamily {
    /// Wraps a directly constructed family as a leaf, computing its count
    /// by the stated method.
    pub fn leaf(family: SetFamily, method: LeafMethod) -> Result<Self, CertificateError> {
        let count = leaf_count(&family, method)?;
        let trace_groups = family.groups();
        Ok(CertifiedFamily {
            family: family.normalize(),
            count: count.clone(),
            trace: BuildTrace::Leaf { family, count, method },
            trace_groups,
        })
    }

    /// Assembles a certified family from parts, recomputing the group
    /// cache from the trace.
    pub(crate) fn from_parts(family: SetFamily, count: Nat, trace: BuildTrace) -> Self {
        let trace_groups = trace.groups();
        CertifiedFamily { family, count, trace, trace_groups }
    }

    /// Number of members after normalization: the term count of the
    /// corresponding monotone DNF.
    pub fn members(&self) -> usize {
        self.family.len()
    }

    /// Recounts the trace and checks that it reproduces both the claimed
    /// count and the stored (normalized) family.
    pub fn verify(&self) -> Result<(), CertificateError> {
        let (count, family) = recount_with_family(&self.trace)?;
        if count != self.count {
            return Err(CertificateError::CountMismatch {
                claimed: self.count.clone(),
                actual: count,
            });
        }
        if family.normalize() != self.family {
            return Err(CertificateError::FamilyMismatch);
        }
        Ok(())
    }

    fn rename_groups(&self, map: &BTreeMap<u32, u32>) -> CertifiedFamily {
        CertifiedFamily {
            family: self.family.rename_groups(map),
            count: self.count.clone(),
            trace: self.trace.rename_groups(map),
            trace_groups: self
                .trace_groups
                .iter()
                .map(|g| *map.get(g).unwrap_or(g))
                .collect(),
        }
    }
}

/// Union of two normalized families over disjoint element groups. A
/// nonempty member of one side can never contain a member of the other,
/// so only empty members need absorbing; the result is the same antichain
/// `normalize` would produce.
fn merge_disjoint_normalized(a: &SetFamily, b: &SetFamily) -> SetFamily {
    let mut members: Vec<FiniteSet> = a
        .members()
        .iter()
        .chain(b.members().iter())
        .cloned()
        .collect();
    if members.len() > 1 {
        members.retain(|m| !m.is_empty());
        if members.is_empty() {
            members.push(FiniteSet::empty());
        }
    }
    let merged = SetFamily::new(members).canonical_sorted();
    debug_assert!(merged.len() > 64 || {
        let mut all = a.members().to_vec();
        all.extend(b.members().iter().cloned());
        merged == SetFamily::new(all).normalize()
    });
    merged
}

fn leaf_count(family: &SetFamily, method: LeafMethod) -> Result<Nat, CertificateError> {
    if family.is_empty() {
        return Err(CertificateError::EmptyFamily);
    }
    match method {
        LeafMethod::PowerSet => {
            if family.len() != 1 {
                return Err(CertificateError::LeafNotPowerSet { members: family.len() });
            }
            Ok(Nat::one() << family.members()[0].len())
        }
        LeafMethod::InclusionExclusion => ideal_count_ie(family, LEAF_RECOUNT_BUDGET)
            .map_err(|_| CertificateError::LeafBeyondBudget {
                members: family.len(),
                budget: LEAF_RECOUNT_BUDGET,
            }),
    }
}

/// Combines two certified families over disjoint element groups into one
/// whose ideal cardinality is `a.count + b.count - 1`.
///
/// Disjointness is repaired, not rejected: if the right side reuses any of
/// the left side's groups, those groups are re-homed to fresh ones first.
pub fn split(a: CertifiedFamily, b: CertifiedFamily, alloc: &GroupAllocator) -> CertifiedFamily {
    let colliding: Vec<u32> = a
        .trace_groups
        .intersection(&b.trace_groups)
        .copied()
        .collect();
    let b = if colliding.is_empty() {
        b
    } else {
        let top = a
            .trace_groups
            .iter()
            .chain(b.trace_groups.iter())
            .max()
            .copied()
            .unwrap_or(0);
        alloc.ensure_above(top);
        let map: BTreeMap<u32, u32> = colliding.iter().map(|g| (*g, alloc.fresh())).collect();
        b.rename_groups(&map)
    };
    let family = merge_disjoint_normalized(&a.family, &b.family);
    let count = &a.count + &b.count - Nat::one();
    let mut trace_groups = a.trace_groups;
    trace_groups.extend(b.trace_groups.iter().copied());
    CertifiedFamily {
        family,
        count,
        trace: BuildTrace::Split {
            left: Box::new(a.trace),
            right: Box::new(b.trace),
        },
        trace_groups,
    }
}

/// Adjoins `t` elements of a fresh group to every member, multiplying the
/// ideal cardinality by `2^t`. `t = 0` allocates an (empty) fresh group
/// and leaves the family unchanged.
pub fn lift(child: CertifiedFamily, t: u64, alloc: &GroupAllocator) -> CertifiedFamily {
    if let Some(top) = child.trace_groups.iter().max() {
        alloc.ensure_above(*top);
    }
    let group = alloc.fresh();
    let x = FiniteSet::copy_range(group, u32::try_from(t).expect("lift width fits u32"));
    // adjoining X preserves containment both ways, so a normalized child
    // stays an antichain; only the canonical order needs restoring
    let members: Vec<FiniteSet> = child
        .family
        .members()
        .iter()
        .map(|m| m.union(&x))
        .collect();
    let count = &child.count << t;
    let mut trace_groups = child.trace_groups;
    trace_groups.insert(group);
    CertifiedFamily {
        family: SetFamily::new(members).canonical_sorted(),
        count,
        trace: BuildTrace::Lift {
            child: Box::new(child.trace),
            added: t,
            group,
        },
        trace_groups,
    }
}

/// Recomputes the certified count from the trace alone.
pub fn recount(trace: &BuildTrace) -> Result<Nat, CertificateError> {
    recount_with_family(trace).map(|(count, _)| count)
}

/// Recomputes the count and the as-built family bottom-up, re-checking
/// every node's side conditions. Fails with the offending node and
/// condition on any violation.
pub fn recount_with_family(trace: &BuildTrace) -> Result<(Nat, SetFamily), CertificateError> {
    let (count, members, _) = recount_node(trace)?;
    Ok((count, SetFamily::new(members)))
}

fn recount_node(
    trace: &BuildTrace,
) -> Result<(Nat, Vec<FiniteSet>, BTreeSet<u32>), CertificateError> {
    match trace {
        BuildTrace::Leaf { family, count, method } => {
            let actual = leaf_count(family, *method)?;
            if actual != *count {
                return Err(CertificateError::LeafCountMismatch {
                    claimed: count.clone(),
                    actual,
                });
            }
            Ok((count.clone(), family.members().to_vec(), family.groups()))
        }
        BuildTrace::Split { left, right } => {
            let (lc, mut lm, lg) = recount_node(left)?;
            let (rc, rm, rg) = recount_node(right)?;
            let shared: Vec<u32> = lg.intersection(&rg).copied().collect();
            if !shared.is_empty() {
                return Err(CertificateError::SplitGroupsOverlap { shared });
            }
            lm.extend(rm);
            let mut groups = lg;
            groups.extend(rg);
            Ok((lc + rc - Nat::one(), lm, groups))
        }
        BuildTrace::Lift { child, added, group } => {
            let (c, members, mut groups) = recount_node(child)?;
            if groups.contains(group) {
                return Err(CertificateError::LiftGroupNotFresh { group: *group });
            }
            let x = FiniteSet::copy_range(*group, u32::try_from(*added).expect("fits"));
            let members: Vec<FiniteSet> = members.iter().map(|m| m.union(&x)).collect();
            groups.insert(*group);
            Ok((c << *added, members, groups))
        }
        BuildTrace::SqrtBase { q, beta, family } => {
            let plan = BaseCasePlan::new(*q, beta);
            let expected = plan.system_family();
            // The build re-homed the plan's literal groups to fresh ones in
            // ascending order; reconstruct the same bijection and compare.
            let lit: Vec<u32> = expected.groups().into_iter().collect();
            let groups = family.groups();
            let sto: Vec<u32> = groups.iter().copied().collect();
            if lit.len() != sto.len() {
                return Err(CertificateError::SqrtFamilyMismatch {
                    q: *q,
                    beta: beta.clone(),
                });
            }
            let map: BTreeMap<u32, u32> = lit.into_iter().zip(sto).collect();
            if expected.rename_groups(&map) != *family {
                return Err(CertificateError::SqrtFamilyMismatch {
                    q: *q,
                    beta: beta.clone(),
                });
            }
            let closed = plan.system_ideal_count();
            if family.len() <= SQRT_RECOUNT_IE_BUDGET {
                let actual = ideal_count_ie(family, SQRT_RECOUNT_IE_BUDGET)
                    .expect("within budget by the check above");
                if actual != closed {
                    return Err(CertificateError::SqrtCountMismatch { closed, actual });
                }
            }
            Ok((closed, family.members().to_vec(), groups))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ideal_enumerate, DEFAULT_IE_BUDGET};
    use crate::numeric::nat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn power_leaf(set: FiniteSet) -> CertifiedFamily {
        CertifiedFamily::leaf(SetFamily::new(vec![set]), LeafMethod::PowerSet).unwrap()
    }

    fn trivial_leaf() -> CertifiedFamily {
        power_leaf(FiniteSet::empty())
    }

    #[test]
    fn split_counts_add_minus_one() {
        let alloc = GroupAllocator::new();
        // family for 6 over groups 1, 2
        let six = CertifiedFamily::leaf(
            SetFamily::new(vec![
                FiniteSet::copy_range(1, 2),
                FiniteSet::copy_range(2, 1).union(&FiniteSet::copy_range(1, 1)),
            ]),
            LeafMethod::InclusionExclusion,
        )
        .unwrap();
        assert_eq!(six.count, nat(6));
        alloc.ensure_above(2);
        let single = power_leaf(FiniteSet::copy_range(alloc.fresh(), 1));
        let seven = split(six.clone(), single, &alloc);
        assert_eq!(seven.count, nat(7));
        assert_eq!(seven.members(), 3);
        assert_eq!(
            ideal_enumerate(&seven.family, 100).unwrap().len(),
            7,
            "split result enumerates to its certified count"
        );
        seven.verify().unwrap();

        // {∅} split {{x}} gives 2
        let two = split(trivial_leaf(), power_leaf(FiniteSet::copy_range(9, 1)), &alloc);
        assert_eq!(two.count, nat(2));

        // family for 6 with family for 4: 6 + 4 - 1 = 9
        let four = power_leaf(FiniteSet::copy_range(50, 2));
        let nine = split(six, four, &alloc);
        assert_eq!(nine.count, nat(9));
        assert_eq!(ideal_enumerate(&nine.family, 100).unwrap().len(), 9);
        nine.verify().unwrap();
    }

    #[test]
    fn split_repairs_group_collisions() {
        let alloc = GroupAllocator::new();
        let a = power_leaf(FiniteSet::copy_range(1, 2));
        let b = power_leaf(FiniteSet::copy_range(1, 3));
        let s = split(a, b, &alloc);
        assert_eq!(s.count, nat(4 + 8 - 1));
        s.verify().unwrap();
        assert_eq!(
            ideal_count_ie(&s.family, DEFAULT_IE_BUDGET).unwrap(),
            nat(11)
        );
    }

    #[test]
    fn lift_multiplies_by_a_power_of_two() {
        let alloc = GroupAllocator::new();
        let three = CertifiedFamily::leaf(
            SetFamily::new(vec![FiniteSet::copy_range(1, 1), FiniteSet::copy_range(2, 1)]),
            LeafMethod::InclusionExclusion,
        )
        .unwrap();
        assert_eq!(three.count, nat(3));
        alloc.ensure_above(2);
        let twelve = lift(three.clone(), 2, &alloc);
        assert_eq!(twelve.count, nat(12));
        assert_eq!(ideal_enumerate(&twelve.family, 100).unwrap().len(), 12);
        twelve.verify().unwrap();

        let same = lift(three.clone(), 0, &alloc);
        assert_eq!(same.count, nat(3));
        assert_eq!(same.family, three.family);
        same.verify().unwrap();

        let thirty_two = lift(trivial_leaf(), 5, &alloc);
        assert_eq!(thirty_two.count, nat(32));
        assert_eq!(thirty_two.members(), 1);
    }

    #[test]
    fn recount_examples() {
        assert_eq!(recount(&trivial_leaf().trace).unwrap(), nat(1));
        let alloc = GroupAllocator::new();
        let three = CertifiedFamily::leaf(
            SetFamily::new(vec![FiniteSet::copy_range(1, 1), FiniteSet::copy_range(2, 1)]),
            LeafMethod::InclusionExclusion,
        )
        .unwrap();
        alloc.ensure_above(2);
        let lifted = lift(three, 2, &alloc);
        assert_eq!(recount(&lifted.trace).unwrap(), nat(12));
    }

    #[test]
    fn empty_families_are_not_certifiable() {
        assert!(matches!(
            CertifiedFamily::leaf(SetFamily::default(), LeafMethod::InclusionExclusion),
            Err(CertificateError::EmptyFamily)
        ));
    }

    #[test]
    fn recount_rejects_tampered_leaf_counts() {
        let mut leaf = power_leaf(FiniteSet::copy_range(1, 3));
        leaf.count = nat(9);
        if let BuildTrace::Leaf { count, .. } = &mut leaf.trace {
            *count = nat(9);
        }
        assert!(matches!(
            recount(&leaf.trace),
            Err(CertificateError::LeafCountMismatch { .. })
        ));
        assert!(leaf.verify().is_err());
    }

    #[test]
    fn recount_rejects_overlapping_split_sides() {
        let a = power_leaf(FiniteSet::copy_range(1, 2));
        let b = power_leaf(FiniteSet::copy_range(1, 3));
        let forged = BuildTrace::Split {
            left: Box::new(a.trace),
            right: Box::new(b.trace),
        };
        assert!(matches!(
            recount(&forged),
            Err(CertificateError::SplitGroupsOverlap { .. })
        ));
    }

    #[test]
    fn recount_rejects_stale_lift_groups() {
        let child = power_leaf(FiniteSet::copy_range(4, 2));
        let forged = BuildTrace::Lift {
            child: Box::new(child.trace),
            added: 1,
            group: 4,
        };
        assert!(matches!(
            recount(&forged),
            Err(CertificateError::LiftGroupNotFresh { group: 4 })
        ));
    }

    #[test]
    fn split_count_is_commutative() {
        let mk = |g: u32, w: u32| power_leaf(FiniteSet::copy_range(g, w));
        let ab = split(mk(1, 2), mk(2, 3), &GroupAllocator::new());
        let ba = split(mk(2, 3), mk(1, 2), &GroupAllocator::new());
        assert_eq!(ab.count, ba.count);
    }

    #[test]
    fn lift_composes_additively() {
        let alloc = GroupAllocator::new();
        let base = CertifiedFamily::leaf(
            SetFamily::new(vec![FiniteSet::copy_range(1, 1), FiniteSet::copy_range(2, 2)]),
            LeafMethod::InclusionExclusion,
        )
        .unwrap();
        alloc.ensure_above(2);
        let a = lift(lift(base.clone(), 2, &alloc), 3, &alloc);
        let b = lift(base, 5, &alloc);
        assert_eq!(a.count, b.count);
    }

    #[test]
    fn trace_json_round_trips() {
        let alloc = GroupAllocator::new();
        let a = power_leaf(FiniteSet::copy_range(1, 2));
        let b = power_leaf(FiniteSet::copy_range(2, 1));
        let s = lift(split(a, b, &alloc), 1, &alloc);
        let json = s.trace.to_json();
        let back = BuildTrace::from_json(&json).unwrap();
        assert_eq!(back, s.trace);
        assert_eq!(recount(&back).unwrap(), s.count);
    }

    /// Random composition trees over tiny leaves: recount, the
    /// inclusion-exclusion counter and full enumeration must agree.
    #[test]
    fn random_composition_trees_agree_with_both_counters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1dea1f0e);
        for _ in 0..1_000 {
            let alloc = GroupAllocator::new();
            let tree = random_tree(&mut rng, &alloc, 0);
            tree.verify().unwrap();
            let ie = ideal_count_ie(&tree.family, DEFAULT_IE_BUDGET).unwrap();
            assert_eq!(ie, tree.count);
            let listed = ideal_enumerate(&tree.family, 1 << 16).unwrap();
            assert_eq!(nat(listed.len() as u64), tree.count);
        }
    }

    fn random_leaf(rng: &mut ChaCha8Rng, alloc: &GroupAllocator) -> CertifiedFamily {
        let members = rng.random_range(1..=3usize);
        let fam = SetFamily::new(
            (0..members)
                .map(|_| {
                    let g = alloc.fresh();
                    let size = rng.random_range(0..=2u32);
                    FiniteSet::copy_range(g, size)
                })
                .collect(),
        );
        CertifiedFamily::leaf(fam, LeafMethod::InclusionExclusion).unwrap()
    }

    fn random_tree(rng: &mut ChaCha8Rng, alloc: &GroupAllocator, depth: u32) -> CertifiedFamily {
        if depth >= 4 || rng.random_bool(0.4) {
            return random_leaf(rng, alloc);
        }
        if rng.random_bool(0.5) {
            let a = random_tree(rng, alloc, depth + 1);
            let b = random_tree(rng, alloc, depth + 1);
            split(a, b, alloc)
        } else {
            let child = random_tree(rng, alloc, depth + 1);
            lift(child, rng.random_range(0..=2u64), alloc)
        }
    }

    /// Member-count ledger from the lemmas: splitting adds member counts,
    /// lifting preserves them (both before normalization).
    #[test]
    fn member_count_ledger() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let alloc = GroupAllocator::new();
            let a = random_leaf(&mut rng, &alloc);
            let b = random_leaf(&mut rng, &alloc);
            let (na, nb) = (a.family.len(), b.family.len());
            let s = split(a, b, &alloc);
            assert!(s.family.len() <= na + nb);
            let before = s.family.len();
            let l = lift(s, 2, &alloc);
            assert_eq!(l.family.len(), before);
        }
    }
}
