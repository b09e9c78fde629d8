//! Constructions of certified families with a prescribed ideal cardinality.
//!
//! * [`build_power`]: one generator of size `q` gives exactly `2^q`.
//! * [`build_block`]: induction on the block-binary representation gives
//!   every `k >= 1` with at most `bl(k) + 1` generators.
//! * [`basecase_sqrt`]: for `m = 2^(3q^2) + beta` with `beta < 2^(q^2)`,
//!   a grid system of `2q` sets plus two block constructions gives `m`
//!   with at most `(q+1)*ceil(log2 q) + 4q + 6` generators.
//! * [`build_sqrt`] / [`build_best`]: the full pipeline behind the
//!   square-root upper bound, falling back to the block construction
//!   whenever that bound is already met by `bl(k) + 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinators::{
    lift, split, BuildTrace, CertifiedFamily, GroupAllocator, LeafMethod, SQRT_RECOUNT_IE_BUDGET,
};
use crate::family::{ideal_count_ie, FiniteSet, SetFamily};
use crate::numeric::{block_bound, block_count, block_rep, ceil_log2, sqrt_bound, Nat};

/// One generator `[q]_g` over a fresh group: the ideal is its power set,
/// `2^q` sets.
pub fn build_power(q: u64, alloc: &GroupAllocator) -> CertifiedFamily {
    let group = alloc.fresh();
    let member = FiniteSet::copy_range(group, u32::try_from(q).expect("power size fits u32"));
    CertifiedFamily::leaf(SetFamily::new(vec![member]), LeafMethod::PowerSet)
        .expect("a single member is a valid power-set leaf")
}

/// The one-block base family for `k = 2^(q+l) - 2^l`:
/// `S1 = [q+l-1]_g1`, `S2 = [q-1]_g2 ⊔ [l]_g1`.
fn block_base(q: u64, l: u64, alloc: &GroupAllocator) -> CertifiedFamily {
    debug_assert!(q >= 1);
    let g1 = alloc.fresh();
    let g2 = alloc.fresh();
    let s1 = FiniteSet::copy_range(g1, u32::try_from(q + l - 1).expect("fits u32"));
    let s2 = FiniteSet::copy_range(g2, u32::try_from(q - 1).expect("fits u32"))
        .union(&FiniteSet::copy_range(g1, u32::try_from(l).expect("fits u32")));
    let fam = CertifiedFamily::leaf(SetFamily::new(vec![s1, s2]), LeafMethod::InclusionExclusion)
        .expect("two members are within the leaf budget");
    let expected = (Nat::one() << (q + l)) - (Nat::one() << l);
    assert_eq!(fam.count, expected, "block base case count");
    fam
}

/// Builds a certified family with ideal cardinality exactly `k` and at
/// most `bl(k) + 1` members, by induction on the block count: strip the
/// trailing zeros with a lift, split off the least significant one-run
/// against a power family, recurse on the rest.
pub fn build_block(k: &Nat, alloc: &GroupAllocator) -> CertifiedFamily {
    assert!(!k.is_zero(), "constructions are defined for k >= 1");
    let rep = block_rep(k);
    let out = if rep.block_count() == 1 {
        let b = rep.last();
        block_base(b.ones, b.zeros, alloc)
    } else {
        let b = rep.last();
        let (q1, l1) = (b.ones, b.zeros);
        let shifted = k >> l1;
        let low_run = (Nat::one() << q1) - Nat::one();
        let rest = &shifted - &low_run;
        debug_assert_eq!(block_count(&rest), rep.block_count() - 1);
        let upper = build_block(&rest, alloc);
        let power = build_power(q1, alloc);
        let joined = split(upper, power, alloc);
        debug_assert_eq!(joined.count, shifted);
        if l1 == 0 {
            joined
        } else {
            lift(joined, l1, alloc)
        }
    };
    assert_eq!(&out.count, k, "block construction count");
    assert!(
        out.members() as u64 <= block_bound(k),
        "block construction produced {} members for bl(k)+1 = {}",
        out.members(),
        block_bound(k)
    );
    out
}

/// The unique decomposition `k = 2^(3q^2) + gamma * 2^(q^2) + beta` with
/// `2^(3q^2) <= k < 2^(3(q+1)^2)` and `0 <= beta < 2^(q^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtDecomposition {
    pub q: u32,
    pub gamma: Nat,
    pub beta: Nat,
}

/// Decomposes `k >= 8` as above. Panics below 8, where no `q >= 1` exists;
/// callers should use [`build_block`] there.
pub fn decompose_sqrt(k: &Nat) -> SqrtDecomposition {
    assert!(*k >= Nat::from(8u32), "sqrt decomposition needs k >= 8");
    let floor_log = k.bits() - 1;
    let q = (floor_log / 3).isqrt();
    debug_assert!(3 * q * q <= floor_log && 3 * (q + 1) * (q + 1) > floor_log);
    let q2 = q * q;
    let residue = k - (Nat::one() << (3 * q2));
    let gamma = &residue >> q2;
    let beta = residue - (&gamma << q2);
    SqrtDecomposition {
        q: u32::try_from(q).expect("q fits u32"),
        gamma,
        beta,
    }
}

/// The grid system behind the square-root base case for
/// `m = 2^(3q^2) + beta`, together with every derived quantity the
/// assembly and its certificate need.
///
/// Grid sets, for `i, j` in `[0, q-1]` (bit positions of `beta` are
/// 1-indexed from the least significant bit):
///
/// * bit `jq+i+1` of `beta` set: `F_ij = ∅`;
/// * bit clear: `F_ij = [i]_(jq+i)`, so `|F_ij| = i`.
///
/// Members: `S_i = (∪_j F_ij) ⊔ [q^2]` and `T_j = (∪_i F_ij) ⊔ [jq]`,
/// with `[q^2]` and `[jq]` in group 0.
#[derive(Debug, Clone)]
pub struct BaseCasePlan {
    q: u32,
    beta: Nat,
    f_grid: Vec<Vec<FiniteSet>>,
    s_sets: Vec<FiniteSet>,
    t_sets: Vec<FiniteSet>,
    a_coeffs: Vec<i64>,
    correction: Nat,
    t1: Nat,
    t2: Nat,
}

impl BaseCasePlan {
    pub fn new(q: u32, beta: &Nat) -> Self {
        assert!(q >= 2, "the base case needs q >= 2; use the block construction below");
        let q = u64::from(q);
        let q2 = q * q;
        assert!(beta.bits() <= q2, "beta must satisfy beta < 2^(q^2)");

        let bit = |pos: u64| beta.bit(pos);
        let f_grid: Vec<Vec<FiniteSet>> = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        let pos = j * q + i;
                        if bit(pos) {
                            FiniteSet::empty()
                        } else {
                            FiniteSet::copy_range(
                                u32::try_from(pos).expect("group fits u32"),
                                u32::try_from(i).expect("index fits u32"),
                            )
                        }
                    })
                    .collect()
            })
            .collect();

        let base = |w: u64| FiniteSet::copy_range(0, u32::try_from(w).expect("fits u32"));
        let s_sets: Vec<FiniteSet> = (0..q)
            .map(|i| {
                let mut s = base(q2);
                for j in 0..q {
                    s = s.union(&f_grid[i as usize][j as usize]);
                }
                s
            })
            .collect();
        let t_sets: Vec<FiniteSet> = (0..q)
            .map(|j| {
                let mut t = base(j * q);
                for i in 0..q {
                    t = t.union(&f_grid[i as usize][j as usize]);
                }
                t
            })
            .collect();

        // |S_i ∩ T_j| = jq + |F_ij|
        for i in 0..q as usize {
            for j in 0..q as usize {
                debug_assert_eq!(
                    s_sets[i].intersection_len(&t_sets[j]) as u64,
                    j as u64 * q + f_grid[i][j].len() as u64
                );
            }
        }

        let pow = |e: u64| BigInt::one() << e;
        let s_pow: BigInt = s_sets.iter().map(|s| pow(s.len() as u64)).sum();
        let t_pow: BigInt = t_sets.iter().map(|t| pow(t.len() as u64)).sum();
        let grid_pow: BigInt = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .map(|(i, j)| pow(j * q + f_grid[i as usize][j as usize].len() as u64))
            .sum();
        let column_pow: BigInt = (0..q).map(|j| pow(j * q)).sum();
        let tail = BigInt::from(q - 1) * (&column_pow - pow(q2));

        let system_count = &s_pow + &t_pow - &grid_pow + &tail;
        assert!(system_count.is_positive());

        let correction = (pow(3 * q2 - 1) - &s_pow - &t_pow + pow(q2))
            .to_biguint()
            .expect("the leading power dominates the correction");
        assert!(
            block_count(&correction) as u64 <= 2 * q + 2,
            "bl({correction}) exceeds 2q+2 = {}",
            2 * q + 2
        );

        let t1 = (system_count.clone() + BigInt::from(correction.clone()) - BigInt::one())
            .to_biguint()
            .expect("t1 is positive");

        let f0_pow: BigInt = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .filter(|(i, j)| bit(j * q + i))
            .map(|(_, j)| pow(j * q))
            .sum();
        let t2 = (pow(3 * q2 - 1) + &f0_pow - &tail)
            .to_biguint()
            .expect("t2 is positive");

        // t1 + t2 = 2^(3q^2) + beta
        let m = (Nat::one() << (3 * q2)) + beta;
        assert_eq!(&t1 + &t2, m, "t1 + t2 must reassemble m");

        // t2 = 2^(3q^2 - 1) - sum_j a_j 2^(jq), |a_j| <= q-1, a_q = -(q-1)
        let mut a_coeffs: Vec<i64> = (0..q)
            .map(|j| {
                let b_j = (0..q).filter(|i| bit(j * q + i)).count() as i64;
                (q as i64 - 1) - b_j
            })
            .collect();
        a_coeffs.push(-(q as i64 - 1));
        assert!(a_coeffs[..q as usize].iter().all(|a| -1 <= *a && *a < q as i64));
        let mut t2_check = pow(3 * q2 - 1);
        for (j, a) in a_coeffs.iter().enumerate() {
            t2_check -= BigInt::from(*a) << (j as u64 * q);
        }
        assert_eq!(t2_check.to_biguint().unwrap(), t2);

        let filler_bl_bound = (q + 1) * ceil_log2(q) + 2;
        let t2_plus_1 = &t2 + Nat::one();
        assert!(
            block_count(&t2_plus_1) as u64 <= filler_bl_bound,
            "bl({t2_plus_1}) exceeds (q+1)ceil(log2 q)+2 = {filler_bl_bound}"
        );

        BaseCasePlan {
            q: u32::try_from(q).unwrap(),
            beta: beta.clone(),
            f_grid,
            s_sets,
            t_sets,
            a_coeffs,
            correction,
            t1,
            t2,
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn beta(&self) -> &Nat {
        &self.beta
    }

    pub fn f_set(&self, i: usize, j: usize) -> &FiniteSet {
        &self.f_grid[i][j]
    }

    /// `S_0, ..., S_(q-1), T_0, ..., T_(q-1)` in order, over the literal
    /// groups described in the type docs.
    pub fn system_family(&self) -> SetFamily {
        let mut members = self.s_sets.clone();
        members.extend(self.t_sets.iter().cloned());
        SetFamily::new(members)
    }

    /// Closed form for `|ID(S ∪ T)|`:
    /// `sum 2^|S_i| + sum 2^|T_j| - sum_(i,j) 2^(jq + |F_ij|)
    ///  + (q-1)(sum_j 2^(jq) - 2^(q^2))`.
    pub fn system_ideal_count(&self) -> Nat {
        let q = u64::from(self.q);
        let pow = |e: u64| BigInt::one() << e;
        let s_pow: BigInt = self.s_sets.iter().map(|s| pow(s.len() as u64)).sum();
        let t_pow: BigInt = self.t_sets.iter().map(|t| pow(t.len() as u64)).sum();
        let grid_pow: BigInt = (0..q)
            .flat_map(|i| (0..q).map(move |j| (i, j)))
            .map(|(i, j)| pow(j * q + self.f_grid[i as usize][j as usize].len() as u64))
            .sum();
        let column_pow: BigInt = (0..q).map(|j| pow(j * q)).sum();
        let tail = BigInt::from(q - 1) * (column_pow - pow(q * q));
        (s_pow + t_pow - grid_pow + tail)
            .to_biguint()
            .expect("the system ideal is nonempty")
    }

    /// The block-realizable remainder
    /// `2^(3q^2-1) - sum 2^|S_i| - sum 2^|T_j| + 2^(q^2)`; its block count
    /// is at most `2q + 2`.
    pub fn correction(&self) -> &Nat {
        &self.correction
    }

    /// `|ID(S ∪ T)| + correction - 1`; realizable with at most `4q + 3`
    /// members.
    pub fn t1(&self) -> &Nat {
        &self.t1
    }

    /// `m - t1`; `t2 + 1` is block-realizable with at most
    /// `(q+1)ceil(log2 q) + 3` members.
    pub fn t2(&self) -> &Nat {
        &self.t2
    }

    /// Coefficients `a_0, ..., a_q` with
    /// `t2 = 2^(3q^2-1) - sum_j a_j 2^(jq)`.
    pub fn a_coeffs(&self) -> &[i64] {
        &self.a_coeffs
    }

    /// The base case's member bound `(q+1)*ceil(log2 q) + 4q + 6`.
    pub fn member_bound(q: u32) -> u64 {
        let q = u64::from(q);
        (q + 1) * ceil_log2(q) + 4 * q + 6
    }
}

/// Builds a certified family for `m = 2^(3q^2) + beta`, `q >= 2`,
/// `beta < 2^(q^2)`, with at most `(q+1)*ceil(log2 q) + 4q + 6` members:
/// the grid system gives `|ID(S ∪ T)|` by closed form, a block family for
/// the correction brings the total to `t1`, and a block family for
/// `t2 + 1` completes `m = t1 + t2`.
pub fn basecase_sqrt(q: u32, beta: &Nat, alloc: &GroupAllocator) -> CertifiedFamily {
    let plan = BaseCasePlan::new(q, beta);
    let closed = plan.system_ideal_count();

    let literal = plan.system_family();
    let map = literal
        .groups()
        .into_iter()
        .map(|g| (g, alloc.fresh()))
        .collect();
    let st_family = literal.rename_groups(&map);
    if st_family.len() <= SQRT_RECOUNT_IE_BUDGET {
        let ie = ideal_count_ie(&st_family, SQRT_RECOUNT_IE_BUDGET).expect("within budget");
        assert_eq!(ie, closed, "closed form disagrees with inclusion-exclusion");
    }
    let st = CertifiedFamily::from_parts(
        st_family.normalize(),
        closed,
        BuildTrace::SqrtBase {
            q,
            beta: beta.clone(),
            family: st_family,
        },
    );

    let correction = build_block(plan.correction(), alloc);
    let t1 = split(st, correction, alloc);
    assert_eq!(&t1.count, plan.t1(), "t1 assembly count");
    assert!(
        t1.members() as u64 <= 4 * u64::from(q) + 3,
        "t1 family exceeds 4q+3 members"
    );

    let filler = build_block(&(plan.t2() + Nat::one()), alloc);
    let out = split(t1, filler, alloc);
    let m = (Nat::one() << (3 * u64::from(q) * u64::from(q))) + beta;
    assert_eq!(out.count, m, "base case total count");
    assert!(
        out.members() as u64 <= BaseCasePlan::member_bound(q),
        "base case produced {} members, bound is {}",
        out.members(),
        BaseCasePlan::member_bound(q)
    );
    out
}

/// Whether [`build_sqrt`] would take the decomposition path for this `k`:
/// the block bound must fail to meet the square-root bound, and `k` must
/// be large enough (`k >= 2^12`) for a `q >= 2` base case to exist.
pub fn sqrt_recursion_applies(k: &Nat) -> bool {
    if k.bits() < 13 {
        return false;
    }
    match sqrt_bound(k) {
        Some(bound) => block_bound(k) > bound,
        None => false,
    }
}

/// The decomposition recursion: base case for `2^(3q^2) + beta`, recurse
/// on `gamma`, lift by `q^2`, add one singleton family, and split.
pub(crate) fn sqrt_recurse(k: &Nat, alloc: &GroupAllocator) -> CertifiedFamily {
    let d = decompose_sqrt(k);
    assert!(d.q >= 2, "recursion requires k >= 2^12");
    let base = basecase_sqrt(d.q, &d.beta, alloc);
    if d.gamma.is_zero() {
        assert_eq!(&base.count, k);
        return base;
    }
    let q2 = u64::from(d.q) * u64::from(d.q);
    let gamma_family = build_best(&d.gamma);
    let lifted = lift(gamma_family, q2, alloc);
    let bump = split(lifted, build_power(1, alloc), alloc);
    let out = split(base, bump, alloc);
    assert_eq!(&out.count, k, "sqrt recursion count");
    out
}

/// Builds a certified family for `k >= 3` along the square-root strategy.
/// When `bl(k) + 1` already satisfies the square-root bound — which holds
/// for every `k` of a size this tool can materialize — the block
/// construction is used directly, keeping the member count within the
/// bound either way.
pub fn build_sqrt(k: &Nat, alloc: &GroupAllocator) -> CertifiedFamily {
    assert!(*k >= Nat::from(3u32), "the square-root bound starts at k = 3");
    if sqrt_recursion_applies(k) {
        sqrt_recurse(k, alloc)
    } else {
        build_block(k, alloc)
    }
}

/// Runs the applicable constructions for `k >= 1` and returns the one
/// with the fewest members after normalization, preferring the block
/// construction on ties (it uses the smaller universe).
pub fn build_best(k: &Nat) -> CertifiedFamily {
    let block = build_block(k, &GroupAllocator::new());
    if *k >= Nat::from(3u32) && sqrt_recursion_applies(k) {
        let sqrt = build_sqrt(k, &GroupAllocator::new());
        if sqrt.members() < block.members() {
            return sqrt;
        }
    }
    block
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::recount;
    use crate::family::{ideal_enumerate, DEFAULT_IE_BUDGET};
    use crate::numeric::nat;

    #[test]
    fn build_power_examples() {
        let alloc = GroupAllocator::new();
        let one = build_power(0, &alloc);
        assert_eq!(one.count, nat(1));
        assert_eq!(one.members(), 1);
        assert!(one.family.members()[0].is_empty());

        let eight = build_power(3, &alloc);
        assert_eq!(eight.count, nat(8));
        assert_eq!(eight.members(), 1);

        assert_eq!(build_power(10, &alloc).count, nat(1024));
    }

    #[test]
    fn build_block_of_6_matches_the_one_block_form() {
        let f = build_block(&nat(6), &GroupAllocator::new());
        assert_eq!(f.count, nat(6));
        assert_eq!(f.members(), 2);
        let sizes: Vec<usize> = f.family.members().iter().map(|m| m.len()).collect();
        assert_eq!(sizes, vec![2, 2]);
        assert_eq!(
            f.family.members()[0].intersection_len(&f.family.members()[1]),
            1
        );
        f.verify().unwrap();
    }

    #[test]
    fn build_block_of_a_power_merges_to_one_member() {
        for e in [0u64, 1, 5, 16, 64] {
            let k = Nat::one() << e;
            let f = build_block(&k, &GroupAllocator::new());
            assert_eq!(f.count, k);
            assert_eq!(f.members(), 1, "2^{e} should normalize to one member");
        }
    }

    #[test]
    fn build_block_of_49() {
        let f = build_block(&nat(49), &GroupAllocator::new());
        assert_eq!(f.count, nat(49));
        assert!(f.members() <= 3);
        assert_eq!(
            ideal_count_ie(&f.family, DEFAULT_IE_BUDGET).unwrap(),
            nat(49)
        );
        f.verify().unwrap();
    }

    #[test]
    fn build_block_needs_two_members_off_powers() {
        for k in 1u64..=512 {
            let f = build_block(&nat(k), &GroupAllocator::new());
            if k.count_ones() == 1 {
                assert_eq!(f.members(), 1);
            } else {
                assert!(f.members() >= 2, "k = {k} is not a power of two");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_sqrt(&nat(8));
        assert_eq!((d.q, d.gamma, d.beta), (1, nat(0), nat(0)));

        let d = decompose_sqrt(&(nat(37) + (Nat::one() << 12u32)));
        assert_eq!((d.q, d.gamma, d.beta), (2, nat(2), nat(5)));

        let d = decompose_sqrt(&((Nat::one() << 27u32) - Nat::one()));
        assert_eq!(d.q, 2);
        assert_eq!(d.beta, nat(15));
        let reassembled =
            (Nat::one() << 12u32) + (&d.gamma << 4u32) + &d.beta;
        assert_eq!(reassembled, (Nat::one() << 27u32) - Nat::one());
    }

    #[test]
    fn decompose_respects_the_range_invariant() {
        for k in 8u64..=10_000 {
            let d = decompose_sqrt(&nat(k));
            let q2 = u64::from(d.q) * u64::from(d.q);
            let lo = Nat::one() << (3 * q2);
            let hi = Nat::one() << (3 * (u64::from(d.q) + 1) * (u64::from(d.q) + 1));
            assert!(lo <= nat(k) && nat(k) < hi);
            assert!(d.beta.bits() <= q2);
            assert_eq!((Nat::one() << (3 * q2)) + (&d.gamma << q2) + &d.beta, nat(k));
        }
    }

    #[test]
    fn basecase_plan_grid_for_beta_5() {
        // beta = 5 = 0101: bits 1 and 3 are set
        let plan = BaseCasePlan::new(2, &nat(5));
        assert!(plan.f_set(0, 0).is_empty()); // bit 1 set
        assert_eq!(plan.f_set(1, 0), &FiniteSet::copy_range(1, 1)); // bit 2 clear
        assert!(plan.f_set(0, 1).is_empty()); // bit 3 set
        assert_eq!(plan.f_set(1, 1), &FiniteSet::copy_range(3, 1)); // bit 4 clear
        assert_eq!(plan.system_ideal_count(), nat(64));
        assert_eq!(plan.correction(), &nat(1974));
        assert_eq!(plan.t1(), &nat(2037));
        assert_eq!(plan.t2(), &nat(2064));
        assert_eq!(plan.a_coeffs(), &[0, 0, -1]);
    }

    #[test]
    fn basecase_of_q2_beta0_is_a_power() {
        let f = basecase_sqrt(2, &nat(0), &GroupAllocator::new());
        assert_eq!(f.count, Nat::one() << 12u32);
        assert_eq!(recount(&f.trace).unwrap(), f.count);
        assert_eq!(
            ideal_count_ie(&f.family, DEFAULT_IE_BUDGET).unwrap(),
            f.count
        );
    }

    #[test]
    fn basecase_of_q2_beta5() {
        let f = basecase_sqrt(2, &nat(5), &GroupAllocator::new());
        assert_eq!(f.count, nat(4101));
        f.verify().unwrap();
        assert_eq!(
            ideal_count_ie(&f.family, DEFAULT_IE_BUDGET).unwrap(),
            nat(4101)
        );
        assert_eq!(
            ideal_enumerate(&f.family, 5_000).unwrap().len(),
            4101
        );
    }

    #[test]
    fn sqrt_recursion_with_nonzero_gamma() {
        // k = 2^12 + 37 decomposes as q = 2, gamma = 2, beta = 5
        let k = (Nat::one() << 12u32) + nat(37);
        let f = sqrt_recurse(&k, &GroupAllocator::new());
        assert_eq!(f.count, k);
        f.verify().unwrap();
        assert_eq!(ideal_count_ie(&f.family, DEFAULT_IE_BUDGET).unwrap(), k);
    }

    #[test]
    fn sqrt_recursion_on_a_messy_27_bit_value() {
        let k = (Nat::one() << 27u32) - Nat::one();
        let f = sqrt_recurse(&k, &GroupAllocator::new());
        assert_eq!(f.count, k);
        f.verify().unwrap();
    }

    #[test]
    fn build_sqrt_delegates_at_desk_scale() {
        // bl(4101) + 1 = 4 is far below the sqrt bound, so the block path wins
        assert!(!sqrt_recursion_applies(&nat(4101)));
        let f = build_sqrt(&nat(4101), &GroupAllocator::new());
        assert_eq!(f.count, nat(4101));
        assert!(f.members() as u64 <= block_bound(&nat(4101)));
    }

    #[test]
    fn build_best_small_values() {
        let f = build_best(&(Nat::one() << 64u32));
        assert_eq!(f.members(), 1);

        let f = build_best(&nat(49));
        assert_eq!(f.count, nat(49));
        assert!(f.members() <= 3);
        f.verify().unwrap();

        let f = build_best(&nat(1));
        assert_eq!(f.count, nat(1));
        assert_eq!(f.members(), 1);
    }

    #[test]
    fn block_exactness_sweep_small() {
        for k in 1u64..=600 {
            let f = build_block(&nat(k), &GroupAllocator::new());
            assert_eq!(f.count, nat(k));
            assert_eq!(
                ideal_count_ie(&f.family, DEFAULT_IE_BUDGET).unwrap(),
                nat(k),
                "k = {k}"
            );
        }
    }
}
