//! Monotone DNF/CNF formulas with exact model counts.
//!
//! A set family `F` over universe `U` maps to a monotone DNF with one term
//! per member `S`: the positive literals indexed by `U \ S`. Satisfying
//! assignments of the DNF correspond bijectively to the sets of `ID(F)`
//! (the variables assigned FALSE form the ideal set). The dual CNF uses
//! the same literal sets as clauses; there the ideal counts the
//! *falsifying* assignments (variables assigned TRUE form the ideal set).
//!
//! [`dnf_count`] is an exact counter for arbitrary DNFs, including
//! negations, by inclusion-exclusion over term subsets: a conjunction of
//! terms either contradicts itself or fixes some variables and leaves the
//! rest free, contributing a power of two. [`dnf_brute_count`] is the
//! independent oracle that enumerates all assignments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Element, SetFamily};
use crate::numeric::Nat;

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("variable {var} appears in both polarities within one term")]
    ContradictoryTerm { var: u32 },
    #[error("variable index {var} is outside 1..={num_vars}")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("formula has {terms} terms, above the inclusion-exclusion budget of {budget}")]
    TermBudgetExceeded { terms: usize, budget: usize },
    #[error("formula has {vars} variables, above the brute-force budget of {max_vars}")]
    VariableBudgetExceeded { vars: u32, max_vars: u32 },
    #[error("DIMACS export cannot represent an empty term; re-run with padding enabled")]
    EmptyTermInDimacs,
    #[error("cannot parse formula file: {0}")]
    Parse(String),
}

/// A signed literal: variable index (1-based) and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive: true }
    }

    pub fn negative(var: u32) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive: false }
    }

    fn to_signed(self) -> i64 {
        if self.positive {
            i64::from(self.var)
        } else {
            -i64::from(self.var)
        }
    }

    fn from_signed(v: i64) -> Result<Self, FormulaError> {
        let var = u32::try_from(v.unsigned_abs())
            .map_err(|_| FormulaError::Parse(format!("literal {v} out of range")))?;
        if var == 0 {
            return Err(FormulaError::Parse("literal 0 is reserved".into()));
        }
        Ok(Literal { var, positive: v > 0 })
    }
}

/// A conjunction of literals (a DNF term) or, read dually, a disjunction
/// (a CNF clause). At most one polarity per variable; a term demanding
/// both is unsatisfiable and is rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LiteralSet {
    lits: BTreeMap<u32, bool>,
}

pub type Term = LiteralSet;
pub type Clause = LiteralSet;

impl LiteralSet {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Result<Self, FormulaError> {
        let mut map = BTreeMap::new();
        for lit in lits {
            if let Some(prev) = map.insert(lit.var, lit.positive) {
                if prev != lit.positive {
                    return Err(FormulaError::ContradictoryTerm { var: lit.var });
                }
            }
        }
        Ok(LiteralSet { lits: map })
    }

    pub fn positive(vars: impl IntoIterator<Item = u32>) -> Self {
        LiteralSet {
            lits: vars
                .into_iter()
                .inspect(|v| assert!(*v >= 1, "variable indices start at 1"))
                .map(|v| (v, true))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.lits
            .iter()
            .map(|(var, positive)| Literal { var: *var, positive: *positive })
    }

    pub fn is_monotone(&self) -> bool {
        self.lits.values().all(|p| *p)
    }

    fn flip(&self) -> LiteralSet {
        LiteralSet {
            lits: self.lits.iter().map(|(v, p)| (*v, !*p)).collect(),
        }
    }

    fn max_var(&self) -> u32 {
        self.lits.keys().next_back().copied().unwrap_or(0)
    }

    fn min_var(&self) -> u32 {
        self.lits.keys().next().copied().unwrap_or(1)
    }
}

impl Serialize for LiteralSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(Literal::to_signed))
    }
}

impl<'de> Deserialize<'de> for LiteralSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = Vec::<i64>::deserialize(d)?;
        let lits: Result<Vec<Literal>, FormulaError> =
            raw.into_iter().map(Literal::from_signed).collect();
        LiteralSet::new(lits.map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

/// Disjunctive normal form over variables `1..=num_vars`. Terms are kept
/// in canonical order (length, then lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dnf {
    #[serde(rename = "vars")]
    pub num_vars: u32,
    pub monotone: bool,
    pub terms: Vec<Term>,
    /// For family-derived formulas: the universe element backing each
    /// variable, in variable order.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub universe: Option<Vec<Element>>,
}

/// Conjunctive normal form, mirroring [`Dnf`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    #[serde(rename = "vars")]
    pub num_vars: u32,
    pub monotone: bool,
    pub clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub universe: Option<Vec<Element>>,
}

fn canonical_sort(sets: &mut [LiteralSet]) {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

impl Dnf {
    pub fn new(num_vars: u32, mut terms: Vec<Term>) -> Result<Self, FormulaError> {
        for t in &terms {
            let mv = t.max_var();
            if mv > num_vars {
                return Err(FormulaError::VariableOutOfRange { var: mv, num_vars });
            }
            if t.min_var() == 0 {
                return Err(FormulaError::VariableOutOfRange { var: 0, num_vars });
            }
        }
        canonical_sort(&mut terms);
        let monotone = terms.iter().all(LiteralSet::is_monotone);
        Ok(Dnf { num_vars, monotone, terms, universe: None })
    }

    pub fn is_monotone(&self) -> bool {
        self.terms.iter().all(LiteralSet::is_monotone)
    }

    /// Appends a fresh variable positively to every term. Satisfying
    /// assignments correspond one-to-one (the new variable is forced
    /// true), so the count is unchanged; empty terms become singletons.
    pub fn pad(&self) -> Dnf {
        let dummy = self.num_vars + 1;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut lits = t.lits.clone();
                lits.insert(dummy, true);
                LiteralSet { lits }
            })
            .collect();
        Dnf {
            num_vars: dummy,
            monotone: self.monotone,
            terms,
            universe: None,
        }
    }
}

impl Cnf {
    pub fn new(num_vars: u32, mut clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for c in &clauses {
            let mv = c.max_var();
            if mv > num_vars {
                return Err(FormulaError::VariableOutOfRange { var: mv, num_vars });
            }
            if c.min_var() == 0 {
                return Err(FormulaError::VariableOutOfRange { var: 0, num_vars });
            }
        }
        canonical_sort(&mut clauses);
        let monotone = clauses.iter().all(LiteralSet::is_monotone);
        Ok(Cnf { num_vars, monotone, clauses, universe: None })
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().all(LiteralSet::is_monotone)
    }

    /// The DNF whose satisfying assignments are exactly this CNF's
    /// falsifying assignments: one all-flipped term per clause.
    pub fn falsifying_dnf(&self) -> Dnf {
        let terms = self.clauses.iter().map(LiteralSet::flip).collect();
        Dnf::new(self.num_vars, terms).expect("flipping preserves well-formedness")
    }

    /// Dual of [`Dnf::pad`]: the fresh variable joins every clause
    /// positively, so falsifying assignments force it false and their
    /// count is unchanged.
    pub fn pad(&self) -> Cnf {
        let dummy = self.num_vars + 1;
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let mut lits = c.lits.clone();
                lits.insert(dummy, true);
                LiteralSet { lits }
            })
            .collect();
        Cnf {
            num_vars: dummy,
            monotone: self.monotone,
            clauses,
            universe: None,
        }
    }
}

/// Canonically ordered universe of a family, the variable indexing used by
/// both conversions.
fn indexed_universe(fam: &SetFamily) -> Vec<Element> {
    fam.universe().iter().copied().collect()
}

/// Monotone DNF whose satisfying-assignment count equals the ideal
/// cardinality of `fam`: variables are the universe elements in canonical
/// order, one term per member `S` holding the positive literals of
/// `U \ S`. A member equal to the whole universe yields an empty,
/// tautological term.
pub fn family_to_dnf(fam: &SetFamily) -> Dnf {
    let universe = indexed_universe(fam);
    let var_of: BTreeMap<Element, u32> = universe
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, i as u32 + 1))
        .collect();
    let terms: Vec<Term> = fam
        .members()
        .iter()
        .map(|m| LiteralSet::positive(universe.iter().filter(|e| !m.contains(e)).map(|e| var_of[e])))
        .collect();
    let mut dnf = Dnf::new(universe.len() as u32, terms).expect("family terms are well-formed");
    dnf.universe = Some(universe);
    dnf
}

/// Monotone CNF whose *falsifying*-assignment count equals the ideal
/// cardinality of `fam`; same literal sets as [`family_to_dnf`], read as
/// clauses.
pub fn family_to_cnf(fam: &SetFamily) -> Cnf {
    let dnf = family_to_dnf(fam);
    Cnf {
        num_vars: dnf.num_vars,
        monotone: dnf.monotone,
        clauses: dnf.terms,
        universe: dnf.universe,
    }
}

/// Term rendered as variable-indexed bit masks.
struct MaskedTerm {
    pos: Vec<u64>,
    neg: Vec<u64>,
}

fn mask_terms(terms: &[Term], num_vars: u32) -> (usize, Vec<MaskedTerm>) {
    let words = (num_vars as usize).div_ceil(64).max(1);
    let masked = terms
        .iter()
        .map(|t| {
            let mut pos = vec![0u64; words];
            let mut neg = vec![0u64; words];
            for lit in t.iter() {
                let i = (lit.var - 1) as usize;
                let target = if lit.positive { &mut pos } else { &mut neg };
                target[i / 64] |= 1 << (i % 64);
            }
            MaskedTerm { pos, neg }
        })
        .collect();
    (words, masked)
}

/// Exact satisfying-assignment count by inclusion-exclusion over term
/// subsets. A subset's conjunction contributes `0` when contradictory and
/// `2^(free variables)` otherwise, with alternating signs.
pub fn dnf_count(dnf: &Dnf, budget: usize) -> Result<Nat, FormulaError> {
    if dnf.terms.len() > budget {
        return Err(FormulaError::TermBudgetExceeded { terms: dnf.terms.len(), budget });
    }
    let (words, masked) = mask_terms(&dnf.terms, dnf.num_vars);
    let mut histogram = vec![0i64; dnf.num_vars as usize + 1];
    struct State<'a> {
        masked: &'a [MaskedTerm],
        histogram: &'a mut [i64],
        num_vars: u32,
    }
    // Supersets of a contradictory subset stay contradictory and all
    // contribute exactly 0, so the branch is pruned.
    fn visit(st: &mut State, start: usize, pos: &[u64], neg: &[u64], picked: usize) {
        for j in start..st.masked.len() {
            let new_pos: Vec<u64> = pos.iter().zip(&st.masked[j].pos).map(|(a, b)| a | b).collect();
            let new_neg: Vec<u64> = neg.iter().zip(&st.masked[j].neg).map(|(a, b)| a | b).collect();
            let contradictory = new_pos.iter().zip(&new_neg).any(|(p, n)| p & n != 0);
            if contradictory {
                continue;
            }
            let fixed: u32 = new_pos
                .iter()
                .zip(&new_neg)
                .map(|(p, n)| (p | n).count_ones())
                .sum();
            let free = st.num_vars - fixed;
            let sign = if (picked + 1) % 2 == 1 { 1 } else { -1 };
            st.histogram[free as usize] += sign;
            visit(st, j + 1, &new_pos, &new_neg, picked + 1);
        }
    }
    let zero = vec![0u64; words];
    let mut st = State { masked: &masked, histogram: &mut histogram, num_vars: dnf.num_vars };
    visit(&mut st, 0, &zero, &zero, 0);
    let mut total = BigInt::zero();
    for (free, count) in histogram.iter().enumerate() {
        if *count != 0 {
            total += BigInt::from(*count) << free;
        }
    }
    Ok(total.to_biguint().expect("a model count is never negative"))
}

/// Hard ceiling on brute-force enumeration; assignments are enumerated as
/// `u64` masks.
pub const BRUTE_FORCE_HARD_CAP: u32 = 30;

/// Counts satisfying assignments by enumerating all `2^num_vars`
/// assignments. The independent oracle for [`dnf_count`].
pub fn dnf_brute_count(dnf: &Dnf, max_vars: u32) -> Result<Nat, FormulaError> {
    let limit = max_vars.min(BRUTE_FORCE_HARD_CAP);
    if dnf.num_vars > limit {
        return Err(FormulaError::VariableBudgetExceeded { vars: dnf.num_vars, max_vars: limit });
    }
    let (_, masked) = mask_terms(&dnf.terms, dnf.num_vars);
    let masks: Vec<(u64, u64)> = masked.iter().map(|m| (m.pos[0], m.neg[0])).collect();
    let mut count = 0u64;
    for a in 0u64..(1 << dnf.num_vars) {
        if masks.iter().any(|(p, n)| a & p == *p && a & n == 0) {
            count += 1;
        }
    }
    Ok(Nat::from(count))
}

/// Falsifying-assignment count of a CNF: satisfied by none of its clauses
/// being violated, so the violations form a DNF counted exactly.
pub fn cnf_falsifying_count(cnf: &Cnf, budget: usize) -> Result<Nat, FormulaError> {
    dnf_count(&cnf.falsifying_dnf(), budget)
}

/// Brute-force companion of [`cnf_falsifying_count`].
pub fn cnf_brute_falsifying_count(cnf: &Cnf, max_vars: u32) -> Result<Nat, FormulaError> {
    dnf_brute_count(&cnf.falsifying_dnf(), max_vars)
}

// ---------------------------------------------------------------------------
// File formats. Every export ends with the comment line
// `c exact-count <k>` carrying the certified decimal count.

/// Either kind of formula, as read back from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Dnf(Dnf),
    Cnf(Cnf),
}

#[derive(Serialize)]
struct FormulaExport<'a> {
    vars: u32,
    monotone: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<&'a [LiteralSet]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clauses: Option<&'a [LiteralSet]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    universe: Option<&'a [Element]>,
    kind: &'static str,
}

pub fn dnf_to_json(dnf: &Dnf, exact_count: &Nat) -> String {
    let body = serde_json::to_string(&FormulaExport {
        vars: dnf.num_vars,
        monotone: dnf.monotone,
        terms: Some(&dnf.terms),
        clauses: None,
        universe: dnf.universe.as_deref(),
        kind: "dnf",
    })
    .expect("formula serializes");
    format!("{body}\nc exact-count {exact_count}\n")
}

pub fn cnf_to_json(cnf: &Cnf, exact_count: &Nat) -> String {
    let body = serde_json::to_string(&FormulaExport {
        vars: cnf.num_vars,
        monotone: cnf.monotone,
        terms: None,
        clauses: Some(&cnf.clauses),
        universe: cnf.universe.as_deref(),
        kind: "cnf",
    })
    .expect("formula serializes");
    format!("{body}\nc exact-count {exact_count}\n")
}

fn dimacs_body(
    kind: &str,
    num_vars: u32,
    sets: &[LiteralSet],
    universe: Option<&[Element]>,
    exact_count: &Nat,
) -> Result<String, FormulaError> {
    if sets.iter().any(LiteralSet::is_empty) {
        return Err(FormulaError::EmptyTermInDimacs);
    }
    let mut out = String::new();
    if let Some(universe) = universe {
        for (i, e) in universe.iter().enumerate() {
            out.push_str(&format!("c var {} = {}.{}\n", i + 1, e.group, e.index));
        }
    }
    out.push_str(&format!("p {kind} {num_vars} {}\n", sets.len()));
    for s in sets {
        for lit in s.iter() {
            out.push_str(&format!("{} ", lit.to_signed()));
        }
        out.push_str("0\n");
    }
    out.push_str(&format!("c exact-count {exact_count}\n"));
    Ok(out)
}

/// DIMACS-like text with header `p dnf <vars> <terms>`, a nonstandard
/// extension of the CNF format. Empty terms are rejected; pad first.
pub fn dnf_to_dimacs(dnf: &Dnf, exact_count: &Nat) -> Result<String, FormulaError> {
    dimacs_body("dnf", dnf.num_vars, &dnf.terms, dnf.universe.as_deref(), exact_count)
}

/// Standard `p cnf` DIMACS; the exact-count line carries the certified
/// *falsifying* count.
pub fn cnf_to_dimacs(cnf: &Cnf, exact_count: &Nat) -> Result<String, FormulaError> {
    dimacs_body("cnf", cnf.num_vars, &cnf.clauses, cnf.universe.as_deref(), exact_count)
}

fn render_lits(s: &LiteralSet, joiner: &str, when_empty: &str) -> String {
    if s.is_empty() {
        return when_empty.to_string();
    }
    s.iter()
        .map(|l| {
            if l.positive {
                format!("x{}", l.var)
            } else {
                format!("~x{}", l.var)
            }
        })
        .collect::<Vec<_>>()
        .join(joiner)
}

pub fn dnf_to_text(dnf: &Dnf, exact_count: &Nat) -> String {
    let terms: Vec<String> = dnf
        .terms
        .iter()
        .map(|t| format!("({})", render_lits(t, " & ", "true")))
        .collect();
    format!(
        "dnf {} vars {} terms\n{}\nc exact-count {exact_count}\n",
        dnf.num_vars,
        dnf.terms.len(),
        terms.join(" | ")
    )
}

pub fn cnf_to_text(cnf: &Cnf, exact_count: &Nat) -> String {
    let clauses: Vec<String> = cnf
        .clauses
        .iter()
        .map(|c| format!("({})", render_lits(c, " | ", "false")))
        .collect();
    format!(
        "cnf {} vars {} clauses\n{}\nc exact-count {exact_count}\n",
        cnf.num_vars,
        cnf.clauses.len(),
        clauses.join(" & ")
    )
}

/// Extracts the claimed count from the trailing `c exact-count` line of
/// any export.
pub fn parse_exact_count(text: &str) -> Option<Nat> {
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("c exact-count ") {
            return rest.trim().parse().ok();
        }
    }
    None
}

/// Reads back a formula from its JSON or DIMACS form, with the claimed
/// count when present.
pub fn parse_formula(text: &str) -> Result<(Formula, Option<Nat>), FormulaError> {
    let claimed = parse_exact_count(text);
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with("c ") && *l != "c")
        .collect::<Vec<_>>()
        .join("\n");
    let trimmed = body.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| FormulaError::Parse(e.to_string()))?;
        let kind = value.get("kind").and_then(|k| k.as_str()).unwrap_or("dnf");
        let formula = match kind {
            "cnf" => Formula::Cnf(
                serde_json::from_value(value).map_err(|e| FormulaError::Parse(e.to_string()))?,
            ),
            _ => Formula::Dnf(
                serde_json::from_value(value).map_err(|e| FormulaError::Parse(e.to_string()))?,
            ),
        };
        return Ok((formula, claimed));
    }
    parse_dimacs(&body).map(|f| (f, claimed))
}

fn parse_dimacs(body: &str) -> Result<Formula, FormulaError> {
    let mut lines = body.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| FormulaError::Parse("empty DIMACS file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [p, kind, vars, count] = fields.as_slice() else {
        return Err(FormulaError::Parse(format!("bad DIMACS header: {header}")));
    };
    if *p != "p" {
        return Err(FormulaError::Parse(format!("bad DIMACS header: {header}")));
    }
    let num_vars: u32 = vars
        .parse()
        .map_err(|_| FormulaError::Parse("bad variable count".into()))?;
    let expected: usize = count
        .parse()
        .map_err(|_| FormulaError::Parse("bad term count".into()))?;
    let mut sets = Vec::new();
    for line in lines {
        let mut lits = Vec::new();
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| FormulaError::Parse(format!("bad literal: {tok}")))?;
            if v == 0 {
                break;
            }
            lits.push(Literal::from_signed(v)?);
        }
        sets.push(LiteralSet::new(lits)?);
    }
    if sets.len() != expected {
        return Err(FormulaError::Parse(format!(
            "header promises {expected} terms, found {}",
            sets.len()
        )));
    }
    match *kind {
        "dnf" => Ok(Formula::Dnf(Dnf::new(num_vars, sets)?)),
        "cnf" => Ok(Formula::Cnf(Cnf::new(num_vars, sets)?)),
        other => Err(FormulaError::Parse(format!("unknown formula kind: {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::GroupAllocator;
    use crate::constructions::build_block;
    use crate::family::{ideal_count_ie, FiniteSet, DEFAULT_IE_BUDGET};
    use crate::numeric::nat;
    use proptest::prelude::*;

    fn two_singletons() -> SetFamily {
        SetFamily::new(vec![FiniteSet::copy_range(1, 1), FiniteSet::copy_range(2, 1)])
    }

    #[test]
    fn family_to_dnf_two_singletons() {
        let dnf = family_to_dnf(&two_singletons());
        assert_eq!(dnf.num_vars, 2);
        assert_eq!(dnf.terms.len(), 2);
        assert!(dnf.is_monotone());
        assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), nat(3));
        assert_eq!(dnf_count(&dnf, 30).unwrap(), nat(3));
    }

    #[test]
    fn family_to_dnf_whole_universe_member_is_a_tautology() {
        let fam = SetFamily::new(vec![FiniteSet::copy_range(1, 4)]);
        let dnf = family_to_dnf(&fam);
        assert_eq!(dnf.num_vars, 4);
        assert_eq!(dnf.terms.len(), 1);
        assert!(dnf.terms[0].is_empty());
        assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), nat(16));
    }

    #[test]
    fn family_to_dnf_of_the_trivial_family() {
        let fam = SetFamily::new(vec![FiniteSet::empty()]);
        let dnf = family_to_dnf(&fam);
        assert_eq!(dnf.num_vars, 0);
        assert_eq!(dnf.terms.len(), 1);
        assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), nat(1));
    }

    #[test]
    fn family_to_dnf_of_the_block_family_for_6() {
        let f = build_block(&nat(6), &GroupAllocator::new());
        let dnf = family_to_dnf(&f.family);
        assert_eq!(dnf.num_vars, 3);
        assert_eq!(dnf.terms.len(), 2);
        assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), nat(6));
        assert_eq!(dnf_count(&dnf, 30).unwrap(), nat(6));
    }

    #[test]
    fn family_to_cnf_counts_falsifying_assignments() {
        let cnf = family_to_cnf(&two_singletons());
        assert!(cnf.is_monotone());
        assert_eq!(cnf_brute_falsifying_count(&cnf, 24).unwrap(), nat(3));
        assert_eq!(cnf_falsifying_count(&cnf, 30).unwrap(), nat(3));
        // satisfying = 2^2 - 3 = 1
        assert_eq!(
            dnf_brute_count(
                &Dnf::new(cnf.num_vars, cnf.falsifying_dnf().terms).unwrap(),
                24
            )
            .unwrap(),
            nat(3)
        );

        let f = build_block(&nat(6), &GroupAllocator::new());
        let cnf = family_to_cnf(&f.family);
        assert_eq!(cnf_brute_falsifying_count(&cnf, 24).unwrap(), nat(6));

        let cnf = family_to_cnf(&SetFamily::new(vec![FiniteSet::empty()]));
        assert_eq!(cnf_falsifying_count(&cnf, 30).unwrap(), nat(1));
    }

    #[test]
    fn dnf_count_examples() {
        let dnf = Dnf::new(
            2,
            vec![LiteralSet::positive([1]), LiteralSet::positive([2])],
        )
        .unwrap();
        assert_eq!(dnf_count(&dnf, 30).unwrap(), nat(3));

        let xor = Dnf::new(
            2,
            vec![
                LiteralSet::new([Literal::positive(1), Literal::negative(2)]).unwrap(),
                LiteralSet::new([Literal::negative(1), Literal::positive(2)]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(dnf_count(&xor, 30).unwrap(), nat(2));

        // (x1) ∨ (¬x1): the pairwise conjunction is contradictory, so
        // inclusion-exclusion gives 1 + 1 - 0 = 2
        let taut = Dnf::new(
            1,
            vec![
                LiteralSet::new([Literal::positive(1)]).unwrap(),
                LiteralSet::new([Literal::negative(1)]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(dnf_count(&taut, 30).unwrap(), nat(2));
    }

    #[test]
    fn brute_count_examples() {
        let taut = Dnf::new(3, vec![LiteralSet::default()]).unwrap();
        assert_eq!(dnf_brute_count(&taut, 24).unwrap(), nat(8));

        let empty = Dnf::new(3, vec![]).unwrap();
        assert_eq!(dnf_brute_count(&empty, 24).unwrap(), nat(0));

        let f = build_block(&nat(49), &GroupAllocator::new());
        let dnf = family_to_dnf(&f.family);
        assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), nat(49));
    }

    #[test]
    fn contradictory_terms_are_rejected() {
        let err = LiteralSet::new([Literal::positive(3), Literal::negative(3)]);
        assert!(matches!(err, Err(FormulaError::ContradictoryTerm { var: 3 })));
    }

    #[test]
    fn variable_zero_is_rejected() {
        let zero = LiteralSet { lits: [(0u32, true)].into_iter().collect() };
        assert!(matches!(
            Dnf::new(3, vec![zero.clone()]),
            Err(FormulaError::VariableOutOfRange { var: 0, .. })
        ));
        assert!(matches!(
            Cnf::new(3, vec![zero]),
            Err(FormulaError::VariableOutOfRange { var: 0, .. })
        ));
    }

    #[test]
    fn budgets_are_enforced() {
        let dnf = Dnf::new(2, vec![LiteralSet::positive([1]), LiteralSet::positive([2])]).unwrap();
        assert!(matches!(
            dnf_count(&dnf, 1),
            Err(FormulaError::TermBudgetExceeded { .. })
        ));
        let wide = Dnf::new(25, vec![LiteralSet::positive([25])]).unwrap();
        assert!(matches!(
            dnf_brute_count(&wide, 24),
            Err(FormulaError::VariableBudgetExceeded { .. })
        ));
    }

    #[test]
    fn padding_preserves_the_count() {
        let fam = SetFamily::new(vec![FiniteSet::copy_range(1, 3)]);
        let dnf = family_to_dnf(&fam);
        assert!(dnf.terms[0].is_empty());
        let padded = dnf.pad();
        assert_eq!(padded.num_vars, 4);
        assert!(!padded.terms[0].is_empty());
        assert_eq!(dnf_brute_count(&padded, 24).unwrap(), nat(8));

        let cnf = family_to_cnf(&fam).pad();
        assert_eq!(cnf_brute_falsifying_count(&cnf, 24).unwrap(), nat(8));
    }

    #[test]
    fn exports_round_trip_and_end_with_the_count_line() {
        let f = build_block(&nat(6), &GroupAllocator::new());
        let dnf = family_to_dnf(&f.family);

        let json = dnf_to_json(&dnf, &nat(6));
        assert!(json.ends_with("c exact-count 6\n"));
        let (parsed, claimed) = parse_formula(&json).unwrap();
        assert_eq!(claimed, Some(nat(6)));
        match parsed {
            Formula::Dnf(d) => assert_eq!(d.terms, dnf.terms),
            _ => panic!("expected a DNF"),
        }

        let dimacs = dnf_to_dimacs(&dnf, &nat(6)).unwrap();
        assert!(dimacs.contains("p dnf 3 2"));
        assert!(dimacs.contains("c var 1 = "));
        let (parsed, claimed) = parse_formula(&dimacs).unwrap();
        assert_eq!(claimed, Some(nat(6)));
        match parsed {
            Formula::Dnf(d) => {
                assert_eq!(d.num_vars, 3);
                assert_eq!(dnf_count(&d, 30).unwrap(), nat(6));
            }
            _ => panic!("expected a DNF"),
        }

        let cnf = family_to_cnf(&f.family);
        let dimacs = cnf_to_dimacs(&cnf, &nat(6)).unwrap();
        assert!(dimacs.contains("p cnf 3 2"));
        let (parsed, _) = parse_formula(&dimacs).unwrap();
        match parsed {
            Formula::Cnf(c) => assert_eq!(cnf_falsifying_count(&c, 30).unwrap(), nat(6)),
            _ => panic!("expected a CNF"),
        }

        let text = dnf_to_text(&dnf, &nat(6));
        assert!(text.ends_with("c exact-count 6\n"));
    }

    #[test]
    fn dimacs_rejects_empty_terms() {
        let fam = SetFamily::new(vec![FiniteSet::copy_range(1, 2)]);
        let dnf = family_to_dnf(&fam);
        assert!(matches!(
            dnf_to_dimacs(&dnf, &nat(4)),
            Err(FormulaError::EmptyTermInDimacs)
        ));
        assert!(dnf_to_dimacs(&dnf.pad(), &nat(4)).is_ok());
    }

    /// Direct truth-table evaluation of a CNF, independent of the
    /// flipped-DNF route used by the production counters.
    fn cnf_sat_by_truth_table(cnf: &Cnf) -> u64 {
        let n = cnf.num_vars;
        assert!(n <= 20);
        (0u64..(1 << n))
            .filter(|a| {
                cnf.clauses.iter().all(|clause| {
                    clause
                        .iter()
                        .any(|lit| (a >> (lit.var - 1)) & 1 == u64::from(lit.positive))
                })
            })
            .count() as u64
    }

    #[test]
    fn cnf_duality_sat_is_complement_of_the_ideal() {
        for k in [1u64, 2, 3, 6, 31, 49, 100] {
            let built = build_block(&nat(k), &GroupAllocator::new());
            let ideal = ideal_count_ie(&built.family, DEFAULT_IE_BUDGET).unwrap();
            let cnf = family_to_cnf(&built.family);
            let sat = cnf_sat_by_truth_table(&cnf);
            let space = 1u64 << cnf.num_vars;
            assert_eq!(nat(space - sat), ideal, "k = {k}");
            assert_eq!(
                cnf_falsifying_count(&cnf, DEFAULT_IE_BUDGET).unwrap(),
                nat(space - sat),
                "k = {k}"
            );
        }
    }

    /// Random mixed-polarity DNFs: both counters agree.
    fn arbitrary_dnf() -> impl Strategy<Value = Dnf> {
        let term = prop::collection::btree_map(1u32..=12, any::<bool>(), 0..=4)
            .prop_map(|lits| {
                LiteralSet::new(lits.into_iter().map(|(var, positive)| Literal { var, positive }))
                    .expect("one polarity per variable by construction")
            });
        prop::collection::vec(term, 0..=8)
            .prop_map(|terms| Dnf::new(12, terms).expect("vars within range"))
    }

    proptest! {
        #[test]
        fn counters_agree_on_random_dnfs(dnf in arbitrary_dnf()) {
            prop_assert_eq!(
                dnf_count(&dnf, 30).unwrap(),
                dnf_brute_count(&dnf, 24).unwrap()
            );
        }

        #[test]
        fn family_conversion_round_trip(
            members in prop::collection::vec(
                prop::collection::btree_set(1u32..=10, 0..=5), 1..=5
            )
        ) {
            let fam = SetFamily::new(
                members
                    .into_iter()
                    .map(|m| m.into_iter().map(|i| Element::new(1, i)).collect())
                    .collect(),
            );
            let ideal = ideal_count_ie(&fam, DEFAULT_IE_BUDGET).unwrap();
            let dnf = family_to_dnf(&fam);
            prop_assert!(dnf.is_monotone());
            prop_assert_eq!(dnf_count(&dnf, 30).unwrap(), ideal.clone());
            prop_assert_eq!(dnf_brute_count(&dnf, 24).unwrap(), ideal.clone());
            let cnf = family_to_cnf(&fam);
            prop_assert!(cnf.is_monotone());
            prop_assert_eq!(cnf_falsifying_count(&cnf, 30).unwrap(), ideal);
        }
    }
}
