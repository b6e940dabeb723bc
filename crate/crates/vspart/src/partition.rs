//! Partition types, explicit partitions, and the classical necessary
//! conditions: the first packing condition, the dimension condition, the
//! tail conditions, a sufficiency certificate, and size bounds on the
//! number of members.
//!
//! A type stores the counts m_1..m_k densely, lowest dimension first,
//! with m_k > 0.  Reports display the conventional descending tuple
//! (m_k,...,m_1).

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::gfq::{vector_to_index, FieldSpec, Subspace};
use crate::{Error, Result};

fn qpow(q: u64, d: u32) -> BigUint {
    BigUint::from(q).pow(d)
}

/// The type of a partition of V(n,q): how many members of each dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionType {
    n: u32,
    q: u64,
    m: Vec<u64>,
}

impl PartitionType {
    /// Counts given lowest dimension first (m_1..m_k, k = m.len()).
    pub fn new(n: u32, q: u64, m: Vec<u64>) -> Result<PartitionType> {
        if crate::gfq::prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        if n == 0 {
            return Err(Error::InvalidType("ambient dimension must be positive".into()));
        }
        if m.is_empty() || m.iter().all(|&c| c == 0) {
            return Err(Error::InvalidType("a type needs at least one member".into()));
        }
        if *m.last().unwrap() == 0 {
            return Err(Error::InvalidType(
                "highest stored dimension has count zero".into(),
            ));
        }
        if m.len() > n as usize {
            return Err(Error::InvalidType(format!(
                "member dimension {} exceeds ambient dimension {n}",
                m.len()
            )));
        }
        Ok(PartitionType { n, q, m })
    }

    /// Counts in the display order (m_k,...,m_1); zeros above the highest
    /// occupied dimension are stripped.
    pub fn from_descending(n: u32, q: u64, desc: &[u64]) -> Result<PartitionType> {
        let mut m: Vec<u64> = desc.iter().rev().copied().collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        PartitionType::new(n, q, m)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Counts m_1..m_k, lowest dimension first.
    pub fn counts(&self) -> &[u64] {
        &self.m
    }

    /// Highest dimension with a nonzero count.
    pub fn max_dim(&self) -> u32 {
        self.m.len() as u32
    }

    pub fn count(&self, d: u32) -> u64 {
        if d == 0 {
            return 0;
        }
        self.m.get(d as usize - 1).copied().unwrap_or(0)
    }

    pub fn total_members(&self) -> u64 {
        self.m.iter().sum()
    }

    pub fn min_dim(&self) -> u32 {
        self.m.iter().position(|&c| c > 0).unwrap() as u32 + 1
    }

    /// Dimensions with nonzero count, ascending.
    pub fn dims_present(&self) -> Vec<u32> {
        (1..=self.max_dim()).filter(|&d| self.count(d) > 0).collect()
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().rev().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sum of m_d (q^d - 1) must equal q^n - 1.
pub fn check_first_packing(t: &PartitionType) -> bool {
    let mut lhs = BigUint::zero();
    for (i, &c) in t.counts().iter().enumerate() {
        lhs += BigUint::from(c) * (qpow(t.q(), i as u32 + 1) - BigUint::one());
    }
    lhs == qpow(t.q(), t.n()) - BigUint::one()
}

/// Any two distinct members span their direct sum, so occupied dimensions
/// must pairwise sum to at most n.
pub fn check_dimension(t: &PartitionType) -> bool {
    let dims = t.dims_present();
    let &top = dims.last().unwrap();
    if t.count(top) >= 2 && 2 * top > t.n() {
        return false;
    }
    if dims.len() >= 2 {
        let second = dims[dims.len() - 2];
        if top + second > t.n() {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    pub witness: String,
}

impl ConditionReport {
    fn na(condition: &str, witness: String) -> ConditionReport {
        ConditionReport {
            condition: condition.into(),
            verdict: Verdict::NotApplicable,
            witness,
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict != Verdict::Fails
    }
}

/// Bounds on the number m of lowest-dimension members, driven by the
/// lowest dimension d1 and the second lowest d2.  The base bounds govern
/// when q^(d2-d1) does not divide m; divisibility switches to the
/// strengthened bounds instead, except for q=2, d1=1, d2=2 where no
/// strengthening exists.  The two regimes must not be conjoined: a plane
/// plus four lines partitions V(3,2), so its tail of length 4 has to pass,
/// and it only does under the strengthened bound.
pub fn check_tail(t: &PartitionType) -> ConditionReport {
    let cond = "tail";
    let dims = t.dims_present();
    if dims.len() < 2 {
        return ConditionReport::na(
            cond,
            "fewer than two distinct dimensions".into(),
        );
    }
    let (d1, d2) = (dims[0], dims[1]);
    let m = t.count(d1);
    let q = t.q();
    let big_m = BigUint::from(m);
    let divides = (&big_m % qpow(q, d2 - d1)).is_zero();

    let (holds, clause) = if !divides {
        if d2 < 2 * d1 {
            let bound = qpow(q, d1) + BigUint::one();
            let ok = big_m >= bound;
            (ok, format!("base: m = {m} must be at least q^{d1}+1 = {bound}"))
        } else {
            let exact = (qpow(q, d2) - BigUint::one()) / (qpow(q, d1) - BigUint::one());
            let strict = BigUint::from(2u32) * qpow(q, d2 - d1);
            let ok = (d2 % d1 == 0 && big_m == exact) || big_m > strict;
            (
                ok,
                format!(
                    "base: m = {m} must equal (q^{d2}-1)/(q^{d1}-1) = {exact} with {d1} | {d2}, or exceed 2q^{} = {strict}",
                    d2 - d1
                ),
            )
        }
    } else if q == 2 && d1 == 1 && d2 == 2 {
        (
            true,
            "q = 2, d1 = 1, d2 = 2: no strengthening, and the base bounds need odd m".into(),
        )
    } else {
        let bound = if d2 < 2 * d1 {
            qpow(q, d2) - qpow(q, d1) + qpow(q, d2 - d1)
        } else {
            qpow(q, d2)
        };
        let ok = big_m >= bound;
        (
            ok,
            format!("strengthened (q^{} | m): m = {m} must be at least {bound}", d2 - d1),
        )
    };

    ConditionReport {
        condition: cond.into(),
        verdict: if holds { Verdict::Holds } else { Verdict::Fails },
        witness: format!("d1 = {d1}, d2 = {d2}; {clause}"),
    }
}

/// Realizability certificate: if at most q members have dimension above
/// the lowest one and packing + dimension hold, the type is realizable.
pub fn check_sufficiency(t: &PartitionType) -> bool {
    let c = t.min_dim();
    let others = t.total_members() - t.count(c);
    others <= t.q() && check_first_packing(t) && check_dimension(t)
}

/// Lower bounds on the number of members, driven by the highest dimension:
/// the general floor q^ceil(n/2)+1, the two-dimension floor q^d+q^d'+1,
/// and the exact count q^d+1 when only the top dimension and its
/// complement occur.
pub fn size_bounds(t: &PartitionType) -> ConditionReport {
    let cond = "size";
    let total = t.total_members();
    if total <= 1 {
        return ConditionReport::na(cond, "single member".into());
    }
    let q = t.q();
    let n = t.n();
    let dims = t.dims_present();
    let &d = dims.last().unwrap();
    let big_total = BigUint::from(total);
    let mut clauses: Vec<String> = Vec::new();
    let mut holds = true;

    let general = qpow(q, n.div_ceil(2)) + BigUint::one();
    let ok = big_total >= general;
    clauses.push(format!(
        "general: {total} {} q^{}+1 = {general}",
        if ok { ">=" } else { "<" },
        n.div_ceil(2)
    ));
    holds &= ok;

    for &dp in dims.iter().filter(|&&dp| dp < n - d) {
        let bound = qpow(q, d) + qpow(q, dp) + BigUint::one();
        let ok = big_total >= bound;
        clauses.push(format!(
            "two dimensions {d},{dp}: {total} {} q^{d}+q^{dp}+1 = {bound}",
            if ok { ">=" } else { "<" }
        ));
        holds &= ok;
    }

    if 2 * d >= n && dims.iter().all(|&e| e == d || e == n - d) {
        let exact = qpow(q, d) + BigUint::one();
        let ok = big_total == exact;
        clauses.push(format!(
            "only dimensions {d} and {}: {total} {} q^{d}+1 = {exact}",
            n - d,
            if ok { "=" } else { "!=" }
        ));
        holds &= ok;
    }

    ConditionReport {
        condition: cond.into(),
        verdict: if holds { Verdict::Holds } else { Verdict::Fails },
        witness: clauses.join("; "),
    }
}

/// A concrete partition: subspaces of a fixed V(n,q).
#[derive(Debug, Clone)]
pub struct ExplicitPartition {
    field: FieldSpec,
    n: usize,
    members: Vec<Subspace>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub valid: bool,
    pub observed: Option<PartitionType>,
    pub detail: String,
}

/// Largest ambient space verify() will enumerate.
pub const MAX_VERIFY: u64 = 1 << 24;

impl ExplicitPartition {
    pub fn new(field: FieldSpec, n: usize, members: Vec<Subspace>) -> Result<ExplicitPartition> {
        for s in &members {
            if s.ambient() != n {
                return Err(Error::DimensionMismatch {
                    got: s.ambient(),
                    want: n,
                });
            }
            if s.dim() == 0 {
                return Err(Error::InvalidType("zero-dimensional member".into()));
            }
        }
        Ok(ExplicitPartition { field, n, members })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn observed_type(&self) -> Result<PartitionType> {
        let k = self.members.iter().map(|s| s.dim()).max().unwrap_or(0);
        let mut m = vec![0u64; k];
        for s in &self.members {
            m[s.dim() - 1] += 1;
        }
        PartitionType::new(self.n as u32, self.q(), m)
    }

    /// Exhaustive check that every nonzero vector lies in exactly one
    /// member, by filling an occupancy table of all q^n indices.
    pub fn verify(&self) -> Result<VerifyReport> {
        let q = self.q();
        let space = q
            .checked_pow(self.n as u32)
            .filter(|&s| s <= MAX_VERIFY)
            .ok_or(Error::SpaceTooLarge(q.saturating_pow(self.n as u32)))?;
        let observed = self.observed_type().ok();
        let mut occupancy = vec![0u32; space as usize];
        for (idx, s) in self.members.iter().enumerate() {
            for v in s.nonzero_vectors(&self.field) {
                let code = vector_to_index(q, &v) as usize;
                if occupancy[code] != 0 {
                    return Ok(VerifyReport {
                        valid: false,
                        observed,
                        detail: format!(
                            "vector {code} lies in members {} and {idx}",
                            occupancy[code] - 1
                        ),
                    });
                }
                occupancy[code] = idx as u32 + 1;
            }
        }
        if let Some(gap) = occupancy.iter().skip(1).position(|&o| o == 0) {
            return Ok(VerifyReport {
                valid: false,
                observed,
                detail: format!("vector {} is uncovered", gap + 1),
            });
        }
        Ok(VerifyReport {
            valid: true,
            observed,
            detail: "every nonzero vector covered exactly once".into(),
        })
    }

    /// The induced partition {U ∩ W != 0} of a subspace W, re-expressed in
    /// coordinates of W.
    pub fn induce_on_subspace(&self, w: &Subspace) -> Result<ExplicitPartition> {
        if w.ambient() != self.n {
            return Err(Error::DimensionMismatch {
                got: w.ambient(),
                want: self.n,
            });
        }
        let f = &self.field;
        let mut members = Vec::new();
        for s in &self.members {
            let i = s.intersect(f, w);
            if i.dim() == 0 {
                continue;
            }
            let rows: Vec<_> = i
                .basis()
                .iter()
                .map(|v| {
                    w.coords_in(f, v)
                        .expect("intersection vector outside the subspace")
                })
                .collect();
            members.push(Subspace::from_generators(f, w.dim(), &rows));
        }
        ExplicitPartition::new(self.field.clone(), w.dim(), members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::Vector;

    fn t(n: u32, q: u64, desc: &[u64]) -> PartitionType {
        PartitionType::from_descending(n, q, desc).unwrap()
    }

    fn span(f: &FieldSpec, n: usize, rows: &[&[u64]]) -> Subspace {
        let gens: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&c| f.el(c)).collect())
            .collect();
        Subspace::from_generators(f, n, &gens)
    }

    #[test]
    fn type_construction_and_display() {
        let ty = t(8, 2, &[13, 6, 0, 18]);
        assert_eq!(ty.counts(), &[18, 0, 6, 13]);
        assert_eq!(ty.max_dim(), 4);
        assert_eq!(ty.min_dim(), 1);
        assert_eq!(ty.total_members(), 37);
        assert_eq!(ty.to_string(), "(13,6,0,18)");
        assert_eq!(t(2, 2, &[0, 3]).to_string(), "(3)");
        assert!(PartitionType::new(8, 6, vec![1]).is_err());
        assert!(PartitionType::new(2, 2, vec![1, 0]).is_err());
        assert!(PartitionType::new(2, 2, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn first_packing() {
        assert!(check_first_packing(&t(8, 2, &[13, 6, 0, 18])));
        assert!(check_first_packing(&t(8, 2, &[17, 0, 0, 0])));
        assert!(check_first_packing(&t(5, 3, &[1, 0, 0, 0, 0])));
        for m1 in 0..=255 {
            let ty = PartitionType::from_descending(8, 2, &[13, 9, 0, m1]).unwrap();
            assert!(!check_first_packing(&ty), "m1 = {m1}");
        }
    }

    #[test]
    fn dimension_condition() {
        assert!(check_dimension(&t(8, 2, &[13, 6, 0, 18])));
        assert!(check_dimension(&t(4, 2, &[1, 0, 0, 0])));
        assert!(!check_dimension(&t(4, 2, &[2, 0, 0, 0])));
        assert!(!check_dimension(&t(8, 2, &[1, 1, 0, 0, 0])));
        assert!(check_dimension(&t(8, 2, &[1, 0, 32, 0, 0])));
    }

    #[test]
    fn tail_case_low_second_dimension() {
        let ty = PartitionType::new(7, 2, vec![0, 5, 4]).unwrap();
        assert_eq!(ty.min_dim(), 2);
        assert_eq!(check_tail(&ty).verdict, Verdict::Holds);

        let ty = PartitionType::new(8, 2, vec![0, 0, 8, 5]).unwrap();
        let report = check_tail(&ty);
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(report.witness.contains("d1 = 3"));
    }

    #[test]
    fn tail_case_high_second_dimension() {
        let ty = PartitionType::new(6, 2, vec![19, 0, 7]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Holds);
        let ty = PartitionType::new(6, 2, vec![7, 0, 8]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Holds);
        let ty = PartitionType::new(6, 2, vec![4, 0, 8]).unwrap();
        let report = check_tail(&ty);
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(report.witness.contains("strengthened"));
    }

    #[test]
    fn tail_exception_q2_d1_d2() {
        let fails = PartitionType::new(5, 2, vec![1, 10]).unwrap();
        assert_eq!(check_tail(&fails).verdict, Verdict::Fails);
        let holds = PartitionType::new(5, 2, vec![3, 6]).unwrap();
        assert_eq!(check_tail(&holds).verdict, Verdict::Holds);
        let holds = PartitionType::new(5, 2, vec![4, 9]).unwrap();
        assert_eq!(check_tail(&holds).verdict, Verdict::Holds);
        let holds = PartitionType::new(7, 2, vec![6, 3, 17]).unwrap();
        let report = check_tail(&holds);
        assert_eq!(report.verdict, Verdict::Holds);
        assert!(report.witness.contains("no strengthening"));
    }

    #[test]
    fn tail_strengthening_applies() {
        let ty = PartitionType::new(8, 2, vec![0, 12, 0, 6]).unwrap();
        let report = check_tail(&ty);
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(report.witness.contains("strengthened"));
        let ty = PartitionType::new(7, 3, vec![0, 12, 5]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Fails);
        let ty = PartitionType::new(8, 2, vec![8, 0, 0, 6]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Fails);
        let ty = PartitionType::new(8, 2, vec![16, 0, 0, 6]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Holds);
        let ty = PartitionType::new(8, 2, vec![240, 0, 0, 1]).unwrap();
        assert_eq!(check_tail(&ty).verdict, Verdict::Holds);
    }

    #[test]
    fn tail_admits_constructed_partitions() {
        let f = FieldSpec::new(2).unwrap();
        let members = vec![
            span(&f, 3, &[&[1, 0, 0], &[0, 1, 0]]),
            span(&f, 3, &[&[0, 0, 1]]),
            span(&f, 3, &[&[1, 0, 1]]),
            span(&f, 3, &[&[0, 1, 1]]),
            span(&f, 3, &[&[1, 1, 1]]),
        ];
        let p = ExplicitPartition::new(f, 3, members).unwrap();
        let report = p.verify().unwrap();
        assert!(report.valid);
        let observed = report.observed.unwrap();
        assert_eq!(observed, t(3, 2, &[1, 4]));
        assert_eq!(check_tail(&observed).verdict, Verdict::Holds);
    }

    #[test]
    fn tail_not_applicable_for_spreads() {
        assert_eq!(
            check_tail(&t(8, 2, &[17, 0, 0, 0])).verdict,
            Verdict::NotApplicable
        );
        assert_eq!(
            check_tail(&t(4, 2, &[1, 0, 0, 0])).verdict,
            Verdict::NotApplicable
        );
    }

    #[test]
    fn sufficiency() {
        assert!(check_sufficiency(&t(3, 2, &[0, 0, 7])));
        assert!(check_sufficiency(&t(8, 2, &[17, 0, 0, 0])));
        assert!(check_sufficiency(&t(4, 2, &[1, 0, 0, 0])));
        assert!(!check_sufficiency(&t(8, 2, &[13, 6, 0, 18])));
        assert!(!check_sufficiency(&t(4, 2, &[2, 0, 0, 0])));
    }

    #[test]
    fn size_bound_reports() {
        assert_eq!(size_bounds(&t(8, 2, &[14, 3, 8, 0])).verdict, Verdict::Holds);
        assert_eq!(size_bounds(&t(8, 2, &[17, 0, 0, 0])).verdict, Verdict::Holds);
        let fake = PartitionType::new(8, 2, vec![0, 0, 0, 15]).unwrap();
        assert_eq!(size_bounds(&fake).verdict, Verdict::Fails);
        let exact = PartitionType::new(8, 2, vec![0, 0, 32, 0, 1]).unwrap();
        assert_eq!(size_bounds(&exact).verdict, Verdict::Holds);
        let off = PartitionType::new(8, 2, vec![0, 0, 31, 0, 1]).unwrap();
        assert_eq!(size_bounds(&off).verdict, Verdict::Fails);
        assert_eq!(
            size_bounds(&t(4, 2, &[1, 0, 0, 0])).verdict,
            Verdict::NotApplicable
        );
    }

    #[test]
    fn verify_line_partition_of_v22() {
        let f = FieldSpec::new(2).unwrap();
        let members = vec![
            span(&f, 2, &[&[1, 0]]),
            span(&f, 2, &[&[0, 1]]),
            span(&f, 2, &[&[1, 1]]),
        ];
        let p = ExplicitPartition::new(f, 2, members).unwrap();
        let report = p.verify().unwrap();
        assert!(report.valid, "{}", report.detail);
        assert_eq!(report.observed.unwrap(), t(2, 2, &[0, 3]));
    }

    #[test]
    fn verify_rejects_overlap_and_gap() {
        let f = FieldSpec::new(2).unwrap();
        let overlapping = ExplicitPartition::new(
            f.clone(),
            3,
            vec![
                span(&f, 3, &[&[1, 0, 0], &[0, 1, 0]]),
                span(&f, 3, &[&[1, 0, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap();
        let report = overlapping.verify().unwrap();
        assert!(!report.valid);
        assert!(report.detail.contains("lies in members"));

        let gappy = ExplicitPartition::new(f.clone(), 3, vec![span(&f, 3, &[&[1, 0, 0]])]).unwrap();
        let report = gappy.verify().unwrap();
        assert!(!report.valid);
        assert!(report.detail.contains("uncovered"));
    }

    #[test]
    fn verify_whole_space_member() {
        let f = FieldSpec::new(3).unwrap();
        let p = ExplicitPartition::new(
            f.clone(),
            2,
            vec![span(&f, 2, &[&[1, 0], &[0, 1]])],
        )
        .unwrap();
        let report = p.verify().unwrap();
        assert!(report.valid);
        assert_eq!(report.observed.unwrap(), t(2, 3, &[1, 0]));
    }

    #[test]
    fn induce_on_member_and_on_ambient() {
        let f = FieldSpec::new(2).unwrap();
        let members = vec![
            span(&f, 2, &[&[1, 0]]),
            span(&f, 2, &[&[0, 1]]),
            span(&f, 2, &[&[1, 1]]),
        ];
        let p = ExplicitPartition::new(f.clone(), 2, members.clone()).unwrap();

        let whole = Subspace::full(&f, 2);
        let same = p.induce_on_subspace(&whole).unwrap();
        assert_eq!(same.members().len(), 3);
        assert!(same.verify().unwrap().valid);

        let line = &members[0];
        let induced = p.induce_on_subspace(line).unwrap();
        assert_eq!(induced.n(), 1);
        assert_eq!(induced.members().len(), 1);
        assert!(induced.verify().unwrap().valid);
    }

    #[test]
    fn induce_on_plane_of_v32() {
        let f = FieldSpec::new(2).unwrap();
        let members = vec![
            span(&f, 3, &[&[1, 0, 0], &[0, 1, 0]]),
            span(&f, 3, &[&[0, 0, 1]]),
            span(&f, 3, &[&[1, 0, 1]]),
            span(&f, 3, &[&[0, 1, 1]]),
            span(&f, 3, &[&[1, 1, 1]]),
        ];
        let p = ExplicitPartition::new(f.clone(), 3, members).unwrap();
        assert!(p.verify().unwrap().valid);
        let w = span(&f, 3, &[&[1, 0, 0], &[0, 0, 1]]);
        let induced = p.induce_on_subspace(&w).unwrap();
        assert!(induced.verify().unwrap().valid);
        assert_eq!(induced.n(), 2);
    }
}
