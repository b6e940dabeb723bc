//! Hyperplane sections of a partition.
//!
//! A hyperplane H either contains a member or cuts it in codimension one,
//! so counting members inside H gives a small integer vector, the section
//! type.  Those vectors satisfy their own packing identity, and double
//! counting member tuples against the hyperplanes containing them yields a
//! family of exact linear constraints on how often each section type can
//! occur.  The feasibility of that system over the nonnegative integers is
//! what the derive module ultimately interrogates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gfq::{dot, projective_reps};
use crate::intfeas::{RationalLP, Relation};
use crate::partition::{check_dimension, check_first_packing, ExplicitPartition, PartitionType};
use crate::{Error, Result};

/// Number of hyperplanes of V(n,q) containing a fixed d-dimensional
/// subspace: (q^{n-d} - 1)/(q - 1), clamped to zero for d ≥ n.
pub fn hyperplanes_through(d: u32, n: u32, q: u64) -> BigUint {
    if d >= n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    (q.pow(n - d) - BigUint::one()) / (q - BigUint::one())
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Section type of one hyperplane: entry d-1 counts the members of
/// dimension d lying inside it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperplaneType {
    b: Vec<u64>,
}

impl HyperplaneType {
    pub fn new(b: Vec<u64>) -> HyperplaneType {
        HyperplaneType { b }
    }

    pub fn counts(&self) -> &[u64] {
        &self.b
    }

    pub fn count(&self, d: u32) -> u64 {
        self.b.get(d as usize - 1).copied().unwrap_or(0)
    }

    pub fn k(&self) -> u32 {
        self.b.len() as u32
    }
}

impl fmt::Display for HyperplaneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().rev().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All admissible section types for a partition type, ordered
/// lexicographically descending on (b_k,...,b_1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    k: u32,
    entries: Vec<HyperplaneType>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HyperplaneType] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &HyperplaneType {
        &self.entries[i]
    }

    pub fn position(&self, b: &[u64]) -> Option<usize> {
        self.entries.iter().position(|e| e.counts() == b)
    }
}

/// Solves the section packing identity sum b_d q^d = (sum m_d) - 1 over
/// 0 ≤ b_d ≤ m_d.  Dimensions d with 2d ≥ n are additionally capped at
/// b_d ≤ 1: two such members would span more than a hyperplane can hold.
pub fn enumerate_hyperplane_types(ty: &PartitionType) -> Result<SolutionSet> {
    if !check_first_packing(ty) {
        return Err(Error::InvalidType(format!(
            "type {ty} fails the packing condition; section types are undefined"
        )));
    }
    let n = ty.n();
    let q = ty.q();
    let k = ty.max_dim();
    let caps: Vec<u64> = (1..=k)
        .map(|d| {
            let m = ty.count(d);
            if 2 * d >= n {
                m.min(1)
            } else {
                m
            }
        })
        .collect();
    let weights: Vec<BigUint> = (1..=k).map(|d| BigUint::from(q).pow(d)).collect();
    // prefix_cap[d] bounds what dimensions 1..=d can still contribute.
    let mut prefix_cap: Vec<BigUint> = vec![BigUint::zero(); k as usize + 1];
    for d in 1..=k as usize {
        prefix_cap[d] = &prefix_cap[d - 1] + &weights[d - 1] * BigUint::from(caps[d - 1]);
    }

    let target = BigUint::from(ty.total_members()) - BigUint::one();
    let mut entries = Vec::new();
    let mut current = vec![0u64; k as usize];
    descend(
        k as usize,
        target,
        &caps,
        &weights,
        &prefix_cap,
        &mut current,
        &mut entries,
    );
    Ok(SolutionSet { k, entries })
}

fn descend(
    d: usize,
    remaining: BigUint,
    caps: &[u64],
    weights: &[BigUint],
    prefix_cap: &[BigUint],
    current: &mut Vec<u64>,
    out: &mut Vec<HyperplaneType>,
) {
    if d == 0 {
        if remaining.is_zero() {
            out.push(HyperplaneType::new(current.clone()));
        }
        return;
    }
    let w = &weights[d - 1];
    let by_weight = (&remaining / w).min(BigUint::from(caps[d - 1]));
    let max_b = u64::try_from(&by_weight).unwrap();
    for b in (0..=max_b).rev() {
        let rem = &remaining - w * BigUint::from(b);
        if rem > prefix_cap[d - 1] {
            continue;
        }
        current[d - 1] = b;
        descend(d - 1, rem, caps, weights, prefix_cap, current, out);
    }
    current[d - 1] = 0;
}

/// Double-counting bounds for tuples of members: pick counts[i] members of
/// dimension dims[i] and count the hyperplanes containing all of them.
#[derive(Debug, Clone)]
pub struct TupleBounds {
    pub dims: Vec<u32>,
    pub counts: Vec<u64>,
    pub lower: BigUint,
    pub upper: BigUint,
}

impl TupleBounds {
    /// Per-variable coefficient: the number of such tuples inside one
    /// hyperplane of the given section type.
    pub fn coefficient(&self, b: &HyperplaneType) -> BigUint {
        self.dims
            .iter()
            .zip(&self.counts)
            .map(|(&d, &k)| binomial(b.count(d), k))
            .product()
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self
            .dims
            .iter()
            .zip(&self.counts)
            .map(|(d, k)| if *k == 1 { format!("{d}") } else { format!("{d}^{k}") })
            .collect();
        format!("tuple {}", parts.join(" "))
    }
}

/// The two outer values of the tuple double count.  The span of any such
/// tuple has dimension at most sum k_i d_i, which gives the lower bound;
/// the upper bound comes from the fewest dimensions a tuple can be pinned
/// to, decided by the two largest selections.
pub fn tuple_count_bounds(
    ty: &PartitionType,
    dims: &[u32],
    counts: &[u64],
) -> Result<TupleBounds> {
    if dims.is_empty() || dims.len() != counts.len() {
        return Err(Error::BadParameter(
            "tuple selection needs matching, nonempty dims and counts".into(),
        ));
    }
    if !dims.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::BadParameter(
            "tuple dims must be strictly increasing".into(),
        ));
    }
    for (&d, &k) in dims.iter().zip(counts) {
        if d == 0 || d > ty.max_dim() {
            return Err(Error::BadParameter(format!(
                "tuple dimension {d} outside the type"
            )));
        }
        if k == 0 || ty.count(d) < k {
            return Err(Error::BadParameter(format!(
                "cannot pick {k} members of dimension {d} from {}",
                ty.count(d)
            )));
        }
    }
    let n = ty.n();
    let q = ty.q();
    let base: BigUint = dims
        .iter()
        .zip(counts)
        .map(|(&d, &k)| binomial(ty.count(d), k))
        .product();
    let span: u64 = dims
        .iter()
        .zip(counts)
        .map(|(&d, &k)| d as u64 * k)
        .sum();
    let span = u32::try_from(span.min(u64::from(n) + 1)).unwrap();
    let l = dims.len();
    let d_min = if counts[l - 1] >= 2 {
        2 * dims[l - 1]
    } else if l >= 2 {
        dims[l - 1] + dims[l - 2]
    } else {
        dims[0]
    };
    Ok(TupleBounds {
        dims: dims.to_vec(),
        counts: counts.to_vec(),
        lower: &base * hyperplanes_through(span, n, q),
        upper: &base * hyperplanes_through(d_min, n, q),
    })
}

#[derive(Debug, Clone)]
pub struct ConstraintRow {
    pub label: String,
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// Exact linear constraints on the multiplicity vector s of section types.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    ty: PartitionType,
    vars: SolutionSet,
    rows: Vec<ConstraintRow>,
}

fn rat(u: &BigUint) -> BigRational {
    BigRational::from(BigInt::from(u.clone()))
}

impl ConstraintSystem {
    pub fn partition_type(&self) -> &PartitionType {
        &self.ty
    }

    pub fn vars(&self) -> &SolutionSet {
        &self.vars
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn total_hyperplanes(&self) -> BigUint {
        hyperplanes_through(0, self.ty.n(), self.ty.q())
    }

    pub fn to_lp(&self) -> RationalLP {
        let mut lp = RationalLP::new(self.vars.len());
        for row in &self.rows {
            lp.push_row(row.coeffs.clone(), row.relation, row.rhs.clone());
        }
        let total = rat(&self.total_hyperplanes());
        for j in 0..self.vars.len() {
            lp.set_upper(j, total.clone());
        }
        lp
    }

    /// Drops every variable not listed; the kept columns keep their order.
    pub fn restrict(&self, keep: &[usize]) -> ConstraintSystem {
        let entries: Vec<HyperplaneType> =
            keep.iter().map(|&i| self.vars.entries[i].clone()).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| ConstraintRow {
                label: r.label.clone(),
                coeffs: keep.iter().map(|&i| r.coeffs[i].clone()).collect(),
                relation: r.relation,
                rhs: r.rhs.clone(),
            })
            .collect();
        ConstraintSystem {
            ty: self.ty.clone(),
            vars: SolutionSet {
                k: self.vars.k,
                entries,
            },
            rows,
        }
    }

    /// Aligns a census (section type -> hyperplane count) with the variable
    /// order.  A census key outside the solution set is an error: it would
    /// mean the census does not belong to this type.
    pub fn census_to_point(&self, census: &BTreeMap<Vec<u64>, u64>) -> Result<Vec<u64>> {
        let mut point = vec![0u64; self.vars.len()];
        for (b, &count) in census {
            let Some(i) = self.vars.position(b) else {
                return Err(Error::BadParameter(format!(
                    "section type {b:?} is not admissible for {}",
                    self.ty
                )));
            };
            point[i] = count;
        }
        Ok(point)
    }

    pub fn check_census(&self, point: &[u64]) -> bool {
        let as_q: Vec<BigRational> = point
            .iter()
            .map(|&v| BigRational::from(BigInt::from(v)))
            .collect();
        self.to_lp().check_point(&as_q)
    }
}

/// Assembles the constraint polytope for a type: the total hyperplane
/// count, the exact incidence identities for single members, same-dimension
/// pairs and cross-dimension pairs, and optionally the two-sided tuple
/// bounds for selections of total size 3..=depth.
pub fn build_polytope(ty: &PartitionType, depth: u32) -> Result<ConstraintSystem> {
    if !check_first_packing(ty) || !check_dimension(ty) {
        return Err(Error::InvalidType(format!(
            "type {ty} fails packing or dimension; no polytope"
        )));
    }
    let vars = enumerate_hyperplane_types(ty)?;
    let n = ty.n();
    let q = ty.q();
    let nv = vars.len();
    let mut rows = Vec::new();

    let coeffs_for = |f: &dyn Fn(&HyperplaneType) -> BigUint| -> Vec<BigRational> {
        vars.entries().iter().map(|b| rat(&f(b))).collect()
    };

    rows.push(ConstraintRow {
        label: "hyperplane count".into(),
        coeffs: vec![BigRational::one(); nv],
        relation: Relation::Eq,
        rhs: rat(&hyperplanes_through(0, n, q)),
    });

    for d in 1..=ty.max_dim() {
        let m = ty.count(d);
        if m > 0 && d + 2 <= n {
            rows.push(ConstraintRow {
                label: format!("incidence d={d}"),
                coeffs: coeffs_for(&|b| BigUint::from(b.count(d))),
                relation: Relation::Eq,
                rhs: rat(&(BigUint::from(m) * hyperplanes_through(d, n, q))),
            });
        }
        if m >= 2 && 2 * d < n {
            rows.push(ConstraintRow {
                label: format!("pairs within d={d}"),
                coeffs: coeffs_for(&|b| binomial(b.count(d), 2)),
                relation: Relation::Eq,
                rhs: rat(&(binomial(m, 2) * hyperplanes_through(2 * d, n, q))),
            });
        }
    }

    for d in 1..=ty.max_dim() {
        for dp in d + 1..=ty.max_dim() {
            if ty.count(d) == 0 || ty.count(dp) == 0 || dp + 2 > n {
                continue;
            }
            rows.push(ConstraintRow {
                label: format!("pairs d={d} d'={dp}"),
                coeffs: coeffs_for(&|b| BigUint::from(b.count(d) * b.count(dp))),
                relation: Relation::Eq,
                rhs: rat(
                    &(BigUint::from(ty.count(d) * ty.count(dp))
                        * hyperplanes_through(d + dp, n, q)),
                ),
            });
        }
    }

    if depth >= 3 {
        let present: Vec<u32> = ty.dims_present();
        let mut selection: Vec<(u32, u64)> = Vec::new();
        emit_tuple_rows(ty, &vars, &present, 0, 0, depth as u64, &mut selection, &mut rows)?;
    }

    Ok(ConstraintSystem {
        ty: ty.clone(),
        vars,
        rows,
    })
}

fn emit_tuple_rows(
    ty: &PartitionType,
    vars: &SolutionSet,
    present: &[u32],
    from: usize,
    picked: u64,
    depth: u64,
    selection: &mut Vec<(u32, u64)>,
    rows: &mut Vec<ConstraintRow>,
) -> Result<()> {
    if picked >= 3 {
        let dims: Vec<u32> = selection.iter().map(|&(d, _)| d).collect();
        let counts: Vec<u64> = selection.iter().map(|&(_, k)| k).collect();
        let bounds = tuple_count_bounds(ty, &dims, &counts)?;
        let coeffs: Vec<BigRational> = vars
            .entries()
            .iter()
            .map(|b| rat(&bounds.coefficient(b)))
            .collect();
        rows.push(ConstraintRow {
            label: format!("{} lower", bounds.label()),
            coeffs: coeffs.clone(),
            relation: Relation::Ge,
            rhs: rat(&bounds.lower),
        });
        rows.push(ConstraintRow {
            label: format!("{} upper", bounds.label()),
            coeffs,
            relation: Relation::Le,
            rhs: rat(&bounds.upper),
        });
    }
    for (i, &d) in present.iter().enumerate().skip(from) {
        let avail = ty.count(d).min(depth - picked);
        for k in 1..=avail {
            selection.push((d, k));
            emit_tuple_rows(ty, vars, present, i + 1, picked + k, depth, selection, rows)?;
            selection.pop();
        }
    }
    Ok(())
}

/// Counts, for every hyperplane of the ambient space, the members of each
/// dimension it contains.  Hyperplanes are identified with their normal
/// vectors up to scalars.
pub fn hyperplane_census(p: &ExplicitPartition) -> Result<BTreeMap<Vec<u64>, u64>> {
    let report = p.verify()?;
    let Some(observed) = report.observed else {
        return Err(Error::InvalidType(format!(
            "census requires a valid partition: {}",
            report.detail
        )));
    };
    let k = observed.max_dim() as usize;
    let f = p.field();
    let mut census: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for normal in projective_reps(f, p.n()) {
        let mut b = vec![0u64; k];
        for member in p.members() {
            let inside = member
                .basis()
                .iter()
                .all(|row| dot(f, row, &normal).0 == 0);
            if inside {
                b[member.dim() - 1] += 1;
            }
        }
        *census.entry(b).or_insert(0) += 1;
    }
    Ok(census)
}
