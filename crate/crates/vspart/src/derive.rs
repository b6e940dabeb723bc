//! Recursive feasibility of partition types through hyperplane sections.
//!
//! A hyperplane meets each member of a partition either fully or in a
//! hyperplane of the member, so every admissible section type b turns a
//! type of V(n,q) into a type of V(n-1,q).  A type is judged infeasible
//! when a cheap necessary condition fails, when its section polytope has
//! an empty integer hull, or when no integer point survives restriction
//! to sections whose derived types are feasible in turn (no green point).
//! Feasible always means "not excluded"; only an explicit construction
//! shows a type is realizable.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{deficit_bound, deficit_bound_sweep};
use crate::hyperplane::{build_polytope, HyperplaneType};
use crate::intfeas::{integer_point_budget, Verdict as LatticeVerdict, DEFAULT_NODE_BUDGET};
use crate::partition::{
    check_dimension, check_first_packing, check_tail, size_bounds, PartitionType, Verdict,
};
use crate::{Error, Result};

/// Why a type was excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    Packing,
    Dimension,
    Tail,
    Bounds,
    PolytopeEmpty,
    NoGreenPoint,
    Budget,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::Packing => "packing",
            Reason::Dimension => "dimension",
            Reason::Tail => "tail",
            Reason::Bounds => "bounds",
            Reason::PolytopeEmpty => "polytope-empty",
            Reason::NoGreenPoint => "no-green-point",
            Reason::Budget => "budget",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Judgment {
    Feasible,
    Infeasible(Reason),
    Unknown,
}

impl Judgment {
    pub fn is_feasible(self) -> bool {
        self == Judgment::Feasible
    }

    pub fn reason(self) -> Option<Reason> {
        match self {
            Judgment::Infeasible(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Feasible => write!(f, "FEASIBLE"),
            Judgment::Infeasible(r) => write!(f, "INFEASIBLE ({r})"),
            Judgment::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub ty: PartitionType,
    pub judgment: Judgment,
    /// Recursion depth the judgment needed: 0 for immediate decisions,
    /// otherwise one more than the deepest consulted child.
    pub depth: u32,
}

/// The section-type display: m(b)_i = b_i + (m_{i+1} - b_{i+1}).
///
/// b must be admissible for the parent: componentwise at most m, at most 1
/// in dimensions d with 2d >= n, and weighted to the second packing
/// identity sum b_d q^d = (sum m_d) - 1.
pub fn derived_type(ty: &PartitionType, b: &HyperplaneType) -> Result<PartitionType> {
    let n = ty.n();
    let q = ty.q();
    let k = ty.max_dim();
    if n < 2 {
        return Err(Error::BadParameter("no hyperplanes below dimension 2".into()));
    }
    if b.k() != k {
        return Err(Error::InvalidType(format!(
            "section type has top dimension {}, parent has {k}",
            b.k()
        )));
    }
    let mut weighted = BigUint::zero();
    for d in 1..=k {
        let bd = b.count(d);
        if bd > ty.count(d) {
            return Err(Error::InvalidType(format!(
                "section count {bd} exceeds m_{d} = {}",
                ty.count(d)
            )));
        }
        if 2 * d >= n && bd > 1 {
            return Err(Error::InvalidType(format!(
                "dimension {d} admits at most one member per hyperplane"
            )));
        }
        weighted += BigUint::from(bd) * BigUint::from(q).pow(d);
    }
    if weighted != BigUint::from(ty.total_members() - 1) {
        return Err(Error::InvalidType(
            "section type violates the second packing identity".into(),
        ));
    }
    let mut child = vec![0u64; k as usize];
    for i in 1..=k {
        let above = if i < k {
            ty.count(i + 1) - b.count(i + 1)
        } else {
            0
        };
        child[i as usize - 1] = b.count(i) + above;
    }
    while child.last() == Some(&0) {
        child.pop();
    }
    PartitionType::new(n - 1, q, child)
}

/// All types obtained by shattering one member of dimension d >= 2 into a
/// d'-dimensional subspace and (q^d - q^d')/(q-1) lines.  A partition of
/// the parent type yields one of each child type, so exclusion transfers
/// from child to parent; these moves are offered to callers and are not
/// part of feasible().
pub fn split_derivations(ty: &PartitionType) -> Vec<PartitionType> {
    let q = ty.q();
    let mut out = Vec::new();
    for d in 2..=ty.max_dim() {
        if ty.count(d) == 0 {
            continue;
        }
        for dp in 1..d {
            let lines = (BigUint::from(q).pow(d) - BigUint::from(q).pow(dp))
                / BigUint::from(q - 1);
            let lines = u64::try_from(&lines).expect("line count fits in a member count");
            let mut m = ty.counts().to_vec();
            m[d as usize - 1] -= 1;
            m[dp as usize - 1] += 1;
            m[0] += lines;
            while m.last() == Some(&0) {
                m.pop();
            }
            out.push(PartitionType::new(ty.n(), q, m).expect("split of a valid type"));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct FeasibleOptions {
    /// Consult the deficit bounds (even n) before building the polytope.
    pub use_bounds: bool,
    /// Recursion cutoff; None recurses down to the base case.
    pub max_depth: Option<u32>,
    /// Node budget for each lattice-point search.
    pub node_budget: u64,
    /// Constraint depth passed to the polytope builder; 2 emits the pair
    /// rows, higher values add two-sided tuple rows.
    pub tuple_depth: u32,
}

impl Default for FeasibleOptions {
    fn default() -> FeasibleOptions {
        FeasibleOptions {
            use_bounds: true,
            max_depth: None,
            node_budget: DEFAULT_NODE_BUDGET,
            tuple_depth: 2,
        }
    }
}

/// Judging context: options plus a write-once memo of settled verdicts.
/// Unknown verdicts are never cached, so raising the budget on a fresh
/// context re-decides them.
pub struct FeasibilityContext {
    opts: FeasibleOptions,
    memo: Mutex<HashMap<PartitionType, FeasibilityVerdict>>,
}

impl FeasibilityContext {
    pub fn new(opts: FeasibleOptions) -> FeasibilityContext {
        FeasibilityContext {
            opts,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn options(&self) -> &FeasibleOptions {
        &self.opts
    }

    pub fn feasible(&self, ty: &PartitionType) -> Result<FeasibilityVerdict> {
        self.judge(ty, self.opts.max_depth)
    }

    fn judge(&self, ty: &PartitionType, depth_left: Option<u32>) -> Result<FeasibilityVerdict> {
        if let Some(hit) = self.memo.lock().unwrap().get(ty) {
            return Ok(hit.clone());
        }
        let v = self.evaluate(ty, depth_left)?;
        if v.judgment != Judgment::Unknown {
            self.memo
                .lock()
                .unwrap()
                .entry(ty.clone())
                .or_insert_with(|| v.clone());
        }
        Ok(v)
    }

    fn evaluate(&self, ty: &PartitionType, depth_left: Option<u32>) -> Result<FeasibilityVerdict> {
        let done = |judgment: Judgment, depth: u32| FeasibilityVerdict {
            ty: ty.clone(),
            judgment,
            depth,
        };
        if !check_first_packing(ty) {
            return Ok(done(Judgment::Infeasible(Reason::Packing), 0));
        }
        if !check_dimension(ty) {
            return Ok(done(Judgment::Infeasible(Reason::Dimension), 0));
        }
        if ty.n() <= 2 {
            return Ok(done(Judgment::Feasible, 0));
        }
        if check_tail(ty).verdict == Verdict::Fails {
            return Ok(done(Judgment::Infeasible(Reason::Tail), 0));
        }
        if size_bounds(ty).verdict == Verdict::Fails {
            return Ok(done(Judgment::Infeasible(Reason::Bounds), 0));
        }
        if self.opts.use_bounds && ty.n() % 2 == 0 {
            for d in 1..ty.n() / 2 {
                if ty.count(d) > 0 && deficit_bound(ty, d).violated == Some(true) {
                    return Ok(done(Judgment::Infeasible(Reason::Bounds), 0));
                }
            }
            if deficit_bound_sweep(ty).violated == Some(true) {
                return Ok(done(Judgment::Infeasible(Reason::Bounds), 0));
            }
        }

        let system = build_polytope(ty, self.opts.tuple_depth)?;
        let root = integer_point_budget(&system.to_lp(), self.opts.node_budget)?;
        match &root.verdict {
            LatticeVerdict::Infeasible => {
                return Ok(done(Judgment::Infeasible(Reason::PolytopeEmpty), 0))
            }
            LatticeVerdict::Unknown => return Ok(done(Judgment::Unknown, 0)),
            LatticeVerdict::Feasible(_) => {}
        }
        if depth_left == Some(0) {
            return Ok(done(Judgment::Unknown, 0));
        }
        let next_left = depth_left.map(|d| d - 1);

        let mut settled = Vec::new();
        let mut open = Vec::new();
        let mut deepest = 0;
        for (i, b) in system.vars().entries().iter().enumerate() {
            let child = derived_type(ty, b)?;
            let verdict = self.judge(&child, next_left)?;
            deepest = deepest.max(verdict.depth);
            match verdict.judgment {
                Judgment::Feasible => settled.push(i),
                Judgment::Unknown => open.push(i),
                Judgment::Infeasible(_) => {}
            }
        }
        let depth = deepest + 1;

        // The total row forces a positive census, so an empty support set
        // is infeasible without solving anything.
        let strict = if settled.is_empty() {
            LatticeVerdict::Infeasible
        } else {
            integer_point_budget(&system.restrict(&settled).to_lp(), self.opts.node_budget)?.verdict
        };
        if matches!(strict, LatticeVerdict::Feasible(_)) {
            return Ok(done(Judgment::Feasible, depth));
        }
        if open.is_empty() {
            return Ok(match strict {
                LatticeVerdict::Infeasible => done(Judgment::Infeasible(Reason::NoGreenPoint), depth),
                _ => done(Judgment::Unknown, depth),
            });
        }
        // Some children are undecided.  Adding their columns gives an
        // optimistic relaxation: emptiness still proves no green point,
        // and a point supported only on settled columns is still green.
        let mut widened = settled.clone();
        widened.extend(open.iter().copied());
        widened.sort_unstable();
        let relaxed = integer_point_budget(&system.restrict(&widened).to_lp(), self.opts.node_budget)?;
        Ok(match &relaxed.verdict {
            LatticeVerdict::Infeasible => done(Judgment::Infeasible(Reason::NoGreenPoint), depth),
            LatticeVerdict::Feasible(point) => {
                let green = point
                    .iter()
                    .enumerate()
                    .all(|(j, v)| v.is_zero() || settled.contains(&widened[j]));
                if green {
                    done(Judgment::Feasible, depth)
                } else {
                    done(Judgment::Unknown, depth)
                }
            }
            LatticeVerdict::Unknown => done(Judgment::Unknown, depth),
        })
    }
}

/// One-off judgment with default options.
pub fn feasible(ty: &PartitionType) -> Result<FeasibilityVerdict> {
    FeasibilityContext::new(FeasibleOptions::default()).feasible(ty)
}

/// All types of V(n,q) passing the first packing condition, highest
/// dimension chosen first, then filtered by the dimension condition.
pub fn enumerate_types(n: u32, q: u64) -> Result<Vec<PartitionType>> {
    if crate::gfq::prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let too_large = n == 0
        || (q as u128)
            .checked_pow(n)
            .is_none_or(|total| total > 1 << 24);
    if too_large {
        return Err(Error::SpaceTooLarge(q.saturating_pow(n)));
    }
    let weights: Vec<u128> = (1..=n).map(|d| (q as u128).pow(d) - 1).collect();
    let target = (q as u128).pow(n) - 1;
    let mut out = Vec::new();
    let mut stack: Vec<u64> = Vec::new();

    fn descend(
        d: u32,
        remaining: u128,
        weights: &[u128],
        stack: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if d == 1 {
            stack.push(remaining as u64);
            out.push(stack.iter().rev().copied().collect());
            stack.pop();
            return;
        }
        let w = weights[d as usize - 1];
        for count in 0..=(remaining / w) {
            stack.push(count as u64);
            descend(d - 1, remaining - count * w, weights, stack, out);
            stack.pop();
        }
    }

    let mut raw = Vec::new();
    descend(n, target, &weights, &mut stack, &mut raw);
    for mut m in raw {
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.is_empty() {
            continue;
        }
        let ty = PartitionType::new(n, q, m)?;
        debug_assert!(check_first_packing(&ty));
        if check_dimension(&ty) {
            out.push(ty);
        }
    }
    Ok(out)
}

/// The classification known for q = 2 up to dimension 7: realizable iff
/// packing, dimension and tail all hold, the partition does not ask for
/// exactly two lines, and the type is not one of the five sporadic
/// exceptions.  None outside that range.
///
/// The two-line exclusion is not part of our tail check (whose q = 2
/// exemption admits any even count), but it is forced here: a functional
/// vanishing on exactly one of two independent vectors always exists, so
/// hyperplanes see both parities of the line count, while the section
/// size equation fixes that parity.  Dropping it would turn types like
/// (1,18,2) in V(6,2) into extra exceptions.
pub fn published_realizable(ty: &PartitionType) -> Option<bool> {
    if ty.q() != 2 || ty.n() > 7 {
        return None;
    }
    let passes = check_first_packing(ty)
        && check_dimension(ty)
        && check_tail(ty).verdict != Verdict::Fails
        && ty.count(1) != 2;
    let counts = ty.counts();
    let sporadic = match ty.n() {
        6 => counts == [5, 3, 7],
        7 => {
            counts == [0, 7, 13, 1]
                || counts == [3, 6, 13, 1]
                || counts == [5, 3, 14, 1]
                || counts == [5, 1, 17]
        }
        _ => false,
    };
    Some(passes && !sporadic)
}

#[derive(Debug, Clone)]
pub struct ClassifyRecord {
    pub verdict: FeasibilityVerdict,
    /// What the known classification says, where it applies.
    pub published: Option<bool>,
}

/// Judge every packing- and dimension-valid type of V(n,q).
pub fn classify(n: u32, q: u64, ctx: &FeasibilityContext) -> Result<Vec<ClassifyRecord>> {
    let mut out = Vec::new();
    for ty in enumerate_types(n, q)? {
        let published = published_realizable(&ty);
        let verdict = ctx.feasible(&ty)?;
        out.push(ClassifyRecord { verdict, published });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32, q: u64, desc: &[u64]) -> PartitionType {
        PartitionType::from_descending(n, q, desc).unwrap()
    }

    fn b(asc: &[u64]) -> HyperplaneType {
        HyperplaneType::new(asc.to_vec())
    }

    #[test]
    fn derived_type_display() {
        let parent = t(8, 2, &[13, 6, 0, 18]);
        let child = derived_type(&parent, &b(&[2, 0, 2, 1])).unwrap();
        assert_eq!(child, t(7, 2, &[1, 14, 4, 2]));
        assert!(check_first_packing(&child));

        let spread = t(8, 2, &[17, 0, 0, 0]);
        let child = derived_type(&spread, &b(&[0, 0, 0, 1])).unwrap();
        assert_eq!(child, t(7, 2, &[1, 16, 0, 0]));

        let lines = t(3, 2, &[7]);
        let child = derived_type(&lines, &b(&[3])).unwrap();
        assert_eq!(child, t(2, 2, &[3]));
    }

    #[test]
    fn derived_type_rejects_inadmissible_sections() {
        let parent = t(8, 2, &[13, 6, 0, 18]);
        assert!(derived_type(&parent, &b(&[2, 0, 2, 2])).is_err());
        assert!(derived_type(&parent, &b(&[2, 0, 7, 0])).is_err());
        assert!(derived_type(&parent, &b(&[2, 0, 2])).is_err());
        assert!(derived_type(&parent, &b(&[18, 0, 2, 1])).is_err());
    }

    #[test]
    fn split_moves() {
        let children = split_derivations(&t(8, 2, &[12, 8, 0, 19]));
        assert!(children.contains(&t(8, 2, &[12, 7, 0, 26])));
        assert!(children.contains(&t(8, 2, &[11, 9, 0, 27])));
        assert!(children.contains(&t(8, 2, &[11, 8, 1, 31])));
        assert_eq!(children.len(), 3 + 2);
        for child in &children {
            assert!(check_first_packing(child), "{child}");
        }

        let children = split_derivations(&t(8, 3, &[76, 9, 0, 123]));
        assert!(children.contains(&t(8, 3, &[76, 8, 0, 136])));

        assert!(split_derivations(&t(3, 2, &[7])).is_empty());
    }

    #[test]
    fn immediate_rejections() {
        let ctx = FeasibilityContext::new(FeasibleOptions::default());
        let v = ctx.feasible(&t(6, 2, &[0, 9, 0, 1])).unwrap();
        assert_eq!(v.judgment, Judgment::Infeasible(Reason::Packing));
        assert_eq!(v.depth, 0);

        let v = ctx.feasible(&t(6, 2, &[1, 1, 0, 41])).unwrap();
        assert_eq!(v.judgment, Judgment::Infeasible(Reason::Dimension));

        let v = ctx.feasible(&t(5, 2, &[10, 1])).unwrap();
        assert_eq!(v.judgment, Judgment::Infeasible(Reason::Tail));

        let v = ctx.feasible(&t(8, 2, &[13, 6, 0, 18])).unwrap();
        assert_eq!(v.judgment, Judgment::Infeasible(Reason::Bounds));
        assert_eq!(v.depth, 0);
    }

    #[test]
    fn base_cases() {
        let ctx = FeasibilityContext::new(FeasibleOptions::default());
        for ty in [t(2, 3, &[0, 4]), t(2, 3, &[1, 0]), t(1, 2, &[1])] {
            let v = ctx.feasible(&ty).unwrap();
            assert_eq!(v.judgment, Judgment::Feasible, "{ty}");
            assert_eq!(v.depth, 0);
        }
    }

    fn no_bounds() -> FeasibleOptions {
        FeasibleOptions {
            use_bounds: false,
            ..FeasibleOptions::default()
        }
    }

    #[test]
    fn shallow_exceptions_die_at_the_root() {
        let ctx = FeasibilityContext::new(no_bounds());
        for ty in [t(6, 2, &[7, 3, 5]), t(7, 2, &[17, 1, 5]), t(7, 2, &[1, 14, 3, 5])] {
            let v = ctx.feasible(&ty).unwrap();
            assert_eq!(
                v.judgment,
                Judgment::Infeasible(Reason::PolytopeEmpty),
                "{ty}"
            );
            assert_eq!(v.depth, 0, "{ty}");
        }
    }

    #[test]
    fn deep_exception_needs_recursion() {
        let ctx = FeasibilityContext::new(no_bounds());
        let v = ctx.feasible(&t(7, 2, &[1, 13, 7, 0])).unwrap();
        assert_eq!(v.judgment, Judgment::Infeasible(Reason::NoGreenPoint));
        assert!(v.depth >= 1);
    }

    #[test]
    fn survivor_stays_feasible() {
        let ctx = FeasibilityContext::new(no_bounds());
        let v = ctx.feasible(&t(7, 2, &[1, 13, 6, 3])).unwrap();
        assert_eq!(v.judgment, Judgment::Feasible);
    }

    #[test]
    fn verdicts_are_stable_across_call_orders() {
        let a = FeasibilityContext::new(no_bounds());
        let b = FeasibilityContext::new(no_bounds());
        let types = [
            t(6, 2, &[9, 0, 0]),
            t(6, 2, &[7, 3, 5]),
            t(6, 2, &[8, 0, 7]),
            t(6, 2, &[0, 21, 0]),
        ];
        let first: Vec<_> = types.iter().map(|ty| a.feasible(ty).unwrap()).collect();
        let second: Vec<_> = types
            .iter()
            .rev()
            .map(|ty| b.feasible(ty).unwrap())
            .collect();
        for (x, y) in first.iter().zip(second.iter().rev()) {
            assert_eq!(x, y);
        }
        let again: Vec<_> = types.iter().map(|ty| a.feasible(ty).unwrap()).collect();
        assert_eq!(first, again);
    }

    #[test]
    fn depth_cutoff_reports_unknown() {
        let opts = FeasibleOptions {
            use_bounds: false,
            max_depth: Some(0),
            ..FeasibleOptions::default()
        };
        let ctx = FeasibilityContext::new(opts);
        let v = ctx.feasible(&t(7, 2, &[1, 13, 7, 0])).unwrap();
        assert_eq!(v.judgment, Judgment::Unknown);
    }

    #[test]
    fn type_enumeration_for_small_spaces() {
        let tiny = enumerate_types(2, 2).unwrap();
        assert_eq!(tiny, vec![t(2, 2, &[0, 3]), t(2, 2, &[1, 0])]);

        let v42 = enumerate_types(4, 2).unwrap();
        assert_eq!(v42.len(), 8);
        assert!(v42.contains(&t(4, 2, &[5, 0])));
        assert!(v42.contains(&t(4, 2, &[1, 0, 8])));
        assert!(v42.contains(&t(4, 2, &[1, 0, 0, 0])));
        assert!(!v42.iter().any(|ty| ty.count(3) > 0 && ty.count(2) > 0));
        for ty in &v42 {
            assert!(check_first_packing(ty) && check_dimension(ty));
        }
    }

    #[test]
    fn published_table_bounds() {
        assert_eq!(published_realizable(&t(6, 2, &[7, 3, 5])), Some(false));
        assert_eq!(published_realizable(&t(6, 2, &[9, 0, 0])), Some(true));
        assert_eq!(published_realizable(&t(7, 2, &[1, 13, 6, 3])), Some(false));
        assert_eq!(published_realizable(&t(7, 2, &[17, 1, 5])), Some(false));
        assert_eq!(published_realizable(&t(6, 2, &[1, 18, 2])), Some(false));
        assert_eq!(published_realizable(&t(6, 2, &[7, 4, 2])), Some(false));
        assert_eq!(published_realizable(&t(6, 3, &[0, 91, 0])), None);
        assert_eq!(published_realizable(&t(8, 2, &[17, 0, 0, 0])), None);
    }

    #[test]
    fn tiny_classification() {
        let ctx = FeasibilityContext::new(FeasibleOptions::default());
        let records = classify(2, 2, &ctx).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!(r.verdict.judgment, Judgment::Feasible);
            assert_eq!(r.published, Some(true));
        }
    }
}
