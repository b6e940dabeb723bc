//! Exact integer feasibility for small linear systems.
//!
//! The systems coming out of the hyperplane constraints are tiny (tens of
//! variables) but their emptiness is the whole point, so everything here is
//! exact rational arithmetic: a bounded-variable phase-1 simplex for the LP
//! relaxation and depth-first branch and bound on top of it.  No floating
//! point, no external solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "≤",
            Relation::Ge => "≥",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s {
            "=" | "==" => Some(Relation::Eq),
            "≤" | "<=" => Some(Relation::Le),
            "≥" | ">=" => Some(Relation::Ge),
            _ => None,
        }
    }

    pub fn compare(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Relation::parse(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown relation {raw:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct LinearRow {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// A system of linear rows over variables x_1..x_n with implicit bounds
/// 0 ≤ x_j (≤ upper_j when set).
#[derive(Debug, Clone)]
pub struct RationalLP {
    num_vars: usize,
    rows: Vec<LinearRow>,
    upper: Vec<Option<BigRational>>,
}

impl RationalLP {
    pub fn new(num_vars: usize) -> RationalLP {
        RationalLP {
            num_vars,
            rows: Vec::new(),
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn upper(&self, j: usize) -> Option<&BigRational> {
        self.upper[j].as_ref()
    }

    pub fn push_row(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.num_vars, "row width mismatch");
        self.rows.push(LinearRow {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_upper(&mut self, j: usize, u: BigRational) {
        self.upper[j] = Some(u);
    }

    /// Exact membership test against the rows and the variable bounds.
    pub fn check_point(&self, x: &[BigRational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        for (j, v) in x.iter().enumerate() {
            if v.is_negative() {
                return false;
            }
            if let Some(u) = &self.upper[j] {
                if v > u {
                    return false;
                }
            }
        }
        self.rows.iter().all(|row| {
            let lhs: BigRational = row
                .coeffs
                .iter()
                .zip(x)
                .map(|(a, v)| a * v)
                .sum();
            row.relation.compare(&lhs, &row.rhs)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<BigRational>),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Vec<BigInt>),
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    pub nodes: u64,
    pub pivots: u64,
}

pub fn lp_feasible(lp: &RationalLP) -> LpOutcome {
    let lo: Vec<BigRational> = vec![BigRational::zero(); lp.num_vars];
    let hi: Vec<Option<BigRational>> = lp.upper.clone();
    match solve_phase1(lp, &lo, &hi) {
        (Some(x), _) => LpOutcome::Feasible(x),
        (None, _) => LpOutcome::Infeasible,
    }
}

/// Decides whether the system contains a nonnegative integer point.
///
/// Every variable must carry a finite upper bound; branch and bound over an
/// unbounded box could run forever and is rejected up front.  The budget
/// caps the number of LP relaxations solved; when it runs out the verdict is
/// `Unknown`, never a guess.
pub fn integer_point(lp: &RationalLP) -> Result<FeasibilityResult> {
    integer_point_budget(lp, DEFAULT_NODE_BUDGET)
}

pub fn integer_point_budget(lp: &RationalLP, budget: u64) -> Result<FeasibilityResult> {
    for (j, u) in lp.upper.iter().enumerate() {
        if u.is_none() {
            return Err(Error::BadParameter(format!(
                "variable {j} has no upper bound"
            )));
        }
    }
    if lp.num_vars == 0 {
        let ok = lp
            .rows
            .iter()
            .all(|r| r.relation.compare(&BigRational::zero(), &r.rhs));
        return Ok(FeasibilityResult {
            verdict: if ok {
                Verdict::Feasible(Vec::new())
            } else {
                Verdict::Infeasible
            },
            nodes: 0,
            pivots: 0,
        });
    }

    let mut root_hi = Vec::with_capacity(lp.num_vars);
    for u in &lp.upper {
        let u = u.as_ref().unwrap();
        if u.is_negative() {
            return Ok(FeasibilityResult {
                verdict: Verdict::Infeasible,
                nodes: 0,
                pivots: 0,
            });
        }
        root_hi.push(u.floor().to_integer());
    }
    let root_lo = vec![BigInt::zero(); lp.num_vars];

    let mut stack: Vec<(Vec<BigInt>, Vec<BigInt>)> = vec![(root_lo, root_hi)];
    let mut nodes = 0u64;
    let mut pivots = 0u64;

    while let Some((lo, hi)) = stack.pop() {
        if nodes >= budget {
            return Ok(FeasibilityResult {
                verdict: Verdict::Unknown,
                nodes,
                pivots,
            });
        }
        nodes += 1;
        let lo_q: Vec<BigRational> = lo.iter().map(|v| BigRational::from(v.clone())).collect();
        let hi_q: Vec<Option<BigRational>> = hi
            .iter()
            .map(|v| Some(BigRational::from(v.clone())))
            .collect();
        let (point, p) = solve_phase1(lp, &lo_q, &hi_q);
        pivots += p;
        let Some(x) = point else {
            continue;
        };

        let branch = pick_branch_var(&x);
        match branch {
            None => {
                let witness: Vec<BigInt> = x.iter().map(|v| v.to_integer()).collect();
                let as_q: Vec<BigRational> =
                    witness.iter().map(|v| BigRational::from(v.clone())).collect();
                assert!(lp.check_point(&as_q), "integral LP point failed re-verification");
                return Ok(FeasibilityResult {
                    verdict: Verdict::Feasible(witness),
                    nodes,
                    pivots,
                });
            }
            Some(j) => {
                let fl = x[j].floor().to_integer();
                let mut ceil_lo = lo.clone();
                ceil_lo[j] = &fl + 1;
                let mut floor_hi = hi.clone();
                floor_hi[j] = fl;
                stack.push((ceil_lo, hi));
                stack.push((lo, floor_hi));
            }
        }
    }

    Ok(FeasibilityResult {
        verdict: Verdict::Infeasible,
        nodes,
        pivots,
    })
}

/// Most fractional coordinate (distance to the nearest integer), ties to the
/// lowest index.  None when the point is integral.
fn pick_branch_var(x: &[BigRational]) -> Option<usize> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut best: Option<(usize, BigRational)> = None;
    for (j, v) in x.iter().enumerate() {
        let frac = v - v.floor();
        if frac.is_zero() {
            continue;
        }
        let dist = if frac > half { BigRational::one() - &frac } else { frac };
        match &best {
            Some((_, d)) if *d >= dist => {}
            _ => best = Some((j, dist)),
        }
    }
    best.map(|(j, _)| j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Phase-1 bounded-variable simplex over the rows of `lp` with the box
/// [lo_j, hi_j].  Returns a feasible point in original coordinates, or None,
/// plus the pivot count.  Bland's rule everywhere, so termination is
/// unconditional; artificial columns are barred from re-entering.
fn solve_phase1(
    lp: &RationalLP,
    lo: &[BigRational],
    hi: &[Option<BigRational>],
) -> (Option<Vec<BigRational>>, u64) {
    let n = lp.num_vars;
    for j in 0..n {
        if let Some(h) = &hi[j] {
            if h < &lo[j] {
                return (None, 0);
            }
        }
    }
    if n == 0 {
        let ok = lp
            .rows
            .iter()
            .all(|r| r.relation.compare(&BigRational::zero(), &r.rhs));
        return (if ok { Some(Vec::new()) } else { None }, 0);
    }

    let m = lp.rows.len();
    if m == 0 {
        return (Some(lo.to_vec()), 0);
    }

    // Columns: structural 0..n (shifted to y = x − lo, 0 ≤ y ≤ width),
    // slacks n..n+m (one per inequality row, width ∞), artificials last.
    let mut width: Vec<Option<BigRational>> = (0..n)
        .map(|j| hi[j].as_ref().map(|h| h - &lo[j]))
        .collect();
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut resid: Vec<BigRational> = Vec::with_capacity(m);
    let num_slack = lp
        .rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let total = n + num_slack + m;
    let art_start = n + num_slack;

    let mut slack_at = n;
    for row in &lp.rows {
        let mut t: Vec<BigRational> = vec![BigRational::zero(); total];
        for (j, a) in row.coeffs.iter().enumerate() {
            t[j] = a.clone();
        }
        match row.relation {
            Relation::Eq => {}
            Relation::Le => {
                t[slack_at] = BigRational::one();
                slack_at += 1;
            }
            Relation::Ge => {
                t[slack_at] = -BigRational::one();
                slack_at += 1;
            }
        }
        let shift: BigRational = row
            .coeffs
            .iter()
            .zip(lo)
            .map(|(a, l)| a * l)
            .sum();
        resid.push(&row.rhs - shift);
        tab.push(t);
    }
    width.extend(std::iter::repeat_n(None, num_slack));
    width.extend(std::iter::repeat_n(None, m));

    // One artificial per row, oriented so its starting value is |residual|.
    let mut state: Vec<VarState> = vec![VarState::AtLower; total];
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut val: Vec<BigRational> = Vec::with_capacity(m);
    for i in 0..m {
        if resid[i].is_negative() {
            for x in tab[i].iter_mut() {
                *x = -x.clone();
            }
            resid[i] = -resid[i].clone();
        }
        tab[i][art_start + i] = BigRational::one();
        basis.push(art_start + i);
        state[art_start + i] = VarState::Basic(i);
        val.push(resid[i].clone());
    }

    let mut pivots = 0u64;
    loop {
        let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i] >= art_start).collect();
        let phi: BigRational = art_rows.iter().map(|&i| val[i].clone()).sum();
        if phi.is_zero() {
            let mut y = vec![BigRational::zero(); n];
            for j in 0..n {
                y[j] = match state[j] {
                    VarState::Basic(i) => val[i].clone(),
                    VarState::AtLower => BigRational::zero(),
                    VarState::AtUpper => width[j].clone().unwrap(),
                } + &lo[j];
            }
            return (Some(y), pivots);
        }

        // Entering: smallest non-artificial index with a favorable reduced
        // cost; fixed variables can never move.
        let mut entering: Option<(usize, i8)> = None;
        for j in 0..art_start {
            let dir = match state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => 1i8,
                VarState::AtUpper => -1i8,
            };
            if matches!(&width[j], Some(w) if w.is_zero()) {
                continue;
            }
            let rc: BigRational = -art_rows
                .iter()
                .map(|&i| tab[i][j].clone())
                .sum::<BigRational>();
            let favorable = match dir {
                1 => rc.is_negative(),
                _ => rc.is_positive(),
            };
            if favorable {
                entering = Some((j, dir));
                break;
            }
        }
        let Some((j, dir)) = entering else {
            return (None, pivots);
        };

        // Ratio test: the entering variable's own width competes with the
        // basic variables it pushes to a bound; ties go to the smallest
        // variable index (Bland).
        let mut best: Option<(BigRational, usize, Option<usize>)> = None;
        let mut consider = |delta: BigRational, var: usize, row: Option<usize>| {
            match &best {
                Some((d, v, _)) if *d < delta || (*d == delta && *v <= var) => {}
                _ => best = Some((delta, var, row)),
            }
        };
        if let Some(w) = &width[j] {
            consider(w.clone(), j, None);
        }
        let dirq = BigRational::from(BigInt::from(dir));
        for i in 0..m {
            let t = &dirq * &tab[i][j];
            if t.is_positive() {
                consider(&val[i] / &t, basis[i], Some(i));
            } else if t.is_negative() {
                if let Some(wb) = &width[basis[i]] {
                    consider((wb - &val[i]) / -&t, basis[i], Some(i));
                }
            }
        }
        let Some((delta, _, leave_row)) = best else {
            // A favorable unbounded ray would drive the artificial sum below
            // zero, which is impossible; the guard is purely defensive.
            return (None, pivots);
        };

        pivots += 1;
        for i in 0..m {
            let change = &dirq * &tab[i][j] * &delta;
            val[i] -= change;
        }
        match leave_row {
            None => {
                state[j] = match state[j] {
                    VarState::AtLower => VarState::AtUpper,
                    _ => VarState::AtLower,
                };
            }
            Some(r) => {
                let leaving = basis[r];
                let t = &dirq * &tab[r][j];
                state[leaving] = if t.is_positive() {
                    VarState::AtLower
                } else {
                    VarState::AtUpper
                };
                let entering_val = match (dir, &width[j]) {
                    (1, _) => delta.clone(),
                    (_, Some(w)) => w - &delta,
                    (_, None) => unreachable!("descent from an infinite bound"),
                };
                val[r] = entering_val;
                basis[r] = j;
                state[j] = VarState::Basic(r);
                let pivot = tab[r][j].clone();
                for x in tab[r].iter_mut() {
                    *x /= &pivot;
                }
                for i in 0..m {
                    if i == r || tab[i][j].is_zero() {
                        continue;
                    }
                    let f = tab[i][j].clone();
                    for c in 0..total {
                        let t = &f * &tab[r][c];
                        tab[i][c] -= t;
                    }
                }
                for i in 0..m {
                    if i != r {
                        if let VarState::Basic(row) = state[basis[i]] {
                            debug_assert_eq!(row, i);
                        }
                    }
                }
            }
        }
    }
}
