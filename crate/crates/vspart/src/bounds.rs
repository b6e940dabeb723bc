//! Closed-form lower bounds for partitions of V(2t,q) with members of the
//! middle dimension t.
//!
//! Throughout, a type with m_t > 0 in even ambient dimension n = 2t leaves
//! a = q^t + 1 - m_t members missing from a full t-spread; we call a the
//! spread deficit.  The bounds here pin the deficit from below in terms of
//! the member counts in lower dimensions, via an exact rational slack term.
//! Two of the reports (extension_deficit_bound, spread_narrative) depend on
//! whether partial spreads extend to maximal ones, which is a conditional
//! argument; they describe consequences and are never used to exclude a
//! type.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gfq::prime_power;
use crate::partition::PartitionType;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub applicable: bool,
    /// Exact rational value of the underlying expression, when one exists.
    pub value: Option<BigRational>,
    /// Integer lower bound implied for the spread deficit (or deficiency).
    pub implied_lower: Option<BigInt>,
    /// Whether the type's actual deficit falls below the bound.  None for
    /// reports that only narrate.
    pub violated: Option<bool>,
    pub detail: String,
}

impl BoundReport {
    fn not_applicable(name: &str, detail: String) -> BoundReport {
        BoundReport {
            name: name.into(),
            applicable: false,
            value: None,
            implied_lower: None,
            violated: None,
            detail,
        }
    }
}

fn pow(q: u64, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from(n)
}

/// The spread deficit a = q^t + 1 - m_t, defined when n = 2t and m_t > 0.
pub fn spread_deficit(ty: &PartitionType) -> Option<BigInt> {
    let n = ty.n();
    if n % 2 != 0 {
        return None;
    }
    let t = n / 2;
    if ty.count(t) == 0 {
        return None;
    }
    Some(pow(ty.q(), t) + BigInt::one() - BigInt::from(ty.count(t)))
}

/// Exact slack term: m(m-1)(q^{t-d} - 1)^2 / (2 (q^t - 1 - m(q^{t-d}-1))).
///
/// Requires 1 ≤ d < t and a positive denominator, i.e.
/// m < (q^t-1)/(q^{t-d}-1); outside that range the term is meaningless and
/// an error is returned.
pub fn r_slack(q: u64, t: u32, d: u32, m: u64) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::BadParameter("field size must be at least 2".into()));
    }
    if d == 0 || d >= t {
        return Err(Error::BadParameter(format!(
            "slack term needs 1 <= d < t, got d={d}, t={t}"
        )));
    }
    let qq = pow(q, t - d);
    let denom = pow(q, t) - BigInt::one() - BigInt::from(m) * (&qq - BigInt::one());
    if !denom.is_positive() {
        return Err(Error::BadParameter(format!(
            "slack denominator nonpositive for q={q}, t={t}, d={d}, m={m}"
        )));
    }
    let m = BigInt::from(m);
    let numer = &m * (&m - BigInt::one()) * (&qq - BigInt::one()) * (&qq - BigInt::one());
    Ok(BigRational::new(numer, denom * 2))
}

/// Deficit bound from the members of one fixed dimension d < t:
/// a ≥ ⌈m_d - r_slack(q,t,d,m_d)⌉.
pub fn deficit_bound(ty: &PartitionType, d: u32) -> BoundReport {
    let name = format!("deficit d={d}");
    let n = ty.n();
    let q = ty.q();
    if n % 2 != 0 {
        return BoundReport::not_applicable(&name, format!("n = {n} is odd"));
    }
    let t = n / 2;
    let Some(actual) = spread_deficit(ty) else {
        return BoundReport::not_applicable(&name, format!("no members of dimension {t}"));
    };
    if d == 0 || d >= t {
        return BoundReport::not_applicable(&name, format!("d = {d} outside 1..{t}"));
    }
    let m = ty.count(d);
    if m == 0 {
        return BoundReport::not_applicable(&name, format!("no members of dimension {d}"));
    }
    let Ok(slack) = r_slack(q, t, d, m) else {
        return BoundReport::not_applicable(
            &name,
            format!("m_{d} = {m} is too large for the slack term"),
        );
    };
    let bound = (rat(BigInt::from(m)) - &slack).ceil().to_integer();
    let violated = actual < bound;
    BoundReport {
        name,
        applicable: true,
        value: Some(slack.clone()),
        implied_lower: Some(bound.clone()),
        violated: Some(violated),
        detail: format!(
            "m_{d} = {m}, slack {slack}, deficit must be at least {bound}; actual deficit {actual}"
        ),
    }
}

/// Largest x that the slack term accepts for dimension d: the greatest
/// integer strictly below (q^t-1)/(q^{t-d}-1), capped by the member count.
fn slack_cap(q: u64, t: u32, d: u32, m_d: u64) -> u64 {
    let num = pow(q, t) - BigInt::from(2);
    let den = pow(q, t - d) - BigInt::one();
    let cap = num / den;
    u64::try_from(&cap).map_or(m_d, |c| c.min(m_d))
}

/// Best deficit bound over every dimension d < t and every hypothetical
/// sub-count x ≤ m_d that the slack term accepts: the full partition
/// contains x members of dimension d for each such x, so each instance
/// bounds the same deficit.
pub fn deficit_bound_sweep(ty: &PartitionType) -> BoundReport {
    let name = "deficit sweep".to_string();
    let n = ty.n();
    let q = ty.q();
    if n % 2 != 0 {
        return BoundReport::not_applicable(&name, format!("n = {n} is odd"));
    }
    let t = n / 2;
    let Some(actual) = spread_deficit(ty) else {
        return BoundReport::not_applicable(&name, format!("no members of dimension {t}"));
    };
    let mut best: Option<(BigRational, u32, u64)> = None;
    for d in 1..t {
        let cap = slack_cap(q, t, d, ty.count(d));
        for x in 1..=cap {
            let value = rat(BigInt::from(x)) - r_slack(q, t, d, x).unwrap();
            match &best {
                Some((v, _, _)) if *v >= value => {}
                _ => best = Some((value, d, x)),
            }
        }
    }
    match best {
        None => BoundReport {
            name,
            applicable: true,
            value: None,
            implied_lower: Some(BigInt::zero()),
            violated: Some(actual.is_negative()),
            detail: "no lower-dimensional members; only the trivial bound 0".into(),
        },
        Some((value, d, x)) => {
            let bound = value.ceil().to_integer();
            let violated = actual < bound;
            BoundReport {
                name,
                applicable: true,
                value: Some(value.clone()),
                implied_lower: Some(bound.clone()),
                violated: Some(violated),
                detail: format!(
                    "best instance at d={d}, x={x}: value {value}, deficit at least {bound}; actual deficit {actual}"
                ),
            }
        }
    }
}

/// Deficit bound from all members of dimension at least d (below t) taken
/// together; they pairwise intersect trivially, so the same double count
/// applies to the aggregate m = Σ_{d ≤ e < t} m_e.
pub fn aggregated_deficit_bound(ty: &PartitionType, d: u32) -> BoundReport {
    let name = format!("aggregated deficit d={d}");
    let n = ty.n();
    let q = ty.q();
    if n % 2 != 0 {
        return BoundReport::not_applicable(&name, format!("n = {n} is odd"));
    }
    let t = n / 2;
    let Some(actual) = spread_deficit(ty) else {
        return BoundReport::not_applicable(&name, format!("no members of dimension {t}"));
    };
    if 2 * d <= t || d >= t {
        return BoundReport::not_applicable(&name, format!("d = {d} outside t/2..t for t = {t}"));
    }
    let m: u64 = (d..t).map(|e| ty.count(e)).sum();
    let Ok(slack) = r_slack(q, t, d, m) else {
        return BoundReport::not_applicable(
            &name,
            format!("aggregate count {m} is too large for the slack term"),
        );
    };
    let bound = (rat(BigInt::from(m)) - &slack).ceil().to_integer();
    let violated = actual < bound;
    BoundReport {
        name,
        applicable: true,
        value: Some(slack.clone()),
        implied_lower: Some(bound.clone()),
        violated: Some(violated),
        detail: format!(
            "aggregate of dims {d}..{} has {m} members, slack {slack}, deficit at least {bound}; actual deficit {actual}",
            t - 1
        ),
    }
}

/// Whether m members of dimension d (t/2 < d < t) are few enough that the
/// deficit bound collapses to a ≥ m outright: m^2 ≤ 2 q^{2d-t}, the exact
/// integer form of m ≤ √2 · q^{(2d-t)/2}.
pub fn in_small_count_regime(q: u64, t: u32, d: u32, m: u64) -> Result<bool> {
    if 2 * d <= t || d >= t {
        return Err(Error::BadParameter(format!(
            "regime needs t/2 < d < t, got d={d}, t={t}"
        )));
    }
    let lhs = BigInt::from(m) * BigInt::from(m);
    let rhs = pow(q, 2 * d - t) * 2;
    Ok(lhs <= rhs)
}

pub fn small_count_report(ty: &PartitionType, d: u32) -> BoundReport {
    let name = format!("small-count d={d}");
    let n = ty.n();
    if n % 2 != 0 {
        return BoundReport::not_applicable(&name, format!("n = {n} is odd"));
    }
    let t = n / 2;
    let Some(actual) = spread_deficit(ty) else {
        return BoundReport::not_applicable(&name, format!("no members of dimension {t}"));
    };
    let m = ty.count(d);
    match in_small_count_regime(ty.q(), t, d, m) {
        Err(_) => BoundReport::not_applicable(&name, format!("d = {d} outside t/2..t")),
        Ok(false) => BoundReport::not_applicable(
            &name,
            format!("m_{d} = {m} exceeds the small-count threshold"),
        ),
        Ok(true) => {
            let bound = BigInt::from(m);
            BoundReport {
                name,
                applicable: true,
                value: None,
                implied_lower: Some(bound.clone()),
                violated: Some(actual < bound),
                detail: format!(
                    "m_{d} = {m} is small enough that the deficit is at least {m}; actual deficit {actual}"
                ),
            }
        }
    }
}

/// Lower bound on the deficiency δ of a maximal partial t-spread of V(2t,q)
/// that is not a full spread.  Only q matters.  For the two small
/// characteristics the stated constant is 2^{-1/3}, so the ceiling is
/// computed through the cube: the least δ with 2(δ-1)^3 ≥ q^2.
pub fn deficiency_bounds(q: u64) -> Result<BoundReport> {
    let Some((p, h)) = prime_power(q) else {
        return Err(Error::NotPrimePower(q));
    };
    let name = format!("spread deficiency q={q}");
    if h % 2 == 0 {
        let root = BigInt::from(q).sqrt();
        let bound = &root + BigInt::one();
        return Ok(BoundReport {
            name,
            applicable: true,
            value: Some(rat(bound.clone())),
            implied_lower: Some(bound.clone()),
            violated: None,
            detail: format!("q = {q} is a square: deficiency at least sqrt(q)+1 = {bound}"),
        });
    }
    if h > 2 {
        let q2 = BigInt::from(q) * BigInt::from(q);
        let factor: u64 = if p <= 3 { 2 } else { 1 };
        let mut dm1 = BigInt::one();
        while BigInt::from(factor) * &dm1 * &dm1 * &dm1 < q2 {
            dm1 += 1;
        }
        let bound = &dm1 + BigInt::one();
        return Ok(BoundReport {
            name,
            applicable: true,
            value: None,
            implied_lower: Some(bound.clone()),
            violated: None,
            detail: format!(
                "q = {q} = {p}^{h} with odd exponent above 2: deficiency at least {bound} (cube form)"
            ),
        });
    }
    let bound_rat = BigRational::new(BigInt::from(q) + 3, BigInt::from(2));
    let bound = bound_rat.ceil().to_integer();
    Ok(BoundReport {
        name,
        applicable: true,
        value: Some(bound_rat),
        implied_lower: Some(bound.clone()),
        violated: None,
        detail: format!("q = {q} is prime: deficiency at least (q+3)/2, so at least {bound}"),
    })
}

/// Deficit floor under the assumption that the t-dimensional members extend
/// to a full t-spread: a ≥ min(m_d, q^{⌈d/2⌉}+1).  The assumption is not a
/// theorem, so this report never votes on feasibility.
pub fn extension_deficit_bound(q: u64, t: u32, d: u32, m_d: u64) -> Result<BoundReport> {
    if 2 * d <= t || d >= t {
        return Err(Error::BadParameter(format!(
            "extension bound needs t/2 < d < t, got d={d}, t={t}"
        )));
    }
    let cap = pow(q, d.div_ceil(2)) + BigInt::one();
    let bound = BigInt::from(m_d).min(cap.clone());
    Ok(BoundReport {
        name: format!("extension deficit d={d}"),
        applicable: true,
        value: Some(rat(bound.clone())),
        implied_lower: Some(bound.clone()),
        violated: None,
        detail: format!(
            "if the dimension-{t} members extend to a spread, the deficit is at least min(m_{d} = {m_d}, q^ceil({d}/2)+1 = {cap}) = {bound}; conditional, reported only"
        ),
    })
}

/// Narrative consequence when the deficit is smaller than both m_d and the
/// extension cap: a realization would force a maximal partial t-spread of
/// deficiency exactly a, or (if the members extend further) one with
/// deficiency between the general floor and a-1.
pub fn spread_narrative(ty: &PartitionType, d: u32) -> BoundReport {
    let name = format!("spread narrative d={d}");
    let n = ty.n();
    let q = ty.q();
    if n % 2 != 0 {
        return BoundReport::not_applicable(&name, format!("n = {n} is odd"));
    }
    let t = n / 2;
    let Some(actual) = spread_deficit(ty) else {
        return BoundReport::not_applicable(&name, format!("no members of dimension {t}"));
    };
    if 2 * d <= t || d >= t {
        return BoundReport::not_applicable(&name, format!("d = {d} outside t/2..t"));
    }
    let m_d = ty.count(d);
    let cap = pow(q, d.div_ceil(2)) + BigInt::one();
    if BigInt::from(m_d) > cap {
        return BoundReport::not_applicable(&name, format!("m_{d} = {m_d} exceeds {cap}"));
    }
    if actual >= BigInt::from(m_d) {
        return BoundReport::not_applicable(
            &name,
            format!("deficit {actual} already reaches m_{d} = {m_d}"),
        );
    }
    let m_t = ty.count(t);
    let floor = deficiency_bounds(q)
        .ok()
        .and_then(|r| r.implied_lower)
        .unwrap_or_else(BigInt::one);
    let upper = &actual - BigInt::one();
    let second_branch = if floor > upper {
        "the extension branch is impossible".to_string()
    } else if floor == upper {
        format!("a maximal partial {t}-spread of deficiency {upper} exists")
    } else {
        format!("a maximal partial {t}-spread of deficiency between {floor} and {upper} exists")
    };
    BoundReport {
        name,
        applicable: true,
        value: None,
        implied_lower: None,
        violated: None,
        detail: format!(
            "a realization embeds a partial {t}-spread of size {m_t}; either it is maximal with deficiency {actual}, or {second_branch}"
        ),
    }
}

/// Every report this module can produce for a type, applicable or not.
pub fn all_reports(ty: &PartitionType) -> Vec<BoundReport> {
    let mut out = Vec::new();
    let n = ty.n();
    let t = n / 2;
    if n % 2 == 0 {
        for d in 1..t {
            if ty.count(d) > 0 {
                out.push(deficit_bound(ty, d));
            }
        }
        out.push(deficit_bound_sweep(ty));
        for d in t / 2 + 1..t {
            out.push(aggregated_deficit_bound(ty, d));
            if ty.count(d) > 0 {
                out.push(small_count_report(ty, d));
                if let Ok(r) = extension_deficit_bound(ty.q(), t, d, ty.count(d)) {
                    out.push(r);
                }
                out.push(spread_narrative(ty, d));
            }
        }
    }
    if let Ok(r) = deficiency_bounds(ty.q()) {
        out.push(r);
    }
    out
}
