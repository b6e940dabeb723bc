//! Explicit partitions built from field towers.
//!
//! The basic object is the coset spread: the multiplicative cosets of
//! GF(q^t)* inside GF(q^kt)* are, as GF(q)-subspaces of V(kt,q), a t-spread.
//! Class switching replaces a few parallel classes of that spread by one
//! smaller subspace per class plus a bundle of l-dimensional spaces.
//! Running the switching at two levels of the tower GF(q^8) ⊃ GF(q^4) ⊃
//! GF(q^2) ⊃ GF(q) produces partitions of V(8,q) mixing dimensions 4 and 3.
//! Refinement shatters one member into a subspace and lines.
//!
//! Every constructor verifies its output exhaustively before returning it,
//! so a returned partition is certified.

use std::collections::BTreeSet;

use crate::gfq::{make_tower, vector_to_index, FieldSpec, Subspace, TowerMap, Vector};
use crate::partition::{ExplicitPartition, PartitionType};
use crate::{Error, Result};

fn certify(p: ExplicitPartition) -> Result<ExplicitPartition> {
    let report = p.verify()?;
    if !report.valid {
        return Err(Error::InvalidType(format!(
            "construction failed verification: {}",
            report.detail
        )));
    }
    Ok(p)
}

/// All sums s + c·g with s in `set` and c in `coeffs`; the one-generator
/// step of a span computation, over whatever coefficient set is passed.
fn extend_by(t: &TowerMap, set: &BTreeSet<u64>, g: u64, coeffs: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for &c in coeffs {
        let cg = t.mul(c, g);
        for &s in set {
            out.insert(t.add(s, cg));
        }
    }
    out
}

fn base_scalars(q: u64) -> BTreeSet<u64> {
    (0..q).collect()
}

/// Representatives of the nonzero part of `set` under scaling by `units`,
/// smallest code per class, in increasing order.
fn ray_reps(t: &TowerMap, set: &BTreeSet<u64>, units: &[u64]) -> Vec<u64> {
    let mut reps = Vec::new();
    let mut covered = BTreeSet::new();
    for &x in set {
        if x == 0 || covered.contains(&x) {
            continue;
        }
        reps.push(x);
        for &u in units {
            covered.insert(t.mul(u, x));
        }
    }
    reps
}

/// First GF(q)-subspace extending `base` by one generator from `ambient`,
/// scanning generators in code order, optionally skipping one forbidden
/// outcome.
fn first_cover(
    t: &TowerMap,
    ambient: &BTreeSet<u64>,
    base: &BTreeSet<u64>,
    avoid: Option<&BTreeSet<u64>>,
) -> BTreeSet<u64> {
    let scalars = base_scalars(t.base_q());
    for &v in ambient {
        if base.contains(&v) {
            continue;
        }
        let cand = extend_by(t, base, v, &scalars);
        if avoid.is_none_or(|a| *a != cand) {
            return cand;
        }
    }
    unreachable!("no extension found inside the ambient set")
}

/// The coset t-spread of V(kt,q).
pub fn field_spread(q: u64, k: u32, t: u32) -> Result<ExplicitPartition> {
    if k < 2 {
        return Err(Error::BadParameter(format!(
            "a spread needs at least two blocks per element, got k = {k}"
        )));
    }
    let tower = make_tower(q, k * t, t)?;
    let sub = tower.subfield_set(t)?;
    let classes = (tower.size() - 1) / (q.pow(t) - 1);
    let mut members = Vec::with_capacity(classes as usize);
    for j in 0..classes {
        members.push(tower.span(tower.scale_set(tower.exp_at(j), &sub)));
    }
    certify(ExplicitPartition::new(
        tower.base().clone(),
        (k * t) as usize,
        members,
    )?)
}

/// Parameters of the class switching on the t-spread of V(kt,q): l is the
/// number of independent mixing elements, dim_w the dimension of the
/// subspace kept from each replaced class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchParams {
    pub q: u64,
    pub k: u32,
    pub t: u32,
    pub l: u32,
    pub dim_w: u32,
}

impl SwitchParams {
    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::BadParameter("switching needs k >= 2".into()));
        }
        if self.l < 1 || self.l > self.k {
            return Err(Error::BadParameter(format!(
                "mixing rank l = {} outside 1..={}",
                self.l, self.k
            )));
        }
        if self.dim_w > self.t {
            return Err(Error::BadParameter(format!(
                "dim_w = {} exceeds t = {}",
                self.dim_w, self.t
            )));
        }
        Ok(())
    }
}

/// The deterministic ingredients of one switching run.
///
/// `chosen` starts with 1 and continues with the smallest codes that stay
/// GF(q^t)-independent; `span_a` is their GF(q)-span; `class_reps` are the
/// smallest-code representatives of span_a \ 0 up to GF(q)-scaling, one per
/// replaced parallel class; `w_set` is the greedily smallest dim_w-subspace
/// of the subfield; `line_reps` represent the GF(q)-lines of the subfield
/// outside w_set.
#[derive(Debug)]
pub struct SwitchParts {
    pub tower: TowerMap,
    pub subfield: BTreeSet<u64>,
    pub chosen: Vec<u64>,
    pub span_a: BTreeSet<u64>,
    pub class_reps: Vec<u64>,
    pub w_set: BTreeSet<u64>,
    pub line_reps: Vec<u64>,
}

pub fn switch_parts(p: &SwitchParams) -> Result<SwitchParts> {
    p.validate()?;
    let tower = make_tower(p.q, p.k * p.t, p.t)?;
    let subfield = tower.subfield_set(p.t)?;
    let scalars = base_scalars(p.q);
    let units: Vec<u64> = (1..p.q).collect();

    let mut chosen = vec![1u64];
    let mut big_span = subfield.clone();
    while (chosen.len() as u32) < p.l {
        let next = (1..tower.size())
            .find(|c| !big_span.contains(c))
            .expect("an independent element exists while l <= k");
        big_span = extend_by(&tower, &big_span, next, &subfield);
        chosen.push(next);
    }

    let mut span_a = BTreeSet::from([0u64]);
    for &a in &chosen {
        span_a = extend_by(&tower, &span_a, a, &scalars);
    }
    assert_eq!(span_a.len() as u64, p.q.pow(p.l));

    let class_reps = ray_reps(&tower, &span_a, &units);
    assert_eq!(
        class_reps.len() as u64,
        (p.q.pow(p.l) - 1) / (p.q - 1),
        "one replaced class per ray of the mixing span"
    );

    let mut w_set = BTreeSet::from([0u64]);
    let mut w_dim = 0;
    if p.dim_w > 0 {
        for &c in &subfield {
            if w_set.contains(&c) {
                continue;
            }
            w_set = extend_by(&tower, &w_set, c, &scalars);
            w_dim += 1;
            if w_dim == p.dim_w {
                break;
            }
        }
    }
    assert_eq!(w_dim, p.dim_w);

    let mut line_reps = Vec::new();
    let mut covered = w_set.clone();
    for &x in &subfield {
        if covered.contains(&x) {
            continue;
        }
        line_reps.push(x);
        for &u in &units {
            covered.insert(tower.mul(u, x));
        }
    }
    assert_eq!(
        line_reps.len() as u64,
        (p.q.pow(p.t) - p.q.pow(p.dim_w)) / (p.q - 1)
    );

    Ok(SwitchParts {
        tower,
        subfield,
        chosen,
        span_a,
        class_reps,
        w_set,
        line_reps,
    })
}

/// The type the switching must produce, as a counting identity.
pub fn switch_type(p: &SwitchParams) -> Result<PartitionType> {
    p.validate()?;
    let spread = (p.q.pow(p.k * p.t) - 1) / (p.q.pow(p.t) - 1);
    let replaced = (p.q.pow(p.l) - 1) / (p.q - 1);
    let bundles = (p.q.pow(p.t) - p.q.pow(p.dim_w)) / (p.q - 1);
    let mut acc = std::collections::BTreeMap::new();
    let mut add = |dim: u32, count: u64| {
        if count > 0 {
            *acc.entry(dim).or_insert(0u64) += count;
        }
    };
    add(p.t, spread - replaced);
    if p.dim_w > 0 {
        add(p.dim_w, replaced);
    }
    add(p.l, bundles);
    let k = *acc.keys().max().expect("some dimension present");
    let mut m = vec![0u64; k as usize];
    for (dim, count) in acc {
        m[dim as usize - 1] = count;
    }
    PartitionType::new(p.k * p.t, p.q, m)
}

/// Class switching: replace the parallel classes indexed by the rays of
/// span_a with (a copy of W per class, plus one l-dimensional space per
/// line of the subfield outside W).
pub fn switch_spread(p: &SwitchParams) -> Result<ExplicitPartition> {
    let parts = switch_parts(p)?;
    let t = &parts.tower;
    let classes = (t.size() - 1) / (p.q.pow(p.t) - 1);
    let replaced: BTreeSet<u64> = parts
        .class_reps
        .iter()
        .map(|&r| t.log(r).expect("nonzero representative") % classes)
        .collect();
    assert_eq!(replaced.len(), parts.class_reps.len());

    let mut members = Vec::new();
    for j in 0..classes {
        if !replaced.contains(&j) {
            members.push(t.span(t.scale_set(t.exp_at(j), &parts.subfield)));
        }
    }
    if p.dim_w > 0 {
        for &r in &parts.class_reps {
            members.push(t.span(t.scale_set(r, &parts.w_set)));
        }
    }
    for &u in &parts.line_reps {
        members.push(t.span(t.scale_set(u, &parts.span_a)));
    }
    certify(ExplicitPartition::new(
        t.base().clone(),
        (p.k * p.t) as usize,
        members,
    )?)
}

/// Intermediate data of the two-level switching on V(8,q).
///
/// Everything is indexed so that position 0 carries the distinguished
/// first objects: class_reps[0] = line_reps[0] = 1, so l_sets[0] is the
/// quartic subfield itself and lperp_sets[0] is the mixing span.  The
/// replacement at position 0 is empty; the first class dissolves into
/// lines rather than keeping a 3-dimensional piece.
#[derive(Debug)]
pub struct DoubleSwitchState {
    pub tower: TowerMap,
    pub quartic: BTreeSet<u64>,
    pub quadratic: BTreeSet<u64>,
    pub alpha2: u64,
    pub span_a: BTreeSet<u64>,
    pub class_reps: Vec<u64>,
    pub line_reps: Vec<u64>,
    pub l_sets: Vec<BTreeSet<u64>>,
    pub lperp_sets: Vec<BTreeSet<u64>>,
    pub s1: BTreeSet<u64>,
    pub s1_perp: BTreeSet<u64>,
    pub gammas: Vec<u64>,
    pub alpha_primes: Vec<u64>,
    pub switched: Vec<BTreeSet<u64>>,
    pub switched_perp: Vec<BTreeSet<u64>>,
    pub replacements: Vec<BTreeSet<u64>>,
}

impl DoubleSwitchState {
    /// Intersection of the i-th replaced class with the j-th switched
    /// space, a line over the quadratic subfield.
    pub fn q_set(&self, i: usize, j: usize) -> BTreeSet<u64> {
        self.l_sets[i]
            .intersection(&self.lperp_sets[j])
            .copied()
            .collect()
    }

    /// Assemble the members: untouched spread cosets, the replacement
    /// 3-spaces on both switching levels, and the leftover lines in
    /// increasing code order.
    pub fn assemble(&self) -> Result<ExplicitPartition> {
        let t = &self.tower;
        let q = t.base_q();
        let classes = (t.size() - 1) / (q.pow(4) - 1);
        let replaced: BTreeSet<u64> = self
            .class_reps
            .iter()
            .map(|&r| t.log(r).expect("nonzero representative") % classes)
            .collect();

        let mut members = Vec::new();
        for j in 0..classes {
            if !replaced.contains(&j) {
                members.push(t.span(t.scale_set(t.exp_at(j), &self.quartic)));
            }
        }
        assert_eq!(members.len() as u64, q.pow(4) - q * q);

        for s in &self.replacements[1..] {
            members.push(t.span(s.iter().copied()));
        }
        for s in &self.switched_perp[1..] {
            members.push(t.span(s.iter().copied()));
        }

        let mut leftover: BTreeSet<u64> = BTreeSet::new();
        for ls in &self.l_sets {
            leftover.extend(ls.iter().copied().filter(|&c| c != 0));
        }
        for s in self.replacements[1..]
            .iter()
            .chain(self.switched_perp[1..].iter())
        {
            for &c in s {
                if c != 0 {
                    let removed = leftover.remove(&c);
                    assert!(removed, "three-dimensional pieces overlap");
                }
            }
        }
        let mut lines = 0u64;
        while let Some(&x) = leftover.iter().next() {
            members.push(t.span([x]));
            for c in 1..q {
                leftover.remove(&t.mul(c, x));
            }
            lines += 1;
        }
        assert_eq!(lines, q.pow(5) - q.pow(4) + q + 1);

        certify(ExplicitPartition::new(t.base().clone(), 8, members)?)
    }
}

/// The type the two-level switching must produce.
pub fn double_switch_type(q: u64) -> Result<PartitionType> {
    let m1 = q.pow(5) - q.pow(4) + q + 1;
    PartitionType::new(8, q, vec![m1, 0, 2 * q * q, q.pow(4) - q * q])
}

pub fn double_switch_state(q: u64) -> Result<DoubleSwitchState> {
    let tower = make_tower(q, 8, 4)?;
    let quartic = tower.subfield_set(4)?;
    let quadratic = tower.subfield_set(2)?;
    let alpha2 = (0..tower.size())
        .find(|c| !quartic.contains(c))
        .expect("the quartic subfield is proper");

    let mut span_a = BTreeSet::from([0u64]);
    span_a = extend_by(&tower, &span_a, 1, &quadratic);
    span_a = extend_by(&tower, &span_a, alpha2, &quadratic);
    assert_eq!(span_a.len() as u64, q.pow(4));

    let units: Vec<u64> = quadratic.iter().copied().filter(|&c| c != 0).collect();
    let class_reps = ray_reps(&tower, &span_a, &units);
    let line_reps = ray_reps(&tower, &quartic, &units);
    let rays = (q * q + 1) as usize;
    assert_eq!(class_reps.len(), rays);
    assert_eq!(line_reps.len(), rays);
    assert_eq!(class_reps[0], 1);
    assert_eq!(line_reps[0], 1);

    let l_sets: Vec<BTreeSet<u64>> = class_reps
        .iter()
        .map(|&r| tower.scale_set(r, &quartic))
        .collect();
    let lperp_sets: Vec<BTreeSet<u64>> = line_reps
        .iter()
        .map(|&u| tower.scale_set(u, &span_a))
        .collect();

    let s1 = first_cover(&tower, &quartic, &quadratic, None);
    let s1_perp = first_cover(&tower, &span_a, &quadratic, None);

    let take_rep = |cover: &BTreeSet<u64>, through: &BTreeSet<u64>| -> u64 {
        cover
            .intersection(through)
            .copied()
            .filter(|&c| c != 0)
            .min()
            .expect("the cover meets every quadratic line of its ambient")
    };
    let mut gammas = Vec::with_capacity(rays);
    let mut alpha_primes = Vec::with_capacity(rays);
    for idx in 0..rays {
        let q1j: BTreeSet<u64> = quartic.intersection(&lperp_sets[idx]).copied().collect();
        gammas.push(take_rep(&s1, &q1j));
        let qi1: BTreeSet<u64> = l_sets[idx].intersection(&span_a).copied().collect();
        alpha_primes.push(take_rep(&s1_perp, &qi1));
    }
    assert_eq!(gammas[0], 1);
    assert_eq!(alpha_primes[0], 1);

    let switched: Vec<BTreeSet<u64>> = alpha_primes
        .iter()
        .map(|&a| tower.scale_set(a, &s1))
        .collect();
    let switched_perp: Vec<BTreeSet<u64>> = gammas
        .iter()
        .map(|&g| tower.scale_set(g, &s1_perp))
        .collect();

    let mut replacements = vec![BTreeSet::new()];
    for idx in 1..rays {
        let qi1: BTreeSet<u64> = l_sets[idx].intersection(&span_a).copied().collect();
        replacements.push(first_cover(
            &tower,
            &l_sets[idx],
            &qi1,
            Some(&switched[idx]),
        ));
    }

    Ok(DoubleSwitchState {
        tower,
        quartic,
        quadratic,
        alpha2,
        span_a,
        class_reps,
        line_reps,
        l_sets,
        lperp_sets,
        s1,
        s1_perp,
        gammas,
        alpha_primes,
        switched,
        switched_perp,
        replacements,
    })
}

/// Two-level switching partition of V(8,q), with q^4-q^2 members of
/// dimension 4, 2q^2 of dimension 3, and q^5-q^4+q+1 lines.
pub fn double_switch(q: u64) -> Result<ExplicitPartition> {
    double_switch_state(q)?.assemble()
}

fn scale_vector(f: &FieldSpec, c: u64, v: &Vector) -> Vector {
    let ce = f.el(c);
    v.iter().map(|&x| f.mul(ce, x)).collect()
}

/// Replace the member at `index` by the span of the first d' rows of its
/// basis plus one line per remaining ray, appended in increasing code
/// order.  d' equal to the member's dimension is the identity.
pub fn refine(p: &ExplicitPartition, index: usize, d_prime: u32) -> Result<ExplicitPartition> {
    let member = p
        .members()
        .get(index)
        .ok_or(Error::NoSuchMember(index))?;
    let dim = member.dim() as u32;
    if d_prime < 1 || d_prime > dim {
        return Err(Error::BadParameter(format!(
            "refinement dimension {d_prime} outside 1..={dim}"
        )));
    }
    if d_prime == dim {
        return Ok(p.clone());
    }
    let f = p.field();
    let q = p.q();
    let sub = Subspace::from_generators(f, p.n(), &member.basis()[..d_prime as usize]);
    let mut covered: BTreeSet<u64> = sub
        .vectors(f)
        .iter()
        .map(|v| vector_to_index(q, v))
        .collect();
    let mut indexed: Vec<(u64, Vector)> = member
        .vectors(f)
        .into_iter()
        .map(|v| (vector_to_index(q, &v), v))
        .collect();
    indexed.sort_by_key(|(i, _)| *i);

    let mut members = p.members().to_vec();
    members[index] = sub;
    for (idx, v) in indexed {
        if idx == 0 || covered.contains(&idx) {
            continue;
        }
        members.push(Subspace::from_generators(f, p.n(), std::slice::from_ref(&v)));
        for c in 1..q {
            covered.insert(vector_to_index(q, &scale_vector(f, c, &v)));
        }
    }
    certify(ExplicitPartition::new(f.clone(), p.n(), members)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(p: &ExplicitPartition) -> Vec<u64> {
        p.observed_type().unwrap().counts().to_vec()
    }

    #[test]
    fn spread_sizes() {
        let p = field_spread(2, 2, 4).unwrap();
        assert_eq!(counts(&p), vec![0, 0, 0, 17]);
        let p = field_spread(2, 2, 3).unwrap();
        assert_eq!(counts(&p), vec![0, 0, 9]);
        let p = field_spread(3, 2, 1).unwrap();
        assert_eq!(counts(&p), vec![4]);
        let p = field_spread(2, 3, 2).unwrap();
        assert_eq!(counts(&p), vec![0, 21]);
        assert!(field_spread(2, 1, 4).is_err());
    }

    #[test]
    fn coset_criterion() {
        let t = make_tower(2, 6, 3).unwrap();
        let sub = t.subfield_set(3).unwrap();
        for beta in 1..t.size() {
            for beta2 in 1..t.size() {
                let same = t.scale_set(beta, &sub) == t.scale_set(beta2, &sub);
                let ratio_in = sub.contains(&t.mul(beta2, t.inv(beta)));
                assert_eq!(same, ratio_in, "beta={beta} beta2={beta2}");
            }
        }
    }

    #[test]
    fn switching_matches_its_counting_identity() {
        for q in [2u64, 3] {
            for (k, t) in [(2u32, 2u32), (2, 3)] {
                for l in 1..=2u32 {
                    for dim_w in 0..=t {
                        let params = SwitchParams { q, k, t, l, dim_w };
                        let predicted = switch_type(&params).unwrap();
                        let built = switch_spread(&params).unwrap();
                        assert_eq!(
                            built.observed_type().unwrap(),
                            predicted,
                            "q={q} k={k} t={t} l={l} w={dim_w}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn switching_the_known_example() {
        let params = SwitchParams {
            q: 2,
            k: 2,
            t: 4,
            l: 2,
            dim_w: 3,
        };
        let p = switch_spread(&params).unwrap();
        let ty = p.observed_type().unwrap();
        assert_eq!(ty, PartitionType::from_descending(8, 2, &[14, 3, 8, 0]).unwrap());
        assert_eq!(p.members().len(), 25);
    }

    #[test]
    fn full_w_degenerates_to_the_spread() {
        let params = SwitchParams {
            q: 2,
            k: 2,
            t: 3,
            l: 2,
            dim_w: 3,
        };
        let p = switch_spread(&params).unwrap();
        let spread = field_spread(2, 2, 3).unwrap();
        let as_sets = |p: &ExplicitPartition| -> BTreeSet<Vec<Vector>> {
            p.members().iter().map(|s| s.basis().to_vec()).collect()
        };
        assert_eq!(as_sets(&p), as_sets(&spread));
    }

    #[test]
    fn trivial_w_reshuffles_a_plane_spread() {
        let params = SwitchParams {
            q: 2,
            k: 2,
            t: 2,
            l: 2,
            dim_w: 0,
        };
        let p = switch_spread(&params).unwrap();
        assert_eq!(counts(&p), vec![0, 5]);
    }

    #[test]
    fn rank_one_switching_is_a_refinement() {
        let params = SwitchParams {
            q: 2,
            k: 2,
            t: 4,
            l: 1,
            dim_w: 3,
        };
        let switched = switch_spread(&params).unwrap();
        let refined = refine(&field_spread(2, 2, 4).unwrap(), 0, 3).unwrap();
        assert_eq!(
            switched.observed_type().unwrap(),
            refined.observed_type().unwrap()
        );
        assert_eq!(counts(&refined), vec![8, 0, 1, 16]);
    }

    #[test]
    fn replaced_classes_intersect_trivially() {
        let params = SwitchParams {
            q: 3,
            k: 2,
            t: 2,
            l: 2,
            dim_w: 1,
        };
        let parts = switch_parts(&params).unwrap();
        let t = &parts.tower;
        assert_eq!(parts.chosen[0], 1);
        assert_eq!(parts.class_reps.len(), 4);
        for (a, &ra) in parts.class_reps.iter().enumerate() {
            for &rb in parts.class_reps.iter().skip(a + 1) {
                let ca = t.scale_set(ra, &parts.subfield);
                let cb = t.scale_set(rb, &parts.subfield);
                let common: Vec<u64> = ca.intersection(&cb).copied().collect();
                assert_eq!(common, vec![0]);
            }
        }
    }

    #[test]
    fn double_switch_types() {
        let p = double_switch(2).unwrap();
        assert_eq!(
            p.observed_type().unwrap(),
            PartitionType::from_descending(8, 2, &[12, 8, 0, 19]).unwrap()
        );
        assert_eq!(p.members().len(), 39);

        let p = double_switch(3).unwrap();
        assert_eq!(
            p.observed_type().unwrap(),
            PartitionType::from_descending(8, 3, &[72, 18, 0, 166]).unwrap()
        );
        assert_eq!(p.members().len(), 256);
    }

    #[test]
    fn double_switch_internal_geometry() {
        for q in [2u64, 3] {
            let st = double_switch_state(q).unwrap();
            let t = &st.tower;
            let rays = (q * q + 1) as usize;

            assert_eq!(st.q_set(0, 0), st.quadratic);
            for j in 1..rays {
                let hit: Vec<u64> = st
                    .s1
                    .intersection(&st.q_set(0, j))
                    .copied()
                    .collect();
                assert_eq!(hit.len() as u64, q, "one ray through the cover, j={j}");
            }
            for i in 0..rays {
                for j in 0..rays {
                    let scaled = t.scale_set(t.mul(st.gammas[j], st.alpha_primes[i]), &st.quadratic);
                    assert_eq!(st.q_set(i, j), scaled, "i={i} j={j}");
                }
            }
            for i in 1..rays {
                let meet: BTreeSet<u64> = st.replacements[i]
                    .intersection(&st.switched[i])
                    .copied()
                    .collect();
                assert_eq!(meet, st.q_set(i, 0), "i={i}");
                for j in 1..rays {
                    let cross: Vec<u64> = st.replacements[i]
                        .intersection(&st.switched_perp[j])
                        .copied()
                        .collect();
                    assert_eq!(cross, vec![0], "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn refinement_chains() {
        let p = double_switch(2).unwrap();
        let first3 = p
            .members()
            .iter()
            .position(|s| s.dim() == 3)
            .unwrap();
        let once = refine(&p, first3, 1).unwrap();
        assert_eq!(
            once.observed_type().unwrap(),
            PartitionType::from_descending(8, 2, &[12, 7, 0, 26]).unwrap()
        );
        let next3 = once
            .members()
            .iter()
            .position(|s| s.dim() == 3)
            .unwrap();
        let twice = refine(&once, next3, 1).unwrap();
        assert_eq!(
            twice.observed_type().unwrap(),
            PartitionType::from_descending(8, 2, &[12, 6, 0, 33]).unwrap()
        );
    }

    #[test]
    fn refinement_identity_and_errors() {
        let p = field_spread(2, 2, 3).unwrap();
        let same = refine(&p, 0, 3).unwrap();
        assert_eq!(same.members().len(), p.members().len());
        assert!(refine(&p, 99, 1).is_err());
        assert!(refine(&p, 0, 0).is_err());
        assert!(refine(&p, 0, 4).is_err());
    }
}
