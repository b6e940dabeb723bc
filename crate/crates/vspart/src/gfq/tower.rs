//! GF(q^m) as an extension of GF(q), with discrete log tables.
//!
//! Extension elements are coded in base q: the element with coordinate
//! vector (v_0, ..., v_{m-1}) over GF(q) has code sum v_i q^i.  That is
//! exactly the vector index used in V(m,q), so multiplicative structure
//! (cosets of subfields, orbits under scalars) translates directly into
//! sets of vectors.
//!
//! Multiplication goes through exp/log tables for a fixed generator: the
//! element of smallest code that is primitive.  The defining polynomial is
//! again the lexicographically first monic irreducible of its degree.

use std::collections::BTreeSet;

use super::field::{FieldElement, FieldSpec};
use super::linalg::{index_to_vector, vector_to_index, Subspace, Vector};
use crate::{Error, Result};

/// Largest extension field the log tables will be built for.
pub const MAX_TOWER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct TowerMap {
    base: FieldSpec,
    m: u32,
    size: u64,
    irr: Vec<FieldElement>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl TowerMap {
    pub fn new(q: u64, m: u32) -> Result<TowerMap> {
        let base = FieldSpec::new(q)?;
        if m == 0 {
            return Err(Error::BadParameter("extension degree must be positive".into()));
        }
        let size = q
            .checked_pow(m)
            .filter(|&s| s <= MAX_TOWER)
            .ok_or(Error::FieldTooLarge(q.saturating_pow(m), MAX_TOWER))?;
        let irr = first_irreducible(&base, m)?;
        let gen = smallest_primitive(&base, &irr, size)?;
        let n1 = (size - 1) as usize;
        let mut exp = vec![0u32; n1];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = poly_one(&base, m);
        for (i, slot) in exp.iter_mut().enumerate() {
            let code = vector_to_index(q, &cur) as u32;
            *slot = code;
            assert!(log[code as usize] == NO_LOG, "generator order too small");
            log[code as usize] = i as u32;
            cur = poly_mul_mod(&base, &cur, &gen, &irr);
        }
        assert_eq!(vector_to_index(q, &cur), 1, "generator order too large");
        Ok(TowerMap {
            base,
            m,
            size,
            irr,
            exp,
            log,
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn base_q(&self) -> u64 {
        self.base.q()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn irr(&self) -> &[FieldElement] {
        &self.irr
    }

    pub fn generator(&self) -> u64 {
        self.exp[1] as u64
    }

    pub fn exp_at(&self, i: u64) -> u64 {
        self.exp[(i % (self.size - 1)) as usize] as u64
    }

    pub fn log(&self, a: u64) -> Option<u64> {
        let l = self.log[a as usize];
        (l != NO_LOG).then_some(l as u64)
    }

    pub fn to_vector(&self, a: u64) -> Vector {
        index_to_vector(self.base.q(), self.m as usize, a)
    }

    pub fn from_vector(&self, v: &[FieldElement]) -> u64 {
        assert_eq!(v.len(), self.m as usize);
        vector_to_index(self.base.q(), v)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let q = self.base.q();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let s = self.base.add(self.base.el(a % q), self.base.el(b % q));
            out += s.0 as u64 * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let q = self.base.q();
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            let s = self.base.neg(self.base.el(a % q));
            out += s.0 as u64 * place;
            place *= q;
            a /= q;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n1 = self.size - 1;
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.exp[((la + lb) % n1) as usize] as u64
    }

    /// Multiplicative inverse.  Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let n1 = self.size - 1;
        let la = self.log[a as usize] as u64;
        self.exp[((n1 - la) % n1) as usize] as u64
    }

    pub fn pow(&self, a: u64, k: u64) -> u64 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n1 = (self.size - 1) as u128;
        let la = self.log[a as usize] as u128;
        self.exp[((la * k as u128) % n1) as usize] as u64
    }

    /// The subfield GF(q^d) inside GF(q^m), as a set of codes.  Requires d | m.
    pub fn subfield_set(&self, d: u32) -> Result<BTreeSet<u64>> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::BadParameter(format!(
                "GF(q^{d}) is not a subfield of GF(q^{})",
                self.m
            )));
        }
        let sub_order = self.base.q().pow(d) - 1;
        let step = (self.size - 1) / sub_order;
        let mut set = BTreeSet::new();
        set.insert(0);
        for i in 0..sub_order {
            set.insert(self.exp[(i * step) as usize] as u64);
        }
        Ok(set)
    }

    /// The GF(q)-span of a set of codes, as a subspace of V(m,q).
    pub fn span(&self, codes: impl IntoIterator<Item = u64>) -> Subspace {
        let rows: Vec<Vector> = codes.into_iter().map(|c| self.to_vector(c)).collect();
        Subspace::from_generators(&self.base, self.m as usize, &rows)
    }

    /// The coset b·S of a code set, still a set of codes.
    pub fn scale_set(&self, b: u64, s: &BTreeSet<u64>) -> BTreeSet<u64> {
        s.iter().map(|&x| self.mul(b, x)).collect()
    }
}

/// Extension tower GF(q) ⊂ GF(q^t) ⊂ GF(q^kt).  The middle field is only
/// meaningful when t divides kt, so that is checked here rather than at
/// first use.
pub fn make_tower(q: u64, kt: u32, t: u32) -> Result<TowerMap> {
    if t == 0 || kt % t != 0 {
        return Err(Error::BadParameter(format!(
            "degree {t} does not divide degree {kt}"
        )));
    }
    TowerMap::new(q, kt)
}

fn poly_one(f: &FieldSpec, m: u32) -> Vector {
    let mut v = vec![f.zero(); m as usize];
    v[0] = f.one();
    v
}

fn poly_mul_raw(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.0 == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Remainder modulo the monic polynomial m, truncated to deg(m) coefficients.
fn poly_rem(f: &FieldSpec, a: &[FieldElement], m: &[FieldElement]) -> Vector {
    let deg_m = m.len() - 1;
    let mut r: Vector = a.to_vec();
    while r.len() > deg_m {
        let lead = *r.last().unwrap();
        let k = r.len() - 1 - deg_m;
        if lead.0 != 0 {
            for i in 0..=deg_m {
                let t = f.mul(lead, m[i]);
                r[k + i] = f.sub(r[k + i], t);
            }
        }
        r.pop();
    }
    r.resize(deg_m, f.zero());
    r
}

fn poly_mul_mod(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement], m: &[FieldElement]) -> Vector {
    poly_rem(f, &poly_mul_raw(f, a, b), m)
}

fn is_irreducible(f: &FieldSpec, poly: &[FieldElement]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    let q = f.q();
    for ddeg in 1..=deg / 2 {
        for code in 0..q.pow(ddeg as u32) {
            let mut div = index_to_vector(q, ddeg, code);
            div.push(f.one());
            if poly_rem(f, poly, &div).iter().all(|c| c.0 == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(f: &FieldSpec, m: u32) -> Result<Vec<FieldElement>> {
    let q = f.q();
    for code in 0..q.pow(m) {
        let mut poly = index_to_vector(q, m as usize, code);
        poly.push(f.one());
        if is_irreducible(f, &poly) {
            return Ok(poly);
        }
    }
    Err(Error::NoIrreducible {
        q,
        degree: m as usize,
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_pow_mod(f: &FieldSpec, a: &[FieldElement], mut k: u64, m: &[FieldElement]) -> Vector {
    let deg = m.len() - 1;
    let mut base = a.to_vec();
    let mut acc = poly_one(f, deg as u32);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mul_mod(f, &acc, &base, m);
        }
        base = poly_mul_mod(f, &base, &base, m);
        k >>= 1;
    }
    acc
}

fn smallest_primitive(f: &FieldSpec, irr: &[FieldElement], size: u64) -> Result<Vector> {
    let q = f.q();
    let m = irr.len() - 1;
    let order = size - 1;
    let factors = prime_factors(order);
    let one = poly_one(f, m as u32);
    for code in 2..size {
        let cand = index_to_vector(q, m, code);
        let primitive = factors
            .iter()
            .all(|&r| poly_pow_mod(f, &cand, order / r, irr) != one);
        if primitive {
            return Ok(cand);
        }
    }
    Err(Error::BadParameter(format!(
        "no primitive element in a field of {size} elements"
    )))
}
