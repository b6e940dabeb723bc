//! Dense-table arithmetic for GF(q), q = p^e up to 256.
//!
//! An element is stored as its coefficient code: the residue class
//! c_0 + c_1 x + ... + c_{e-1} x^{e-1} modulo the defining polynomial has
//! code c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  For prime fields the code is
//! the residue itself.  All four operations become table lookups after
//! construction.
//!
//! The defining polynomial is the lexicographically first monic
//! irreducible of degree e over GF(p), where candidates are ordered by
//! the code of their non-leading coefficients.  This makes codes stable
//! across runs and machines; a different polynomial can be forced with
//! [`FieldSpec::with_irr`] when reading externally produced data.

use std::fmt;

use crate::{Error, Result};

/// Largest field order dense tables are built for.
pub const MAX_Q: u64 = 256;

/// Decompose q as p^e with p prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest > 1 {
        if rest % p != 0 {
            return None;
        }
        rest /= p;
        e += 1;
    }
    Some((p, e))
}

/// An element of a fixed finite field, identified by its coefficient code.
///
/// Codes only make sense relative to the [`FieldSpec`] that produced them.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field GF(p^e) with precomputed operation tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    irr: Vec<u32>,
    add_t: Vec<u32>,
    mul_t: Vec<u32>,
    neg_t: Vec<u32>,
    inv_t: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("irr", &self.irr)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.irr == other.irr
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Build GF(q) with the lexicographically first defining polynomial.
    pub fn new(q: u64) -> Result<FieldSpec> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q, MAX_Q));
        }
        let irr = if e == 1 {
            vec![0, 1]
        } else {
            first_irreducible(p, e)?
        };
        Ok(Self::build(p, e, q, irr))
    }

    /// Build GF(p^e) with an explicitly chosen monic defining polynomial,
    /// given little-endian with leading coefficient 1.
    pub fn with_irr(p: u64, e: u32, irr: Vec<u32>) -> Result<FieldSpec> {
        if prime_power(p) != Some((p, 1)) {
            return Err(Error::BadParameter(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_Q)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(e), MAX_Q))?;
        if irr.len() != e as usize + 1 || *irr.last().unwrap() != 1 {
            return Err(Error::BadParameter(format!(
                "defining polynomial must be monic of degree {e}"
            )));
        }
        if irr.iter().any(|&c| c as u64 >= p) {
            return Err(Error::BadParameter(
                "polynomial coefficient out of range".into(),
            ));
        }
        let poly: Vec<u64> = irr.iter().map(|&c| c as u64).collect();
        if e > 1 && !is_irreducible(p, &poly) {
            return Err(Error::BadParameter(format!(
                "polynomial {irr:?} is reducible over GF({p})"
            )));
        }
        if e == 1 && irr != [0, 1] {
            return Err(Error::BadParameter(
                "prime fields use the polynomial x".into(),
            ));
        }
        Ok(Self::build(p, e, q, irr))
    }

    fn build(p: u64, e: u32, q: u64, irr: Vec<u32>) -> FieldSpec {
        let n = q as usize;
        let irr64: Vec<u64> = irr.iter().map(|&c| c as u64).collect();
        let mut add_t = vec![0u32; n * n];
        let mut mul_t = vec![0u32; n * n];
        let mut neg_t = vec![0u32; n];
        let mut inv_t = vec![0u32; n];
        for a in 0..q {
            let pa = code_digits(a, p, e);
            let na: Vec<u64> = pa.iter().map(|&d| (p - d) % p).collect();
            neg_t[a as usize] = digits_code(&na, p) as u32;
            for b in 0..q {
                let pb = code_digits(b, p, e);
                let sum: Vec<u64> = pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % p).collect();
                add_t[(a * q + b) as usize] = digits_code(&sum, p) as u32;
                let prod = poly_rem(&poly_mul(&pa, &pb, p), &irr64, p);
                mul_t[(a * q + b) as usize] = digits_code(&prod, p) as u32;
            }
        }
        for a in 1..q {
            for b in 1..q {
                if mul_t[(a * q + b) as usize] == 1 {
                    inv_t[a as usize] = b as u32;
                    break;
                }
            }
        }
        FieldSpec {
            p,
            e,
            q,
            irr,
            add_t,
            mul_t,
            neg_t,
            inv_t,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Defining polynomial, little-endian including the leading 1.
    pub fn irr(&self) -> &[u32] {
        &self.irr
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with the given code.  Panics if the code is out of range.
    pub fn el(&self, code: u64) -> FieldElement {
        assert!(code < self.q, "element code {code} out of range for GF({})", self.q);
        FieldElement(code as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_t[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    /// Multiplicative inverse.  Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a.0 != 0, "inverse of zero");
        FieldElement(self.inv_t[a.0 as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}

fn code_digits(code: u64, p: u64, e: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(e as usize);
    let mut c = code;
    for _ in 0..e {
        v.push(c % p);
        c /= p;
    }
    v
}

fn digits_code(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of a modulo the monic polynomial m, truncated to deg(m) coefficients.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg_m = m.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    while r.len() > deg_m {
        let lead = *r.last().unwrap();
        let k = r.len() - 1 - deg_m;
        if lead != 0 {
            for i in 0..=deg_m {
                let t = (lead * m[i]) % p;
                r[k + i] = (r[k + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r.resize(deg_m, 0);
    r
}

fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for ddeg in 1..=deg / 2 {
        for code in 0..p.pow(ddeg as u32) {
            let mut div = code_digits(code, p, ddeg as u32);
            div.push(1);
            let rem = poly_rem(poly, &div, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, e: u32) -> Result<Vec<u32>> {
    for code in 0..p.pow(e) {
        let mut poly = code_digits(code, p, e);
        poly.push(1);
        if is_irreducible(p, &poly) {
            return Ok(poly.iter().map(|&c| c as u32).collect());
        }
    }
    Err(Error::NoIrreducible {
        q: p,
        degree: e as usize,
    })
}
