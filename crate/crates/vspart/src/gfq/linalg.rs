//! Subspaces of V(n,q) in reduced row echelon form.
//!
//! The RREF basis is a canonical representative, so equality, hashing and
//! ordering of subspaces are plain structural comparisons.

use super::field::{FieldElement, FieldSpec};

pub type Vector = Vec<FieldElement>;

/// Reduced row echelon form of the given rows; zero rows are dropped.
pub fn rref(f: &FieldSpec, width: usize, rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows
        .iter()
        .inspect(|r| assert_eq!(r.len(), width, "row width mismatch"))
        .cloned()
        .collect();
    let mut r = 0;
    for col in 0..width {
        let Some(pivot) = (r..m.len()).find(|&i| m[i][col].0 != 0) else {
            continue;
        };
        m.swap(r, pivot);
        let scale = f.inv(m[r][col]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, scale);
        }
        for i in 0..m.len() {
            if i != r && m[i][col].0 != 0 {
                let factor = m[i][col];
                for j in 0..width {
                    let t = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// A subspace of V(n,q), stored as its RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
}

impl Subspace {
    pub fn from_generators(f: &FieldSpec, ambient: usize, gens: &[Vector]) -> Subspace {
        Subspace {
            ambient,
            rows: rref(f, ambient, gens),
        }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            rows: vec![],
        }
    }

    pub fn full(f: &FieldSpec, ambient: usize) -> Subspace {
        let gens: Vec<Vector> = (0..ambient)
            .map(|i| {
                let mut v = vec![f.zero(); ambient];
                v[i] = f.one();
                v
            })
            .collect();
        Subspace::from_generators(f, ambient, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| x.0 != 0).unwrap())
            .collect()
    }

    pub fn contains(&self, f: &FieldSpec, v: &Vector) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.clone();
        for row in &self.rows {
            let p = row.iter().position(|x| x.0 != 0).unwrap();
            if w[p].0 != 0 {
                let factor = w[p];
                for j in 0..self.ambient {
                    let t = f.mul(factor, row[j]);
                    w[j] = f.sub(w[j], t);
                }
            }
        }
        w.iter().all(|x| x.0 == 0)
    }

    pub fn contains_subspace(&self, f: &FieldSpec, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(f, r))
    }

    pub fn sum(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut gens = self.rows.clone();
        gens.extend(other.rows.iter().cloned());
        Subspace::from_generators(f, self.ambient, &gens)
    }

    /// Intersection via the Zassenhaus block trick: reduce rows (u|u) for
    /// u in self and (w|0) for w in other; rows whose left half vanished
    /// have right halves spanning the intersection.
    pub fn intersect(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let mut block: Vec<Vector> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.rows {
            let mut row = u.clone();
            row.extend(u.iter().copied());
            block.push(row);
        }
        for w in &other.rows {
            let mut row = w.clone();
            row.extend(std::iter::repeat(f.zero()).take(n));
            block.push(row);
        }
        let reduced = rref(f, 2 * n, &block);
        let gens: Vec<Vector> = reduced
            .iter()
            .filter(|row| row[..n].iter().all(|x| x.0 == 0))
            .map(|row| row[n..].to_vec())
            .collect();
        Subspace::from_generators(f, n, &gens)
    }

    /// All q^dim vectors of the subspace, the zero vector first.
    pub fn vectors(&self, f: &FieldSpec) -> Vec<Vector> {
        let q = f.q();
        let k = self.dim();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total as usize);
        for combo in 0..total {
            let mut v = vec![f.zero(); self.ambient];
            let mut c = combo;
            for row in &self.rows {
                let coef = f.el(c % q);
                c /= q;
                if coef.0 != 0 {
                    for j in 0..self.ambient {
                        v[j] = f.add(v[j], f.mul(coef, row[j]));
                    }
                }
            }
            out.push(v);
        }
        out
    }

    pub fn nonzero_vectors(&self, f: &FieldSpec) -> Vec<Vector> {
        self.vectors(f).into_iter().skip(1).collect()
    }

    /// Coordinates of v in the RREF basis, read off the pivot columns.
    pub fn coords_in(&self, f: &FieldSpec, v: &Vector) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vector = self.pivots().iter().map(|&p| v[p]).collect();
        let mut check = vec![f.zero(); self.ambient];
        for (coef, row) in coords.iter().zip(&self.rows) {
            for j in 0..self.ambient {
                check[j] = f.add(check[j], f.mul(*coef, row[j]));
            }
        }
        if &check == v {
            Some(coords)
        } else {
            None
        }
    }
}

pub fn dot(f: &FieldSpec, a: &Vector, b: &Vector) -> FieldElement {
    assert_eq!(a.len(), b.len());
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        acc = f.add(acc, f.mul(*x, *y));
    }
    acc
}

/// Index of a coordinate vector: sum v_i q^i, matching extension field codes.
pub fn vector_to_index(q: u64, v: &[FieldElement]) -> u64 {
    v.iter().rev().fold(0, |acc, x| acc * q + x.0 as u64)
}

pub fn index_to_vector(q: u64, n: usize, idx: u64) -> Vector {
    let mut v = Vec::with_capacity(n);
    let mut c = idx;
    for _ in 0..n {
        v.push(FieldElement((c % q) as u32));
        c /= q;
    }
    assert_eq!(c, 0, "index out of range");
    v
}

/// One representative per projective point: vectors whose first nonzero
/// coordinate is 1, in increasing index order.
pub fn projective_reps(f: &FieldSpec, n: usize) -> Vec<Vector> {
    let q = f.q();
    let mut out = Vec::new();
    for idx in 1..q.pow(n as u32) {
        let v = index_to_vector(q, n, idx);
        let first = v.iter().find(|x| x.0 != 0).unwrap();
        if first.0 == 1 {
            out.push(v);
        }
    }
    out
}
