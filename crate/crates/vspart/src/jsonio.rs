//! JSON forms for partitions, bare types, and constraint systems.
//!
//! Rationals travel as strings like "5/3" so nothing is rounded, and
//! relations use the same "=", "≤", "≥" symbols as the reports (ASCII
//! "<=" and ">=" are accepted on input).  Subspace bases are emitted in
//! row-reduced form, so writing and re-reading a file is idempotent.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::gfq::{prime_power, FieldSpec, Subspace, Vector};
use crate::hyperplane::ConstraintSystem;
use crate::intfeas::{RationalLP, Relation};
use crate::partition::{ExplicitPartition, PartitionType};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeFile {
    pub n: u32,
    pub q: u64,
    /// Counts in ascending dimension order m_1..m_k.
    pub m: Vec<u64>,
}

impl TypeFile {
    pub fn from_type(ty: &PartitionType) -> TypeFile {
        TypeFile {
            n: ty.n(),
            q: ty.q(),
            m: ty.counts().to_vec(),
        }
    }

    pub fn to_type(&self) -> Result<PartitionType> {
        let mut m = self.m.clone();
        while m.last() == Some(&0) {
            m.pop();
        }
        PartitionType::new(self.n, self.q, m)
    }
}

pub fn type_to_json(ty: &PartitionType) -> Result<String> {
    Ok(serde_json::to_string_pretty(&TypeFile::from_type(ty))?)
}

pub fn type_from_json(s: &str) -> Result<PartitionType> {
    let file: TypeFile = serde_json::from_str(s)?;
    file.to_type()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub n: usize,
    pub q: u64,
    /// Modulus polynomial of the field representation, constant term
    /// first, the same convention FieldSpec prints.
    pub irr: Vec<u32>,
    /// One basis per member; each row is a coordinate vector with entries
    /// in 0..q-1 (element codes for non-prime q).
    pub subspaces: Vec<Vec<Vec<u32>>>,
}

impl PartitionFile {
    pub fn from_partition(p: &ExplicitPartition) -> PartitionFile {
        let subspaces = p
            .members()
            .iter()
            .map(|s| {
                s.basis()
                    .iter()
                    .map(|row| row.iter().map(|e| e.0).collect())
                    .collect()
            })
            .collect();
        PartitionFile {
            n: p.n(),
            q: p.q(),
            irr: p.field().irr().to_vec(),
            subspaces,
        }
    }

    pub fn to_partition(&self) -> Result<ExplicitPartition> {
        let (prime, e) = prime_power(self.q).ok_or(Error::NotPrimePower(self.q))?;
        let field = FieldSpec::with_irr(prime, e, self.irr.clone())?;
        let mut members = Vec::with_capacity(self.subspaces.len());
        for rows in &self.subspaces {
            let mut gens: Vec<Vector> = Vec::with_capacity(rows.len());
            for row in rows {
                if row.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        got: row.len(),
                        want: self.n,
                    });
                }
                let mut v = Vector::with_capacity(self.n);
                for &c in row {
                    if u64::from(c) >= self.q {
                        return Err(Error::BadParameter(format!(
                            "coordinate {c} out of range for GF({})",
                            self.q
                        )));
                    }
                    v.push(field.el(u64::from(c)));
                }
                gens.push(v);
            }
            members.push(Subspace::from_generators(&field, self.n, &gens));
        }
        ExplicitPartition::new(field, self.n, members)
    }
}

pub fn partition_to_json(p: &ExplicitPartition) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PartitionFile::from_partition(p))?)
}

pub fn partition_from_json(s: &str) -> Result<ExplicitPartition> {
    let file: PartitionFile = serde_json::from_str(s)?;
    file.to_partition()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowFile {
    pub label: String,
    pub coeffs: Vec<String>,
    pub relation: Relation,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(rename = "type")]
    pub ty: TypeFile,
    /// Section types indexing the variables, counts ascending b_1..b_k.
    pub variables: Vec<Vec<u64>>,
    /// Upper bound shared by every variable: the hyperplane total.
    pub upper: String,
    pub rows: Vec<RowFile>,
}

impl SystemFile {
    pub fn from_system(sys: &ConstraintSystem) -> SystemFile {
        let rows = sys
            .rows()
            .iter()
            .map(|row| RowFile {
                label: row.label.clone(),
                coeffs: row.coeffs.iter().map(|c| c.to_string()).collect(),
                relation: row.relation,
                rhs: row.rhs.to_string(),
            })
            .collect();
        SystemFile {
            ty: TypeFile::from_type(sys.partition_type()),
            variables: sys
                .vars()
                .entries()
                .iter()
                .map(|b| b.counts().to_vec())
                .collect(),
            upper: sys.total_hyperplanes().to_string(),
            rows,
        }
    }

    pub fn to_lp(&self) -> Result<RationalLP> {
        let nv = self.variables.len();
        let mut lp = RationalLP::new(nv);
        let upper = parse_rational(&self.upper)?;
        for j in 0..nv {
            lp.set_upper(j, upper.clone());
        }
        for row in &self.rows {
            if row.coeffs.len() != nv {
                return Err(Error::DimensionMismatch {
                    got: row.coeffs.len(),
                    want: nv,
                });
            }
            let coeffs = row
                .coeffs
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()?;
            lp.push_row(coeffs, row.relation, parse_rational(&row.rhs)?);
        }
        Ok(lp)
    }
}

pub fn system_to_json(sys: &ConstraintSystem) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SystemFile::from_system(sys))?)
}

pub fn lp_from_json(s: &str) -> Result<RationalLP> {
    let file: SystemFile = serde_json::from_str(s)?;
    file.to_lp()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.parse()
        .map_err(|_| Error::BadParameter(format!("malformed rational {s:?}")))
}
