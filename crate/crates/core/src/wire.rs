//! JSON-facing document types. Every rational travels as a `"num/den"` string.

use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, Prime, Rational};
use crate::groupring::{GroupRingElt, MaxOrderElt};
use crate::hermitian::{FormedLattice, HermitianGram};
use crate::modulestruct::SigmaLattice;
use crate::plattice::{QMatrix, ZpLattice};
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

pub type WireMatrix = Vec<Vec<String>>;

pub fn matrix_to_wire(m: &QMatrix) -> WireMatrix {
    m.row_iter().map(vector_to_wire).collect()
}

pub fn vector_to_wire(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn vector_from_wire(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Parses a matrix whose rows all have length `cols`.
pub fn matrix_from_wire(rows: &WireMatrix, cols: usize) -> Result<QMatrix> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            vector_from_wire(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QMatrix::from_rows(cols, parsed))
}

pub fn group_ring_to_wire(x: &GroupRingElt) -> Vec<String> {
    vector_to_wire(x.coeffs())
}

pub fn group_ring_from_wire(v: &[String], p: Prime) -> Result<GroupRingElt> {
    if v.len() != p.as_usize() {
        return Err(Error::DimensionMismatch(format!("group ring element needs {} coefficients", p.get())));
    }
    GroupRingElt::new(p, vector_from_wire(v)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxOrderDoc {
    pub s: String,
    pub t: Vec<String>,
}

impl From<&MaxOrderElt> for MaxOrderDoc {
    fn from(x: &MaxOrderElt) -> Self {
        MaxOrderDoc { s: format_rational(&x.s), t: vector_to_wire(x.t.coeffs()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaLatticeDoc {
    pub p: u32,
    pub ambient_dim: usize,
    pub basis: WireMatrix,
    pub sigma: WireMatrix,
}

impl SigmaLatticeDoc {
    pub fn from_module(m: &SigmaLattice) -> Self {
        SigmaLatticeDoc {
            p: m.prime().get(),
            ambient_dim: m.ambient_dim(),
            basis: matrix_to_wire(m.lattice().basis()),
            sigma: matrix_to_wire(m.sigma()),
        }
    }

    pub fn to_module(&self) -> Result<SigmaLattice> {
        let p = Prime::new(self.p)?;
        let n = self.ambient_dim;
        let basis = matrix_from_wire(&self.basis, n)?;
        let sigma = matrix_from_wire(&self.sigma, n)?;
        SigmaLattice::new(ZpLattice::from_generators(&basis, p)?, sigma)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormedLatticeDoc {
    pub basis: WireMatrix,
    pub sigma: WireMatrix,
    pub form: WireMatrix,
}

impl FormedLatticeDoc {
    pub fn from_formed(l: &FormedLattice) -> Self {
        FormedLatticeDoc {
            basis: matrix_to_wire(l.lattice().basis()),
            sigma: matrix_to_wire(l.module().sigma()),
            form: matrix_to_wire(l.form()),
        }
    }

    pub fn to_formed(&self, p: Prime) -> Result<FormedLattice> {
        let n = self.sigma.len();
        let basis = matrix_from_wire(&self.basis, n)?;
        let sigma = matrix_from_wire(&self.sigma, n)?;
        let form = matrix_from_wire(&self.form, n)?;
        let module = SigmaLattice::new(ZpLattice::from_generators(&basis, p)?, sigma)?;
        FormedLattice::new(module, form)
    }
}

pub type HermitianGramDoc = Vec<Vec<Vec<String>>>;

pub fn gram_to_wire(g: &HermitianGram) -> HermitianGramDoc {
    g.entries().iter().map(|r| r.iter().map(group_ring_to_wire).collect()).collect()
}

pub fn gram_from_wire(doc: &HermitianGramDoc, p: Prime) -> Result<HermitianGram> {
    let entries = doc
        .iter()
        .map(|r| r.iter().map(|e| group_ring_from_wire(e, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    HermitianGram::new(p, entries)
}

/// Two lattices in one ambient space with a shared σ; `inner ⊆ outer`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePairDoc {
    pub ambient_dim: usize,
    pub sigma: WireMatrix,
    pub outer: WireMatrix,
    pub inner: WireMatrix,
}

impl LatticePairDoc {
    pub fn from_pair(outer: &SigmaLattice, inner: &SigmaLattice) -> Self {
        LatticePairDoc {
            ambient_dim: outer.ambient_dim(),
            sigma: matrix_to_wire(outer.sigma()),
            outer: matrix_to_wire(outer.lattice().basis()),
            inner: matrix_to_wire(inner.lattice().basis()),
        }
    }

    pub fn to_pair(&self, p: Prime) -> Result<(SigmaLattice, SigmaLattice)> {
        let n = self.ambient_dim;
        let sigma = matrix_from_wire(&self.sigma, n)?;
        let outer = ZpLattice::from_generators(&matrix_from_wire(&self.outer, n)?, p)?;
        let inner = ZpLattice::from_generators(&matrix_from_wire(&self.inner, n)?, p)?;
        Ok((SigmaLattice::new(outer, sigma.clone())?, SigmaLattice::new(inner, sigma)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    SigmaLattice(SigmaLatticeDoc),
    FormedLattice(FormedLatticeDoc),
    HermitianGram(HermitianGramDoc),
    LatticePair(LatticePairDoc),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::SigmaLattice(_) => "sigma_lattice",
            Payload::FormedLattice(_) => "formed_lattice",
            Payload::HermitianGram(_) => "hermitian_gram",
            Payload::LatticePair(_) => "lattice_pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub schema_version: String,
    pub p: u32,
    pub payload: Payload,
}

/// A payload after validation against its domain invariants.
#[derive(Clone, Debug)]
pub enum Instance {
    SigmaLattice(SigmaLattice),
    FormedLattice(FormedLattice),
    HermitianGram(HermitianGram),
    LatticePair(SigmaLattice, SigmaLattice),
}

impl InstanceDoc {
    pub fn new(p: Prime, payload: Payload) -> Self {
        InstanceDoc { schema_version: SCHEMA_VERSION.into(), p: p.get(), payload }
    }

    pub fn validate(&self) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {:?}", self.schema_version)));
        }
        let p = Prime::new(self.p)?;
        Ok(match &self.payload {
            Payload::SigmaLattice(d) => {
                if d.p != self.p {
                    return Err(Error::PrimeMismatch(self.p, d.p));
                }
                Instance::SigmaLattice(d.to_module()?)
            }
            Payload::FormedLattice(d) => Instance::FormedLattice(d.to_formed(p)?),
            Payload::HermitianGram(d) => Instance::HermitianGram(gram_from_wire(d, p)?),
            Payload::LatticePair(d) => {
                let (m, l) = d.to_pair(p)?;
                Instance::LatticePair(m, l)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use crate::hermitian::{dim2_gram, hermitian_to_bilinear};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn matrix_roundtrip() {
        let m = QMatrix::from_rows(2, vec![vec![frac(1, 3), frac(-4, 1)], vec![frac(0, 1), frac(7, 2)]]);
        let w = matrix_to_wire(&m);
        assert_eq!(w[0], vec!["1/3".to_string(), "-4".to_string()]);
        assert_eq!(matrix_from_wire(&w, 2).unwrap(), m);
        assert!(matrix_from_wire(&w, 3).is_err());
    }

    #[test]
    fn group_ring_rejects_p_in_denominator() {
        let q = pr(3);
        let bad = vec!["1/3".to_string(), "0".into(), "0".into()];
        assert!(group_ring_from_wire(&bad, q).is_err());
        let ok = vec!["1/2".to_string(), "0".into(), "5".into()];
        assert!(group_ring_from_wire(&ok, q).is_ok());
    }

    #[test]
    fn instance_roundtrips() {
        let q = pr(3);
        let g = dim2_gram(q);
        let doc = InstanceDoc::new(q, Payload::HermitianGram(gram_to_wire(&g)));
        match doc.validate().unwrap() {
            Instance::HermitianGram(h) => assert_eq!(h, g),
            other => panic!("{other:?}"),
        }
        let l = hermitian_to_bilinear(&g).unwrap();
        let doc = InstanceDoc::new(q, Payload::FormedLattice(FormedLatticeDoc::from_formed(&l)));
        match doc.validate().unwrap() {
            Instance::FormedLattice(back) => assert_eq!(back, l),
            other => panic!("{other:?}"),
        }
        let m = SigmaLattice::block(q, 1, 1, 1);
        let doc = InstanceDoc::new(q, Payload::SigmaLattice(SigmaLatticeDoc::from_module(&m)));
        match doc.validate().unwrap() {
            Instance::SigmaLattice(back) => assert_eq!(back, m),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_schema_version() {
        let q = pr(2);
        let mut doc = InstanceDoc::new(q, Payload::HermitianGram(gram_to_wire(&HermitianGram::identity(q, 1))));
        doc.schema_version = "2".into();
        assert!(matches!(doc.validate(), Err(Error::Parse(_))));
    }
}
