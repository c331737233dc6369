//! JSON interchange for complexes and cochains.
//!
//! A complex document lists its maximal simplices as increasing vertex tuples,
//! optionally with one orientation sign per simplex. A cochain document carries
//! its degree, ring and one value per canonical simplex. Integer values that do
//! not fit in 64 bits are written as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cochain::{Cochain, IntCochain, RealCochain, Ring};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    pub top_simplices: Vec<Simplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
}

impl ComplexDocument {
    pub fn from_complex(k: &SimplicialComplex) -> ComplexDocument {
        ComplexDocument {
            dim: k.dim(),
            vertex_count: None,
            top_simplices: k.maximal_simplices(),
            orientation: k.orientation().map(<[i8]>::to_vec),
        }
    }

    pub fn into_complex(self) -> Result<SimplicialComplex> {
        SimplicialComplex::build(self.dim, self.top_simplices, self.orientation, self.vertex_count)
    }
}

pub fn load_complex(text: &str) -> Result<SimplicialComplex> {
    let doc: ComplexDocument = serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    doc.into_complex()
}

pub fn complex_to_json(k: &SimplicialComplex) -> String {
    serde_json::to_string(&ComplexDocument::from_complex(k)).expect("complex documents always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDocument {
    pub degree: usize,
    pub ring: Ring,
    pub values: Vec<Value>,
}

/// A cochain read from a document, in whichever ring it declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCochain {
    Int(IntCochain),
    Real(RealCochain),
}

impl AnyCochain {
    pub fn degree(&self) -> usize {
        match self {
            AnyCochain::Int(c) => c.degree(),
            AnyCochain::Real(c) => c.degree(),
        }
    }

    pub fn to_real(&self) -> RealCochain {
        match self {
            AnyCochain::Int(c) => c.to_real(),
            AnyCochain::Real(c) => c.clone(),
        }
    }

    /// The integer cochain, or `None` for a real one.
    pub fn as_int(&self) -> Option<&IntCochain> {
        match self {
            AnyCochain::Int(c) => Some(c),
            AnyCochain::Real(_) => None,
        }
    }
}

fn int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::InvalidDocument(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s.parse().map_err(|_| Error::InvalidDocument(format!("{s:?} is not an integer"))),
        other => Err(Error::InvalidDocument(format!("{other} is not an integer"))),
    }
}

fn real_value(v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    };
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::InvalidDocument(format!("{v} is not a finite real number"))),
    }
}

impl CochainDocument {
    pub fn into_cochain(self) -> Result<AnyCochain> {
        Ok(match self.ring {
            Ring::Int => AnyCochain::Int(Cochain::new(
                self.degree,
                self.values.iter().map(int_value).collect::<Result<_>>()?,
            )),
            Ring::Real => AnyCochain::Real(Cochain::new(
                self.degree,
                self.values.iter().map(real_value).collect::<Result<_>>()?,
            )),
        })
    }

    pub fn from_int(c: &IntCochain) -> CochainDocument {
        let values = c
            .values()
            .iter()
            .map(|v| match i64::try_from(v) {
                Ok(i) => Value::from(i),
                Err(_) => Value::String(v.to_string()),
            })
            .collect();
        CochainDocument { degree: c.degree(), ring: Ring::Int, values }
    }

    pub fn from_real(c: &RealCochain) -> CochainDocument {
        CochainDocument { degree: c.degree(), ring: Ring::Real, values: c.values().iter().map(|&v| Value::from(v)).collect() }
    }
}

pub fn load_cochain(text: &str) -> Result<AnyCochain> {
    let doc: CochainDocument = serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))?;
    doc.into_cochain()
}

pub fn int_cochain_to_json(c: &IntCochain) -> String {
    serde_json::to_string(&CochainDocument::from_int(c)).expect("cochain documents always serialize")
}

pub fn real_cochain_to_json(c: &RealCochain) -> String {
    serde_json::to_string(&CochainDocument::from_real(c)).expect("cochain documents always serialize")
}
