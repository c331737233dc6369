//! Cochains and chains aligned with the canonical simplex order of a complex.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient ring of a cochain. Integer cochains use arbitrary precision.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const RING: Ring;

    fn to_f64(&self) -> f64;

    /// Adds `sign * value` to `self`, with `sign` in {-1, +1}.
    fn add_signed(&mut self, sign: i8, value: &Self) {
        let v = value.clone();
        let cur = std::mem::replace(self, Self::zero());
        *self = if sign >= 0 { cur + v } else { cur - v };
    }
}

impl Coefficient for f64 {
    const RING: Ring = Ring::Real;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn add_signed(&mut self, sign: i8, value: &Self) {
        if sign >= 0 {
            *self += value
        } else {
            *self -= value
        }
    }
}

impl Coefficient for BigInt {
    const RING: Ring = Ring::Int;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn add_signed(&mut self, sign: i8, value: &Self) {
        if sign >= 0 {
            *self += value
        } else {
            *self -= value
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Int,
    Real,
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "int" => Ok(Ring::Int),
            "real" => Ok(Ring::Real),
            other => Err(format!("unknown ring {other:?} (expected int or real)")),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ring::Int => "int",
            Ring::Real => "real",
        })
    }
}

/// A degree-`k` cochain: one coefficient per canonical `k`-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<R> {
    degree: usize,
    values: Vec<R>,
}

pub type IntCochain = Cochain<BigInt>;
pub type RealCochain = Cochain<f64>;

impl<R: Coefficient> Cochain<R> {
    pub fn new(degree: usize, values: Vec<R>) -> Self {
        Cochain { degree, values }
    }

    pub fn zeros(degree: usize, len: usize) -> Self {
        Cochain { degree, values: vec![R::zero(); len] }
    }

    /// Indicator cochain of the simplex at canonical index `index`.
    pub fn indicator(degree: usize, len: usize, index: usize) -> Self {
        let mut c = Self::zeros(degree, len);
        c.values[index] = R::one();
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> Ring {
        R::RING
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [R] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<R> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn to_real(&self) -> RealCochain {
        Cochain::new(self.degree, self.values.iter().map(Coefficient::to_f64).collect())
    }

    pub fn scaled(&self, s: &R) -> Self {
        Cochain::new(self.degree, self.values.iter().map(|v| v.clone() * s.clone()).collect())
    }

    pub fn negated(&self) -> Self {
        Cochain::new(self.degree, self.values.iter().map(|v| -v.clone()).collect())
    }

    /// Elementwise sum; panics if degrees or lengths differ.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        assert_eq!(self.values.len(), other.values.len(), "length mismatch");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Cochain::new(self.degree, values)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

impl RealCochain {
    pub fn norm_inf(&self) -> f64 {
        crate::tolerance::norm_inf(&self.values)
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl IntCochain {
    pub fn from_i64(degree: usize, values: &[i64]) -> Self {
        Cochain::new(degree, values.iter().map(|&v| BigInt::from(v)).collect())
    }
}

/// An integer chain aligned with the canonical `k`-simplex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    coefficients: Vec<i64>,
}

impl Chain {
    pub fn new(degree: usize, coefficients: Vec<i64>) -> Self {
        Chain { degree, coefficients }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn negated(&self) -> Chain {
        Chain::new(self.degree, self.coefficients.iter().map(|c| -c).collect())
    }
}
