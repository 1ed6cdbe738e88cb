use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{LatticeError, ParseError};

/// An element of ℚⁿ ordered coordinatewise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    /// Panics on an empty coordinate list; use [`RationalVector::try_new`] for untrusted input.
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "vectors have dimension >= 1");
        RationalVector(coords)
    }

    pub fn try_new(coords: Vec<Rational>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::EmptyVector);
        }
        Ok(RationalVector(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    fn check_dim(&self, other: &Self) -> Result<(), LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, LatticeError> {
        self.check_dim(other)?;
        Ok(RationalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect(),
        ))
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        RationalVector(self.0.iter().map(f).collect())
    }

    /// Supremum `x ∨ y`: the coordinatewise maximum.
    pub fn sup(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    /// Infimum `x ∧ y`: the coordinatewise minimum.
    pub fn inf(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    /// Positive part `x ∨ 0`.
    pub fn pos(&self) -> Self {
        self.map(|a| a.clone().max(Rational::zero()))
    }

    /// Negative part `(-x) ∨ 0`.
    pub fn neg_part(&self) -> Self {
        self.map(|a| (-a).max(Rational::zero()))
    }

    /// Absolute value `x ∨ (-x)`.
    pub fn abs(&self) -> Self {
        self.map(Rational::abs)
    }

    /// Coordinatewise order.
    pub fn leq(&self, other: &Self) -> Result<bool, LatticeError> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// `0 <= self`.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    /// `|x| ∧ |y| = 0`, which in ℚⁿ means the supports do not overlap.
    pub fn is_disjoint(&self, other: &Self) -> Result<bool, LatticeError> {
        Ok(self.abs().inf(&other.abs())?.is_zero())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        self.map(|a| a * lambda)
    }
}

/// Panics on dimension mismatch; the fallible form is [`RationalVector::try_add`].
impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        self.map(|a| -a)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `[1, -1/2]`, `1,-1/2` or a JSON array of rational strings.
impl FromStr for RationalVector {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if let Ok(v) = serde_json::from_str::<Vec<Rational>>(trimmed) {
            return RationalVector::try_new(v).map_err(|_| ParseError::Vector(s.to_string()));
        }
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(trimmed);
        let coords = inner
            .split(',')
            .map(|c| c.trim().trim_matches('"').parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::Vector(s.to_string()))?;
        RationalVector::try_new(coords).map_err(|_| ParseError::Vector(s.to_string()))
    }
}
