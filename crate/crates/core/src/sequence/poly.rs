use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::Rational;

/// A univariate polynomial `Σ c_i t^i` over ℚ, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Poly(Vec<Rational>);

impl From<Vec<Rational>> for Poly {
    fn from(coeffs: Vec<Rational>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<Rational> {
    fn from(p: Poly) -> Self {
        p.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        match r.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_rational(self) -> Rational {
        match self {
            Sign::Negative => Rational::from_integer(-1),
            Sign::Zero => Rational::zero(),
            Sign::Positive => Rational::one(),
        }
    }
}

/// Sign of `p(t)` for all sufficiently small `t > 0`, with a threshold:
/// `sign(p(1/k))` equals `sign` for every integer `k >= threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualSign {
    pub sign: Sign,
    pub threshold: u64,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> Rational {
        self.0.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        // Horner.
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// `p(1/k)`.
    pub fn at_index(&self, k: u64) -> Rational {
        self.eval(&Rational::from_bigint(BigInt::from(k)).recip())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rational::from_integer(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Eventual sign as `t → 0⁺`: the sign of the lowest-order nonzero coefficient.
    ///
    /// Writing `p(t) = t^m (a_m + Σ_{i>m} a_i t^{i-m})`, for `0 < t <= 1` the tail is
    /// bounded by `t·S` with `S = Σ_{i>m} |a_i|`, so the sign is settled once
    /// `t < |a_m| / S`, i.e. for `k >= floor(S / |a_m|) + 1`.
    pub fn eventual_sign(&self) -> EventualSign {
        let Some(m) = self.0.iter().position(|c| !c.is_zero()) else {
            return EventualSign {
                sign: Sign::Zero,
                threshold: 1,
            };
        };
        let lead = &self.0[m];
        let tail: Rational = self.0[m + 1..].iter().map(Rational::abs).sum();
        let bound = (tail / lead.abs()).floor() + BigInt::from(1);
        let threshold = if bound <= BigInt::zero() {
            1
        } else {
            bound.to_u64().unwrap_or(u64::MAX)
        };
        EventualSign {
            sign: Sign::of(lead),
            threshold: threshold.max(1),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
