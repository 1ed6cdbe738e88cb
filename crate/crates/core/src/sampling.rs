//! Deterministic random inputs for audits and corpus generators.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Rational, RationalVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `p/q` with `|p| <= max_num`, `1 <= q <= max_den`.
pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let p = rng.gen_range(-max_num..=max_num);
    let q = rng.gen_range(1..=max_den);
    Rational::new(p, q)
}

pub fn positive_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let p = rng.gen_range(1..=max_num);
    let q = rng.gen_range(1..=max_den);
    Rational::new(p, q)
}

pub fn vector<R: Rng>(rng: &mut R, dim: usize, max_num: i64, max_den: i64) -> RationalVector {
    RationalVector::new((0..dim).map(|_| rational(rng, max_num, max_den)).collect())
}

/// A vector whose absolute value is dominated by `|y|`, shaped like `x`:
/// each coordinate keeps the sign of `x` and is clamped to `|y_i|`.
pub fn dominated_by(x: &RationalVector, y: &RationalVector) -> RationalVector {
    RationalVector::new(
        x.coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| {
                let m = a.abs().min(b.abs());
                if a.is_negative() {
                    -m
                } else {
                    m
                }
            })
            .collect(),
    )
}

/// Two vectors with disjoint supports: each coordinate goes to one side, or neither.
pub fn disjoint_pair<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_num: i64,
    max_den: i64,
) -> (RationalVector, RationalVector) {
    let mut x = Vec::with_capacity(dim);
    let mut y = Vec::with_capacity(dim);
    for _ in 0..dim {
        let r = rational(rng, max_num, max_den);
        match rng.gen_range(0..3) {
            0 => {
                x.push(r);
                y.push(Rational::zero());
            }
            1 => {
                x.push(Rational::zero());
                y.push(r);
            }
            _ => {
                x.push(Rational::zero());
                y.push(Rational::zero());
            }
        }
    }
    (RationalVector::new(x), RationalVector::new(y))
}
