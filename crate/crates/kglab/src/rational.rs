//! Exact rational arithmetic helpers.
//!
//! All measures in this crate are `Rational`s: arbitrary-precision signed
//! fractions stored in lowest terms with positive denominator (which is what
//! `num_rational::BigRational` guarantees). Nothing here ever rounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `p/q` as a `Rational`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn uint(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// `x^e` for integer exponents (negative allowed; panics on `0^-e`).
///
/// Powers the numerator and denominator separately: `x` is already in lowest
/// terms, so no intermediate gcd reductions are needed.
pub fn pow_i(x: &Rational, e: i64) -> Rational {
    let k = e.unsigned_abs() as usize;
    let num = num_traits::pow::pow(x.numer().clone(), k);
    let den = num_traits::pow::pow(x.denom().clone(), k);
    if e >= 0 {
        Rational::new_raw(num, den)
    } else {
        assert!(!num.is_zero(), "0 to a negative power");
        if num.is_negative() {
            Rational::new_raw(-den, -num)
        } else {
            Rational::new_raw(den, num)
        }
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back for extreme magnitudes: divide with 64-bit scaling
        let num = x.numer().to_f64().unwrap_or(f64::MAX * x.numer().signum().to_f64().unwrap());
        let den = x.denom().to_f64().unwrap_or(f64::MAX);
        num / den
    })
}

/// Circular distance on R/Z: `min(frac(a-b), 1-frac(a-b))`, in `[0, 1/2]`.
pub fn circ_dist(a: &Rational, b: &Rational) -> Rational {
    let d = frac(&(a - b));
    let alt = Rational::one() - &d;
    if d <= alt {
        d
    } else {
        alt
    }
}

/// Pairwise (tree) summation. Equivalent to sequential `+` but far cheaper
/// when many denominators must merge into one huge common denominator.
pub fn tree_sum(mut terms: Vec<Rational>) -> Rational {
    if terms.is_empty() {
        return Rational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}
