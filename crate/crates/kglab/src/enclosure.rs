//! Certified enclosures for the few spots where exactness is impossible.
//!
//! Most of the engine works in exact rationals. Scale factors like
//! `(q1/q2)^(w/m)` and weights like `(phi(q)/q)^(1+eps)` are irrational in
//! general; those are evaluated as directed-rounding enclosures `[lo, hi]`
//! with rational endpoints. An enclosure that happens to be exact is a
//! "point" and downstream code can demand a point where the exact mode
//! requires one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{KgError, Result};
use crate::rational::{int, pow_i, rat, to_f64, Rational};

/// Default precision (in bits after the binary point) for directed roundings.
pub const DEFAULT_BITS: u32 = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Enclosure::point(Rational::zero())
    }

    pub fn one() -> Self {
        Enclosure::point(Rational::one())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Extract the exact value, or fail the way exact mode must.
    pub fn into_point(self) -> Result<Rational> {
        if self.is_point() {
            Ok(self.lo)
        } else {
            Err(KgError::UnsupportedScale(format!(
                "value is not exactly representable (enclosure width {})",
                self.width()
            )))
        }
    }

    pub fn expect_point(&self, what: &str) -> Result<Rational> {
        if self.is_point() {
            Ok(self.lo.clone())
        } else {
            Err(KgError::UnsupportedScale(what.to_string()))
        }
    }

    pub fn mid_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Enclosure {
        if c.is_negative() {
            Enclosure {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Enclosure {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// Reciprocal; requires the interval to exclude zero.
    pub fn recip(&self) -> Enclosure {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "recip of interval containing zero"
        );
        Enclosure {
            lo: self.hi.clone().recip(),
            hi: self.lo.clone().recip(),
        }
    }

    pub fn div(&self, other: &Enclosure) -> Enclosure {
        self.mul(&other.recip())
    }

    /// Endpointwise min with a constant (monotone clamp from above).
    pub fn min_with(&self, cap: &Rational) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(cap.clone()),
            hi: self.hi.clone().min(cap.clone()),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `x^e` for integer `e`; requires `lo > 0` when `e < 0`.
    pub fn pow_int(&self, e: i64) -> Enclosure {
        if e == 0 {
            return Enclosure::one();
        }
        if e > 0 && e % 2 == 1 {
            return Enclosure::new(pow_i(&self.lo, e), pow_i(&self.hi, e));
        }
        // even positive powers of possibly-negative intervals, and negatives
        if e > 0 {
            if !self.lo.is_negative() {
                Enclosure::new(pow_i(&self.lo, e), pow_i(&self.hi, e))
            } else if !self.hi.is_positive() {
                Enclosure::new(pow_i(&self.hi, e), pow_i(&self.lo, e))
            } else {
                let hi = pow_i(&self.lo, e).max(pow_i(&self.hi, e));
                Enclosure::new(Rational::zero(), hi)
            }
        } else {
            assert!(self.lo.is_positive(), "pow_int: negative exponent needs positive interval");
            Enclosure::new(pow_i(&self.hi, e), pow_i(&self.lo, e))
        }
    }

    /// `x^(1/n)` for `x >= 0`, exact when both endpoints are perfect n-th
    /// powers, else a directed dyadic rounding at `bits` of precision.
    pub fn nth_root(&self, n: u32, bits: u32) -> Enclosure {
        assert!(n >= 1);
        assert!(!self.lo.is_negative(), "nth_root of negative interval");
        if n == 1 {
            return self.clone();
        }
        let lo = nth_root_lower(&self.lo, n, bits);
        let hi = nth_root_upper(&self.hi, n, bits);
        Enclosure::new(lo, hi)
    }

    /// Outward rounding of the endpoints onto the dyadic grid 2^-bits.
    /// Points stay exact; intervals only widen, so enclosures stay sound.
    pub fn round_out(&self, bits: u32) -> Enclosure {
        if self.is_point() {
            return self.clone();
        }
        let scale: BigInt = BigInt::one() << bits;
        let lo = (self.lo.numer() * &scale).div_floor(self.lo.denom());
        let hi = (self.hi.numer() * &scale).div_ceil(self.hi.denom());
        Enclosure {
            lo: Rational::new(lo, scale.clone()),
            hi: Rational::new(hi, scale),
        }
    }

    /// `x^(a/b)` for a rational exponent; `x` must be positive unless the
    /// exponent is a non-negative integer.
    pub fn pow_rat(&self, e: &Rational, bits: u32) -> Enclosure {
        if e.is_integer() {
            let ei = bigint_to_i64(e.numer());
            return self.pow_int(ei);
        }
        let a = bigint_to_i64(e.numer());
        let b = bigint_to_i64(e.denom()) as u32;
        assert!(self.lo.is_positive(), "pow_rat: fractional exponent needs positive interval");
        self.pow_int(a).nth_root(b, bits)
    }
}

/// Pairwise summation of enclosures; see `rational::tree_sum`.
pub fn tree_sum(terms: Vec<Enclosure>) -> Enclosure {
    let (lo, hi): (Vec<Rational>, Vec<Rational>) =
        terms.into_iter().map(|e| (e.lo, e.hi)).unzip();
    Enclosure::new(
        crate::rational::tree_sum(lo),
        crate::rational::tree_sum(hi),
    )
}

fn bigint_to_i64(x: &BigInt) -> i64 {
    use num_traits::ToPrimitive;
    x.to_i64().expect("exponent out of i64 range")
}

/// Largest dyadic `r/2^bits` with `(r/2^bits)^n <= x`.
fn nth_root_lower(x: &Rational, n: u32, bits: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    if let Some(exact) = exact_nth_root(x, n) {
        return exact;
    }
    let scaled = floor_shift(x, n * bits);
    let r = scaled.nth_root(n);
    Rational::new(r, BigInt::one() << bits)
}

/// Smallest dyadic `r/2^bits` with `(r/2^bits)^n >= x`.
fn nth_root_upper(x: &Rational, n: u32, bits: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    if let Some(exact) = exact_nth_root(x, n) {
        return exact;
    }
    let scaled = floor_shift(x, n * bits);
    let r = scaled.nth_root(n) + BigInt::one();
    Rational::new(r, BigInt::one() << bits)
}

fn exact_nth_root(x: &Rational, n: u32) -> Option<Rational> {
    let pn = x.numer().nth_root(n);
    let qn = x.denom().nth_root(n);
    if &num_traits::pow::pow(pn.clone(), n as usize) == x.numer()
        && &num_traits::pow::pow(qn.clone(), n as usize) == x.denom()
    {
        Some(Rational::new(pn, qn))
    } else {
        None
    }
}

/// floor(x * 2^shift)
fn floor_shift(x: &Rational, shift: u32) -> BigInt {
    (x.numer() << shift).div_floor(x.denom())
}

/// Certified enclosure of `ln x` for rational `x > 0`.
///
/// Reduces to `m in [1, 2)` and sums `2*atanh((m-1)/(m+1))` with an exact
/// rational tail bound.
pub fn ln_enclosure(x: &Rational, bits: u32) -> Enclosure {
    assert!(x.is_positive(), "ln of non-positive value");
    let two = int(2);
    let mut m = x.clone();
    let mut e: i64 = 0;
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < Rational::one() {
        m *= &two;
        e -= 1;
    }
    let t = (&m - Rational::one()) / (&m + Rational::one());
    let ln_m = atanh_series(&t, bits);
    if e == 0 {
        return ln_m;
    }
    let ln2 = atanh_series(&rat(1, 3), bits); // ln 2 = 2 atanh(1/3)
    ln_m.add(&ln2.scale(&int(e)))
}

/// Enclosure of `2*atanh(t)` for rational `t in [0, 1/3]`.
fn atanh_series(t: &Rational, bits: u32) -> Enclosure {
    assert!(!t.is_negative() && t <= &rat(1, 3));
    if t.is_zero() {
        return Enclosure::zero();
    }
    // terms shrink at least by 1/9 each; t^(2K+1) <= 3^-(2K+1)
    let terms = (bits as usize + 6) / 3 + 1;
    let t2 = t * t;
    let mut sum = Rational::zero();
    let mut power = t.clone();
    for k in 0..terms {
        sum += &power / int(2 * k as i64 + 1);
        power *= &t2;
    }
    // remainder: sum_{k>=K} t^(2k+1)/(2k+1) <= t^(2K+1) / ((2K+1)(1 - t^2))
    let tail = &power / (int(2 * terms as i64 + 1) * (Rational::one() - &t2));
    Enclosure::new(&sum * int(2), (&sum + tail) * int(2))
}
