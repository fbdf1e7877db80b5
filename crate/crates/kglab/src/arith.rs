//! Integer arithmetic kernels: gcd, Euler phi, divisor sums, gcd-power sums,
//! and max-norm sphere counts.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{domain, Result};
use crate::lattice::LatticeMode;
use crate::rational::{uint, Rational};

/// gcd(|a|, |b|); error when both arguments are zero.
pub fn gcd(a: i64, b: i64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(domain("gcd(0, 0) is undefined"));
    }
    Ok(gcd_u(a.unsigned_abs(), b.unsigned_abs()))
}

pub(crate) fn gcd_u(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient by trial factorization.
pub fn euler_phi(q: u64) -> Result<u64> {
    if q == 0 {
        return Err(domain("euler_phi(0) is undefined"));
    }
    let mut n = q;
    let mut phi = q;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi -= phi / n;
    }
    Ok(phi)
}

/// phi(0..=q_max) by sieve; index 0 holds 0.
pub fn phi_sieve(q_max: u64) -> Vec<u64> {
    let n = q_max as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            // i prime
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    if n >= 1 {
        phi[1] = 1;
    }
    phi
}

/// Moebius mu(0..=q_max); index 0 holds 0.
pub fn mobius_sieve(q_max: u64) -> Vec<i8> {
    let n = q_max as usize;
    let mut mu = vec![1i8; n + 1];
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        mu[0] = 0;
    }
    for i in 2..=n {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            if i * p > n {
                break;
            }
            is_comp[i * p] = true;
            if i % p == 0 {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    mu
}

/// Jordan totient J_w(0..=q_max): J_w(d) = sum_{e | d} mu(d/e) e^w, the
/// Moebius inverse of d^w, so that sum_{d | n} J_w(d) = n^w.
pub fn jordan_sieve(q_max: u64, w: u32) -> Vec<BigInt> {
    let n = q_max as usize;
    let mu = mobius_sieve(q_max);
    let mut j = vec![BigInt::from(0); n + 1];
    for e in 1..=n {
        let ew = num_traits::pow::pow(BigInt::from(e), w as usize);
        for d in (e..=n).step_by(e) {
            match mu[d / e] {
                1 => j[d] += &ew,
                -1 => j[d] -= &ew,
                _ => {}
            }
        }
    }
    j
}

/// All positive divisors of q, unsorted order not guaranteed.
pub fn divisors(q: u64) -> Vec<u64> {
    assert!(q >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= q {
        if q % d == 0 {
            small.push(d);
            if d != q / d {
                large.push(q / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// sigma(q) = sum of divisors.
pub fn sigma(q: u64) -> u64 {
    divisors(q).iter().sum()
}

/// `sum_{d | q} d^m phi(q/d)`, which equals `sum_{r=1}^q gcd(r,q)^m`.
pub fn gcd_power_sum(q: u64, m: u32) -> Result<BigInt> {
    if q == 0 || m == 0 {
        return Err(domain("gcd_power_sum needs q >= 1, m >= 1"));
    }
    let mut total = BigInt::from(0);
    for d in divisors(q) {
        let phi = euler_phi(q / d)?;
        total += num_traits::pow::pow(BigInt::from(d), m as usize) * BigInt::from(phi);
    }
    Ok(total)
}

/// Direct summation `sum_{r=1}^q gcd(r,q)^m`; the oracle for `gcd_power_sum`.
pub fn gcd_power_sum_direct(q: u64, m: u32) -> Result<BigInt> {
    if q == 0 || m == 0 {
        return Err(domain("gcd_power_sum_direct needs q >= 1, m >= 1"));
    }
    let mut total = BigInt::from(0);
    for r in 1..=q {
        total += num_traits::pow::pow(BigInt::from(gcd_u(r, q)), m as usize);
    }
    Ok(total)
}

/// Gamma(q, r) = gcd(q, r) / min(q, r), an exact rational in (0, 1].
pub fn gamma(q: u64, r: u64) -> Result<Rational> {
    if q == 0 || r == 0 {
        return Err(domain("gamma needs positive arguments"));
    }
    Ok(Rational::new(
        BigInt::from(gcd_u(q, r)),
        BigInt::from(q.min(r)),
    ))
}

/// Number of lattice vectors with max-norm exactly q.
///
/// Full lattice: `(2q+1)^n - (2q-1)^n`. Positive orthant: `(q+1)^n - q^n`.
pub fn sphere_count(n: u32, q: u64, mode: LatticeMode) -> BigInt {
    assert!(n >= 1 && q >= 1);
    let cube = |s: BigInt| num_traits::pow::pow(s, n as usize);
    match mode {
        LatticeMode::Full => {
            cube(BigInt::from(2 * q + 1)) - cube(BigInt::from(2 * q - 1))
        }
        LatticeMode::Orthant => cube(BigInt::from(q + 1)) - cube(BigInt::from(q)),
    }
}

/// Number of nonzero vectors with max-norm <= Q.
pub fn ball_count(n: u32, q_max: u64, mode: LatticeMode) -> BigInt {
    let cube = |s: BigInt| num_traits::pow::pow(s, n as usize);
    match mode {
        LatticeMode::Full => cube(BigInt::from(2 * q_max + 1)) - BigInt::one(),
        LatticeMode::Orthant => cube(BigInt::from(q_max + 1)) - BigInt::one(),
    }
}

/// Counts of primitive directions per norm, computed by Moebius inversion.
///
/// In full-lattice mode this counts canonical representatives, i.e. lines
/// through the origin; in orthant mode it counts primitive orthant vectors.
pub struct PrimitiveCounts {
    per_norm: Vec<BigInt>,
}

impl PrimitiveCounts {
    pub fn new(n: u32, q_max: u64, mode: LatticeMode) -> Self {
        let mu = mobius_sieve(q_max.max(1));
        let cumulative = |h: u64| -> BigInt {
            let mut total = BigInt::from(0);
            for d in 1..=h {
                if mu[d as usize] == 0 {
                    continue;
                }
                let c = ball_count(n, h / d, mode);
                if mu[d as usize] > 0 {
                    total += c;
                } else {
                    total -= c;
                }
            }
            total
        };
        let mut per_norm = Vec::with_capacity(q_max as usize + 1);
        per_norm.push(BigInt::from(0));
        let mut prev = BigInt::from(0);
        for h in 1..=q_max {
            let cur = cumulative(h);
            let mut exact = &cur - &prev;
            if mode == LatticeMode::Full {
                // two primitive vectors per line
                exact /= 2;
            }
            per_norm.push(exact);
            prev = cur;
        }
        PrimitiveCounts { per_norm }
    }

    /// Number of primitive directions with norm exactly h.
    pub fn at(&self, h: u64) -> &BigInt {
        &self.per_norm[h as usize]
    }

    pub fn at_rational(&self, h: u64) -> Rational {
        Rational::from_integer(self.per_norm[h as usize].clone())
    }
}

/// Exact rational q / phi(q), used for the dyadic block partition.
pub fn q_over_phi(q: u64) -> Result<Rational> {
    Ok(uint(q) / uint(euler_phi(q)?))
}
