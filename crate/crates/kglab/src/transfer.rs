//! Symbolic series classification for the zero-one dichotomies and the
//! Lebesgue-to-Hausdorff transference transform.
//!
//! Everything here is exponent algebra over exact rationals: a radius family
//! `c * q^-tau * ln(q+1)^-sigma` is classified by comparing its power and
//! log exponents against the integral test, with the boundary exponent
//! resolved by the logarithmic refinement.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, KgError, Result};
use crate::qia::{BallSequence, RadiusRule};
use crate::rational::{int, pow_i, Rational};

/// `f(r) = r^s * (log 1/r)^t` for `r` near 0.
///
/// Validity is checked symbolically: `s > 0` guarantees that `f` is
/// continuous, non-decreasing near 0, and vanishes at 0 regardless of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionFunction {
    s: Rational,
    t: Rational,
}

impl DimensionFunction {
    pub fn power_log(s: Rational, t: Rational) -> Result<Self> {
        if !s.is_positive() {
            return Err(domain(
                "dimension function needs a positive power exponent",
            ));
        }
        Ok(DimensionFunction { s, t })
    }

    /// The pure power law `f(r) = r^s`.
    pub fn power(s: Rational) -> Result<Self> {
        Self::power_log(s, Rational::zero())
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// The power exponent of `g(r) = r^{-m(n-1)} f(r)`.
    fn g_exponent(&self, n: u32, m: u32) -> Rational {
        &self.s - int(m as i64 * (n as i64 - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    /// Only for table sequences without a declared tail, or damped series
    /// exactly on the logarithmic boundary.
    Unknown,
}

/// Outcome of an integral-test classification, with the witness exponents
/// of the compared series `q^power * ln(q)^log` when they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesVerdict {
    pub verdict: Verdict,
    pub power_exponent: Option<Rational>,
    pub log_exponent: Option<Rational>,
}

impl SeriesVerdict {
    fn bare(verdict: Verdict) -> Self {
        SeriesVerdict { verdict, power_exponent: None, log_exponent: None }
    }

    /// Verdict for `sum q^p * ln(q)^l`: diverges iff `p > -1`, or `p = -1`
    /// with `l >= -1`.
    fn from_exponents(p: Rational, l: Rational) -> Self {
        let minus_one = -Rational::one();
        let verdict = if p > minus_one || (p == minus_one && l >= minus_one) {
            Verdict::Diverges
        } else {
            Verdict::Converges
        };
        SeriesVerdict { verdict, power_exponent: Some(p), log_exponent: Some(l) }
    }
}

/// The symbolic radius family `c * q^-tau * ln(q+1)^-sigma`, when the
/// sequence has one.
fn power_log_params(seq: &BallSequence) -> Option<(Rational, Rational, Rational)> {
    match &seq.rule {
        RadiusRule::PowerLog { c, tau, sigma } => {
            Some((c.clone(), tau + &seq.extra_tau, sigma.clone()))
        }
        _ => None,
    }
}

/// Classify `sum_q q^{n-1} psi(q)^m` for the radius family of `seq`.
///
/// Table sequences with a zero tail and finite-support sequences are finite
/// sums; tables without a declared tail cannot be classified.
pub fn series_classify(seq: &BallSequence, n: u32, m: u32) -> Result<SeriesVerdict> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    if m != seq.m {
        return Err(KgError::DimensionMismatch(
            "m does not match the ball sequence".into(),
        ));
    }
    Ok(match power_log_params(seq) {
        Some((c, tau, sigma)) => {
            if c.is_zero() {
                SeriesVerdict::bare(Verdict::Converges)
            } else {
                let p = int(n as i64 - 1) - int(m as i64) * &tau;
                let l = -int(m as i64) * &sigma;
                SeriesVerdict::from_exponents(p, l)
            }
        }
        None if seq.has_declared_tail() => SeriesVerdict::bare(Verdict::Converges),
        None => SeriesVerdict::bare(Verdict::Unknown),
    })
}

/// `x^e` for rational `e`, exact or refused: the denominator-root of both
/// parts of `x` must exist in the integers.
fn pow_rational_exact(x: &Rational, e: &Rational) -> Result<Rational> {
    if e.is_integer() {
        return Ok(pow_i(x, e.numer().to_i64().ok_or_else(|| domain("exponent too large"))?));
    }
    if x.is_zero() {
        return if e.is_positive() {
            Ok(Rational::zero())
        } else {
            Err(domain("0 to a non-positive power"))
        };
    }
    if x.is_negative() {
        return Err(domain("negative base with fractional exponent"));
    }
    let root = e
        .denom()
        .to_u32()
        .ok_or_else(|| KgError::UnsupportedScale("root order too large".into()))?;
    let rn = x.numer().nth_root(root);
    let rd = x.denom().nth_root(root);
    if rn.clone().pow(root) != *x.numer() || rd.clone().pow(root) != *x.denom() {
        return Err(KgError::UnsupportedScale(format!(
            "constant {x} has no exact rational power {e}"
        )));
    }
    let base = Rational::new(rn, rd);
    Ok(pow_i(&base, e.numer().to_i64().ok_or_else(|| domain("exponent too large"))?))
}

/// The transference transform: for `g(r) = r^{-m(n-1)} f(r)`, the sequence
/// `theta(q) = q * g(psi(q)/q)^{1/m}` in the same radius family.
///
/// Restricted to pure power dimension functions (`t = 0`): a log factor in
/// `f` would push `theta` outside the power-log family. The transformed
/// constant must have an exact rational value, otherwise the transform is
/// refused rather than approximated.
pub fn theta_transform(
    psi: &BallSequence,
    f: &DimensionFunction,
    n: u32,
    m: u32,
) -> Result<BallSequence> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    if m != psi.m {
        return Err(KgError::DimensionMismatch(
            "m does not match the ball sequence".into(),
        ));
    }
    if !f.t.is_zero() {
        return Err(KgError::UnsupportedScale(
            "transference is only exact for pure power dimension functions".into(),
        ));
    }
    let e = f.g_exponent(n, m);
    if !e.is_positive() {
        return Err(domain(
            "g(r) = r^{-m(n-1)} f(r) must itself be a dimension function",
        ));
    }
    let (c, tau, sigma) = power_log_params(psi)
        .ok_or_else(|| domain("transference needs a power-log radius family"))?;
    // psi(q)/q = c q^{-(tau+1)} ln(q+1)^{-sigma}, so
    // theta(q) = c^{e/m} q^{1 - (e/m)(tau+1)} ln(q+1)^{-sigma e/m}
    let em = &e / int(m as i64);
    let c_new = pow_rational_exact(&c, &em)?;
    let tau_new = &em * (&tau + Rational::one()) - Rational::one();
    let sigma_new = &sigma * &em;
    BallSequence::power_log(m, c_new, tau_new, sigma_new, psi.center(1).to_vec())
}

/// Classify `sum_q q^{n+m-1} g(psi(q)/q)`, the Hausdorff-side series.
///
/// Symbolically, `ln(1/(psi(q)/q))` grows like `(tau+1) ln q`, so a log
/// exponent `t` on the dimension function contributes `t` to the log
/// exponent of the compared series.
pub fn hausdorff_series_classify(
    psi: &BallSequence,
    f: &DimensionFunction,
    n: u32,
    m: u32,
) -> Result<SeriesVerdict> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    if m != psi.m {
        return Err(KgError::DimensionMismatch(
            "m does not match the ball sequence".into(),
        ));
    }
    let e = f.g_exponent(n, m);
    if !e.is_positive() {
        return Err(domain(
            "g(r) = r^{-m(n-1)} f(r) must itself be a dimension function",
        ));
    }
    Ok(match power_log_params(psi) {
        Some((c, tau, sigma)) => {
            if c.is_zero() {
                SeriesVerdict::bare(Verdict::Converges)
            } else {
                let tp1 = &tau + Rational::one();
                if !f.t.is_zero() && !tp1.is_positive() {
                    return Err(domain(
                        "log-weighted dimension functions need psi(q)/q -> 0",
                    ));
                }
                let p = int(n as i64 + m as i64 - 1) - &e * &tp1;
                let l = -&e * &sigma + &f.t;
                SeriesVerdict::from_exponents(p, l)
            }
        }
        None if psi.has_declared_tail() => SeriesVerdict::bare(Verdict::Converges),
        None => SeriesVerdict::bare(Verdict::Unknown),
    })
}

/// What the dichotomy theorems let us assert about `|A_{n,m}(Psi)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    MeasureZero,
    MeasureOne,
    /// `nm = 2` with a divergent series but no divergent damped series:
    /// full measure is conjectured, not proved.
    Open,
    /// `(n, m) = (1, 1)`: no unconditional statement exists; counterexamples
    /// rule one out for non-monotone radii.
    NoUnconditionalPrediction,
    /// The series itself could not be classified.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyPrediction {
    pub prediction: Prediction,
    /// Verdict on `sum q^{n-1} psi(q)^m`.
    pub series: SeriesVerdict,
    /// Verdict on the Euler-phi-damped series, when `nm = 2` and a damping
    /// exponent was supplied.
    pub damped_series: Option<SeriesVerdict>,
    pub note: &'static str,
}

/// Classify the damped series `sum (phi(q)/q)^{1+eps} q^{n-1} psi(q)^m`.
///
/// `phi(q)/q` sits between `c / ln ln q` and 1, so the damping is below
/// every power of `ln q`: strict divergence survives it, the exact
/// logarithmic boundary does not.
fn damped_classify(series: &SeriesVerdict) -> SeriesVerdict {
    let (Some(p), Some(l)) = (&series.power_exponent, &series.log_exponent) else {
        return series.clone();
    };
    let minus_one = -Rational::one();
    let verdict = if p > &minus_one || (p == &minus_one && l > &minus_one) {
        Verdict::Diverges
    } else if series.verdict == Verdict::Converges {
        Verdict::Converges
    } else {
        // boundary p = -1, l = -1: decided at the ln-ln scale, outside
        // the exponent algebra
        Verdict::Unknown
    };
    SeriesVerdict {
        verdict,
        power_exponent: series.power_exponent.clone(),
        log_exponent: series.log_exponent.clone(),
    }
}

/// The zero-one prediction for `|A_{n,m}(Psi)|` with the theorem that
/// backs it: unconditional for `nm > 2`, damped-series-conditional for
/// `nm = 2`, absent for `(1, 1)`.
pub fn dichotomy_predict(
    seq: &BallSequence,
    n: u32,
    m: u32,
    eps: Option<&Rational>,
) -> Result<DichotomyPrediction> {
    let series = series_classify(seq, n, m)?;
    let nm = n as u64 * m as u64;
    if nm == 1 {
        return Ok(DichotomyPrediction {
            prediction: Prediction::NoUnconditionalPrediction,
            series,
            damped_series: None,
            note: "no inhomogeneous shift rescues (1,1) without monotonicity",
        });
    }
    if nm == 2 {
        if series.verdict == Verdict::Converges {
            return Ok(DichotomyPrediction {
                prediction: Prediction::MeasureZero,
                series,
                damped_series: None,
                note: "convergence half holds for all n, m",
            });
        }
        if let Some(eps) = eps {
            if !eps.is_positive() {
                return Err(domain("damping exponent must be positive"));
            }
            let damped = damped_classify(&series);
            let prediction = match damped.verdict {
                Verdict::Diverges => Prediction::MeasureOne,
                _ => Prediction::Open,
            };
            return Ok(DichotomyPrediction {
                prediction,
                series,
                damped_series: Some(damped),
                note: "nm = 2: full measure under extra divergence; else open",
            });
        }
        return Ok(DichotomyPrediction {
            prediction: Prediction::Open,
            series,
            damped_series: None,
            note: "nm = 2 divergence without damping exponent: conjectured only",
        });
    }
    let prediction = match series.verdict {
        Verdict::Converges => Prediction::MeasureZero,
        Verdict::Diverges => Prediction::MeasureOne,
        Verdict::Unknown => Prediction::Undecided,
    };
    Ok(DichotomyPrediction {
        prediction,
        series,
        damped_series: None,
        note: "nm > 2: unconditional dichotomy",
    })
}
