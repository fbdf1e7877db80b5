//! Measure sums, gcd-damped pair sums, quasi-independence ratios,
//! independence-inheritance comparisons, Chung–Erdős bounds, and the
//! dyadic-block / extra-divergence sums.
//!
//! The pair sum over `1 <= |q1| <= |q2| <= Q` is computed by aggregation:
//! nonparallel pairs contribute exact products of ball measures (counted via
//! sphere counts), and parallel pairs are enumerated by primitive direction
//! and multiplier pair, each reduced to the 1-D kernel. An exhaustive double
//! loop over vectors serves as the oracle.

use std::collections::HashMap;

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use crate::arith::{euler_phi, gcd_u, phi_sieve, sphere_count, PrimitiveCounts};
use crate::enclosure::{Enclosure, DEFAULT_BITS};
use crate::error::{domain, KgError, Result};
use crate::lattice::{vectors_up_to, LatticeMode, LatticeVector};
use crate::rational::{half, int, pow_i, rat, uint, Rational};
use crate::torus::{intersect_measure, Ball, IntervalUnion};

/// How the common ball center is chosen per norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterRule {
    /// One fixed inhomogeneous shift y for every q.
    Fixed(Vec<Rational>),
    /// Explicit per-q centers (index q-1), falling back to a default.
    PerQ {
        list: Vec<Vec<Rational>>,
        default: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadiusRule {
    /// radius(q) = c * q^{-tau} * ln(q+1)^{-sigma}
    PowerLog {
        c: Rational,
        tau: Rational,
        sigma: Rational,
    },
    /// Explicit radii (index q-1); zero beyond the table when `tail_zero`.
    Table { radii: Vec<Rational>, tail_zero: bool },
    /// Constant radius on a declared support set, zero elsewhere.
    DyadicSupport {
        radius: Rational,
        support: std::collections::BTreeSet<u64>,
    },
}

/// A sequence of balls B_q on the m-torus, one per norm q >= 1.
///
/// `extra_tau` is an additional q^{-extra_tau} factor on the radius; lifting
/// a sequence from (n,m) to (n+k,m) scales radii by q^{-k/m}, which is where
/// non-integer values come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSequence {
    pub m: u32,
    pub rule: RadiusRule,
    pub centers: CenterRule,
    pub extra_tau: Rational,
}

impl BallSequence {
    pub fn new(m: u32, rule: RadiusRule, centers: CenterRule) -> Result<Self> {
        if m == 0 {
            return Err(domain("ball sequence needs m >= 1"));
        }
        let dim = match &centers {
            CenterRule::Fixed(y) => y.len(),
            CenterRule::PerQ { default, .. } => default.len(),
        };
        if dim != m as usize {
            return Err(KgError::DimensionMismatch(
                "center dimension does not match m".into(),
            ));
        }
        Ok(BallSequence {
            m,
            rule,
            centers,
            extra_tau: Rational::zero(),
        })
    }

    pub fn power_log(m: u32, c: Rational, tau: Rational, sigma: Rational, y: Vec<Rational>) -> Result<Self> {
        Self::new(m, RadiusRule::PowerLog { c, tau, sigma }, CenterRule::Fixed(y))
    }

    /// Centered-at-0 power law radius(q) = c * q^{-tau}.
    pub fn power(m: u32, c: Rational, tau: Rational) -> Result<Self> {
        Self::power_log(m, c, tau, Rational::zero(), vec![Rational::zero(); m as usize])
    }

    /// Radii scaled by q^{-k/m}: the ball sequence of the (n+k, m) lift.
    pub fn lifted(&self, k: u32) -> BallSequence {
        let mut out = self.clone();
        out.extra_tau = &self.extra_tau + rat(k as i64, self.m as i64);
        out
    }

    pub fn center(&self, q: u64) -> &[Rational] {
        match &self.centers {
            CenterRule::Fixed(y) => y,
            CenterRule::PerQ { list, default } => list
                .get((q - 1) as usize)
                .map(|v| v.as_slice())
                .unwrap_or(default),
        }
    }

    /// True when every radius (and hence every measure) is rational.
    pub fn is_exact(&self) -> bool {
        if !self.extra_tau.is_integer() {
            return false;
        }
        match &self.rule {
            RadiusRule::PowerLog { tau, sigma, .. } => tau.is_integer() && sigma.is_zero(),
            _ => true,
        }
    }

    /// Table sequences without a declared tail cannot be classified past
    /// their table.
    pub fn has_declared_tail(&self) -> bool {
        !matches!(&self.rule, RadiusRule::Table { tail_zero: false, .. })
    }

    fn base_radius_factor(&self, q: u64, bits: u32) -> Enclosure {
        match &self.rule {
            RadiusRule::PowerLog { c, tau, sigma } => {
                let mut e = Enclosure::point(c.clone())
                    .mul(&Enclosure::point(uint(q)).pow_rat(&-tau, bits));
                if !sigma.is_zero() {
                    let l = crate::enclosure::ln_enclosure(&uint(q + 1), bits);
                    e = e.mul(&l.pow_rat(&-sigma, bits));
                }
                e
            }
            RadiusRule::Table { radii, tail_zero } => {
                let r = radii.get((q - 1) as usize).cloned().unwrap_or_else(|| {
                    debug_assert!(*tail_zero, "radius past table without tail rule");
                    Rational::zero()
                });
                Enclosure::point(r)
            }
            RadiusRule::DyadicSupport { radius, support } => {
                if support.contains(&q) {
                    Enclosure::point(radius.clone())
                } else {
                    Enclosure::point(Rational::zero())
                }
            }
        }
    }

    /// Clamped radius, as a point enclosure whenever it is rational.
    pub fn radius_enclosure(&self, q: u64, bits: u32) -> Enclosure {
        let mut r = self.base_radius_factor(q, bits);
        if !self.extra_tau.is_zero() {
            r = r.mul(&Enclosure::point(uint(q)).pow_rat(&-&self.extra_tau, bits));
        }
        r.min_with(&half())
    }

    pub fn radius_exact(&self, q: u64) -> Result<Rational> {
        self.radius_enclosure(q, DEFAULT_BITS)
            .expect_point("irrational radius in exact mode")
    }

    /// Clamped measure (2r)^m. Computed from the parameters directly so that
    /// it stays exact when m*tau is an integer even though the radius is not
    /// rational (e.g. measure 1/q with m = 3).
    pub fn measure_enclosure(&self, q: u64, bits: u32) -> Enclosure {
        let m = self.m as i64;
        let unclamped = match &self.rule {
            RadiusRule::PowerLog { c, tau, sigma } => {
                let mtau = (tau + &self.extra_tau) * int(m);
                let mut e = Enclosure::point(pow_i(&(int(2) * c), m))
                    .mul(&Enclosure::point(uint(q)).pow_rat(&-mtau, bits));
                if !sigma.is_zero() {
                    let msigma = sigma * int(m);
                    let l = crate::enclosure::ln_enclosure(&uint(q + 1), bits);
                    e = e.mul(&l.pow_rat(&-msigma, bits));
                }
                e
            }
            _ => {
                let r = self.base_radius_factor(q, bits);
                if r.hi().is_zero() {
                    return Enclosure::zero();
                }
                let mext = &self.extra_tau * int(m);
                r.scale(&int(2))
                    .pow_int(m)
                    .mul(&Enclosure::point(uint(q)).pow_rat(&-mext, bits))
            }
        };
        unclamped.min_with(&Rational::one())
    }

    pub fn measure_exact(&self, q: u64) -> Result<Rational> {
        self.measure_enclosure(q, DEFAULT_BITS)
            .expect_point("irrational measure in exact mode")
    }

    /// The exact ball at norm q; fails when the radius is irrational.
    pub fn ball(&self, q: u64) -> Result<Ball> {
        Ball::new(self.center(q).to_vec(), self.radius_exact(q)?)
    }
}

/// One pair-sum evaluation: S(Q), P(Q, w) and its parallel/nonparallel split.
#[derive(Debug, Clone)]
pub struct PairSumReport {
    pub n: u32,
    pub m: u32,
    pub w: u32,
    pub q_max: u64,
    pub mode: LatticeMode,
    pub s: Enclosure,
    pub p: Enclosure,
    pub parallel_part: Enclosure,
    pub nonparallel_part: Enclosure,
}

impl PairSumReport {
    /// S(Q)^2 / P(Q, w).
    pub fn ratio(&self) -> Result<Enclosure> {
        if !self.p.lo().is_positive() {
            return Err(KgError::UndefinedRatio);
        }
        Ok(self.s.pow_int(2).div(&self.p))
    }

    /// P(Q, w) / S(Q)^2, the boundedness side of the same quantity.
    pub fn inverse_ratio(&self) -> Result<Enclosure> {
        let s2 = self.s.pow_int(2);
        if !s2.lo().is_positive() {
            return Err(KgError::UndefinedRatio);
        }
        Ok(self.p.div(&s2))
    }
}

/// S(Q) = sum over 1 <= |q| <= Q of |B_|q||, aggregated by sphere counts.
pub fn measure_sum(seq: &BallSequence, n: u32, q_max: u64, mode: LatticeMode) -> Enclosure {
    measure_sum_bits(seq, n, q_max, mode, DEFAULT_BITS)
}

pub fn measure_sum_bits(
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    mode: LatticeMode,
    bits: u32,
) -> Enclosure {
    crate::enclosure::tree_sum(
        (1..=q_max)
            .map(|q| {
                let cnt = Rational::from_integer(sphere_count(n, q, mode));
                seq.measure_enclosure(q, bits).scale(&cnt)
            })
            .collect(),
    )
}

/// The 1-D kernel inputs for one parallel pair term, with the second radius
/// already scaled by (a/b)^{w/m}.
struct PairKernel<'a> {
    seq: &'a BallSequence,
    w: u32,
    bits: u32,
    memo: HashMap<(u64, u64, i8), Enclosure>,
    radius: Vec<Enclosure>,
    /// q^{w/m} per norm when the exponent is not an integer (computing the
    /// pair scale (a/b)^{w/m} as a quotient of table entries is far cheaper
    /// than a fresh root extraction per pair).
    scale_pow: Option<Vec<Enclosure>>,
    /// The same tables as numerators over one fixed denominator 2^bits, when
    /// every entry is on that grid: the per-pair scaled radius then needs only
    /// integer multiply/divide, avoiding rational-reduction overhead.
    radius_dy: Option<Vec<(BigInt, BigInt)>>,
    scale_dy: Option<Vec<(BigInt, BigInt)>>,
    /// -B_q = B_q for every q (all centers in {0, 1/2} mod 1), which makes
    /// the kernel sign-independent.
    symmetric: bool,
}

impl<'a> PairKernel<'a> {
    fn new(seq: &'a BallSequence, q_max: u64, w: u32, bits: u32) -> Self {
        let mut radius = Vec::with_capacity(q_max as usize + 1);
        radius.push(Enclosure::zero());
        for q in 1..=q_max {
            // one dyadic block per endpoint keeps kernel denominators small
            radius.push(seq.radius_enclosure(q, bits).round_out(bits));
        }
        let e = rat(w as i64, seq.m as i64);
        let scale_pow = if w > 0 && !e.is_integer() {
            Some(
                (0..=q_max)
                    .map(|q| Enclosure::point(uint(q.max(1))).pow_rat(&e, bits))
                    .collect(),
            )
        } else {
            None
        };
        let symmetric = (1..=q_max)
            .all(|q| seq.center(q).iter().all(|c| (c * int(2)).is_integer()));
        // outward brackets on the 2^-bits grid; only used when the pair
        // scale is irrational, where results are enclosures anyway
        let to_grid = |table: &[Enclosure]| -> Vec<(BigInt, BigInt)> {
            use num_integer::Integer;
            table
                .iter()
                .map(|e| {
                    let lo = (e.lo().numer() << bits).div_floor(e.lo().denom());
                    let hi = (e.hi().numer() << bits).div_ceil(e.hi().denom());
                    (lo, hi)
                })
                .collect()
        };
        let scale_dy = scale_pow.as_deref().map(to_grid);
        let radius_dy = scale_dy.as_ref().map(|_| to_grid(&radius));
        PairKernel {
            seq,
            w,
            bits,
            memo: HashMap::new(),
            radius,
            scale_pow,
            radius_dy,
            scale_dy,
            symmetric,
        }
    }

    /// Pi(a, b, s): the intersection measure of A(a, B_a) with
    /// A(s*b, (a/b)^{w/m} B_b), factored per coordinate.
    fn pi(&mut self, a: u64, b: u64, s: i8) -> Result<Enclosure> {
        let s = if self.symmetric { 1 } else { s };
        if let Some(v) = self.memo.get(&(a, b, s)) {
            return Ok(v.clone());
        }
        let r1 = self.radius[a as usize].clone();
        let mut r2 = self.radius[b as usize].clone();
        if self.w > 0 && a != b {
            if let (Some(rdy), Some(sdy)) = (&self.radius_dy, &self.scale_dy) {
                // dyadic-grid arithmetic with outward rounding: the pair
                // scale (a/b)^{w/m} = q_a^{w/m} / q_b^{w/m} and the scaled
                // second radius, all as numerators over 2^bits
                use num_integer::Integer;
                let (sa_lo, sa_hi) = &sdy[a as usize];
                let (sb_lo, sb_hi) = &sdy[b as usize];
                let (rb_lo, rb_hi) = &rdy[b as usize];
                let sc_lo: BigInt = (sa_lo << self.bits).div_floor(sb_hi);
                let sc_hi: BigInt = (sa_hi << self.bits).div_ceil(sb_lo);
                let one_grid: BigInt = BigInt::one() << self.bits;
                let lo: BigInt = (rb_lo * sc_lo) >> self.bits;
                let hi: BigInt = (rb_hi * sc_hi + &one_grid - 1) >> self.bits;
                r2 = Enclosure::new(
                    Rational::new(lo, one_grid.clone()),
                    Rational::new(hi, one_grid),
                );
            } else {
                let scale = match &self.scale_pow {
                    Some(table) => table[a as usize].div(&table[b as usize]),
                    None => {
                        let e = self.w as i64 / self.seq.m as i64;
                        Enclosure::point(rat(a as i64, b as i64)).pow_int(e)
                    }
                };
                // re-round the product so kernel denominators stay one
                // dyadic block wide (points are preserved, so exact mode is
                // unaffected)
                r2 = r2.mul(&scale).round_out(self.bits);
            }
        }
        let y1 = self.seq.center(a);
        let y2 = self.seq.center(b);
        let uniform = y1.iter().all(|c| c == &y1[0]) && y2.iter().all(|c| c == &y2[0]);
        let v = if uniform {
            crate::torus::intersect_measure_parallel_bracket(
                a,
                &y1[..1],
                &r1,
                s,
                b,
                &y2[..1],
                &r2,
            )?
            .pow_int(self.seq.m as i64)
        } else {
            crate::torus::intersect_measure_parallel_bracket(a, y1, &r1, s, b, y2, &r2)?
        };
        // non-point values go back on the dyadic grid so that summing many of
        // them never builds giant common denominators; exact values stay exact
        let v = v.round_out(self.bits);
        self.memo.insert((a, b, s), v.clone());
        Ok(v)
    }
}

/// Pair sums over a whole Q-schedule, computed incrementally (terms are
/// bucketed by the larger norm, then prefix-summed at the schedule points).
pub fn pair_sum_schedule(
    seq: &BallSequence,
    n: u32,
    schedule: &[u64],
    w: u32,
    mode: LatticeMode,
    bits: u32,
) -> Result<Vec<PairSumReport>> {
    if schedule.is_empty() || schedule.iter().any(|&q| q == 0) {
        return Err(domain("pair_sum needs a nonempty schedule of Q >= 1"));
    }
    let q_max = *schedule.iter().max().unwrap();
    let qm = q_max as usize;

    // per-norm data
    let meas: Vec<Enclosure> = std::iter::once(Enclosure::zero())
        .chain((1..=q_max).map(|q| seq.measure_enclosure(q, bits)))
        .collect();
    let cnt: Vec<Rational> = std::iter::once(Rational::zero())
        .chain((1..=q_max).map(|q| Rational::from_integer(sphere_count(n, q, mode))))
        .collect();

    let mut s_bucket = vec![Enclosure::zero(); qm + 1];
    for q in 1..=qm {
        s_bucket[q] = meas[q].scale(&cnt[q]);
    }

    // all-pairs product sum, every unordered pair (a <= b) counted as if
    // independent, weighted by Gamma(a,b)^w (a/b)^w = (gcd(a,b)/b)^w
    let mut allpairs = vec![Enclosure::zero(); qm + 1];
    if w == 0 {
        let mut prefix = Enclosure::zero();
        for b in 1..=qm {
            let cm_b = meas[b].scale(&cnt[b]);
            let diag = meas[b]
                .pow_int(2)
                .scale(&(&cnt[b] * (&cnt[b] + Rational::one()) / int(2)));
            allpairs[b] = cm_b.mul(&prefix).add(&diag);
            prefix = prefix.add(&cm_b);
        }
    } else {
        // gcd(a,b)^w = sum of the Jordan totient J_w(d) over d | gcd(a,b),
        // so the gcd-damped double sum collapses to divisor-indexed prefix
        // sums over multiples: O(Q log Q) instead of O(Q^2)
        let jw = crate::arith::jordan_sieve(q_max, w);
        let mut prefix = vec![Enclosure::zero(); qm + 1]; // sum_{a < b, d | a} cnt_a meas_a
        for b in 1..=qm {
            let cm_b = meas[b].scale(&cnt[b]);
            let mut acc = Vec::new();
            let mut d = 1;
            while d * d <= b {
                if b % d == 0 {
                    acc.push(prefix[d].scale(&Rational::from_integer(jw[d].clone())));
                    if d != b / d {
                        acc.push(prefix[b / d].scale(&Rational::from_integer(jw[b / d].clone())));
                    }
                }
                d += 1;
            }
            let strict = crate::enclosure::tree_sum(acc); // sum_{a < b} gcd(a,b)^w cnt_a meas_a
            let bw = pow_i(&uint(b as u64), -(w as i64));
            let diag = meas[b]
                .pow_int(2)
                .scale(&(&cnt[b] * (&cnt[b] + Rational::one()) / int(2)));
            allpairs[b] = strict.mul(&cm_b).scale(&bw).add(&diag);
            let mut d = 1;
            while d * d <= b {
                if b % d == 0 {
                    prefix[d] = prefix[d].add(&cm_b);
                    if d != b / d {
                        prefix[b / d] = prefix[b / d].add(&cm_b);
                    }
                }
                d += 1;
            }
        }
    }

    // parallel classes: per primitive direction of norm h and multipliers
    // k1 <= k2, replace the product guess by the true reduced measure
    let prim = PrimitiveCounts::new(n, q_max, mode);
    let mut kernel = PairKernel::new(seq, q_max, w, bits);
    let mut par_bucket = vec![Enclosure::zero(); qm + 1];
    let mut prod_correction = vec![Enclosure::zero(); qm + 1];
    for h in 1..=q_max {
        let pv = prim.at_rational(h);
        if pv.is_zero() {
            continue;
        }
        let k_max = q_max / h;
        for k2 in 1..=k_max {
            let b = k2 * h;
            let mut par_acc = Vec::with_capacity(k2 as usize);
            let mut prod_acc = Vec::with_capacity(k2 as usize);
            for k1 in 1..=k2 {
                let a = k1 * h;
                if meas[a as usize].hi().is_zero() || meas[b as usize].hi().is_zero() {
                    continue;
                }
                let g = h * gcd_u(k1, k2);
                // Gamma^w for the true parallel term (the (a/b)^w half of the
                // weight lives inside Pi via the scaled second ball); the
                // product correction mirrors the all-pairs weight (g/b)^w
                let gamma_w = pow_i(&rat(g as i64, a as i64), w as i64);
                let damp = pow_i(&rat(g as i64, b as i64), w as i64);
                if k1 == k2 {
                    // vector pairs on one line at equal norm: in full mode
                    // {v,v}, {-v,-v}, {v,-v}; in orthant mode {v,v} only
                    match mode {
                        LatticeMode::Full => {
                            let opp = kernel.pi(a, a, -1)?;
                            par_acc.push(meas[a as usize].scale(&int(2)).add(&opp));
                            prod_acc.push(meas[a as usize].pow_int(2).scale(&int(3)));
                        }
                        LatticeMode::Orthant => {
                            par_acc.push(meas[a as usize].clone());
                            prod_acc.push(meas[a as usize].pow_int(2));
                        }
                    }
                } else {
                    let prod = meas[a as usize].mul(&meas[b as usize]).scale(&damp);
                    match mode {
                        LatticeMode::Full => {
                            let same = kernel.pi(a, b, 1)?;
                            let opp = kernel.pi(a, b, -1)?;
                            par_acc.push(same.add(&opp).scale(&(int(2) * &gamma_w)));
                            prod_acc.push(prod.scale(&int(4)));
                        }
                        LatticeMode::Orthant => {
                            par_acc.push(kernel.pi(a, b, 1)?.scale(&gamma_w));
                            prod_acc.push(prod);
                        }
                    }
                }
            }
            let par_acc = crate::enclosure::tree_sum(par_acc);
            let prod_acc = crate::enclosure::tree_sum(prod_acc);
            par_bucket[b as usize] = par_bucket[b as usize].add(&par_acc.scale(&pv));
            prod_correction[b as usize] =
                prod_correction[b as usize].add(&prod_acc.scale(&pv));
        }
    }

    // prefix sums at the schedule points
    let mut reports = Vec::with_capacity(schedule.len());
    let mut sorted: Vec<u64> = schedule.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut s = Enclosure::zero();
    let mut ap = Enclosure::zero();
    let mut par = Enclosure::zero();
    let mut corr = Enclosure::zero();
    let mut idx = 0usize;
    for b in 1..=qm {
        s = s.add(&s_bucket[b]);
        ap = ap.add(&allpairs[b]);
        par = par.add(&par_bucket[b]);
        corr = corr.add(&prod_correction[b]);
        while idx < sorted.len() && sorted[idx] == b as u64 {
            let nonpar = ap.sub(&corr);
            reports.push(PairSumReport {
                n,
                m: seq.m,
                w,
                q_max: b as u64,
                mode,
                s: s.clone(),
                p: nonpar.add(&par),
                parallel_part: par.clone(),
                nonparallel_part: nonpar,
            });
            idx += 1;
        }
    }
    // restore caller's order
    let by_q: HashMap<u64, PairSumReport> =
        reports.into_iter().map(|r| (r.q_max, r)).collect();
    Ok(schedule.iter().map(|q| by_q[q].clone()).collect())
}

pub fn pair_sum(
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    w: u32,
    mode: LatticeMode,
) -> Result<PairSumReport> {
    Ok(pair_sum_schedule(seq, n, &[q_max], w, mode, DEFAULT_BITS)?.remove(0))
}

/// Oracle: the same pair sum by a direct double loop over lattice vectors.
/// Exact sequences only (tests compare this against the aggregated path).
pub fn pair_sum_exhaustive(
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    w: u32,
    mode: LatticeMode,
) -> Result<Rational> {
    let mut vecs = vectors_up_to(n, q_max, mode);
    vecs.sort_by(|x, y| (x.norm(), x.coords()).cmp(&(y.norm(), y.coords())));
    let balls: Vec<Ball> = (1..=q_max).map(|q| seq.ball(q)).collect::<Result<_>>()?;
    let ball = |v: &LatticeVector| &balls[(v.norm() - 1) as usize];
    let mut total = Rational::zero();
    for i in 0..vecs.len() {
        for j in i..vecs.len() {
            let (q1, q2) = (&vecs[i], &vecs[j]);
            let (a, b) = (q1.norm(), q2.norm());
            // Gamma(a,b)^w; the (a/b)^{w} half of the pair weight enters
            // through the dilated second ball below
            let damp = pow_i(&rat(gcd_u(a, b) as i64, a as i64), w as i64);
            let mut b2 = ball(q2).clone();
            if w > 0 && a != b {
                let scale = Enclosure::point(rat(a as i64, b as i64))
                    .pow_rat(&rat(w as i64, seq.m as i64), DEFAULT_BITS)
                    .expect_point("irrational pair scale in exact oracle")?;
                b2 = b2.scale_radius(&scale)?;
            }
            total += damp * intersect_measure(q1, ball(q1), q2, &b2)?;
        }
    }
    Ok(total)
}

/// Ratio trajectory S(Q)^2 / P(Q, w) over a schedule.
pub fn qia_ratio(
    seq: &BallSequence,
    n: u32,
    schedule: &[u64],
    w: u32,
    mode: LatticeMode,
) -> Result<Vec<(u64, Enclosure)>> {
    let reports = pair_sum_schedule(seq, n, schedule, w, mode, DEFAULT_BITS)?;
    reports
        .into_iter()
        .map(|r| Ok((r.q_max, r.ratio()?)))
        .collect()
}

/// Finite-data trend of a positive trajectory: least-squares slope of
/// log(value) against log(Q), thresholded at +-0.05. Never a limit claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    BoundedBelow,
    Decaying,
    Inconclusive,
}

pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let nf = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

pub fn trend_verdict(trajectory: &[(u64, Enclosure)]) -> Trend {
    let pts: Vec<(f64, f64)> = trajectory
        .iter()
        .map(|(q, e)| (*q as f64, e.mid_f64()))
        .collect();
    match log_log_slope(&pts) {
        None => Trend::Inconclusive,
        Some(s) if s < -0.05 => Trend::Decaying,
        Some(_) => Trend::BoundedBelow,
    }
}

/// Lifted-vs-base comparison for independence inheritance: the (n+k, m)
/// system with radii scaled by q^{-k/m} at exponent max(w-k, 0), against the
/// (n, m) system at exponent w.
#[derive(Debug, Clone)]
pub struct InheritanceReport {
    pub lifted: PairSumReport,
    pub base: PairSumReport,
    /// lifted parallel part / base pair sum
    pub ratio: Enclosure,
}

pub fn inheritance_compare(
    seq: &BallSequence,
    n: u32,
    k: u32,
    q_max: u64,
    w: u32,
    mode: LatticeMode,
) -> Result<InheritanceReport> {
    let lifted_seq = seq.lifted(k);
    let lifted_w = w.saturating_sub(k);
    let lifted = pair_sum(&lifted_seq, n + k, q_max, lifted_w, mode)?;
    let base = pair_sum(seq, n, q_max, w, mode)?;
    if !base.p.lo().is_positive() {
        return Err(KgError::UndefinedRatio);
    }
    let ratio = lifted.parallel_part.div(&base.p);
    Ok(InheritanceReport { lifted, base, ratio })
}

/// Exact union measure and the second-moment lower bound
/// (sum mu A_i)^2 / sum_{i,j} mu(A_i ∩ A_j) for 1-D sets A(q_i, B_i);
/// the union measure always dominates the bound.
pub fn chung_erdos_bound(sets: &[(i64, Ball)]) -> Result<(Rational, Rational)> {
    if sets.is_empty() || sets.iter().all(|(_, b)| b.measure().is_zero()) {
        return Err(domain("chung_erdos_bound needs a positive-measure set"));
    }
    if sets.iter().any(|(_, b)| b.dim() != 1) {
        return Err(KgError::DimensionMismatch("chung_erdos_bound is 1-D".into()));
    }
    let unions: Vec<IntervalUnion> = sets
        .iter()
        .map(|(q, b)| crate::torus::preimage_1d(*q, b))
        .collect::<Result<_>>()?;
    let mut all = IntervalUnion::empty();
    for u in &unions {
        all = all.union(u);
    }
    let s: Rational = sets.iter().map(|(_, b)| b.measure()).sum();
    let mut pairs = Rational::zero();
    for (i, (qi, bi)) in sets.iter().enumerate() {
        for (j, (qj, bj)) in sets.iter().enumerate() {
            if i == j {
                pairs += bi.measure();
            } else {
                pairs += crate::torus::intersect_measure_1d(*qi, bi, *qj, bj)?;
            }
        }
    }
    Ok((all.length(), &s * &s / pairs))
}

/// Block index: the unique l with 2^l <= q/phi(q) < 2^{l+1}, by exact
/// rational comparison.
pub fn dyadic_block_index(q: u64) -> Result<u32> {
    let ratio = Rational::new(uint(q).numer().clone(), uint(euler_phi(q)?).numer().clone());
    let mut l = 0u32;
    let mut p = int(2);
    while p <= ratio {
        l += 1;
        p *= int(2);
    }
    Ok(l)
}

/// Per-block sums: Sigma_l = sum over q <= Q in block l of
/// (phi(q)/q)^{1+eps} * sphere_count(n,q) * |B_q|.
pub fn dyadic_blocks(
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    eps: &Rational,
    mode: LatticeMode,
    bits: u32,
) -> Result<Vec<Enclosure>> {
    if !eps.is_positive() {
        return Err(domain("dyadic_blocks needs eps > 0"));
    }
    let phi = phi_sieve(q_max);
    let exponent = Rational::one() + eps;
    let mut blocks: Vec<Vec<Enclosure>> = Vec::new();
    for q in 1..=q_max {
        let l = dyadic_block_index(q)? as usize;
        if blocks.len() <= l {
            blocks.resize(l + 1, Vec::new());
        }
        let base = rat(phi[q as usize] as i64, q as i64);
        let weight = Enclosure::point(base).pow_rat(&exponent, bits);
        let cnt = Rational::from_integer(sphere_count(n, q, mode));
        blocks[l].push(weight.mul(&seq.measure_enclosure(q, bits)).scale(&cnt));
    }
    Ok(blocks.into_iter().map(crate::enclosure::tree_sum).collect())
}

/// Partial sums of the extra-divergence series
/// sum q^{n-1} (phi(q)/q)^{1+eps} |B_q|, defined for nm = 2 only.
pub fn extra_divergence_sum(
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    eps: &Rational,
    bits: u32,
) -> Result<Enclosure> {
    if n * seq.m != 2 {
        return Err(domain("extra-divergence series is defined for nm = 2"));
    }
    if !eps.is_positive() {
        return Err(domain("extra_divergence_sum needs eps > 0"));
    }
    let phi = phi_sieve(q_max);
    let exponent = Rational::one() + eps;
    let mut terms = Vec::new();
    for q in 1..=q_max {
        let meas = seq.measure_enclosure(q, bits);
        if meas.hi().is_zero() {
            continue;
        }
        let base = rat(phi[q as usize] as i64, q as i64);
        let weight = Enclosure::point(base).pow_rat(&exponent, bits);
        let qpow = pow_i(&uint(q), n as i64 - 1);
        terms.push(weight.mul(&meas).scale(&qpow));
    }
    Ok(crate::enclosure::tree_sum(terms))
}

/// Convenience: midpoint trajectory for plotting/regression.
pub fn trajectory_mid(tr: &[(u64, Enclosure)]) -> Vec<(f64, f64)> {
    tr.iter().map(|(q, e)| (*q as f64, e.mid_f64())).collect()
}

pub fn ratio_to_f64(e: &Enclosure) -> f64 {
    e.mid_f64()
}

pub use crate::rational::to_f64 as rational_to_f64;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{to_f64, zero};

    fn seq_1m(c: Rational, tau: i64) -> BallSequence {
        BallSequence::power(1, c, int(tau)).unwrap()
    }

    #[test]
    fn measure_sum_examples() {
        // |B_q| = 1/(2q): radius 1/(4q)
        let seq = seq_1m(rat(1, 4), 1);
        let s = measure_sum(&seq, 1, 3, LatticeMode::Full);
        assert_eq!(s.into_point().unwrap(), rat(11, 6));

        let zero_seq = seq_1m(zero(), 0);
        assert!(measure_sum(&zero_seq, 2, 5, LatticeMode::Full)
            .into_point()
            .unwrap()
            .is_zero());

        // |B_1| = 1/4: radius 1/8, n=2, Q=1 -> 8/4 = 2
        let seq = BallSequence::new(
            1,
            RadiusRule::Table {
                radii: vec![rat(1, 8)],
                tail_zero: true,
            },
            CenterRule::Fixed(vec![zero()]),
        )
        .unwrap();
        let s = measure_sum(&seq, 2, 1, LatticeMode::Full);
        assert_eq!(s.into_point().unwrap(), int(2));
    }

    #[test]
    fn single_ball_pair_sum_is_diagonal() {
        let seq = BallSequence::new(
            1,
            RadiusRule::DyadicSupport {
                radius: rat(1, 8),
                support: [4u64].into_iter().collect(),
            },
            CenterRule::Fixed(vec![zero()]),
        )
        .unwrap();
        // orthant mode in n=1: a single vector q=(4)
        let rep = pair_sum(&seq, 1, 6, 0, LatticeMode::Orthant).unwrap();
        assert_eq!(rep.p.clone().into_point().unwrap(), rat(1, 4));
        assert_eq!(
            rep.ratio().unwrap().into_point().unwrap(),
            rat(1, 4)
        );
    }

    #[test]
    fn fast_path_matches_oracle_small() {
        let seq = seq_1m(rat(1, 8), 1);
        for mode in [LatticeMode::Full, LatticeMode::Orthant] {
            for n in 1..=2u32 {
                for w in [0u32, 1, 2] {
                    for q in [1u64, 2, 4] {
                        let fast = pair_sum(&seq, n, q, w, mode)
                            .unwrap()
                            .p
                            .into_point()
                            .unwrap();
                        let slow = pair_sum_exhaustive(&seq, n, q, w, mode).unwrap();
                        assert_eq!(fast, slow, "n={n} w={w} Q={q} mode={mode:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn fast_path_matches_oracle_m2_shifted_center() {
        let seq = BallSequence::power_log(
            2,
            rat(1, 6),
            int(1),
            zero(),
            vec![rat(1, 3), rat(2, 7)],
        )
        .unwrap();
        for w in [0u32, 2] {
            let fast = pair_sum(&seq, 2, 3, w, LatticeMode::Full)
                .unwrap()
                .p
                .into_point()
                .unwrap();
            let slow = pair_sum_exhaustive(&seq, 2, 3, w, LatticeMode::Full).unwrap();
            assert_eq!(fast, slow, "w={w}");
        }
    }

    #[test]
    fn w_monotonicity_and_nonparallel_bound() {
        let seq = seq_1m(rat(1, 4), 1);
        let r0 = pair_sum(&seq, 2, 8, 0, LatticeMode::Full).unwrap();
        let r1 = pair_sum(&seq, 2, 8, 1, LatticeMode::Full).unwrap();
        assert!(r1.p.hi() <= r0.p.lo());
        // nonparallel part <= S^2 exactly
        let s2 = r0.s.pow_int(2);
        assert!(r0.nonparallel_part.hi() <= s2.lo());
        // diagonal lower bound at w=0
        let diag = measure_sum(&seq, 2, 8, LatticeMode::Full);
        assert!(r0.p.hi() >= diag.lo());
    }

    #[test]
    fn schedule_matches_single_calls() {
        let seq = seq_1m(rat(1, 4), 1);
        let sched = [4u64, 2, 8];
        let reports =
            pair_sum_schedule(&seq, 2, &sched, 1, LatticeMode::Full, DEFAULT_BITS).unwrap();
        for (i, &q) in sched.iter().enumerate() {
            let single = pair_sum(&seq, 2, q, 1, LatticeMode::Full).unwrap();
            assert_eq!(reports[i].q_max, q);
            assert_eq!(reports[i].p, single.p);
            assert_eq!(reports[i].s, single.s);
        }
    }

    #[test]
    fn irrational_radius_brackets_are_tight_and_ordered() {
        // measure 1/q with m = 3: radius q^{-1/3}/2 is irrational but the
        // measure is an exact point
        let seq = BallSequence::power_log(
            3,
            half(),
            rat(1, 3),
            zero(),
            vec![zero(), zero(), zero()],
        )
        .unwrap();
        assert!(!seq.is_exact());
        assert_eq!(seq.measure_exact(7).unwrap(), rat(1, 7));
        let r = seq.radius_enclosure(7, 128);
        assert!(!r.is_point());
        assert!(to_f64(&r.width()) < 1e-30);
        let rep = pair_sum(&seq, 1, 8, 0, LatticeMode::Full).unwrap();
        assert!(rep.p.lo() <= rep.p.hi());
        assert!(to_f64(&rep.p.width()) < 1e-20);
        assert!(rep.s.is_point());
    }

    #[test]
    fn lifted_sequence_scales_radii() {
        let seq = seq_1m(rat(1, 4), 1);
        let lifted = seq.lifted(2);
        assert_eq!(lifted.radius_exact(3).unwrap(), rat(1, 108));
        assert_eq!(lifted.measure_exact(3).unwrap(), rat(1, 54));
    }

    #[test]
    fn inheritance_k0_is_identity() {
        let seq = seq_1m(rat(1, 4), 1);
        let rep = inheritance_compare(&seq, 1, 0, 6, 0, LatticeMode::Full).unwrap();
        assert_eq!(rep.lifted.p, rep.base.p);
        assert_eq!(rep.lifted.s, rep.base.s);
    }

    #[test]
    fn chung_erdos_examples() {
        let single = [(1i64, Ball::arc(zero(), rat(1, 8)).unwrap())];
        let (u, b) = chung_erdos_bound(&single).unwrap();
        assert_eq!(u, rat(1, 4));
        assert_eq!(b, rat(1, 4));

        let two = [
            (1i64, Ball::arc(zero(), rat(1, 4)).unwrap()),
            (2i64, Ball::arc(zero(), rat(1, 8)).unwrap()),
        ];
        let (u, b) = chung_erdos_bound(&two).unwrap();
        assert!(u >= b, "union {u} bound {b}");

        assert!(chung_erdos_bound(&[(3i64, Ball::arc(zero(), zero()).unwrap())]).is_err());
    }

    #[test]
    fn dyadic_block_examples() {
        assert_eq!(dyadic_block_index(1).unwrap(), 0);
        assert_eq!(dyadic_block_index(6).unwrap(), 1);
        // primorial of the first 15 primes: q/phi(q) ~ 7.2, block 2
        let primes: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        let primorial: u64 = primes.iter().product();
        assert_eq!(dyadic_block_index(primorial).unwrap(), 2);
    }

    #[test]
    fn extra_divergence_grows_like_log() {
        // (2,1), |B_q| = 1/q^2 (radius 1/(2q^2)); 1+eps = 2 keeps it exact
        let seq = seq_1m(rat(1, 2), 2);
        let eps = Rational::one();
        let s1 = extra_divergence_sum(&seq, 2, 1000, &eps, 64).unwrap();
        let s2 = extra_divergence_sum(&seq, 2, 10000, &eps, 64).unwrap();
        let g = s2.mid_f64() - s1.mid_f64();
        let expect = (10.0f64).ln(); // harmonic-like growth
        assert!((g / expect) > 0.3 && (g / expect) < 1.1, "growth {g}");
        assert!(extra_divergence_sum(&seq, 3, 10, &eps, 64).is_err());

        let zero_seq = seq_1m(zero(), 0);
        assert!(extra_divergence_sum(&zero_seq, 2, 50, &eps, 64)
            .unwrap()
            .into_point()
            .unwrap()
            .is_zero());
    }

    #[test]
    fn trend_classification() {
        let flat: Vec<(u64, Enclosure)> = (4..10)
            .map(|k| (1u64 << k, Enclosure::point(rat(1, 3))))
            .collect();
        assert_eq!(trend_verdict(&flat), Trend::BoundedBelow);
        let decay: Vec<(u64, Enclosure)> = (4..10)
            .map(|k| (1u64 << k, Enclosure::point(Rational::new(1.into(), (1u64 << k).into()))))
            .collect();
        assert_eq!(trend_verdict(&decay), Trend::Decaying);
        assert_eq!(trend_verdict(&[]), Trend::Inconclusive);
    }
}
