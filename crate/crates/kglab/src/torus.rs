//! Exact geometry on the torus: balls, arc unions, preimage sets
//! A(q, B) = {x : q.x + p in B}, and their pairwise intersection measures.
//!
//! Balls are max-norm products of per-coordinate arcs, so every
//! m-dimensional intersection factors into 1-D problems. The 1-D kernel has
//! two implementations: a closed-form grid sum (production path, cost
//! independent of |q1|+|q2|) and a merge-sweep over explicit arc unions
//! (oracle path).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::gcd_u;
use crate::enclosure::Enclosure;
use crate::error::{domain, KgError, Result};
use crate::lattice::LatticeVector;
use crate::rational::{frac, half, int, pow_i, rat, uint, Rational};

/// Product-of-arcs ball on the m-torus: per-coordinate centers (reduced into
/// [0,1)) and a common radius in [0, 1/2]. Radii above 1/2 are clamped and
/// flagged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    centers: Vec<Rational>,
    radius: Rational,
    clamped: bool,
}

impl Ball {
    pub fn new(centers: Vec<Rational>, radius: Rational) -> Result<Ball> {
        if centers.is_empty() {
            return Err(domain("ball needs at least one coordinate"));
        }
        if radius.is_negative() {
            return Err(domain("ball radius must be non-negative"));
        }
        let clamped = radius > half();
        Ok(Ball {
            centers: centers.iter().map(frac).collect(),
            radius: if clamped { half() } else { radius },
            clamped,
        })
    }

    /// 1-D ball (an arc).
    pub fn arc(center: Rational, radius: Rational) -> Result<Ball> {
        Ball::new(vec![center], radius)
    }

    pub fn dim(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[Rational] {
        &self.centers
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn was_clamped(&self) -> bool {
        self.clamped
    }

    /// Lebesgue measure (2r)^m, exact.
    pub fn measure(&self) -> Rational {
        pow_i(&(int(2) * &self.radius), self.dim() as i64)
    }

    /// The j-th coordinate arc.
    pub fn coord(&self, j: usize) -> Ball {
        Ball {
            centers: vec![self.centers[j].clone()],
            radius: self.radius.clone(),
            clamped: self.clamped,
        }
    }

    /// -B: centers negated mod 1, same radius.
    pub fn neg(&self) -> Ball {
        Ball {
            centers: self.centers.iter().map(|c| frac(&-c)).collect(),
            radius: self.radius.clone(),
            clamped: self.clamped,
        }
    }

    pub fn with_radius(&self, radius: Rational) -> Result<Ball> {
        Ball::new(self.centers.clone(), radius)
    }

    /// Dilation about the centers by a non-negative rational factor.
    pub fn scale_radius(&self, factor: &Rational) -> Result<Ball> {
        if factor.is_negative() {
            return Err(domain("negative dilation factor"));
        }
        self.with_radius(&self.radius * factor)
    }
}

/// Canonical finite union of half-open arcs [a, b) with rational endpoints
/// in [0, 1); sorted, pairwise disjoint, non-adjacent, wraparound split at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    arcs: Vec<(Rational, Rational)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalUnion {
            arcs: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Builds from raw arcs `(lo, hi)` with `lo < hi <= lo + 1`, any real
    /// position; arcs are reduced mod 1, split at 0, and merged.
    pub fn from_raw(raw: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut pieces: Vec<(Rational, Rational)> = Vec::new();
        for (lo, hi) in raw {
            assert!(lo < hi && &hi - &lo <= Rational::one(), "bad raw arc");
            let shift = lo.floor();
            let lo = lo - &shift;
            let hi = hi - &shift;
            if hi <= Rational::one() {
                pieces.push((lo, hi));
            } else {
                pieces.push((Rational::zero(), &hi - Rational::one()));
                pieces.push((lo, Rational::one()));
            }
        }
        pieces.sort();
        let mut arcs: Vec<(Rational, Rational)> = Vec::new();
        for (lo, hi) in pieces {
            match arcs.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => arcs.push((lo, hi)),
            }
        }
        IntervalUnion { arcs }
    }

    /// The arc of a 1-D ball as an interval union (empty when radius is 0).
    pub fn from_ball(b: &Ball) -> Result<Self> {
        if b.dim() != 1 {
            return Err(KgError::DimensionMismatch(
                "interval union needs a 1-D ball".into(),
            ));
        }
        if b.radius().is_zero() {
            return Ok(IntervalUnion::empty());
        }
        Ok(IntervalUnion::from_raw([(
            &b.centers[0] - b.radius(),
            &b.centers[0] + b.radius(),
        )]))
    }

    pub fn arcs(&self) -> &[(Rational, Rational)] {
        &self.arcs
    }

    pub fn length(&self) -> Rational {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = frac(x);
        self.arcs.iter().any(|(a, b)| a <= &x && &x < b)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.arcs.len() && j < other.arcs.len() {
            let (a1, b1) = &self.arcs[i];
            let (a2, b2) = &other.arcs[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_raw(out)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_raw(
            self.arcs.iter().chain(other.arcs.iter()).cloned().collect::<Vec<_>>(),
        )
    }
}

/// The set {x in [0,1) : q x mod 1 in arc}: a union of |q| arcs of length
/// measure(arc)/|q| with centers spaced 1/|q| apart; total length equals
/// measure(arc).
pub fn preimage_1d(q: i64, arc: &Ball) -> Result<IntervalUnion> {
    if q == 0 {
        return Err(domain("preimage of q = 0"));
    }
    if arc.dim() != 1 {
        return Err(KgError::DimensionMismatch("preimage_1d needs a 1-D arc".into()));
    }
    // A(q, B) = A(-q, -B)
    let (qa, b) = if q > 0 {
        (q as u64, arc.clone())
    } else {
        (q.unsigned_abs(), arc.neg())
    };
    if b.radius().is_zero() {
        return Ok(IntervalUnion::empty());
    }
    let c = &b.centers[0];
    let r = b.radius();
    let qr = uint(qa);
    let mut raw = Vec::with_capacity(qa as usize);
    for j in 0..qa {
        let lo = (c - r + uint(j)) / &qr;
        let hi = (c + r + uint(j)) / &qr;
        raw.push((lo, hi));
    }
    Ok(IntervalUnion::from_raw(raw))
}

/// Exact measure of A(q1, arc1) ∩ A(q2, arc2) on the circle.
///
/// Production path: reduce out g = gcd(|q1|,|q2|) (the map x -> gx mod 1 is
/// measure preserving, so the measure equals that of the coprime problem),
/// then sum the pairwise arc overlaps in closed form over the uniform offset
/// grid (theta + t)/(ab), t = 0..ab-1.
pub fn intersect_measure_1d(q1: i64, arc1: &Ball, q2: i64, arc2: &Ball) -> Result<Rational> {
    if q1 == 0 || q2 == 0 {
        return Err(domain("intersect_measure_1d needs nonzero q"));
    }
    if arc1.dim() != 1 || arc2.dim() != 1 {
        return Err(KgError::DimensionMismatch("intersect_measure_1d needs 1-D arcs".into()));
    }
    if arc1.radius().is_zero() || arc2.radius().is_zero() {
        return Ok(Rational::zero());
    }
    let c1 = if q1 > 0 {
        arc1.centers[0].clone()
    } else {
        frac(&-&arc1.centers[0])
    };
    let c2 = if q2 > 0 {
        arc2.centers[0].clone()
    } else {
        frac(&-&arc2.centers[0])
    };
    let g = gcd_u(q1.unsigned_abs(), q2.unsigned_abs());
    let a = q1.unsigned_abs() / g;
    let b = q2.unsigned_abs() / g;
    Ok(grid_overlap_sum(a, &c1, arc1.radius(), b, &c2, arc2.radius()))
}

/// 1-D kernel on raw parts (centers need not be reduced mod 1; radii must
/// already be clamped to [0, 1/2]). `sign` applies A(q,B) = A(-q,-B) to the
/// second arc.
pub(crate) fn kernel_1d_raw(
    u1: u64,
    c1: &Rational,
    r1: &Rational,
    sign: i8,
    u2: u64,
    c2: &Rational,
    r2: &Rational,
) -> Rational {
    debug_assert!(u1 > 0 && u2 > 0);
    debug_assert!(r1 <= &half() && r2 <= &half());
    if r1.is_zero() || r2.is_zero() {
        return Rational::zero();
    }
    let c2 = if sign >= 0 { c2.clone() } else { -c2 };
    let g = gcd_u(u1, u2);
    grid_overlap_sum(u1 / g, c1, r1, u2 / g, &c2, r2)
}

/// Oracle for `intersect_measure_1d`: explicit arc unions and a merge sweep.
pub fn intersect_measure_1d_sweep(q1: i64, arc1: &Ball, q2: i64, arc2: &Ball) -> Result<Rational> {
    let u1 = preimage_1d(q1, arc1)?;
    let u2 = preimage_1d(q2, arc2)?;
    Ok(u1.intersect(&u2).length())
}

/// Sum over t = 0..ab-1 of the overlap of two circle arcs of lengths
/// 2 r1/a and 2 r2/b whose centers are offset by (theta + t)/(ab), where
/// theta = frac(b c1 - a c2). Piecewise-linear in the offset, summed in
/// closed form per linear piece.
///
/// Everything is rescaled to one common integer denominator U, so the whole
/// sum runs in plain big-integer arithmetic with a single final reduction.
fn grid_overlap_sum(a: u64, c1: &Rational, r1: &Rational, b: u64, c2: &Rational, r2: &Rational) -> Rational {
    use num_integer::Integer;

    let n = BigInt::from(a) * BigInt::from(b);
    let theta = if c1.is_zero() && c2.is_zero() {
        Rational::zero()
    } else {
        frac(&(uint(b) * c1 - uint(a) * c2))
    };

    // common scale U: a multiple of 2 d1 a, 2 d2 b, and n * denom(theta),
    // so that arc lengths, midpoints and all grid offsets become integers
    let d1a = r1.denom() * BigInt::from(a);
    let d2b = r2.denom() * BigInt::from(b);
    let l = d1a.lcm(&d2b).lcm(&(&n * theta.denom()));
    let u: BigInt = &l * 2;

    // scaled arc lengths A1 = U * 2 r1 / a, A2 = U * 2 r2 / b (both even)
    let a1: BigInt = r1.numer() * 4 * (&l / &d1a);
    let a2: BigInt = r2.numer() * 4 * (&l / &d2b);
    let h: BigInt = (&a1 + &a2) / 2;
    let k: BigInt = a1.clone().min(a2.clone());

    // grid points are T0 + t*G, t = 0..n-1, with values in [0, U)
    let gstep = &u / &n;
    let t0 = theta.numer() * (&u / (&n * theta.denom()));

    // machine-integer fast path: every intermediate is bounded by ~3 n U
    if (&n * &u).bits() <= 118 {
        use num_traits::ToPrimitive;
        let total = grid_windows_i128(
            n.to_i128().unwrap(),
            u.to_i128().unwrap(),
            a1.to_i128().unwrap(),
            a2.to_i128().unwrap(),
            gstep.to_i128().unwrap(),
            t0.to_i128().unwrap(),
        );
        return Rational::new(BigInt::from(total), u);
    }

    // scaled overlap at offset x in [0, U]
    let f = |x: &BigInt| -> BigInt {
        let mut v = BigInt::zero();
        if &h > x {
            v += &h - x;
        }
        let w: BigInt = &h - &u + x;
        if w.is_positive() {
            v += w;
        }
        v.min(k.clone())
    };

    let mut cuts: Vec<BigInt> = [
        BigInt::zero(),
        u.clone(),
        h.clone(),
        &u - &h,
        &h - &k,
        &u - &h + &k,
    ]
    .into_iter()
    .filter(|x| !x.is_negative() && x <= &u)
    .collect();
    cuts.sort();
    cuts.dedup();

    let mut total = BigInt::zero();
    for win in cuts.windows(2) {
        let (x0, x1) = (&win[0], &win[1]);
        // t with T0 + t*G in [x0, x1)
        let lo_num: BigInt = x0 - &t0 + &gstep - 1;
        let hi_num: BigInt = x1 - &t0 + &gstep - 1;
        let t_lo = lo_num.div_floor(&gstep).max(BigInt::zero());
        let t_hi = hi_num.div_floor(&gstep).min(n.clone());
        if t_hi <= t_lo {
            continue;
        }
        let f0 = f(x0);
        // f is linear on the window with slope in {-1, 0, 1}
        let slope = (f(x1) - &f0) / (x1 - x0);
        let cnt = &t_hi - &t_lo;
        let t_sum = (&t_lo + &t_hi - 1) * &cnt / 2;
        total += &cnt * (f0 - &slope * x0 + &slope * &t0) + slope * &gstep * t_sum;
    }
    Rational::new(total, u)
}

/// The window loop of `grid_overlap_sum` in machine integers; same algebra,
/// same variable names.
fn grid_windows_i128(n: i128, u: i128, a1: i128, a2: i128, gstep: i128, t0: i128) -> i128 {
    let h = (a1 + a2) / 2;
    let k = a1.min(a2);
    let f = |x: i128| -> i128 {
        let mut v = 0i128;
        if h > x {
            v += h - x;
        }
        if h - u + x > 0 {
            v += h - u + x;
        }
        v.min(k)
    };
    let mut cuts = [0i128, u, h, u - h, h - k, u - h + k];
    cuts.sort_unstable();
    let mut total = 0i128;
    for i in 0..cuts.len() - 1 {
        let (x0, x1) = (cuts[i], cuts[i + 1]);
        if x0 == x1 {
            continue;
        }
        let t_lo = (x0 - t0 + gstep - 1).div_euclid(gstep).max(0);
        let t_hi = (x1 - t0 + gstep - 1).div_euclid(gstep).min(n);
        if t_hi <= t_lo {
            continue;
        }
        let f0 = f(x0);
        let slope = (f(x1) - f0) / (x1 - x0);
        let cnt = t_hi - t_lo;
        let t_sum = (t_lo + t_hi - 1) * cnt / 2;
        total += cnt * (f0 - slope * x0 + slope * t0) + slope * gstep * t_sum;
    }
    total
}

/// Exact measure of A(q1, B1) ∩ A(q2, B2) on the m-torus.
///
/// Nonparallel directions are independent, so the measure is the product of
/// the ball measures. Parallel pairs reduce per coordinate to the 1-D kernel
/// with norms |q1|, sign(q1.q2)|q2|.
pub fn intersect_measure(
    q1: &LatticeVector,
    b1: &Ball,
    q2: &LatticeVector,
    b2: &Ball,
) -> Result<Rational> {
    if q1.dim() != q2.dim() {
        return Err(KgError::DimensionMismatch("lattice vectors of different n".into()));
    }
    if b1.dim() != b2.dim() {
        return Err(KgError::DimensionMismatch("balls of different m".into()));
    }
    if !q1.is_parallel(q2) {
        return Ok(b1.measure() * b2.measure());
    }
    let s = q1.parallel_sign(q2)?;
    intersect_measure_parallel(q1.norm(), b1, s, q2.norm(), b2)
}

/// Parallel case by norms and relative sign, factored per coordinate.
pub fn intersect_measure_parallel(
    n1: u64,
    b1: &Ball,
    sign: i8,
    n2: u64,
    b2: &Ball,
) -> Result<Rational> {
    if n1 == 0 || n2 == 0 {
        return Err(domain("intersect_measure_parallel needs nonzero norms"));
    }
    let mut prod = Rational::one();
    for j in 0..b1.dim() {
        prod *= kernel_1d_raw(
            n1,
            &b1.centers[j],
            b1.radius(),
            sign,
            n2,
            &b2.centers[j],
            b2.radius(),
        );
        if prod.is_zero() {
            break;
        }
    }
    Ok(prod)
}

/// Intersection measure when the two radii are only known up to enclosures
/// (shared centers per ball). Monotone in each radius, so the bracket is the
/// kernel evaluated at the endpoint radii.
pub fn intersect_measure_parallel_bracket(
    n1: u64,
    centers1: &[Rational],
    r1: &Enclosure,
    sign: i8,
    n2: u64,
    centers2: &[Rational],
    r2: &Enclosure,
) -> Result<Enclosure> {
    if n1 == 0 || n2 == 0 {
        return Err(domain("intersect_measure_parallel_bracket needs nonzero norms"));
    }
    if centers1.len() != centers2.len() {
        return Err(KgError::DimensionMismatch("balls of different m".into()));
    }
    let clamp = |r: &Rational| if r > &half() { half() } else { r.clone() };
    let at = |ra: &Rational, rb: &Rational| -> Rational {
        let (ra, rb) = (clamp(ra), clamp(rb));
        let mut prod = Rational::one();
        for j in 0..centers1.len() {
            prod *= kernel_1d_raw(n1, &centers1[j], &ra, sign, n2, &centers2[j], &rb);
            if prod.is_zero() {
                break;
            }
        }
        prod
    };
    let lo = at(r1.lo(), r2.lo());
    if r1.is_point() && r2.is_point() {
        return Ok(Enclosure::point(lo));
    }
    Ok(Enclosure::new(lo, at(r1.hi(), r2.hi())))
}

/// Both sides of the dilation inequality
/// `|A(q1, q1^{-1/m} B1) ∩ A(q2, q2^{-1/m} B2)|
///   <= q1^{-1} |A(q1, B1) ∩ A(q2, (q1/q2)^{1/m} B2)|`
/// for parallel q1, q2 with |q1| <= |q2|. Exact mode: the scale factors must
/// be rational (always true for m = 1), otherwise an unsupported-scale error.
pub fn dilate_gap(
    q1: &LatticeVector,
    b1: &Ball,
    q2: &LatticeVector,
    b2: &Ball,
) -> Result<(Rational, Rational)> {
    let (s, m) = dilate_gap_check(q1, b1, q2, b2)?;
    let (n1, n2) = (q1.norm(), q2.norm());
    let inv_root = |k: u64| -> Result<Rational> {
        Enclosure::point(uint(k))
            .pow_rat(&rat(-1, m as i64), crate::enclosure::DEFAULT_BITS)
            .expect_point("q^{-1/m} is irrational; use dilate_gap_bracket")
    };
    let lhs = intersect_measure_parallel(
        n1,
        &b1.scale_radius(&inv_root(n1)?)?,
        s,
        n2,
        &b2.scale_radius(&inv_root(n2)?)?,
    )?;
    let ratio = Enclosure::point(rat(n1 as i64, n2 as i64))
        .pow_rat(&rat(1, m as i64), crate::enclosure::DEFAULT_BITS)
        .expect_point("(q1/q2)^{1/m} is irrational; use dilate_gap_bracket")?;
    let rhs = intersect_measure_parallel(n1, b1, s, n2, &b2.scale_radius(&ratio)?)? / uint(n1);
    Ok((lhs, rhs))
}

/// Enclosure-mode variant of `dilate_gap` for irrational scale factors.
pub fn dilate_gap_bracket(
    q1: &LatticeVector,
    b1: &Ball,
    q2: &LatticeVector,
    b2: &Ball,
    bits: u32,
) -> Result<(Enclosure, Enclosure)> {
    let (s, m) = dilate_gap_check(q1, b1, q2, b2)?;
    let (n1, n2) = (q1.norm(), q2.norm());
    let me = rat(1, m as i64);
    let r1 = Enclosure::point(uint(n1)).pow_rat(&(-&me), bits).scale(b1.radius());
    let r2 = Enclosure::point(uint(n2)).pow_rat(&(-&me), bits).scale(b2.radius());
    let lhs = intersect_measure_parallel_bracket(n1, b1.centers(), &r1, s, n2, b2.centers(), &r2)?;
    let ratio = Enclosure::point(rat(n1 as i64, n2 as i64)).pow_rat(&me, bits);
    let rhs = intersect_measure_parallel_bracket(
        n1,
        b1.centers(),
        &Enclosure::point(b1.radius().clone()),
        s,
        n2,
        b2.centers(),
        &ratio.scale(b2.radius()),
    )?
    .scale(&uint(n1).recip());
    Ok((lhs, rhs))
}

fn dilate_gap_check(
    q1: &LatticeVector,
    b1: &Ball,
    q2: &LatticeVector,
    b2: &Ball,
) -> Result<(i8, usize)> {
    if b1.dim() != b2.dim() {
        return Err(KgError::DimensionMismatch("balls of different m".into()));
    }
    if !q1.is_parallel(q2) {
        return Err(domain("dilate_gap needs parallel vectors"));
    }
    if q1.norm() > q2.norm() {
        return Err(domain("dilate_gap needs |q1| <= |q2|"));
    }
    if b1.was_clamped() || b2.was_clamped() {
        return Err(domain("dilate_gap needs unclamped balls"));
    }
    Ok((q1.parallel_sign(q2)?, b1.dim()))
}

/// The overlap upper bound `2^m (|B1||B2| + |B2| |q|^{-m} gcd(r,q)^m)`;
/// the exact 1-D intersection measure never exceeds it.
pub fn overlap_bound(r: i64, b1: &Ball, q: i64, b2: &Ball) -> Result<Rational> {
    if r == 0 || q == 0 {
        return Err(domain("overlap_bound needs nonzero r, q"));
    }
    if b1.dim() != b2.dim() {
        return Err(KgError::DimensionMismatch("balls of different m".into()));
    }
    let m = b1.dim() as i64;
    let g = gcd_u(r.unsigned_abs(), q.unsigned_abs());
    let qm = pow_i(&uint(q.unsigned_abs()), -m);
    let gm = pow_i(&uint(g), m);
    Ok(pow_i(&int(2), m) * (b1.measure() * b2.measure() + b2.measure() * qm * gm))
}

/// |A(q,B) ∩ U| / (|A(q,B)| |U|), exact. Values near 1 mean A(q,B) is close
/// to independent of U; the mixing bound says this ratio is at least 1/4
/// (1/2 for single arcs) once |q| is large relative to U's structure.
pub fn mixing_defect_1d(q: i64, b: &Ball, u: &IntervalUnion) -> Result<Rational> {
    if b.measure().is_zero() || u.length().is_zero() {
        return Err(domain("mixing_defect_1d needs positive-measure sets"));
    }
    let a = preimage_1d(q, b)?;
    Ok(a.intersect(u).length() / (b.measure() * u.length()))
}

/// Memo table for the 1-D kernel, keyed by the sign-normalized problem.
/// The pair-sum engine re-requests identical reduced pairs across parallel
/// classes; instantiate one per worker (pure function, merge-safe).
#[derive(Default)]
pub struct Memo1d {
    map: HashMap<(u64, i8, u64, Ball, Ball), Rational>,
    pub hits: u64,
    pub misses: u64,
}

impl Memo1d {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intersect_1d(&mut self, n1: u64, sign: i8, n2: u64, b1: &Ball, b2: &Ball) -> Result<Rational> {
        let key = (n1, sign, n2, b1.clone(), b2.clone());
        if let Some(v) = self.map.get(&key) {
            self.hits += 1;
            return Ok(v.clone());
        }
        self.misses += 1;
        let v = intersect_measure_1d(n1 as i64, b1, sign as i64 * n2 as i64, b2)?;
        self.map.insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::zero;

    fn arc(c: Rational, r: Rational) -> Ball {
        Ball::arc(c, r).unwrap()
    }

    #[test]
    fn ball_measure_and_clamp() {
        let b = Ball::new(vec![rat(1, 3), rat(1, 4)], rat(1, 8)).unwrap();
        assert_eq!(b.measure(), rat(1, 16));
        assert!(!b.was_clamped());
        let c = Ball::arc(zero(), rat(3, 4)).unwrap();
        assert!(c.was_clamped());
        assert_eq!(c.radius(), &half());
        assert_eq!(c.measure(), Rational::one());
    }

    #[test]
    fn centers_reduce_mod_one() {
        let b = Ball::arc(rat(-1, 4), rat(1, 8)).unwrap();
        assert_eq!(b.centers()[0], rat(3, 4));
    }

    #[test]
    fn interval_union_normalizes() {
        let u = IntervalUnion::from_raw([
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(5, 8)),
            (rat(7, 8), rat(9, 8)),
        ]);
        assert_eq!(
            u.arcs(),
            &[
                (zero(), rat(1, 8)),
                (rat(1, 4), rat(5, 8)),
                (rat(7, 8), Rational::one())
            ]
        );
        assert_eq!(u.length(), rat(1, 2) + rat(1, 8));
    }

    #[test]
    fn interval_intersection() {
        let a = IntervalUnion::from_raw([(zero(), half())]);
        let b = IntervalUnion::from_raw([(rat(1, 4), rat(3, 4))]);
        let i = a.intersect(&b);
        assert_eq!(i.arcs(), &[(rat(1, 4), rat(1, 2))]);
        assert_eq!(a.intersect(&IntervalUnion::empty()).length(), zero());
        assert_eq!(a.union(&b).length(), rat(3, 4));
    }

    #[test]
    fn preimage_matches_hand_computation() {
        let u = preimage_1d(2, &arc(zero(), rat(1, 8))).unwrap();
        assert_eq!(
            u.arcs(),
            &[
                (zero(), rat(1, 16)),
                (rat(7, 16), rat(9, 16)),
                (rat(15, 16), Rational::one())
            ]
        );
        assert_eq!(u.length(), rat(1, 4));

        let full = preimage_1d(1, &arc(zero(), half())).unwrap();
        assert_eq!(full, IntervalUnion::full());
    }

    #[test]
    fn preimage_negative_q_is_reflected() {
        let b = arc(rat(1, 5), rat(1, 12));
        let neg = preimage_1d(-3, &b).unwrap();
        let refl = preimage_1d(3, &b.neg()).unwrap();
        assert_eq!(neg, refl);
    }

    #[test]
    fn preimage_measure_is_ball_measure() {
        for q in [-7i64, -2, 1, 3, 10] {
            let b = arc(rat(3, 7), rat(2, 9));
            assert_eq!(preimage_1d(q, &b).unwrap().length(), b.measure());
        }
    }

    #[test]
    fn intersect_1d_frozen_examples() {
        // independent-looking pair: equals the product of measures
        let v = intersect_measure_1d(1, &arc(zero(), rat(1, 4)), 2, &arc(zero(), rat(1, 8)))
            .unwrap();
        assert_eq!(v, rat(1, 8));
        // dependent parallel pair: 1/16 > product 1/32
        let v = intersect_measure_1d(2, &arc(zero(), rat(1, 8)), 4, &arc(zero(), rat(1, 16)))
            .unwrap();
        assert_eq!(v, rat(1, 16));
        // self-intersection
        let b = arc(rat(2, 7), rat(1, 5));
        assert_eq!(intersect_measure_1d(5, &b, 5, &b).unwrap(), b.measure());
    }

    #[test]
    fn closed_form_matches_sweep() {
        let balls = [
            arc(zero(), rat(1, 8)),
            arc(rat(1, 3), rat(1, 10)),
            arc(rat(5, 7), rat(2, 5)),
            arc(rat(9, 11), rat(1, 2)),
            arc(rat(1, 2), rat(3, 1000)),
        ];
        for q1 in [-6i64, -1, 2, 3, 5, 12] {
            for q2 in [-8i64, 1, 4, 7, 9] {
                for b1 in &balls {
                    for b2 in &balls {
                        let fast = intersect_measure_1d(q1, b1, q2, b2).unwrap();
                        let slow = intersect_measure_1d_sweep(q1, b1, q2, b2).unwrap();
                        assert_eq!(fast, slow, "q1={q1} q2={q2} b1={b1:?} b2={b2:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn nonparallel_is_product() {
        let q1 = LatticeVector::from_slice(&[1, 0]).unwrap();
        let q2 = LatticeVector::from_slice(&[0, 1]).unwrap();
        let b1 = Ball::arc(rat(1, 3), rat(1, 7)).unwrap();
        let b2 = Ball::arc(rat(1, 2), rat(1, 9)).unwrap();
        assert_eq!(
            intersect_measure(&q1, &b1, &q2, &b2).unwrap(),
            b1.measure() * b2.measure()
        );
    }

    #[test]
    fn parallel_reduces_to_1d() {
        let q1 = LatticeVector::from_slice(&[2, 4]).unwrap();
        let q2 = LatticeVector::from_slice(&[3, 6]).unwrap();
        let b1 = Ball::arc(rat(1, 5), rat(1, 6)).unwrap();
        let b2 = Ball::arc(rat(2, 5), rat(1, 8)).unwrap();
        assert_eq!(
            intersect_measure(&q1, &b1, &q2, &b2).unwrap(),
            intersect_measure_1d(4, &b1, 6, &b2).unwrap()
        );
        // opposite direction flips the 1-D sign
        let q3 = q2.neg();
        assert_eq!(
            intersect_measure(&q1, &b1, &q3, &b2).unwrap(),
            intersect_measure_1d(4, &b1, -6, &b2).unwrap()
        );
    }

    #[test]
    fn sign_law() {
        let q1 = LatticeVector::from_slice(&[3, -6]).unwrap();
        let q2 = LatticeVector::from_slice(&[-1, 2]).unwrap();
        let b1 = Ball::arc(rat(2, 7), rat(1, 9)).unwrap();
        let b2 = Ball::arc(rat(3, 11), rat(1, 13)).unwrap();
        assert_eq!(
            intersect_measure(&q1, &b1, &q2, &b2).unwrap(),
            intersect_measure(&q1.neg(), &b1.neg(), &q2, &b2).unwrap()
        );
    }

    #[test]
    fn dilate_gap_examples() {
        // equal norms, concentric balls: both sides coincide
        let q = LatticeVector::from_slice(&[3]).unwrap();
        let b1 = Ball::arc(rat(1, 4), rat(1, 6)).unwrap();
        let b2 = Ball::arc(rat(1, 4), rat(1, 7)).unwrap();
        let (lhs, rhs) = dilate_gap(&q, &b1, &q, &b2).unwrap();
        assert_eq!(lhs, rhs);

        let q1 = LatticeVector::from_slice(&[2]).unwrap();
        let q2 = LatticeVector::from_slice(&[4]).unwrap();
        let b = Ball::arc(zero(), rat(1, 4)).unwrap();
        let (lhs, rhs) = dilate_gap(&q1, &b, &q2, &b).unwrap();
        assert!(lhs <= rhs, "lhs={lhs} rhs={rhs}");

        // order violation
        assert!(dilate_gap(&q2, &b, &q1, &b).is_err());
    }

    #[test]
    fn dilate_gap_irrational_scale_rejected_exactly_but_bracketed() {
        let q1 = LatticeVector::from_slice(&[2, 0]).unwrap();
        let q2 = LatticeVector::from_slice(&[3, 0]).unwrap();
        let b = Ball::new(vec![zero(), zero()], rat(1, 10)).unwrap();
        match dilate_gap(&q1, &b, &q2, &b) {
            Err(KgError::UnsupportedScale(_)) => {}
            other => panic!("expected unsupported-scale, got {other:?}"),
        }
        let (lhs, rhs) = dilate_gap_bracket(&q1, &b, &q2, &b, 64).unwrap();
        assert!(lhs.lo() <= rhs.hi());
    }

    #[test]
    fn overlap_bound_example() {
        let b = Ball::arc(zero(), rat(1, 8)).unwrap();
        let bound = overlap_bound(3, &b, 3, &b).unwrap();
        assert_eq!(bound, rat(5, 8));
        let exact = intersect_measure_1d(3, &b, 3, &b).unwrap();
        assert_eq!(exact, rat(1, 4));
        assert!(exact <= bound);

        let tiny = Ball::arc(rat(1, 2), rat(1, 100)).unwrap();
        let bound = overlap_bound(2, &tiny, 3, &tiny).unwrap();
        assert!(intersect_measure_1d(2, &tiny, 3, &tiny).unwrap() <= bound);

        let empty = Ball::arc(zero(), zero()).unwrap();
        assert_eq!(overlap_bound(5, &b, 7, &empty).unwrap(), zero());
        assert_eq!(intersect_measure_1d(5, &b, 7, &empty).unwrap(), zero());
    }

    #[test]
    fn mixing_defect_examples() {
        let b = Ball::arc(zero(), rat(1, 8)).unwrap();
        assert_eq!(mixing_defect_1d(7, &b, &IntervalUnion::full()).unwrap(), Rational::one());

        let u = IntervalUnion::from_raw([(zero(), rat(1, 4))]);
        let d = mixing_defect_1d(16, &b, &u).unwrap();
        assert!(d >= half(), "defect {d}");

        let far = Ball::arc(half(), rat(1, 4)).unwrap();
        let small = IntervalUnion::from_raw([(zero(), rat(1, 8))]);
        assert_eq!(mixing_defect_1d(1, &far, &small).unwrap(), zero());

        assert!(mixing_defect_1d(3, &Ball::arc(zero(), zero()).unwrap(), &u).is_err());
    }

    #[test]
    fn memo_returns_same_values() {
        let mut memo = Memo1d::new();
        let b1 = Ball::arc(rat(1, 3), rat(1, 7)).unwrap();
        let b2 = Ball::arc(rat(1, 4), rat(1, 9)).unwrap();
        let v1 = memo.intersect_1d(4, 1, 6, &b1, &b2).unwrap();
        let v2 = memo.intersect_1d(4, 1, 6, &b1, &b2).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1, intersect_measure_1d(4, &b1, 6, &b2).unwrap());
        assert_eq!(memo.hits, 1);
        assert_eq!(memo.misses, 1);
    }
}
