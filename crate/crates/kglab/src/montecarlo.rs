//! Monte Carlo estimation of limsup-set measures and hit-count statistics.
//!
//! Sample points live on the dyadic grid `k / 2^64`, one deterministic
//! ChaCha stream per sample index, and every membership test reduces to an
//! exact comparison of 64-bit integers against precomputed rational
//! thresholds. Results are therefore bit-identical across runs and thread
//! counts; no float ever decides a membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::sphere_count;
use crate::enclosure::{tree_sum, Enclosure};
use crate::error::{domain, Result};
use crate::lattice::{vectors_up_to, LatticeMode, LatticeVector};
use crate::qia::BallSequence;
use crate::rational::{circ_dist, frac, half, to_f64, Rational};
use crate::torus::Ball;

/// Deterministic sampling plan: a seed plus a sample count.
///
/// Sample `i` draws its coordinates from stream `i` of a ChaCha8 generator
/// keyed by `seed`, so the point stream is independent of how samples are
/// partitioned across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    pub seed: u64,
    pub sample_count: u64,
}

impl SampleSpec {
    pub fn new(seed: u64, sample_count: u64) -> Result<Self> {
        if sample_count == 0 {
            return Err(domain("sample_count must be positive"));
        }
        Ok(SampleSpec { seed, sample_count })
    }

    /// Coordinates of sample `index` as numerators over 2^64.
    pub fn point(&self, index: u64, dims: usize) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        (0..dims).map(|_| rng.next_u64()).collect()
    }

    /// The same point as exact rationals in `[0, 1)`.
    pub fn point_rational(&self, index: u64, dims: usize) -> Vec<Rational> {
        self.point(index, dims)
            .into_iter()
            .map(|k| Rational::new(BigInt::from(k), BigInt::one() << 64))
            .collect()
    }
}

/// A circular arc `[c - r, c + r] mod 1` restricted to the grid `k / 2^64`,
/// stored as the exact set of admissible numerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Window {
    Empty,
    FullCircle,
    /// Numerators `y` with `y.wrapping_sub(lo) <= span` are inside.
    Arc { lo: u64, span: u64 },
}

impl Window {
    fn from_arc(center: &Rational, radius: &Rational) -> Window {
        // zero-radius balls are empty, matching the measure engine
        if !radius.is_positive() {
            return Window::Empty;
        }
        if radius >= &half() {
            return Window::FullCircle;
        }
        let scale = BigInt::one() << 64u32;
        let lo_b = ((center - radius) * Rational::from_integer(scale.clone())).ceil().to_integer();
        let hi_b = ((center + radius) * Rational::from_integer(scale.clone())).floor().to_integer();
        if hi_b < lo_b {
            return Window::Empty;
        }
        let span = &hi_b - &lo_b;
        if span >= &scale - BigInt::one() {
            return Window::FullCircle;
        }
        let lo = lo_b.mod_floor(&scale).to_u64().expect("reduced mod 2^64");
        Window::Arc { lo, span: span.to_u64().expect("span < 2^64") }
    }

    #[inline(always)]
    fn contains(self, y: u64) -> bool {
        match self {
            Window::Empty => false,
            Window::FullCircle => true,
            Window::Arc { lo, span } => y.wrapping_sub(lo) <= span,
        }
    }
}

/// Per-sample hit counts at a fixed norm cutoff, plus the thresholds the
/// experiment cares about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitHistogram {
    pub q_max: u64,
    pub thresholds: Vec<u64>,
    /// One entry per sample: how many lattice vectors q with `1 <= |q| <= q_max`
    /// placed `qx mod 1` inside `B_{|q|}`.
    pub counts: Vec<u64>,
}

impl HitHistogram {
    /// Fraction of samples with at least `k` hits, as an exact rational.
    pub fn fraction_at_least(&self, k: u64) -> Rational {
        let hits = self.counts.iter().filter(|&&c| c >= k).count();
        Rational::new(BigInt::from(hits), BigInt::from(self.counts.len()))
    }

    /// 95% binomial confidence half-width for `fraction_at_least(k)`.
    pub fn ci_half_width(&self, k: u64) -> f64 {
        let p = to_f64(&self.fraction_at_least(k));
        let n = self.counts.len() as f64;
        1.96 * (p * (1.0 - p) / n).sqrt()
    }

    /// Mean hit count over all samples, as an exact rational.
    pub fn mean_hits(&self) -> Rational {
        let total: u64 = self.counts.iter().sum();
        Rational::new(BigInt::from(total), BigInt::from(self.counts.len()))
    }
}

/// Windows for one sequence at one norm: one window per target coordinate,
/// plus whether the ball equals its own reflection mod 1 (then a vector and
/// its negation always hit together and the canonical half can count double).
#[derive(Debug, Clone)]
struct SeqWindows {
    wins: Vec<Window>,
    symmetric: bool,
}

fn seq_windows(seq: &BallSequence, q: u64) -> SeqWindows {
    // The inner radius endpoint keeps the test conservative when the radius
    // itself is only known as an enclosure; for exact radii it is exact.
    let r = seq.radius_enclosure(q, 64).lo().clone();
    let centers = seq.center(q);
    let wins = centers.iter().map(|c| Window::from_arc(c, &r)).collect();
    let symmetric = centers.iter().all(|c| (c + c).is_integer());
    SeqWindows { wins, symmetric }
}

/// One norm shell of canonical lattice vectors with the per-sequence windows.
struct NormBlock {
    h: u64,
    /// Flattened coordinates, `count * n` entries (canonical representatives
    /// in full mode: first nonzero coordinate positive).
    coords: Vec<i64>,
    wins: Vec<SeqWindows>,
    /// Branch-free form for the hot path: present when `m = 1` and every
    /// sequence is symmetric with a proper arc window at this norm.
    sym_arcs: Option<Vec<(u64, u64)>>,
}

struct Engine {
    n: usize,
    m: usize,
    full: bool,
    blocks: Vec<NormBlock>,
}

fn canonical(v: &LatticeVector) -> bool {
    v.coords().iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false)
}

impl Engine {
    fn build(seqs: &[&BallSequence], n: u32, q_max: u64, mode: LatticeMode) -> Engine {
        let m = seqs[0].m as usize;
        let full = mode == LatticeMode::Full;
        let mut by_norm: Vec<Vec<i64>> = vec![Vec::new(); q_max as usize + 1];
        for v in vectors_up_to(n, q_max, mode) {
            if full && !canonical(&v) {
                continue;
            }
            by_norm[v.norm() as usize].extend_from_slice(v.coords());
        }
        let blocks = (1..=q_max)
            .map(|h| {
                let coords = std::mem::take(&mut by_norm[h as usize]);
                let wins: Vec<SeqWindows> = seqs.iter().map(|s| seq_windows(s, h)).collect();
                let sym_arcs = (m == 1)
                    .then(|| {
                        wins.iter()
                            .map(|sw| match sw.wins[0] {
                                Window::Arc { lo, span } if sw.symmetric => Some((lo, span)),
                                _ => None,
                            })
                            .collect()
                    })
                    .flatten();
                NormBlock { h, coords, wins, sym_arcs }
            })
            .collect();
        Engine { n: n as usize, m, full, blocks }
    }

    /// Hit counts for one sample at each schedule checkpoint, per sequence.
    fn run(&self, x: &[u64], schedule: &[u64]) -> Vec<Vec<u64>> {
        let seqs = self.blocks[0].wins.len();
        let mut counts = vec![0u64; seqs];
        let mut out = vec![Vec::with_capacity(schedule.len()); seqs];
        let mut next = 0usize;
        for block in &self.blocks {
            if self.m == 1 && self.n <= 2 {
                self.scan_block_fast(block, x, &mut counts);
            } else {
                self.scan_block(block, x, &mut counts);
            }
            while next < schedule.len() && schedule[next] == block.h {
                for (s, c) in counts.iter().enumerate() {
                    out[s].push(*c);
                }
                next += 1;
            }
        }
        out
    }

    fn scan_block(&self, block: &NormBlock, x: &[u64], counts: &mut [u64]) {
        let mut y = vec![0u64; self.m];
        for v in block.coords.chunks_exact(self.n) {
            for (j, yj) in y.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (i, &qi) in v.iter().enumerate() {
                    acc = acc.wrapping_add((qi as u64).wrapping_mul(x[i * self.m + j]));
                }
                *yj = acc;
            }
            for (s, sw) in block.wins.iter().enumerate() {
                let pos = y.iter().zip(&sw.wins).all(|(&yj, w)| w.contains(yj));
                if !self.full {
                    counts[s] += pos as u64;
                } else if sw.symmetric {
                    counts[s] += 2 * pos as u64;
                } else {
                    let neg = y
                        .iter()
                        .zip(&sw.wins)
                        .all(|(&yj, w)| w.contains(yj.wrapping_neg()));
                    counts[s] += pos as u64 + neg as u64;
                }
            }
        }
    }

    /// Incremental scan for `m = 1`, `n <= 2`: within each row of a norm
    /// shell only one coordinate steps by 1, so the dot product advances by
    /// a single wrapping add per vector.
    fn scan_block_fast(&self, block: &NormBlock, x: &[u64], counts: &mut [u64]) {
        let h = block.h;
        if self.n == 1 {
            let y = (h as u64).wrapping_mul(x[0]);
            self.tally(&block.wins, y, counts);
            return;
        }
        let (k1, k2) = (x[0], x[1]);
        let hk1 = (h as u64).wrapping_mul(k1);
        let hk2 = (h as u64).wrapping_mul(k2);
        let rows: [(u64, u64, u64); 3] = if self.full {
            // canonical half: (h, q2) for q2 in [-h, h]; (q1, h) for q1 in
            // [0, h-1]; (q1, -h) for q1 in [1, h-1]
            [
                (hk1.wrapping_sub(hk2), k2, 2 * h + 1),
                (hk2, k1, h),
                (k1.wrapping_sub(hk2), k1, h - 1),
            ]
        } else {
            // orthant shell: (h, q2) for q2 in [0, h]; (q1, h) for q1 in [0, h-1]
            [(hk1, k2, h + 1), (hk2, k1, h), (0, 0, 0)]
        };
        if let Some(arcs) = &block.sym_arcs {
            let mult = if self.full { 2 } else { 1 };
            for &(y0, step, iters) in &rows {
                scan_row_sym(y0, step, iters, arcs, mult, counts);
            }
        } else {
            for &(y0, step, iters) in &rows {
                self.scan_row(y0, step, iters, &block.wins, counts);
            }
        }
    }

    #[inline]
    fn scan_row(&self, y0: u64, step: u64, iters: u64, wins: &[SeqWindows], counts: &mut [u64]) {
        let mut y = y0;
        for _ in 0..iters {
            self.tally(wins, y, counts);
            y = y.wrapping_add(step);
        }
    }

    #[inline(always)]
    fn tally(&self, wins: &[SeqWindows], y: u64, counts: &mut [u64]) {
        for (s, sw) in wins.iter().enumerate() {
            let w = sw.wins[0];
            let pos = w.contains(y) as u64;
            if !self.full {
                counts[s] += pos;
            } else if sw.symmetric {
                counts[s] += 2 * pos;
            } else {
                counts[s] += pos + w.contains(y.wrapping_neg()) as u64;
            }
        }
    }
}

/// Tight inner loop for symmetric arcs: local accumulators, no branches.
#[inline]
fn scan_row_sym(y0: u64, step: u64, iters: u64, arcs: &[(u64, u64)], mult: u64, counts: &mut [u64]) {
    match *arcs {
        [(lo, span)] => {
            let (mut y, mut c) = (y0, 0u64);
            for _ in 0..iters {
                c += (y.wrapping_sub(lo) <= span) as u64;
                y = y.wrapping_add(step);
            }
            counts[0] += c * mult;
        }
        [(lo1, sp1), (lo2, sp2)] => {
            let (mut y, mut c1, mut c2) = (y0, 0u64, 0u64);
            for _ in 0..iters {
                c1 += (y.wrapping_sub(lo1) <= sp1) as u64;
                c2 += (y.wrapping_sub(lo2) <= sp2) as u64;
                y = y.wrapping_add(step);
            }
            counts[0] += c1 * mult;
            counts[1] += c2 * mult;
        }
        _ => {
            let mut y = y0;
            for _ in 0..iters {
                for (s, &(lo, span)) in arcs.iter().enumerate() {
                    counts[s] += (y.wrapping_sub(lo) <= span) as u64 * mult;
                }
                y = y.wrapping_add(step);
            }
        }
    }
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 {
        return Err(domain("schedule must be nonempty with positive entries"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("schedule must be strictly increasing"));
    }
    Ok(())
}

/// Hit-count histograms at each schedule cutoff for several ball sequences
/// sharing one pass over the lattice. Outer index: sequence; inner: schedule
/// position.
pub fn estimate_limsup_measures(
    seqs: &[&BallSequence],
    n: u32,
    schedule: &[u64],
    thresholds: &[u64],
    mode: LatticeMode,
    spec: SampleSpec,
) -> Result<Vec<Vec<HitHistogram>>> {
    check_schedule(schedule)?;
    if seqs.is_empty() {
        return Err(domain("need at least one ball sequence"));
    }
    let m = seqs[0].m;
    if seqs.iter().any(|s| s.m != m) {
        return Err(domain("all sequences must share the target dimension"));
    }
    let engine = Engine::build(seqs, n, *schedule.last().unwrap(), mode);
    let dims = (n * m) as usize;
    let per_sample: Vec<Vec<Vec<u64>>> = (0..spec.sample_count)
        .into_par_iter()
        .map(|i| engine.run(&spec.point(i, dims), schedule))
        .collect();
    let mut out = Vec::with_capacity(seqs.len());
    for s in 0..seqs.len() {
        let mut per_q = Vec::with_capacity(schedule.len());
        for (qi, &q) in schedule.iter().enumerate() {
            let counts = per_sample.iter().map(|ps| ps[s][qi]).collect();
            per_q.push(HitHistogram { q_max: q, thresholds: thresholds.to_vec(), counts });
        }
        out.push(per_q);
    }
    Ok(out)
}

/// Single-sequence wrapper around [`estimate_limsup_measures`].
pub fn estimate_limsup_measure(
    seq: &BallSequence,
    n: u32,
    schedule: &[u64],
    thresholds: &[u64],
    mode: LatticeMode,
    spec: SampleSpec,
) -> Result<Vec<HitHistogram>> {
    Ok(estimate_limsup_measures(&[seq], n, schedule, thresholds, mode, spec)?.remove(0))
}

/// Number of lattice vectors q, `1 <= |q| <= q_max`, with `qx mod 1` inside
/// `B_{|q|}`, for an exact rational point `x` (row-major `n x m`).
pub fn hit_count(
    x: &[Rational],
    seq: &BallSequence,
    n: u32,
    q_max: u64,
    mode: LatticeMode,
) -> Result<u64> {
    let m = seq.m as usize;
    if x.len() != n as usize * m {
        return Err(domain("point dimension must equal n*m"));
    }
    if q_max == 0 {
        return Err(domain("q_max must be positive"));
    }
    let mut hits = 0u64;
    for v in vectors_up_to(n, q_max, mode) {
        let r = seq.radius_enclosure(v.norm(), 64).lo().clone();
        if !r.is_positive() {
            continue;
        }
        let centers = seq.center(v.norm());
        let inside = (0..m).all(|j| {
            let mut y = Rational::zero();
            for (i, &qi) in v.coords().iter().enumerate() {
                y += Rational::from_integer(BigInt::from(qi)) * &x[i * m + j];
            }
            circ_dist(&frac(&y), &centers[j]) <= r
        });
        hits += inside as u64;
    }
    Ok(hits)
}

/// Expected total hit count over `q_lo < |q| <= q_hi` under the uniform
/// sample: by linearity, the sum of `sphere_count(h) * |B_h|`.
pub fn expected_hit_count(
    seq: &BallSequence,
    n: u32,
    q_lo: u64,
    q_hi: u64,
    mode: LatticeMode,
    bits: u32,
) -> Result<Enclosure> {
    if q_lo >= q_hi {
        return Err(domain("need q_lo < q_hi"));
    }
    let terms = (q_lo + 1..=q_hi)
        .map(|h| {
            let cnt = Rational::from_integer(sphere_count(n, h, mode));
            seq.measure_enclosure(h, bits).scale(&cnt)
        })
        .collect();
    Ok(tree_sum(terms))
}

/// Sample-mean estimate of an indicator probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McEstimate {
    pub hits: u64,
    pub samples: u64,
}

impl McEstimate {
    pub fn estimate(&self) -> Rational {
        Rational::new(BigInt::from(self.hits), BigInt::from(self.samples))
    }

    pub fn estimate_f64(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }

    /// Binomial standard deviation of the estimator under true probability `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    /// Whether the estimate lies within `k` binomial standard deviations of
    /// `target` (sigma computed at the target probability).
    pub fn within_sigmas(&self, target: &Rational, k: f64) -> bool {
        let p = to_f64(target);
        (self.estimate_f64() - p).abs() <= k * self.sigma(p).max(f64::MIN_POSITIVE)
    }
}

/// Monte Carlo estimate of `|A(q, B)|`, the measure of points `x` with
/// `qx mod 1` inside `B`; cross-validates the exact engine.
pub fn empirical_set_measure(q: &LatticeVector, ball: &Ball, spec: SampleSpec) -> Result<McEstimate> {
    let n = q.dim();
    let m = ball.dim();
    let wins: Vec<Window> = ball
        .centers()
        .iter()
        .map(|c| Window::from_arc(c, ball.radius()))
        .collect();
    let hits: u64 = (0..spec.sample_count)
        .into_par_iter()
        .map(|i| {
            let x = spec.point(i, n * m);
            let inside = (0..m).all(|j| {
                let mut y = 0u64;
                for (idx, &qi) in q.coords().iter().enumerate() {
                    y = y.wrapping_add((qi as u64).wrapping_mul(x[idx * m + j]));
                }
                wins[j].contains(y)
            });
            inside as u64
        })
        .sum();
    Ok(McEstimate { hits, samples: spec.sample_count })
}

/// Monte Carlo estimate of `|A(q1, B1) ∩ A(q2, B2)|` by joint membership
/// counting; cross-validates the exact intersection engine.
pub fn empirical_intersection_measure(
    q1: &LatticeVector,
    b1: &Ball,
    q2: &LatticeVector,
    b2: &Ball,
    spec: SampleSpec,
) -> Result<McEstimate> {
    let n = q1.dim();
    if q2.dim() != n {
        return Err(domain("lattice vectors must share n"));
    }
    let m = b1.dim();
    if b2.dim() != m {
        return Err(domain("balls must share m"));
    }
    let wins = |b: &Ball| -> Vec<Window> {
        b.centers().iter().map(|c| Window::from_arc(c, b.radius())).collect()
    };
    let (w1, w2) = (wins(b1), wins(b2));
    let member = |q: &LatticeVector, w: &[Window], x: &[u64]| -> bool {
        (0..m).all(|j| {
            let mut y = 0u64;
            for (idx, &qi) in q.coords().iter().enumerate() {
                y = y.wrapping_add((qi as u64).wrapping_mul(x[idx * m + j]));
            }
            w[j].contains(y)
        })
    };
    let hits: u64 = (0..spec.sample_count)
        .into_par_iter()
        .map(|i| {
            let x = spec.point(i, n * m);
            (member(q1, &w1, &x) && member(q2, &w2, &x)) as u64
        })
        .sum();
    Ok(McEstimate { hits, samples: spec.sample_count })
}

/// Estimate of the mixing ratio `|A(q,B) ∩ U| / (|A(q,B)| |U|)` by sampling
/// the whole cube and counting joint membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingEstimate {
    pub joint_hits: u64,
    pub samples: u64,
    /// Exact `|A(q,B)| * |U|`.
    pub denominator: Rational,
}

impl MixingEstimate {
    /// Estimated ratio; 1 means perfect independence of `A` and `U`.
    pub fn ratio(&self) -> Rational {
        Rational::new(BigInt::from(self.joint_hits), BigInt::from(self.samples)) / &self.denominator
    }

    /// 95% confidence half-width for the ratio.
    pub fn ci_half_width(&self) -> f64 {
        let p = self.joint_hits as f64 / self.samples as f64;
        1.96 * (p * (1.0 - p) / self.samples as f64).sqrt() / to_f64(&self.denominator)
    }
}

/// Statistical counterpart of the exact one-dimensional mixing defect, for
/// dimensions where the exact engine declines. `u_box` lists per-coordinate
/// half-open intervals `[lo, hi)` inside `[0, 1)`.
pub fn mixing_mc(
    q: &LatticeVector,
    ball: &Ball,
    u_box: &[(Rational, Rational)],
    spec: SampleSpec,
) -> Result<MixingEstimate> {
    let n = q.dim();
    let m = ball.dim();
    if u_box.len() != n * m {
        return Err(domain("box dimension must equal n*m"));
    }
    let mut u_measure = Rational::one();
    for (lo, hi) in u_box {
        if lo.is_negative() || hi > &Rational::one() || lo >= hi {
            return Err(domain("box sides must satisfy 0 <= lo < hi <= 1"));
        }
        u_measure *= hi - lo;
    }
    let set_measure = ball.measure();
    if set_measure.is_zero() {
        return Err(domain("ball must have positive measure"));
    }
    let wins: Vec<Window> = ball
        .centers()
        .iter()
        .map(|c| Window::from_arc(c, ball.radius()))
        .collect();
    // per-coordinate numerator bounds: k in [ceil(lo*2^64), ceil(hi*2^64) - 1]
    let scale = Rational::from_integer(BigInt::one() << 64u32);
    let bounds: Vec<(u64, u64)> = u_box
        .iter()
        .map(|(lo, hi)| {
            let a = (lo * &scale).ceil().to_integer().to_u64().unwrap_or(u64::MAX);
            let b = (hi * &scale).ceil().to_integer() - BigInt::one();
            (a, b.to_u64().unwrap_or(u64::MAX))
        })
        .collect();
    let joint_hits: u64 = (0..spec.sample_count)
        .into_par_iter()
        .map(|i| {
            let x = spec.point(i, n * m);
            let in_box = x.iter().zip(&bounds).all(|(&k, &(a, b))| a <= k && k <= b);
            if !in_box {
                return 0u64;
            }
            let inside = (0..m).all(|j| {
                let mut y = 0u64;
                for (idx, &qi) in q.coords().iter().enumerate() {
                    y = y.wrapping_add((qi as u64).wrapping_mul(x[idx * m + j]));
                }
                wins[j].contains(y)
            });
            inside as u64
        })
        .sum();
    Ok(MixingEstimate {
        joint_hits,
        samples: spec.sample_count,
        denominator: set_measure * u_measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, zero};

    fn spec(seed: u64, count: u64) -> SampleSpec {
        SampleSpec::new(seed, count).unwrap()
    }

    #[test]
    fn window_matches_circular_distance() {
        let cases = [
            (rat(0, 1), rat(1, 10)),
            (rat(1, 3), rat(1, 7)),
            (rat(9, 10), rat(1, 4)),
            (rat(1, 2), rat(1, 2)),
            (rat(2, 5), rat(0, 1)),
        ];
        for (c, r) in &cases {
            let w = Window::from_arc(c, r);
            for k in [0u64, 1, u64::MAX, u64::MAX / 3, 1 << 63, 0x1234_5678_9abc_def0] {
                let x = Rational::new(BigInt::from(k), BigInt::one() << 64);
                assert_eq!(w.contains(k), circ_dist(&x, c) <= *r, "c={c} r={r} k={k}");
            }
        }
    }

    #[test]
    fn window_too_narrow_for_grid_is_empty() {
        let w = Window::from_arc(&rat(1, 3), &Rational::new(BigInt::one(), BigInt::one() << 70));
        assert_eq!(w, Window::Empty);
    }

    #[test]
    fn hit_count_multiples_of_three() {
        let seq = BallSequence::power(1, rat(1, 10), int(0)).unwrap();
        let x = vec![rat(1, 3)];
        assert_eq!(hit_count(&x, &seq, 1, 10, LatticeMode::Orthant).unwrap(), 3);
    }

    #[test]
    fn hit_count_zero_radius_and_origin() {
        let zero_seq = BallSequence::power(1, zero(), int(0)).unwrap();
        assert_eq!(hit_count(&[rat(1, 3)], &zero_seq, 1, 10, LatticeMode::Full).unwrap(), 0);
        let seq = BallSequence::power(1, rat(1, 100), int(1)).unwrap();
        assert_eq!(hit_count(&[zero()], &seq, 1, 7, LatticeMode::Orthant).unwrap(), 7);
    }

    #[test]
    fn sampler_agrees_with_rational_hit_count() {
        let seq = BallSequence::power(1, rat(1, 4), int(1)).unwrap();
        let shifted = BallSequence::power_log(1, rat(1, 3), int(1), zero(), vec![rat(1, 5)]).unwrap();
        let sp = spec(11, 6);
        for mode in [LatticeMode::Full, LatticeMode::Orthant] {
            for n in [1u32, 2, 3] {
                for s in [&seq, &shifted] {
                    let hist = estimate_limsup_measure(s, n, &[3, 9], &[1], mode, sp).unwrap();
                    for i in 0..sp.sample_count {
                        let x = sp.point_rational(i, n as usize);
                        assert_eq!(hist[0].counts[i as usize], hit_count(&x, s, n, 3, mode).unwrap());
                        assert_eq!(hist[1].counts[i as usize], hit_count(&x, s, n, 9, mode).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fast_scan_matches_generic_scan() {
        let seq = BallSequence::power_log(1, rat(1, 3), int(1), zero(), vec![rat(1, 7)]).unwrap();
        let sym = BallSequence::power(1, rat(1, 4), rat(1, 2)).unwrap();
        for mode in [LatticeMode::Full, LatticeMode::Orthant] {
            for n in [1u32, 2] {
                let engine = Engine::build(&[&seq, &sym], n, 12, mode);
                let sp = spec(5, 4);
                for i in 0..sp.sample_count {
                    let x = sp.point(i, n as usize);
                    let mut fast = vec![0u64; 2];
                    let mut slow = vec![0u64; 2];
                    for b in &engine.blocks {
                        engine.scan_block_fast(b, &x, &mut fast);
                        engine.scan_block(b, &x, &mut slow);
                    }
                    assert_eq!(fast, slow, "mode={mode:?} n={n} sample={i}");
                }
            }
        }
    }

    #[test]
    fn histograms_are_deterministic_and_monotone() {
        let seq = BallSequence::power(1, rat(1, 4), int(2)).unwrap();
        let sp = spec(42, 64);
        let a = estimate_limsup_measure(&seq, 2, &[4, 8, 16], &[1, 3], LatticeMode::Full, sp).unwrap();
        let b = estimate_limsup_measure(&seq, 2, &[4, 8, 16], &[1, 3], LatticeMode::Full, sp).unwrap();
        assert_eq!(a, b);
        for w in a.windows(2) {
            for k in [1u64, 3, 5] {
                assert!(w[0].fraction_at_least(k) <= w[1].fraction_at_least(k));
            }
        }
        let last = a.last().unwrap();
        assert!(last.fraction_at_least(3) <= last.fraction_at_least(1));
    }

    #[test]
    fn empirical_measure_matches_exact_measure() {
        // |A(q, B)| = |B| for any nonzero q
        let q = LatticeVector::from_slice(&[3, 4]).unwrap();
        let ball = Ball::arc(rat(1, 6), rat(1, 10)).unwrap();
        let est = empirical_set_measure(&q, &ball, spec(7, 100_000)).unwrap();
        assert!(est.within_sigmas(&rat(1, 5), 4.0), "estimate {}", est.estimate_f64());
    }

    #[test]
    fn mean_hits_tracks_exact_expectation() {
        let seq = BallSequence::power(1, rat(1, 4), int(2)).unwrap();
        let sp = spec(3, 4000);
        let hist = estimate_limsup_measure(&seq, 2, &[16], &[1], LatticeMode::Full, sp).unwrap();
        let expect = expected_hit_count(&seq, 2, 0, 16, LatticeMode::Full, 128).unwrap();
        let mean = to_f64(&hist[0].mean_hits());
        let mu = expect.mid_f64();
        // crude variance bound: hits are bounded sums of indicators, use 3
        // sigma with the Poisson-scale bound Var <= mu * max multiplicity
        let sigma = (mu * 16.0 / sp.sample_count as f64).sqrt();
        assert!((mean - mu).abs() <= 3.0 * sigma, "mean {mean} vs expected {mu}");
    }

    #[test]
    fn mixing_full_cube_has_unit_ratio() {
        let q = LatticeVector::from_slice(&[5, 2]).unwrap();
        let ball = Ball::arc(zero(), rat(1, 8)).unwrap();
        let cube = vec![(zero(), Rational::one()), (zero(), Rational::one())];
        let est = mixing_mc(&q, &ball, &cube, spec(9, 50_000)).unwrap();
        let r = to_f64(&est.ratio());
        assert!((r - 1.0).abs() <= est.ci_half_width() + 1e-9, "ratio {r}");
    }

    #[test]
    fn mixing_detects_empty_corner() {
        // |q| = 1: the set A(q, B) is one stripe around the diagonal shifted
        // to center 1/2; a small box near the origin misses it entirely.
        let q = LatticeVector::from_slice(&[1, 0]).unwrap();
        let ball = Ball::arc(rat(1, 2), rat(1, 16)).unwrap();
        let corner = vec![(zero(), rat(1, 8)), (zero(), rat(1, 8))];
        let est = mixing_mc(&q, &ball, &corner, spec(13, 20_000)).unwrap();
        assert_eq!(est.joint_hits, 0);
    }

    #[test]
    fn expected_hit_count_matches_brute_force() {
        let seq = BallSequence::power(1, rat(1, 3), int(1)).unwrap();
        let got = expected_hit_count(&seq, 2, 2, 5, LatticeMode::Full, 128).unwrap();
        let mut want = zero();
        for h in 3..=5u64 {
            let cnt = Rational::from_integer(sphere_count(2, h, LatticeMode::Full));
            want += cnt * seq.measure_exact(h).unwrap();
        }
        assert_eq!(got.expect_point("exact sequence").unwrap(), want);
    }
}
