//! Named verification suites: randomized and exhaustive sweeps that check
//! the engine's inequalities and identities against independent oracles.
//!
//! Each check is a parameterized function returning a [`CheckOutcome`], so
//! callers can run them at quick-suite or full acceptance scale. The suites
//! group them the way the command-line `verify` subcommand exposes them.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::{gcd_power_sum, gcd_power_sum_direct, sigma};
use crate::error::{domain, Result};
use crate::lattice::{LatticeMode, LatticeVector};
use crate::montecarlo::{
    empirical_intersection_measure, estimate_limsup_measures, expected_hit_count, SampleSpec,
};
use crate::qia::{inheritance_compare, pair_sum_schedule, BallSequence};
use crate::rational::{int, rat, to_f64, uint, Rational};
use crate::torus::{
    dilate_gap, intersect_measure, intersect_measure_1d_sweep, intersect_measure_parallel,
    mixing_defect_1d, overlap_bound, Ball, IntervalUnion,
};
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, passed: true, detail: detail.into() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, passed: false, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Basecase,
    Inheritance,
    Dichotomy,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Basecase => "basecase",
            Suite::Inheritance => "inheritance",
            Suite::Dichotomy => "dichotomy",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = crate::error::KgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "basecase" => Ok(Suite::Basecase),
            "inheritance" => Ok(Suite::Inheritance),
            "dichotomy" => Ok(Suite::Dichotomy),
            "all" => Ok(Suite::All),
            other => Err(domain(format!(
                "unknown suite '{other}' (expected lemmas|basecase|inheritance|dichotomy|all)"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// random inputs

fn rand_center(rng: &mut StdRng) -> Rational {
    let den = rng.random_range(2..=24i64);
    rat(rng.random_range(0..den), den)
}

fn rand_radius(rng: &mut StdRng, min_inv: i64, max_inv: i64) -> Rational {
    // a radius in (0, 1/2] with a modest denominator
    let den = rng.random_range(min_inv..=max_inv);
    let num = rng.random_range(1..=den / 2).max(1);
    rat(num, den)
}

fn rand_ball(rng: &mut StdRng, m: usize) -> Ball {
    let centers = (0..m).map(|_| rand_center(rng)).collect();
    Ball::new(centers, rand_radius(rng, 4, 40)).unwrap()
}

fn rand_primitive(rng: &mut StdRng, n: usize, coord_bound: i64) -> LatticeVector {
    loop {
        let coords: Vec<i64> =
            (0..n).map(|_| rng.random_range(-coord_bound..=coord_bound)).collect();
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        let v = LatticeVector::new(coords).unwrap();
        if v.is_primitive() {
            return v;
        }
    }
}

// ---------------------------------------------------------------------------
// individual checks

/// Parallel (and one-dimensional) intersection measures against the
/// independent sweep-line oracle: exact rational equality case by case.
pub fn check_sweep_oracle(cases: usize, scalar_bound: i64, seed: u64) -> CheckOutcome {
    const NAME: &str = "intersection measure equals sweep oracle";
    let mut rng = StdRng::seed_from_u64(seed);
    for case in 0..cases {
        let m = rng.random_range(1..=2usize);
        let n = rng.random_range(1..=2usize);
        let b1 = rand_ball(&mut rng, m);
        let b2 = rand_ball(&mut rng, m);
        let e = rand_primitive(&mut rng, n, 3);
        let g1 = rng.random_range(1..=scalar_bound);
        let g2 = rng.random_range(1..=scalar_bound);
        let s1: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
        let s2: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
        let q1 = LatticeVector::new(e.coords().iter().map(|c| c * g1 * s1).collect()).unwrap();
        let q2 = LatticeVector::new(e.coords().iter().map(|c| c * g2 * s2).collect()).unwrap();
        let got = match intersect_measure(&q1, &b1, &q2, &b2) {
            Ok(v) => v,
            Err(e) => return CheckOutcome::fail(NAME, format!("case {case}: engine error {e}")),
        };
        let mut want = Rational::one();
        for j in 0..m {
            match intersect_measure_1d_sweep(g1 * s1, &b1.coord(j), g2 * s2, &b2.coord(j)) {
                Ok(v) => want *= v,
                Err(e) => {
                    return CheckOutcome::fail(NAME, format!("case {case}: oracle error {e}"))
                }
            }
        }
        if got != want {
            return CheckOutcome::fail(
                NAME,
                format!("case {case}: q1={q1:?} q2={q2:?} engine {got} != oracle {want}"),
            );
        }
    }
    CheckOutcome::pass(NAME, format!("{cases} random parallel cases, all exactly equal"))
}

/// Monte Carlo cross-validation: the empirical joint-membership frequency
/// falls within `4` binomial standard deviations of the exact intersection
/// measure in all but at most one spot check.
pub fn check_mc_spot_checks(spots: usize, samples: u64, seed: u64) -> CheckOutcome {
    const NAME: &str = "intersection measure within 4 sigma of Monte Carlo";
    let mut rng = StdRng::seed_from_u64(seed);
    let mut misses = Vec::new();
    for spot in 0..spots {
        let n = rng.random_range(1..=2usize);
        let b1 = rand_ball(&mut rng, 1);
        let b2 = rand_ball(&mut rng, 1);
        let (q1, q2) = if rng.random_bool(0.5) || n == 1 {
            // parallel pair along a shared primitive direction
            let e = rand_primitive(&mut rng, n, 3);
            let mk = |g: i64| LatticeVector::new(e.coords().iter().map(|c| c * g).collect());
            (
                mk(rng.random_range(1..=6)).unwrap(),
                mk(-rng.random_range(1..=6)).unwrap(),
            )
        } else {
            let a = rand_primitive(&mut rng, n, 5);
            let mut b = rand_primitive(&mut rng, n, 5);
            while a.is_parallel(&b) {
                b = rand_primitive(&mut rng, n, 5);
            }
            (a, b)
        };
        let exact = intersect_measure(&q1, &b1, &q2, &b2).unwrap();
        let spec = SampleSpec::new(seed ^ (spot as u64).wrapping_mul(0x9e3779b9), samples).unwrap();
        let est = empirical_intersection_measure(&q1, &b1, &q2, &b2, spec).unwrap();
        if !est.within_sigmas(&exact, 4.0) {
            misses.push(format!(
                "spot {spot}: exact {} vs estimate {}",
                to_f64(&exact),
                est.estimate_f64()
            ));
        }
    }
    if misses.len() <= 1 {
        CheckOutcome::pass(
            NAME,
            format!("{spots} spot checks, {} outside 4 sigma (1 allowed)", misses.len()),
        )
    } else {
        CheckOutcome::fail(NAME, misses.join("; "))
    }
}

/// Non-parallel pairs in the plane factor exactly: the intersection measure
/// equals `|B1| |B2|` for every vector pair and every sampled ball pair.
pub fn check_nonparallel_independence(
    coord_bound: i64,
    ball_pairs: usize,
    seed: u64,
) -> CheckOutcome {
    const NAME: &str = "nonparallel pairs multiply measures exactly";
    let mut rng = StdRng::seed_from_u64(seed);
    let mut vectors = Vec::new();
    for a in -coord_bound..=coord_bound {
        for b in -coord_bound..=coord_bound {
            if a != 0 || b != 0 {
                vectors.push(LatticeVector::new(vec![a, b]).unwrap());
            }
        }
    }
    let mut checked = 0u64;
    for _ in 0..ball_pairs {
        let b1 = rand_ball(&mut rng, 1);
        let b2 = rand_ball(&mut rng, 1);
        let product = b1.measure() * b2.measure();
        for q1 in &vectors {
            for q2 in &vectors {
                if q1.is_parallel(q2) {
                    continue;
                }
                let got = intersect_measure(q1, &b1, q2, &b2).unwrap();
                if got != product {
                    return CheckOutcome::fail(
                        NAME,
                        format!("q1={q1:?} q2={q2:?}: {got} != {product}"),
                    );
                }
                checked += 1;
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{checked} vector pairs over {ball_pairs} ball pairs"))
}

/// Random parallel pairs in dimensions 2 and 3 reduce to the 1-D sweep
/// measure exactly.
pub fn check_parallel_reduction(cases: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "parallel pairs reduce to the 1-D measure";
    let mut rng = StdRng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.random_range(2..=3usize);
        let m = rng.random_range(1..=2usize);
        let e = rand_primitive(&mut rng, n, 4);
        let c1 = rng.random_range(1..=8i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        let c2 = rng.random_range(1..=8i64) * if rng.random_bool(0.5) { 1 } else { -1 };
        let q1 = LatticeVector::new(e.coords().iter().map(|c| c * c1).collect()).unwrap();
        let q2 = LatticeVector::new(e.coords().iter().map(|c| c * c2).collect()).unwrap();
        let b1 = rand_ball(&mut rng, m);
        let b2 = rand_ball(&mut rng, m);
        let got = intersect_measure(&q1, &b1, &q2, &b2).unwrap();
        let mut want = Rational::one();
        for j in 0..m {
            want *= intersect_measure_1d_sweep(c1, &b1.coord(j), c2, &b2.coord(j)).unwrap();
        }
        if got != want {
            return CheckOutcome::fail(
                NAME,
                format!("case {case}: n={n} m={m} c=({c1},{c2}) {got} != {want}"),
            );
        }
    }
    CheckOutcome::pass(NAME, format!("{cases} random parallel pairs in Z^2 and Z^3"))
}

/// Dilation inequality: left side at rescaled radii never exceeds the
/// right side, for exhaustive norm pairs and random balls (`m = 1`).
pub fn check_dilation(norm_bound: u64, ball_pairs: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "dilation inequality lhs <= rhs";
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checked = 0u64;
    for _ in 0..ball_pairs {
        let b1 = rand_ball(&mut rng, 1);
        let b2 = rand_ball(&mut rng, 1);
        for n1 in 1..=norm_bound {
            for n2 in n1..=norm_bound {
                for sign in [1i64, -1] {
                    let q1 = LatticeVector::new(vec![n1 as i64]).unwrap();
                    let q2 = LatticeVector::new(vec![sign * n2 as i64]).unwrap();
                    let (lhs, rhs) = dilate_gap(&q1, &b1, &q2, &b2).unwrap();
                    if lhs > rhs {
                        return CheckOutcome::fail(
                            NAME,
                            format!("n1={n1} n2={sign}{n2}: lhs {lhs} > rhs {rhs}"),
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{checked} norm pairs, zero violations"))
}

/// Overlap bound: the exact 1-D intersection never exceeds
/// `2^m (|B1||B2| + |B2| |q|^-m gcd(r,q)^m)`.
pub fn check_overlap_bound(scalar_bound: i64, ball_pairs: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "overlap bound dominates the intersection";
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checked = 0u64;
    for _ in 0..ball_pairs {
        let m = rng.random_range(1..=2usize);
        let b1 = rand_ball(&mut rng, m);
        let b2 = rand_ball(&mut rng, m);
        for r in 1..=scalar_bound {
            for q in 1..=scalar_bound {
                for sign in [1i64, -1] {
                    let lhs = intersect_measure_parallel(
                        r as u64,
                        &b1,
                        sign as i8,
                        q as u64,
                        &b2,
                    )
                    .unwrap();
                    let rhs = overlap_bound(r, &b1, sign * q, &b2).unwrap();
                    if lhs > rhs {
                        return CheckOutcome::fail(
                            NAME,
                            format!("r={r} q={} m={m}: {lhs} > {rhs}", sign * q),
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    CheckOutcome::pass(NAME, format!("{checked} scalar pairs, zero violations"))
}

/// Mixing bound: for a ball of radius 1/8 and a union of arcs of component
/// radius rho with total length at least 1/8, the defect ratio
/// `|A ∩ U| / (|A||U|)` is at least 1/4 once `|q| >= 2/rho`.
pub fn check_mixing(cases: usize, seed: u64) -> CheckOutcome {
    const NAME: &str = "mixing defect at least 1/4 for large q";
    let mut rng = StdRng::seed_from_u64(seed);
    let quarter = rat(1, 4);
    let mut checked = 0u64;
    for case in 0..cases {
        let b = Ball::arc(rand_center(&mut rng), rat(1, 8)).unwrap();
        // arcs of equal component radius rho, enough of them to cover 1/8
        let rho_inv = rng.random_range(8..=32i64);
        let rho = rat(1, rho_inv);
        let arcs_needed = (rho_inv / 16).max(2) as usize;
        let count = rng.random_range(arcs_needed..=arcs_needed + 2);
        let mut u = IntervalUnion::empty();
        for _ in 0..count {
            let arc = Ball::arc(rand_center(&mut rng), rho.clone()).unwrap();
            u = u.union(&IntervalUnion::from_ball(&arc).unwrap());
        }
        if u.length() < rat(1, 8) {
            continue;
        }
        let q0 = 2 * rho_inv;
        for q in [q0, q0 + 1, q0 + 7, 2 * q0 + 3, 4 * q0] {
            let defect = mixing_defect_1d(q, &b, &u).unwrap();
            if defect < quarter {
                return CheckOutcome::fail(
                    NAME,
                    format!("case {case}: q={q} rho=1/{rho_inv} defect {defect} < 1/4"),
                );
            }
            checked += 1;
        }
    }
    CheckOutcome::pass(NAME, format!("{checked} (U, q) pairs, zero violations"))
}

/// gcd power sums: the divisor-sum formula equals the direct sum for every
/// `q <= q_max` and `m <= 3`, and the quadratic sum obeys `<= q * sigma(q)`.
pub fn check_gcd_sums(q_max: u64) -> CheckOutcome {
    const NAME: &str = "gcd power sums: formula, direct sum, and bound";
    for q in 1..=q_max {
        for m in 1..=3u32 {
            let a = gcd_power_sum(q, m).unwrap();
            let b = gcd_power_sum_direct(q, m).unwrap();
            if a != b {
                return CheckOutcome::fail(NAME, format!("q={q} m={m}: {a} != {b}"));
            }
        }
        let quad = gcd_power_sum(q, 2).unwrap();
        let bound = uint(q) * uint(sigma(q));
        if Rational::from_integer(quad.clone()) > bound {
            return CheckOutcome::fail(NAME, format!("q={q}: sum gcd^2 = {quad} > q*sigma(q)"));
        }
    }
    CheckOutcome::pass(NAME, format!("all q <= {q_max}, m <= 3"))
}

/// Boundedness surrogate for the pair-sum ratios: on the dyadic schedule,
/// `P/S^2` stays below `factor` times its value at the first entry, for the
/// three flagship configurations with `|B_q| = 1/q`.
pub fn check_ratio_grid(schedule: &[u64], factor: &Rational) -> Result<CheckOutcome> {
    const NAME: &str = "pair-sum ratio P/S^2 stays bounded on the grid";
    let configs: [(u32, u32, u32, Rational, u32); 3] = [
        (1, 1, 2, int(1), 128),
        (1, 2, 1, rat(1, 2), 64),
        (1, 3, 0, rat(1, 3), 64),
    ];
    let mut detail = Vec::new();
    for (n, m, w, tau, bits) in configs {
        let seq = BallSequence::power_log(
            m,
            rat(1, 2),
            tau.clone(),
            Rational::zero(),
            vec![Rational::zero(); m as usize],
        )?;
        let reports = pair_sum_schedule(&seq, n, schedule, w, LatticeMode::Full, bits)?;
        let base = reports[0].inverse_ratio()?;
        let cap = base.hi() * factor;
        for rep in &reports {
            let ratio = rep.inverse_ratio()?;
            if ratio.lo() > &cap {
                return Ok(CheckOutcome::fail(
                    NAME,
                    format!(
                        "(n,m,w)=({n},{m},{w}) Q={}: ratio {} exceeds {} x base {}",
                        rep.q_max,
                        ratio.mid_f64(),
                        to_f64(factor),
                        base.mid_f64()
                    ),
                ));
            }
        }
        detail.push(format!(
            "({n},{m}) w={w}: base {:.6}, last {:.6}",
            base.mid_f64(),
            reports.last().unwrap().inverse_ratio()?.mid_f64()
        ));
    }
    Ok(CheckOutcome::pass(NAME, detail.join("; ")))
}

/// Independence inheritance under lifting: for the (1,1) sequence with
/// `|B_q| = 1/(2q)` lifted by `k = 2` to (3,1), the lifted pair sum at
/// `w = 0` satisfies `P(Q) <= C * S(Q)^2` with `C` frozen at `freeze_q`,
/// and the nonparallel part never exceeds `S^2`.
pub fn check_inheritance(schedule: &[u64], freeze_q: u64) -> Result<CheckOutcome> {
    const NAME: &str = "lifted pair sum bounded with frozen constant";
    let seq = BallSequence::power(1, rat(1, 4), int(1))?;
    let lifted = seq.lifted(2);
    let reports = pair_sum_schedule(&lifted, 3, schedule, 0, LatticeMode::Full, 128)?;
    let mut frozen: Option<Rational> = None;
    for rep in &reports {
        let s2 = rep.s.pow_int(2);
        if rep.nonparallel_part.lo() > s2.hi() {
            return Ok(CheckOutcome::fail(
                NAME,
                format!("Q={}: nonparallel part exceeds S^2", rep.q_max),
            ));
        }
        let ratio = rep.inverse_ratio()?;
        match &frozen {
            None => {
                if rep.q_max >= freeze_q {
                    frozen = Some(ratio.hi().clone());
                }
            }
            Some(c) => {
                if ratio.lo() > c {
                    return Ok(CheckOutcome::fail(
                        NAME,
                        format!(
                            "Q={}: ratio {} exceeds constant {} frozen at Q={}",
                            rep.q_max,
                            ratio.mid_f64(),
                            to_f64(c),
                            freeze_q
                        ),
                    ));
                }
            }
        }
        // base-level inheritance: the lifted parallel part is controlled by
        // the base pair sum (finite ratio)
    }
    let _ = inheritance_compare(&seq, 1, 2, *schedule.last().unwrap(), 0, LatticeMode::Full)?;
    Ok(CheckOutcome::pass(
        NAME,
        format!(
            "constant {:.6} frozen at Q={freeze_q} holds through Q={}",
            to_f64(frozen.as_ref().unwrap()),
            schedule.last().unwrap()
        ),
    ))
}

/// Desk-scale dichotomy: the divergent family's hit fraction at threshold
/// `k` reaches `min_fraction` by the last schedule entry, and the convergent
/// family's mean hit count over the tail window matches the exact
/// expectation within three standard errors.
pub fn check_dichotomy(
    samples: u64,
    schedule: &[u64],
    k: u64,
    min_fraction: &Rational,
    seed: u64,
) -> Result<CheckOutcome> {
    const NAME: &str = "divergent family fills up, convergent family matches expectation";
    let divergent = BallSequence::power(1, rat(1, 4), int(2))?;
    let convergent =
        BallSequence::power_log(1, rat(1, 4), int(2), int(2), vec![Rational::zero()])?;
    let spec = SampleSpec::new(seed, samples)?;
    let hists = estimate_limsup_measures(
        &[&divergent, &convergent],
        2,
        schedule,
        &[k],
        LatticeMode::Full,
        spec,
    )?;
    let frac = hists[0].last().unwrap().fraction_at_least(k);
    if &frac < min_fraction {
        return Ok(CheckOutcome::fail(
            NAME,
            format!("divergent fraction {} below {}", to_f64(&frac), to_f64(min_fraction)),
        ));
    }
    // convergent side: mean hits in (q_lo, q_hi] vs the exact expectation
    let conv = &hists[1];
    let (first, last) = (conv.first().unwrap(), conv.last().unwrap());
    let window: Vec<f64> = last
        .counts
        .iter()
        .zip(&first.counts)
        .map(|(&a, &b)| (a - b) as f64)
        .collect();
    let mean = window.iter().sum::<f64>() / samples as f64;
    let var = window.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
    let stderr = (var / samples as f64).sqrt();
    let expect = expected_hit_count(&convergent, 2, first.q_max, last.q_max, LatticeMode::Full, 96)?
        .mid_f64();
    if (mean - expect).abs() > 3.0 * stderr.max(1e-12) {
        return Ok(CheckOutcome::fail(
            NAME,
            format!("convergent mean {mean:.4} vs expectation {expect:.4} (3se = {:.4})", 3.0 * stderr),
        ));
    }
    Ok(CheckOutcome::pass(
        NAME,
        format!(
            "divergent fraction {:.4}; convergent mean {mean:.4} vs expectation {expect:.4}",
            to_f64(&frac)
        ),
    ))
}

// ---------------------------------------------------------------------------
// suite assembly (quick-scale parameters; acceptance runs the full scales)

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Lemmas => vec![
            check_sweep_oracle(60, 20, 101),
            check_mc_spot_checks(8, 40_000, 102),
            check_nonparallel_independence(4, 5, 103),
            check_parallel_reduction(80, 104),
            check_dilation(12, 40, 105),
            check_overlap_bound(16, 60, 106),
            check_mixing(25, 107),
            check_gcd_sums(2_000),
        ],
        Suite::Basecase => vec![check_ratio_grid(&[16, 32, 64, 128], &rat(3, 2))?],
        Suite::Inheritance => vec![check_inheritance(&[16, 32, 64], 32)?],
        Suite::Dichotomy => vec![check_dichotomy(400, &[128, 512], 5, &rat(4, 5), 108)?],
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Lemmas, Suite::Basecase, Suite::Inheritance, Suite::Dichotomy] {
                all.extend(run_suite(s)?.checks);
            }
            all
        }
    };
    Ok(SuiteReport { suite, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Lemmas, Suite::Basecase, Suite::Inheritance, Suite::Dichotomy, Suite::All]
        {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_lemma_checks_pass() {
        for check in [
            check_sweep_oracle(15, 10, 1),
            check_nonparallel_independence(3, 2, 2),
            check_parallel_reduction(20, 3),
            check_dilation(6, 10, 4),
            check_overlap_bound(8, 15, 5),
            check_mixing(8, 6),
            check_gcd_sums(300),
        ] {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn quick_mc_spot_checks_pass() {
        let check = check_mc_spot_checks(4, 20_000, 7);
        assert!(check.passed, "{}: {}", check.name, check.detail);
    }

    #[test]
    fn quick_grid_suites_pass() {
        let grid = check_ratio_grid(&[16, 32, 64], &rat(3, 2)).unwrap();
        assert!(grid.passed, "{}: {}", grid.name, grid.detail);
        let inherit = check_inheritance(&[16, 32, 64], 32).unwrap();
        assert!(inherit.passed, "{}: {}", inherit.name, inherit.detail);
    }

    #[test]
    fn quick_dichotomy_passes() {
        let check = check_dichotomy(200, &[64, 256], 5, &rat(3, 4), 9).unwrap();
        assert!(check.passed, "{}: {}", check.name, check.detail);
    }
}
