//! Plot-ready series derived from a finished results directory.
//!
//! Every view emits a small CSV: simple x/y series for ratio and fraction
//! trajectories, per-block partial sums, and the exact geometry of the
//! resonant sets (arc endpoints on the circle, stripe segments in the unit
//! square) for external plotting.

use kglab::qia::dyadic_blocks;
use kglab::rational::{to_f64, Rational};
use kglab::torus::{preimage_1d, Ball};
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::config::{CliError, CliResult, Config};
use crate::experiments::ball_sequence;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    RatioVsQ,
    FractionVsQ,
    Blocks,
    StripeArcs,
    StripeSegments,
}

impl View {
    pub fn parse(s: &str) -> CliResult<View> {
        Ok(match s {
            "ratio-vs-q" => View::RatioVsQ,
            "fraction-vs-q" => View::FractionVsQ,
            "blocks" => View::Blocks,
            "stripes-arcs" => View::StripeArcs,
            "stripes-segments" => View::StripeSegments,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown view '{other}' (expected ratio-vs-q, fraction-vs-q, \
                     blocks, stripes-arcs, or stripes-segments)"
                )))
            }
        })
    }
}

fn row_float(row: &Value, key: &str) -> CliResult<f64> {
    row.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| CliError::Validation(format!("results rows lack a numeric '{key}' column")))
}

fn row_int(row: &Value, key: &str) -> CliResult<i64> {
    row.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| CliError::Validation(format!("results rows lack an integer '{key}' column")))
}

/// x = Q, y = S(Q)^2 / P(Q, w) from a pairsum/qia results table.
fn ratio_vs_q(rows: &[Value]) -> CliResult<Table> {
    let mut t = Table::new(vec!["q", "ratio"]);
    for row in rows {
        t.push(vec![
            Cell::Int(row_int(row, "q")?),
            Cell::Float(row_float(row, "ratio_float")?),
        ]);
    }
    Ok(t)
}

/// x = Q, y = sampled limsup fraction, with its confidence half-width.
fn fraction_vs_q(rows: &[Value]) -> CliResult<Table> {
    let mut t = Table::new(vec!["q", "fraction", "ci_half_width"]);
    for row in rows {
        t.push(vec![
            Cell::Int(row_int(row, "q")?),
            Cell::Float(row_float(row, "fraction_float")?),
            Cell::Float(row_float(row, "ci_half_width")?),
        ]);
    }
    Ok(t)
}

/// Per-dyadic-block partial sums of the damped series, recomputed from the
/// configuration echoed in the manifest.
fn blocks(cfg: &Config) -> CliResult<Table> {
    let seq = ball_sequence(cfg)?;
    let n = cfg.u32_key("n")?;
    let q_max = *cfg.schedule()?.last().unwrap();
    let eps = cfg.rational_default("epsilon", Rational::new(1.into(), 4.into()))?;
    let bits = cfg.u32_default("bits", 128)?;
    let mode = cfg.mode()?;
    let sums = dyadic_blocks(&seq, n, q_max, &eps, mode, bits)?;
    let mut t = Table::new(vec!["block", "sum_lo", "sum_hi", "sum_float"]);
    for (l, e) in sums.iter().enumerate() {
        t.push(vec![
            Cell::Int(l as i64),
            Cell::exact(e.lo()),
            Cell::exact(e.hi()),
            Cell::Float(e.mid_f64()),
        ]);
    }
    Ok(t)
}

/// Exact arc endpoints of the circle set {x : qx mod 1 in B}.
fn stripe_arcs(cfg: &Config) -> CliResult<Table> {
    let q = cfg.i64_list("q1")?;
    let [q] = q[..] else {
        return Err(CliError::Validation(
            "stripes-arcs needs a one-dimensional q1".into(),
        ));
    };
    let ball = Ball::new(cfg.rational_list("ball1_center")?, cfg.rational_key("ball1_radius")?)?;
    let union = preimage_1d(q, &ball)?;
    let mut t = Table::new(vec!["arc", "start", "end", "start_float", "end_float"]);
    for (i, (a, b)) in union.arcs().iter().enumerate() {
        t.push(vec![
            Cell::Int(i as i64),
            Cell::exact(a),
            Cell::exact(b),
            Cell::Float(to_f64(a)),
            Cell::Float(to_f64(b)),
        ]);
    }
    Ok(t)
}

/// Intersection points of the line a*x + b*y = t with the unit square,
/// exactly, as the two endpoints of the clipped segment (if any).
fn clip_line_to_square(a: i64, b: i64, t: &Rational) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    let unit = |v: &Rational| !v.is_negative() && *v <= Rational::one();
    let ar = Rational::from_integer(a.into());
    let br = Rational::from_integer(b.into());
    if b != 0 {
        for x in [Rational::zero(), Rational::one()] {
            let y = (t - &ar * &x) / &br;
            if unit(&y) {
                pts.push((x, y));
            }
        }
    }
    if a != 0 {
        for y in [Rational::zero(), Rational::one()] {
            let x = (t - &br * &y) / &ar;
            if unit(&x) {
                pts.push((x, y));
            }
        }
    }
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return None;
    }
    let first = pts.first().unwrap().clone();
    let last = pts.last().unwrap().clone();
    Some((vec![first.0, first.1], vec![last.0, last.1]))
}

/// Center lines of the planar stripes {x in [0,1)^2 : q.x mod 1 in B},
/// clipped to the unit square with exact rational endpoints.
fn stripe_segments(cfg: &Config) -> CliResult<Table> {
    let q = cfg.i64_list("q1")?;
    let [a, b] = q[..] else {
        return Err(CliError::Validation(
            "stripes-segments needs a two-dimensional q1".into(),
        ));
    };
    if a == 0 && b == 0 {
        return Err(CliError::Validation("q1 must be nonzero".into()));
    }
    let centers = cfg.rational_list("ball1_center")?;
    let [center] = &centers[..] else {
        return Err(CliError::Validation(
            "stripes-segments needs a one-dimensional ball1_center".into(),
        ));
    };
    // a*x + b*y over the square spans [min(0,a)+min(0,b), max(0,a)+max(0,b)];
    // one stripe per integer shift k with t = k + center in that span.
    let lo = a.min(0) + b.min(0);
    let hi = a.max(0) + b.max(0);
    let mut t = Table::new(vec!["segment", "x0", "y0", "x1", "y1"]);
    let mut idx = 0i64;
    for k in (lo - 1)..=(hi + 1) {
        let shift = Rational::from_integer(k.into()) + center;
        if let Some((p0, p1)) = clip_line_to_square(a, b, &shift) {
            t.push(vec![
                Cell::Int(idx),
                Cell::exact(&p0[0]),
                Cell::exact(&p0[1]),
                Cell::exact(&p1[0]),
                Cell::exact(&p1[1]),
            ]);
            idx += 1;
        }
    }
    Ok(t)
}

/// Build the requested view from the result rows and the echoed config.
pub fn plot_view(view: View, rows: &[Value], cfg: &Config) -> CliResult<Table> {
    match view {
        View::RatioVsQ => ratio_vs_q(rows),
        View::FractionVsQ => fraction_vs_q(rows),
        View::Blocks => blocks(cfg),
        View::StripeArcs => stripe_arcs(cfg),
        View::StripeSegments => stripe_segments(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kglab::rational::rat;

    #[test]
    fn clips_diagonal_line() {
        let (p0, p1) = clip_line_to_square(1, 1, &rat(1, 1)).unwrap();
        assert_eq!(p0, vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(p1, vec![rat(1, 1), rat(0, 1)]);
    }

    #[test]
    fn misses_far_line() {
        assert!(clip_line_to_square(1, 1, &rat(5, 1)).is_none());
    }

    #[test]
    fn stripe_segment_count_matches_norm() {
        let cfg = Config::parse(
            "version = 1\nq1 = 2, 1\nball1_center = 0\nball1_radius = 1/10\n",
        )
        .unwrap();
        let t = stripe_segments(&cfg).unwrap();
        // 2x + y = k crosses the square interior exactly for k = 1, 2; the
        // k = 0 and k = 3 lines touch only a corner and are dropped.
        assert_eq!(t.rows.len(), 2);
    }
}
