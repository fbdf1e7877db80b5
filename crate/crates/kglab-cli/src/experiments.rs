//! Experiment dispatch: turn a parsed config into a result table.

use std::collections::BTreeMap;

use kglab::arith::{gcd_power_sum, gcd_power_sum_direct};
use kglab::montecarlo::{estimate_limsup_measure, SampleSpec};
use kglab::qia::{pair_sum_schedule, trend_verdict, BallSequence};
use kglab::rational::{to_f64, Rational};
use kglab::torus::{intersect_measure, Ball};
use kglab::transfer::{
    dichotomy_predict, hausdorff_series_classify, series_classify, theta_transform,
    DimensionFunction, SeriesVerdict, Verdict,
};
use kglab::verify::{run_suite, Suite};
use kglab::{Enclosure, LatticeVector};
use num_traits::Zero;

use crate::config::{CliError, CliResult, Config, ExperimentKind};
use crate::table::{enclosure_cells, float_of, Cell, Table};

/// A finished experiment: the result table, the widest enclosure seen per
/// column (recorded in the manifest), and free-form summary fields.
pub struct RunOutput {
    pub table: Table,
    pub widths: BTreeMap<&'static str, f64>,
    pub summary: BTreeMap<&'static str, String>,
}

impl RunOutput {
    fn new(table: Table) -> RunOutput {
        RunOutput { table, widths: BTreeMap::new(), summary: BTreeMap::new() }
    }

    fn record_width(&mut self, column: &'static str, e: &Enclosure) {
        let w = to_f64(&e.width());
        let entry = self.widths.entry(column).or_insert(0.0);
        if w > *entry {
            *entry = w;
        }
    }
}

/// The ball sequence described by the `radius_*`, `center`, `m`, and `lift`
/// keys.
pub fn ball_sequence(cfg: &Config) -> CliResult<BallSequence> {
    let m = cfg.u32_key("m")?;
    let centers = match cfg.string_opt("center") {
        Some(_) => cfg.rational_list("center")?,
        None => vec![Rational::zero(); m as usize],
    };
    if centers.len() != m as usize {
        return Err(CliError::Validation(
            "center must list exactly m coordinates".into(),
        ));
    }
    let c = cfg.rational_key("radius_c")?;
    let tau = cfg.rational_key("radius_tau")?;
    let sigma = cfg.rational_default("radius_sigma", Rational::zero())?;
    let mut seq = BallSequence::power_log(m, c, tau, sigma, centers)?;
    if let Some(k) = cfg.u64_opt("lift")? {
        seq = seq.lifted(k as u32);
    }
    Ok(seq)
}

fn lattice_vector(cfg: &Config, key: &str) -> CliResult<LatticeVector> {
    Ok(LatticeVector::new(cfg.i64_list(key)?)?)
}

fn ball(cfg: &Config, center_key: &str, radius_key: &str) -> CliResult<Ball> {
    Ok(Ball::new(
        cfg.rational_list(center_key)?,
        cfg.rational_key(radius_key)?,
    )?)
}

pub fn run_experiment(cfg: &Config, seed_override: Option<u64>) -> CliResult<RunOutput> {
    let kind = cfg.kind()?;
    let out = match kind {
        ExperimentKind::Measure => run_measure(cfg),
        ExperimentKind::Pairsum => run_pairsum(cfg),
        ExperimentKind::Qia => run_qia(cfg),
        ExperimentKind::Inherit => run_inherit(cfg),
        ExperimentKind::Simulate => run_simulate(cfg, seed_override),
        ExperimentKind::Gcdsum => run_gcdsum(cfg),
        ExperimentKind::Transfer => run_transfer(cfg),
        ExperimentKind::Verify => run_verify(cfg),
    }?;
    cfg.finish()?;
    Ok(out)
}

fn run_measure(cfg: &Config) -> CliResult<RunOutput> {
    let q1 = lattice_vector(cfg, "q1")?;
    let b1 = ball(cfg, "ball1_center", "ball1_radius")?;
    let mut table = Table::new(vec!["set", "measure", "measure_float"]);
    match cfg.string_opt("q2") {
        None => {
            let m = intersect_measure(&q1, &b1, &q1, &b1)?;
            table.push(vec![Cell::Text("A(q1,B1)".into()), Cell::exact(&m), float_of(&m)]);
        }
        Some(_) => {
            let q2 = lattice_vector(cfg, "q2")?;
            let b2 = ball(cfg, "ball2_center", "ball2_radius")?;
            let m = intersect_measure(&q1, &b1, &q2, &b2)?;
            table.push(vec![
                Cell::Text("A(q1,B1) ∩ A(q2,B2)".into()),
                Cell::exact(&m),
                float_of(&m),
            ]);
        }
    }
    Ok(RunOutput::new(table))
}

fn pairsum_rows(cfg: &Config) -> CliResult<(RunOutput, Vec<(u64, Enclosure)>)> {
    let seq = ball_sequence(cfg)?;
    let n = cfg.u32_key("n")?;
    let w = cfg.u32_key("w")?;
    let bits = cfg.u32_default("bits", 128)?;
    let schedule = cfg.schedule()?;
    let mode = cfg.mode()?;
    let reports = pair_sum_schedule(&seq, n, &schedule, w, mode, bits)?;
    let mut table = Table::new(vec![
        "q",
        "s_lo",
        "s_hi",
        "s_float",
        "p_lo",
        "p_hi",
        "p_float",
        "parallel_lo",
        "parallel_hi",
        "nonparallel_lo",
        "nonparallel_hi",
        "ratio_lo",
        "ratio_hi",
        "ratio_float",
    ]);
    let mut out = RunOutput::new(Table::new(vec![]));
    let mut trajectory = Vec::new();
    for rep in &reports {
        let ratio = rep.ratio()?;
        let [s_lo, s_hi, s_f] = enclosure_cells(&rep.s);
        let [p_lo, p_hi, p_f] = enclosure_cells(&rep.p);
        let [r_lo, r_hi, r_f] = enclosure_cells(&ratio);
        table.push(vec![
            Cell::Int(rep.q_max as i64),
            s_lo,
            s_hi,
            s_f,
            p_lo,
            p_hi,
            p_f,
            Cell::exact(rep.parallel_part.lo()),
            Cell::exact(rep.parallel_part.hi()),
            Cell::exact(rep.nonparallel_part.lo()),
            Cell::exact(rep.nonparallel_part.hi()),
            r_lo,
            r_hi,
            r_f,
        ]);
        out.record_width("s", &rep.s);
        out.record_width("p", &rep.p);
        out.record_width("ratio", &ratio);
        trajectory.push((rep.q_max, ratio));
    }
    out.table = table;
    Ok((out, trajectory))
}

fn run_pairsum(cfg: &Config) -> CliResult<RunOutput> {
    Ok(pairsum_rows(cfg)?.0)
}

fn run_qia(cfg: &Config) -> CliResult<RunOutput> {
    let (mut out, trajectory) = pairsum_rows(cfg)?;
    let trend = trend_verdict(&trajectory);
    out.summary.insert("trend", format!("{trend:?}"));
    Ok(out)
}

fn run_inherit(cfg: &Config) -> CliResult<RunOutput> {
    let seq = ball_sequence(cfg)?;
    let n = cfg.u32_key("n")?;
    let k = cfg.u32_key("k")?;
    let w = cfg.u32_key("w")?;
    let bits = cfg.u32_default("bits", 128)?;
    let schedule = cfg.schedule()?;
    let mode = cfg.mode()?;
    let base = pair_sum_schedule(&seq, n, &schedule, w, mode, bits)?;
    let lifted_seq = seq.lifted(k);
    let lifted = pair_sum_schedule(&lifted_seq, n + k, &schedule, w.saturating_sub(k), mode, bits)?;
    let mut table = Table::new(vec![
        "q",
        "base_p_lo",
        "base_p_hi",
        "lifted_parallel_lo",
        "lifted_parallel_hi",
        "inherit_ratio_lo",
        "inherit_ratio_hi",
        "inherit_ratio_float",
    ]);
    let mut out = RunOutput::new(Table::new(vec![]));
    for (b, l) in base.iter().zip(&lifted) {
        let ratio = l.parallel_part.div(&b.p);
        let [r_lo, r_hi, r_f] = enclosure_cells(&ratio);
        table.push(vec![
            Cell::Int(b.q_max as i64),
            Cell::exact(b.p.lo()),
            Cell::exact(b.p.hi()),
            Cell::exact(l.parallel_part.lo()),
            Cell::exact(l.parallel_part.hi()),
            r_lo,
            r_hi,
            r_f,
        ]);
        out.record_width("inherit_ratio", &ratio);
    }
    out.table = table;
    Ok(out)
}

fn run_simulate(cfg: &Config, seed_override: Option<u64>) -> CliResult<RunOutput> {
    let seq = ball_sequence(cfg)?;
    let n = cfg.u32_key("n")?;
    let schedule = cfg.schedule()?;
    let mode = cfg.mode()?;
    let seed = seed_override.unwrap_or(cfg.u64_key("seed")?);
    let samples = cfg.u64_key("samples")?;
    let threshold = cfg.u64_opt("threshold")?.unwrap_or(5);
    let spec = SampleSpec::new(seed, samples)?;
    let hists = estimate_limsup_measure(&seq, n, &schedule, &[threshold], mode, spec)?;
    let mut table = Table::new(vec![
        "q",
        "threshold",
        "fraction",
        "fraction_float",
        "ci_half_width",
        "mean_hits",
        "mean_hits_float",
    ]);
    for h in &hists {
        let frac = h.fraction_at_least(threshold);
        let mean = h.mean_hits();
        table.push(vec![
            Cell::Int(h.q_max as i64),
            Cell::Int(threshold as i64),
            Cell::exact(&frac),
            float_of(&frac),
            Cell::Float(h.ci_half_width(threshold)),
            Cell::exact(&mean),
            float_of(&mean),
        ]);
    }
    let mut out = RunOutput::new(table);
    out.summary.insert("seed", seed.to_string());
    Ok(out)
}

fn run_gcdsum(cfg: &Config) -> CliResult<RunOutput> {
    let q_max = cfg.u64_key("q_max")?;
    let m = cfg.u32_key("m")?;
    if q_max == 0 || m == 0 {
        return Err(CliError::Validation("gcdsum needs q_max >= 1 and m >= 1".into()));
    }
    let mut table = Table::new(vec!["q", "direct_sum", "divisor_formula", "equal"]);
    for q in 1..=q_max {
        let direct = gcd_power_sum_direct(q, m)?;
        let formula = gcd_power_sum(q, m)?;
        let equal = direct == formula;
        table.push(vec![
            Cell::Int(q as i64),
            Cell::Text(direct.to_string()),
            Cell::Text(formula.to_string()),
            Cell::Bool(equal),
        ]);
    }
    Ok(RunOutput::new(table))
}

fn verdict_rows(table: &mut Table, label: &str, v: &SeriesVerdict) {
    table.push(vec![
        Cell::Text(format!("{label}_verdict")),
        Cell::Text(format!("{:?}", v.verdict)),
    ]);
    if let Some(p) = &v.power_exponent {
        table.push(vec![Cell::Text(format!("{label}_power_exponent")), Cell::exact(p)]);
    }
    if let Some(l) = &v.log_exponent {
        table.push(vec![Cell::Text(format!("{label}_log_exponent")), Cell::exact(l)]);
    }
}

fn run_transfer(cfg: &Config) -> CliResult<RunOutput> {
    let seq = ball_sequence(cfg)?;
    let n = cfg.u32_key("n")?;
    let m = seq.m;
    let mut table = Table::new(vec!["item", "value"]);
    let series = series_classify(&seq, n, m)?;
    verdict_rows(&mut table, "series", &series);
    let eps = cfg.rational_opt("epsilon")?;
    let prediction = dichotomy_predict(&seq, n, m, eps.as_ref())?;
    table.push(vec![
        Cell::Text("prediction".into()),
        Cell::Text(format!("{:?}", prediction.prediction)),
    ]);
    if let Some(d) = &prediction.damped_series {
        verdict_rows(&mut table, "damped", d);
    }
    table.push(vec![Cell::Text("note".into()), Cell::Text(prediction.note.into())]);
    if let Some(s) = cfg.rational_opt("dim_s")? {
        let t = cfg.rational_default("dim_t", Rational::zero())?;
        let f = DimensionFunction::power_log(s, t)?;
        let hausdorff = hausdorff_series_classify(&seq, &f, n, m)?;
        verdict_rows(&mut table, "hausdorff", &hausdorff);
        if f.t().is_zero() {
            let theta = theta_transform(&seq, &f, n, m)?;
            if let kglab::qia::RadiusRule::PowerLog { c, tau, sigma } = &theta.rule {
                table.push(vec![Cell::Text("theta_c".into()), Cell::exact(c)]);
                table.push(vec![Cell::Text("theta_tau".into()), Cell::exact(tau)]);
                table.push(vec![Cell::Text("theta_sigma".into()), Cell::exact(sigma)]);
            }
        }
    }
    let mut out = RunOutput::new(table);
    out.summary.insert(
        "series_diverges",
        (series.verdict == Verdict::Diverges).to_string(),
    );
    Ok(out)
}

fn run_verify(cfg: &Config) -> CliResult<RunOutput> {
    let suite: Suite = cfg
        .string_key("suite")?
        .parse()
        .map_err(|e: kglab::KgError| CliError::Validation(e.to_string()))?;
    let report = run_suite(suite)?;
    let mut table = Table::new(vec!["check", "passed", "detail"]);
    for c in &report.checks {
        table.push(vec![
            Cell::Text(c.name.into()),
            Cell::Bool(c.passed),
            Cell::Text(c.detail.clone()),
        ]);
    }
    let mut out = RunOutput::new(table);
    out.summary.insert("all_passed", report.all_passed().to_string());
    Ok(out)
}
