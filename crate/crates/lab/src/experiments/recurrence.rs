use folner_core::group::{GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::rational::{self, Rational};
use folner_core::systems::ArcSet;

use super::{angle, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, float_cell, ExperimentReport, Table};

/// Running averages of `ν(A ∩ T_n A ∩ S_{a(n)} A)` for rotations `T`, `S`
/// of the circle by `α_T`, `α_S` and an arc `A = [a, b)`.
///
/// With the Koopman convention `T_n A = {x : x + nα_T ∈ A} = A − nα_T`.
/// Intersections are exact arc arithmetic; the offsets `nα_T mod 1` are
/// evaluated in `f64`.
pub fn run_recurrence(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let desc = GroupDescriptor::IntegerLine;
    let alpha_t = angle(config, "alpha_t")?;
    let alpha_s = angle(config, "alpha_s")?;
    let map = GroupSelfMap::parse(&desc, config.raw("map")?)?;
    let (lo, hi) = parse_interval(config.raw("interval")?)?;
    let mut checkpoints: Vec<u64> = config.list("checkpoints")?;
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let top = *checkpoints.last().ok_or_else(|| config_err!("no checkpoints"))?;
    if top > 100_000 {
        return Err(config_err!("N must be at most 10^5"));
    }
    within_budget(config, "interval", top as u128)?;

    let len = rational::to_f64(&(&hi - &lo));
    let a = ArcSet::arc(rational::to_f64(&lo), len);
    let mu = a.measure();
    let mut table = Table::new("running_average", &["N", "average", "mu_cubed", "margin", "at_least_mu_cubed", "exactness"]);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut next = 0;
    let mut last = 0.0;
    for n in 1..=top {
        let g = GroupElement::Int(n as i64);
        let an = map.apply(&desc, &g)?;
        let GroupElement::Int(an) = an else { unreachable!() };
        let t = alpha_t.scale(n as i64).to_f64();
        let s = alpha_s.scale(an).to_f64();
        let x = a.intersect(&a.translate(-t)).intersect(&a.translate(-s)).measure();
        // Neumaier step.
        let y = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - y) + x } else { (x - y) + sum };
        sum = y;
        if checkpoints[next] == n {
            let avg = (sum + comp) / n as f64;
            let bound = mu * mu * mu;
            table.push(vec![
                n.to_string(),
                float_cell(avg),
                float_cell(bound),
                float_cell(avg - bound),
                bool_cell(avg >= bound),
                "float".into(),
            ]);
            last = avg;
            next += 1;
        }
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(table);
    report.add_verdict("mu_A", float_cell(mu));
    report.add_verdict("final_average", float_cell(last));
    report.add_verdict("final_at_least_mu_cubed", last >= mu * mu * mu);
    Ok(report)
}

/// `[a,b)` with rational endpoints in `[0, 1]`.
pub fn parse_interval(s: &str) -> Result<(Rational, Rational)> {
    let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(')')).ok_or_else(|| config_err!("interval must look like [a,b)"))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| config_err!("interval must look like [a,b)"))?;
    let a = rational::parse(a.trim())?;
    let b = rational::parse(b.trim())?;
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if a < zero || b > one || b < a {
        return Err(config_err!("interval must satisfy 0 ≤ a ≤ b ≤ 1"));
    }
    Ok((a, b))
}
