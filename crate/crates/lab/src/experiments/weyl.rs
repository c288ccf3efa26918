use folner_core::averaging::VectorSequence;
use folner_core::group::{FolnerFamily, FolnerRule, GroupDescriptor, GroupSelfMap};
use folner_core::vdc::{check_vdc, VdcMode, VdcParams};
use num_complex::Complex64;

use super::{angle, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{float_cell, ExperimentReport, Table};

/// van der Corput check of `u(n) = e(θ a(n))` on `Z` with interval
/// averages.
pub fn run_weyl_vdc(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let desc = GroupDescriptor::IntegerLine;
    let theta = angle(config, "theta")?;
    let map = GroupSelfMap::parse(&desc, config.raw("map")?)?;
    let mode: VdcMode = config.raw("mode")?.parse()?;
    let checkpoints: Vec<u64> = config.list("checkpoints")?;
    let params = VdcParams {
        shift_radius: config.get("radius")?,
        window: Some(config.get("window")?),
        hypothesis_threshold: config.get("hypothesis_threshold")?,
        conclusion_threshold: config.get("conclusion_threshold")?,
        max_last_block_share: config.get("max_last_block_share")?,
        refute_fraction: config.get("refute_fraction")?,
        checkpoints,
        ..VdcParams::default()
    };
    let top = *params.checkpoints.iter().max().ok_or_else(|| config_err!("no checkpoints"))?;
    within_budget(config, "interval", top as u128)?;
    let family = FolnerFamily::new(FolnerRule::Interval).with_budget(config.budget()?);
    let u: VectorSequence<Complex64> = VectorSequence::phase(desc, vec![theta], map);
    let v = check_vdc(&u, &family, mode, &params)?;

    let mut shifts = Table::new("shifts", &["h", "tail_sup", "exactness"]);
    for (h, t) in v.shifts.iter().zip(&v.tail_sups) {
        shifts.push(vec![h.to_string(), float_cell(*t), "float".into()]);
    }
    let mut shells = Table::new("shells", &["radius", "partial_sum_sq", "exactness"]);
    for (r, s) in v.partial_sums.iter().enumerate() {
        shells.push(vec![(r + 1).to_string(), float_cell(*s), "float".into()]);
    }
    let mut trace = Table::new("conclusion_trace", &["N", "norm_average", "exactness"]);
    for (n, x) in &v.conclusion_trace {
        trace.push(vec![n.to_string(), float_cell(*x), "float".into()]);
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(shifts);
    report.tables.push(shells);
    report.tables.push(trace);
    report.add_verdict("mode", v.mode);
    report.add_verdict("per_shift_max_tail_sup", float_cell(v.per_shift));
    report.add_verdict("cesaro_mean_tail_sup", float_cell(v.cesaro));
    report.add_verdict("strong_outer_shell_max", float_cell(v.strong));
    report.add_verdict("last_block_share", float_cell(v.last_block_share));
    report.add_verdict("decay_exponent", v.decay_exponent.map_or("none".into(), float_cell));
    report.add_verdict("hypothesis", v.hypothesis);
    report.add_verdict("conclusion", v.conclusion);
    Ok(report)
}
