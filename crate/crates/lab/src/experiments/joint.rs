use std::collections::BTreeMap;
use std::sync::Arc;

use folner_core::averaging::{average_norm_trace, Space, Vector, VectorSequence};
use folner_core::group::{FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::systems::{Observable, System, SystemKind, TorusRotation};
use folner_core::vdc::fit_decay;
use num_complex::Complex64;

use super::{angle, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{float_cell, ExperimentReport, Table};

/// `‖(1/N) Σ_{n ≤ N} T_n f₀ · S_{a(n)} f₁ − E(f₀|I_T) E(f₁|I_S)‖₂` for two
/// circle rotations acting on the same circle.
///
/// `f0` and `f1` are comma-separated frequency lists; the observable is
/// `Σ_k e(kx)` with unit coefficients, so `0` is the constant `1`.
pub fn run_joint_ergodicity_demo(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let desc = GroupDescriptor::IntegerLine;
    let t = Arc::new(System::new(desc.clone(), SystemKind::TorusRotation(TorusRotation::circle(angle(config, "alpha_t")?)))?);
    let s = Arc::new(System::new(desc.clone(), SystemKind::TorusRotation(TorusRotation::circle(angle(config, "alpha_s")?)))?);
    let map = GroupSelfMap::parse(&desc, config.raw("map")?)?;
    let f0 = modes(config, "f0")?;
    let f1 = modes(config, "f1")?;
    let checkpoints: Vec<u64> = config.list("checkpoints")?;
    let top = checkpoints.iter().copied().max().ok_or_else(|| config_err!("no checkpoints"))?;
    within_budget(config, "interval", top as u128)?;
    let family = FolnerFamily::new(FolnerRule::Interval).with_budget(config.budget()?);

    let expected = t.multiply(&t.invariant_part(&f0)?, &s.invariant_part(&f1)?)?;
    let bound = f0.sup_bound() * f1.sup_bound();
    let rule = {
        let (t, s, f0, f1, map, desc, e) = (t.clone(), s.clone(), f0.clone(), f1.clone(), map.clone(), desc.clone(), expected.clone());
        move |g: &GroupElement, centered: bool| -> folner_core::Result<Vector<Complex64>> {
            let ag = map.apply(&desc, g)?;
            let prod = t.multiply(&t.act(g, &f0)?, &s.act(&ag, &f1)?)?;
            Ok(Vector::Function(if centered { prod.sub(&e)? } else { prod }))
        }
    };
    let space = Space::Functions(t.clone());
    let r1 = rule.clone();
    let raw = VectorSequence::explicit(desc.clone(), space.clone(), bound, move |g: &GroupElement| r1(g, false));
    let dev = VectorSequence::explicit(desc, space, bound + expected.sup_bound(), move |g: &GroupElement| rule(g, true));
    let norms = average_norm_trace(&raw, &family, &checkpoints)?;
    let devs = average_norm_trace(&dev, &family, &checkpoints)?;

    let mut table = Table::new("trace", &["N", "norm_average", "deviation", "exactness"]);
    for ((n, a), d) in checkpoints.iter().zip(&norms).zip(&devs) {
        table.push(vec![n.to_string(), float_cell(*a), float_cell(*d), "float".into()]);
    }
    let trace: Vec<(u64, f64)> = checkpoints.iter().copied().zip(devs.iter().copied()).collect();
    let mut report = ExperimentReport::new(config);
    report.tables.push(table);
    report.add_verdict("expected_product_norm", float_cell(t.inner(&expected, &expected)?.re.sqrt()));
    report.add_verdict("final_deviation", float_cell(*devs.last().unwrap_or(&0.0)));
    report.add_verdict("deviation_decay_exponent", fit_decay(&trace).map_or("none".into(), float_cell));
    Ok(report)
}

fn modes(config: &ExperimentConfig, key: &str) -> Result<Observable<Complex64>> {
    let ks: Vec<i64> = config.list(key)?;
    if ks.is_empty() {
        return Err(config_err!("{key} needs at least one frequency"));
    }
    let mut m = BTreeMap::new();
    for k in ks {
        *m.entry(vec![k]).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(1.0, 0.0);
    }
    Ok(Observable::Torus(m))
}
