use std::sync::Arc;

use folner_core::averaging::VectorSequence;
use folner_core::group::{FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::rational::{self, Rational};
use folner_core::systems::{centered_coordinate, Cylinder, Observable, System, SystemKind};
use folner_core::vdc::{bernoulli_weighted_norm_sq, weighted_average_trace};
use folner_core::{Coefficient, Scalar};
use num_complex::Complex64;

use super::{angle, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, float_cell, ExperimentReport, Table};

/// Disjointness of a mean-zero Bernoulli orbit from an eigen-weight
/// `w(n) = e(nθ)`: `‖(1/N) Σ_{n ≤ N} w(n) T_n f‖²` computed exactly from
/// the finite correlation support of `f` and compared with `2 γ(0) / N`.
///
/// Case `single`: `f = 1[x_0 = 0] − p_0` with `θ = theta_single`.
/// Case `pair`: `f = 1[x_0 = 0, x_1 = 1] − p_0 p_1` with `θ = theta_pair`.
pub fn run_bernoulli_disjointness(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let desc = GroupDescriptor::IntegerLine;
    let system = Arc::new(System::parse(&desc, config.raw("system")?)?);
    let SystemKind::BernoulliShift(b) = system.kind() else {
        return Err(config_err!("system must be a Bernoulli shift"));
    };
    if b.alphabet() < 2 {
        return Err(config_err!("alphabet must have at least two symbols"));
    }
    let checkpoints: Vec<u64> = config.list("checkpoints")?;
    let float_checkpoints: Vec<u64> = config.list("float_checkpoints")?;
    let top = checkpoints.iter().chain(&float_checkpoints).copied().max().unwrap_or(0);
    within_budget(config, "interval", top as u128)?;
    let family = FolnerFamily::new(FolnerRule::Interval).with_budget(config.budget()?);

    let single: Observable<Scalar> = centered_coordinate(&system, GroupElement::Int(0), 0)?;
    let cyl = Cylinder::new(vec![(GroupElement::Int(0), 0), (GroupElement::Int(1), 1)])?;
    let mu = b.measure(&cyl);
    let pair = Observable::cylinder(cyl, Scalar::one()).sub(&system.constant(Scalar::rational(mu)))?;
    let cases = [("single", single, angle(config, "theta_single")?), ("pair", pair, angle(config, "theta_pair")?)];

    let mut exact = Table::new("exact_trace", &["case", "N", "trace_sq", "bound_2gamma0_over_N", "holds", "exactness"]);
    let mut float = Table::new("float_trace", &["case", "N", "trace", "trace_sq_exact_as_f64", "exactness"]);
    let mut all_hold = true;
    let mut all_rational = true;
    for (name, f, theta) in &cases {
        let gamma0 = system.inner(f, f)?.as_rational().ok_or_else(|| config_err!("γ(0) is not rational"))?;
        let w: VectorSequence<Scalar> = VectorSequence::phase(desc.clone(), vec![*theta], GroupSelfMap::Identity);
        for &n in &checkpoints {
            let v = bernoulli_weighted_norm_sq(&system, f, &w, &family, n)?;
            let bound = &gamma0 * Rational::new(2.into(), n.into());
            let (cell, holds) = match v.as_rational() {
                Some(r) => {
                    let holds = r <= bound;
                    (rational::format(&r), holds)
                }
                None => {
                    all_rational = false;
                    (v.to_string(), false)
                }
            };
            all_hold &= holds;
            exact.push(vec![name.to_string(), n.to_string(), cell, rational::format(&bound), bool_cell(holds), "exact".into()]);
        }
        if !float_checkpoints.is_empty() {
            let u = VectorSequence::orbit(system.clone(), f.to_complex(), GroupSelfMap::Identity)?;
            let wc: VectorSequence<Complex64> = VectorSequence::phase(desc.clone(), vec![*theta], GroupSelfMap::Identity);
            let t = weighted_average_trace(&u, &wc, &family, &float_checkpoints)?;
            for (n, x) in t.trace {
                let e = bernoulli_weighted_norm_sq(&system, f, &w, &family, n)?;
                let e = e.as_rational().map_or(f64::NAN, |r| rational::to_f64(&r));
                float.push(vec![name.to_string(), n.to_string(), float_cell(x), float_cell(e), "float".into()]);
            }
        }
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(exact);
    report.tables.push(float);
    report.add_verdict("trace_sq_rational", all_rational);
    report.add_verdict("trace_sq_at_most_2gamma0_over_N", all_hold);
    Ok(report)
}
