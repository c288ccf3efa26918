use std::collections::BTreeMap;

use folner_core::group::{GroupDescriptor, GroupElement};
use folner_core::rational::ratio;
use folner_core::spectral::{
    atom_scan, classify_spectrum, dual_level_measure, fejer_density, AtomScanParams, ClassifyThresholds, Correlations, EstimateVariant,
    SpectralEstimate,
};
use folner_core::systems::{centered_coordinate, BernoulliShift, FinitePermutation, Observable, System, SystemKind, TorusRotation};
use folner_core::{Angle, Coefficient, Scalar};
use num_complex::Complex64;

use super::{angle, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, float_cell, ExperimentReport, Table};

/// Spectral classification of standard observables.
///
/// * `bernoulli`: `1[x_0 = 0] − 1/2` under the fair Bernoulli shift on
///   `Z`; correlations are computed exactly and vanish off zero.
/// * `rotation`: `e(x)` under rotation by `θ`.
/// * `mixture`: `γ(n) = ½ δ_{n,0} + ½ e(nθ)`, the correlations of the
///   normalized sum of the two observables above on the product system.
/// * `finite_dual`: `(1, ζ_3, ζ_3²)` under the cyclic action of `⊕ Z/3`.
/// * `finite_dual_regular`: the indicator of one point of `(Z/3)²` under
///   translation by the first two coordinates of `⊕ Z/3`.
pub fn run_spectral_classify(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let cases: Vec<String> = config.list("cases")?;
    let n: u64 = config.get("n")?;
    let resolution: usize = config.get("resolution")?;
    let theta = angle(config, "theta")?;
    within_budget(config, "Fejér grid", resolution.max(n as usize) as u128)?;
    let t = ClassifyThresholds::default();
    let scan = AtomScanParams { resolution, ..AtomScanParams::default() };

    let mut table = Table::new(
        "cases",
        &["case", "tag", "gamma0", "atom_share", "flatness", "top_theta", "top_mass", "input_exact_zero_off_origin", "exactness"],
    );
    let mut fejer_table = Table::new("fejer", &["case", "N", "mass_within_2_over_N", "min_sample", "max_sample", "exactness"]);
    let mut masses = Table::new("finite_dual_masses", &["case", "character", "mass", "exactness"]);
    let mut tags = BTreeMap::new();
    for case in &cases {
        let (est, exact_zero, fejer) = match case.as_str() {
            "bernoulli" => {
                let b = BernoulliShift::new(vec![ratio(1, 2), ratio(1, 2)])?;
                let sys = System::new(GroupDescriptor::IntegerLine, SystemKind::BernoulliShift(b))?;
                let f: Observable<Scalar> = centered_coordinate(&sys, GroupElement::Int(0), 0)?;
                let mut exact_zero = true;
                let mut vals = Vec::with_capacity(2 * n as usize + 1);
                for k in -(n as i64)..=n as i64 {
                    let g = sys.correlation(&f, &GroupElement::Int(k))?;
                    if k != 0 {
                        exact_zero &= g.is_zero();
                    }
                    vals.push(g.to_complex());
                }
                let corr = Correlations::new(1, n, vals)?;
                (atom_scan(&corr, n, &scan)?, Some(exact_zero), Some(fejer_density(&corr, n, resolution.max(n as usize))?))
            }
            "rotation" => {
                let sys = System::new(GroupDescriptor::IntegerLine, SystemKind::TorusRotation(TorusRotation::circle(theta)))?;
                let f: Observable<Complex64> = Observable::mode(vec![1], Complex64::new(1.0, 0.0));
                let corr = Correlations::of_observable(&sys, &f, n)?;
                (atom_scan(&corr, n, &scan)?, None, Some(fejer_density(&corr, n, resolution.max(n as usize))?))
            }
            "mixture" => {
                let corr = Correlations::from_fn(1, n, |k| {
                    let d = if k[0] == 0 { 0.5 } else { 0.0 };
                    Complex64::new(d, 0.0) + theta.scale(k[0]).phasor() * 0.5
                })?;
                (atom_scan(&corr, n, &scan)?, None, None)
            }
            "finite_dual" => {
                let g = GroupDescriptor::prime_sum(3)?;
                let sys = System::new(g, SystemKind::FinitePermutation(FinitePermutation::cyclic(3, 1)?))?;
                let f = Observable::Finite((0..3).map(|k| Scalar::phase(&Angle::rational(k, 3))).collect());
                (dual_level_measure(&sys, &f, 1, config.budget()?)?, None, None)
            }
            "finite_dual_regular" => {
                let g = GroupDescriptor::prime_sum(3)?;
                let w = ratio(1, 9);
                let perm = |di: usize, dj: usize| (0..9).map(|x| ((x / 3 + di) % 3) * 3 + (x % 3 + dj) % 3).collect::<Vec<_>>();
                let images = BTreeMap::from([(1u32, vec![1i64, 0]), (2u32, vec![0i64, 1])]);
                let fp = FinitePermutation::new(vec![w; 9], vec![3, 3], vec![perm(1, 0), perm(0, 1)], images)?;
                let sys = System::new(g, SystemKind::FinitePermutation(fp))?;
                let f = Observable::indicator(9, &[0]);
                (dual_level_measure(&sys, &f, 2, config.budget()?)?, None, None)
            }
            other => return Err(config_err!("unknown spectral case {other:?}")),
        };
        let tag = classify_spectrum(&est, &t);
        tags.insert(case.clone(), tag);
        let (share, flat, top_theta, top_mass, exactness) = summary(&est);
        table.push(vec![
            case.clone(),
            tag.to_string(),
            float_cell(est.gamma0),
            share,
            flat,
            top_theta,
            top_mass,
            exact_zero.map_or("-".into(), bool_cell),
            exactness.into(),
        ]);
        if let Some(fe) = fejer {
            let EstimateVariant::FejerDensity { samples, .. } = &fe.variant else { unreachable!() };
            let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let center = if case == "rotation" { theta.to_f64() } else { 0.0 };
            fejer_table.push(vec![
                case.clone(),
                n.to_string(),
                fe.mass_within(center, 2.0 / n as f64).map_or("-".into(), float_cell),
                float_cell(min),
                float_cell(max),
                "float".into(),
            ]);
        }
        if let EstimateVariant::FiniteDualMass { .. } = est.variant {
            for line in est.to_table().lines().skip(1) {
                let (chi, mass) = line.split_once('\t').unwrap_or((line, ""));
                masses.push(vec![case.clone(), chi.to_string(), mass.to_string(), "exact".into()]);
            }
        }
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(table);
    report.tables.push(fejer_table);
    report.tables.push(masses);
    for (case, tag) in tags {
        report.add_verdict(&case, tag);
    }
    Ok(report)
}

fn summary(est: &SpectralEstimate) -> (String, String, String, String, &'static str) {
    match &est.variant {
        EstimateVariant::AtomScan { atoms, total_mass, flatness, .. } => (
            float_cell(total_mass / est.gamma0),
            float_cell(*flatness),
            atoms.first().map_or("-".into(), |a| float_cell(a.theta)),
            atoms.first().map_or("-".into(), |a| float_cell(a.mass)),
            "float",
        ),
        EstimateVariant::FiniteDualMass { masses, parseval, exact_nonnegative, .. } => {
            let vals: Vec<f64> = masses.iter().map(|m| m.to_complex().re).collect();
            let top = vals.iter().copied().fold(0.0, f64::max);
            let uniform = est.gamma0 / vals.len() as f64;
            let flat = vals.iter().map(|v| (v - uniform).abs()).fold(0.0, f64::max) / uniform;
            let exactness = if *parseval && *exact_nonnegative { "exact" } else { "float" };
            (float_cell(top / est.gamma0), float_cell(flat), "-".into(), float_cell(top), exactness)
        }
        EstimateVariant::FejerDensity { .. } => ("-".into(), "-".into(), "-".into(), "-".into(), "float"),
    }
}
