use folner_core::group::{character_sum, Character, FolnerFamily, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::CyclotomicValue;
use rand::Rng;

use super::{rng, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, ExperimentReport, Table};

/// Full-field averages of `χ((g + h)² − g²)` over `F_{p^k}`.
///
/// Nontrivial characters average to the exact cyclotomic zero since
/// `g ↦ 2hg` is a bijection; the trivial character is the control with
/// average `1`.
pub fn run_example1(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let p: u32 = config.get("p")?;
    let k: usize = config.get("k")?;
    let samples: usize = config.get("samples")?;
    if ![3, 5, 7].contains(&p) {
        return Err(config_err!("p must be 3, 5 or 7"));
    }
    if k == 0 || k > 8 {
        return Err(config_err!("k must lie in 1..=8"));
    }
    within_budget(config, "field", (p as u128).pow(k as u32))?;
    let desc = GroupDescriptor::field(p, k)?;
    let family = FolnerFamily::standard(&desc)?.with_budget(config.budget()?);
    let square = GroupSelfMap::monomial(&desc, 2)?;
    let mut rng = rng(config)?;
    let nonzero = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let v: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    };

    let mut rows = Table::new("pairs", &["index", "h", "chi", "sum", "count", "exact_zero", "exactness"]);
    let mut all_zero = true;
    for i in 0..samples {
        let h = desc.dense(nonzero(&mut rng).into_iter().map(i64::from).collect())?;
        let chi = Character::residues(&desc, nonzero(&mut rng))?;
        let s = character_sum(&chi, &square, &h, &family, 1)?;
        let exact = s.exact.clone().ok_or_else(|| config_err!("character sum is not exact"))?;
        all_zero &= exact.is_zero();
        rows.push(vec![
            i.to_string(),
            h.to_string(),
            chi.to_string(),
            exact.to_string(),
            s.count.to_string(),
            bool_cell(exact.is_zero()),
            "exact".into(),
        ]);
    }

    let mut control = Table::new("control", &["h", "chi", "sum", "count", "average_is_chi_h2", "exactness"]);
    let trivial = Character::trivial(&desc)?;
    let mut control_ok = true;
    for _ in 0..samples.clamp(1, 5) {
        let h: GroupElement = desc.dense(nonzero(&mut rng).into_iter().map(i64::from).collect())?;
        let s = character_sum(&trivial, &square, &h, &family, 1)?;
        let h2 = square.apply(&desc, &h)?;
        let ok = s.average_equals(&trivial.eval(&h2)?) == Some(true);
        control_ok &= ok && s.exact == Some(CyclotomicValue::one(p).scale(s.count as i64));
        control.push(vec![
            h.to_string(),
            trivial.to_string(),
            s.exact.as_ref().map_or("-".into(), ToString::to_string),
            s.count.to_string(),
            bool_cell(ok),
            "exact".into(),
        ]);
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(rows);
    report.tables.push(control);
    report.add_verdict("nontrivial_all_exact_zero", all_zero);
    report.add_verdict("trivial_average_one", control_ok);
    Ok(report)
}
