use folner_core::group::{character_sum, Character, FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::Angle;
use rand::Rng;

use super::{rng, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, ExperimentReport, Table};

/// Box averages of `χ(a(g + h) − a(g))` on `Z^∞` with `a(x) = (x_i²)` and
/// `χ(x) = Π e(x_i / 3)`, over `[0, 3m)^level`.
///
/// For `h ∈ 3G` the average is `χ(h²)` of modulus one, so the averages do
/// not vanish for any of the infinitely many shifts in `3G`; for `h` with a
/// coordinate prime to 3 the average is the exact zero.
pub fn run_zinfty_counterexample(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let level: u32 = config.get("level")?;
    let m: u64 = config.get("m")?;
    let samples: usize = config.get("samples")?;
    if level == 0 || level > 8 {
        return Err(config_err!("level must lie in 1..=8"));
    }
    if m == 0 {
        return Err(config_err!("m must be positive"));
    }
    within_budget(config, "box", (3 * m as u128).pow(level))?;
    let desc = GroupDescriptor::FreeAbelianDirectSum;
    let family = FolnerFamily::new(FolnerRule::LevelBox { side: 3 * m }).with_budget(config.budget()?);
    let square = GroupSelfMap::power(2, 1)?;
    let chi = Character::angles(&desc, vec![Angle::rational(1, 3); level as usize])?;
    let mut rng = rng(config)?;

    let mut table = Table::new("shifts", &["class", "h", "sum", "count", "average_is_chi_h2", "exact_zero", "exactness"]);
    let mut in_3g_ok = true;
    let mut unit_ok = true;
    let run = |class: &str, h: GroupElement, table: &mut Table| -> Result<(bool, bool)> {
        let s = character_sum(&chi, &square, &h, &family, level as u64)?;
        let exact = s.exact.clone().ok_or_else(|| config_err!("character sum is not exact"))?;
        let h2 = square.apply(&desc, &h)?;
        let is_chi = s.average_equals(&chi.eval(&h2)?) == Some(true);
        table.push(vec![
            class.to_string(),
            h.to_string(),
            exact.to_string(),
            s.count.to_string(),
            bool_cell(is_chi),
            bool_cell(exact.is_zero()),
            "exact".into(),
        ]);
        // χ(h²) is a root of unity, so equality gives modulus one.
        Ok((is_chi, exact.is_zero()))
    };

    let (ok, _) = run("zero", desc.identity(), &mut table)?;
    in_3g_ok &= ok;
    for _ in 0..samples {
        let coords: Vec<(u32, i64)> = loop {
            let c: Vec<(u32, i64)> = (1..=level).map(|i| (i, 3 * rng.gen_range(-3i64..=3))).collect();
            if c.iter().any(|&(_, x)| x != 0) {
                break c;
            }
        };
        let (ok, _) = run("in_3G", desc.from_coords(&coords)?, &mut table)?;
        in_3g_ok &= ok;
    }
    for _ in 0..samples {
        let unit = rng.gen_range(1..=level);
        let coords: Vec<(u32, i64)> = (1..=level)
            .map(|i| {
                let x = if i == unit { 3 * rng.gen_range(-3i64..=3) + rng.gen_range(1..=2) } else { rng.gen_range(-9i64..=9) };
                (i, x)
            })
            .collect();
        let (_, zero) = run("unit_coordinate", desc.from_coords(&coords)?, &mut table)?;
        unit_ok &= zero;
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(table);
    report.add_verdict("in_3G_average_is_chi_h2_unit_modulus", in_3g_ok);
    report.add_verdict("unit_coordinate_exact_zero", unit_ok);
    Ok(report)
}
