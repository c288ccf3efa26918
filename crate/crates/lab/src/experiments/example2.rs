use folner_core::group::{character_sum, Character, FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::CyclotomicValue;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rng, within_budget};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::report::{bool_cell, ExperimentReport, Table};

/// Averages of `χ(P(g + h) − P(g))` over `{deg g < N}` in `F_p[t]` for a
/// separable polynomial `P`.
///
/// Characters are `χ_y` with `y` of length `char_length`, so they only
/// see the coefficients of `t^0 .. t^{L-1}`. Whether `χ` vanishes on the
/// ideal `(h)` is decided by scanning `χ(h t^j)` for `j < L`; products
/// `h t^j` with `j ≥ L` have no coefficient below `t^L`, so the scan bound
/// `L` is exact for these characters.
///
/// `selection = ideal` samples `χ` not vanishing on `(h)`; `selection =
/// unit` additionally requires `χ(h) ≠ 1`, which for `P = y²` makes the
/// average zero from `N = 1` on.
pub fn run_example2(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let p: u32 = config.get("p")?;
    let max_level: u64 = config.get("max_level")?;
    let len: usize = config.get("char_length")?;
    let h_degree: usize = config.get("h_degree")?;
    let samples: usize = config.get("samples")?;
    let negatives: usize = config.get("negatives")?;
    let selection = config.raw("selection")?;
    if !["ideal", "unit"].contains(&selection) {
        return Err(config_err!("selection must be ideal or unit"));
    }
    if max_level == 0 || max_level > 8 {
        return Err(config_err!("max_level must lie in 1..=8"));
    }
    if len == 0 || h_degree == 0 {
        return Err(config_err!("char_length and h_degree must be positive"));
    }
    within_budget(config, "level subgroup", (p as u128).pow(max_level as u32))?;
    let desc = GroupDescriptor::poly_ring(p)?;
    let poly = GroupSelfMap::parse(&desc, config.raw("poly")?)?;
    let GroupSelfMap::RingPolynomial(coeffs) = &poly else {
        return Err(config_err!("poly must be a ring polynomial"));
    };
    if coeffs.len() > 7 {
        return Err(config_err!("degree must be at most 6"));
    }
    poly.check_separable_with_derivative(&desc)?;
    let family = FolnerFamily::new(FolnerRule::LevelSubgroup).with_budget(config.budget()?);
    let mut rng = rng(config)?;

    let mut levels = Table::new("levels", &["pair", "N", "sum", "count", "exact_zero", "exactness"]);
    let mut pairs = Table::new("pairs", &["pair", "h", "chi", "scan_bound", "vanishes_on_ideal", "n0", "exactness"]);
    let mut all_have_n0 = true;
    let mut all_from_one = true;
    for i in 0..samples {
        let (h, chi) = loop {
            let h = random_poly(&desc, &mut rng, p, h_degree, 0)?;
            let y: Vec<u32> = (0..len).map(|_| rng.gen_range(0..p)).collect();
            let chi = Character::residues(&desc, y)?;
            let keep = match selection {
                "unit" => !chi.eval(&h)?.is_one(),
                _ => !vanishes_on_ideal(&desc, &chi, &h, len)?,
            };
            if keep {
                break (h, chi);
            }
        };
        let mut zero = Vec::new();
        for n in 1..=max_level {
            let s = character_sum(&chi, &poly, &h, &family, n)?;
            let exact = s.exact.clone().ok_or_else(|| config_err!("character sum is not exact"))?;
            zero.push(exact.is_zero());
            levels.push(vec![
                i.to_string(),
                n.to_string(),
                exact.to_string(),
                s.count.to_string(),
                bool_cell(exact.is_zero()),
                "exact".into(),
            ]);
        }
        // Smallest N0 with exact zeros at every computed N ≥ N0.
        let n0 = zero.iter().rposition(|z| !z).map_or(1, |j| j + 2);
        let n0 = (n0 as u64 <= max_level).then_some(n0);
        all_have_n0 &= n0.is_some();
        all_from_one &= n0 == Some(1);
        pairs.push(vec![
            i.to_string(),
            h.to_string(),
            chi.to_string(),
            len.to_string(),
            bool_cell(false),
            n0.map_or("none".into(), |v| v.to_string()),
            "exact".into(),
        ]);
    }

    let mut control = Table::new("vanishing_control", &["h", "chi", "N", "sum", "count", "unit_modulus", "exactness"]);
    let mut control_ok = true;
    for _ in 0..negatives {
        // h with a zero constant term; χ supported below its valuation.
        let h = random_poly(&desc, &mut rng, p, h_degree.max(2), 1)?;
        let valuation = h.coords().first().map_or(1, |&(i, _)| i as usize - 1);
        let y: Vec<u32> = loop {
            let y: Vec<u32> = (0..len.max(valuation)).map(|j| if j < valuation { rng.gen_range(0..p) } else { 0 }).collect();
            if y.iter().any(|&v| v != 0) {
                break y;
            }
        };
        let chi = Character::residues(&desc, y)?;
        if !vanishes_on_ideal(&desc, &chi, &h, len.max(valuation))? {
            return Err(config_err!("internal: control character does not vanish on (h)"));
        }
        for n in 1..=max_level {
            let s = character_sum(&chi, &poly, &h, &family, n)?;
            let exact = s.exact.clone().ok_or_else(|| config_err!("character sum is not exact"))?;
            let unit = (0..p as i64).any(|k| exact == CyclotomicValue::root(p, k).scale(s.count as i64));
            control_ok &= unit;
            control.push(vec![
                h.to_string(),
                chi.to_string(),
                n.to_string(),
                exact.to_string(),
                s.count.to_string(),
                bool_cell(unit),
                "exact".into(),
            ]);
        }
    }

    let mut report = ExperimentReport::new(config);
    report.tables.push(pairs);
    report.tables.push(levels);
    report.tables.push(control);
    report.add_verdict("nonvanishing_zero_from_n0", all_have_n0);
    report.add_verdict("nonvanishing_zero_at_every_level", all_from_one);
    report.add_verdict("vanishing_control_unit_modulus", control_ok);
    Ok(report)
}

/// Nonzero polynomial of degree below `degree` whose first `low_zero`
/// coefficients vanish.
fn random_poly(desc: &GroupDescriptor, rng: &mut ChaCha8Rng, p: u32, degree: usize, low_zero: usize) -> Result<GroupElement> {
    loop {
        let coords: Vec<(u32, i64)> = (low_zero..degree).map(|j| (j as u32 + 1, rng.gen_range(0..p) as i64)).collect();
        let h = desc.from_coords(&coords)?;
        if !desc.is_identity(&h) {
            return Ok(h);
        }
    }
}

/// Whether `χ(h t^j) = 1` for all `j < bound`.
pub fn vanishes_on_ideal(desc: &GroupDescriptor, chi: &Character, h: &GroupElement, bound: usize) -> Result<bool> {
    for j in 0..bound as u32 {
        let shifted: Vec<(u32, i64)> = h.coords().into_iter().map(|(i, x)| (i + j, x)).collect();
        if !chi.eval(&desc.from_coords(&shifted)?)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
