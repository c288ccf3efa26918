//! van der Corput criterion checks.
//!
//! A check computes one correlation profile over shells of shifts, derives
//! the hypothesis diagnostic of the requested mode, computes the conclusion
//! trace `‖A_N(u)‖`, and tags both. Tags are three-valued and are a pure
//! function of the stored numbers and thresholds; see [`VdcVerdict::retag`].
//! No tag claims a limit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::averaging::{self, Space, Vector, VectorSequence};
use crate::error::{bail, Error, Result};
use crate::group::{FolnerFamily, GroupElement};
use crate::scalar::{Coefficient, CompensatedSum};
use crate::systems::{Observable, System, SystemKind};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VdcMode {
    /// `lim_N γ_h(N) = 0` for each `h`.
    PerShift,
    /// `lim_h limsup_N |γ_h(N)| = 0`.
    Strong,
    /// Cesàro mean over `h` of `limsup_N |γ_h(N)|` tends to `0`.
    Cesaro,
    /// `Σ_h limsup_N |γ_h(N)|² < ∞`.
    Summable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Supported,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VdcParams {
    /// Number of shift shells probed.
    pub shift_radius: u32,
    pub checkpoints: Vec<u64>,
    /// First checkpoint of the tail; `None` means the middle checkpoint.
    pub window: Option<u64>,
    pub hypothesis_threshold: f64,
    pub conclusion_threshold: f64,
    /// Largest last-shell share of the summability partial sum.
    pub max_last_block_share: f64,
    /// Diagnostics at or above this fraction of `bound²` (hypothesis) or
    /// `bound` (conclusion) refute.
    pub refute_fraction: f64,
    /// Cap on the number of probed shifts.
    pub shift_budget: u64,
}

impl Default for VdcParams {
    fn default() -> Self {
        VdcParams {
            shift_radius: 20,
            checkpoints: (0..=7).map(|k| 1000u64 << k).collect(),
            window: None,
            hypothesis_threshold: 0.05,
            conclusion_threshold: 0.05,
            max_last_block_share: 0.1,
            refute_fraction: 0.5,
            shift_budget: 100_000,
        }
    }
}

impl VdcParams {
    pub fn window_start(&self) -> Result<u64> {
        match self.window {
            Some(w) => Ok(w),
            None => match self.checkpoints.get(self.checkpoints.len() / 2) {
                Some(&w) => Ok(w),
                None => bail!(InvalidInput, "no checkpoints"),
            },
        }
    }
}

/// Evidence and tags for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct VdcVerdict {
    pub mode: VdcMode,
    pub params: VdcParams,
    pub bound: f64,
    /// Probed shifts in shell order.
    pub shifts: Vec<GroupElement>,
    /// Number of shifts per shell.
    pub shell_sizes: Vec<usize>,
    /// `|γ_h(N)|` per shift and checkpoint.
    pub profile_moduli: Vec<Vec<f64>>,
    /// `sup_{N ≥ W} |γ_h(N)|` per shift.
    pub tail_sups: Vec<f64>,
    /// Mean of the tail suprema over all probed shifts.
    pub cesaro: f64,
    /// Largest tail supremum on the outermost shell.
    pub strong: f64,
    /// Largest tail supremum overall.
    pub per_shift: f64,
    /// `Σ tail_sup²` over the first `r` shells, `r = 1..=R`.
    pub partial_sums: Vec<f64>,
    /// Share of the last shell in the full partial sum.
    pub last_block_share: f64,
    /// Mean of `tail_sup` over the outermost shell.
    pub outer_mean: f64,
    /// Every probed `γ_h(N)` with `h ≠ 0` is an exact zero.
    pub exact_vanishing: Option<bool>,
    /// `(N, ‖A_N(u)‖)`.
    pub conclusion_trace: Vec<(u64, f64)>,
    pub decay_exponent: Option<f64>,
    pub hypothesis: Tag,
    pub conclusion: Tag,
}

impl VdcVerdict {
    /// The hypothesis diagnostic of the verdict's mode.
    pub fn hypothesis_diagnostic(&self) -> f64 {
        match self.mode {
            VdcMode::PerShift => self.per_shift,
            VdcMode::Strong => self.strong,
            VdcMode::Cesaro => self.cesaro,
            VdcMode::Summable => self.partial_sums.last().copied().unwrap_or(0.0),
        }
    }

    /// Recomputes the tags from the stored diagnostics.
    pub fn retag(&self) -> (Tag, Tag) {
        let p = &self.params;
        let b2 = self.bound * self.bound;
        if self.bound == 0.0 {
            return (Tag::Supported, Tag::Supported);
        }
        let hyp = match self.mode {
            VdcMode::PerShift | VdcMode::Strong | VdcMode::Cesaro => {
                let d = self.hypothesis_diagnostic();
                if d <= p.hypothesis_threshold * b2 {
                    Tag::Supported
                } else if d >= p.refute_fraction * b2 {
                    Tag::Refuted
                } else {
                    Tag::Inconclusive
                }
            }
            VdcMode::Summable => {
                if self.per_shift <= p.hypothesis_threshold * b2 && self.last_block_share < p.max_last_block_share {
                    Tag::Supported
                } else if self.outer_mean >= p.refute_fraction * b2 {
                    Tag::Refuted
                } else {
                    Tag::Inconclusive
                }
            }
        };
        let last = self.conclusion_trace.last().map(|x| x.1).unwrap_or(0.0);
        let con = if last <= p.conclusion_threshold * self.bound {
            Tag::Supported
        } else if last >= p.refute_fraction * self.bound {
            Tag::Refuted
        } else {
            Tag::Inconclusive
        };
        (hyp, con)
    }
}

/// Runs the van der Corput check of `mode` on `u`.
///
/// Thresholds are relative: the hypothesis compares against `bound²`, the
/// conclusion against `bound`. For unit-bounded sequences they are the
/// absolute values in `params`.
pub fn check_vdc<C: Coefficient>(u: &VectorSequence<C>, family: &FolnerFamily, mode: VdcMode, params: &VdcParams) -> Result<VdcVerdict> {
    let desc = u.group();
    let shells = FolnerFamily::shells(desc, params.shift_radius, params.shift_budget)?;
    let shell_sizes: Vec<usize> = shells.iter().map(Vec::len).collect();
    let shifts: Vec<GroupElement> = shells.into_iter().flatten().collect();
    let w = params.window_start()?;
    if !params.checkpoints.contains(&w) {
        bail!(InvalidInput, "window start {w} is not a checkpoint");
    }
    let bound = u.bound();
    if bound == 0.0 {
        let n = params.checkpoints.len();
        let mut v = VdcVerdict {
            mode,
            params: params.clone(),
            bound,
            shell_sizes,
            profile_moduli: alloc::vec![alloc::vec![0.0; n]; shifts.len()],
            tail_sups: alloc::vec![0.0; shifts.len()],
            shifts,
            cesaro: 0.0,
            strong: 0.0,
            per_shift: 0.0,
            partial_sums: Vec::new(),
            last_block_share: 0.0,
            outer_mean: 0.0,
            exact_vanishing: C::EXACT.then_some(true),
            conclusion_trace: params.checkpoints.iter().map(|&n| (n, 0.0)).collect(),
            decay_exponent: None,
            hypothesis: Tag::Supported,
            conclusion: Tag::Supported,
        };
        v.partial_sums = alloc::vec![0.0; v.shell_sizes.len()];
        return Ok(v);
    }
    let profile = averaging::correlation_profile(u, family, &shifts, &params.checkpoints)?;
    let tail_sups = (0..shifts.len()).map(|i| averaging::tail_sup(&profile, i, w)).collect::<Result<Vec<_>>>()?;
    let exact_vanishing = C::EXACT.then(|| profile.values.iter().all(|row| row.iter().all(C::is_zero)));
    let profile_moduli = (0..shifts.len()).map(|i| profile.moduli(i)).collect();

    let per_shift = tail_sups.iter().copied().fold(0.0, f64::max);
    let cesaro = if tail_sups.is_empty() { 0.0 } else { tail_sups.iter().sum::<f64>() / tail_sups.len() as f64 };
    let mut partial_sums = Vec::with_capacity(shell_sizes.len());
    let mut acc = 0.0;
    let mut start = 0;
    let mut last_block = 0.0;
    let mut strong = 0.0;
    let mut outer_mean = 0.0;
    for &s in &shell_sizes {
        let block = &tail_sups[start..start + s];
        last_block = block.iter().map(|t| t * t).sum::<f64>();
        acc += last_block;
        strong = block.iter().copied().fold(0.0, f64::max);
        outer_mean = if s == 0 { 0.0 } else { block.iter().sum::<f64>() / s as f64 };
        partial_sums.push(acc);
        start += s;
    }
    let last_block_share = if acc > 0.0 { last_block / acc } else { 0.0 };

    let norms = averaging::average_norm_trace(u, family, &params.checkpoints)?;
    let conclusion_trace: Vec<(u64, f64)> = params.checkpoints.iter().copied().zip(norms).collect();
    let decay_exponent = fit_decay(&conclusion_trace);
    let mut v = VdcVerdict {
        mode,
        params: params.clone(),
        bound,
        shifts,
        shell_sizes,
        profile_moduli,
        tail_sups,
        cesaro,
        strong,
        per_shift,
        partial_sums,
        last_block_share,
        outer_mean,
        exact_vanishing,
        conclusion_trace,
        decay_exponent,
        hypothesis: Tag::Inconclusive,
        conclusion: Tag::Inconclusive,
    };
    (v.hypothesis, v.conclusion) = v.retag();
    Ok(v)
}

/// Least-squares slope of `log y` against `log N` over positive entries.
pub fn fit_decay(trace: &[(u64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        trace.iter().filter(|(n, y)| *n > 0 && *y > 0.0).map(|&(n, y)| (libm::log(n as f64), libm::log(y))).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// A norm trace with its fitted decay exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayTrace {
    pub trace: Vec<(u64, f64)>,
    pub exponent: Option<f64>,
}

impl DecayTrace {
    fn new(trace: Vec<(u64, f64)>) -> Self {
        let exponent = fit_decay(&trace);
        DecayTrace { trace, exponent }
    }
}

/// `‖(1/|F_N|) Σ c(g) u(g)‖` at checkpoints for a scalar weight `c`.
pub fn weighted_average_trace<C: Coefficient>(
    u: &VectorSequence<C>,
    c: &VectorSequence<C>,
    family: &FolnerFamily,
    checkpoints: &[u64],
) -> Result<DecayTrace> {
    if *c.space() != Space::Scalars {
        bail!(Mismatch, "weights must be scalar-valued");
    }
    let cu = VectorSequence::product(alloc::vec![c.clone(), u.clone()])?;
    let norms = averaging::average_norm_trace(&cu, family, checkpoints)?;
    Ok(DecayTrace::new(checkpoints.iter().copied().zip(norms).collect()))
}

/// `‖(1/|F_N|) Σ u(g) · w(g)‖₂` at checkpoints, with pointwise products.
pub fn disjointness_trace<C: Coefficient>(
    u: &VectorSequence<C>,
    w: &VectorSequence<C>,
    family: &FolnerFamily,
    checkpoints: &[u64],
) -> Result<DecayTrace> {
    match (u.space(), w.space()) {
        (Space::Functions(a), Space::Functions(b)) if a == b => {}
        _ => bail!(Mismatch, "disjointness needs two sequences in the same function space"),
    }
    let uw = VectorSequence::product(alloc::vec![u.clone(), w.clone()])?;
    let norms = averaging::average_norm_trace(&uw, family, checkpoints)?;
    Ok(DecayTrace::new(checkpoints.iter().copied().zip(norms).collect()))
}

/// Exact `‖(1/|F_N|) Σ_{g ∈ F_N} c(g) T_g f‖²` for a mean-zero Bernoulli
/// cylinder observable `f`, whose correlations vanish off the finite set
/// `E` of window differences:
///
/// `(1/|F_N|²) Σ_{k ∈ E} γ_f(k) Σ_{g, g+k ∈ F_N} c(g + k) conj c(g)`.
pub fn bernoulli_weighted_norm_sq(
    system: &System,
    f: &Observable<Scalar>,
    c: &VectorSequence<Scalar>,
    family: &FolnerFamily,
    n: u64,
) -> Result<Scalar> {
    let (SystemKind::BernoulliShift(_), Observable::Bernoulli(terms)) = (system.kind(), f) else {
        bail!(Mismatch, "expected a Bernoulli observable");
    };
    if *c.space() != Space::Scalars {
        bail!(Mismatch, "weights must be scalar-valued");
    }
    if !system.integral(f)?.is_zero() {
        bail!(InvalidInput, "observable is not mean-zero");
    }
    let desc = system.group();
    let mut window: Vec<GroupElement> = terms.keys().flat_map(|c| c.window().cloned()).collect();
    window.sort();
    window.dedup();
    let mut support: Vec<GroupElement> = Vec::new();
    for a in &window {
        for b in &window {
            support.push(desc.difference(a, b)?);
        }
    }
    support.sort();
    support.dedup();
    let elems: Vec<GroupElement> = family.elements(desc, n)?.collect();
    let set: alloc::collections::BTreeSet<&GroupElement> = elems.iter().collect();
    let weights = elems.iter().map(|g| scalar_of(c.eval(g)?)).collect::<Result<Vec<_>>>()?;
    let mut total = CompensatedSum::<Scalar>::new();
    for k in &support {
        let gamma = system.correlation(f, k)?;
        if gamma.is_zero() {
            continue;
        }
        let mut pair = CompensatedSum::<Scalar>::new();
        for (g, cg) in elems.iter().zip(&weights) {
            let gk = desc.combine(g, k)?;
            if set.contains(&gk) {
                pair.add(&scalar_of(c.eval(&gk)?)?.mul(&cg.conj()));
            }
        }
        total.add(&gamma.mul(&pair.value()));
    }
    let size = elems.len() as u64;
    Ok(total.value().div_count(size).div_count(size))
}

fn scalar_of(v: Vector<Scalar>) -> Result<Scalar> {
    match v {
        Vector::Scalar(s) => Ok(s),
        _ => Err(Error::Mismatch(String::from("expected a scalar"))),
    }
}

impl fmt::Display for VdcMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VdcMode::PerShift => "per_shift",
            VdcMode::Strong => "strong",
            VdcMode::Cesaro => "cesaro",
            VdcMode::Summable => "summable",
        })
    }
}

impl core::str::FromStr for VdcMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "per_shift" => VdcMode::PerShift,
            "strong" => VdcMode::Strong,
            "cesaro" => VdcMode::Cesaro,
            "summable" => VdcMode::Summable,
            _ => bail!(Parse, "unknown vdc mode {s:?}"),
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Supported => "supported",
            Tag::Refuted => "refuted",
            Tag::Inconclusive => "inconclusive",
        })
    }
}

#[cfg(test)]
mod tests;
