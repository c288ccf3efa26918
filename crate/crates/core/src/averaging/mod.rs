//! Følner averages of bounded vector-valued sequences.
//!
//! Every sum runs sequentially over `F_N` in the family's enumeration order
//! with compensated accumulation, so floating-point results do not depend on
//! thread count. Work over several shifts may run in parallel (feature
//! `parallel`); each shift is still summed sequentially.
//!
//! For the untranslated interval family, `F_N` is a prefix of `F_{N'}` in
//! enumeration order, and checkpoint values are read off one running sum;
//! this produces the same bits as summing each checkpoint separately.

mod sequence;

use alloc::vec::Vec;

use num_complex::Complex64;

use sequence::VectorSum;
pub use sequence::{Generator, Space, Vector, VectorSequence};

use crate::error::{bail, Result};
use crate::group::{FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, Translation};
use crate::scalar::{Coefficient, CompensatedSum};

/// `γ_h(N) = (1/|F_N|) Σ_{g ∈ F_N} ⟨u(g + h), u(g)⟩` over probed shifts and
/// checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile<C> {
    pub shifts: Vec<GroupElement>,
    pub checkpoints: Vec<u64>,
    /// `values[i][j] = γ_{shifts[i]}(checkpoints[j])`.
    pub values: Vec<Vec<C>>,
    /// Whether the values are exact.
    pub exact: bool,
    /// Declared bound of `u`; `|γ| ≤ bound²`.
    pub bound: f64,
}

/// Finite stand-in for the subsequence `(N_q)` of a permissible pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsequencePlan {
    pub indices: Vec<u64>,
    pub tolerance: f64,
    /// Number of tracked pairs the plan certifies.
    pub pairs: usize,
}

/// `⟨x, y⟩` at finite stage along a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceInnerProduct<C> {
    /// Value at the last plan index.
    pub value: C,
    /// Largest change between consecutive plan indices after the first.
    pub fluctuation: f64,
    pub stabilized: bool,
    pub trace: Vec<(u64, C)>,
}

fn check_checkpoints(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.is_empty() {
        bail!(InvalidInput, "no checkpoints");
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        bail!(InvalidInput, "checkpoints must be positive and strictly increasing");
    }
    Ok(())
}

fn is_prefix_family(family: &FolnerFamily) -> bool {
    family.rule == FolnerRule::Interval && family.translation == Translation::None
}

/// Runs `visit` over every `F_N`, snapshotting `state` at each checkpoint.
fn sweep<S: Clone, O>(
    desc: &GroupDescriptor,
    family: &FolnerFamily,
    checkpoints: &[u64],
    init: S,
    mut visit: impl FnMut(&mut S, &GroupElement) -> Result<()>,
    mut finish: impl FnMut(&S, u64) -> O,
) -> Result<Vec<O>> {
    check_checkpoints(checkpoints)?;
    // Fail on budget before any work.
    for &n in checkpoints {
        family.elements(desc, n)?;
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    if is_prefix_family(family) {
        let mut state = init;
        let mut next = 0;
        for (i, g) in family.elements(desc, *checkpoints.last().unwrap())?.enumerate() {
            visit(&mut state, &g)?;
            if i as u64 + 1 == checkpoints[next] {
                out.push(finish(&state, checkpoints[next]));
                next += 1;
            }
        }
    } else {
        for &n in checkpoints {
            let mut state = init.clone();
            for g in family.elements(desc, n)? {
                visit(&mut state, &g)?;
            }
            out.push(finish(&state, n));
        }
    }
    Ok(out)
}

fn size_of(desc: &GroupDescriptor, family: &FolnerFamily, n: u64) -> u64 {
    family.size(desc, n).map(|s| s as u64).unwrap_or(u64::MAX)
}

/// `A_N(u) = (1/|F_N|) Σ_{g ∈ F_N} u(g)`.
pub fn folner_average<C: Coefficient>(u: &VectorSequence<C>, family: &FolnerFamily, n: u64) -> Result<Vector<C>> {
    Ok(average_trace(u, family, &[n])?.pop().expect("one checkpoint"))
}

/// `A_N(u)` at every checkpoint.
pub fn average_trace<C: Coefficient>(u: &VectorSequence<C>, family: &FolnerFamily, checkpoints: &[u64]) -> Result<Vec<Vector<C>>> {
    let desc = u.group();
    sweep(
        desc,
        family,
        checkpoints,
        VectorSum::Empty,
        |s, g| {
            s.add(&u.eval(g)?);
            Ok(())
        },
        |s, n| s.mean(u.space(), size_of(desc, family, n)),
    )
}

/// `‖A_N(u)‖` at every checkpoint.
pub fn average_norm_trace<C: Coefficient>(u: &VectorSequence<C>, family: &FolnerFamily, checkpoints: &[u64]) -> Result<Vec<f64>> {
    average_trace(u, family, checkpoints)?.iter().map(|v| norm(u.space(), v)).collect()
}

/// `‖v‖` as a float.
pub fn norm<C: Coefficient>(space: &Space, v: &Vector<C>) -> Result<f64> {
    Ok(libm::sqrt(space.norm_sq(v)?.to_complex().re.max(0.0)))
}

/// `(1/|F_N|) Σ_{g ∈ F_N} ⟨x(g), y(g)⟩` at every checkpoint.
pub fn pair_average_trace<C: Coefficient>(
    x: &VectorSequence<C>,
    y: &VectorSequence<C>,
    family: &FolnerFamily,
    checkpoints: &[u64],
) -> Result<Vec<C>> {
    if x.group() != y.group() || x.space() != y.space() {
        bail!(Mismatch, "sequences over different groups or spaces");
    }
    let desc = x.group();
    sweep(
        desc,
        family,
        checkpoints,
        CompensatedSum::<C>::new(),
        |s, g| {
            s.add(&x.space().inner(&x.eval(g)?, &y.eval(g)?)?);
            Ok(())
        },
        |s, n| s.value().div_count(size_of(desc, family, n)),
    )
}

/// Correlation profile over `shifts` and `checkpoints`.
pub fn correlation_profile<C: Coefficient>(
    u: &VectorSequence<C>,
    family: &FolnerFamily,
    shifts: &[GroupElement],
    checkpoints: &[u64],
) -> Result<CorrelationProfile<C>> {
    let desc = u.group();
    for h in shifts {
        desc.check(h)?;
    }
    check_checkpoints(checkpoints)?;
    for &n in checkpoints {
        family.elements(desc, n)?;
    }
    let values = if is_prefix_family(family) {
        interval_profile(u, shifts, checkpoints)?
    } else {
        let mut per_n: Vec<Vec<C>> = Vec::with_capacity(checkpoints.len());
        for &n in checkpoints {
            let elems: Vec<GroupElement> = family.elements(desc, n)?.collect();
            let base = elems.iter().map(|g| u.eval(g)).collect::<Result<Vec<_>>>()?;
            let size = elems.len() as u64;
            let row = map_shifts(shifts, |h| {
                let mut s = CompensatedSum::<C>::new();
                for (g, ug) in elems.iter().zip(&base) {
                    let ugh = u.eval(&desc.combine_unchecked(g, h))?;
                    s.add(&u.space().inner(&ugh, ug)?);
                }
                Ok(s.value().div_count(size))
            })?;
            per_n.push(row);
        }
        (0..shifts.len()).map(|i| per_n.iter().map(|row| row[i].clone()).collect()).collect()
    };
    Ok(CorrelationProfile { shifts: shifts.to_vec(), checkpoints: checkpoints.to_vec(), values, exact: C::EXACT, bound: u.bound() })
}

fn interval_profile<C: Coefficient>(u: &VectorSequence<C>, shifts: &[GroupElement], checkpoints: &[u64]) -> Result<Vec<Vec<C>>> {
    let offsets: Vec<i64> = shifts
        .iter()
        .map(|h| match h {
            GroupElement::Int(k) => *k,
            _ => unreachable!("interval families live on the integer line"),
        })
        .collect();
    let nmax = *checkpoints.last().unwrap() as i64;
    let lo = 1 + offsets.iter().copied().min().unwrap_or(0).min(0);
    let hi = nmax + offsets.iter().copied().max().unwrap_or(0).max(0);
    let cache = (lo..=hi).map(|n| u.eval(&GroupElement::Int(n))).collect::<Result<Vec<_>>>()?;
    let at = |n: i64| &cache[(n - lo) as usize];
    map_shifts(&offsets, |&k| {
        let mut s = CompensatedSum::<C>::new();
        let mut row = Vec::with_capacity(checkpoints.len());
        let mut next = 0;
        for n in 1..=nmax {
            s.add(&u.space().inner(at(n + k), at(n))?);
            if n as u64 == checkpoints[next] {
                row.push(s.value().div_count(n as u64));
                next += 1;
            }
        }
        Ok(row)
    })
}

#[cfg(feature = "parallel")]
fn map_shifts<T: Sync, O: Send>(items: &[T], f: impl Fn(&T) -> Result<O> + Sync + Send) -> Result<Vec<O>> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_shifts<T, O>(items: &[T], f: impl Fn(&T) -> Result<O>) -> Result<Vec<O>> {
    items.iter().map(f).collect()
}

impl<C: Coefficient> CorrelationProfile<C> {
    pub fn index_of(&self, h: &GroupElement) -> Option<usize> {
        self.shifts.iter().position(|s| s == h)
    }

    /// `|γ_h(N)|` as floats.
    pub fn moduli(&self, i: usize) -> Vec<f64> {
        self.values[i].iter().map(|v| v.to_complex().norm()).collect()
    }

    /// `γ_h(N)` as complex floats.
    pub fn complex_values(&self, i: usize) -> Vec<Complex64> {
        self.values[i].iter().map(C::to_complex).collect()
    }
}

/// `sup_{N ≥ W} |γ_h(N)|` over checkpoints; `W` must be a checkpoint.
pub fn tail_sup<C: Coefficient>(profile: &CorrelationProfile<C>, h: usize, w: u64) -> Result<f64> {
    let Some(start) = profile.checkpoints.iter().position(|&n| n == w) else {
        bail!(InvalidInput, "window start {w} is not a checkpoint");
    };
    let Some(row) = profile.values.get(h) else {
        bail!(InvalidInput, "no shift with index {h}");
    };
    let tail = &row[start..];
    if tail.is_empty() {
        bail!(InvalidInput, "empty tail");
    }
    Ok(tail.iter().map(|v| v.to_complex().norm()).fold(0.0, f64::max))
}

/// Greedy choice of checkpoints along which every tracked pair average
/// moves less than `tolerance` between consecutive kept indices.
pub fn select_subsequence<C: Coefficient>(
    pairs: &[(VectorSequence<C>, VectorSequence<C>)],
    family: &FolnerFamily,
    tolerance: f64,
    checkpoints: &[u64],
) -> Result<SubsequencePlan> {
    if pairs.is_empty() || pairs.len() > 64 {
        bail!(InvalidInput, "between 1 and 64 pairs are tracked, got {}", pairs.len());
    }
    let traces: Vec<Vec<Complex64>> = pairs
        .iter()
        .map(|(x, y)| Ok(pair_average_trace(x, y, family, checkpoints)?.iter().map(C::to_complex).collect()))
        .collect::<Result<_>>()?;
    let mut kept: Vec<usize> = alloc::vec![0];
    for j in 1..checkpoints.len() {
        let last = *kept.last().unwrap();
        if traces.iter().all(|t| (t[j] - t[last]).norm() < tolerance) {
            kept.push(j);
        }
    }
    if kept.len() < 3 {
        bail!(Degenerate, "only {} of {} checkpoints stabilised within tolerance {tolerance}", kept.len(), checkpoints.len());
    }
    Ok(SubsequencePlan { indices: kept.iter().map(|&j| checkpoints[j]).collect(), tolerance, pairs: pairs.len() })
}

/// `⟨x, y⟩_H` at finite stage along `plan`, with a stabilisation report.
pub fn sequence_inner_product<C: Coefficient>(
    x: &VectorSequence<C>,
    y: &VectorSequence<C>,
    family: &FolnerFamily,
    plan: &SubsequencePlan,
) -> Result<SequenceInnerProduct<C>> {
    let values = pair_average_trace(x, y, family, &plan.indices)?;
    let fluctuation = values.windows(2).skip(1).map(|w| (w[1].to_complex() - w[0].to_complex()).norm()).fold(0.0, f64::max);
    let trace: Vec<(u64, C)> = plan.indices.iter().copied().zip(values).collect();
    Ok(SequenceInnerProduct {
        value: trace.last().expect("nonempty plan").1.clone(),
        fluctuation,
        stabilized: fluctuation <= plan.tolerance,
        trace,
    })
}

/// `(1/|F_N|) Σ ‖u(g)‖²`.
pub fn mean_norm_sq<C: Coefficient>(u: &VectorSequence<C>, family: &FolnerFamily, n: u64) -> Result<C> {
    Ok(pair_average_trace(u, u, family, &[n])?.pop().expect("one checkpoint"))
}

/// `(1/|F_N|) Σ ‖u(g + h)‖²`.
pub fn shifted_mean_norm_sq<C: Coefficient>(u: &VectorSequence<C>, h: &GroupElement, family: &FolnerFamily, n: u64) -> Result<C> {
    let desc = u.group().clone();
    desc.check(h)?;
    let mut s = CompensatedSum::<C>::new();
    for g in family.elements(&desc, n)? {
        let v = u.eval(&desc.combine_unchecked(&g, h))?;
        s.add(&u.space().norm_sq(&v)?);
    }
    Ok(s.value().div_count(size_of(&desc, family, n)))
}
