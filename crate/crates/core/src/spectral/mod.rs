//! Spectral measures of observables, estimated from correlations.
//!
//! For `Z` and `Z^d` (`d ≤ 3`) the spectral measure of `f` is the measure on
//! the torus whose Fourier coefficients are `γ(n) = ⟨T_n f, f⟩`. It is
//! estimated by Fejér densities and Wiener atom masses at finite `N`. For
//! `⊕ Z/p` and `F_p[t]`, when the action on `f` factors through a finite
//! level, the measure is computed exactly on the dual of that level.
//!
//! Classification tags are diagnostics of finite data. `lebesgue_like` does
//! not certify Lebesgue spectrum, and `atomic_dominant` does not certify
//! discrete spectrum.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::angle::{phasor_f64, Angle};
use crate::error::{bail, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::scalar::{Coefficient, CompensatedSum};
use crate::systems::{Observable, System, SystemKind};
use crate::Scalar;

/// Largest lattice rank with Fejér support.
pub const MAX_DIM: usize = 3;

/// `γ(n)` on the box `[-L, L]^d`, row-major with the last coordinate
/// fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlations {
    dim: usize,
    max_lag: u64,
    values: Vec<Complex64>,
}

impl Correlations {
    pub fn new(dim: usize, max_lag: u64, values: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            bail!(Unsupported, "correlations in dimension {dim}");
        }
        let side = 2 * max_lag as usize + 1;
        if values.len() != side.pow(dim as u32) {
            bail!(InvalidInput, "expected {} values, got {}", side.pow(dim as u32), values.len());
        }
        Ok(Correlations { dim, max_lag, values })
    }

    pub fn from_fn(dim: usize, max_lag: u64, mut gamma: impl FnMut(&[i64]) -> Complex64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            bail!(Unsupported, "correlations in dimension {dim}");
        }
        let side = 2 * max_lag as usize + 1;
        let total = side.pow(dim as u32);
        let mut values = Vec::with_capacity(total);
        let mut k = vec![0i64; dim];
        for idx in 0..total {
            let mut r = idx;
            for c in k.iter_mut().rev() {
                *c = (r % side) as i64 - max_lag as i64;
                r /= side;
            }
            values.push(gamma(&k));
        }
        Ok(Correlations { dim, max_lag, values })
    }

    /// `γ(n) = ⟨T_n f, f⟩` for an action of `Z` or `Z^d`.
    pub fn of_observable(system: &System, f: &Observable<Complex64>, max_lag: u64) -> Result<Self> {
        system.check(f)?;
        let desc = system.group().clone();
        let dim = match desc {
            GroupDescriptor::IntegerLine => 1,
            GroupDescriptor::IntegerLattice { d } => d,
            _ => bail!(Unsupported, "Fejér estimates need an integer lattice, got {desc}"),
        };
        let side = (2 * max_lag as u128 + 1).pow(dim as u32);
        if side > crate::DEFAULT_BUDGET as u128 {
            return Err(crate::Error::SizeLimit { what: "correlation box", size: side, budget: crate::DEFAULT_BUDGET as u128 });
        }
        let mut err = None;
        let c = Self::from_fn(dim, max_lag, |k| {
            let g = if dim == 1 { GroupElement::Int(k[0]) } else { GroupElement::Dense(k.to_vec()) };
            match system.correlation(f, &g) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(c),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_lag(&self) -> u64 {
        self.max_lag
    }

    fn side(&self) -> usize {
        2 * self.max_lag as usize + 1
    }

    pub fn get(&self, n: &[i64]) -> Option<Complex64> {
        if n.len() != self.dim || n.iter().any(|x| x.unsigned_abs() > self.max_lag) {
            return None;
        }
        let side = self.side() as i64;
        let idx = n.iter().fold(0i64, |acc, &x| acc * side + x + self.max_lag as i64);
        Some(self.values[idx as usize])
    }

    pub fn gamma0(&self) -> f64 {
        self.get(&vec![0; self.dim]).map_or(0.0, |c| c.re)
    }

    /// Checks `γ(-n) = conj γ(n)` to within `tol · max(1, |γ(0)|)`.
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        let scale = tol * self.gamma0().abs().max(1.0);
        let n = self.values.len();
        for (i, v) in self.values.iter().enumerate() {
            // Reversing the row-major index negates every coordinate.
            let w = self.values[n - 1 - i];
            if (v - w.conj()).norm() > scale {
                bail!(InvalidInput, "correlations are not conjugate-symmetric");
            }
        }
        Ok(())
    }

    /// `(1/N) Σ_{n<N} |γ(n)|²` over `n = 0..N` (one-dimensional).
    pub fn mean_square(&self, n: u64) -> Result<f64> {
        self.require_1d(n)?;
        let mut s = CompensatedSum::<Complex64>::new();
        for k in 0..n as i64 {
            s.add(&Complex64::new(self.get(&[k]).unwrap().norm_sqr(), 0.0));
        }
        Ok(s.value().re / n as f64)
    }

    fn require_1d(&self, n: u64) -> Result<()> {
        if self.dim != 1 {
            bail!(Unsupported, "one-dimensional correlations required");
        }
        if n == 0 || n > self.max_lag {
            bail!(InvalidInput, "need lags up to {n}, have {}", self.max_lag);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralTag {
    AtomicDominant,
    LebesgueLike,
    Mixed,
    Inconclusive,
}

impl fmt::Display for SpectralTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralTag::AtomicDominant => "atomic_dominant",
            SpectralTag::LebesgueLike => "lebesgue_like",
            SpectralTag::Mixed => "mixed",
            SpectralTag::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyThresholds {
    pub atomic_share: f64,
    pub lebesgue_share: f64,
    /// Largest relative deviation of a flat density.
    pub flatness: f64,
    /// Tolerance of the mass normalization.
    pub normalization: f64,
    /// Most negative admissible density sample.
    pub positivity: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        ClassifyThresholds { atomic_share: 0.9, lebesgue_share: 0.05, flatness: 0.1, normalization: 1e-6, positivity: -1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateVariant {
    /// Samples at `θ = j / resolution` per coordinate, row-major.
    FejerDensity { dim: usize, resolution: usize, samples: Vec<f64> },
    AtomScan {
        atoms: Vec<Atom>,
        total_mass: f64,
        /// Relative deviation `max |d - γ(0)| / γ(0)` of the Fejér density.
        flatness: f64,
        min_sample: f64,
        mean_sample: f64,
        resolution: usize,
    },
    /// Masses indexed by `y ∈ (Z/p)^level` in lexicographic order.
    FiniteDualMass {
        p: u32,
        level: u32,
        masses: Vec<Scalar>,
        /// Total `γ(0)`, exact.
        gamma0_exact: Scalar,
        /// Every mass is a nonnegative rational.
        exact_nonnegative: bool,
        /// `Σ mass = γ(0)` holds exactly.
        parseval: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    /// Free-form description of the system and observable.
    pub source: String,
    /// Checkpoint `N`, or the level for finite duals.
    pub n: u64,
    pub gamma0: f64,
    pub variant: EstimateVariant,
    pub classification: Option<(SpectralTag, ClassifyThresholds)>,
}

impl SpectralEstimate {
    fn new(n: u64, gamma0: f64, variant: EstimateVariant) -> Self {
        SpectralEstimate { source: String::new(), n, gamma0, variant, classification: None }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// Attaches the tag of [`classify_spectrum`].
    pub fn classified(mut self, t: &ClassifyThresholds) -> Self {
        self.classification = Some((classify_spectrum(&self, t), *t));
        self
    }

    /// Share of the sampled density within circular distance `radius` of
    /// `center` (one-dimensional Fejér densities).
    pub fn mass_within(&self, center: f64, radius: f64) -> Option<f64> {
        let EstimateVariant::FejerDensity { dim: 1, resolution, samples } = &self.variant else {
            return None;
        };
        let mut inside = 0.0;
        let mut total = 0.0;
        for (j, s) in samples.iter().enumerate() {
            let d = circular_distance(j as f64 / *resolution as f64, center);
            total += s;
            if d <= radius {
                inside += s;
            }
        }
        (total > 0.0).then(|| inside / total)
    }

    /// Tab-separated rows: grid point or character index, then value.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        match &self.variant {
            EstimateVariant::FejerDensity { dim, resolution, samples } => {
                out.push_str("theta\tdensity\n");
                for (idx, s) in samples.iter().enumerate() {
                    let mut r = idx;
                    let mut coords = vec![0usize; *dim];
                    for c in coords.iter_mut().rev() {
                        *c = r % resolution;
                        r /= resolution;
                    }
                    let t: Vec<String> = coords.iter().map(|c| format!("{}", *c as f64 / *resolution as f64)).collect();
                    out.push_str(&format!("{}\t{s:e}\n", t.join(",")));
                }
            }
            EstimateVariant::AtomScan { atoms, .. } => {
                out.push_str("theta\tmass\n");
                for a in atoms {
                    out.push_str(&format!("{}\t{:e}\n", a.theta, a.mass));
                }
            }
            EstimateVariant::FiniteDualMass { p, level, masses, .. } => {
                out.push_str("character\tmass\n");
                for (idx, m) in masses.iter().enumerate() {
                    let y = residues_of(idx, *p, *level);
                    let y: Vec<String> = y.iter().map(|v| format!("{v}")).collect();
                    let v = match m.as_rational() {
                        Some(r) => crate::rational::format(&r),
                        None => format!("{:e}", m.to_complex().re),
                    };
                    out.push_str(&format!("[{}]\t{v}\n", y.join(",")));
                }
            }
        }
        out
    }
}

fn frac(x: f64) -> f64 {
    x - libm::floor(x)
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// `e(-k j / r)` for `j = 0..r`.
fn phasor_table(r: usize) -> Vec<Complex64> {
    (0..r).map(|j| Angle::rational(-(j as i64), r as i64).phasor()).collect()
}

/// Fejér density `Σ_{|n|<N} Π_i (1 - |n_i|/N) γ(n) e(-n·θ)` on the grid
/// `θ_i = j / resolution`.
pub fn fejer_density(corr: &Correlations, n: u64, resolution: usize) -> Result<SpectralEstimate> {
    if n < 2 {
        bail!(InvalidInput, "Fejér densities need N ≥ 2");
    }
    if n - 1 > corr.max_lag {
        bail!(InvalidInput, "need lags below {n}, have up to {}", corr.max_lag);
    }
    if (resolution as u64) < n {
        bail!(InvalidInput, "grid resolution {resolution} is below N = {n}");
    }
    let cells = (resolution as u128).pow(corr.dim as u32);
    if cells > crate::DEFAULT_BUDGET as u128 {
        return Err(crate::Error::SizeLimit { what: "Fejér grid", size: cells, budget: crate::DEFAULT_BUDGET as u128 });
    }
    corr.check_symmetric(1e-9)?;
    let samples = fejer_samples(corr, n, resolution);
    Ok(SpectralEstimate::new(n, corr.gamma0(), EstimateVariant::FejerDensity { dim: corr.dim, resolution, samples }))
}

/// Axis-by-axis transform of the weighted lag box onto the grid.
fn fejer_samples(corr: &Correlations, n: u64, r: usize) -> Vec<f64> {
    let lag = (n - 1) as i64;
    let m = (2 * lag + 1) as usize;
    let table = phasor_table(r);
    let weight = |k: i64| 1.0 - k.unsigned_abs() as f64 / n as f64;
    // Crop to |k| < N.
    let d = corr.dim;
    let mut data: Vec<Complex64> = Vec::with_capacity(m.pow(d as u32));
    let mut k = vec![0i64; d];
    for idx in 0..m.pow(d as u32) {
        let mut rem = idx;
        for c in k.iter_mut().rev() {
            *c = (rem % m) as i64 - lag;
            rem /= m;
        }
        let w: f64 = k.iter().map(|&x| weight(x)).product();
        data.push(corr.get(&k).unwrap() * w);
    }
    // Current shape: axes before `axis` have length r, the rest length m.
    for axis in 0..d {
        let before = r.pow(axis as u32);
        let after = m.pow((d - axis - 1) as u32);
        let mut out = vec![Complex64::new(0.0, 0.0); before * r * after];
        for b in 0..before {
            for a in 0..after {
                for j in 0..r {
                    let mut s = CompensatedSum::<Complex64>::new();
                    for (i, kk) in (-lag..=lag).enumerate() {
                        let x = data[(b * m + i) * after + a];
                        let t = table[((kk * j as i64).rem_euclid(r as i64)) as usize];
                        s.add(&(x * t));
                    }
                    out[(b * r + j) * after + a] = s.value();
                }
            }
        }
        data = out;
    }
    data.into_iter().map(|c| c.re).collect()
}

/// `|(1/N) Σ_{n=1}^{N} γ(n) e(-nθ)|`.
pub fn wiener_atom_mass(corr: &Correlations, theta: f64, n: u64) -> Result<f64> {
    Ok(wiener_sum(corr, theta, n)?.norm())
}

fn wiener_sum(corr: &Correlations, theta: f64, n: u64) -> Result<Complex64> {
    corr.require_1d(n)?;
    let base = corr.max_lag as usize;
    Ok(wiener_slice(&corr.values[base..], theta, n))
}

/// `values[k] = γ(k)` for `k ≥ 0`.
fn wiener_slice(values: &[Complex64], theta: f64, n: u64) -> Complex64 {
    let mut s = CompensatedSum::<Complex64>::new();
    for (k, v) in values.iter().enumerate().take(n as usize + 1).skip(1) {
        s.add(&(v * phasor_f64(-(k as f64) * frac(theta))));
    }
    s.value() / n as f64
}

/// Exact `(1/N) Σ_{n=1}^{N} γ(n) e(-nθ)` for `gammas[n - 1] = γ(n)`.
pub fn wiener_sum_exact(gammas: &[Scalar], theta: &Angle) -> Result<Scalar> {
    if gammas.is_empty() {
        bail!(InvalidInput, "empty correlation list");
    }
    let mut s = CompensatedSum::<Scalar>::new();
    for (k, g) in gammas.iter().enumerate() {
        s.add(&g.mul(&Scalar::phase(&theta.scale(-(k as i64 + 1)))));
    }
    Ok(s.value().div_count(gammas.len() as u64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomScanParams {
    pub resolution: usize,
    /// Candidates are local maxima above `peak_factor × median`.
    pub peak_factor: f64,
    /// Scanning stops at the first candidate below `min_mass · γ(0)`.
    pub min_mass: f64,
    pub max_atoms: usize,
}

impl Default for AtomScanParams {
    fn default() -> Self {
        AtomScanParams { resolution: 4096, peak_factor: 3.0, min_mass: 1e-3, max_atoms: 32 }
    }
}

/// Detects atoms of a one-dimensional spectral measure.
///
/// Each round takes the largest local maximum of the residual Fejér
/// density above `peak_factor` times its median, refines it by ternary
/// search on the Wiener mass within one grid cell, records the atom and
/// subtracts `mass · e(nθ)` from the residual correlations. Subtracting
/// keeps Fejér sidelobes of a strong atom from being reported as atoms.
pub fn atom_scan(corr: &Correlations, n: u64, params: &AtomScanParams) -> Result<SpectralEstimate> {
    corr.require_1d(n)?;
    let r = params.resolution.max(n as usize);
    let density = fejer_density(corr, n, r)?;
    let EstimateVariant::FejerDensity { samples, .. } = &density.variant else { unreachable!() };
    let gamma0 = corr.gamma0();
    let min_sample = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_sample = samples.iter().sum::<f64>() / samples.len() as f64;
    let flatness = if gamma0 > 0.0 { samples.iter().map(|s| (s - gamma0).abs()).fold(0.0, f64::max) / gamma0 } else { f64::INFINITY };

    let base = corr.max_lag as usize;
    let mut residual: Vec<Complex64> = corr.values[base..=base + n as usize].to_vec();
    let mut atoms: Vec<Atom> = Vec::new();
    let cell = 1.0 / r as f64;
    while atoms.len() < params.max_atoms && gamma0 > 0.0 {
        let Some(j) = strongest_peak(&residual, n, r, params.peak_factor) else { break };
        let (mut lo, mut hi) = (j as f64 * cell - cell, j as f64 * cell + cell);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if wiener_slice(&residual, m1, n).norm() < wiener_slice(&residual, m2, n).norm() {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let theta = frac(0.5 * (lo + hi));
        let mass = wiener_slice(&residual, theta, n).norm();
        if mass < params.min_mass * gamma0 {
            break;
        }
        for (k, v) in residual.iter_mut().enumerate() {
            *v -= phasor_f64(k as f64 * theta) * mass;
        }
        atoms.push(Atom { theta, mass });
    }
    atoms.sort_by(|a, b| b.mass.total_cmp(&a.mass));
    let total_mass = atoms.iter().map(|a| a.mass).sum();
    Ok(SpectralEstimate::new(n, gamma0, EstimateVariant::AtomScan { atoms, total_mass, flatness, min_sample, mean_sample, resolution: r }))
}

/// Grid index of the largest strict local maximum of the Fejér density of
/// `γ(k) = residual[k]` (`k ≥ 0`, conjugate-symmetric extension).
fn strongest_peak(residual: &[Complex64], n: u64, r: usize, factor: f64) -> Option<usize> {
    let table = phasor_table(r);
    let samples: Vec<f64> = (0..r)
        .map(|j| {
            let mut s = CompensatedSum::<Complex64>::new();
            for k in 1..n as usize {
                let w = 1.0 - k as f64 / n as f64;
                s.add(&(residual[k] * table[(k * j) % r] * w));
            }
            residual[0].re + 2.0 * s.value().re
        })
        .collect();
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[r / 2];
    let floor = factor * median.max(0.0);
    let mut best: Option<usize> = None;
    for j in 0..r {
        let s = samples[j];
        let left = samples[(j + r - 1) % r];
        let right = samples[(j + 1) % r];
        if s > left && s >= right && s > floor && best.is_none_or(|b| s > samples[b]) {
            best = Some(j);
        }
    }
    best
}

/// Exact spectral masses on the dual of the level-`level` quotient of
/// `⊕ Z/p` or `F_p[t]`.
///
/// `mass(χ_y) = p^{-level} Σ_{g ∈ F_level} γ(g) e(-y·g/p)`, where `F_level`
/// holds the elements supported on coordinates `1..=level`. The action
/// on `f` must factor through that quotient: `γ(e_i) = γ(0)` for every
/// coordinate `i > level` that can act on `f`, otherwise the first failing
/// `e_i` is reported.
pub fn dual_level_measure(system: &System, f: &Observable<Scalar>, level: u32, budget: u64) -> Result<SpectralEstimate> {
    system.check(f)?;
    let desc = system.group();
    let p = match desc {
        GroupDescriptor::PrimeDirectSum { p } | GroupDescriptor::PolynomialRing { p } => *p,
        _ => bail!(Unsupported, "finite dual levels need ⊕Z/p or F_p[t], got {desc}"),
    };
    if level == 0 {
        bail!(InvalidInput, "level must be positive");
    }
    let size = (p as u128).checked_pow(level).unwrap_or(u128::MAX);
    if size > budget as u128 {
        return Err(crate::Error::SizeLimit { what: "dual level", size, budget: budget as u128 });
    }
    let size = size as usize;
    let gamma0 = system.inner(f, f)?;
    let last = match system.kind() {
        SystemKind::FinitePermutation(fp) => fp.mapped_coordinates().max().unwrap_or(0),
        SystemKind::TorusRotation(t) => t.generators().len() as u32,
        SystemKind::BernoulliShift(_) => match f {
            Observable::Bernoulli(m) => m.keys().flat_map(|c| c.window()).map(GroupElement::max_support).max().unwrap_or(0) + 1,
            _ => 0,
        },
    };
    for i in level + 1..=last.max(level) {
        let e = desc.unit(i)?;
        if system.correlation(f, &e)? != gamma0 {
            bail!(Unsupported, "action does not factor through level {level}: witness g = {e}");
        }
    }
    if let SystemKind::BernoulliShift(_) = system.kind() {
        let e = desc.unit(last.max(level + 1))?;
        if system.correlation(f, &e)? != gamma0 {
            bail!(Unsupported, "action does not factor through level {level}: witness g = {e}");
        }
    }

    let mut data: Vec<Scalar> = Vec::with_capacity(size);
    for idx in 0..size {
        let y = residues_of(idx, p, level);
        let coords: Vec<(u32, i64)> = y.iter().enumerate().map(|(i, &v)| (i as u32 + 1, v as i64)).collect();
        let g = desc.from_coords(&coords)?;
        data.push(system.correlation(f, &g)?);
    }
    // p-point transforms along each coordinate; index digit `i` (most
    // significant first) is coordinate `i + 1`.
    let pu = p as usize;
    for axis in 0..level as usize {
        let stride = pu.pow(level - 1 - axis as u32);
        let mut out = vec![Scalar::zero(); size];
        for (idx, slot) in out.iter_mut().enumerate() {
            let yj = (idx / stride) % pu;
            let base = idx - yj * stride;
            let mut s = CompensatedSum::<Scalar>::new();
            for x in 0..pu {
                let v = &data[base + x * stride];
                if !v.is_zero() {
                    s.add(&v.mul(&Scalar::phase(&Angle::rational(-((x * yj) as i64), p as i64))));
                }
            }
            *slot = s.value();
        }
        data = out;
    }
    let masses: Vec<Scalar> = data.iter().map(|m| m.div_count(size as u64)).collect();
    let mut exact_nonnegative = true;
    let mut total = CompensatedSum::<Scalar>::new();
    for m in &masses {
        total.add(m);
        if !m.is_nonnegative_rational() {
            exact_nonnegative = false;
        }
    }
    let parseval = total.value().sub(&gamma0).is_zero();
    Ok(SpectralEstimate::new(
        level as u64,
        gamma0.to_complex().re,
        EstimateVariant::FiniteDualMass { p, level, masses, gamma0_exact: gamma0, exact_nonnegative, parseval },
    ))
}

/// Residues of index `idx`, most significant digit first.
fn residues_of(idx: usize, p: u32, level: u32) -> Vec<u32> {
    let mut y = vec![0u32; level as usize];
    let mut r = idx;
    for v in y.iter_mut().rev() {
        *v = (r % p as usize) as u32;
        r /= p as usize;
    }
    y
}

/// Tags an estimate.
///
/// * Fejér densities: `inconclusive` if normalization or positivity fails,
///   `lebesgue_like` if flat, `inconclusive` otherwise (no atom data).
/// * Atom scans: by atom share `total_mass / γ(0)` and flatness.
/// * Finite duals: relative to Haar measure on the level quotient. The
///   atom share is the largest single mass over `γ(0)`; flatness compares
///   each mass with `γ(0) / p^level`. Normalization means exact
///   nonnegativity (or a nonnegative float value for irrational masses)
///   and exact Parseval.
pub fn classify_spectrum(est: &SpectralEstimate, t: &ClassifyThresholds) -> SpectralTag {
    let g0 = est.gamma0;
    if g0 <= 0.0 || !g0.is_finite() {
        return SpectralTag::Inconclusive;
    }
    let tag = |share: f64, flat: f64| {
        if share >= t.atomic_share {
            SpectralTag::AtomicDominant
        } else if share <= t.lebesgue_share && flat <= t.flatness {
            SpectralTag::LebesgueLike
        } else {
            SpectralTag::Mixed
        }
    };
    match &est.variant {
        EstimateVariant::FejerDensity { samples, .. } => {
            let mean = samples.iter().sum::<f64>() / samples.len() as f64;
            let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
            if (mean - g0).abs() > t.normalization * g0.max(1.0) || min < t.positivity {
                return SpectralTag::Inconclusive;
            }
            let flat = samples.iter().map(|s| (s - g0).abs()).fold(0.0, f64::max) / g0;
            if flat <= t.flatness {
                SpectralTag::LebesgueLike
            } else {
                SpectralTag::Inconclusive
            }
        }
        EstimateVariant::AtomScan { total_mass, flatness, min_sample, mean_sample, .. } => {
            if (mean_sample - g0).abs() > t.normalization * g0.max(1.0) || *min_sample < t.positivity || *total_mass > g0 + t.normalization
            {
                return SpectralTag::Inconclusive;
            }
            tag(total_mass / g0, *flatness)
        }
        EstimateVariant::FiniteDualMass { masses, exact_nonnegative, parseval, .. } => {
            let vals: Vec<f64> = masses.iter().map(|m| m.to_complex().re).collect();
            let nonneg = *exact_nonnegative || vals.iter().all(|&v| v >= t.positivity);
            if !nonneg || !parseval {
                return SpectralTag::Inconclusive;
            }
            let uniform = g0 / vals.len() as f64;
            let share = vals.iter().copied().fold(0.0, f64::max) / g0;
            let flat = vals.iter().map(|v| (v - uniform).abs()).fold(0.0, f64::max) / uniform;
            if vals.len() == 1 {
                // The trivial quotient cannot separate the two types.
                return SpectralTag::Inconclusive;
            }
            // Haar measure on a finite quotient is itself a sum of atoms, so
            // only flatness separates it from a concentrated measure.
            if share >= t.atomic_share {
                SpectralTag::AtomicDominant
            } else if flat <= t.flatness {
                SpectralTag::LebesgueLike
            } else {
                SpectralTag::Mixed
            }
        }
    }
}
