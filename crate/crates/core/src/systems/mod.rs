//! Desk-scale measure-preserving `G`-systems and symbolic observables.
//!
//! The action convention is Koopman: `(T_g f)(x) = f(σ_g x)`.
//!
//! * Finite permutation systems: `(T_g f)[i] = f[σ_g(i)]`, where `σ_g` is
//!   the permutation of the image of `g` in the declared finite quotient.
//! * Torus rotations: `σ_g x = x + α(g)`, so the mode `e(k·x)` picks up the
//!   phase `e(k·α(g))`.
//! * Bernoulli shifts: `(σ_g x)_c = x_{c+g}`, so a cylinder window moves by
//!   `+g`.

mod arcs;
mod bernoulli;
mod finite;
mod torus;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

pub use arcs::ArcSet;
pub use bernoulli::{BernoulliShift, Cylinder};
pub use finite::FinitePermutation;
pub use torus::TorusRotation;

use crate::error::{bail, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::rational::Rational;
use crate::scalar::Coefficient;

/// Largest number of terms a product observable may carry.
pub const MAX_OBSERVABLE_TERMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    FinitePermutation(FinitePermutation),
    TorusRotation(TorusRotation),
    BernoulliShift(BernoulliShift),
}

/// A measure-preserving action of `group`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    group: GroupDescriptor,
    kind: SystemKind,
}

/// A bounded function on the system's space, in symbolic form.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable<C> {
    /// Values on atoms.
    Finite(Vec<C>),
    /// Trigonometric polynomial: frequency vector to coefficient.
    Torus(BTreeMap<Vec<i64>, C>),
    /// Combination of cylinder indicators.
    Bernoulli(BTreeMap<Cylinder, C>),
}

impl System {
    pub fn new(group: GroupDescriptor, kind: SystemKind) -> Result<Self> {
        group.validate()?;
        match &kind {
            SystemKind::FinitePermutation(s) => s.validate_for(&group)?,
            SystemKind::TorusRotation(s) => s.validate_for(&group)?,
            SystemKind::BernoulliShift(_) => {}
        }
        Ok(System { group, kind })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// The constant function `1`.
    pub fn one<C: Coefficient>(&self) -> Observable<C> {
        self.constant(C::one())
    }

    pub fn constant<C: Coefficient>(&self, c: C) -> Observable<C> {
        match &self.kind {
            SystemKind::FinitePermutation(s) => Observable::Finite(alloc::vec![c; s.atoms()]),
            SystemKind::TorusRotation(s) => Observable::Torus(single(alloc::vec![0; s.dim()], c)),
            SystemKind::BernoulliShift(_) => Observable::Bernoulli(single(Cylinder::full(), c)),
        }
    }

    /// Checks that `f` has the shape of this system's observables.
    pub fn check<C: Coefficient>(&self, f: &Observable<C>) -> Result<()> {
        match (&self.kind, f) {
            (SystemKind::FinitePermutation(s), Observable::Finite(v)) if v.len() == s.atoms() => Ok(()),
            (SystemKind::TorusRotation(s), Observable::Torus(m)) if m.keys().all(|k| k.len() == s.dim()) => Ok(()),
            (SystemKind::BernoulliShift(s), Observable::Bernoulli(m)) => {
                for c in m.keys() {
                    s.check_cylinder(&self.group, c)?;
                }
                Ok(())
            }
            _ => bail!(Mismatch, "observable does not belong to this system"),
        }
    }

    /// `T_g f`.
    pub fn act<C: Coefficient>(&self, g: &GroupElement, f: &Observable<C>) -> Result<Observable<C>> {
        self.group.check(g)?;
        self.check(f)?;
        Ok(self.act_unchecked(g, f))
    }

    pub(crate) fn act_unchecked<C: Coefficient>(&self, g: &GroupElement, f: &Observable<C>) -> Observable<C> {
        match (&self.kind, f) {
            (SystemKind::FinitePermutation(s), Observable::Finite(v)) => {
                let sigma = s.permutation_of(&s.image(g));
                Observable::Finite(sigma.iter().map(|&j| v[j].clone()).collect())
            }
            (SystemKind::TorusRotation(s), Observable::Torus(m)) => {
                let a = s.alpha(g);
                Observable::Torus(
                    m.iter()
                        .map(|(k, c)| {
                            let mut theta = crate::Angle::ZERO;
                            for (ki, ai) in k.iter().zip(&a) {
                                theta = theta + ai.scale(*ki);
                            }
                            (k.clone(), c.mul(&C::phase(&theta)))
                        })
                        .collect(),
                )
            }
            (SystemKind::BernoulliShift(_), Observable::Bernoulli(m)) => {
                Observable::Bernoulli(m.iter().map(|(cyl, c)| (cyl.translate(&self.group, g), c.clone())).collect())
            }
            _ => unreachable!("checked observable"),
        }
    }

    /// `⟨f1, f2⟩ = ∫ f1 · conj(f2)`.
    pub fn inner<C: Coefficient>(&self, f1: &Observable<C>, f2: &Observable<C>) -> Result<C> {
        self.check(f1)?;
        self.check(f2)?;
        Ok(self.inner_unchecked(f1, f2))
    }

    pub(crate) fn inner_unchecked<C: Coefficient>(&self, f1: &Observable<C>, f2: &Observable<C>) -> C {
        let mut acc = crate::scalar::CompensatedSum::<C>::new();
        match (&self.kind, f1, f2) {
            (SystemKind::FinitePermutation(s), Observable::Finite(a), Observable::Finite(b)) => {
                for ((w, x), y) in s.weights().iter().zip(a).zip(b) {
                    if !x.is_zero() && !y.is_zero() {
                        acc.add(&C::from_rational(w).mul(&x.mul(&y.conj())));
                    }
                }
            }
            (SystemKind::TorusRotation(_), Observable::Torus(a), Observable::Torus(b)) => {
                for (k, x) in a {
                    if let Some(y) = b.get(k) {
                        acc.add(&x.mul(&y.conj()));
                    }
                }
            }
            (SystemKind::BernoulliShift(s), Observable::Bernoulli(a), Observable::Bernoulli(b)) => {
                // μ(A ∩ B) = μ(A) μ(B) unless the windows overlap, so the
                // sum is (Σ x μ(A)) conj(Σ y μ(B)) plus overlap corrections.
                let mean = |m: &BTreeMap<Cylinder, C>| {
                    let mut t = crate::scalar::CompensatedSum::<C>::new();
                    for (c, x) in m {
                        t.add(&C::from_rational(&s.measure(c)).mul(x));
                    }
                    t.value()
                };
                acc.add(&mean(a).mul(&mean(b).conj()));
                let entries: Vec<(&Cylinder, &C)> = b.iter().collect();
                let mut by_coord: BTreeMap<&GroupElement, Vec<usize>> = BTreeMap::new();
                for (j, (cb, _)) in entries.iter().enumerate() {
                    for g in cb.window() {
                        by_coord.entry(g).or_default().push(j);
                    }
                }
                let mut partners: Vec<usize> = Vec::new();
                for (ca, x) in a {
                    partners.clear();
                    for g in ca.window() {
                        if let Some(js) = by_coord.get(g) {
                            partners.extend_from_slice(js);
                        }
                    }
                    partners.sort_unstable();
                    partners.dedup();
                    let ma = s.measure(ca);
                    for &j in &partners {
                        let (cb, y) = entries[j];
                        let joint = s.measure_of_intersection(ca, cb).unwrap_or_default();
                        let corr = joint - &ma * s.measure(cb);
                        acc.add(&C::from_rational(&corr).mul(&x.mul(&y.conj())));
                    }
                }
            }
            _ => unreachable!("checked observables"),
        }
        acc.value()
    }

    /// `∫ f = ⟨f, 1⟩`.
    pub fn integral<C: Coefficient>(&self, f: &Observable<C>) -> Result<C> {
        self.inner(f, &self.one())
    }

    /// `⟨T_g f, f⟩`, the Fourier coefficient of the spectral measure of `f`.
    pub fn correlation<C: Coefficient>(&self, f: &Observable<C>, g: &GroupElement) -> Result<C> {
        let tf = self.act(g, f)?;
        Ok(self.inner_unchecked(&tf, f))
    }

    /// Pointwise product.
    pub fn multiply<C: Coefficient>(&self, f1: &Observable<C>, f2: &Observable<C>) -> Result<Observable<C>> {
        self.check(f1)?;
        self.check(f2)?;
        self.multiply_unchecked(f1, f2)
    }

    pub(crate) fn multiply_unchecked<C: Coefficient>(&self, f1: &Observable<C>, f2: &Observable<C>) -> Result<Observable<C>> {
        match (&self.kind, f1, f2) {
            (SystemKind::FinitePermutation(_), Observable::Finite(a), Observable::Finite(b)) => {
                Ok(Observable::Finite(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()))
            }
            (SystemKind::TorusRotation(_), Observable::Torus(a), Observable::Torus(b)) => {
                let mut out: BTreeMap<Vec<i64>, C> = BTreeMap::new();
                for (k, x) in a {
                    for (l, y) in b {
                        let kl: Vec<i64> = k.iter().zip(l).map(|(s, t)| s + t).collect();
                        accumulate(&mut out, kl, x.mul(y));
                        if out.len() > MAX_OBSERVABLE_TERMS {
                            return Err(crate::Error::SizeLimit {
                                what: "product observable frequencies",
                                size: out.len() as u128,
                                budget: MAX_OBSERVABLE_TERMS as u128,
                            });
                        }
                    }
                }
                Ok(Observable::Torus(prune(out)))
            }
            (SystemKind::BernoulliShift(_), Observable::Bernoulli(a), Observable::Bernoulli(b)) => {
                let mut out: BTreeMap<Cylinder, C> = BTreeMap::new();
                for (ca, x) in a {
                    for (cb, y) in b {
                        if let Some(c) = ca.intersect(cb) {
                            accumulate(&mut out, c, x.mul(y));
                            if out.len() > MAX_OBSERVABLE_TERMS {
                                return Err(crate::Error::SizeLimit {
                                    what: "product observable cylinders",
                                    size: out.len() as u128,
                                    budget: MAX_OBSERVABLE_TERMS as u128,
                                });
                            }
                        }
                    }
                }
                Ok(Observable::Bernoulli(prune(out)))
            }
            _ => unreachable!("checked observables"),
        }
    }

    /// `E[f | I_T]` for finite permutation systems, by orbit means.
    pub fn invariant_projection<C: Coefficient>(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.check(f)?;
        match (&self.kind, f) {
            (SystemKind::FinitePermutation(s), Observable::Finite(v)) => Ok(Observable::Finite(s.project(v))),
            _ => bail!(Unsupported, "invariant projection is computed symbolically for finite permutation systems only"),
        }
    }

    /// `E[f | I_T]` computed analytically for every kind: orbit means on
    /// finite systems, the invariant frequencies of a rotation, and `∫ f`
    /// for Bernoulli shifts of infinite groups.
    pub fn invariant_part<C: Coefficient>(&self, f: &Observable<C>) -> Result<Observable<C>> {
        self.check(f)?;
        match (&self.kind, f) {
            (SystemKind::FinitePermutation(s), Observable::Finite(v)) => Ok(Observable::Finite(s.project(v))),
            (SystemKind::TorusRotation(s), Observable::Torus(m)) => {
                Ok(Observable::Torus(m.iter().filter(|(k, _)| s.is_invariant_frequency(k)).map(|(k, c)| (k.clone(), c.clone())).collect()))
            }
            (SystemKind::BernoulliShift(_), _) => {
                if self.group.is_finite() {
                    bail!(Unsupported, "Bernoulli shifts of finite groups are not ergodic");
                }
                Ok(self.constant(self.inner_unchecked(f, &self.one())))
            }
            _ => unreachable!("checked observable"),
        }
    }

    pub fn is_ergodic(&self) -> Result<bool> {
        match &self.kind {
            SystemKind::FinitePermutation(s) => Ok(s.is_ergodic()),
            _ => bail!(Unsupported, "ergodicity is decided for finite permutation systems only"),
        }
    }

    /// Ergodicity of every subgroup of index `≤ m` of the image of `G` in
    /// the declared quotient.
    pub fn is_totally_ergodic(&self, m: u64) -> Result<bool> {
        match &self.kind {
            SystemKind::FinitePermutation(s) => s.is_totally_ergodic(m),
            _ => bail!(Unsupported, "total ergodicity is decided for finite permutation systems only"),
        }
    }

    /// Parses `finite …`, `torus …` or `bernoulli …` for the given group.
    pub fn parse(group: &GroupDescriptor, s: &str) -> Result<Self> {
        let (head, kv) = crate::text::head_and_pairs(s)?;
        let kind = match head.as_str() {
            "finite" => SystemKind::FinitePermutation(FinitePermutation::parse(&kv, s)?),
            "torus" => SystemKind::TorusRotation(TorusRotation::parse(&kv, s)?),
            "bernoulli" => SystemKind::BernoulliShift(BernoulliShift::parse(&kv, s)?),
            _ => bail!(Parse, "unknown system {head:?}"),
        };
        System::new(group.clone(), kind)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SystemKind::FinitePermutation(s) => write!(f, "{s}"),
            SystemKind::TorusRotation(s) => write!(f, "{s}"),
            SystemKind::BernoulliShift(s) => write!(f, "{s}"),
        }
    }
}

impl<C: Coefficient> Observable<C> {
    /// Upper bound on the sup norm.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Observable::Finite(v) => v.iter().map(C::abs_bound).fold(0.0, f64::max),
            Observable::Torus(m) => m.values().map(C::abs_bound).sum(),
            Observable::Bernoulli(m) => m.values().map(C::abs_bound).sum(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        match self {
            Observable::Finite(v) => Observable::Finite(v.iter().map(|x| x.mul(c)).collect()),
            Observable::Torus(m) => Observable::Torus(prune(m.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect())),
            Observable::Bernoulli(m) => Observable::Bernoulli(prune(m.iter().map(|(k, x)| (k.clone(), x.mul(c))).collect())),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (Observable::Finite(a), Observable::Finite(b)) if a.len() == b.len() => {
                Ok(Observable::Finite(a.iter().zip(b).map(|(x, y)| x.add(y)).collect()))
            }
            (Observable::Torus(a), Observable::Torus(b)) => Ok(Observable::Torus(merge(a, b))),
            (Observable::Bernoulli(a), Observable::Bernoulli(b)) => Ok(Observable::Bernoulli(merge(a, b))),
            _ => bail!(Mismatch, "observables of different shapes"),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&C::one().neg()))
    }

    /// Exact (or floating) zero test on the symbolic representation.
    pub fn is_zero(&self) -> bool {
        match self {
            Observable::Finite(v) => v.iter().all(C::is_zero),
            Observable::Torus(m) => m.values().all(C::is_zero),
            Observable::Bernoulli(m) => m.values().all(C::is_zero),
        }
    }

    /// The same observable with complex floating-point coefficients.
    pub fn to_complex(&self) -> Observable<num_complex::Complex64> {
        match self {
            Observable::Finite(v) => Observable::Finite(v.iter().map(C::to_complex).collect()),
            Observable::Torus(m) => Observable::Torus(m.iter().map(|(k, x)| (k.clone(), x.to_complex())).collect()),
            Observable::Bernoulli(m) => Observable::Bernoulli(m.iter().map(|(k, x)| (k.clone(), x.to_complex())).collect()),
        }
    }

    /// The trigonometric monomial `c · e(k·x)`.
    pub fn mode(k: Vec<i64>, c: C) -> Self {
        Observable::Torus(single(k, c))
    }

    /// `c · 1[x_window = pattern]`.
    pub fn cylinder(cyl: Cylinder, c: C) -> Self {
        Observable::Bernoulli(single(cyl, c))
    }

    /// Indicator of a set of atoms.
    pub fn indicator(atoms: usize, set: &[usize]) -> Self {
        let mut v = alloc::vec![C::zero(); atoms];
        for &i in set {
            v[i] = C::one();
        }
        Observable::Finite(v)
    }
}

/// `1[x_0 = s] − P(s)` style single-coordinate mean-zero observable for a
/// Bernoulli shift: `1[x_at = symbol] − p_symbol`.
pub fn centered_coordinate<C: Coefficient>(sys: &System, at: GroupElement, symbol: u32) -> Result<Observable<C>> {
    let SystemKind::BernoulliShift(b) = sys.kind() else {
        bail!(Mismatch, "centered coordinates belong to Bernoulli shifts");
    };
    sys.group().check(&at)?;
    let p = b.probability(symbol)?;
    let mut m = BTreeMap::new();
    m.insert(Cylinder::new(alloc::vec![(at, symbol)])?, C::one());
    m.insert(Cylinder::full(), C::from_rational(&-p));
    Ok(Observable::Bernoulli(m))
}

fn single<K: Ord, C>(k: K, c: C) -> BTreeMap<K, C> {
    let mut m = BTreeMap::new();
    m.insert(k, c);
    m
}

fn accumulate<K: Ord, C: Coefficient>(m: &mut BTreeMap<K, C>, k: K, c: C) {
    match m.get_mut(&k) {
        Some(x) => *x = x.add(&c),
        None => {
            m.insert(k, c);
        }
    }
}

fn merge<K: Ord + Clone, C: Coefficient>(a: &BTreeMap<K, C>, b: &BTreeMap<K, C>) -> BTreeMap<K, C> {
    let mut out = a.clone();
    for (k, c) in b {
        accumulate(&mut out, k.clone(), c.clone());
    }
    prune(out)
}

fn prune<K: Ord, C: Coefficient>(m: BTreeMap<K, C>) -> BTreeMap<K, C> {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub(crate) fn rational_sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::from_integer(0.into()), |a, b| a + b)
}

#[cfg(test)]
mod tests;
