//! Bounded vector-valued sequences on a group.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::angle::Angle;
use crate::error::{bail, Result};
use crate::group::{GroupDescriptor, GroupElement, GroupSelfMap};
use crate::scalar::{Coefficient, CompensatedSum};
use crate::systems::{Observable, System};

/// The Hilbert space a sequence takes values in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    /// `C`
    Scalars,
    /// `L²` of a system's space.
    Functions(Arc<System>),
}

/// A vector of a [`Space`].
#[derive(Debug, Clone, PartialEq)]
pub enum Vector<C> {
    Scalar(C),
    Function(Observable<C>),
}

type Rule<C> = Arc<dyn Fn(&GroupElement) -> Result<Vector<C>> + Send + Sync>;

#[derive(Clone)]
pub enum Generator<C> {
    /// `g ↦ T_{a(g)} f`
    Orbit { f: Observable<C>, map: GroupSelfMap },
    /// `g ↦ e(Σ θ_i a(g)_i)`; the angles may be irrational.
    Phase { theta: Vec<Angle>, map: GroupSelfMap },
    /// `g ↦ v`
    Constant(Vector<C>),
    /// Pointwise product of the factors.
    Product(Vec<VectorSequence<C>>),
    /// An arbitrary rule with a declared bound.
    Explicit(Rule<C>),
}

/// A bounded map `u: G → H`.
#[derive(Clone)]
pub struct VectorSequence<C> {
    group: GroupDescriptor,
    space: Space,
    generator: Generator<C>,
    bound: f64,
}

impl Space {
    pub fn inner<C: Coefficient>(&self, x: &Vector<C>, y: &Vector<C>) -> Result<C> {
        match (self, x, y) {
            (Space::Scalars, Vector::Scalar(a), Vector::Scalar(b)) => Ok(a.mul(&b.conj())),
            (Space::Functions(sys), Vector::Function(f), Vector::Function(g)) => sys.inner(f, g),
            _ => bail!(Mismatch, "vectors do not belong to the same space"),
        }
    }

    /// `‖x‖²` in the coefficient field.
    pub fn norm_sq<C: Coefficient>(&self, x: &Vector<C>) -> Result<C> {
        self.inner(x, x)
    }

    pub fn zero<C: Coefficient>(&self) -> Vector<C> {
        match self {
            Space::Scalars => Vector::Scalar(C::zero()),
            Space::Functions(sys) => Vector::Function(sys.constant(C::zero())),
        }
    }

    pub(crate) fn multiply<C: Coefficient>(&self, x: &Vector<C>, y: &Vector<C>) -> Result<Vector<C>> {
        match (self, x, y) {
            (_, Vector::Scalar(a), Vector::Scalar(b)) => Ok(Vector::Scalar(a.mul(b))),
            (_, Vector::Scalar(a), Vector::Function(f)) | (_, Vector::Function(f), Vector::Scalar(a)) => Ok(Vector::Function(f.scale(a))),
            (Space::Functions(sys), Vector::Function(f), Vector::Function(g)) => Ok(Vector::Function(sys.multiply(f, g)?)),
            _ => bail!(Mismatch, "cannot multiply functions without a system"),
        }
    }
}

impl<C: Coefficient> Vector<C> {
    pub fn scale(&self, c: &C) -> Self {
        match self {
            Vector::Scalar(a) => Vector::Scalar(a.mul(c)),
            Vector::Function(f) => Vector::Function(f.scale(c)),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (Vector::Scalar(a), Vector::Scalar(b)) => Ok(Vector::Scalar(a.sub(b))),
            (Vector::Function(f), Vector::Function(g)) => Ok(Vector::Function(f.sub(g)?)),
            _ => bail!(Mismatch, "vectors of different kinds"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Scalar(a) => a.is_zero(),
            Vector::Function(f) => f.is_zero(),
        }
    }

    pub fn to_complex(&self) -> Vector<num_complex::Complex64> {
        match self {
            Vector::Scalar(a) => Vector::Scalar(a.to_complex()),
            Vector::Function(f) => Vector::Function(f.to_complex()),
        }
    }
}

impl<C: Coefficient> VectorSequence<C> {
    /// `g ↦ T_{a(g)} f` in `L²` of `system`.
    pub fn orbit(system: Arc<System>, f: Observable<C>, map: GroupSelfMap) -> Result<Self> {
        system.check(&f)?;
        let bound = f.sup_bound();
        Ok(VectorSequence { group: system.group().clone(), space: Space::Functions(system), generator: Generator::Orbit { f, map }, bound })
    }

    /// `g ↦ e(Σ θ_i a(g)_i)`.
    pub fn phase(group: GroupDescriptor, theta: Vec<Angle>, map: GroupSelfMap) -> Self {
        VectorSequence { group, space: Space::Scalars, generator: Generator::Phase { theta, map }, bound: 1.0 }
    }

    pub fn constant(group: GroupDescriptor, space: Space, v: Vector<C>) -> Result<Self> {
        let bound = match &v {
            Vector::Scalar(a) => a.abs_bound(),
            Vector::Function(f) => f.sup_bound(),
        };
        if let (Space::Functions(sys), Vector::Function(f)) = (&space, &v) {
            sys.check(f)?;
        }
        Ok(VectorSequence { group, space, generator: Generator::Constant(v), bound })
    }

    /// Pointwise product; at most one factor may be function-valued unless
    /// all function factors share a system.
    pub fn product(factors: Vec<VectorSequence<C>>) -> Result<Self> {
        let Some(first) = factors.first() else {
            bail!(InvalidInput, "empty product");
        };
        let group = first.group.clone();
        let mut space = Space::Scalars;
        let mut bound = 1.0;
        for s in &factors {
            if s.group != group {
                bail!(Mismatch, "factors over different groups");
            }
            if let Space::Functions(sys) = &s.space {
                match &space {
                    Space::Scalars => space = Space::Functions(sys.clone()),
                    Space::Functions(t) if t == sys => {}
                    _ => bail!(Mismatch, "function factors from different systems"),
                }
            }
            bound *= s.bound;
        }
        Ok(VectorSequence { group, space, generator: Generator::Product(factors), bound })
    }

    /// A sequence given by an arbitrary rule; `bound` is trusted and can be
    /// spot-checked with [`VectorSequence::spot_check_bound`].
    pub fn explicit(
        group: GroupDescriptor,
        space: Space,
        bound: f64,
        rule: impl Fn(&GroupElement) -> Result<Vector<C>> + Send + Sync + 'static,
    ) -> Self {
        VectorSequence { group, space, generator: Generator::Explicit(Arc::new(rule)), bound }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn generator(&self) -> &Generator<C> {
        &self.generator
    }

    /// `u(g)`.
    pub fn eval(&self, g: &GroupElement) -> Result<Vector<C>> {
        match &self.generator {
            Generator::Orbit { f, map } => {
                let Space::Functions(sys) = &self.space else { unreachable!("orbit sequences are function-valued") };
                let ag = map.apply(&self.group, g)?;
                Ok(Vector::Function(sys.act_unchecked(&ag, f)))
            }
            Generator::Phase { theta, map } => {
                let ag = map.apply(&self.group, g)?;
                let mut t = Angle::ZERO;
                for (i, x) in ag.coords() {
                    if let Some(a) = theta.get(i as usize - 1) {
                        t = t + a.scale(x);
                    }
                }
                Ok(Vector::Scalar(C::phase(&t)))
            }
            Generator::Constant(v) => Ok(v.clone()),
            Generator::Product(fs) => {
                let mut acc = fs[0].eval(g)?;
                for s in &fs[1..] {
                    acc = self.space.multiply(&acc, &s.eval(g)?)?;
                }
                Ok(acc)
            }
            Generator::Explicit(rule) => rule(g),
        }
    }

    /// Checks `‖u(g)‖ ≤ bound` (in `L²`) at the given points.
    pub fn spot_check_bound(&self, points: &[GroupElement]) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.bound * self.bound);
        for g in points {
            let v = self.eval(g)?;
            let n = self.space.norm_sq(&v)?.to_complex().re;
            if n > self.bound * self.bound + tol {
                bail!(InvalidInput, "‖u({g})‖² = {n} exceeds the declared bound {}", self.bound);
            }
        }
        Ok(())
    }
}

impl<C> fmt::Debug for VectorSequence<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.generator {
            Generator::Orbit { .. } => "orbit",
            Generator::Phase { .. } => "phase",
            Generator::Constant(_) => "constant",
            Generator::Product(_) => "product",
            Generator::Explicit(_) => "explicit",
        };
        f.debug_struct("VectorSequence").field("group", &self.group).field("kind", &kind).field("bound", &self.bound).finish()
    }
}

/// Compensated running sum of vectors in a fixed space.
#[derive(Debug, Clone)]
pub(crate) enum VectorSum<C: Coefficient> {
    Empty,
    Scalar(CompensatedSum<C>),
    Finite(Vec<CompensatedSum<C>>),
    Torus(alloc::collections::BTreeMap<Vec<i64>, CompensatedSum<C>>),
    Bernoulli(alloc::collections::BTreeMap<crate::systems::Cylinder, CompensatedSum<C>>),
}

impl<C: Coefficient> VectorSum<C> {
    pub(crate) fn add(&mut self, v: &Vector<C>) {
        match (&mut *self, v) {
            (VectorSum::Empty, Vector::Scalar(_)) => *self = VectorSum::Scalar(CompensatedSum::new()),
            (VectorSum::Empty, Vector::Function(Observable::Finite(x))) => {
                *self = VectorSum::Finite(alloc::vec![CompensatedSum::new(); x.len()])
            }
            (VectorSum::Empty, Vector::Function(Observable::Torus(_))) => *self = VectorSum::Torus(Default::default()),
            (VectorSum::Empty, Vector::Function(Observable::Bernoulli(_))) => *self = VectorSum::Bernoulli(Default::default()),
            _ => {}
        }
        match (self, v) {
            (VectorSum::Scalar(s), Vector::Scalar(a)) => s.add(a),
            (VectorSum::Finite(s), Vector::Function(Observable::Finite(x))) => {
                for (si, xi) in s.iter_mut().zip(x) {
                    si.add(xi);
                }
            }
            (VectorSum::Torus(s), Vector::Function(Observable::Torus(m))) => {
                for (k, x) in m {
                    s.entry(k.clone()).or_default().add(x);
                }
            }
            (VectorSum::Bernoulli(s), Vector::Function(Observable::Bernoulli(m))) => {
                for (k, x) in m {
                    s.entry(k.clone()).or_default().add(x);
                }
            }
            _ => panic!("vector of a different kind added to a running sum"),
        }
    }

    /// The sum divided by `n`.
    pub(crate) fn mean(&self, space: &Space, n: u64) -> Vector<C> {
        match self {
            VectorSum::Empty => space.zero(),
            VectorSum::Scalar(s) => Vector::Scalar(s.value().div_count(n)),
            VectorSum::Finite(s) => Vector::Function(Observable::Finite(s.iter().map(|x| x.value().div_count(n)).collect())),
            VectorSum::Torus(s) => Vector::Function(Observable::Torus(
                s.iter().map(|(k, x)| (k.clone(), x.value().div_count(n))).filter(|(_, c)| !c.is_zero()).collect(),
            )),
            VectorSum::Bernoulli(s) => Vector::Function(Observable::Bernoulli(
                s.iter().map(|(k, x)| (k.clone(), x.value().div_count(n))).filter(|(_, c)| !c.is_zero()).collect(),
            )),
        }
    }
}
