//! Coefficient fields for observables and averages.
//!
//! [`Scalar`] is the exact field: finite sums `Σ r_j e(θ_j)` with rational
//! `r_j` and [`Angle`]s `θ_j`. `Complex64` is the floating-point field. Both
//! implement [`Coefficient`], so systems and averaging code run unchanged in
//! either mode.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::angle::{Angle, TAG_COUNT};
use crate::cyclotomic::{reduce_mod_cyclotomic, CyclotomicValue};
use crate::rational::{self, Rational};

/// Field operations needed by observables, sequences and averages.
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `e(θ)`.
    fn phase(theta: &Angle) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
    /// An upper bound on the modulus.
    fn abs_bound(&self) -> f64;

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    /// Multiplies by `1/n`.
    fn div_count(&self, n: u64) -> Self {
        self.mul(&Self::from_rational(&Rational::new(1.into(), n.into())))
    }

    /// One step of compensated summation. Exact fields ignore `comp`.
    fn add_compensated(sum: &mut Self, comp: &mut Self, x: &Self) {
        let _ = comp;
        *sum = sum.add(x);
    }
}

/// Running sum with Neumaier compensation in floating-point mode.
#[derive(Debug, Clone)]
pub struct CompensatedSum<C: Coefficient> {
    sum: C,
    comp: C,
}

impl<C: Coefficient> Default for CompensatedSum<C> {
    fn default() -> Self {
        CompensatedSum { sum: C::zero(), comp: C::zero() }
    }
}

impl<C: Coefficient> CompensatedSum<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: &C) {
        C::add_compensated(&mut self.sum, &mut self.comp, x);
    }

    pub fn value(&self) -> C {
        self.sum.add(&self.comp)
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl Coefficient for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational::to_f64(r), 0.0)
    }
    fn phase(theta: &Angle) -> Self {
        theta.phasor()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn abs_bound(&self) -> f64 {
        self.norm()
    }
    fn div_count(&self, n: u64) -> Self {
        self / n as f64
    }
    fn add_compensated(sum: &mut Self, comp: &mut Self, x: &Self) {
        neumaier(&mut sum.re, &mut comp.re, x.re);
        neumaier(&mut sum.im, &mut comp.im, x.im);
    }
}

/// Exact element of the field generated by `Q` and the unit phasors
/// `e(θ)`: a finite sum `Σ r_j e(θ_j)`.
///
/// Zero tests group terms by irrational part and reduce each group's
/// rational-angle polynomial modulo the relevant cyclotomic polynomial, so
/// `e(0) + e(1/3) + e(2/3)` is recognised as zero. Distinct irrational parts
/// are treated as independent.
#[derive(Clone, Default)]
pub struct Scalar {
    terms: BTreeMap<Angle, Rational>,
}

impl Scalar {
    pub fn rational(r: Rational) -> Scalar {
        Self::term(r, Angle::ZERO)
    }

    pub fn integer(n: i64) -> Scalar {
        Self::rational(rational::int(n))
    }

    /// `r · e(θ)`.
    pub fn term(r: Rational, theta: Angle) -> Scalar {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(theta, r);
        }
        Scalar { terms }
    }

    pub fn from_cyclotomic(v: &CyclotomicValue) -> Scalar {
        let p = v.p() as i64;
        let mut s = Scalar::default();
        for (k, &c) in v.coeffs().iter().enumerate() {
            if c != 0 {
                s.push(rational::int(c), Angle::rational(k as i64, p));
            }
        }
        s
    }

    fn push(&mut self, r: Rational, theta: Angle) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(theta).or_insert_with(Rational::zero);
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&theta);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Angle, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Reduced rational-angle polynomials, one per irrational part.
    fn reduced_groups(&self) -> Vec<([i64; TAG_COUNT], usize, Vec<Rational>)> {
        let mut groups: BTreeMap<[i64; TAG_COUNT], Vec<(i64, i64, &Rational)>> = BTreeMap::new();
        for (a, r) in &self.terms {
            let (n, d) = a.rational_part();
            groups.entry(a.irrational_part()).or_default().push((n, d, r));
        }
        let mut out = Vec::with_capacity(groups.len());
        for (irr, ts) in groups {
            let q = ts.iter().fold(1i64, |acc, &(_, d, _)| acc.lcm(&d)) as usize;
            let mut coeffs = vec![Rational::zero(); q];
            for (n, d, r) in ts {
                coeffs[(n * (q as i64 / d)) as usize] += r;
            }
            out.push((irr, q, reduce_mod_cyclotomic(q, &coeffs)));
        }
        out
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut value = Rational::zero();
        for (irr, _, rem) in self.reduced_groups() {
            if irr == [0; TAG_COUNT] {
                // A constant remainder evaluates to itself.
                if rem.iter().skip(1).any(|r| !r.is_zero()) {
                    return None;
                }
                value += rem[0].clone();
            } else if !rem.iter().all(|r| r.is_zero()) {
                return None;
            }
        }
        Some(value)
    }

    pub fn real_sign(&self) -> Option<core::cmp::Ordering> {
        self.as_rational().map(|r| r.cmp(&Rational::zero()))
    }

    pub fn is_nonnegative_rational(&self) -> bool {
        self.as_rational().is_some_and(|r| !r.is_negative())
    }
}

impl Coefficient for Scalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        Scalar::default()
    }
    fn one() -> Self {
        Scalar::integer(1)
    }
    fn from_rational(r: &Rational) -> Self {
        Scalar::rational(r.clone())
    }
    fn phase(theta: &Angle) -> Self {
        Scalar::term(Rational::one(), *theta)
    }
    fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (a, r) in &o.terms {
            s.push(r.clone(), *a);
        }
        s
    }
    fn sub(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (a, r) in &o.terms {
            s.push(-r.clone(), *a);
        }
        s
    }
    fn mul(&self, o: &Self) -> Self {
        let mut s = Scalar::default();
        for (a, r) in &self.terms {
            for (b, t) in &o.terms {
                s.push(r * t, *a + *b);
            }
        }
        s
    }
    fn conj(&self) -> Self {
        let mut s = Scalar::default();
        for (a, r) in &self.terms {
            s.push(r.clone(), -*a);
        }
        s
    }
    fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.reduced_groups().iter().all(|(_, _, rem)| rem.iter().all(|r| r.is_zero()))
    }
    fn to_complex(&self) -> Complex64 {
        let mut sum = CompensatedSum::<Complex64>::new();
        for (a, r) in &self.terms {
            sum.add(&(a.phasor() * rational::to_f64(r)));
        }
        sum.value()
    }
    fn abs_bound(&self) -> f64 {
        self.terms.values().map(|r| rational::to_f64(&r.abs())).sum()
    }
    fn div_count(&self, n: u64) -> Self {
        let d = Rational::new(1.into(), n.into());
        Scalar { terms: self.terms.iter().map(|(a, r)| (*a, r * &d)).collect() }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms || Coefficient::is_zero(&Coefficient::sub(self, o))
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if a.is_zero() {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r}*e({a})")?;
            }
        }
        Ok(())
    }
}
