//! Exact arithmetic in `Z[ζ_p]` for odd primes `p`, plus reduction modulo
//! cyclotomic polynomials `Φ_q` used for exact zero tests of rational phase
//! sums.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::angle::Angle;
use crate::rational::Rational;

/// `Σ_k c_k ζ_p^k` with integer coefficients, kept in the canonical form
/// `c_{p-1} = 0` (using `1 + ζ + … + ζ^{p-1} = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    p: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicValue {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 3, "cyclotomic order must be an odd prime");
        CyclotomicValue { p, coeffs: vec![0; p as usize] }
    }

    pub fn one(p: u32) -> Self {
        Self::root(p, 0)
    }

    /// `ζ_p^k`.
    pub fn root(p: u32, k: i64) -> Self {
        let mut v = Self::zero(p);
        v.coeffs[k.rem_euclid(p as i64) as usize] = 1;
        v.canonicalize();
        v
    }

    /// From raw (not necessarily canonical) coefficients `c_0..c_{p-1}`.
    pub fn from_coeffs(p: u32, raw: Vec<i64>) -> Self {
        assert_eq!(raw.len(), p as usize, "need exactly p coefficients");
        let mut v = CyclotomicValue { p, coeffs: raw };
        v.canonicalize();
        v
    }

    fn canonicalize(&mut self) {
        let top = self.coeffs[self.p as usize - 1];
        if top != 0 {
            for c in self.coeffs.iter_mut() {
                *c -= top;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical coefficients (last entry always 0).
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Adds `ζ^k` in place.
    pub fn add_root(&mut self, k: i64) {
        let p = self.p as i64;
        let k = k.rem_euclid(p) as usize;
        if k == self.p as usize - 1 {
            for c in self.coeffs.iter_mut() {
                *c -= 1;
            }
            self.coeffs[k] += 1;
        } else {
            self.coeffs[k] += 1;
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        CyclotomicValue { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Complex conjugate, `ζ^k ↦ ζ^{-k}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut raw = vec![0; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            raw[(p - k) % p] += c;
        }
        Self::from_coeffs(self.p, raw)
    }

    /// If the value is a single root of unity `ζ^k`, returns `k`.
    pub fn as_root(&self) -> Option<u32> {
        let p = self.p;
        (0..p).find(|&k| *self == Self::root(p, k as i64))
    }

    /// If the value is an integer, returns it.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc += Angle::rational(k as i64, self.p as i64).phasor() * c as f64;
            }
        }
        acc
    }

    fn check_same(&self, o: &Self) {
        assert_eq!(self.p, o.p, "cyclotomic orders differ");
    }
}

impl Add for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn add(self, o: &CyclotomicValue) -> CyclotomicValue {
        self.check_same(o);
        CyclotomicValue { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn sub(self, o: &CyclotomicValue) -> CyclotomicValue {
        self.check_same(o);
        CyclotomicValue { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn mul(self, o: &CyclotomicValue) -> CyclotomicValue {
        self.check_same(o);
        let p = self.p as usize;
        let mut raw = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                raw[(i + j) % p] += a * b;
            }
        }
        CyclotomicValue::from_coeffs(self.p, raw)
    }
}

impl Neg for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn neg(self) -> CyclotomicValue {
        self.scale(-1)
    }
}

impl fmt::Display for CyclotomicValue {
    /// `zeta<p>[c_0,…,c_{p-2}]` over canonical coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta{}[", self.p)?;
        for (i, c) in self.coeffs[..self.p as usize - 1].iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Integer coefficients of the cyclotomic polynomial `Φ_q`, lowest degree
/// first.
pub fn cyclotomic_polynomial(q: usize) -> Vec<i64> {
    assert!(q >= 1);
    // x^q - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; q + 1];
    num[0] = -1;
    num[q] = 1;
    for d in 1..q {
        if q.is_multiple_of(d) {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic.
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces `Σ_k coeffs[k] x^k` modulo `Φ_q`; the result has length
/// `deg Φ_q`. The input value `Σ coeffs[k] e(k/q)` is zero iff the result
/// is all zeros.
pub fn reduce_mod_cyclotomic(q: usize, coeffs: &[Rational]) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(q);
    let deg = phi.len() - 1;
    let mut rem: Vec<Rational> = coeffs.to_vec();
    if rem.len() < deg {
        rem.resize(deg, Rational::zero());
    }
    for i in (deg..rem.len()).rev() {
        let c = core::mem::replace(&mut rem[i], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, &d) in phi.iter().enumerate().take(deg) {
            if d != 0 {
                let t = &c * Rational::from_integer(d.into());
                rem[i - deg + j] -= t;
            }
        }
    }
    rem.truncate(deg);
    rem
}
