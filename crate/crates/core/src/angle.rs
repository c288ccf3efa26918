//! Angles on the circle `R/Z`, stored as an exact rational part plus an
//! integer combination of a few tagged irrational constants.
//!
//! Because `1, √2, √3, √5` are linearly independent over `Q`, two angles are
//! equal mod 1 exactly when their tag coefficients agree and their rational
//! parts agree mod 1, so equality and hashing are exact even though the
//! numerical value is only known to double precision.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{bail, Error, Result};

/// Irrational constants an [`Angle`] may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrationalTag {
    /// `√2 − 1`
    Sqrt2Minus1,
    /// `√3 − 1`
    Sqrt3Minus1,
    /// `(√5 − 1)/2`, the fractional part of the golden ratio.
    GoldenFraction,
}

pub const TAG_COUNT: usize = 3;

impl IrrationalTag {
    pub const ALL: [IrrationalTag; TAG_COUNT] = [IrrationalTag::Sqrt2Minus1, IrrationalTag::Sqrt3Minus1, IrrationalTag::GoldenFraction];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            IrrationalTag::Sqrt2Minus1 => "sqrt2m1",
            IrrationalTag::Sqrt3Minus1 => "sqrt3m1",
            IrrationalTag::GoldenFraction => "golden",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Double-double split `hi + lo` of the constant; `hi` is the nearest
    /// `f64` and `lo` the rounded remainder.
    fn split(self) -> (f64, f64) {
        match self {
            IrrationalTag::Sqrt2Minus1 => (0.41421356237309503, 1.4349369327986523e-17),
            IrrationalTag::Sqrt3Minus1 => (0.7320508075688773, -1.0671460244446628e-17),
            IrrationalTag::GoldenFraction => (0.6180339887498949, -5.432115203682506e-17),
        }
    }

    pub fn value(self) -> f64 {
        self.split().0
    }
}

/// A point of `R/Z`: `num/den + Σ c_t · tag_t (mod 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    num: i64,
    den: i64,
    irr: [i64; TAG_COUNT],
}

impl Angle {
    pub const ZERO: Angle = Angle { num: 0, den: 1, irr: [0; TAG_COUNT] };

    /// `num/den mod 1`.
    pub fn rational(num: i64, den: i64) -> Angle {
        assert!(den != 0, "zero denominator");
        Self::normalized(num as i128, den as i128, [0; TAG_COUNT])
    }

    pub fn tag(tag: IrrationalTag) -> Angle {
        let mut irr = [0; TAG_COUNT];
        irr[tag.index()] = 1;
        Angle { num: 0, den: 1, irr }
    }

    fn normalized(num: i128, den: i128, irr: [i64; TAG_COUNT]) -> Angle {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den).max(1);
        let (num, den) = (num / g, den / g);
        Angle {
            num: i64::try_from(num).expect("angle numerator overflow"),
            den: i64::try_from(den).expect("angle denominator overflow"),
            irr,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0 && self.irr == [0; TAG_COUNT]
    }

    pub fn is_rational(&self) -> bool {
        self.irr == [0; TAG_COUNT]
    }

    /// Rational part as `(num, den)` with `0 ≤ num < den` in lowest terms.
    pub fn rational_part(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn irrational_part(&self) -> [i64; TAG_COUNT] {
        self.irr
    }

    pub fn coefficient(&self, tag: IrrationalTag) -> i64 {
        self.irr[tag.index()]
    }

    /// Same irrational part, rational part dropped.
    pub fn irrational_only(&self) -> Angle {
        Angle { num: 0, den: 1, irr: self.irr }
    }

    /// `k · self`.
    pub fn scale(&self, k: i64) -> Angle {
        let mut irr = self.irr;
        for c in irr.iter_mut() {
            *c = c.checked_mul(k).expect("angle coefficient overflow");
        }
        Self::normalized(self.num as i128 * k as i128, self.den as i128, irr)
    }

    /// Scaling by an arbitrary-size integer, reduced modulo the rational
    /// denominator first. Requires the angle to be rational.
    pub fn scale_big(&self, k: &num_bigint::BigInt) -> Angle {
        use num_traits::ToPrimitive;
        assert!(self.is_rational(), "scale_big on irrational angle");
        let den = num_bigint::BigInt::from(self.den);
        let k = k.mod_floor(&den).to_i64().expect("reduced below denominator");
        self.scale(k)
    }

    /// Representative in `[0, 1)`, accurate to about one ulp of 1.
    pub fn to_f64(&self) -> f64 {
        let mut acc = self.num as f64 / self.den as f64;
        for tag in IrrationalTag::ALL {
            let c = self.irr[tag.index()];
            if c == 0 {
                continue;
            }
            let (hi, lo) = tag.split();
            let cf = c as f64;
            let p = cf * hi;
            let err = libm::fma(cf, hi, -p) + cf * lo;
            acc += p - libm::floor(p);
            acc += err;
        }
        let r = acc - libm::floor(acc);
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }

    /// `e(θ) = exp(2πiθ)`; quarter-turn rational angles are exact.
    pub fn phasor(&self) -> Complex64 {
        if self.is_rational() {
            match (self.num, self.den) {
                (0, 1) => return Complex64::new(1.0, 0.0),
                (1, 2) => return Complex64::new(-1.0, 0.0),
                (1, 4) => return Complex64::new(0.0, 1.0),
                (3, 4) => return Complex64::new(0.0, -1.0),
                _ => {}
            }
        }
        let mut t = self.to_f64();
        if t >= 0.5 {
            t -= 1.0;
        }
        let x = 2.0 * core::f64::consts::PI * t;
        Complex64::new(libm::cos(x), libm::sin(x))
    }
}

/// `e(x)` for a plain `f64` angle.
pub fn phasor_f64(x: f64) -> Complex64 {
    let t = x - libm::floor(x + 0.5);
    let a = 2.0 * core::f64::consts::PI * t;
    Complex64::new(libm::cos(a), libm::sin(a))
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, o: Angle) -> Angle {
        let mut irr = self.irr;
        for (a, b) in irr.iter_mut().zip(o.irr) {
            *a = a.checked_add(b).expect("angle coefficient overflow");
        }
        let den = (self.den as i128).lcm(&(o.den as i128));
        let num = self.num as i128 * (den / self.den as i128) + o.num as i128 * (den / o.den as i128);
        Self::normalized(num, den, irr)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        self.scale(-1)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, o: Angle) -> Angle {
        self + (-o)
    }
}

impl Ord for Angle {
    fn cmp(&self, o: &Self) -> Ordering {
        self.irr.cmp(&o.irr).then_with(|| (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128)))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.num != 0 {
            parts.push(alloc::format!("{}/{}", self.num, self.den));
        }
        for tag in IrrationalTag::ALL {
            match self.irr[tag.index()] {
                0 => {}
                1 => parts.push(String::from(tag.name())),
                c => parts.push(alloc::format!("{c}*{}", tag.name())),
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

impl core::str::FromStr for Angle {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) form: `+`-separated terms, each
    /// a rational `a/b` (or integer) or `[c*]tag`.
    fn from_str(s: &str) -> Result<Angle> {
        let s = s.trim();
        if s.is_empty() {
            bail!(Parse, "empty angle");
        }
        let mut acc = Angle::ZERO;
        for term in s.split('+') {
            let term = term.trim();
            let (coef, name) = match term.split_once('*') {
                Some((c, n)) => (Some(c.trim()), n.trim()),
                None => (None, term),
            };
            if let Some(tag) = IrrationalTag::from_name(name) {
                let c: i64 = match coef {
                    Some(c) => c.parse().map_err(|_| Error::Parse(alloc::format!("bad coefficient {c:?}")))?,
                    None => 1,
                };
                acc = acc + Angle::tag(tag).scale(c);
            } else if coef.is_none() {
                let (n, d) = match name.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (name, "1"),
                };
                let n: i64 = n.parse().map_err(|_| Error::Parse(alloc::format!("bad angle term {term:?}")))?;
                let d: i64 = d.parse().map_err(|_| Error::Parse(alloc::format!("bad angle term {term:?}")))?;
                if d == 0 {
                    bail!(Parse, "zero denominator in {term:?}");
                }
                acc = acc + Angle::rational(n, d);
            } else {
                bail!(Parse, "unknown angle constant {name:?}");
            }
        }
        Ok(acc)
    }
}
