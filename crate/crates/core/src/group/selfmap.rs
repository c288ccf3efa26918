//! Self-maps `a: G → G`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use super::{GroupDescriptor, GroupElement};
use crate::error::{bail, Error, Result};

/// Largest denominator accepted for coordinatewise powers.
const MAX_POWER_DEN: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSelfMap {
    Identity,
    /// `x_i ↦ ⌊x_i^{num/den}⌋` on every coordinate, `1 < num/den ≤ 4`.
    CoordinatewisePower {
        num: u32,
        den: u32,
    },
    /// `y ↦ Σ_j c_j y^j` in the group's ring.
    RingPolynomial(Vec<GroupElement>),
    /// `out_i = Σ c · in_j` over the entries `(i, j, c)`.
    Homomorphism(Vec<(u32, u32, i64)>),
    /// Applied left to right.
    Composition(Vec<GroupSelfMap>),
}

/// `⌊n^{num/den}⌋`, exact. Negative `n` is allowed only for integer exponents.
pub fn floor_rational_power(n: i64, num: u32, den: u32) -> Result<i64> {
    if den == 0 || num == 0 {
        bail!(InvalidInput, "exponent {num}/{den} is not positive");
    }
    if n < 0 {
        if !num.is_multiple_of(den) {
            bail!(InvalidInput, "negative base {n} for fractional exponent {num}/{den}");
        }
        let e = num / den;
        let m = floor_rational_power(-n, e, 1)?;
        return Ok(if e.is_multiple_of(2) { m } else { -m });
    }
    let x = n as u64;
    if let Some(target) = (x as u128).checked_pow(num) {
        let mut r = libm::floor(libm::pow(x as f64, num as f64 / den as f64)) as u128;
        let le = |r: u128| r.checked_pow(den).is_some_and(|v| v <= target);
        while r > 0 && !le(r) {
            r -= 1;
        }
        while le(r + 1) {
            r += 1;
        }
        return i64::try_from(r).map_err(|_| Error::InvalidInput(alloc::format!("{n}^({num}/{den}) overflows")));
    }
    let r = BigUint::from(x).pow(num).nth_root(den);
    i64::try_from(r).map_err(|_| Error::InvalidInput(alloc::format!("{n}^({num}/{den}) overflows")))
}

impl GroupSelfMap {
    pub fn power(num: u32, den: u32) -> Result<Self> {
        if den == 0 || den > MAX_POWER_DEN || num <= den || num > 4 * den {
            bail!(InvalidInput, "power exponent {num}/{den} must satisfy 1 < a/b <= 4 (b <= {MAX_POWER_DEN})");
        }
        let g = num_integer::gcd(num, den);
        Ok(GroupSelfMap::CoordinatewisePower { num: num / g, den: den / g })
    }

    pub fn ring_polynomial(desc: &GroupDescriptor, coeffs: Vec<GroupElement>) -> Result<Self> {
        if !desc.has_ring_structure() {
            bail!(Unsupported, "{desc} has no ring structure");
        }
        for c in &coeffs {
            desc.check(c)?;
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| desc.is_identity(c)) {
            coeffs.pop();
        }
        Ok(GroupSelfMap::RingPolynomial(coeffs))
    }

    /// `y ↦ y^n` in the ring of `desc`.
    pub fn monomial(desc: &GroupDescriptor, n: usize) -> Result<Self> {
        let mut coeffs = alloc::vec![desc.identity(); n + 1];
        coeffs[n] = ring_one(desc)?;
        Self::ring_polynomial(desc, coeffs)
    }

    pub fn homomorphism(entries: Vec<(u32, u32, i64)>) -> Result<Self> {
        if entries.iter().any(|&(i, j, _)| i == 0 || j == 0) {
            bail!(InvalidInput, "homomorphism indices are 1-based");
        }
        Ok(GroupSelfMap::Homomorphism(entries))
    }

    pub fn apply(&self, desc: &GroupDescriptor, g: &GroupElement) -> Result<GroupElement> {
        desc.check(g)?;
        self.apply_checked(desc, g)
    }

    fn apply_checked(&self, desc: &GroupDescriptor, g: &GroupElement) -> Result<GroupElement> {
        match self {
            GroupSelfMap::Identity => Ok(g.clone()),
            GroupSelfMap::CoordinatewisePower { num, den } => {
                let mut coords = Vec::new();
                for (i, x) in g.coords() {
                    coords.push((i, floor_rational_power(x, *num, *den)?));
                }
                desc.from_coords(&coords)
            }
            GroupSelfMap::RingPolynomial(c) => {
                let mut acc = desc.identity();
                let mut pow = ring_one(desc)?;
                for (j, cj) in c.iter().enumerate() {
                    if j > 0 {
                        pow = ring_mul(desc, &pow, g)?;
                    }
                    if !desc.is_identity(cj) {
                        let term = ring_mul(desc, cj, &pow)?;
                        acc = desc.combine_unchecked(&acc, &term);
                    }
                }
                Ok(acc)
            }
            GroupSelfMap::Homomorphism(m) => {
                let mut coords = Vec::with_capacity(m.len());
                for &(i, j, c) in m {
                    let x = g.coord(j);
                    if x != 0 {
                        coords.push((i, x.checked_mul(c).ok_or_else(|| Error::InvalidInput("integer overflow".into()))?));
                    }
                }
                desc.from_coords(&coords)
            }
            GroupSelfMap::Composition(maps) => {
                let mut x = g.clone();
                for m in maps {
                    x = m.apply_checked(desc, &x)?;
                }
                Ok(x)
            }
        }
    }

    /// For a polynomial map over a ring of characteristic `p`: the first
    /// monomial degree `n ≥ 1` with nonzero coefficient and `p | n`, if any.
    pub fn separability_violation(&self, desc: &GroupDescriptor) -> Result<Option<usize>> {
        let (GroupSelfMap::RingPolynomial(c), Some(p)) = (self, desc.torsion()) else {
            bail!(Unsupported, "separability needs a polynomial map over a ring of odd characteristic");
        };
        Ok((1..c.len()).find(|&n| n % p as usize == 0 && !desc.is_identity(&c[n])))
    }

    /// Checks that the map and its formal derivative are nonconstant and
    /// separable; names the offending monomial otherwise.
    pub fn check_separable_with_derivative(&self, desc: &GroupDescriptor) -> Result<()> {
        if let Some(n) = self.separability_violation(desc)? {
            bail!(InvalidInput, "monomial y^{n} has degree divisible by the characteristic");
        }
        let GroupSelfMap::RingPolynomial(c) = self else { unreachable!() };
        let p = desc.torsion().unwrap_or(1) as usize;
        let mut deriv_degrees = (1..c.len()).filter(|&n| n % p != 0 && !desc.is_identity(&c[n])).map(|n| n - 1);
        let top = deriv_degrees.clone().max().unwrap_or(0);
        if top == 0 {
            bail!(InvalidInput, "the derivative is constant");
        }
        if let Some(m) = deriv_degrees.find(|&m| m > 0 && m % p == 0) {
            bail!(InvalidInput, "derivative monomial y^{m} has degree divisible by the characteristic");
        }
        Ok(())
    }

    /// Canonical text: `identity`, `power 3/2`, `poly c=[0;0;1]`,
    /// `hom m=[(1,1,2),(2,1,1)]`, and `A | B` for composition.
    pub fn parse(desc: &GroupDescriptor, s: &str) -> Result<Self> {
        let parts = crate::text::split_top(s, '|');
        if parts.len() > 1 {
            let maps = parts.into_iter().map(|t| Self::parse(desc, t)).collect::<Result<Vec<_>>>()?;
            return Ok(GroupSelfMap::Composition(maps));
        }
        let s = s.trim();
        if s == "identity" {
            return Ok(GroupSelfMap::Identity);
        }
        if let Some(e) = s.strip_prefix("power ") {
            let (a, b) = e.trim().split_once('/').unwrap_or((e.trim(), "1"));
            let a: u32 = a.parse().map_err(|_| Error::Parse(alloc::format!("bad exponent in {s:?}")))?;
            let b: u32 = b.parse().map_err(|_| Error::Parse(alloc::format!("bad exponent in {s:?}")))?;
            return Self::power(a, b);
        }
        let (head, kv) = crate::text::head_and_pairs(s)?;
        match head.as_str() {
            "poly" => {
                crate::text::expect_keys(&kv, &["c"], s)?;
                let inner = crate::text::bracketed(crate::text::get(&kv, "c", s)?, '[', ']')?;
                let coeffs = crate::text::split_top(inner, ';')
                    .into_iter()
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| desc.parse_element(t))
                    .collect::<Result<Vec<_>>>()?;
                Self::ring_polynomial(desc, coeffs)
            }
            "hom" => {
                crate::text::expect_keys(&kv, &["m"], s)?;
                let inner = crate::text::bracketed(crate::text::get(&kv, "m", s)?, '[', ']')?;
                let mut entries = Vec::new();
                for t in crate::text::split_top(inner, ',').into_iter().filter(|t| !t.trim().is_empty()) {
                    let v: Vec<i64> = crate::text::parse_list(crate::text::bracketed(t, '(', ')')?)?;
                    if v.len() != 3 || v[0] <= 0 || v[1] <= 0 {
                        bail!(Parse, "bad homomorphism entry {t:?}");
                    }
                    entries.push((v[0] as u32, v[1] as u32, v[2]));
                }
                Self::homomorphism(entries)
            }
            _ => bail!(Parse, "unknown self-map {s:?}"),
        }
    }
}

impl fmt::Display for GroupSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSelfMap::Identity => f.write_str("identity"),
            GroupSelfMap::CoordinatewisePower { num, den } => write!(f, "power {num}/{den}"),
            GroupSelfMap::RingPolynomial(c) => write!(f, "poly c=[{}]", crate::text::join(c, ";")),
            GroupSelfMap::Homomorphism(m) => {
                let items: Vec<String> = m.iter().map(|(i, j, c)| alloc::format!("({i},{j},{c})")).collect();
                write!(f, "hom m=[{}]", items.join(","))
            }
            GroupSelfMap::Composition(maps) => write!(f, "{}", crate::text::join(maps, " | ")),
        }
    }
}

fn ring_one(desc: &GroupDescriptor) -> Result<GroupElement> {
    match desc {
        GroupDescriptor::IntegerLine => Ok(GroupElement::Int(1)),
        GroupDescriptor::IntegerLattice { d } => desc.dense(alloc::vec![1; *d]),
        GroupDescriptor::PolynomialRing { .. } | GroupDescriptor::FiniteFieldLevel(_) => desc.unit(1),
        _ => bail!(Unsupported, "{desc} has no ring structure"),
    }
}

fn ring_mul(desc: &GroupDescriptor, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    let overflow = || Error::InvalidInput("integer overflow in ring multiplication".into());
    match (desc, x, y) {
        (GroupDescriptor::IntegerLine, GroupElement::Int(a), GroupElement::Int(b)) => {
            Ok(GroupElement::Int(a.checked_mul(*b).ok_or_else(overflow)?))
        }
        (GroupDescriptor::IntegerLattice { .. }, GroupElement::Dense(a), GroupElement::Dense(b)) => {
            let v = a.iter().zip(b).map(|(s, t)| s.checked_mul(*t).ok_or_else(overflow)).collect::<Result<Vec<_>>>()?;
            Ok(GroupElement::Dense(v))
        }
        (GroupDescriptor::FiniteFieldLevel(f), GroupElement::Dense(a), GroupElement::Dense(b)) => Ok(GroupElement::Dense(f.mul(a, b))),
        (GroupDescriptor::PolynomialRing { p }, GroupElement::Sparse(a), GroupElement::Sparse(b)) => {
            let p = *p as i64;
            let mut coords = Vec::with_capacity(a.len() * b.len());
            for &(i, s) in a {
                for &(j, t) in b {
                    coords.push((i + j - 1, (s * t) % p));
                }
            }
            desc.from_coords(&coords)
        }
        _ => bail!(Unsupported, "{desc} has no ring structure"),
    }
}
