//! Countable abelian groups with canonical finitely-supported coordinates.
//!
//! Coordinates are 1-based. For [`GroupDescriptor::PolynomialRing`]
//! coordinate `i` is the coefficient of `t^{i-1}`, so the level subgroup
//! `F_n` is the set of polynomials of degree `< n`.

mod character;
mod finite_field;
mod folner;
mod selfmap;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use character::{character_sum, character_sum_with, CharValue, Character, CharacterData, CharacterSum};
pub use finite_field::{is_odd_prime, FiniteField, MAX_FIELD_DEGREE};
pub use folner::{FolnerFamily, FolnerIter, FolnerRule, Translation};
pub use selfmap::{floor_rational_power, GroupSelfMap};

use crate::error::{bail, Error, Result};

/// A countable abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// `Z`
    IntegerLine,
    /// `Z^d`
    IntegerLattice { d: usize },
    /// `Z^∞ = ⊕_{n≥1} Z`
    FreeAbelianDirectSum,
    /// `⊕_{n≥1} Z/pZ`
    PrimeDirectSum { p: u32 },
    /// `(F_p[t], +)` with its ring structure.
    PolynomialRing { p: u32 },
    /// `(F_{p^k}, +)` with field multiplication.
    FiniteFieldLevel(FiniteField),
}

/// An element in canonical form for its descriptor.
///
/// * `Int`: [`GroupDescriptor::IntegerLine`];
/// * `Dense`: lattices (`d` integers) and finite field levels (`k`
///   residues in `[0, p)`);
/// * `Sparse`: direct sums and polynomial rings: `(index, value)` pairs
///   sorted by index, no zero values, residues in `[1, p)` for torsion
///   groups.
///
/// The derived ordering is used for set membership only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(i64),
    Dense(Vec<i64>),
    Sparse(Vec<(u32, i64)>),
}

impl GroupDescriptor {
    pub fn lattice(d: usize) -> Result<Self> {
        if d == 0 {
            bail!(InvalidInput, "lattice dimension must be at least 1");
        }
        Ok(GroupDescriptor::IntegerLattice { d })
    }

    pub fn prime_sum(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(GroupDescriptor::PrimeDirectSum { p })
    }

    pub fn poly_ring(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(GroupDescriptor::PolynomialRing { p })
    }

    /// `F_{p^k}` with the lexicographically-first monic irreducible modulus.
    pub fn field(p: u32, k: usize) -> Result<Self> {
        Ok(GroupDescriptor::FiniteFieldLevel(FiniteField::new(p, k)?))
    }

    /// Checks the descriptor's own parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::IntegerLattice { d } if *d == 0 => bail!(InvalidInput, "lattice dimension 0"),
            GroupDescriptor::PrimeDirectSum { p } | GroupDescriptor::PolynomialRing { p } => check_prime(*p),
            _ => Ok(()),
        }
    }

    /// The exponent `p` for `p`-torsion groups.
    pub fn torsion(&self) -> Option<u32> {
        match self {
            GroupDescriptor::PrimeDirectSum { p } | GroupDescriptor::PolynomialRing { p } => Some(*p),
            GroupDescriptor::FiniteFieldLevel(f) => Some(f.p()),
            _ => None,
        }
    }

    /// Number of coordinates for fixed-length kinds.
    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupDescriptor::IntegerLine => Some(1),
            GroupDescriptor::IntegerLattice { d } => Some(*d),
            GroupDescriptor::FiniteFieldLevel(f) => Some(f.k()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupDescriptor::FiniteFieldLevel(_))
    }

    pub fn has_ring_structure(&self) -> bool {
        !matches!(self, GroupDescriptor::FreeAbelianDirectSum | GroupDescriptor::PrimeDirectSum { .. })
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::IntegerLine => GroupElement::Int(0),
            GroupDescriptor::IntegerLattice { d } => GroupElement::Dense(vec![0; *d]),
            GroupDescriptor::FiniteFieldLevel(f) => GroupElement::Dense(vec![0; f.k()]),
            _ => GroupElement::Sparse(Vec::new()),
        }
    }

    /// The `i`-th unit vector (1-based).
    pub fn unit(&self, i: u32) -> Result<GroupElement> {
        if i == 0 {
            bail!(InvalidInput, "coordinates are 1-based");
        }
        self.from_coords(&[(i, 1)])
    }

    /// Builds a canonical element from `(index, value)` pairs; repeated
    /// indices add up.
    pub fn from_coords(&self, coords: &[(u32, i64)]) -> Result<GroupElement> {
        if coords.iter().any(|&(i, _)| i == 0) {
            bail!(InvalidInput, "coordinates are 1-based");
        }
        match self {
            GroupDescriptor::IntegerLine => {
                let mut v = 0i64;
                for &(i, x) in coords {
                    if i != 1 {
                        bail!(Mismatch, "integer line has a single coordinate, got index {i}");
                    }
                    v = v.checked_add(x).ok_or_else(overflow)?;
                }
                Ok(GroupElement::Int(v))
            }
            GroupDescriptor::IntegerLattice { .. } | GroupDescriptor::FiniteFieldLevel(_) => {
                let n = self.rank().unwrap_or(0);
                let mut v = vec![0i64; n];
                for &(i, x) in coords {
                    if i as usize > n {
                        bail!(Mismatch, "index {i} exceeds rank {n}");
                    }
                    v[i as usize - 1] = v[i as usize - 1].checked_add(x).ok_or_else(overflow)?;
                }
                if let Some(p) = self.torsion() {
                    for x in v.iter_mut() {
                        *x = x.rem_euclid(p as i64);
                    }
                }
                Ok(GroupElement::Dense(v))
            }
            _ => {
                let mut pairs: Vec<(u32, i64)> = coords.to_vec();
                pairs.sort_by_key(|&(i, _)| i);
                let mut out: Vec<(u32, i64)> = Vec::with_capacity(pairs.len());
                for (i, x) in pairs {
                    match out.last_mut() {
                        Some((j, y)) if *j == i => *y = y.checked_add(x).ok_or_else(overflow)?,
                        _ => out.push((i, x)),
                    }
                }
                if let Some(p) = self.torsion() {
                    for (_, x) in out.iter_mut() {
                        *x = x.rem_euclid(p as i64);
                    }
                }
                out.retain(|&(_, x)| x != 0);
                Ok(GroupElement::Sparse(out))
            }
        }
    }

    /// Dense constructor for lattices and field levels.
    pub fn dense(&self, values: Vec<i64>) -> Result<GroupElement> {
        let coords: Vec<(u32, i64)> = values.iter().enumerate().map(|(i, &x)| (i as u32 + 1, x)).collect();
        if Some(values.len()) != self.rank() || matches!(self, GroupDescriptor::IntegerLine) {
            bail!(Mismatch, "dense element of length {} for {self}", values.len());
        }
        self.from_coords(&coords)
    }

    pub fn integer(&self, n: i64) -> Result<GroupElement> {
        match self {
            GroupDescriptor::IntegerLine => Ok(GroupElement::Int(n)),
            _ => bail!(Mismatch, "integer element for {self}"),
        }
    }

    /// Whether `g` is a canonical element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupDescriptor::IntegerLine, GroupElement::Int(_)) => true,
            (GroupDescriptor::IntegerLattice { d }, GroupElement::Dense(v)) => v.len() == *d,
            (GroupDescriptor::FiniteFieldLevel(f), GroupElement::Dense(v)) => {
                v.len() == f.k() && v.iter().all(|&x| (0..f.p() as i64).contains(&x))
            }
            (GroupDescriptor::FreeAbelianDirectSum, GroupElement::Sparse(v)) => {
                v.windows(2).all(|w| w[0].0 < w[1].0) && v.iter().all(|&(i, x)| i >= 1 && x != 0)
            }
            (GroupDescriptor::PrimeDirectSum { p } | GroupDescriptor::PolynomialRing { p }, GroupElement::Sparse(v)) => {
                v.windows(2).all(|w| w[0].0 < w[1].0) && v.iter().all(|&(i, x)| i >= 1 && x > 0 && x < *p as i64)
            }
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            bail!(Mismatch, "element {g} is not a canonical element of {self}")
        }
    }

    /// `g + h`.
    pub fn combine(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.combine_unchecked(g, h))
    }

    pub(crate) fn combine_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let m = self.torsion().map(|p| p as i64);
        let red = |x: i64| match m {
            Some(p) => x.rem_euclid(p),
            None => x,
        };
        match (g, h) {
            (GroupElement::Int(a), GroupElement::Int(b)) => GroupElement::Int(a.checked_add(*b).expect("integer overflow")),
            (GroupElement::Dense(a), GroupElement::Dense(b)) => {
                GroupElement::Dense(a.iter().zip(b).map(|(x, y)| red(x.checked_add(*y).expect("integer overflow"))).collect())
            }
            (GroupElement::Sparse(a), GroupElement::Sparse(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let (idx, v) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        i += 1;
                        a[i - 1]
                    } else if i >= a.len() || b[j].0 < a[i].0 {
                        j += 1;
                        b[j - 1]
                    } else {
                        i += 1;
                        j += 1;
                        (a[i - 1].0, red(a[i - 1].1.checked_add(b[j - 1].1).expect("integer overflow")))
                    };
                    if v != 0 {
                        out.push((idx, v));
                    }
                }
                GroupElement::Sparse(out)
            }
            _ => unreachable!("checked elements share a representation"),
        }
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.scale_unchecked(g, -1))
    }

    /// `g − h`.
    pub fn difference(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let nh = self.invert(h)?;
        self.combine(g, &nh)
    }

    /// `k · g`.
    pub fn scale(&self, g: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.scale_unchecked(g, k))
    }

    fn scale_unchecked(&self, g: &GroupElement, k: i64) -> GroupElement {
        let coords: Vec<(u32, i64)> = g.coords().into_iter().map(|(i, x)| (i, x.checked_mul(k).expect("integer overflow"))).collect();
        self.from_coords(&coords).expect("same shape")
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }
}

fn overflow() -> Error {
    Error::InvalidInput(String::from("integer overflow in group coordinates"))
}

fn check_prime(p: u32) -> Result<()> {
    if !is_odd_prime(p) || p >= 1 << 31 {
        bail!(InvalidInput, "{p} is not an odd prime below 2^31");
    }
    Ok(())
}

impl GroupElement {
    /// Nonzero coordinates as `(index, value)` with 1-based indices.
    pub fn coords(&self) -> Vec<(u32, i64)> {
        match self {
            GroupElement::Int(n) => {
                if *n == 0 {
                    Vec::new()
                } else {
                    vec![(1, *n)]
                }
            }
            GroupElement::Dense(v) => v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32 + 1, x)).collect(),
            GroupElement::Sparse(v) => v.clone(),
        }
    }

    /// Value at a 1-based index.
    pub fn coord(&self, i: u32) -> i64 {
        match self {
            GroupElement::Int(n) => {
                if i == 1 {
                    *n
                } else {
                    0
                }
            }
            GroupElement::Dense(v) => v.get(i as usize - 1).copied().unwrap_or(0),
            GroupElement::Sparse(v) => v.iter().find(|&&(j, _)| j == i).map_or(0, |&(_, x)| x),
        }
    }

    /// Largest index carrying a nonzero coordinate (0 for the identity).
    pub fn max_support(&self) -> u32 {
        self.coords().last().map_or(0, |&(i, _)| i)
    }
}

impl fmt::Display for GroupElement {
    /// `5` (integer line), `[1,0,2]` (dense), `{1:2,3:1}` (sparse).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(n) => write!(f, "{n}"),
            GroupElement::Dense(v) => {
                f.write_str("[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            GroupElement::Sparse(v) => {
                f.write_str("{")?;
                for (n, (i, x)) in v.iter().enumerate() {
                    if n > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}:{x}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl GroupDescriptor {
    /// Parses the [`Display`](fmt::Display) form of an element of this group.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let g = if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let vals = crate::text::parse_list::<i64>(inner)?;
            self.dense(vals)?
        } else if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            if matches!(self, GroupDescriptor::IntegerLine) || self.rank().is_some() {
                bail!(Mismatch, "sparse element for {self}");
            }
            let mut coords = Vec::new();
            for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (i, x) = item.split_once(':').ok_or_else(|| Error::Parse(alloc::format!("bad coordinate {item:?}")))?;
                let i: u32 = i.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad index {i:?}")))?;
                let x: i64 = x.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad value {x:?}")))?;
                coords.push((i, x));
            }
            self.from_coords(&coords)?
        } else {
            let n: i64 = s.parse().map_err(|_| Error::Parse(alloc::format!("bad element {s:?}")))?;
            self.integer(n)?
        };
        Ok(g)
    }
}

impl fmt::Display for GroupDescriptor {
    /// Canonical text: `integer_line`, `lattice d=2`, `free_sum`,
    /// `prime_sum p=3`, `poly_ring p=5`, `field p=3 k=2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::IntegerLine => f.write_str("integer_line"),
            GroupDescriptor::IntegerLattice { d } => write!(f, "lattice d={d}"),
            GroupDescriptor::FreeAbelianDirectSum => f.write_str("free_sum"),
            GroupDescriptor::PrimeDirectSum { p } => write!(f, "prime_sum p={p}"),
            GroupDescriptor::PolynomialRing { p } => write!(f, "poly_ring p={p}"),
            GroupDescriptor::FiniteFieldLevel(ff) => write!(f, "field p={} k={}", ff.p(), ff.k()),
        }
    }
}

impl core::str::FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, kv) = crate::text::head_and_pairs(s)?;
        let get = |key: &str| -> Result<u64> {
            kv.iter()
                .find(|(k, _)| k == key)
                .ok_or_else(|| Error::Parse(alloc::format!("missing {key}= in {s:?}")))?
                .1
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad {key} in {s:?}")))
        };
        let expect_keys = |keys: &[&str]| -> Result<()> { crate::text::expect_keys(&kv, keys, s) };
        match head.as_str() {
            "integer_line" => {
                expect_keys(&[])?;
                Ok(GroupDescriptor::IntegerLine)
            }
            "lattice" => {
                expect_keys(&["d"])?;
                GroupDescriptor::lattice(get("d")? as usize)
            }
            "free_sum" => {
                expect_keys(&[])?;
                Ok(GroupDescriptor::FreeAbelianDirectSum)
            }
            "prime_sum" => {
                expect_keys(&["p"])?;
                GroupDescriptor::prime_sum(to_u32(get("p")?)?)
            }
            "poly_ring" => {
                expect_keys(&["p"])?;
                GroupDescriptor::poly_ring(to_u32(get("p")?)?)
            }
            "field" => {
                expect_keys(&["p", "k"])?;
                GroupDescriptor::field(to_u32(get("p")?)?, get("k")? as usize)
            }
            other => bail!(Parse, "unknown group kind {other:?}"),
        }
    }
}

fn to_u32(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::InvalidInput(alloc::format!("{v} out of range")))
}
