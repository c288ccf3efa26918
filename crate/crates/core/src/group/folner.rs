//! Følner families `N ↦ F_N`, their enumeration and translation defects.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::{GroupDescriptor, GroupElement};
use crate::error::{bail, Error, Result};
use crate::rational::Rational;

/// Shape of `F_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolnerRule {
    /// `[1, N]` in `Z`.
    Interval,
    /// `[1, N]^d` in `Z^d`.
    Box,
    /// `F_N = {x : x_i = 0 for i > N}` in `⊕ Z/pZ` or `F_p[t]`.
    LevelSubgroup,
    /// `[0, side)^N` on the first `N` coordinates of `Z^∞`.
    LevelBox { side: u64 },
    /// The whole finite field level.
    FullField,
}

/// Optional translation `N ↦ b_N`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Translation {
    #[default]
    None,
    Fixed(GroupElement),
    /// `b_N` for listed `N`; identity elsewhere.
    PerIndex(BTreeMap<u64, GroupElement>),
}

impl Translation {
    pub fn at(&self, n: u64) -> Option<&GroupElement> {
        match self {
            Translation::None => None,
            Translation::Fixed(b) => Some(b),
            Translation::PerIndex(m) => m.get(&n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerFamily {
    pub rule: FolnerRule,
    pub translation: Translation,
    /// Largest admissible `|F_N|`.
    pub budget: u64,
}

impl FolnerFamily {
    pub fn new(rule: FolnerRule) -> Self {
        FolnerFamily { rule, translation: Translation::None, budget: crate::DEFAULT_BUDGET }
    }

    /// The natural family for a descriptor.
    pub fn standard(desc: &GroupDescriptor) -> Result<Self> {
        let rule = match desc {
            GroupDescriptor::IntegerLine => FolnerRule::Interval,
            GroupDescriptor::IntegerLattice { .. } => FolnerRule::Box,
            GroupDescriptor::PrimeDirectSum { .. } | GroupDescriptor::PolynomialRing { .. } => FolnerRule::LevelSubgroup,
            GroupDescriptor::FiniteFieldLevel(_) => FolnerRule::FullField,
            GroupDescriptor::FreeAbelianDirectSum => {
                bail!(InvalidInput, "free_sum has no default family; use LevelBox")
            }
        };
        Ok(Self::new(rule))
    }

    pub fn with_translation(mut self, t: Translation) -> Self {
        self.translation = t;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn check_rule(&self, desc: &GroupDescriptor) -> Result<()> {
        let ok = matches!(
            (&self.rule, desc),
            (FolnerRule::Interval, GroupDescriptor::IntegerLine)
                | (FolnerRule::Box, GroupDescriptor::IntegerLattice { .. })
                | (FolnerRule::LevelSubgroup, GroupDescriptor::PrimeDirectSum { .. } | GroupDescriptor::PolynomialRing { .. })
                | (FolnerRule::LevelBox { .. }, GroupDescriptor::FreeAbelianDirectSum)
                | (FolnerRule::FullField, GroupDescriptor::FiniteFieldLevel(_))
        );
        if !ok {
            bail!(Mismatch, "Følner rule {:?} does not apply to {desc}", self.rule);
        }
        if let FolnerRule::LevelBox { side: 0 } = self.rule {
            bail!(InvalidInput, "box side must be positive");
        }
        Ok(())
    }

    /// Predicted `|F_N|`, saturating at `u128::MAX`.
    pub fn size(&self, desc: &GroupDescriptor, n: u64) -> Result<u128> {
        self.check_rule(desc)?;
        let pow = |base: u128, e: u64| -> u128 {
            let mut acc: u128 = 1;
            for _ in 0..e {
                acc = acc.saturating_mul(base);
            }
            acc
        };
        Ok(match (&self.rule, desc) {
            (FolnerRule::Interval, _) => n as u128,
            (FolnerRule::Box, GroupDescriptor::IntegerLattice { d }) => pow(n as u128, *d as u64),
            (FolnerRule::LevelSubgroup, _) => pow(desc.torsion().unwrap_or(1) as u128, n),
            (FolnerRule::LevelBox { side }, _) => pow(*side as u128, n),
            (FolnerRule::FullField, GroupDescriptor::FiniteFieldLevel(f)) => f.order(),
            _ => unreachable!("rule checked"),
        })
    }

    /// Lazy enumeration of `F_N` in lexicographic coordinate order (first
    /// coordinate most significant), translated by `b_N` when present.
    pub fn elements(&self, desc: &GroupDescriptor, n: u64) -> Result<FolnerIter> {
        let size = self.size(desc, n)?;
        if n == 0 {
            bail!(InvalidInput, "Følner index must be positive");
        }
        if size > self.budget as u128 {
            return Err(Error::SizeLimit { what: "F_N", size, budget: self.budget as u128 });
        }
        let (lo, count, dims) = match (&self.rule, desc) {
            (FolnerRule::Interval, _) => (1, n as i64, 1),
            (FolnerRule::Box, GroupDescriptor::IntegerLattice { d }) => (1, n as i64, *d),
            (FolnerRule::LevelSubgroup, _) => (0, desc.torsion().unwrap_or(1) as i64, n as usize),
            (FolnerRule::LevelBox { side }, _) => (0, *side as i64, n as usize),
            (FolnerRule::FullField, GroupDescriptor::FiniteFieldLevel(f)) => (0, f.p() as i64, f.k()),
            _ => unreachable!("rule checked"),
        };
        let shift = match self.translation.at(n) {
            Some(b) => {
                desc.check(b)?;
                Some(b.clone())
            }
            None => None,
        };
        Ok(FolnerIter { desc: desc.clone(), digits: vec![lo; dims], lo, hi: lo + count, shift, remaining: size as u64 })
    }

    /// `F_N` as a list.
    pub fn set(&self, desc: &GroupDescriptor, n: u64) -> Result<Vec<GroupElement>> {
        Ok(self.elements(desc, n)?.collect())
    }

    /// `|F_N △ (F_N + g)| / |F_N|`, exactly. Translations do not change the
    /// value.
    pub fn defect(&self, desc: &GroupDescriptor, n: u64, g: &GroupElement) -> Result<Rational> {
        desc.check(g)?;
        let size = self.size(desc, n)?;
        if size == 0 {
            bail!(InvalidInput, "empty Følner set");
        }
        let overlap: u128 = match (&self.rule, desc) {
            (FolnerRule::Interval, _) => {
                let s = g.coord(1).unsigned_abs() as u128;
                (n as u128).saturating_sub(s)
            }
            (FolnerRule::Box, _) => {
                let mut acc = 1u128;
                for x in match g {
                    GroupElement::Dense(v) => v.as_slice(),
                    _ => unreachable!("checked"),
                } {
                    acc *= (n as u128).saturating_sub(x.unsigned_abs() as u128);
                }
                acc
            }
            (FolnerRule::LevelSubgroup, _) => {
                if g.max_support() as u64 <= n {
                    size
                } else {
                    0
                }
            }
            (FolnerRule::LevelBox { side }, _) => {
                if g.max_support() as u64 > n {
                    0
                } else {
                    let mut acc = 1u128;
                    for i in 1..=n {
                        let s = g.coord(i as u32).unsigned_abs() as u128;
                        acc = acc.saturating_mul((*side as u128).saturating_sub(s));
                    }
                    acc
                }
            }
            (FolnerRule::FullField, _) => size,
        };
        let sym = 2 * (size - overlap);
        Ok(Rational::new(BigInt::from(sym), BigInt::from(size)))
    }

    /// Shells `S_1, …, S_radius` of nonzero shifts, used as a finite
    /// exhaustion of `G \ {e}`:
    ///
    /// * `Z`: `S_r = {r, −r}`;
    /// * `Z^d`: sup-norm exactly `r`;
    /// * `⊕ Z/pZ`, `F_p[t]`: `F_r \ F_{r−1}`;
    /// * `Z^∞`: support in `[1, r]` and sup-norm `≤ r`, minus the previous
    ///   shells;
    /// * `F_{p^k}`: one shell with every nonzero element.
    pub fn shells(desc: &GroupDescriptor, radius: u32, budget: u64) -> Result<Vec<Vec<GroupElement>>> {
        let mut shells = Vec::new();
        let mut total: u64 = 0;
        let mut push = |shells: &mut Vec<Vec<GroupElement>>, s: Vec<GroupElement>| -> Result<()> {
            total += s.len() as u64;
            if total > budget {
                return Err(Error::SizeLimit { what: "shift shells", size: total as u128, budget: budget as u128 });
            }
            shells.push(s);
            Ok(())
        };
        match desc {
            GroupDescriptor::IntegerLine => {
                for r in 1..=radius as i64 {
                    push(&mut shells, vec![GroupElement::Int(r), GroupElement::Int(-r)])?;
                }
            }
            GroupDescriptor::IntegerLattice { d } => {
                for r in 1..=radius as i64 {
                    let mut s = Vec::new();
                    odometer(*d, -r, r + 1, |v| {
                        if v.iter().map(|x| x.abs()).max() == Some(r) {
                            s.push(GroupElement::Dense(v.to_vec()));
                        }
                    });
                    push(&mut shells, s)?;
                }
            }
            GroupDescriptor::PrimeDirectSum { p } | GroupDescriptor::PolynomialRing { p } => {
                for r in 1..=radius {
                    let mut s = Vec::new();
                    odometer(r as usize, 0, *p as i64, |v| {
                        if v[r as usize - 1] != 0 {
                            s.push(sparse_from_dense(v));
                        }
                    });
                    push(&mut shells, s)?;
                }
            }
            GroupDescriptor::FreeAbelianDirectSum => {
                for r in 1..=radius as i64 {
                    let mut s = Vec::new();
                    odometer(r as usize, -r, r + 1, |v| {
                        let sup = v.iter().map(|x| x.abs()).max().unwrap_or(0);
                        if sup == r || (sup > 0 && v[r as usize - 1] != 0) {
                            s.push(sparse_from_dense(v));
                        }
                    });
                    push(&mut shells, s)?;
                }
            }
            GroupDescriptor::FiniteFieldLevel(f) => {
                let mut s = Vec::new();
                odometer(f.k(), 0, f.p() as i64, |v| {
                    if v.iter().any(|&x| x != 0) {
                        s.push(GroupElement::Dense(v.to_vec()));
                    }
                });
                push(&mut shells, s)?;
            }
        }
        Ok(shells)
    }
}

fn sparse_from_dense(v: &[i64]) -> GroupElement {
    GroupElement::Sparse(v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32 + 1, x)).collect())
}

/// Visits `[lo, hi)^dims` in lexicographic order.
fn odometer(dims: usize, lo: i64, hi: i64, mut visit: impl FnMut(&[i64])) {
    let mut v = vec![lo; dims];
    loop {
        visit(&v);
        let mut i = dims;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < hi {
                break;
            }
            v[i] = lo;
        }
    }
}

/// Iterator over `F_N`; see [`FolnerFamily::elements`].
#[derive(Debug, Clone)]
pub struct FolnerIter {
    desc: GroupDescriptor,
    digits: Vec<i64>,
    lo: i64,
    hi: i64,
    shift: Option<GroupElement>,
    remaining: u64,
}

impl FolnerIter {
    fn current(&self) -> GroupElement {
        let g = match &self.desc {
            GroupDescriptor::IntegerLine => GroupElement::Int(self.digits[0]),
            GroupDescriptor::IntegerLattice { .. } | GroupDescriptor::FiniteFieldLevel(_) => GroupElement::Dense(self.digits.clone()),
            _ => sparse_from_dense(&self.digits),
        };
        match &self.shift {
            Some(b) => self.desc.combine_unchecked(&g, b),
            None => g,
        }
    }

    fn advance(&mut self) {
        let mut i = self.digits.len();
        while i > 0 {
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.hi {
                return;
            }
            self.digits[i] = self.lo;
        }
    }
}

impl Iterator for FolnerIter {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.remaining == 0 {
            return None;
        }
        let g = self.current();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for FolnerIter {}

impl fmt::Display for FolnerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolnerRule::Interval => f.write_str("interval"),
            FolnerRule::Box => f.write_str("box"),
            FolnerRule::LevelSubgroup => f.write_str("level"),
            FolnerRule::LevelBox { side } => write!(f, "level_box side={side}"),
            FolnerRule::FullField => f.write_str("full_field"),
        }
    }
}

impl core::str::FromStr for FolnerRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, kv) = crate::text::head_and_pairs(s)?;
        let allowed: &[&str] = if head == "level_box" { &["side"] } else { &[] };
        crate::text::expect_keys(&kv, allowed, s)?;
        Ok(match head.as_str() {
            "interval" => FolnerRule::Interval,
            "box" => FolnerRule::Box,
            "level" => FolnerRule::LevelSubgroup,
            "full_field" => FolnerRule::FullField,
            "level_box" => FolnerRule::LevelBox {
                side: crate::text::get(&kv, "side", s)?.parse().map_err(|_| Error::Parse(alloc::format!("bad side in {s:?}")))?,
            },
            other => bail!(Parse, "unknown Følner rule {other:?}"),
        })
    }
}
