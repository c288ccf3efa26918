//! Bernoulli shifts over `G` with cylinder-function observables.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::{bail, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::rational::Rational;

/// `(A^G, p^{⊗G})` with the shift `(σ_g x)_c = x_{c+g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliShift {
    probs: Vec<Rational>,
}

/// The set `{x : x_c = s for every (c, s)}`; sorted by coordinate, no
/// repeated coordinates. The empty cylinder is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder(Vec<(GroupElement, u32)>);

impl BernoulliShift {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(Signed::is_negative) {
            bail!(InvalidInput, "probabilities must be nonnegative and nonempty");
        }
        if !super::rational_sum(&probs).is_one() {
            bail!(InvalidInput, "probabilities must sum to 1");
        }
        Ok(BernoulliShift { probs })
    }

    pub fn alphabet(&self) -> usize {
        self.probs.len()
    }

    pub fn probability(&self, symbol: u32) -> Result<Rational> {
        match self.probs.get(symbol as usize) {
            Some(p) => Ok(p.clone()),
            None => bail!(InvalidInput, "symbol {symbol} outside the alphabet"),
        }
    }

    pub(super) fn check_cylinder(&self, group: &GroupDescriptor, c: &Cylinder) -> Result<()> {
        for (g, s) in &c.0 {
            group.check(g)?;
            if *s as usize >= self.probs.len() {
                bail!(InvalidInput, "symbol {s} outside the alphabet");
            }
        }
        Ok(())
    }

    pub fn measure(&self, c: &Cylinder) -> Rational {
        c.0.iter().fold(Rational::one(), |acc, (_, s)| acc * &self.probs[*s as usize])
    }

    /// `μ(a ∩ b)`, or `None` when the cylinders are disjoint.
    pub fn measure_of_intersection(&self, a: &Cylinder, b: &Cylinder) -> Option<Rational> {
        let mut m = Rational::one();
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            let s = if j >= b.0.len() || (i < a.0.len() && a.0[i].0 < b.0[j].0) {
                i += 1;
                a.0[i - 1].1
            } else if i >= a.0.len() || b.0[j].0 < a.0[i].0 {
                j += 1;
                b.0[j - 1].1
            } else {
                i += 1;
                j += 1;
                if a.0[i - 1].1 != b.0[j - 1].1 {
                    return None;
                }
                a.0[i - 1].1
            };
            m *= &self.probs[s as usize];
        }
        Some(m)
    }

    /// Key `p`.
    pub(super) fn parse(kv: &[(String, String)], ctx: &str) -> Result<Self> {
        crate::text::expect_keys(kv, &["p"], ctx)?;
        Self::new(crate::text::parse_list(crate::text::bracketed(crate::text::get(kv, "p", ctx)?, '[', ']')?)?)
    }
}

impl fmt::Display for BernoulliShift {
    /// `bernoulli p=[1/2,1/2]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bernoulli p=[{}]", crate::text::join(&self.probs, ","))
    }
}

impl Cylinder {
    pub fn full() -> Self {
        Cylinder(Vec::new())
    }

    pub fn new(mut entries: Vec<(GroupElement, u32)>) -> Result<Self> {
        entries.sort();
        entries.dedup();
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            bail!(InvalidInput, "cylinder fixes one coordinate to two symbols");
        }
        Ok(Cylinder(entries))
    }

    pub fn entries(&self) -> &[(GroupElement, u32)] {
        &self.0
    }

    /// Window moved by `+g`.
    pub fn translate(&self, group: &GroupDescriptor, g: &GroupElement) -> Cylinder {
        let mut v: Vec<(GroupElement, u32)> = self.0.iter().map(|(c, s)| (group.combine_unchecked(c, g), *s)).collect();
        v.sort();
        Cylinder(v)
    }

    pub fn intersect(&self, o: &Cylinder) -> Option<Cylinder> {
        let mut v: Vec<(GroupElement, u32)> = self.0.iter().chain(&o.0).cloned().collect();
        v.sort();
        v.dedup();
        if v.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Cylinder(v))
    }

    /// Coordinates of the window.
    pub fn window(&self) -> impl Iterator<Item = &GroupElement> {
        self.0.iter().map(|(c, _)| c)
    }
}
