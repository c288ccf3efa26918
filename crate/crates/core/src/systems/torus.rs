//! Rotations of `T^d`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::angle::Angle;
use crate::error::{bail, Result};
use crate::group::{GroupDescriptor, GroupElement};

/// `α: G → T^d` given by the images of the coordinate generators;
/// generators beyond the list act trivially.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusRotation {
    d: usize,
    generators: Vec<Vec<Angle>>,
}

impl TorusRotation {
    pub fn new(d: usize, generators: Vec<Vec<Angle>>) -> Result<Self> {
        if d == 0 {
            bail!(InvalidInput, "torus dimension must be at least 1");
        }
        if generators.iter().any(|a| a.len() != d) {
            bail!(InvalidInput, "every generator needs {d} angles");
        }
        Ok(TorusRotation { d, generators })
    }

    /// `Z` acting on `T` by `x ↦ x + θ`.
    pub fn circle(theta: Angle) -> Self {
        TorusRotation { d: 1, generators: alloc::vec![alloc::vec![theta]] }
    }

    pub(super) fn validate_for(&self, group: &GroupDescriptor) -> Result<()> {
        if let Some(r) = group.rank() {
            if self.generators.len() > r {
                bail!(Mismatch, "{} generator angles for a group of rank {r}", self.generators.len());
            }
        }
        if let Some(p) = group.torsion() {
            for a in self.generators.iter().flatten() {
                if !a.scale(p as i64).is_zero() {
                    bail!(InvalidInput, "angle {a} is not {p}-torsion");
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Vec<Angle>] {
        &self.generators
    }

    /// `α(g)`.
    pub fn alpha(&self, g: &GroupElement) -> Vec<Angle> {
        let mut out = alloc::vec![Angle::ZERO; self.d];
        for (i, x) in g.coords() {
            if let Some(a) = self.generators.get(i as usize - 1) {
                for (o, t) in out.iter_mut().zip(a) {
                    *o = *o + t.scale(x);
                }
            }
        }
        out
    }

    /// Whether `e(k·x)` is fixed by every generator.
    pub fn is_invariant_frequency(&self, k: &[i64]) -> bool {
        self.generators.iter().all(|a| {
            let mut t = Angle::ZERO;
            for (ai, ki) in a.iter().zip(k) {
                t = t + ai.scale(*ki);
            }
            t.is_zero()
        })
    }

    /// Keys `d`, `alpha` (generators separated by `;`, angles by `,`).
    pub(super) fn parse(kv: &[(String, String)], ctx: &str) -> Result<Self> {
        crate::text::expect_keys(kv, &["d", "alpha"], ctx)?;
        let d: usize = crate::text::get(kv, "d", ctx)?.parse().map_err(|_| crate::Error::Parse(alloc::format!("bad d in {ctx:?}")))?;
        let alpha = crate::text::get(kv, "alpha", ctx)?;
        let mut gens = Vec::new();
        for t in alpha.split(';').filter(|t| !t.trim().is_empty()) {
            gens.push(crate::text::parse_list::<Angle>(t)?);
        }
        Self::new(d, gens)
    }
}

impl fmt::Display for TorusRotation {
    /// `torus d=2 alpha=1/3,0;0,sqrt2m1`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|a| crate::text::join(a, ",")).collect();
        write!(f, "torus d={} alpha={}", self.d, gens.join(";"))
    }
}
