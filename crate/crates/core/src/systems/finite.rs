//! Finite permutation systems factoring through a declared finite quotient.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{bail, Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::rational::Rational;
use crate::scalar::Coefficient;

/// Largest quotient image enumerated for total ergodicity.
const MAX_QUOTIENT_IMAGE: usize = 4096;

/// Atoms with rational weights; `G` acts through `Q = ⊕_j Z/m_j`, whose
/// `j`-th generator acts by `perms[j]`. Coordinate `i` of `G` maps to
/// `images[i]` in `Q`; unlisted coordinates map to `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePermutation {
    weights: Vec<Rational>,
    orders: Vec<u32>,
    perms: Vec<Vec<usize>>,
    images: BTreeMap<u32, Vec<i64>>,
}

impl FinitePermutation {
    pub fn new(weights: Vec<Rational>, orders: Vec<u32>, perms: Vec<Vec<usize>>, images: BTreeMap<u32, Vec<i64>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            bail!(InvalidInput, "a finite system needs at least one atom");
        }
        if weights.iter().any(Signed::is_negative) {
            bail!(InvalidInput, "atom weights must be nonnegative");
        }
        if super::rational_sum(&weights) != Rational::from_integer(1.into()) {
            bail!(InvalidInput, "atom weights must sum to 1");
        }
        if orders.len() != perms.len() || orders.contains(&0) {
            bail!(InvalidInput, "one positive order per generator permutation");
        }
        for (j, s) in perms.iter().enumerate() {
            let mut seen = alloc::vec![false; n];
            if s.len() != n || s.iter().any(|&t| t >= n || core::mem::replace(&mut seen[t], true)) {
                bail!(InvalidInput, "generator {j} is not a permutation of {n} atoms");
            }
            if (0..n).any(|i| weights[s[i]] != weights[i]) {
                bail!(InvalidInput, "generator {j} does not preserve the weights");
            }
            let mut p: Vec<usize> = (0..n).collect();
            for _ in 0..orders[j] {
                p = p.iter().map(|&i| s[i]).collect();
            }
            if p.iter().enumerate().any(|(i, &t)| i != t) {
                bail!(InvalidInput, "generator {j} has order not dividing {}", orders[j]);
            }
        }
        for a in 0..perms.len() {
            for b in a + 1..perms.len() {
                if (0..n).any(|i| perms[a][perms[b][i]] != perms[b][perms[a][i]]) {
                    bail!(InvalidInput, "generators {a} and {b} do not commute");
                }
            }
        }
        let mut images = images;
        for (i, q) in images.iter_mut() {
            if *i == 0 || q.len() != orders.len() {
                bail!(InvalidInput, "quotient image of coordinate {i} must have {} entries", orders.len());
            }
            for (x, &m) in q.iter_mut().zip(&orders) {
                *x = x.rem_euclid(m as i64);
            }
        }
        images.retain(|_, q| q.iter().any(|&x| x != 0));
        Ok(FinitePermutation { weights, orders, perms, images })
    }

    /// `Z/m` acting by `i ↦ i + step (mod m)` on `m` uniform atoms, with
    /// coordinate 1 of `G` mapping to the generator.
    pub fn cyclic(m: usize, step: usize) -> Result<Self> {
        let w = Rational::new(1.into(), (m as i64).into());
        let perm = (0..m).map(|i| (i + step) % m).collect();
        let mut images = BTreeMap::new();
        images.insert(1, alloc::vec![1]);
        Self::new(alloc::vec![w; m], alloc::vec![m as u32], alloc::vec![perm], images)
    }

    pub(super) fn validate_for(&self, group: &GroupDescriptor) -> Result<()> {
        for (&i, q) in &self.images {
            if let Some(r) = group.rank() {
                if i as usize > r {
                    bail!(Mismatch, "coordinate {i} exceeds the rank of {group}");
                }
            }
            if let Some(p) = group.torsion() {
                if q.iter().zip(&self.orders).any(|(&x, &m)| (x * p as i64) % m as i64 != 0) {
                    bail!(InvalidInput, "quotient image of coordinate {i} is not {p}-torsion");
                }
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Group coordinates with a nontrivial image in `Q`.
    pub fn mapped_coordinates(&self) -> impl Iterator<Item = u32> + '_ {
        self.images.iter().filter(|(_, im)| im.iter().any(|&y| y != 0)).map(|(&i, _)| i)
    }

    /// The image of `g` in `Q`.
    pub fn image(&self, g: &GroupElement) -> Vec<i64> {
        let mut q = alloc::vec![0i64; self.orders.len()];
        for (i, x) in g.coords() {
            if let Some(im) = self.images.get(&i) {
                for ((acc, &y), &m) in q.iter_mut().zip(im).zip(&self.orders) {
                    let m = m as i64;
                    *acc = (*acc + (x.rem_euclid(m) * y) % m) % m;
                }
            }
        }
        q
    }

    /// `σ_q` as an array `i ↦ σ_q(i)`.
    pub fn permutation_of(&self, q: &[i64]) -> Vec<usize> {
        let n = self.atoms();
        let mut p: Vec<usize> = (0..n).collect();
        for (j, &e) in q.iter().enumerate() {
            for _ in 0..e.rem_euclid(self.orders[j] as i64) {
                p = p.iter().map(|&i| self.perms[j][i]).collect();
            }
        }
        p
    }

    fn orbits_under(&self, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = self.atoms();
        let mut label = alloc::vec![usize::MAX; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut stack = alloc::vec![start];
            let mut orbit = Vec::new();
            label[start] = id;
            while let Some(i) = stack.pop() {
                orbit.push(i);
                for s in gens {
                    if label[s[i]] == usize::MAX {
                        label[s[i]] = id;
                        stack.push(s[i]);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    fn acting_generators(&self) -> Vec<Vec<usize>> {
        self.images.values().map(|q| self.permutation_of(q)).collect()
    }

    /// Orbits of the image of `G`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_under(&self.acting_generators())
    }

    fn positive_orbit_count(&self, orbits: &[Vec<usize>]) -> usize {
        orbits.iter().filter(|o| o.iter().any(|&i| self.weights[i].is_positive())).count()
    }

    pub fn is_ergodic(&self) -> bool {
        self.positive_orbit_count(&self.orbits()) == 1
    }

    /// Orbit means, weighted. Orbits of weight zero keep plain means.
    pub fn project<C: Coefficient>(&self, f: &[C]) -> Vec<C> {
        let mut out = alloc::vec![C::zero(); f.len()];
        for orbit in self.orbits() {
            let total = orbit.iter().fold(Rational::zero(), |a, &i| a + &self.weights[i]);
            let mean = if total.is_zero() {
                let mut s = C::zero();
                for &i in &orbit {
                    s = s.add(&f[i]);
                }
                s.div_count(orbit.len() as u64)
            } else {
                let mut s = C::zero();
                for &i in &orbit {
                    s = s.add(&C::from_rational(&(&self.weights[i] / &total)).mul(&f[i]));
                }
                s
            };
            for &i in &orbit {
                out[i] = mean.clone();
            }
        }
        out
    }

    /// Elements of the image `P` of `G` in `Q`.
    pub fn quotient_image(&self) -> Result<Vec<Vec<i64>>> {
        let gens: Vec<Vec<i64>> = self.images.values().cloned().collect();
        let set = self.closure(&[alloc::vec![0; self.orders.len()]], &gens)?;
        Ok(set.into_iter().collect())
    }

    fn add_q(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), &m)| (x + y) % m as i64).collect()
    }

    fn closure(&self, seed: &[Vec<i64>], gens: &[Vec<i64>]) -> Result<BTreeSet<Vec<i64>>> {
        let mut set: BTreeSet<Vec<i64>> = seed.iter().cloned().collect();
        let mut frontier: Vec<Vec<i64>> = seed.to_vec();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add_q(&x, g);
                if set.insert(y.clone()) {
                    if set.len() > MAX_QUOTIENT_IMAGE {
                        return Err(Error::SizeLimit {
                            what: "quotient image",
                            size: set.len() as u128,
                            budget: MAX_QUOTIENT_IMAGE as u128,
                        });
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(set)
    }

    /// Every subgroup `K` of the image `P` with `[P:K] ≤ m` acts ergodically.
    pub fn is_totally_ergodic(&self, m: u64) -> Result<bool> {
        let p = self.quotient_image()?;
        let zero = alloc::vec![0i64; self.orders.len()];
        let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let mut queue: Vec<BTreeSet<Vec<i64>>> = alloc::vec![[zero.clone()].into_iter().collect()];
        let mut subgroups = Vec::new();
        while let Some(h) = queue.pop() {
            let key: Vec<Vec<i64>> = h.iter().cloned().collect();
            if !seen.insert(key) {
                continue;
            }
            for x in &p {
                if !h.contains(x) {
                    let gens: Vec<Vec<i64>> = h.iter().cloned().chain(core::iter::once(x.clone())).collect();
                    queue.push(self.closure(std::slice::from_ref(&zero), &gens)?);
                }
            }
            subgroups.push(h);
        }
        for h in subgroups {
            if (p.len() / h.len()) as u64 > m {
                continue;
            }
            let gens: Vec<Vec<usize>> = h.iter().map(|q| self.permutation_of(q)).collect();
            if self.positive_orbit_count(&self.orbits_under(&gens)) != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Keys `weights`, `orders`, `perms`, `map`.
    pub(super) fn parse(kv: &[(String, String)], ctx: &str) -> Result<Self> {
        crate::text::expect_keys(kv, &["weights", "orders", "perms", "map"], ctx)?;
        let weights: Vec<Rational> = crate::text::parse_list(crate::text::bracketed(crate::text::get(kv, "weights", ctx)?, '[', ']')?)?;
        let orders: Vec<u32> = crate::text::parse_list(crate::text::bracketed(crate::text::get(kv, "orders", ctx)?, '[', ']')?)?;
        let perms_inner = crate::text::bracketed(crate::text::get(kv, "perms", ctx)?, '[', ']')?;
        let mut perms = Vec::new();
        for t in crate::text::split_top(perms_inner, ',').into_iter().filter(|t| !t.trim().is_empty()) {
            perms.push(crate::text::parse_list::<usize>(crate::text::bracketed(t, '[', ']')?)?);
        }
        let map_inner = crate::text::bracketed(crate::text::get(kv, "map", ctx)?, '[', ']')?;
        let mut images = BTreeMap::new();
        for t in crate::text::split_top(map_inner, ',').into_iter().filter(|t| !t.trim().is_empty()) {
            let (i, q) = t.split_once(':').ok_or_else(|| Error::Parse(alloc::format!("bad map entry {t:?}")))?;
            let i: u32 = i.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad coordinate {i:?}")))?;
            if images.insert(i, crate::text::parse_list(crate::text::bracketed(q, '[', ']')?)?).is_some() {
                bail!(Parse, "coordinate {i} mapped twice");
            }
        }
        Self::new(weights, orders, perms, images)
    }
}

impl fmt::Display for FinitePermutation {
    /// `finite weights=[…] orders=[…] perms=[[…],…] map=[i:[…],…]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perms: Vec<String> = self.perms.iter().map(|p| alloc::format!("[{}]", crate::text::join(p, ","))).collect();
        let map: Vec<String> = self.images.iter().map(|(i, q)| alloc::format!("{i}:[{}]", crate::text::join(q, ","))).collect();
        write!(
            f,
            "finite weights=[{}] orders=[{}] perms=[{}] map=[{}]",
            crate::text::join(&self.weights, ","),
            crate::text::join(&self.orders, ","),
            perms.join(","),
            map.join(",")
        )
    }
}
