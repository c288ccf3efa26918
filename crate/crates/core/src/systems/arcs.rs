//! Finite unions of half-open arcs of the circle `R/Z`.

use alloc::vec::Vec;

/// Disjoint half-open arcs `[a, b)` with `0 ≤ a < b ≤ 1`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet { arcs: alloc::vec![(0.0, 1.0)] }
    }

    /// The arc from `start` of length `len`, wrapping around `1`.
    pub fn arc(start: f64, len: f64) -> Self {
        if len >= 1.0 {
            return Self::full();
        }
        if len <= 0.0 {
            return Self::empty();
        }
        let a = start - libm::floor(start);
        let b = a + len;
        let mut s = if b <= 1.0 { ArcSet { arcs: alloc::vec![(a, b)] } } else { ArcSet { arcs: alloc::vec![(0.0, b - 1.0), (a, 1.0)] } };
        s.arcs.retain(|(x, y)| y > x);
        s
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    /// The set moved by `t`: `{x + t}`.
    pub fn translate(&self, t: f64) -> Self {
        let t = t - libm::floor(t);
        let mut arcs = Vec::with_capacity(self.arcs.len() + 1);
        for &(a, b) in &self.arcs {
            let (a, b) = (a + t, b + t);
            if b <= 1.0 {
                arcs.push((a, b));
            } else if a >= 1.0 {
                arcs.push((a - 1.0, b - 1.0));
            } else {
                arcs.push((a, 1.0));
                arcs.push((0.0, b - 1.0));
            }
        }
        Self::normalized(arcs)
    }

    pub fn intersect(&self, o: &ArcSet) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.arcs.len() && j < o.arcs.len() {
            let (a, b) = self.arcs[i];
            let (c, d) = o.arcs[j];
            let lo = if a > c { a } else { c };
            let hi = if b < d { b } else { d };
            if hi > lo {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        ArcSet { arcs: out }
    }

    fn normalized(mut arcs: Vec<(f64, f64)>) -> Self {
        arcs.retain(|(a, b)| b > a);
        arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(arcs.len());
        for (a, b) in arcs {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        ArcSet { arcs: out }
    }
}
