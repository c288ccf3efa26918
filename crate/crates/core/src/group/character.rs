//! Characters of the supported groups and exact character sums.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::{FolnerFamily, GroupDescriptor, GroupElement, GroupSelfMap};
use crate::angle::Angle;
use crate::cyclotomic::CyclotomicValue;
use crate::error::{bail, Error, Result};
use crate::scalar::CompensatedSum;

/// Character data. Direct-sum characters are stored as finite prefixes and
/// are trivial on coordinates beyond the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CharacterData {
    /// `χ(x) = e(Σ θ_i x_i)` with rational `θ_i` (`Z`, `Z^d`, `Z^∞`).
    Angles(Vec<Angle>),
    /// `χ_y(x) = ζ_p^{Σ x_i y_i}` (`⊕ Z/pZ`, `F_p[t]`, `F_{p^k}`).
    Residues(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: GroupDescriptor,
    data: CharacterData,
}

/// Exact value of a character at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    /// `ζ_p^k`
    Root { p: u32, k: u32 },
    /// `e(θ)` for a rational angle.
    Angle(Angle),
}

impl CharValue {
    pub fn to_complex(&self) -> Complex64 {
        self.angle().phasor()
    }

    pub fn angle(&self) -> Angle {
        match *self {
            CharValue::Root { p, k } => Angle::rational(k as i64, p as i64),
            CharValue::Angle(a) => a,
        }
    }

    pub fn is_one(&self) -> bool {
        self.angle().is_zero()
    }

    /// The value in `Z[ζ_q]` when its angle has denominator dividing the odd
    /// prime `q`.
    pub fn to_cyclotomic(&self, q: u32) -> Option<CyclotomicValue> {
        let (n, d) = self.angle().rational_part();
        if !self.angle().is_rational() || q as i64 % d != 0 {
            return None;
        }
        Some(CyclotomicValue::root(q, n * (q as i64 / d)))
    }
}

impl Character {
    pub fn new(group: &GroupDescriptor, data: CharacterData) -> Result<Self> {
        match (&data, group) {
            (
                CharacterData::Angles(a),
                GroupDescriptor::IntegerLine | GroupDescriptor::IntegerLattice { .. } | GroupDescriptor::FreeAbelianDirectSum,
            ) => {
                if a.iter().any(|t| !t.is_rational()) {
                    bail!(InvalidInput, "stored characters take rational angles only");
                }
                if let Some(r) = group.rank() {
                    if a.len() != r {
                        bail!(Mismatch, "{} angles for a group of rank {r}", a.len());
                    }
                }
            }
            (CharacterData::Residues(y), g) if g.torsion().is_some() => {
                let p = g.torsion().unwrap_or(0);
                if y.iter().any(|&c| c >= p) {
                    bail!(InvalidInput, "residues must lie in [0, {p})");
                }
                if let Some(r) = group.rank() {
                    if y.len() != r {
                        bail!(Mismatch, "{} residues for a group of rank {r}", y.len());
                    }
                }
            }
            _ => bail!(Mismatch, "character data does not fit {group}"),
        }
        Ok(Character { group: group.clone(), data })
    }

    /// `χ_y` on a torsion group.
    pub fn residues(group: &GroupDescriptor, y: Vec<u32>) -> Result<Self> {
        Self::new(group, CharacterData::Residues(y))
    }

    /// `e(Σ θ_i x_i)` on an integer group.
    pub fn angles(group: &GroupDescriptor, theta: Vec<Angle>) -> Result<Self> {
        Self::new(group, CharacterData::Angles(theta))
    }

    pub fn trivial(group: &GroupDescriptor) -> Result<Self> {
        match group {
            GroupDescriptor::IntegerLine | GroupDescriptor::IntegerLattice { .. } => {
                Self::angles(group, alloc::vec![Angle::ZERO; group.rank().unwrap_or(1)])
            }
            GroupDescriptor::FreeAbelianDirectSum => Self::angles(group, Vec::new()),
            GroupDescriptor::FiniteFieldLevel(f) => Self::residues(group, alloc::vec![0; f.k()]),
            _ => Self::residues(group, Vec::new()),
        }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn data(&self) -> &CharacterData {
        &self.data
    }

    pub fn is_trivial(&self) -> bool {
        match &self.data {
            CharacterData::Angles(a) => a.iter().all(Angle::is_zero),
            CharacterData::Residues(y) => y.iter().all(|&c| c == 0),
        }
    }

    /// Odd prime `q` such that every value is a `q`-th root of unity, if any.
    pub fn exact_order(&self) -> Option<u32> {
        match &self.data {
            CharacterData::Residues(_) => self.group.torsion(),
            CharacterData::Angles(a) => {
                let mut q = 1i64;
                for t in a {
                    let (_, d) = t.rational_part();
                    if d == 1 {
                        continue;
                    }
                    if q == 1 {
                        q = d;
                    } else if d != q {
                        return None;
                    }
                }
                if q == 1 {
                    Some(3)
                } else if q <= u32::MAX as i64 && super::is_odd_prime(q as u32) {
                    Some(q as u32)
                } else {
                    None
                }
            }
        }
    }

    pub fn eval(&self, g: &GroupElement) -> Result<CharValue> {
        self.group.check(g)?;
        Ok(self.eval_unchecked(g))
    }

    pub(crate) fn eval_unchecked(&self, g: &GroupElement) -> CharValue {
        match &self.data {
            CharacterData::Residues(y) => {
                let p = self.group.torsion().unwrap_or(1) as i64;
                let mut e: i64 = 0;
                for (i, x) in g.coords() {
                    if let Some(&yi) = y.get(i as usize - 1) {
                        e = (e + x * yi as i64) % p;
                    }
                }
                CharValue::Root { p: p as u32, k: e as u32 }
            }
            CharacterData::Angles(a) => {
                let mut acc = Angle::ZERO;
                for (i, x) in g.coords() {
                    if let Some(t) = a.get(i as usize - 1) {
                        acc = acc + t.scale(x);
                    }
                }
                CharValue::Angle(acc)
            }
        }
    }

    /// Canonical text `char y=[1,0,2]` or `char theta=[1/4,0]`.
    pub fn parse(group: &GroupDescriptor, s: &str) -> Result<Self> {
        let (head, kv) = crate::text::head_and_pairs(s)?;
        if head != "char" || kv.len() != 1 {
            bail!(Parse, "expected `char y=[…]` or `char theta=[…]`, got {s:?}");
        }
        let (k, v) = &kv[0];
        let inner = crate::text::bracketed(v, '[', ']')?;
        match k.as_str() {
            "y" => Self::residues(group, crate::text::parse_list(inner)?),
            "theta" => Self::angles(group, crate::text::parse_list(inner)?),
            _ => bail!(Parse, "unknown character key {k:?}"),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            CharacterData::Residues(y) => write!(f, "char y=[{}]", crate::text::join(y, ",")),
            CharacterData::Angles(a) => write!(f, "char theta=[{}]", crate::text::join(a, ",")),
        }
    }
}

/// `Σ_{g ∈ F_N} χ(·)`, exact when every summand is a `q`-th root of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterSum {
    pub exact: Option<CyclotomicValue>,
    pub approx: Complex64,
    pub count: u64,
}

impl CharacterSum {
    pub fn average(&self) -> Complex64 {
        self.approx / self.count as f64
    }

    /// Exact zero test; `None` when the sum is not exact.
    pub fn is_exact_zero(&self) -> Option<bool> {
        self.exact.as_ref().map(CyclotomicValue::is_zero)
    }

    /// Whether the average equals `v` exactly.
    pub fn average_equals(&self, v: &CharValue) -> Option<bool> {
        let sum = self.exact.as_ref()?;
        let target = v.to_cyclotomic(sum.p())?.scale(self.count as i64);
        Some(*sum == target)
    }
}

/// `Σ_{g ∈ F_N} χ(a(g + h) − a(g))`.
pub fn character_sum(chi: &Character, a: &GroupSelfMap, h: &GroupElement, family: &FolnerFamily, n: u64) -> Result<CharacterSum> {
    let desc = chi.group().clone();
    desc.check(h)?;
    character_sum_with(chi, family, n, |g| {
        let gh = desc.combine_unchecked(g, h);
        let x = a.apply(&desc, &gh)?;
        let y = a.apply(&desc, g)?;
        desc.difference(&x, &y)
    })
}

/// `Σ_{g ∈ F_N} χ(map(g))` for an arbitrary map into the character's group.
pub fn character_sum_with(
    chi: &Character,
    family: &FolnerFamily,
    n: u64,
    mut map: impl FnMut(&GroupElement) -> Result<GroupElement>,
) -> Result<CharacterSum> {
    let desc = chi.group();
    let q = chi.exact_order();
    let mut exact = q.map(CyclotomicValue::zero);
    let mut approx = CompensatedSum::<Complex64>::new();
    let mut count = 0u64;
    for g in family.elements(desc, n)? {
        let x = map(&g)?;
        let v = chi.eval(&x)?;
        if let (Some(acc), Some(q)) = (exact.as_mut(), q) {
            let a = v.angle();
            let (num, den) = a.rational_part();
            if (q as i64) % den != 0 {
                return Err(Error::InvalidInput(alloc::format!("value {a} is not a {q}-th root of unity")));
            }
            acc.add_root(num * (q as i64 / den));
        }
        approx.add(&v.to_complex());
        count += 1;
    }
    let approx = match &exact {
        Some(e) => e.to_complex(),
        None => approx.value(),
    };
    Ok(CharacterSum { exact, approx, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn evaluation_examples() {
        let g = GroupDescriptor::prime_sum(3).unwrap();
        let chi = Character::residues(&g, alloc::vec![1]).unwrap();
        let x = g.from_coords(&[(1, 2)]).unwrap();
        assert_eq!(chi.eval(&x).unwrap(), CharValue::Root { p: 3, k: 2 });
        assert!(Character::trivial(&g).unwrap().eval(&x).unwrap().is_one());

        let z = GroupDescriptor::IntegerLine;
        let chi = Character::angles(&z, alloc::vec![Angle::rational(1, 4)]).unwrap();
        let v = chi.eval(&GroupElement::Int(6)).unwrap();
        assert_eq!(v.angle(), Angle::rational(1, 2));
        assert_eq!(v.to_complex(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn irrational_characters_rejected() {
        let z = GroupDescriptor::IntegerLine;
        let a = Angle::tag(crate::angle::IrrationalTag::Sqrt2Minus1);
        assert!(Character::angles(&z, alloc::vec![a]).is_err());
        let g = GroupDescriptor::prime_sum(3).unwrap();
        assert!(Character::residues(&g, alloc::vec![3]).is_err());
        assert!(Character::residues(&GroupDescriptor::IntegerLine, alloc::vec![1]).is_err());
    }

    #[test]
    fn full_period_sum_vanishes() {
        let g = GroupDescriptor::prime_sum(3).unwrap();
        let chi = Character::residues(&g, alloc::vec![1]).unwrap();
        let fam = FolnerFamily::standard(&g).unwrap();
        let h = g.from_coords(&[(1, 1), (4, 2)]).unwrap();
        let s = character_sum(&chi, &GroupSelfMap::Identity, &h, &fam, 1).unwrap();
        assert_eq!(s.is_exact_zero(), Some(false)); // identity map: χ(h) each term
                                                    // With the plain sum over F_1 instead of differences:
        let s = character_sum_with(&chi, &fam, 1, |x| Ok(x.clone())).unwrap();
        assert_eq!(s.is_exact_zero(), Some(true));
    }

    #[test]
    fn text_round_trip() {
        let g = GroupDescriptor::prime_sum(3).unwrap();
        let chi = Character::parse(&g, "char y=[1,0,2]").unwrap();
        assert_eq!(chi.to_string(), "char y=[1,0,2]");
        let z = GroupDescriptor::lattice(2).unwrap();
        let chi = Character::parse(&z, "char theta=[1/4,0]").unwrap();
        assert_eq!(chi.to_string(), "char theta=[1/4,0]");
        assert!(Character::parse(&z, "char theta=[1/4]").is_err());
    }
}
