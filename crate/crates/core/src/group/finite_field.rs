//! Finite fields `F_{p^k}` as `F_p[x]/(m(x))`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};

pub const MAX_FIELD_DEGREE: usize = 16;

/// Trial-division primality for `p > 2`.
pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `F_{p^k}` with a fixed monic irreducible modulus of degree `k`.
///
/// Elements are coefficient vectors `[c_0, …, c_{k-1}]` of polynomials in
/// `x` of degree `< k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u32,
    k: usize,
    /// `m_0..m_{k-1}, 1`
    modulus: Vec<u32>,
}

impl FiniteField {
    /// Picks the first monic irreducible of degree `k` in the order of the
    /// integer `Σ m_i p^i` (leading lower coefficient most significant).
    pub fn new(p: u32, k: usize) -> Result<Self> {
        if !is_odd_prime(p) || p >= 1 << 31 {
            bail!(InvalidInput, "{p} is not an odd prime below 2^31");
        }
        if k == 0 || k > MAX_FIELD_DEGREE {
            bail!(InvalidInput, "field degree {k} outside 1..={MAX_FIELD_DEGREE}");
        }
        let mut digits = vec![0u32; k];
        loop {
            let mut m = digits.clone();
            m.push(1);
            if is_irreducible(p, &m) {
                return Ok(FiniteField { p, k, modulus: m });
            }
            // Increment the base-p counter, lowest coefficient fastest.
            let mut i = 0;
            loop {
                assert!(i < k, "no irreducible polynomial of degree {k} over F_{p}");
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Monic modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let p = self.p as i64;
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(p)).collect()
    }

    pub fn scale(&self, a: &[i64], c: i64) -> Vec<i64> {
        let p = self.p as i64;
        a.iter().map(|x| ((*x as i128 * c as i128).rem_euclid(p as i128)) as i64).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let p = self.p as u64;
        let k = self.k;
        let mut prod = [0u64; 2 * MAX_FIELD_DEGREE];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // x^d = x^{d-k} · x^k and x^k ≡ −Σ m_i x^i.
            for i in 0..k {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    let t = c * m % p;
                    prod[d - k + i] = (prod[d - k + i] + p - t) % p;
                }
            }
        }
        prod[..k].iter().map(|&x| x as i64).collect()
    }

    pub fn pow(&self, a: &[i64], mut e: u128) -> Vec<i64> {
        let mut base = a.to_vec();
        let mut acc = vec![0i64; self.k];
        acc[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^{p^k − 2}`; `None` for zero.
    pub fn inverse(&self, a: &[i64]) -> Option<Vec<i64>> {
        if a.iter().all(|&x| x == 0) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }
}

// Polynomials over F_p as coefficient vectors, lowest degree first, without
// trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(prod, m, p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

fn poly_rem(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            let t = c * mi % p;
            a[da - dm + i] = (a[da - dm + i] + p - t) % p;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^j} mod m` for `j = 0..=k`.
fn frobenius_powers(m: &[u64], p: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(k + 1);
    let mut cur = poly_rem(vec![0, 1], m, p);
    out.push(cur.clone());
    for _ in 0..k {
        // cur ← cur^p
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
        out.push(cur.clone());
    }
    out
}

/// Rabin's test: a monic `m` of degree `k` is irreducible over `F_p` iff
/// `x^{p^k} ≡ x (mod m)` and `gcd(x^{p^{k/q}} − x, m) = 1` for each prime
/// `q | k`.
pub(crate) fn is_irreducible(p: u32, monic: &[u32]) -> bool {
    let p = p as u64;
    let m: Vec<u64> = monic.iter().map(|&c| c as u64).collect();
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let frob = frobenius_powers(&m, p, k);
    let x = poly_rem(vec![0, 1], &m, p);
    if frob[k] != x {
        return false;
    }
    let mut n = k;
    let mut q = 2;
    while n > 1 {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            let mut diff = frob[k / q].clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = poly_gcd(m.clone(), diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        q += 1;
    }
    true
}
