//! Finite residue fields F_{p^d} = F_p[x]/(m(x)) with a deterministic,
//! reproducible choice of modulus: the lexicographically smallest monic
//! irreducible polynomial of the required degree (coefficients compared as
//! base-p digits, highest degree most significant).
//!
//! Elements are fixed-width slices of `d` words, ascending coefficients,
//! every word already reduced mod p. The hot path (series convolution) runs
//! through `acc_cross`/`reduce_scratch`, which accumulate raw cross products
//! into a caller-provided `u128` scratch without allocating.

use crate::{Error, Result};

/// Maximum supported residue degree d = f·m. Series slots store d words each;
/// past this the dense model stops being sensible.
pub const MAX_RESIDUE_DEGREE: usize = 16;

/// Largest prime accepted: single products must fit u64 and the scratch
/// accumulators u128.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub d: usize,
    /// Monic modulus, ascending coefficients, length d+1, leading word 1.
    pub modulus: Vec<u64>,
}

impl ResidueField {
    /// Build F_{p^d} over the canonical modulus.
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if !crate::linalg::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::BadContext(format!("prime {p} exceeds 2^31 - 1")));
        }
        if d == 0 || d > MAX_RESIDUE_DEGREE {
            return Err(Error::BadContext(format!(
                "residue degree {d} outside 1..={MAX_RESIDUE_DEGREE}"
            )));
        }
        let modulus = smallest_irreducible(p, d)?;
        Ok(ResidueField { p, d, modulus })
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.d]
    }

    pub fn one(&self) -> Vec<u64> {
        self.scalar(1)
    }

    /// Embed an F_p scalar as a constant.
    pub fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.d];
        v[0] = c % self.p;
        v
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + y) % self.p;
        }
    }

    pub fn sub_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + self.p - y) % self.p;
        }
    }

    pub fn neg_assign(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            if *x != 0 {
                *x = self.p - *x;
            }
        }
    }

    pub fn scalar_mul_assign(&self, a: &mut [u64], c: u64) {
        let c = c % self.p;
        for x in a.iter_mut() {
            *x = *x * c % self.p;
        }
    }

    /// scratch[k] += Σ_{i+j=k} a_i·b_j, raw (no reduction). scratch must hold
    /// at least 2d−1 words.
    pub fn acc_cross(&self, scratch: &mut [u128], a: &[u64], b: &[u64]) {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                scratch[i + j] += (ai as u128) * (bj as u128);
            }
        }
    }

    /// Reduce an accumulated raw product of width 2d−1 into a field element,
    /// clearing the scratch.
    pub fn reduce_scratch(&self, scratch: &mut [u128], out: &mut [u64]) {
        let p = self.p as u128;
        let width = 2 * self.d - 1;
        let mut tmp = [0u64; 2 * MAX_RESIDUE_DEGREE];
        for k in 0..width {
            tmp[k] = (scratch[k] % p) as u64;
            scratch[k] = 0;
        }
        // Divide by the monic modulus, top down.
        for k in (self.d..width).rev() {
            let c = tmp[k];
            if c == 0 {
                continue;
            }
            tmp[k] = 0;
            for (i, &mi) in self.modulus.iter().enumerate().take(self.d) {
                let idx = k - self.d + i;
                tmp[idx] = (tmp[idx] + (self.p - mi % self.p) * c % self.p) % self.p;
            }
        }
        out.copy_from_slice(&tmp[..self.d]);
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut scratch = [0u128; 2 * MAX_RESIDUE_DEGREE];
        self.acc_cross(&mut scratch[..2 * self.d - 1], a, b);
        let mut out = vec![0; self.d];
        self.reduce_scratch(&mut scratch[..2 * self.d - 1], &mut out);
        out
    }

    /// Multiplicative inverse, None for zero: extended Euclid in F_p[x],
    /// tracking only the Bezout coefficient of `a`.
    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if Self::is_zero(a) {
            return None;
        }
        let mut r0 = self.modulus.clone();
        let mut r1 = a.to_vec();
        poly_trim(&mut r1);
        let mut s0 = vec![0u64];
        let mut s1 = vec![1u64];
        while poly_deg(&r1) > 0 {
            let (q, r) = poly_divmod(self.p, &r0, &r1);
            let s2 = poly_sub(self.p, &s0, &poly_mul(self.p, &q, &s1));
            r0 = r1;
            r1 = if r.is_empty() { vec![0] } else { r };
            s0 = s1;
            s1 = s2;
        }
        // The modulus is irreducible and deg a < d, so gcd(a, modulus) = 1:
        // the loop ends with r1 a nonzero constant and deg s1 ≤ d − 1.
        let c = r1[0];
        debug_assert_ne!(c, 0, "gcd with an irreducible modulus must be constant");
        debug_assert!(s1.len() <= self.d);
        let cinv = scalar_inv(self.p, c);
        let mut out = vec![0; self.d];
        for (w, &s) in out.iter_mut().zip(&s1) {
            *w = s * cinv % self.p;
        }
        Some(out)
    }

    /// a^k by square-and-multiply.
    pub fn pow(&self, a: &[u64], mut k: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

pub(crate) fn scalar_inv(p: u64, a: u64) -> u64 {
    // Fermat: a^(p−2) mod p.
    let mut base = a % p;
    let mut k = p - 2;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

// --- dense F_p[x] helpers (ascending coefficients, arbitrary degree) ---

fn poly_deg(a: &[u64]) -> isize {
    for (i, &c) in a.iter().enumerate().rev() {
        if c != 0 {
            return i as isize;
        }
    }
    -1
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Division with remainder; divisor need not be monic.
fn poly_divmod(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = poly_deg(b);
    assert!(db >= 0, "division by zero polynomial");
    let db = db as usize;
    let binv = scalar_inv(p, b[db]);
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let da = poly_deg(&rem);
    if da < db as isize {
        return (vec![0], rem);
    }
    let mut q = vec![0u64; da as usize - db + 1];
    for k in (db..=da as usize).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        let coef = c * binv % p;
        q[k - db] = coef;
        for i in 0..=db {
            rem[k - db + i] = (rem[k - db + i] + p - b[i] * coef % p) % p;
        }
    }
    poly_trim(&mut rem);
    (q, rem)
}

/// x^(p^reps) mod f, starting from `from` (a polynomial), i.e. iterated
/// Frobenius applied to `from`.
fn frobenius_iterate(p: u64, f: &[u64], from: &[u64], reps: u32) -> Vec<u64> {
    let mut cur = from.to_vec();
    for _ in 0..reps {
        cur = polymod_pow(p, f, &cur, p);
    }
    cur
}

fn polymod_pow(p: u64, f: &[u64], base: &[u64], mut k: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_divmod(p, &poly_mul(p, &acc, &b), f).1;
        }
        b = poly_divmod(p, &poly_mul(p, &b, &b), f).1;
        k >>= 1;
    }
    if acc.is_empty() {
        acc = vec![0];
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while poly_deg(&y) >= 0 && !(y.len() == 1 && y[0] == 0) {
        let r = poly_divmod(p, &x, &y).1;
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    x
}

/// Rabin irreducibility test for a monic polynomial of degree d ≥ 1.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = poly_deg(f) as usize;
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^d) ≡ x (mod f)?
    let xq = frobenius_iterate(p, f, &x, d as u32);
    if poly_sub(p, &xq, &x) != vec![0] {
        return false;
    }
    // For every prime r | d: gcd(x^(p^(d/r)) − x, f) must be constant.
    for r in crate::linalg::prime_factors(d as u128) {
        let sub = frobenius_iterate(p, f, &x, (d as u64 / r) as u32);
        let diff = poly_sub(p, &sub, &x);
        let g = poly_gcd(p, f, &diff);
        if poly_deg(&g) > 0 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree d:
/// lower-degree coefficient blocks enumerated as base-p digits of a counter,
/// most significant digit = coefficient of x^{d−1}.
fn smallest_irreducible(p: u64, d: usize) -> Result<Vec<u64>> {
    let total = (p as u128).checked_pow(d as u32);
    let mut n: u128 = 0;
    loop {
        if let Some(t) = total {
            if n >= t {
                return Err(Error::Internal(format!(
                    "no irreducible polynomial of degree {d} over F_{p} found"
                )));
            }
        }
        let mut f = vec![0u64; d + 1];
        f[d] = 1;
        let mut rest = n;
        for i in 0..d {
            f[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        if is_irreducible(p, &f) {
            return Ok(f);
        }
        n += 1;
    }
}
