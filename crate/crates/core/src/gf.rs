//! Prime fields `F_p` and their extensions `F_{p^m}` in the polynomial basis.
//!
//! Elements of `F_{p^m}` are coefficient vectors `c_0 + c_1 a + ... + c_{m-1} a^{m-1}`
//! where `a` is a root of the lexicographically smallest monic irreducible of
//! degree `m`. A vector `x = (x_1, ..., x_m)` in `F_p^m` is identified with the
//! element whose coefficients are `(x_1, ..., x_m)` in that order.

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// Largest modulus accepted by [`PrimeField`]; products of two residues fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field of residues modulo a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn reduce_signed(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        let mut b = base % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, Error> {
        fp_inv(a, self)
    }
}

/// Multiplicative inverse of `a` modulo the field prime.
pub fn fp_inv(a: u64, field: &PrimeField) -> Result<u64, Error> {
    let p = field.modulus() as i64;
    let a = (a % field.modulus()) as i64;
    if a == 0 {
        return Err(Error::NonInvertible);
    }
    // extended Euclid on (a, p)
    let (mut r0, mut r1) = (a, p);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    Ok(s0.rem_euclid(p) as u64)
}

// Dense polynomials over F_p, constant term first, used only to realize F_{p^m}.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m` (degree >= 1).
fn poly_rem_monic(field: &PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                let idx = shift + i;
                r[idx] = field.sub(r[idx], field.mul(lead, c));
            }
        }
    }
    r
}

fn has_root(field: &PrimeField, f: &[u64]) -> bool {
    (0..field.modulus()).any(|x| {
        f.iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
            == 0
    })
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the base-p
/// digits of `rank`, with `c_{deg-1}` most significant.
fn monic_from_rank(p: u64, deg: usize, mut rank: u64) -> Vec<u64> {
    let mut coeffs = vec![0u64; deg + 1];
    coeffs[deg] = 1;
    for c in coeffs.iter_mut().take(deg) {
        *c = rank % p;
        rank /= p;
    }
    coeffs
}

/// Checks irreducibility of a monic polynomial by trial division against every
/// monic polynomial of degree at most `deg/2`.
pub fn is_irreducible(field: &PrimeField, f: &[u64]) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 || f[f.len() - 1] != 1 {
        return false;
    }
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    if has_root(field, &f) {
        return false;
    }
    let p = field.modulus();
    for d in 2..=deg / 2 {
        let count = p.pow(d as u32);
        for rank in 0..count {
            let g = monic_from_rank(p, d, rank);
            if trim(poly_rem_monic(field, &f, &g)).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `m` over `F_p`, ordering candidates by
/// their coefficients from `x^{m-1}` down to the constant term.
pub fn find_irreducible(field: &PrimeField, m: usize) -> Vec<u64> {
    assert!(m >= 1, "extension degree must be positive");
    let p = field.modulus();
    let mut rank = 0u64;
    loop {
        let f = monic_from_rank(p, m, rank);
        if is_irreducible(field, &f) {
            return f;
        }
        rank += 1;
    }
}

/// An element of `F_{p^m}`; arithmetic goes through the owning [`ExtField`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    coeffs: Vec<u64>,
}

impl ExtElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The extension `F_{p^m}` realized as `F_p[x] / (irreducible)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    degree: usize,
    irreducible: Vec<u64>,
}

impl ExtField {
    /// Builds `F_{p^m}` over the deterministic smallest irreducible.
    pub fn new(p: u64, m: usize) -> Result<Self, Error> {
        let base = PrimeField::new(p)?;
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1"));
        }
        let order = (p as u128).checked_pow(m as u32);
        if order.is_none_or(|o| o > u64::MAX as u128) {
            return Err(Error::InvalidParameter("field order overflows u64"));
        }
        let irreducible = find_irreducible(&base, m);
        Ok(ExtField {
            base,
            degree: m,
            irreducible,
        })
    }

    /// Builds `F_{p^m}` over a caller-supplied monic polynomial (constant term first).
    pub fn with_modulus(p: u64, irreducible: Vec<u64>) -> Result<Self, Error> {
        let base = PrimeField::new(p)?;
        if irreducible.iter().any(|&c| c >= p) || !is_irreducible(&base, &irreducible) {
            return Err(Error::InvalidParameter("modulus is not a monic irreducible"));
        }
        Ok(ExtField {
            base,
            degree: irreducible.len() - 1,
            irreducible,
        })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn irreducible(&self) -> &[u64] {
        &self.irreducible
    }

    /// `p^m`.
    pub fn order(&self) -> u64 {
        self.base.modulus().pow(self.degree as u32)
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<ExtElement, Error> {
        if coeffs.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|&c| c >= self.base.modulus()) {
            return Err(Error::InvalidParameter("coefficient out of range"));
        }
        Ok(ExtElement {
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> ExtElement {
        let mut coeffs = vec![0; self.degree];
        coeffs[0] = 1;
        ExtElement { coeffs }
    }

    /// Element whose coefficient vector is the `index`-th vector of `F_p^m` in
    /// lexicographic order (first coefficient most significant).
    pub fn from_index(&self, mut index: u64) -> ExtElement {
        let p = self.base.modulus();
        let mut coeffs = vec![0; self.degree];
        for c in coeffs.iter_mut().rev() {
            *c = index % p;
            index /= p;
        }
        ExtElement { coeffs }
    }

    pub fn index_of(&self, a: &ExtElement) -> u64 {
        let p = self.base.modulus();
        a.coeffs.iter().fold(0, |acc, &c| acc * p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.sub(x, y))
                .collect(),
        }
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.degree;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y));
            }
        }
        let mut coeffs = poly_rem_monic(&self.base, &prod, &self.irreducible);
        coeffs.resize(m, 0);
        ExtElement { coeffs }
    }

    pub fn pow(&self, a: &ExtElement, mut exp: u64) -> ExtElement {
        let mut acc = self.one();
        let mut b = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            exp >>= 1;
        }
        acc
    }

    /// The norm `N(a) = a^{(p^m - 1)/(p - 1)}`, an element of the prime field.
    pub fn norm(&self, a: &ExtElement) -> u64 {
        if a.is_zero() {
            return 0;
        }
        let p = self.base.modulus();
        let e = (self.order() - 1) / (p - 1);
        let n = self.pow(a, e);
        debug_assert!(n.coeffs[1..].iter().all(|&c| c == 0));
        n.coeffs[0]
    }

    /// Norms of all field elements indexed by [`ExtField::index_of`].
    pub fn norm_table(&self) -> Vec<u64> {
        self.elements().map(|a| self.norm(&a)).collect()
    }
}

/// Norm of `a` in `field`; shorthand for [`ExtField::norm`].
pub fn norm(field: &ExtField, a: &ExtElement) -> u64 {
    field.norm(a)
}
