//! Sparse multivariate Laurent polynomials over `Z` or `F_p`.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::gf::{fp_inv, PrimeField};
use crate::Error;

/// Exponent vector; entries may be negative.
///
/// Ordered graded-lexicographically: total degree first, then exponents left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn new(exponents: Vec<i32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_laurent(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<i32>> for Monomial {
    fn from(v: Vec<i32>) -> Self {
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with integer coefficients, reduced modulo `p` when a modulus is attached.
///
/// Zero coefficients are never stored; all monomials have `nvars` exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    modulus: Option<u64>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize, modulus: Option<u64>) -> Self {
        Polynomial {
            nvars,
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, modulus: Option<u64>, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero(nvars, modulus);
        f.add_term(Monomial::one(nvars), c.into());
        f
    }

    /// The polynomial `x_var`.
    pub fn var(nvars: usize, modulus: Option<u64>, var: usize) -> Self {
        Self::monomial(Monomial::var(nvars, var), modulus, 1)
    }

    pub fn monomial(m: Monomial, modulus: Option<u64>, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero(m.nvars(), modulus);
        f.add_term(m, c.into());
        f
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; like terms are combined.
    pub fn from_terms<I, C>(nvars: usize, modulus: Option<u64>, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (C, Vec<i32>)>,
        C: Into<BigInt>,
    {
        let mut f = Self::zero(nvars, modulus);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            f.add_term(Monomial(e), c.into());
        }
        Ok(f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Highest total degree among the terms, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(Monomial::is_laurent)
    }

    /// Same polynomial with coefficients reduced modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Polynomial {
        let mut f = Self::zero(self.nvars, Some(p));
        for (m, c) in &self.terms {
            f.add_term(m.clone(), c.clone());
        }
        f
    }

    fn normalize(&self, c: BigInt) -> BigInt {
        reduce(c, self.modulus)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.nvars(), self.nvars);
        let c = self.normalize(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = reduce(slot.get() + c, self.modulus);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), Error> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.check_compatible(other)?;
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(m.clone(), c.clone());
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.try_add(&-other)
    }

    /// Exact product; zero terms are dropped.
    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        let mut f = Self::zero(self.nvars, self.modulus);
        for (m, c) in acc {
            let c = f.normalize(c);
            if !c.is_zero() {
                f.terms.insert(m, c);
            }
        }
        Ok(f)
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut acc = Self::constant(self.nvars, self.modulus, 1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Polynomial {
        let c = c.into();
        let mut f = Self::zero(self.nvars, self.modulus);
        for (m, a) in &self.terms {
            f.add_term(m.clone(), a * &c);
        }
        f
    }

    /// Substitutes `x_i -> images[i]`; images must share a variable count and modulus.
    /// Negative exponents are rejected.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, Error> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        if self.is_laurent() {
            return Err(Error::InvalidParameter("cannot substitute into a Laurent polynomial"));
        }
        let (nvars, modulus) = match images.first() {
            Some(g) => (g.nvars, g.modulus),
            None => (0, self.modulus),
        };
        let mut out = Self::zero(nvars, modulus);
        for (m, c) in &self.terms {
            let mut term = Self::constant(nvars, modulus, c.clone());
            for (img, &e) in images.iter().zip(m.exponents()) {
                if e > 0 {
                    term = term.multiply(&img.pow(e as u32))?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Value at `point` modulo the field prime. Negative exponents use modular inverses.
    pub fn evaluate(&self, point: &[u64], field: &PrimeField) -> Result<u64, Error> {
        self.compile(field)?.evaluate(point)
    }

    /// Pre-reduces coefficients modulo the field prime for repeated evaluation.
    pub fn compile(&self, field: &PrimeField) -> Result<ModEvaluator, Error> {
        if let Some(q) = self.modulus {
            if q != field.modulus() {
                return Err(Error::ModulusMismatch);
            }
        }
        let p = BigInt::from(field.modulus());
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&p).to_u64().unwrap_or(0);
                (r != 0).then(|| (r, m.exponents().to_vec()))
            })
            .collect();
        Ok(ModEvaluator {
            field: *field,
            nvars: self.nvars,
            terms,
        })
    }
}

/// A polynomial with coefficients reduced modulo `p`, ready for fast evaluation.
#[derive(Debug, Clone)]
pub struct ModEvaluator {
    field: PrimeField,
    nvars: usize,
    terms: Vec<(u64, Vec<i32>)>,
}

impl ModEvaluator {
    pub fn evaluate(&self, point: &[u64]) -> Result<u64, Error> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let f = &self.field;
        let mut inverses: Vec<Option<u64>> = vec![None; self.nvars];
        let mut total = 0;
        for (c, exps) in &self.terms {
            let mut v = *c;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = f.reduce(point[i]);
                let base = if e > 0 {
                    x
                } else {
                    match inverses[i] {
                        Some(inv) => inv,
                        None => {
                            let inv = fp_inv(x, f).map_err(|_| Error::NonUnitAtLaurentMonomial)?;
                            inverses[i] = Some(inv);
                            inv
                        }
                    }
                };
                v = f.mul(v, f.pow(base, e.unsigned_abs() as u64));
            }
            total = f.add(total, v);
        }
        Ok(total)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let mut f = Polynomial::zero(self.nvars, self.modulus);
        for (m, c) in &self.terms {
            f.add_term(m.clone(), -c);
        }
        f
    }
}

// Operator forms panic on incompatible operands; use the `try_*` methods otherwise.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.multiply(rhs).expect("incompatible polynomials")
    }
}

/// Coefficient as a signed residue in `(-p/2, p/2]`, or the integer itself when unreduced.
pub fn balanced(c: &BigInt, modulus: Option<u64>) -> BigInt {
    match modulus {
        Some(p) => {
            let p = BigInt::from(p);
            let r = c.mod_floor(&p);
            if &r * 2 > p {
                r - p
            } else {
                r
            }
        }
        None => c.clone(),
    }
}

fn reduce(c: BigInt, modulus: Option<u64>) -> BigInt {
    match modulus {
        Some(p) => c.mod_floor(&BigInt::from(p)),
        None => c,
    }
}
