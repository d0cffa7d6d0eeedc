//! The obstruction polynomial `theta` in `F_p[w_1, .., w_k]` and the grid dimensions
//! its monomials certify.
//!
//! A monomial `w^i` with nonzero coefficient forces every continuous function on
//! `R^{d_1} x .. x R^{d_k}` to be constant on some `p x .. x p` grid as soon as
//! `2 i_l <= (p - 1)(d_l - 1)` for every `l`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::gf::{is_prime, PrimeField};
use crate::poly::Polynomial;
use crate::Error;

/// Cap on `p^k` for [`theta_poly`].
pub const MAX_FIELD_POINTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    pub p: u64,
    pub k: usize,
    /// Coefficients reduced into `[0, p)`; exponents are the `i_l`.
    pub poly: Polynomial,
    /// Always `false`: only the support is meaningful, the global scalar is not fixed.
    pub sign_normalized: bool,
}

impl ThetaPoly {
    /// Exponent vectors with nonzero coefficient, sorted lexicographically.
    pub fn support(&self) -> Vec<Vec<u32>> {
        let set: BTreeSet<Vec<u32>> = self
            .poly
            .terms()
            .map(|(m, _)| m.exponents().iter().map(|&e| e as u32).collect())
            .collect();
        set.into_iter().collect()
    }

    /// `(p^k - 1) / 2`, the degree of every monomial.
    pub fn degree(&self) -> u64 {
        (self.p.pow(self.k as u32) - 1) / 2
    }
}

fn odd_prime(p: u64) -> Result<PrimeField, Error> {
    if p == 2 {
        return Err(Error::InvalidParameter("p must be odd"));
    }
    PrimeField::new(p)
}

type Homogeneous = BTreeMap<Vec<u32>, u64>;

fn times_linear(f: &Homogeneous, c: &[u64], field: &PrimeField) -> Homogeneous {
    let mut out = Homogeneous::new();
    for (e, &a) in f {
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] += 1;
            let slot = out.entry(e2).or_insert(0);
            *slot = field.add(*slot, field.mul(a, ci));
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn to_theta(p: u64, k: usize, f: Homogeneous) -> ThetaPoly {
    let poly = Polynomial::from_terms(
        k,
        Some(p),
        f.into_iter()
            .map(|(e, c)| (c, e.into_iter().map(|x| x as i32).collect::<Vec<_>>())),
    )
    .expect("exponent vectors have k entries");
    ThetaPoly {
        p,
        k,
        poly,
        sign_normalized: false,
    }
}

/// Vectors of `F_p^k`, `k >= 1`, whose first nonzero coordinate lies in `[1, (p-1)/2]`.
fn representatives(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(k as u32);
    (1..total).filter_map(move |mut idx| {
        let mut c = vec![0; k];
        for x in c.iter_mut().rev() {
            *x = idx % p;
            idx /= p;
        }
        let lead = *c.iter().find(|&&x| x != 0)?;
        (lead <= (p - 1) / 2).then_some(c)
    })
}

fn product_of_forms(field: &PrimeField, k: usize, forms: impl Iterator<Item = Vec<u64>>) -> Homogeneous {
    let mut acc = Homogeneous::new();
    acc.insert(vec![0; k], 1);
    for c in forms {
        acc = times_linear(&acc, &c, field);
    }
    acc
}

/// `theta` up to a nonzero scalar: the product of the linear forms `c . w` over one
/// representative `c` of each pair `{c, -c}` of nonzero vectors in `F_p^k`.
pub fn theta_poly(p: u64, k: usize) -> Result<ThetaPoly, Error> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    let field = odd_prime(p)?;
    let points = p
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_FIELD_POINTS)
        .ok_or(Error::TooLarge(p.saturating_pow(k as u32)))?;
    debug_assert!(points > 1);
    let f = product_of_forms(&field, k, representatives(p, k));
    Ok(to_theta(p, k, f))
}

/// The product of `c . w` over all nonzero `c` in `F_p^k`; its support equals that of
/// `theta^2`.
pub fn full_form_product(p: u64, k: usize) -> Result<ThetaPoly, Error> {
    let field = odd_prime(p)?;
    if p.checked_pow(k as u32).is_none_or(|n| n > MAX_FIELD_POINTS) {
        return Err(Error::TooLarge(p.saturating_pow(k as u32)));
    }
    let all = (1..p.pow(k as u32)).map(|mut idx| {
        let mut c = vec![0; k];
        for x in c.iter_mut().rev() {
            *x = idx % p;
            idx /= p;
        }
        c
    });
    Ok(to_theta(p, k, product_of_forms(&field, k, all)))
}

/// `w_1^m w_2^m (w_1^{2m} - w_2^{2m})^m` with `m = (p-1)/2`, expanded mod `p`.
pub fn theta_closed_form_k2(p: u64) -> Result<ThetaPoly, Error> {
    let field = odd_prime(p)?;
    let m = (p - 1) / 2;
    let mut f = Homogeneous::new();
    // C(m, l) mod p by the ratio recurrence; m < p so every l + 1 is invertible
    let mut binom = 1;
    for l in 0..=m {
        let c = if (m - l) % 2 == 1 { field.neg(binom) } else { binom };
        f.insert(vec![(m + 2 * m * l) as u32, (m + 2 * m * (m - l)) as u32], c);
        binom = field.mul(field.mul(binom, (m - l) % p), field.inv(l + 1)?);
    }
    Ok(to_theta(p, 2, f))
}

/// Dimensions `(d_1, .., d_k)` of the factors `R^{d_l}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimensionTuple {
    pub dims: Vec<u64>,
}

impl DimensionTuple {
    pub fn new(dims: Vec<u64>) -> Self {
        assert!(dims.iter().all(|&d| d >= 1), "dimensions must be positive");
        DimensionTuple { dims }
    }

    /// Coordinatewise `self >= other`.
    pub fn dominates(&self, other: &DimensionTuple) -> bool {
        self.dims.len() == other.dims.len() && self.dims.iter().zip(&other.dims).all(|(a, b)| a >= b)
    }
}

/// Smallest tuple satisfying `2 i_l <= (p - 1)(d_l - 1)`: `d_l = ceil(2 i_l / (p-1)) + 1`.
pub fn tuple_for_monomial(exponents: &[u32], p: u64) -> DimensionTuple {
    DimensionTuple::new(
        exponents
            .iter()
            .map(|&i| (2 * i as u64).div_ceil(p - 1) + 1)
            .collect(),
    )
}

/// The minimal tuples certified by monomials of `theta`, restricted to entries
/// `<= max_dim` and sorted lexicographically.
pub fn admissible_tuples(theta: &ThetaPoly, max_dim: u64) -> Vec<DimensionTuple> {
    assert!(max_dim >= 1, "max_dim must be positive");
    let candidates: BTreeSet<DimensionTuple> = theta
        .support()
        .iter()
        .map(|e| tuple_for_monomial(e, theta.p))
        .filter(|d| d.dims.iter().all(|&x| x <= max_dim))
        .collect();
    candidates
        .iter()
        .filter(|d| !candidates.iter().any(|o| o != *d && d.dominates(o)))
        .cloned()
        .collect()
}

/// `2 ceil((p - 1) / 4) + 2`, checked against the least `d` for which `(d, d)`
/// dominates an admissible tuple of `theta(p, 2)`.
pub fn grid_dimension(p: u64) -> Result<u64, Error> {
    odd_prime(p)?;
    let formula = 2 * (p - 1).div_ceil(4) + 2;
    let theta = theta_poly(p, 2)?;
    let criterion = admissible_tuples(&theta, u64::MAX)
        .iter()
        .map(|d| d.dims.iter().copied().max().unwrap_or(1))
        .min()
        .unwrap_or(u64::MAX);
    if criterion != formula {
        return Err(Error::CrossCheck { formula, criterion });
    }
    Ok(formula)
}

/// Whether `p` is an odd prime accepted by this module.
pub fn is_odd_prime(p: u64) -> bool {
    p != 2 && is_prime(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn supp(v: &[[u32; 2]]) -> Vec<Vec<u32>> {
        let mut s: Vec<Vec<u32>> = v.iter().map(|x| x.to_vec()).collect();
        s.sort();
        s
    }

    fn tuples(v: &[&[u64]]) -> Vec<DimensionTuple> {
        v.iter().map(|d| DimensionTuple::new(d.to_vec())).collect()
    }

    #[test]
    fn small_supports() {
        assert_eq!(theta_poly(3, 2).unwrap().support(), supp(&[[1, 3], [3, 1]]));
        assert_eq!(theta_poly(5, 2).unwrap().support(), supp(&[[2, 10], [6, 6], [10, 2]]));
        assert_eq!(theta_poly(3, 1).unwrap().support(), vec![vec![1]]);
    }

    #[test]
    fn hand_expansion_p3() {
        // w1 * w2 * (w1 + w2) * (w1 + 2 w2) = w1^3 w2 + 3 w1^2 w2^2 + 2 w1 w2^3
        let t = theta_poly(3, 2).unwrap();
        let coeffs: Vec<(Vec<u32>, u64)> = t
            .poly
            .terms()
            .map(|(m, c)| (m.exponents().iter().map(|&e| e as u32).collect(), c.try_into().unwrap()))
            .collect();
        assert!(coeffs.contains(&(vec![3, 1], 1)));
        assert!(coeffs.contains(&(vec![1, 3], 2)));
        assert_eq!(coeffs.len(), 2);
    }

    #[test]
    fn closed_form_examples() {
        let t = theta_closed_form_k2(3).unwrap();
        assert_eq!(t.support(), supp(&[[1, 3], [3, 1]]));
        let t5 = theta_closed_form_k2(5).unwrap();
        assert_eq!(t5.support(), supp(&[[2, 10], [6, 6], [10, 2]]));
        let mid = t5
            .poly
            .terms()
            .find(|(m, _)| m.exponents() == [6, 6])
            .map(|(_, c)| c.clone())
            .unwrap();
        assert_eq!(mid, 3.into());
        for p in [7u64, 11, 13] {
            let m = (p - 1) / 2;
            let expected: Vec<Vec<u32>> = (0..=m)
                .map(|l| vec![(m + 2 * m * l) as u32, (m + 2 * m * (m - l)) as u32])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            assert_eq!(theta_closed_form_k2(p).unwrap().support(), expected);
        }
    }

    #[test]
    fn errors() {
        assert!(theta_poly(2, 2).is_err());
        assert!(theta_poly(9, 2).is_err());
        assert_eq!(theta_poly(1009, 2), Err(Error::TooLarge(1009 * 1009)));
        assert!(theta_closed_form_k2(2).is_err());
        assert!(grid_dimension(2).is_err());
    }

    #[test]
    fn tuples_examples() {
        assert_eq!(
            admissible_tuples(&theta_poly(5, 2).unwrap(), 100),
            tuples(&[&[2, 6], &[4, 4], &[6, 2]])
        );
        assert_eq!(admissible_tuples(&theta_poly(3, 2).unwrap(), 100), tuples(&[&[2, 4], &[4, 2]]));
        assert_eq!(admissible_tuples(&theta_poly(3, 1).unwrap(), 100), tuples(&[&[2]]));
        assert_eq!(admissible_tuples(&theta_poly(5, 2).unwrap(), 5), tuples(&[&[4, 4]]));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(grid_dimension(5), Ok(4));
        assert_eq!(grid_dimension(3), Ok(4));
        assert_eq!(grid_dimension(7), Ok(6));
    }

    #[test]
    fn odd_primes_up_to_31() {
        for p in (3..=31).filter(|&p| is_odd_prime(p)) {
            let d = grid_dimension(p).unwrap();
            assert_eq!(d, 2 * (p - 1).div_ceil(4) + 2);
        }
    }

    #[test]
    fn k3_degree() {
        let t = theta_poly(3, 3).unwrap();
        assert_eq!(t.degree(), 13);
        assert!(t.poly.terms().all(|(m, _)| m.degree() == 13));
        assert!(!t.support().is_empty());
    }
}
