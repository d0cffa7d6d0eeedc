//! Polynomial maps `F^s -> F^n` with regularity and nondegeneracy testers over `F_p`.
//!
//! A map is `t`-regular when the images of any `t` distinct points are linearly
//! independent. It is nondegenerate of order `t` when every codimension-`s` linear
//! subspace meets its image in at most `t` points. Neither property can be decided
//! over `C` here; the testers work over `F_p`, where a failure is a genuine
//! counterexample for that prime and a pass is evidence only.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::gf::PrimeField;
use crate::par;
use crate::poly::{ModEvaluator, Monomial, Polynomial};
use crate::primes::first_primes;
use crate::rng::{derive_seed, seeded};
use crate::Error;

/// Where a map is evaluated: all of `F_p^s`, or the torus `(F_p^*)^s` for Laurent maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Affine,
    Torus,
}

/// A list of `n` polynomials in `s` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Polynomial>,
    s: usize,
    domain: Domain,
}

impl PolyMap {
    /// The domain defaults to the torus when any component has a negative exponent.
    pub fn new(s: usize, components: Vec<Polynomial>) -> Result<Self, Error> {
        if let Some(bad) = components.iter().find(|f| f.nvars() != s) {
            return Err(Error::DimensionMismatch {
                expected: s,
                found: bad.nvars(),
            });
        }
        let domain = if components.iter().any(Polynomial::is_laurent) {
            Domain::Torus
        } else {
            Domain::Affine
        };
        Ok(PolyMap {
            components,
            s,
            domain,
        })
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Largest total degree of a component (absolute exponents for Laurent terms).
    pub fn degree_bound(&self) -> u64 {
        self.components
            .iter()
            .flat_map(|f| f.terms())
            .map(|(m, _)| m.exponents().iter().map(|e| e.unsigned_abs() as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluator(&self, field: &PrimeField) -> Result<MapEvaluator, Error> {
        Ok(MapEvaluator {
            components: self
                .components
                .iter()
                .map(|f| f.compile(field))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Number of points in the scan domain over `F_p`.
    pub fn domain_size(&self, p: u64) -> u64 {
        let base = match self.domain {
            Domain::Affine => p,
            Domain::Torus => p - 1,
        };
        base.saturating_pow(self.s as u32)
    }

    /// The `index`-th domain point in lexicographic order.
    pub fn domain_point(&self, p: u64, mut index: u64) -> Vec<u64> {
        let (base, offset) = match self.domain {
            Domain::Affine => (p, 0),
            Domain::Torus => (p - 1, 1),
        };
        let mut x = vec![0; self.s];
        for c in x.iter_mut().rev() {
            *c = index % base + offset;
            index /= base;
        }
        x
    }
}

/// Component evaluators with coefficients pre-reduced modulo `p`.
#[derive(Debug, Clone)]
pub struct MapEvaluator {
    components: Vec<ModEvaluator>,
}

impl MapEvaluator {
    pub fn evaluate(&self, point: &[u64]) -> Result<Vec<u64>, Error> {
        self.components.iter().map(|f| f.evaluate(point)).collect()
    }
}

/// Rank of a matrix over `F_p` by Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u64>], field: &PrimeField) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| field.reduce(x)).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for x in m[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..ncols {
                    let sub = field.mul(factor, m[rank][c]);
                    m[r][c] = field.sub(m[r][c], sub);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Exponent vectors of all monomials of degree at most `d` in `s` variables, in
/// graded-lexicographic order (constant first).
pub fn monomials_up_to(s: usize, d: u32) -> Vec<Vec<i32>> {
    fn rec(s: usize, left: i32, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if prefix.len() == s {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(s, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, d as i32, &mut Vec::with_capacity(s), &mut out);
    out.sort_by(|a, b| Monomial::new(a.clone()).cmp(&Monomial::new(b.clone())));
    out
}

/// The full Veronese map listing every monomial of degree at most `d`.
pub fn veronese_full(s: usize, d: u32) -> PolyMap {
    let components = monomials_up_to(s, d)
        .into_iter()
        .map(|e| Polynomial::monomial(Monomial::new(e), None, 1))
        .collect();
    PolyMap::new(s, components).expect("components have s variables")
}

/// Result of [`veronese_regular`].
#[derive(Debug, Clone)]
pub struct RegularMap {
    pub map: PolyMap,
    pub degree: u32,
    pub seed: u64,
    /// Projections rejected before one of full rank was found.
    pub resamples: u32,
}

/// Half-width of the coefficient range for projections drawn without a modulus.
pub const INTEGER_PROJECTION_RANGE: i64 = 100;

const MAX_PROJECTION_ATTEMPTS: u32 = 64;

// Rank test for integer projections; full rank mod a prime implies full rank over Q.
const INTEGER_RANK_PRIME: u64 = 2_147_483_647;

/// A seeded random linear projection of the degree-`d` Veronese map into `(s+1)t`
/// coordinates. Coefficients are uniform in `[0, p)` when `p` is given, otherwise
/// uniform integers in `[-100, 100]`.
///
/// A projection whose matrix is not of full rank is discarded and redrawn from the
/// next derived seed; the number of redraws is recorded.
pub fn veronese_regular(
    s: usize,
    t: usize,
    d: u32,
    seed: u64,
    p: Option<u64>,
) -> Result<RegularMap, Error> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidParameter("s and t must be positive"));
    }
    if (d as usize) + 1 < t {
        return Err(Error::InvalidParameter("degree must be at least t - 1"));
    }
    let n = (s + 1) * t;
    // dimension count for a generic projection to stay t-regular
    assert!(s * t < n - (t - 1));
    let field = PrimeField::new(p.unwrap_or(INTEGER_RANK_PRIME))?;
    let basis = monomials_up_to(s, d);
    let wanted_rank = n.min(basis.len());
    for attempt in 0..MAX_PROJECTION_ATTEMPTS {
        let mut rng = seeded(derive_seed(seed, attempt as u64));
        let matrix: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..basis.len())
                    .map(|_| match p {
                        Some(p) => rng.random_range(0..p) as i64,
                        None => rng.random_range(-INTEGER_PROJECTION_RANGE..=INTEGER_PROJECTION_RANGE),
                    })
                    .collect()
            })
            .collect();
        let reduced: Vec<Vec<u64>> = matrix
            .iter()
            .map(|r| r.iter().map(|&c| field.reduce_signed(c)).collect())
            .collect();
        if rank_mod_p(&reduced, &field) < wanted_rank {
            continue;
        }
        let components = matrix
            .iter()
            .map(|row| {
                Polynomial::from_terms(s, None, row.iter().zip(&basis).map(|(&c, e)| (c, e.clone())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(RegularMap {
            map: PolyMap::new(s, components)?,
            degree: d,
            seed,
            resamples: attempt,
        });
    }
    Err(Error::InvalidParameter("no full-rank projection found"))
}

/// Distinct primes `p_ij` (row `i` = component, column `j` = variable), increasing
/// down every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeAssignment {
    primes: Vec<Vec<u64>>,
}

impl PrimeAssignment {
    pub fn new(primes: Vec<Vec<u64>>) -> Result<Self, Error> {
        let s = primes.first().map_or(0, Vec::len);
        if s == 0 || primes.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidParameter("prime matrix must be rectangular and non-empty"));
        }
        let all: BTreeSet<u64> = primes.iter().flatten().copied().collect();
        if all.len() != primes.len() * s || !all.iter().all(|&q| crate::gf::is_prime(q)) {
            return Err(Error::InvalidParameter("exponents must be distinct primes"));
        }
        for j in 0..s {
            if primes.windows(2).any(|w| w[0][j] >= w[1][j]) {
                return Err(Error::InvalidParameter("columns must increase"));
            }
        }
        Ok(PrimeAssignment { primes })
    }

    /// The first `s*n` primes filled row by row.
    pub fn first_primes(s: usize, n: usize) -> Self {
        let ps = first_primes(s * n);
        let primes = ps.chunks(s).map(<[u64]>::to_vec).collect();
        PrimeAssignment { primes }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.primes[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.primes
    }

    /// Entries of variable `j` over all components.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.primes.iter().map(|r| r[j]).collect()
    }

    pub fn max_prime(&self) -> u64 {
        self.primes.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// The Laurent map with components `f_i = sum_j x_j^{p_ij} + x_j^{-p_ij}`.
pub fn prime_power_map(assignment: &PrimeAssignment) -> PolyMap {
    let s = assignment.rows()[0].len();
    let components = assignment
        .rows()
        .iter()
        .map(|row| {
            let terms = row.iter().enumerate().flat_map(|(j, &q)| {
                let mut pos = vec![0i32; s];
                pos[j] = q as i32;
                let mut neg = vec![0i32; s];
                neg[j] = -(q as i32);
                [(1, pos), (1, neg)]
            });
            Polynomial::from_terms(s, None, terms).expect("exponent vectors have length s")
        })
        .collect();
    PolyMap::new(s, components)
        .expect("components have s variables")
        .with_domain(Domain::Torus)
}

/// Explicit nondegenerate map of `(F^*)^s` into `F^n` from the first `s*n` primes,
/// with its order bound.
pub fn prime_power_embedding(s: usize, n: usize) -> Result<(PolyMap, PrimeAssignment, BigUint), Error> {
    if s == 0 || n == 0 {
        return Err(Error::InvalidParameter("s and n must be positive"));
    }
    let assignment = PrimeAssignment::first_primes(s, n);
    let bound = order_bound(s, assignment.max_prime());
    Ok((prime_power_map(&assignment), assignment, bound))
}

/// `ceil((4^s / s!) * (s * max_prime)^s)`, computed exactly.
pub fn order_bound(s: usize, max_prime: u64) -> BigUint {
    let s32 = s as u32;
    let numerator = BigUint::from(4u32).pow(s32) * (BigUint::from(s as u64) * max_prime).pow(s32);
    let factorial: BigUint = (1..=s as u64).map(BigUint::from).product();
    let (q, r) = numerator.div_rem(&factorial);
    if r.is_zero() {
        q
    } else {
        q + BigUint::one()
    }
}

/// Outcome of one regularity trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub points: Vec<Vec<u64>>,
    pub rank: usize,
    pub pass: bool,
    /// Trial seed, `None` for explicitly supplied points.
    pub seed: Option<u64>,
}

/// Rank of the images of `points` under `map` over `F_p`.
pub fn regularity_at(map: &PolyMap, points: &[Vec<u64>], p: u64) -> Result<RegularityWitness, Error> {
    let field = PrimeField::new(p)?;
    let eval = map.evaluator(&field)?;
    witness_for(&eval, points.to_vec(), &field, None)
}

fn witness_for(
    eval: &MapEvaluator,
    points: Vec<Vec<u64>>,
    field: &PrimeField,
    seed: Option<u64>,
) -> Result<RegularityWitness, Error> {
    let images = points
        .iter()
        .map(|x| eval.evaluate(x))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = rank_mod_p(&images, field);
    Ok(RegularityWitness {
        pass: rank == points.len(),
        points,
        rank,
        seed,
    })
}

/// Samples `trials` sets of `t` distinct domain points and checks that their images
/// are linearly independent. Overall pass means every witness passes.
pub fn test_regularity(
    map: &PolyMap,
    t: usize,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<Vec<RegularityWitness>, Error> {
    let field = PrimeField::new(p)?;
    let domain = map.domain_size(p);
    if domain < t as u64 {
        return Err(Error::DomainTooSmall {
            domain,
            needed: t as u64,
        });
    }
    let eval = map.evaluator(&field)?;
    par::map_range(0..trials, |trial| {
        let trial_seed = derive_seed(seed, trial as u64);
        let mut rng = seeded(trial_seed);
        let mut chosen = BTreeSet::new();
        let mut points = Vec::with_capacity(t);
        while points.len() < t {
            let idx = rng.random_range(0..domain);
            if chosen.insert(idx) {
                points.push(map.domain_point(p, idx));
            }
        }
        witness_for(&eval, points, &field, Some(trial_seed))
    })
    .into_iter()
    .collect()
}

/// Result of an exhaustive regularity sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveRegularity {
    pub subsets_checked: u64,
    /// First failing subset in lexicographic order.
    pub failure: Option<RegularityWitness>,
}

/// Checks every `t`-subset of the domain.
pub fn check_regularity_exhaustive(map: &PolyMap, t: usize, p: u64) -> Result<ExhaustiveRegularity, Error> {
    let field = PrimeField::new(p)?;
    let domain = map.domain_size(p);
    if domain < t as u64 {
        return Err(Error::DomainTooSmall {
            domain,
            needed: t as u64,
        });
    }
    let eval = map.evaluator(&field)?;
    let images = (0..domain)
        .map(|i| eval.evaluate(&map.domain_point(p, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut subset: Vec<usize> = (0..t).collect();
    let mut checked = 0u64;
    let n = domain as usize;
    loop {
        checked += 1;
        let rows: Vec<Vec<u64>> = subset.iter().map(|&i| images[i].clone()).collect();
        let rank = rank_mod_p(&rows, &field);
        if rank < t {
            return Ok(ExhaustiveRegularity {
                subsets_checked: checked,
                failure: Some(RegularityWitness {
                    points: subset.iter().map(|&i| map.domain_point(p, i as u64)).collect(),
                    rank,
                    pass: false,
                    seed: None,
                }),
            });
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(ExhaustiveRegularity {
        subsets_checked: checked,
        failure: None,
    })
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A system of `s` linear forms on `F_p^n` and the number of domain points whose image
/// it annihilates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberWitness {
    pub forms: Vec<Vec<u64>>,
    pub count: usize,
    pub seed: Option<u64>,
}

fn all_images(map: &PolyMap, field: &PrimeField) -> Result<Vec<Vec<u64>>, Error> {
    let eval = map.evaluator(field)?;
    let p = field.modulus();
    (0..map.domain_size(p))
        .map(|i| eval.evaluate(&map.domain_point(p, i)))
        .collect()
}

fn fiber_size(images: &[Vec<u64>], forms: &[Vec<u64>], field: &PrimeField) -> usize {
    images
        .iter()
        .filter(|y| {
            forms.iter().all(|a| {
                a.iter()
                    .zip(y.iter())
                    .fold(0, |acc, (&c, &v)| field.add(acc, field.mul(c, v)))
                    == 0
            })
        })
        .count()
}

/// For each trial draws a random rank-`s` system of `s` linear forms on `F_p^n` and
/// counts the domain points mapped into its kernel. Returns the largest count.
pub fn test_nondegeneracy(
    map: &PolyMap,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<(usize, Vec<FiberWitness>), Error> {
    let field = PrimeField::new(p)?;
    let s = map.s();
    let n = map.n();
    if n < s {
        return Err(Error::InvalidParameter("target dimension below domain dimension"));
    }
    let images = all_images(map, &field)?;
    let witnesses = par::map_range(0..trials, |trial| {
        let trial_seed = derive_seed(seed, trial as u64);
        let mut rng = seeded(trial_seed);
        let forms = loop {
            let forms: Vec<Vec<u64>> = (0..s)
                .map(|_| (0..n).map(|_| rng.random_range(0..p)).collect())
                .collect();
            if rank_mod_p(&forms, &field) == s {
                break forms;
            }
        };
        FiberWitness {
            count: fiber_size(&images, &forms, &field),
            forms,
            seed: Some(trial_seed),
        }
    });
    let max = witnesses.iter().map(|w| w.count).max().unwrap_or(0);
    Ok((max, witnesses))
}

/// Largest fiber over every codimension-`s` subspace, each enumerated once by its
/// reduced row echelon form. Returns the maximum and a system attaining it.
pub fn max_fiber_exhaustive(map: &PolyMap, p: u64) -> Result<(usize, FiberWitness), Error> {
    let field = PrimeField::new(p)?;
    let s = map.s();
    let n = map.n();
    if n < s {
        return Err(Error::InvalidParameter("target dimension below domain dimension"));
    }
    let images = all_images(map, &field)?;
    let mut best = FiberWitness {
        forms: Vec::new(),
        count: 0,
        seed: None,
    };
    let mut pivots: Vec<usize> = (0..s).collect();
    loop {
        // free positions: (row i, column c) with c > pivot_i and c not a pivot
        let free: Vec<(usize, usize)> = (0..s)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = (p as u128).pow(free.len() as u32);
        let mut counter = 0u128;
        while counter < total {
            let mut forms = vec![vec![0u64; n]; s];
            for (i, &pc) in pivots.iter().enumerate() {
                forms[i][pc] = 1;
            }
            let mut rest = counter;
            for &(i, c) in &free {
                forms[i][c] = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            let count = fiber_size(&images, &forms, &field);
            if count > best.count || best.forms.is_empty() {
                best = FiberWitness {
                    forms,
                    count,
                    seed: None,
                };
            }
            counter += 1;
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    Ok((best.count, best))
}

/// `order_bound` as an `f64`, for comparisons against real-valued envelopes.
pub fn order_bound_f64(s: usize, max_prime: u64) -> f64 {
    order_bound(s, max_prime).to_f64().unwrap_or(f64::INFINITY)
}
