//! Bipartite graphs of algebraic varieties over `F_p`.
//!
//! Both vertex classes are `F_p^m` ordered lexicographically (first coordinate most
//! significant); `(x, y)` is an edge when every defining polynomial vanishes at
//! `(x_1, .., x_m, y_1, .., y_m)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::embeddings::{monomials_up_to, prime_power_embedding, veronese_regular, PolyMap};
use crate::gf::{ExtField, PrimeField};
use crate::graph::{words_for, BipartiteGraph, WORD_BITS};
use crate::par;
use crate::poly::Polynomial;
use crate::rng::{derive_seed, seeded};
use crate::Error;

/// Upper limit on vertices per side.
pub const MAX_SIDE: u64 = 1 << 16;

/// Constant in the relative edge-count window `c / sqrt(p)`.
pub const LANG_WEIL_CONSTANT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProductMode {
    /// Dense random polynomials of degree `s^2 (s+1)`.
    Generic,
    /// Veronese projection on the left, prime-power Laurent map on the right.
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `x1 y1 + x2 y2 = 1`.
    ErdosRenyi,
    /// `sum (x_i - y_i)^2 = alpha` in three dimensions.
    BrownSphere { alpha: u64 },
    /// `N_s(x + y) = 1`.
    NormGraph { s: usize },
    /// `N_{s-1}(x' + y') = x1 y1`.
    ProjNormGraph { s: usize },
    /// `y_j = x_j + x_{j+1} y_t` for `j < t`.
    Wenger { t: usize },
    /// `<f1(x), f2(y)> = 0`.
    InnerProduct { s: usize, mode: InnerProductMode, seed: u64 },
    /// Arbitrary equations in `2 * side_dim` variables.
    Custom { equations: Vec<Polynomial>, side_dim: usize },
}

impl Family {
    pub fn side_dim(&self) -> usize {
        match self {
            Family::ErdosRenyi => 2,
            Family::BrownSphere { .. } => 3,
            Family::NormGraph { s } | Family::ProjNormGraph { s } | Family::InnerProduct { s, .. } => *s,
            Family::Wenger { t } => *t,
            Family::Custom { side_dim, .. } => *side_dim,
        }
    }

    /// Short tag used in edge-list headers and reports, e.g. `norm:2`.
    pub fn tag(&self) -> String {
        match self {
            Family::ErdosRenyi => "er".into(),
            Family::BrownSphere { alpha } => format!("brown:{alpha}"),
            Family::NormGraph { s } => format!("norm:{s}"),
            Family::ProjNormGraph { s } => format!("projnorm:{s}"),
            Family::Wenger { t } => format!("wenger:{t}"),
            Family::InnerProduct { s, mode, seed } => {
                let m = match mode {
                    InnerProductMode::Generic => "generic",
                    InnerProductMode::Explicit => "explicit",
                };
                format!("inner:{s}:{m}:{seed}")
            }
            Family::Custom { side_dim, .. } => format!("custom:{side_dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub family: Family,
    pub p: u64,
}

impl ConstructionSpec {
    pub fn new(family: Family, p: u64) -> Self {
        ConstructionSpec { family, p }
    }
}

/// The structure a construction is claimed to avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimedForbidden {
    /// No `s`-by-`t` and no `t`-by-`s` grid.
    Grid { s: usize, t: u64 },
    /// No cycle of this length through the forbidden configuration.
    Cycle { length: usize },
}

/// Extra data recorded for the inner-product construction.
#[derive(Debug, Clone)]
pub struct InnerProductData {
    pub f1: PolyMap,
    pub f2: PolyMap,
    /// Degree of the component polynomials (the Veronese degree in explicit mode).
    pub degree: u32,
    /// `s^{4s}`, the headline bound that the recorded `t` is at most.
    pub headline_t: BigUint,
    /// Projection redraws for the explicit left map.
    pub resamples: u32,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub graph: BipartiteGraph,
    pub spec: ConstructionSpec,
    /// Defining polynomials in `x_1..x_m, y_1..y_m`. Left empty for inner-product
    /// graphs whose expanded form would exceed [`MAX_EXPANDED_TERMS`].
    pub defining_polys: Vec<Polynomial>,
    pub claimed_forbidden: ClaimedForbidden,
    pub inner_product: Option<InnerProductData>,
}

/// Cap on the expanded inner-product polynomial size.
pub const MAX_EXPANDED_TERMS: usize = 1_000_000;

fn coords(index: u64, p: u64, dim: usize) -> Vec<u64> {
    let mut x = vec![0; dim];
    let mut i = index;
    for c in x.iter_mut().rev() {
        *c = i % p;
        i /= p;
    }
    x
}

fn side_size(p: u64, dim: usize) -> Result<usize, Error> {
    match p.checked_pow(dim as u32) {
        Some(n) if n <= MAX_SIDE => Ok(n as usize),
        _ => Err(Error::InvalidParameter("graph too large")),
    }
}

/// Builds the graph whose rows are given by `adjacent(left_label, right_label)`.
fn graph_from_predicate<F>(p: u64, dim: usize, adjacent: F) -> Result<BipartiteGraph, Error>
where
    F: Fn(usize, usize) -> bool + Sync + Send,
{
    let n = side_size(p, dim)?;
    let words = words_for(n);
    let rows = par::map_range(0..n, |u| {
        let mut row = vec![0u64; words];
        for v in 0..n {
            if adjacent(u, v) {
                row[v / WORD_BITS] |= 1 << (v % WORD_BITS);
            }
        }
        row
    });
    let labels: Vec<Vec<u64>> = (0..n as u64).map(|i| coords(i, p, dim)).collect();
    Ok(BipartiteGraph::from_rows(n, n, rows).with_labels(labels.clone(), labels))
}

fn var(nvars: usize, i: usize) -> Polynomial {
    Polynomial::var(nvars, None, i)
}

/// The norm form `N_m(z)` of `F_{p^m} / F_p` as a polynomial in the given linear
/// images of `z_1..z_m`: the determinant of multiplication by `z` in the basis
/// `1, a, .., a^{m-1}`. Coefficients are reduced mod `p`.
pub fn norm_form(field: &ExtField, z: &[Polynomial]) -> Result<Polynomial, Error> {
    let m = field.degree();
    if z.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: z.len(),
        });
    }
    if m > 6 {
        return Err(Error::InvalidParameter("norm form limited to degree 6"));
    }
    let p = field.base().modulus();
    let nvars = z[0].nvars();
    let z: Vec<Polynomial> = z.iter().map(|f| f.reduce_mod(p)).collect();
    // the adjoined root; for m = 1 the defining polynomial is x and the root is 0
    let mut root = vec![0; m];
    if m > 1 {
        root[1] = 1;
    }
    let a = field.element(&root)?;
    let powers: Vec<Vec<u64>> = (0..2 * m - 1)
        .map(|k| field.pow(&a, k as u64).coeffs().to_vec())
        .collect();
    // entry[r][j] = coefficient of a^r in z * a^j
    let mut entry = vec![vec![Polynomial::zero(nvars, Some(p)); m]; m];
    for (r, row) in entry.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for (i, zi) in z.iter().enumerate() {
                let c = powers[i + j][r];
                if c != 0 {
                    *cell = &*cell + &zi.scale(c);
                }
            }
        }
    }
    // Leibniz expansion
    let mut det = Polynomial::zero(nvars, Some(p));
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        let mut term = Polynomial::constant(nvars, Some(p), 1);
        for (j, &r) in perm.iter().enumerate() {
            term = &term * &entry[r][j];
        }
        det = if permutation_is_odd(&perm) {
            &det - &term
        } else {
            &det + &term
        };
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(det)
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Builds the bipartite graph of `spec`.
pub fn build_graph(spec: &ConstructionSpec) -> Result<ConstructionResult, Error> {
    let field = PrimeField::new(spec.p)?;
    let p = spec.p;
    let m = spec.family.side_dim();
    let nv = 2 * m;
    let (graph, defining_polys, claimed) = match &spec.family {
        Family::ErdosRenyi => {
            let f = &(&(&var(4, 0) * &var(4, 2)) + &(&var(4, 1) * &var(4, 3)))
                - &Polynomial::constant(4, None, 1);
            let g = graph_from_predicate(p, 2, |u, v| {
                let (x1, x2) = (u as u64 / p, u as u64 % p);
                let (y1, y2) = (v as u64 / p, v as u64 % p);
                (x1 * y1 + x2 * y2) % p == 1 % p
            })?;
            (g, vec![f], ClaimedForbidden::Grid { s: 2, t: 2 })
        }
        Family::BrownSphere { alpha } => {
            let alpha = alpha % p;
            if alpha == 0 {
                return Err(Error::InvalidParameter("sphere radius must be nonzero mod p"));
            }
            let mut f = Polynomial::constant(6, None, -(alpha as i64));
            for i in 0..3 {
                let d = &var(6, i) - &var(6, 3 + i);
                f = &f + &d.pow(2);
            }
            let g = graph_from_predicate(p, 3, |u, v| {
                let x = coords(u as u64, p, 3);
                let y = coords(v as u64, p, 3);
                let s: u64 = x
                    .iter()
                    .zip(&y)
                    .map(|(&a, &b)| {
                        let d = field.sub(a, b);
                        d * d
                    })
                    .sum();
                s % p == alpha
            })?;
            (g, vec![f], ClaimedForbidden::Grid { s: 3, t: 3 })
        }
        Family::NormGraph { s } => {
            let s = *s;
            if s == 0 {
                return Err(Error::InvalidParameter("norm graph needs s >= 1"));
            }
            side_size(p, s)?;
            let ext = ExtField::new(p, s)?;
            let table = ext.norm_table();
            let z: Vec<Polynomial> = (0..s).map(|i| &var(nv, i) + &var(nv, s + i)).collect();
            let f = &norm_form(&ext, &z)? - &Polynomial::constant(nv, Some(p), 1);
            let g = graph_from_predicate(p, s, |u, v| {
                table[sum_index(u as u64, v as u64, p, s) as usize] == 1
            })?;
            let t = factorial(s)
                .and_then(|f| f.checked_add(1))
                .ok_or(Error::InvalidParameter("s! overflows"))?;
            (g, vec![f], ClaimedForbidden::Grid { s, t })
        }
        Family::ProjNormGraph { s } => {
            let s = *s;
            if s < 2 {
                return Err(Error::InvalidParameter("projective norm graph needs s >= 2"));
            }
            side_size(p, s)?;
            let ext = ExtField::new(p, s - 1)?;
            let table = ext.norm_table();
            let z: Vec<Polynomial> = (1..s).map(|i| &var(nv, i) + &var(nv, s + i)).collect();
            let f = &norm_form(&ext, &z)? - &(&var(nv, 0) * &var(nv, s)).reduce_mod(p);
            let tail = p.pow(s as u32 - 1);
            let g = graph_from_predicate(p, s, |u, v| {
                let (x1, xr) = (u as u64 / tail, u as u64 % tail);
                let (y1, yr) = (v as u64 / tail, v as u64 % tail);
                table[sum_index(xr, yr, p, s - 1) as usize] == x1 * y1 % p
            })?;
            let t = factorial(s - 1)
                .and_then(|f| f.checked_add(1))
                .ok_or(Error::InvalidParameter("(s-1)! overflows"))?;
            (g, vec![f], ClaimedForbidden::Grid { s, t })
        }
        Family::Wenger { t } => {
            let t = *t;
            if t < 2 {
                return Err(Error::InvalidParameter("Wenger graph needs t >= 2"));
            }
            let n = side_size(p, t)?;
            // y_j - x_j - x_{j+1} y_t, variables x_1..x_t, y_1..y_t
            let polys = (0..t - 1)
                .map(|j| &(&var(nv, t + j) - &var(nv, j)) - &(&var(nv, j + 1) * &var(nv, 2 * t - 1)))
                .collect();
            let words = words_for(n);
            let rows = par::map_range(0..n, |u| {
                let x = coords(u as u64, p, t);
                let mut row = vec![0u64; words];
                for yt in 0..p {
                    let v = (0..t - 1).fold(0u64, |acc, j| {
                        acc * p + field.add(x[j], field.mul(x[j + 1], yt))
                    }) * p
                        + yt;
                    row[v as usize / WORD_BITS] |= 1 << (v as usize % WORD_BITS);
                }
                row
            });
            let labels: Vec<Vec<u64>> = (0..n as u64).map(|i| coords(i, p, t)).collect();
            let g = BipartiteGraph::from_rows(n, n, rows).with_labels(labels.clone(), labels);
            (g, polys, ClaimedForbidden::Cycle { length: 2 * t })
        }
        Family::InnerProduct { s, mode, seed } => {
            return build_inner_product(*s, p, *mode, *seed);
        }
        Family::Custom { equations, side_dim } => {
            if equations.is_empty() {
                return Err(Error::InvalidParameter("custom family needs at least one equation"));
            }
            if let Some(bad) = equations.iter().find(|f| f.nvars() != 2 * side_dim) {
                return Err(Error::DimensionMismatch {
                    expected: 2 * side_dim,
                    found: bad.nvars(),
                });
            }
            let evals = equations
                .iter()
                .map(|f| f.compile(&field))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = *side_dim;
            let g = graph_from_predicate(p, dim, |u, v| {
                let mut point = coords(u as u64, p, dim);
                point.extend(coords(v as u64, p, dim));
                evals.iter().all(|e| e.evaluate(&point) == Ok(0))
            })?;
            (g, equations.clone(), ClaimedForbidden::Grid { s: 1, t: 1 })
        }
    };
    Ok(ConstructionResult {
        graph,
        spec: spec.clone(),
        defining_polys,
        claimed_forbidden: claimed,
        inner_product: None,
    })
}

/// Lexicographic index of `x + y` where `x`, `y` are given by their indices.
fn sum_index(x: u64, y: u64, p: u64, dim: usize) -> u64 {
    let (mut x, mut y) = (x, y);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..dim {
        out += ((x % p + y % p) % p) * place;
        place *= p;
        x /= p;
        y /= p;
    }
    out
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Shifts an `s`-variable polynomial into `2s` variables, occupying block `offset`.
fn embed_vars(f: &Polynomial, total: usize, offset: usize) -> Polynomial {
    Polynomial::from_terms(
        total,
        f.modulus(),
        f.terms().map(|(m, c)| {
            let mut e = vec![0; total];
            e[offset..offset + m.nvars()].copy_from_slice(m.exponents());
            (c.clone(), e)
        }),
    )
    .expect("exponent vectors sized to total")
}

fn random_dense_map(s: usize, n: usize, d: u32, p: u64, seed: u64) -> PolyMap {
    let basis = monomials_up_to(s, d);
    let mut rng = seeded(seed);
    let components = (0..n)
        .map(|_| {
            Polynomial::from_terms(
                s,
                None,
                basis.iter().map(|e| (rng.random_range(0..p), e.clone())),
            )
            .expect("basis exponents have s entries")
        })
        .collect();
    PolyMap::new(s, components).expect("components have s variables")
}

/// The hypersurface `<f1(x), f2(y)> = 0` for maps `f1, f2 : F_p^s -> F_p^{s(s+1)}`.
///
/// Generic mode draws both maps as dense polynomials of degree `s^2 (s+1)` with
/// uniform coefficients in `[0, p)`, recording `t = (s^2 (s+1))^s`. Explicit mode uses
/// an `s`-regular Veronese projection on the left and the prime-power Laurent map on
/// the right, recording the Laurent map's order bound as `t`; right vertices with a
/// zero coordinate are isolated.
pub fn build_inner_product(
    s: usize,
    p: u64,
    mode: InnerProductMode,
    seed: u64,
) -> Result<ConstructionResult, Error> {
    if s < 2 {
        return Err(Error::InvalidParameter("inner-product construction needs s >= 2"));
    }
    let field = PrimeField::new(p)?;
    let n = s * (s + 1);
    let (f1, f2, degree, t, resamples) = match mode {
        InnerProductMode::Generic => {
            let d = (s * s * (s + 1)) as u32;
            let f1 = random_dense_map(s, n, d, p, derive_seed(seed, 1));
            let f2 = random_dense_map(s, n, d, p, derive_seed(seed, 2));
            let t = (d as u64)
                .checked_pow(s as u32)
                .ok_or(Error::InvalidParameter("t overflows"))?;
            (f1, f2, d, t, 0)
        }
        InnerProductMode::Explicit => {
            let (f2, assignment, bound) = prime_power_embedding(s, n)?;
            if assignment.max_prime() >= p {
                return Err(Error::ExponentTooLarge {
                    exponent: assignment.max_prime(),
                    p,
                });
            }
            let regular = veronese_regular(s, s, (s - 1) as u32, seed, Some(p))?;
            let t = bound.to_u64().ok_or(Error::InvalidParameter("order bound overflows"))?;
            (regular.map, f2, regular.degree, t, regular.resamples)
        }
    };
    let side = side_size(p, s)?;
    let e1 = f1.evaluator(&field)?;
    let e2 = f2.evaluator(&field)?;
    let left: Vec<Vec<u64>> = (0..side as u64)
        .map(|i| e1.evaluate(&coords(i, p, s)))
        .collect::<Result<_, _>>()?;
    let right: Vec<Option<Vec<u64>>> = (0..side as u64)
        .map(|i| e2.evaluate(&coords(i, p, s)).ok())
        .collect();
    let words = words_for(side);
    let rows = par::map_range(0..side, |u| {
        let a = &left[u];
        let mut row = vec![0u64; words];
        for (v, b) in right.iter().enumerate() {
            if let Some(b) = b {
                let dot = a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + x * y) % p);
                if dot == 0 {
                    row[v / WORD_BITS] |= 1 << (v % WORD_BITS);
                }
            }
        }
        row
    });
    let labels: Vec<Vec<u64>> = (0..side as u64).map(|i| coords(i, p, s)).collect();
    let graph = BipartiteGraph::from_rows(side, side, rows).with_labels(labels.clone(), labels);

    let expanded_terms: usize = f1
        .components()
        .iter()
        .zip(f2.components())
        .map(|(a, b)| a.num_terms() * b.num_terms())
        .sum();
    let defining_polys = if expanded_terms <= MAX_EXPANDED_TERMS {
        let mut f = Polynomial::zero(2 * s, None);
        for (a, b) in f1.components().iter().zip(f2.components()) {
            f = &f + &(&embed_vars(a, 2 * s, 0) * &embed_vars(b, 2 * s, s));
        }
        vec![f]
    } else {
        Vec::new()
    };
    Ok(ConstructionResult {
        graph,
        spec: ConstructionSpec::new(Family::InnerProduct { s, mode, seed }, p),
        defining_polys,
        claimed_forbidden: ClaimedForbidden::Grid { s, t },
        inner_product: Some(InnerProductData {
            f1,
            f2,
            degree,
            headline_t: BigUint::from(s as u64).pow(4 * s as u32),
            resamples,
            seed,
        }),
    })
}

/// Expected edge count from the dimension of the variety.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeExpectation {
    pub expected: BigUint,
    /// `true` when the count is determined exactly.
    pub exact: bool,
    /// Relative half-width `c / sqrt(p)` of the soft window; zero when exact.
    pub relative_window: f64,
}

impl EdgeExpectation {
    /// Whether `edges` lies within `expected * (1 +- relative_window)`.
    pub fn contains(&self, edges: u64) -> bool {
        let e = self.expected.to_f64().unwrap_or(f64::INFINITY);
        if self.exact {
            return BigUint::from(edges) == self.expected;
        }
        let lo = e * (1.0 - self.relative_window);
        let hi = e * (1.0 + self.relative_window);
        (edges as f64) >= lo && (edges as f64) <= hi
    }

    /// `edges / expected`.
    pub fn ratio(&self, edges: u64) -> f64 {
        edges as f64 / self.expected.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `p^{2m - 1}` with window `4 / sqrt(p)` for hypersurface families, exactly
/// `p^{t+1}` for Wenger graphs.
pub fn expected_edge_count(spec: &ConstructionSpec) -> Result<EdgeExpectation, Error> {
    let p = BigUint::from(spec.p);
    match &spec.family {
        Family::Custom { .. } => Err(Error::NoExpectation),
        Family::Wenger { t } => Ok(EdgeExpectation {
            expected: p.pow(*t as u32 + 1),
            exact: true,
            relative_window: 0.0,
        }),
        family => Ok(EdgeExpectation {
            expected: p.pow(2 * family.side_dim() as u32 - 1),
            exact: false,
            relative_window: LANG_WEIL_CONSTANT / libm::sqrt(spec.p as f64),
        }),
    }
}

/// The coordinate vector of vertex `index` in `F_p^dim`.
pub fn vertex_label(index: u64, p: u64, dim: usize) -> Vec<u64> {
    coords(index, p, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(result: &ConstructionResult) -> usize {
        let p = result.spec.p;
        let field = PrimeField::new(p).unwrap();
        let m = result.spec.family.side_dim();
        let n = p.pow(m as u32);
        let mut count = 0;
        for u in 0..n {
            for v in 0..n {
                let mut pt = coords(u, p, m);
                pt.extend(coords(v, p, m));
                if result
                    .defining_polys
                    .iter()
                    .all(|f| f.evaluate(&pt, &field).unwrap() == 0)
                {
                    count += 1;
                    assert!(result.graph.has_edge(u as usize, v as usize));
                } else {
                    assert!(!result.graph.has_edge(u as usize, v as usize));
                }
            }
        }
        count
    }

    #[test]
    fn erdos_renyi_matches_double_loop() {
        let r = build_graph(&ConstructionSpec::new(Family::ErdosRenyi, 3)).unwrap();
        assert_eq!(r.graph.left_size(), 9);
        // independent oracle written out directly
        let mut count = 0;
        for x1 in 0..3u64 {
            for x2 in 0..3 {
                for y1 in 0..3 {
                    for y2 in 0..3 {
                        if (x1 * y1 + x2 * y2) % 3 == 1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(r.graph.edge_count(), count);
        assert_eq!(brute_count(&r), count);
        assert_eq!(r.claimed_forbidden, ClaimedForbidden::Grid { s: 2, t: 2 });
    }

    #[test]
    fn fast_paths_agree_with_defining_polynomials() {
        let specs = [
            (Family::ErdosRenyi, 5),
            (Family::BrownSphere { alpha: 1 }, 3),
            (Family::BrownSphere { alpha: 2 }, 5),
            (Family::NormGraph { s: 2 }, 3),
            (Family::NormGraph { s: 2 }, 5),
            (Family::NormGraph { s: 3 }, 3),
            (Family::ProjNormGraph { s: 2 }, 5),
            (Family::ProjNormGraph { s: 3 }, 3),
            (Family::Wenger { t: 2 }, 3),
            (Family::Wenger { t: 3 }, 3),
        ];
        for (family, p) in specs {
            let r = build_graph(&ConstructionSpec::new(family.clone(), p)).unwrap();
            assert_eq!(brute_count(&r), r.graph.edge_count(), "{family:?} p={p}");
        }
    }

    #[test]
    fn norm_graph_degrees() {
        let r = build_graph(&ConstructionSpec::new(Family::NormGraph { s: 2 }, 3)).unwrap();
        assert!(r.graph.left_degrees().iter().all(|&d| d == 4));
        assert_eq!(r.graph.edge_count(), 36);
        assert_eq!(r.claimed_forbidden, ClaimedForbidden::Grid { s: 2, t: 3 });
    }

    #[test]
    fn norm_form_degree() {
        let ext = ExtField::new(5, 3).unwrap();
        let z: Vec<Polynomial> = (0..3).map(|i| var(3, i)).collect();
        let n = norm_form(&ext, &z).unwrap();
        assert!(n.terms().all(|(m, _)| m.degree() == 3));
        let field = PrimeField::new(5).unwrap();
        for a in ext.elements() {
            assert_eq!(n.evaluate(a.coeffs(), &field).unwrap(), ext.norm(&a));
        }
    }

    #[test]
    fn wenger_counts() {
        let r = build_graph(&ConstructionSpec::new(Family::Wenger { t: 3 }, 3)).unwrap();
        assert_eq!(r.graph.edge_count(), 81);
        assert!(r.graph.left_degrees().iter().all(|&d| d == 3));
        assert_eq!(r.claimed_forbidden, ClaimedForbidden::Cycle { length: 6 });
        assert_eq!(r.defining_polys.len(), 2);
    }

    #[test]
    fn brown_sphere_is_symmetric() {
        for p in [3, 5, 7] {
            let r = build_graph(&ConstructionSpec::new(Family::BrownSphere { alpha: 1 }, p)).unwrap();
            assert_eq!(r.graph.transpose().edges().collect::<Vec<_>>(), r.graph.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(build_graph(&ConstructionSpec::new(Family::BrownSphere { alpha: 5 }, 5)).is_err());
        assert!(build_graph(&ConstructionSpec::new(Family::Wenger { t: 1 }, 5)).is_err());
        assert!(build_graph(&ConstructionSpec::new(Family::ErdosRenyi, 4)).is_err());
        assert!(build_graph(&ConstructionSpec::new(Family::ProjNormGraph { s: 1 }, 5)).is_err());
        let bad = Family::Custom {
            equations: vec![var(3, 0)],
            side_dim: 2,
        };
        assert!(build_graph(&ConstructionSpec::new(bad, 5)).is_err());
    }

    #[test]
    fn custom_family_matches_builtin() {
        let er = build_graph(&ConstructionSpec::new(Family::ErdosRenyi, 5)).unwrap();
        let custom = Family::Custom {
            equations: er.defining_polys.clone(),
            side_dim: 2,
        };
        let c = build_graph(&ConstructionSpec::new(custom, 5)).unwrap();
        assert_eq!(c.graph.edges().collect::<Vec<_>>(), er.graph.edges().collect::<Vec<_>>());
    }

    #[test]
    fn expectations() {
        let e = expected_edge_count(&ConstructionSpec::new(Family::ErdosRenyi, 5)).unwrap();
        assert_eq!(e.expected, BigUint::from(125u32));
        let e = expected_edge_count(&ConstructionSpec::new(Family::Wenger { t: 3 }, 3)).unwrap();
        assert_eq!(e.expected, BigUint::from(81u32));
        assert!(e.exact && e.contains(81) && !e.contains(80));
        let spec = ConstructionSpec::new(Family::BrownSphere { alpha: 1 }, 7);
        let e = expected_edge_count(&spec).unwrap();
        assert_eq!(e.expected, BigUint::from(16807u32));
        let r = build_graph(&spec).unwrap();
        // oracle: all 7^6 pairs
        let mut count = 0u64;
        for u in 0..343u64 {
            let x = coords(u, 7, 3);
            for v in 0..343u64 {
                let y = coords(v, 7, 3);
                let s: i64 = (0..3).map(|i| (x[i] as i64 - y[i] as i64).pow(2)).sum();
                if s.rem_euclid(7) == 1 {
                    count += 1;
                }
            }
        }
        assert_eq!(r.graph.edge_count() as u64, count);
        assert!(e.contains(count));
        let custom = Family::Custom {
            equations: vec![var(4, 0)],
            side_dim: 2,
        };
        assert_eq!(
            expected_edge_count(&ConstructionSpec::new(custom, 5)),
            Err(Error::NoExpectation)
        );
    }

    #[test]
    fn inner_product_generic_small() {
        let r = build_inner_product(2, 7, InnerProductMode::Generic, 1).unwrap();
        assert_eq!(r.graph.left_size(), 49);
        assert_eq!(r.claimed_forbidden, ClaimedForbidden::Grid { s: 2, t: 144 });
        let data = r.inner_product.as_ref().unwrap();
        assert_eq!(data.degree, 12);
        assert_eq!(data.headline_t, BigUint::from(256u32));
        assert_eq!(data.f1.n(), 6);
        assert_eq!(brute_count(&r), r.graph.edge_count());
        let again = build_inner_product(2, 7, InnerProductMode::Generic, 1).unwrap();
        assert_eq!(again.graph, r.graph);
    }

    #[test]
    fn inner_product_explicit() {
        assert_eq!(
            build_inner_product(2, 5, InnerProductMode::Explicit, 1).unwrap_err(),
            Error::ExponentTooLarge { exponent: 37, p: 5 }
        );
        let r = build_inner_product(2, 41, InnerProductMode::Explicit, 3).unwrap();
        // right vertices with a zero coordinate are isolated
        let deg = r.graph.right_degrees();
        for (v, label) in r.graph.right_labels().iter().enumerate() {
            if label.contains(&0) {
                assert_eq!(deg[v], 0);
            }
        }
        match r.claimed_forbidden {
            ClaimedForbidden::Grid { s, t } => {
                assert_eq!(s, 2);
                assert_eq!(t, 8 * 74 * 74);
            }
            _ => panic!("expected a grid claim"),
        }
    }
}
