//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::process::Command;
use std::time::{Duration, Instant};

use turan_forge_core::embeddings::{check_regularity_exhaustive, max_fiber_exhaustive, veronese_full};
use turan_forge_core::gridsearch::DEFAULT_BUDGET;
use turan_forge_core::{
    admissible_tuples, build_graph, build_inner_product, check_kst_bound, find_kst, girth, grid_dimension,
    max_codegree, order_bound, prime_power_embedding, theta_closed_form_k2, theta_poly, BipartiteGraph,
    ClaimedForbidden, ConstructionSpec, DimensionTuple, Family, InnerProductMode, PrimeField,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn graph(family: Family, p: u64) -> BipartiteGraph {
    build_graph(&ConstructionSpec::new(family, p)).unwrap().graph
}

// ---- oracles ----

fn quadruple_loop_c4(g: &BipartiteGraph) -> bool {
    let (l, r) = (g.left_size(), g.right_size());
    for a in 0..l {
        for b in a + 1..l {
            for c in 0..r {
                if !(g.has_edge(a, c) && g.has_edge(b, c)) {
                    continue;
                }
                for d in c + 1..r {
                    if g.has_edge(a, d) && g.has_edge(b, d) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn pair_codegree(g: &BipartiteGraph) -> usize {
    let mut best = 0;
    for a in 0..g.left_size() {
        for b in a + 1..g.left_size() {
            best = best.max((0..g.right_size()).filter(|&v| g.has_edge(a, v) && g.has_edge(b, v)).count());
        }
    }
    best
}

fn girth_by_edge_removal(g: &BipartiteGraph) -> Option<usize> {
    let adj = g.adjacency_lists();
    let l = g.left_size();
    let mut best: Option<usize> = None;
    for (u, v) in g.edges() {
        let (a, b) = (u, l + v);
        let mut dist = vec![usize::MAX; adj.len()];
        dist[a] = 0;
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if (x == a && y == b) || dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
        if dist[b] != usize::MAX {
            best = Some(best.map_or(dist[b] + 1, |c: usize| c.min(dist[b] + 1)));
        }
    }
    best
}

/// Dense bivariate product of the representative forms `c1 w1 + c2 w2`, reduced mod `p`.
fn theta_support_oracle(p: u64) -> BTreeSet<Vec<u32>> {
    let p = p as i64;
    let mut coeffs = vec![1i64]; // coeffs[i] = coefficient of w1^i w2^{deg - i}
    let mut forms: Vec<(i64, i64)> = (1..=(p - 1) / 2).map(|c2| (0, c2)).collect();
    for c1 in 1..=(p - 1) / 2 {
        for c2 in 0..p {
            forms.push((c1, c2));
        }
    }
    for (c1, c2) in forms {
        let mut next = vec![0i64; coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i + 1] = (next[i + 1] + a * c1) % p;
            next[i] = (next[i] + a * c2) % p;
        }
        coeffs = next;
    }
    let deg = coeffs.len() as u32 - 1;
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c.rem_euclid(p) != 0)
        .map(|(i, _)| vec![i as u32, deg - i as u32])
        .collect()
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn kst_oracle(g: &BipartiteGraph, s: usize, t: usize) -> bool {
    let mut degree = vec![0u128; g.right_size()];
    for (_, v) in g.edges() {
        degree[v] += 1;
    }
    let lhs: u128 = degree.iter().map(|&d| binom(d, s as u128)).sum();
    lhs <= (t as u128 - 1) * binom(g.left_size() as u128, s as u128)
}

// ---- criteria ----

fn c1_erdos_renyi() -> Outcome {
    let mut search_time = Duration::ZERO;
    for p in [3, 5, 7, 11, 13] {
        let g = graph(Family::ErdosRenyi, p);
        let start = Instant::now();
        let out = find_kst(&g, 2, 2, DEFAULT_BUDGET);
        search_time += start.elapsed();
        ensure(out.found.is_none() && out.exhaustive, || format!("p={p}: {out:?}"))?;
        ensure(!quadruple_loop_c4(&g), || format!("p={p}: oracle found a 2-by-2 grid"))?;
    }
    within(search_time, 5.0)?;
    Ok(format!("search {:.3} s", search_time.as_secs_f64()))
}

fn c2_theta_closed_form() -> Outcome {
    let start = Instant::now();
    for p in [3, 5, 7, 11] {
        let direct: BTreeSet<Vec<u32>> = theta_poly(p, 2).unwrap().support().into_iter().collect();
        let closed: BTreeSet<Vec<u32>> = theta_closed_form_k2(p).unwrap().support().into_iter().collect();
        ensure(direct == closed, || format!("p={p}: {direct:?} vs {closed:?}"))?;
        ensure(direct == theta_support_oracle(p), || format!("p={p}: oracle mismatch"))?;
    }
    let five: BTreeSet<Vec<u32>> = theta_poly(5, 2).unwrap().support().into_iter().collect();
    let expected: BTreeSet<Vec<u32>> = [vec![2, 10], vec![6, 6], vec![10, 2]].into();
    ensure(five == expected, || format!("p=5 support {five:?}"))?;
    within(start.elapsed(), 1.0)?;
    Ok("p=5 support {(2,10),(6,6),(10,2)}".into())
}

fn c3_grid_dimension() -> Outcome {
    let start = Instant::now();
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let m = (p - 1) / 2;
        // least max(d1, d2) over monomials w1^{m+2ml} w2^{m+2m(m-l)}
        let criterion = (0..=m)
            .map(|l| {
                let d = |i: u64| (2 * i).div_ceil(p - 1) + 1;
                d(m + 2 * m * l).max(d(m + 2 * m * (m - l)))
            })
            .min()
            .unwrap();
        let formula = 2 * (p - 1).div_ceil(4) + 2;
        let got = grid_dimension(p).map_err(|e| format!("p={p}: {e}"))?;
        ensure(got == formula && got == criterion, || {
            format!("p={p}: got {got}, formula {formula}, criterion {criterion}")
        })?;
    }
    ensure(grid_dimension(5) == Ok(4), || "grid_dimension(5) != 4".into())?;
    within(start.elapsed(), 1.0)?;
    Ok("odd p <= 31 agree, d(5) = 4".into())
}

fn c4_asymmetric_tuples() -> Outcome {
    let start = Instant::now();
    let tuples = admissible_tuples(&theta_poly(5, 2).unwrap(), 100);
    let m = 2u64;
    let expected: Vec<DimensionTuple> = (0..=m)
        .map(|l| DimensionTuple::new(vec![2 * l + 2, 2 * (m - l) + 2]))
        .collect();
    ensure(tuples == expected, || format!("{tuples:?}"))?;
    within(start.elapsed(), 1.0)?;
    Ok("{(2,6),(4,4),(6,2)}".into())
}

fn c5_wenger() -> Outcome {
    let mut elapsed = Duration::ZERO;
    let mut girths = Vec::new();
    for (t, p) in [(2usize, 3u64), (2, 5), (3, 3), (3, 5)] {
        let start = Instant::now();
        let g = graph(Family::Wenger { t }, p);
        let gi = girth(&g);
        elapsed += start.elapsed();
        let expected = p.pow(t as u32 + 1) as usize;
        ensure(g.edge_count() == expected, || format!("t={t} p={p}: {} edges", g.edge_count()))?;
        let oracle = girth_by_edge_removal(&g);
        ensure(gi == oracle, || format!("t={t} p={p}: girth {gi:?} vs oracle {oracle:?}"))?;
        ensure(gi.is_some_and(|x| x > 2 * t), || format!("t={t} p={p}: girth {gi:?}"))?;
        girths.push(gi.unwrap());
    }
    within(elapsed, 10.0)?;
    Ok(format!("girths {girths:?}"))
}

fn c6_norm_graph() -> Outcome {
    let mut elapsed = Duration::ZERO;
    for p in [5u64, 7] {
        let start = Instant::now();
        let g = graph(Family::NormGraph { s: 2 }, p);
        let codegree = max_codegree(&g, 2, 0, 0);
        elapsed += start.elapsed();
        ensure(codegree <= 2 && codegree == pair_codegree(&g), || format!("p={p}: codegree {codegree}"))?;
        // #{a + b i : a^2 - r b^2 = 1} in F_p[i] / (i^2 - r), r a non-residue
        let r = (2..p).find(|&r| (0..p).all(|x| x * x % p != r)).unwrap();
        let norm_one = (0..p)
            .flat_map(|a| (0..p).map(move |b| (a, b)))
            .filter(|&(a, b)| (a * a + (p - r) * (b * b % p)) % p == 1)
            .count();
        ensure(norm_one as u64 == p + 1, || format!("p={p}: oracle count {norm_one}"))?;
        ensure(g.left_degrees().iter().all(|&d| d == norm_one), || format!("p={p}: left degrees"))?;
        ensure(g.right_degrees().iter().all(|&d| d == norm_one), || format!("p={p}: right degrees"))?;
    }
    within(elapsed, 10.0)?;
    Ok("codegree <= 2, degrees p + 1".into())
}

fn c7_embeddings() -> Outcome {
    let start = Instant::now();
    let field = PrimeField::new(13).unwrap();
    let veronese = veronese_full(1, 3);
    for t in 1..=4 {
        let r = check_regularity_exhaustive(&veronese, t, 13).map_err(|e| e.to_string())?;
        ensure(r.failure.is_none(), || format!("veronese t={t}: {:?}", r.failure))?;
        // oracle: rank of rows (1, x, x^2, x^3) over every t-subset by direct elimination
        let mut subset: Vec<u64> = (0..t as u64).collect();
        loop {
            let mut rows: Vec<Vec<u64>> = subset
                .iter()
                .map(|&x| (0..4).map(|k| field.pow(x, k)).collect())
                .collect();
            let mut rank = 0;
            for col in 0..4 {
                if let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) {
                    rows.swap(rank, piv);
                    let inv = field.inv(rows[rank][col]).unwrap();
                    for i in 0..rows.len() {
                        if i != rank && rows[i][col] != 0 {
                            let f = field.mul(rows[i][col], inv);
                            for c in 0..4 {
                                rows[i][c] = field.sub(rows[i][c], field.mul(f, rows[rank][c]));
                            }
                        }
                    }
                    rank += 1;
                }
            }
            ensure(rank == t, || format!("oracle rank {rank} for {subset:?}"))?;
            let mut i = t;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                if subset[i] < 13 - (t - i) as u64 {
                    subset[i] += 1;
                    for j in i + 1..t {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break false;
                }
            };
            if done {
                break;
            }
        }
    }

    let p = 101;
    let field = PrimeField::new(p).unwrap();
    let (map, assignment, bound) = prime_power_embedding(1, 2).unwrap();
    ensure(assignment.rows() == [vec![2], vec![3]], || format!("{assignment:?}"))?;
    ensure(bound == order_bound(1, 3) && bound == 12u32.into(), || format!("bound {bound}"))?;
    let (max, _) = max_fiber_exhaustive(&map, p).map_err(|e| e.to_string())?;
    // oracle: every nonzero (a, b), roots of a (x^2 + x^-2) + b (x^3 + x^-3) on F_p^*
    let mut oracle = 0;
    let vals: Vec<(u64, u64)> = (1..p)
        .map(|x| {
            let xi = field.inv(x).unwrap();
            (
                field.add(field.pow(x, 2), field.pow(xi, 2)),
                field.add(field.pow(x, 3), field.pow(xi, 3)),
            )
        })
        .collect();
    for a in 0..p {
        for b in 0..p {
            if a == 0 && b == 0 {
                continue;
            }
            let c = vals
                .iter()
                .filter(|&&(u, v)| field.add(field.mul(a, u), field.mul(b, v)) == 0)
                .count();
            oracle = oracle.max(c);
        }
    }
    ensure(max == oracle && max <= 12, || format!("max fiber {max}, oracle {oracle}"))?;
    within(start.elapsed(), 30.0)?;
    Ok(format!("veronese regular for t <= 4, max fiber {max} <= 12"))
}

fn c8_inner_product() -> Outcome {
    let start = Instant::now();
    let r = build_inner_product(2, 149, InnerProductMode::Generic, 7).map_err(|e| e.to_string())?;
    ensure(r.claimed_forbidden == ClaimedForbidden::Grid { s: 2, t: 144 }, || {
        format!("claimed {:?}", r.claimed_forbidden)
    })?;
    let codegree = max_codegree(&r.graph, 2, 10_000, 7);
    ensure(codegree <= 144, || format!("sampled codegree {codegree}"))?;
    within(start.elapsed(), 60.0)?;
    Ok(format!("sampled max codegree {codegree} <= 144, {} edges", r.graph.edge_count()))
}

fn c9_kst_coherence() -> Outcome {
    let mut checked = 0;
    let mut cases: Vec<(BipartiteGraph, usize, usize)> = Vec::new();
    for p in [3, 5, 7, 11, 13] {
        cases.push((graph(Family::ErdosRenyi, p), 2, 2));
    }
    for (t, p) in [(2, 3), (2, 5), (3, 3), (3, 5)] {
        // girth above four: no 2-by-2 grid
        cases.push((graph(Family::Wenger { t }, p), 2, 2));
    }
    for p in [5, 7] {
        cases.push((graph(Family::NormGraph { s: 2 }, p), 2, 3));
    }
    let inner = build_inner_product(2, 149, InnerProductMode::Generic, 7).unwrap();
    cases.push((inner.graph, 2, 144));
    for (g, s, t) in &cases {
        let b = check_kst_bound(g, *s, *t);
        ensure(b.holds && kst_oracle(g, *s, *t), || format!("bound fails on a {}-vertex graph", g.left_size()))?;
        checked += 1;
    }
    let k33 = BipartiteGraph::complete(3, 3);
    let b = check_kst_bound(&k33, 2, 2);
    ensure(!b.holds && b.lhs == 9u32.into() && b.rhs == 3u32.into(), || format!("{b:?}"))?;
    let w = find_kst(&k33, 2, 2, DEFAULT_BUDGET).found.ok_or("no witness on K_{3,3}")?;
    ensure(w.verify(&k33), || format!("bad witness {w:?}"))?;
    Ok(format!("{checked} graphs hold; K(3,3) fails with witness {:?} x {:?}", w.left_set, w.right_set))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_turan-forge");
    let runs: [&[&str]; 3] = [
        &["report", "--family", "norm:2", "--p", "7", "--sample", "500", "--seed", "42"],
        &["report", "--family", "inner:2:generic:5", "--p", "11", "--sample", "300", "--seed", "3"],
        &["report", "--family", "wenger:3", "--p", "5"],
    ];
    for args in runs {
        let outputs: Vec<Vec<u8>> = ["1", "4", "4"]
            .iter()
            .map(|threads| {
                Command::new(bin)
                    .args(args)
                    .env("TURAN_FORGE_THREADS", threads)
                    .output()
                    .expect("binary runs")
            })
            .map(|o| {
                assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
                o.stdout
            })
            .collect();
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{args:?} differs between runs"))?;
        ensure(!outputs[0].is_empty(), || "empty report".into())?;
    }
    Ok("reports byte-identical across runs and thread counts".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "ER freeness", c1_erdos_renyi),
        (2, "theta closed form", c2_theta_closed_form),
        (3, "grid dimension formula", c3_grid_dimension),
        (4, "asymmetric tuples", c4_asymmetric_tuples),
        (5, "Wenger edges and girth", c5_wenger),
        (6, "norm graph codegree and degrees", c6_norm_graph),
        (7, "embeddings", c7_embeddings),
        (8, "inner-product construction", c8_inner_product),
        (9, "counting-bound coherence", c9_kst_coherence),
        (10, "report determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} ({secs:.2} s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} ({secs:.2} s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
