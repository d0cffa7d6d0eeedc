//! Flat-file formats: polynomial term lists, polynomial maps, edge lists and witnesses.
//!
//! Polynomial text holds one term per line, `coeff e1 e2 .. ek`, in descending
//! graded-lexicographic order. Blank lines and lines starting with `#` are ignored.
//!
//! A polynomial map starts with `polymap s=<s> n=<n> domain=<affine|torus>` and has one
//! `component <j>` section of term lines per coordinate.
//!
//! An edge list starts with `turan-forge v1`, then `p=<p> left=<n> right=<n>
//! family=<tag>`, then one sorted `u v` pair of 0-based indices per line.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use turan_forge_core::embeddings::Domain;
use turan_forge_core::{BipartiteGraph, GridWitness, PolyMap, Polynomial};

pub const EDGE_LIST_MAGIC: &str = "turan-forge v1";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_poly(f: &Polynomial) -> String {
    let mut out = String::new();
    for (m, c) in f.terms().rev() {
        write!(out, "{c}").unwrap();
        for e in m.exponents() {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_term(line: &str, lineno: usize) -> Result<(i64, Vec<i32>)> {
    let mut fields = line.split_whitespace();
    let coeff = fields
        .next()
        .ok_or_else(|| anyhow!("line {lineno}: empty term"))?
        .parse::<i64>()
        .with_context(|| format!("line {lineno}: bad coefficient"))?;
    let exps = fields
        .map(|e| e.parse::<i32>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("line {lineno}: bad exponent"))?;
    Ok((coeff, exps))
}

fn terms_to_poly(
    terms: Vec<(usize, i64, Vec<i32>)>,
    nvars: Option<usize>,
    modulus: Option<u64>,
) -> Result<Polynomial> {
    let nvars = match (nvars, terms.first()) {
        (Some(n), _) => n,
        (None, Some((_, _, e))) => e.len(),
        (None, None) => bail!("empty polynomial without a variable count"),
    };
    if let Some((lineno, _, e)) = terms.iter().find(|(_, _, e)| e.len() != nvars) {
        bail!("line {lineno}: expected {nvars} exponents, found {}", e.len());
    }
    Ok(Polynomial::from_terms(
        nvars,
        modulus,
        terms.into_iter().map(|(_, c, e)| (c, e)),
    )?)
}

/// Parses term lines; the variable count is taken from the first term unless given.
pub fn parse_poly(text: &str, nvars: Option<usize>, modulus: Option<u64>) -> Result<Polynomial> {
    let terms = content_lines(text)
        .map(|(n, l)| parse_term(l, n).map(|(c, e)| (n, c, e)))
        .collect::<Result<Vec<_>>>()?;
    terms_to_poly(terms, nvars, modulus)
}

/// Several polynomials separated by lines consisting of `---`.
pub fn parse_poly_list(text: &str, nvars: usize, modulus: Option<u64>) -> Result<Vec<Polynomial>> {
    let mut sections = vec![Vec::new()];
    for (n, l) in content_lines(text) {
        if l == "---" {
            sections.push(Vec::new());
        } else {
            let (c, e) = parse_term(l, n)?;
            sections.last_mut().unwrap().push((n, c, e));
        }
    }
    sections
        .into_iter()
        .map(|terms| terms_to_poly(terms, Some(nvars), modulus))
        .collect()
}

fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Affine => "affine",
        Domain::Torus => "torus",
    }
}

pub fn write_map(map: &PolyMap) -> String {
    let mut out = format!(
        "polymap s={} n={} domain={}\n",
        map.s(),
        map.n(),
        domain_name(map.domain())
    );
    for (j, f) in map.components().iter().enumerate() {
        writeln!(out, "component {j}").unwrap();
        out.push_str(&write_poly(f));
    }
    out
}

fn key_value<'a>(field: &'a str, key: &str, lineno: usize) -> Result<&'a str> {
    field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| anyhow!("line {lineno}: expected {key}=<value>, found {field:?}"))
}

pub fn parse_map(text: &str) -> Result<PolyMap> {
    let mut lines = content_lines(text);
    let (n0, header) = lines.next().ok_or_else(|| anyhow!("empty map file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "polymap" {
        bail!("line {n0}: expected `polymap s=<s> n=<n> domain=<affine|torus>`");
    }
    let s: usize = key_value(fields[1], "s", n0)?.parse()?;
    let n: usize = key_value(fields[2], "n", n0)?.parse()?;
    let domain = match key_value(fields[3], "domain", n0)? {
        "affine" => Domain::Affine,
        "torus" => Domain::Torus,
        other => bail!("line {n0}: unknown domain {other:?}"),
    };
    let mut sections: Vec<Vec<(usize, i64, Vec<i32>)>> = Vec::new();
    for (lineno, l) in lines {
        if let Some(j) = l.strip_prefix("component ") {
            let j: usize = j.trim().parse().with_context(|| format!("line {lineno}: bad component index"))?;
            if j != sections.len() {
                bail!("line {lineno}: component {j} out of order");
            }
            sections.push(Vec::new());
        } else {
            let (c, e) = parse_term(l, lineno)?;
            sections
                .last_mut()
                .ok_or_else(|| anyhow!("line {lineno}: term before first component"))?
                .push((lineno, c, e));
        }
    }
    if sections.len() != n {
        bail!("expected {n} components, found {}", sections.len());
    }
    let components = sections
        .into_iter()
        .map(|t| terms_to_poly(t, Some(s), None))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMap::new(s, components)?.with_domain(domain))
}

/// A graph read back from an edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub p: u64,
    pub family: String,
    pub graph: BipartiteGraph,
}

pub fn write_edge_list(g: &BipartiteGraph, p: u64, family: &str) -> String {
    let mut out = String::with_capacity(16 * g.edge_count() + 64);
    writeln!(out, "{EDGE_LIST_MAGIC}").unwrap();
    writeln!(
        out,
        "p={p} left={} right={} family={family}",
        g.left_size(),
        g.right_size()
    )
    .unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, l)) if l == EDGE_LIST_MAGIC => {}
        _ => bail!("line 1: expected `{EDGE_LIST_MAGIC}`"),
    }
    let (n2, header) = lines.next().ok_or_else(|| anyhow!("line 2: missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        bail!("line {n2}: expected `p=<p> left=<n> right=<n> family=<name>`");
    }
    let p: u64 = key_value(fields[0], "p", n2)?.parse()?;
    let left: usize = key_value(fields[1], "left", n2)?.parse()?;
    let right: usize = key_value(fields[2], "right", n2)?.parse()?;
    let family = key_value(fields[3], "family", n2)?.to_string();
    let mut graph = BipartiteGraph::empty(left, right);
    let mut prev: Option<(usize, usize)> = None;
    for (lineno, l) in lines {
        if l.is_empty() {
            continue;
        }
        let mut it = l.split_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            bail!("line {lineno}: expected `u v`");
        };
        let u: usize = u.parse().with_context(|| format!("line {lineno}: bad vertex"))?;
        let v: usize = v.parse().with_context(|| format!("line {lineno}: bad vertex"))?;
        if u >= left || v >= right {
            bail!("line {lineno}: edge ({u}, {v}) out of range");
        }
        if prev.is_some_and(|q| q >= (u, v)) {
            bail!("line {lineno}: edges not sorted or repeated");
        }
        prev = Some((u, v));
        graph.add_edge(u, v);
    }
    Ok(EdgeList { p, family, graph })
}

/// `{"left": [...], "right": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl From<&GridWitness> for WitnessJson {
    fn from(w: &GridWitness) -> Self {
        WitnessJson {
            left: w.left_set.clone(),
            right: w.right_set.clone(),
        }
    }
}
