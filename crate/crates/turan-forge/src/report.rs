//! Verification reports and the asymptotic extremal bounds they compare against.

use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;
use turan_forge_core::rng::GENERATOR_NAME;
use turan_forge_core::{
    build_graph, check_kst_bound, expected_edge_count, find_kst, girth, max_codegree, ClaimedForbidden,
    ConstructionResult, ConstructionSpec, Error, Family,
};

use crate::formats::WitnessJson;

/// Leading term `(1/2) (t - s + 1)^{1/s} n^{2 - 1/s}` of the upper bound on the number
/// of edges of an `n`-vertex graph without `K_{s,t}`.
pub fn furedi_bound(s: u64, t: u64, n: u64) -> Result<f64> {
    if s < 2 || s > t || n == 0 {
        bail!("furedi bound needs 2 <= s <= t and n >= 1 (got s={s}, t={t}, n={n})");
    }
    let s_f = s as f64;
    Ok(0.5 * ((t - s + 1) as f64).powf(1.0 / s_f) * (n as f64).powf(2.0 - 1.0 / s_f))
}

/// Leading term `(1/2) (t - 1)^{1/s} n^{2 - 1/s}` of the counting upper bound.
pub fn kst_leading_bound(s: u64, t: u64, n: u64) -> f64 {
    let s_f = s as f64;
    0.5 * ((t.saturating_sub(1)) as f64).powf(1.0 / s_f) * (n as f64).powf(2.0 - 1.0 / s_f)
}

/// Options for [`verify`].
#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Grid to search for; defaults to the construction's claim.
    pub forbid: Option<(usize, usize)>,
    pub budget: u64,
    /// Random left `s`-subsets for the codegree estimate; 0 skips it.
    pub sample: usize,
    pub seed: u64,
    /// Record wall-clock time. Off by default so reports are reproducible byte for byte.
    pub timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            forbid: None,
            budget: turan_forge_core::gridsearch::DEFAULT_BUDGET,
            sample: 0,
            seed: 0,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    pub family: String,
    pub p: u64,
    pub side_dim: usize,
    pub left: usize,
    pub right: usize,
    pub claimed: ClaimJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimJson {
    Grid { s: usize, t: u64 },
    Cycle { length: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectedJson {
    pub value: String,
    pub exact: bool,
    pub relative_window: f64,
    pub ratio: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KstBoundJson {
    pub s: usize,
    pub t: usize,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodegreeJson {
    pub s: usize,
    pub sample: usize,
    pub max: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchJson {
    pub s: usize,
    pub t: usize,
    pub found: Option<WitnessJson>,
    pub subsets_examined: u64,
    pub exhaustive: bool,
    pub codegree: Option<CodegreeJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundValue {
    pub s: u64,
    pub t: u64,
    pub n: u64,
    pub value: f64,
    pub edges_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJson {
    pub furedi: Option<BoundValue>,
    pub kst: Option<BoundValue>,
    /// Only leading terms are evaluated.
    pub lower_order_terms: &'static str,
    /// `edges / kst` exceeded `1 + 10 / sqrt(p)`.
    pub kst_ratio_warning: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedsJson {
    pub seed: u64,
    pub generator: &'static str,
    pub construction_seed: Option<u64>,
    pub projection_resamples: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingJson {
    pub construct_ms: u128,
    pub verify_ms: u128,
}

/// Everything checked for one construction. Keys are fixed.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub spec: SpecEcho,
    pub edges: usize,
    pub expected: Option<ExpectedJson>,
    pub kst_bound: KstBoundJson,
    pub search: SearchJson,
    pub girth: Option<usize>,
    pub bounds: BoundsJson,
    pub seeds: SeedsJson,
    pub timing: Option<TimingJson>,
}

impl VerificationReport {
    /// The claimed-forbidden structure was found.
    pub fn failed(&self) -> bool {
        if self.search.found.is_some() {
            return true;
        }
        match (&self.spec.claimed, self.girth) {
            (ClaimJson::Cycle { length }, Some(g)) => g <= *length,
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Builds the graph of `spec` and runs every applicable check.
pub fn verify(spec: &ConstructionSpec, opts: &ReportOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let result = build_graph(spec)?;
    let construct_ms = start.elapsed().as_millis();
    let verify_start = Instant::now();
    let mut report = report_for(&result, opts)?;
    if opts.timing {
        report.timing = Some(TimingJson {
            construct_ms,
            verify_ms: verify_start.elapsed().as_millis(),
        });
    }
    Ok(report)
}

/// The grid searched for by default: the claim itself, or `(2, 2)` for cycle claims.
pub fn default_forbid(claim: ClaimedForbidden) -> (usize, usize) {
    match claim {
        ClaimedForbidden::Grid { s, t } => (s, usize::try_from(t).unwrap_or(usize::MAX)),
        ClaimedForbidden::Cycle { .. } => (2, 2),
    }
}

pub fn report_for(result: &ConstructionResult, opts: &ReportOptions) -> Result<VerificationReport> {
    let g = &result.graph;
    let spec = &result.spec;
    let (s, t) = opts.forbid.unwrap_or_else(|| default_forbid(result.claimed_forbidden));
    let edges = g.edge_count();

    let expected = match expected_edge_count(spec) {
        Ok(e) => Some(ExpectedJson {
            value: e.expected.to_string(),
            exact: e.exact,
            relative_window: e.relative_window,
            ratio: e.ratio(edges as u64),
            within: e.contains(edges as u64),
        }),
        Err(Error::NoExpectation) => None,
        Err(e) => return Err(e.into()),
    };

    let kst = check_kst_bound(g, s, t);
    let outcome = find_kst(g, s, t, opts.budget);
    let codegree = (opts.sample > 0 && g.left_size() >= s).then(|| CodegreeJson {
        s,
        sample: opts.sample,
        max: max_codegree(g, s, opts.sample, opts.seed),
    });
    let girth = match spec.family {
        Family::Wenger { .. } => girth(g),
        _ => None,
    };

    let n = (g.left_size() + g.right_size()) as u64;
    let (lo, hi) = (s.min(t) as u64, s.max(t) as u64);
    let bound = |value: f64| BoundValue {
        s: lo,
        t: hi,
        n,
        value,
        edges_ratio: edges as f64 / value,
    };
    let furedi = furedi_bound(lo, hi, n).ok().map(bound);
    let kst_lead = (lo >= 2 && hi >= 2).then(|| bound(kst_leading_bound(lo, hi, n)));
    let kst_ratio_warning = kst_lead
        .as_ref()
        .is_some_and(|b| b.edges_ratio >= 1.0 + 10.0 / (spec.p as f64).sqrt());

    let (construction_seed, projection_resamples) = match (&spec.family, &result.inner_product) {
        (Family::InnerProduct { seed, .. }, Some(data)) => (Some(*seed), Some(data.resamples)),
        _ => (None, None),
    };

    Ok(VerificationReport {
        spec: SpecEcho {
            family: spec.family.tag(),
            p: spec.p,
            side_dim: spec.family.side_dim(),
            left: g.left_size(),
            right: g.right_size(),
            claimed: match result.claimed_forbidden {
                ClaimedForbidden::Grid { s, t } => ClaimJson::Grid { s, t },
                ClaimedForbidden::Cycle { length } => ClaimJson::Cycle { length },
            },
        },
        edges,
        expected,
        kst_bound: KstBoundJson {
            s,
            t,
            lhs: kst.lhs.to_string(),
            rhs: kst.rhs.to_string(),
            holds: kst.holds,
        },
        search: SearchJson {
            s,
            t,
            found: outcome.found.as_ref().map(WitnessJson::from),
            subsets_examined: outcome.subsets_examined,
            exhaustive: outcome.exhaustive,
            codegree,
        },
        girth,
        bounds: BoundsJson {
            furedi,
            kst: kst_lead,
            lower_order_terms: "omitted",
            kst_ratio_warning,
        },
        seeds: SeedsJson {
            seed: opts.seed,
            generator: GENERATOR_NAME,
            construction_seed,
            projection_resamples,
        },
        timing: None,
    })
}
