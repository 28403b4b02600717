//! Conductance sweeps over a node ranking.
//!
//! For a prefix `C_n` of the ranking, conductance is `cut(C_n) / vol(C_n)`
//! with the one-sided volume in the denominator. Cut and volume are kept as
//! integers and updated in `O(deg v)` per added node.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::ppr::{adjust_and_rank, solve_ppr, ApprRanking, PprOptions, PreferenceVector};

pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_N_MIN: usize = 2;
pub const DEFAULT_N_MAX: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepCurve {
    /// `cut[n - 1]` is the cut of the first `n` ranked nodes.
    pub cut: Vec<u64>,
    pub vol: Vec<u64>,
}

impl SweepCurve {
    pub fn len(&self) -> usize {
        self.cut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cut.is_empty()
    }

    /// Conductance of the first `n` nodes, `1 <= n <= len`.
    pub fn phi(&self, n: usize) -> f64 {
        self.cut[n - 1] as f64 / self.vol[n - 1] as f64
    }

    pub fn phis(&self) -> Vec<f64> {
        (1..=self.len()).map(|n| self.phi(n)).collect()
    }

    /// Exact `phi(a) < phi(b)` by cross-multiplication.
    fn less(&self, a: usize, b: usize) -> bool {
        (self.cut[a - 1] as u128) * (self.vol[b - 1] as u128)
            < (self.cut[b - 1] as u128) * (self.vol[a - 1] as u128)
    }
}

/// Cut and volume of every prefix `C_1..C_{n_max}` of the ranking.
///
/// Only positive-score nodes may be swept; they all have degree at least
/// one, so the volume strictly increases.
pub fn sweep(graph: &SparseGraph, ranking: &ApprRanking, n_max: usize) -> Result<SweepCurve> {
    if n_max == 0 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    let positive = ranking.positive_count();
    if n_max > positive {
        return Err(Error::param(
            "n_max",
            format!("{n_max} exceeds the {positive} nodes with positive score"),
        ));
    }
    let mut inside = vec![false; graph.node_count()];
    let mut cut = Vec::with_capacity(n_max);
    let mut vol = Vec::with_capacity(n_max);
    let (mut c, mut v) = (0u64, 0u64);
    for &node in &ranking.order[..n_max] {
        let d = graph.degree(node) as u64;
        let links = graph
            .neighbors(node)
            .iter()
            .filter(|&&u| inside[u as usize])
            .count() as u64;
        // edges into the set stop being cut; the rest of v's edges start
        c = c + d - 2 * links;
        v += d;
        inside[node] = true;
        cut.push(c);
        vol.push(v);
    }
    Ok(SweepCurve { cut, vol })
}

/// First local minimum of the curve in `[n_min, n_max]`.
///
/// A candidate `n > n_min` must be strictly below every prefix in
/// `[n - window, n)` and no larger than every prefix in `(n, n + window]`,
/// both windows clipped to the search range. So the earliest point of a
/// flat valley wins. The right edge `n_max` qualifies only with zero
/// conductance, where no extension can do better.
pub fn first_local_min(curve: &SweepCurve, window: usize, n_min: usize, n_max: usize) -> Result<usize> {
    if window == 0 {
        return Err(Error::param("window", "must be at least 1"));
    }
    if n_min == 0 || n_min >= n_max || n_max > curve.len() {
        return Err(Error::param(
            "range",
            format!("need 1 <= n_min < n_max <= {}, got [{n_min}, {n_max}]", curve.len()),
        ));
    }
    for n in n_min + 1..=n_max {
        let left = n.saturating_sub(window).max(n_min)..n;
        if !left.into_iter().all(|m| curve.less(n, m)) {
            continue;
        }
        let right = n + 1..=(n + window).min(n_max);
        let ok = if right.is_empty() {
            curve.cut[n - 1] == 0
        } else {
            right.into_iter().all(|m| !curve.less(m, n))
        };
        if ok {
            return Ok(n);
        }
    }
    Err(Error::NoLocalMinimum { n_min, n_max })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepParams {
    pub window: usize,
    pub n_min: usize,
    /// Upper end of the search; `None` means `min(500, positive-score nodes)`.
    pub n_max: Option<usize>,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            window: DEFAULT_WINDOW,
            n_min: DEFAULT_N_MIN,
            n_max: None,
        }
    }
}

/// Search range after defaults and the half-volume cap were applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolvedSweepParams {
    pub window: usize,
    pub n_min: usize,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    #[serde(skip)]
    pub curve: SweepCurve,
    pub cutoff: usize,
    pub phi: f64,
    pub params: ResolvedSweepParams,
    #[serde(rename = "members")]
    pub cluster: Vec<usize>,
}

/// Largest sweep length the ranking allows: positive-score nodes only, and
/// no prefix holding more than half the total volume.
pub fn sweep_limit(graph: &SparseGraph, ranking: &ApprRanking) -> usize {
    let total = graph.volume() as u64;
    let mut vol = 0u64;
    let mut limit = 0;
    for &v in &ranking.order[..ranking.positive_count()] {
        vol += graph.degree(v) as u64;
        if 2 * vol > total {
            break;
        }
        limit += 1;
    }
    limit
}

/// Sweeps an existing ranking and cuts it at the first local minimum.
pub fn sweep_ranking(graph: &SparseGraph, ranking: &ApprRanking, params: &SweepParams) -> Result<SweepResult> {
    let n_max = params
        .n_max
        .unwrap_or(DEFAULT_N_MAX)
        .min(sweep_limit(graph, ranking));
    let resolved = ResolvedSweepParams {
        window: params.window,
        n_min: params.n_min,
        n_max,
    };
    if n_max <= params.n_min {
        return Err(Error::NoLocalMinimum {
            n_min: params.n_min,
            n_max,
        });
    }
    let curve = sweep(graph, ranking, n_max)?;
    let cutoff = first_local_min(&curve, params.window, params.n_min, n_max)?;
    Ok(SweepResult {
        phi: curve.phi(cutoff),
        cluster: ranking.order[..cutoff].to_vec(),
        curve,
        cutoff,
        params: resolved,
    })
}

/// PageRank, degree adjustment, sweep and cutoff selection in one call.
pub fn local_cluster(
    graph: &SparseGraph,
    pref: &PreferenceVector,
    ppr: &PprOptions,
    params: &SweepParams,
) -> Result<SweepResult> {
    let p = solve_ppr(graph, pref, ppr)?;
    let ranking = adjust_and_rank(graph, &p);
    sweep_ranking(graph, &ranking, params)
}
