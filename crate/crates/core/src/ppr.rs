//! Personalized PageRank with degree adjustment.
//!
//! The PPR vector is the fixed point of
//! `p = alpha * pi + (1 - alpha) * P^T p` with `P = D^{-1} A`, found by
//! plain power iteration from `p = pi`. Ranking uses the degree-adjusted
//! scores `p_i / d_i`, which undo the pull of high-degree nodes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SparseGraph;

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Restart distribution over seed nodes: sorted by node, positive weights
/// summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreferenceVector {
    entries: Vec<(usize, f64)>,
}

impl PreferenceVector {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn seeds(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.entries
            .binary_search_by_key(&node, |&(v, _)| v)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut dense = vec![0.0; n];
        for &(v, w) in &self.entries {
            dense[v] = w;
        }
        dense
    }

    /// `w1 * self + w2 * other`; the weights must be nonnegative and sum to one.
    pub fn mix(&self, w1: f64, other: &PreferenceVector, w2: f64) -> Result<Self> {
        if w1 < 0.0 || w2 < 0.0 || (w1 + w2 - 1.0).abs() > 1e-12 {
            return Err(Error::param("weights", "must be nonnegative and sum to 1"));
        }
        let mut merged: Vec<(usize, f64)> = Vec::new();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(&&(u, x)), Some(&&(v, y))) if u == v => {
                    a.next();
                    b.next();
                    (u, w1 * x + w2 * y)
                }
                (Some(&&(u, x)), Some(&&(v, _))) if u < v => {
                    a.next();
                    (u, w1 * x)
                }
                (_, Some(&&(v, y))) => {
                    b.next();
                    (v, w2 * y)
                }
                (Some(&&(u, x)), None) => {
                    a.next();
                    (u, w1 * x)
                }
                (None, None) => break,
            };
            if next.1 > 0.0 {
                merged.push(next);
            }
        }
        Ok(PreferenceVector { entries: merged })
    }
}

/// Seeds from topic citation counts: counts below `threshold` are zeroed and
/// the rest normalized.
pub fn build_preference(counts: &[u64], threshold: u64) -> Result<PreferenceVector> {
    let kept: Vec<(usize, u64)> = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c >= threshold && c > 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let total: u64 = kept.iter().map(|&(_, c)| c).sum();
    if total == 0 {
        return Err(Error::NoSeedsAboveThreshold { threshold });
    }
    Ok(PreferenceVector {
        entries: kept
            .into_iter()
            .map(|(i, c)| (i, c as f64 / total as f64))
            .collect(),
    })
}

/// Equal weight `1/m` on each of `m` distinct seeds.
pub fn uniform_seeds(seeds: &[usize]) -> Result<PreferenceVector> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateSeed(w[0]));
    }
    let w = 1.0 / sorted.len() as f64;
    Ok(PreferenceVector {
        entries: sorted.into_iter().map(|v| (v, w)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PprOptions {
    pub alpha: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PprOptions {
    fn default() -> Self {
        PprOptions {
            alpha: DEFAULT_ALPHA,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl PprOptions {
    pub fn with_alpha(alpha: f64) -> Self {
        PprOptions {
            alpha,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha", format!("{} is not in (0, 1]", self.alpha)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PprVector {
    pub values: Vec<f64>,
    pub alpha: f64,
    /// L1 change of the last iteration.
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration for the personalized PageRank fixed point.
///
/// Seeds must have positive degree, so no mass ever reaches a dangling node
/// and the iterate stays a probability vector.
pub fn solve_ppr(graph: &SparseGraph, pref: &PreferenceVector, opts: &PprOptions) -> Result<PprVector> {
    opts.validate()?;
    let n = graph.node_count();
    if pref.entries.is_empty() {
        return Err(Error::EmptySeeds);
    }
    for v in pref.seeds() {
        if v >= n {
            return Err(Error::UnknownNode(v));
        }
        if graph.degree(v) == 0 {
            return Err(Error::IsolatedSeed(v));
        }
    }

    let alpha = opts.alpha;
    let inv_degree: Vec<f64> = (0..n)
        .map(|v| match graph.degree(v) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let restart = pref.to_dense(n);
    let mut p = restart.clone();
    let mut spread = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for iteration in 1..=opts.max_iter {
        for v in 0..n {
            spread[v] = p[v] * inv_degree[v];
        }
        residual = 0.0;
        for v in 0..n {
            let inflow: f64 = graph.neighbors(v).iter().map(|&u| spread[u as usize]).sum();
            let value = alpha * restart[v] + (1.0 - alpha) * inflow;
            residual += (value - p[v]).abs();
            next[v] = value;
        }
        std::mem::swap(&mut p, &mut next);
        if residual <= opts.tol {
            return Ok(PprVector {
                values: p,
                alpha,
                residual,
                iterations: iteration,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual,
    })
}

/// Nodes ordered by degree-adjusted PageRank, ties by ascending index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApprRanking {
    pub scores: Vec<f64>,
    pub order: Vec<usize>,
}

impl ApprRanking {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of nodes with a strictly positive score; they form a prefix of
    /// `order`.
    pub fn positive_count(&self) -> usize {
        self.order.partition_point(|&v| self.scores[v] > 0.0)
    }

    /// Position of every node in `order`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (r, &v) in self.order.iter().enumerate() {
            ranks[v] = r;
        }
        ranks
    }
}

pub fn adjust_and_rank(graph: &SparseGraph, ppr: &PprVector) -> ApprRanking {
    let scores: Vec<f64> = ppr
        .values
        .iter()
        .enumerate()
        .map(|(v, &p)| match graph.degree(v) {
            0 => 0.0,
            d => p / d as f64,
        })
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    ApprRanking { scores, order }
}

/// The `n` top-ranked nodes.
pub fn cluster_at(ranking: &ApprRanking, n: usize) -> Result<Vec<usize>> {
    if n == 0 || n > ranking.len() {
        return Err(Error::param(
            "n",
            format!("{n} is outside 1..={}", ranking.len()),
        ));
    }
    Ok(ranking.order[..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> SparseGraph {
        SparseGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn thresholded_preference() {
        let p = build_preference(&[12, 3, 20, 0], 10).unwrap();
        assert_eq!(p.entries(), &[(0, 12.0 / 32.0), (2, 20.0 / 32.0)]);
        let p = build_preference(&[5, 4], 5).unwrap();
        assert_eq!(p.entries(), &[(0, 1.0)]);
        assert!(matches!(
            build_preference(&[1, 1], 10),
            Err(Error::NoSeedsAboveThreshold { threshold: 10 })
        ));
        // t = 0 keeps every cited paper but never zero counts
        let p = build_preference(&[0, 2, 2], 0).unwrap();
        assert_eq!(p.entries(), &[(1, 0.5), (2, 0.5)]);
    }

    #[test]
    fn uniform_seed_weights() {
        assert_eq!(uniform_seeds(&[0]).unwrap().entries(), &[(0, 1.0)]);
        let seeds: Vec<usize> = (0..20).collect();
        let p = uniform_seeds(&seeds).unwrap();
        assert!(p.entries().iter().all(|&(_, w)| w == 0.05));
        let total: f64 = p.entries().iter().map(|e| e.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(matches!(uniform_seeds(&[]), Err(Error::EmptySeeds)));
        assert!(matches!(uniform_seeds(&[3, 1, 3]), Err(Error::DuplicateSeed(3))));
    }

    #[test]
    fn alpha_one_returns_preference() {
        let g = path(4);
        let pref = uniform_seeds(&[1, 2]).unwrap();
        let p = solve_ppr(&g, &pref, &PprOptions::with_alpha(1.0)).unwrap();
        assert_eq!(p.values, vec![0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn single_edge_fixed_point() {
        // p1 = 0.5 + 0.5 p2, p2 = 0.5 p1  =>  p = (2/3, 1/3)
        let g = path(2);
        let p = solve_ppr(&g, &uniform_seeds(&[0]).unwrap(), &PprOptions::with_alpha(0.5)).unwrap();
        assert!((p.values[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((p.values[1] - 1.0 / 3.0).abs() < 1e-10);
        assert!(p.residual <= 1e-10);
    }

    #[test]
    fn cycle_with_uniform_restart_is_uniform() {
        let g = SparseGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let pref = uniform_seeds(&[0, 1, 2, 3]).unwrap();
        for alpha in [0.05, 0.15, 0.9] {
            let p = solve_ppr(&g, &pref, &PprOptions::with_alpha(alpha)).unwrap();
            assert!(p.values.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        }
    }

    #[test]
    fn solver_errors() {
        let g = SparseGraph::from_edges(3, [(0, 1)]).unwrap();
        let pref = uniform_seeds(&[0]).unwrap();
        for alpha in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(solve_ppr(&g, &pref, &PprOptions::with_alpha(alpha)).is_err());
        }
        assert!(matches!(
            solve_ppr(&g, &uniform_seeds(&[2]).unwrap(), &PprOptions::default()),
            Err(Error::IsolatedSeed(2))
        ));
        assert!(matches!(
            solve_ppr(&g, &uniform_seeds(&[7]).unwrap(), &PprOptions::default()),
            Err(Error::UnknownNode(7))
        ));
        let opts = PprOptions {
            max_iter: 2,
            ..PprOptions::with_alpha(0.01)
        };
        match solve_ppr(&path(30), &pref, &opts) {
            Err(Error::NotConverged { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mass_is_conserved() {
        let g = SparseGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let p = solve_ppr(&g, &uniform_seeds(&[0, 4]).unwrap(), &PprOptions::default()).unwrap();
        assert!((p.values.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert_eq!(p.values[5], 0.0);
    }

    fn ppr(values: Vec<f64>) -> PprVector {
        PprVector {
            values,
            alpha: 0.5,
            residual: 0.0,
            iterations: 1,
        }
    }

    #[test]
    fn ranking_divides_by_degree() {
        let g = path(2);
        let r = adjust_and_rank(&g, &ppr(vec![2.0 / 3.0, 1.0 / 3.0]));
        assert_eq!(r.scores, vec![2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(r.order, vec![0, 1]);

        // star center 0 with leaves 1 and 2; node 3 isolated
        let g = SparseGraph::from_edges(4, [(0, 1), (0, 2)]).unwrap();
        let r = adjust_and_rank(&g, &ppr(vec![2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0]));
        assert_eq!(r.scores[0], 1.0 / 3.0);
        assert_eq!(r.scores[1], 1.0 / 3.0);
        assert_eq!(r.order, vec![0, 1, 2, 3]);
        assert_eq!(r.positive_count(), 2);
    }

    #[test]
    fn isolated_nodes_rank_after_positive_scores() {
        let g = SparseGraph::from_edges(4, [(2, 3)]).unwrap();
        let r = adjust_and_rank(&g, &ppr(vec![0.9, 0.0, 0.4, 0.6]));
        assert_eq!(r.scores[0], 0.0);
        assert_eq!(r.order, vec![3, 2, 0, 1]);
        assert_eq!(r.ranks(), vec![2, 3, 1, 0]);
    }

    #[test]
    fn clusters_are_nested_prefixes() {
        let g = path(5);
        let p = solve_ppr(&g, &uniform_seeds(&[0]).unwrap(), &PprOptions::default()).unwrap();
        let r = adjust_and_rank(&g, &p);
        assert_eq!(cluster_at(&r, 1).unwrap(), vec![r.order[0]]);
        assert_eq!(cluster_at(&r, 5).unwrap().len(), 5);
        for n in 1..5 {
            let small = cluster_at(&r, n).unwrap();
            let big = cluster_at(&r, n + 1).unwrap();
            assert!(small.iter().all(|v| big.contains(v)));
        }
        assert!(cluster_at(&r, 0).is_err());
        assert!(cluster_at(&r, 6).is_err());
    }

    #[test]
    fn mixing_preferences() {
        let a = uniform_seeds(&[0, 2]).unwrap();
        let b = uniform_seeds(&[2, 5]).unwrap();
        let m = a.mix(0.25, &b, 0.75).unwrap();
        assert_eq!(m.entries(), &[(0, 0.125), (2, 0.125 + 0.375), (5, 0.375)]);
        assert_eq!(m.weight(5), 0.375);
        assert_eq!(m.weight(1), 0.0);
        assert!(a.mix(0.5, &b, 0.6).is_err());
        assert_eq!(a.mix(1.0, &b, 0.0).unwrap(), a);
    }
}
