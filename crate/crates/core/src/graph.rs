//! Immutable undirected graph in compressed adjacency form.
//!
//! Every node owns a sorted, duplicate-free slice of neighbors inside one
//! shared buffer. The structure is symmetric and loop-free by construction,
//! so `degree(i) == neighbors(i).len()` and the degrees sum to twice the edge
//! count.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edge_count: usize,
}

impl SparseGraph {
    /// Builds a graph on `n` nodes from undirected edges.
    ///
    /// Duplicate edges (in either orientation) collapse. Self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::param("n", "graph too large for 32-bit node ids"));
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::UnknownNode(u));
            }
            if v >= n {
                return Err(Error::UnknownNode(v));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at node {u}")));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        Ok(Self::from_lists(lists))
    }

    /// Builds from per-node neighbor lists that are already symmetric and
    /// loop-free. Lists are sorted and deduplicated here.
    pub(crate) fn from_lists(mut lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let edge_count = targets.len() / 2;
        SparseGraph {
            offsets,
            targets,
            edge_count,
        }
    }

    pub fn empty(n: usize) -> Self {
        SparseGraph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            edge_count: 0,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Sum of all degrees, `2 * edge_count`.
    pub fn volume(&self) -> usize {
        self.targets.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count()
            && v < self.node_count()
            && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Undirected edges with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Relabels nodes: node `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::param("perm", "length differs from node count"));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::param("perm", "not a permutation"));
            }
        }
        SparseGraph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// Size, edge density and mean local clustering of an induced subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubgraphStats {
    pub size: usize,
    pub density: f64,
    pub avg_clustering: f64,
}

/// Statistics of the subgraph induced by `nodes`.
///
/// Density is `2E / (s(s-1))`, and 0 when fewer than two nodes are given.
/// Nodes with induced degree below two contribute a clustering coefficient of
/// 0 to the average.
pub fn subgraph_stats(graph: &SparseGraph, nodes: &[usize]) -> Result<SubgraphStats> {
    let n = graph.node_count();
    let mut member = vec![false; n];
    let mut members = Vec::with_capacity(nodes.len());
    for &v in nodes {
        if v >= n {
            return Err(Error::UnknownNode(v));
        }
        if !member[v] {
            member[v] = true;
            members.push(v);
        }
    }
    let size = members.len();
    if size == 0 {
        return Ok(SubgraphStats {
            size,
            density: 0.0,
            avg_clustering: 0.0,
        });
    }

    let mut degree_sum = 0usize;
    let mut clustering_sum = 0.0;
    let mut mark = vec![false; n];
    for &v in &members {
        let inner: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| member[u])
            .collect();
        degree_sum += inner.len();
        let k = inner.len();
        if k < 2 {
            continue;
        }
        for &u in &inner {
            mark[u] = true;
        }
        let mut links = 0usize;
        for &u in &inner {
            links += graph
                .neighbors(u)
                .iter()
                .filter(|&&w| mark[w as usize])
                .count();
        }
        for &u in &inner {
            mark[u] = false;
        }
        // each triangle edge was seen from both endpoints
        let triangles = links / 2;
        clustering_sum += triangles as f64 / (k * (k - 1) / 2) as f64;
    }

    let edges = degree_sum / 2;
    let density = if size < 2 {
        0.0
    } else {
        2.0 * edges as f64 / (size * (size - 1)) as f64
    };
    Ok(SubgraphStats {
        size,
        density,
        avg_clustering: clustering_sum / size as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SparseGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        SparseGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn degrees_and_symmetry() {
        let g = SparseGraph::from_edges(4, [(0, 1), (1, 2), (2, 1), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degrees(), vec![2, 2, 1, 1]);
        assert!(g.has_edge(1, 0) && g.has_edge(0, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn rejects_loops_and_unknown_nodes() {
        assert!(matches!(
            SparseGraph::from_edges(2, [(1, 1)]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            SparseGraph::from_edges(2, [(0, 5)]),
            Err(Error::UnknownNode(5))
        ));
    }

    #[test]
    fn complete_graph_stats() {
        let g = complete(4);
        let s = subgraph_stats(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.size, 4);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.avg_clustering, 1.0);
    }

    #[test]
    fn path_stats() {
        let g = SparseGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let s = subgraph_stats(&g, &[0, 1, 2]).unwrap();
        assert!((s.density - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.avg_clustering, 0.0);
    }

    #[test]
    fn tiny_sets_have_zero_density() {
        let g = complete(3);
        assert_eq!(subgraph_stats(&g, &[1]).unwrap().density, 0.0);
        assert_eq!(subgraph_stats(&g, &[]).unwrap().size, 0);
    }

    #[test]
    fn triangle_with_pendant() {
        // triangle 0-1-2 plus pendant 3 on node 0
        let g = SparseGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let s = subgraph_stats(&g, &[0, 1, 2, 3]).unwrap();
        // c0 = 1/3, c1 = c2 = 1, c3 = 0
        assert!((s.avg_clustering - (1.0 / 3.0 + 2.0) / 4.0).abs() < 1e-15);
        assert!((s.density - 4.0 / 6.0).abs() < 1e-15);
    }
}
