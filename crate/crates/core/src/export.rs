//! Tidy CSV writers for rankings and sweep curves.

use std::io::{self, Write};

use crate::graph::SparseGraph;
use crate::ppr::ApprRanking;
use crate::sweep::SweepCurve;

/// `rank,node_id,score,degree` for the first `limit` ranked nodes.
pub fn write_ranking_csv<W: Write>(
    mut out: W,
    graph: &SparseGraph,
    ranking: &ApprRanking,
    limit: usize,
) -> io::Result<()> {
    writeln!(out, "rank,node_id,score,degree")?;
    for (rank, &node) in ranking.order.iter().take(limit).enumerate() {
        writeln!(
            out,
            "{},{},{:e},{}",
            rank + 1,
            node,
            ranking.scores[node],
            graph.degree(node)
        )?;
    }
    Ok(())
}

/// `n,cut,vol,phi`, one row per prefix.
pub fn write_curve_csv<W: Write>(mut out: W, curve: &SweepCurve) -> io::Result<()> {
    writeln!(out, "n,cut,vol,phi")?;
    for n in 1..=curve.len() {
        writeln!(
            out,
            "{},{},{},{}",
            n,
            curve.cut[n - 1],
            curve.vol[n - 1],
            curve.phi(n)
        )?;
    }
    Ok(())
}
