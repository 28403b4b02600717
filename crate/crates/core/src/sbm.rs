//! Degree-corrected stochastic block model sampling and recovery experiments.
//!
//! Node `i` in block `g(i)` links to `j` with probability
//! `theta_i * theta_j * rho * S[g(i)][g(j)]`, clipped to `[0, 1]`. Degree
//! parameters are normalized so that each block's thetas sum to its size.
//! Blocks occupy consecutive node ranges in the order of `sizes`.
//!
//! All randomness comes from ChaCha8 keyed by the model's seed, with one
//! stream per repetition, so repetitions can run in any order or in
//! parallel and still reproduce bit for bit.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::ppr::{adjust_and_rank, solve_ppr, uniform_seeds, PprOptions};
use crate::sweep::{sweep_ranking, SweepParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThetaRecipe {
    /// Every theta is 1, which reduces the model to a plain SBM.
    Constant,
    /// `eta_i ~ Uniform(lo, hi)`, then `theta_i = n_k * eta_i / sum_{block k} eta`.
    UniformNormalized { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockModelSpec {
    pub sizes: Vec<usize>,
    /// Symmetric `K x K` connectivity, row-major.
    pub s: Vec<Vec<f64>>,
    pub rho: f64,
    pub theta: ThetaRecipe,
    pub rng_seed: u64,
}

impl BlockModelSpec {
    /// Two blocks of 50 and 3000 nodes, within-block rate 0.05, between
    /// 0.01, thetas from normalized `Uniform(1, 10)` draws.
    pub fn small_community(rng_seed: u64) -> Self {
        BlockModelSpec {
            sizes: vec![50, 3000],
            s: vec![vec![0.05, 0.01], vec![0.01, 0.05]],
            rho: 1.0,
            theta: ThetaRecipe::UniformNormalized { lo: 1.0, hi: 10.0 },
            rng_seed,
        }
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn node_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.sizes.len();
        if k == 0 {
            return Err(Error::spec("K", "at least one block is required"));
        }
        if self.sizes.iter().any(|&n| n == 0) {
            return Err(Error::spec("sizes", "block sizes must be positive"));
        }
        if self.s.len() != k || self.s.iter().any(|row| row.len() != k) {
            return Err(Error::spec("S", format!("must be {k}x{k}")));
        }
        for a in 0..k {
            for b in 0..k {
                let x = self.s[a][b];
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::spec("S", "entries must be finite and nonnegative"));
                }
                if x != self.s[b][a] {
                    return Err(Error::spec("S", "must be symmetric"));
                }
            }
        }
        if !(self.rho >= 0.0 && self.rho <= 1.0) {
            return Err(Error::spec("rho", "must lie in [0, 1]"));
        }
        if let ThetaRecipe::UniformNormalized { lo, hi } = self.theta {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::spec("theta", "need 0 < lo < hi"));
            }
        }
        Ok(())
    }

    /// Block of every node.
    pub fn membership(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| std::iter::repeat_n(b, n))
            .collect()
    }

    /// Node range of block `b`.
    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..b].iter().sum();
        start..start + self.sizes[b]
    }

    /// Random stream for one repetition.
    pub fn rng(&self, repetition: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(repetition);
        rng
    }

    /// Renders the key-value format read by [`FromStr`].
    pub fn to_config(&self) -> String {
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "K = {}", self.sizes.len());
        let _ = writeln!(out, "sizes = {}", join(&mut self.sizes.iter().map(|x| x.to_string())));
        let _ = writeln!(out, "S = {}", join(&mut self.s.iter().flatten().map(|x| x.to_string())));
        let _ = writeln!(out, "rho = {}", self.rho);
        match self.theta {
            ThetaRecipe::Constant => out.push_str("theta = constant\n"),
            ThetaRecipe::UniformNormalized { lo, hi } => {
                let _ = writeln!(out, "theta = uniform {lo} {hi}");
            }
        }
        let _ = writeln!(out, "seed = {}", self.rng_seed);
        out
    }
}

/// Parses `key = value` lines: `K`, `sizes`, `S` (row-major), `rho`,
/// `theta` (`constant` or `uniform LO HI`) and `seed`. `rho` defaults to 1,
/// `theta` to constant and `seed` to 0. Lists are whitespace or comma
/// separated; `#` starts a comment.
impl FromStr for BlockModelSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        fn list<T: FromStr>(field: &str, value: &str) -> Result<Vec<T>> {
            value
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| Error::spec(field, format!("cannot parse `{s}`"))))
                .collect()
        }
        fn one<T: FromStr>(field: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::spec(field, format!("cannot parse `{}`", value.trim())))
        }

        let mut k: Option<usize> = None;
        let mut sizes: Option<Vec<usize>> = None;
        let mut s: Option<Vec<f64>> = None;
        let mut rho = 1.0;
        let mut theta = ThetaRecipe::Constant;
        let mut seed = 0u64;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::spec(line, "expected `key = value`"))?;
            let key = key.trim();
            match key {
                "K" | "k" => k = Some(one(key, value)?),
                "sizes" => sizes = Some(list(key, value)?),
                "S" | "s" | "B" => s = Some(list(key, value)?),
                "rho" => rho = one(key, value)?,
                "seed" => seed = one(key, value)?,
                "theta" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    theta = match parts.as_slice() {
                        ["constant"] => ThetaRecipe::Constant,
                        ["uniform", lo, hi] => ThetaRecipe::UniformNormalized {
                            lo: one(key, lo)?,
                            hi: one(key, hi)?,
                        },
                        _ => return Err(Error::spec(key, "expected `constant` or `uniform LO HI`")),
                    };
                }
                other => return Err(Error::spec(other, "unknown field")),
            }
        }
        let sizes = sizes.ok_or_else(|| Error::spec("sizes", "missing"))?;
        let k = k.unwrap_or(sizes.len());
        if k != sizes.len() {
            return Err(Error::spec("sizes", format!("expected {k} block sizes")));
        }
        let flat = s.ok_or_else(|| Error::spec("S", "missing"))?;
        if flat.len() != k * k {
            return Err(Error::spec("S", format!("expected {} entries", k * k)));
        }
        let spec = BlockModelSpec {
            sizes,
            s: flat.chunks(k).map(<[f64]>::to_vec).collect(),
            rho,
            theta,
            rng_seed: seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Degree parameters with per-block sums equal to block sizes.
pub fn sample_theta<R: Rng + ?Sized>(spec: &BlockModelSpec, rng: &mut R) -> Vec<f64> {
    let n = spec.node_count();
    match spec.theta {
        ThetaRecipe::Constant => vec![1.0; n],
        ThetaRecipe::UniformNormalized { lo, hi } => {
            let eta: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
            normalize_theta(spec, eta)
        }
    }
}

/// Rescales raw degree weights block by block to sum to the block size.
pub fn normalize_theta(spec: &BlockModelSpec, mut eta: Vec<f64>) -> Vec<f64> {
    for b in 0..spec.blocks() {
        let range = spec.block_range(b);
        let sum: f64 = eta[range.clone()].iter().sum();
        let scale = spec.sizes[b] as f64 / sum;
        for x in &mut eta[range] {
            *x *= scale;
        }
    }
    eta
}

#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: SparseGraph,
    pub membership: Vec<usize>,
    pub theta: Vec<f64>,
    /// Node pairs whose probability exceeded 1 before clipping.
    pub clipped_pairs: u64,
}

impl PlantedGraph {
    pub fn block(&self, b: usize) -> Vec<usize> {
        (0..self.membership.len())
            .filter(|&v| self.membership[v] == b)
            .collect()
    }
}

/// Draws one graph: thetas first, then every pair `i < j` in order.
pub fn sample_graph<R: Rng + ?Sized>(spec: &BlockModelSpec, rng: &mut R) -> Result<PlantedGraph> {
    spec.validate()?;
    let n = spec.node_count();
    let membership = spec.membership();
    let theta = sample_theta(spec, rng);
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut clipped_pairs = 0u64;
    for i in 0..n {
        let row = &spec.s[membership[i]];
        let ti = theta[i] * spec.rho;
        for j in i + 1..n {
            let mut p = ti * theta[j] * row[membership[j]];
            if p > 1.0 {
                clipped_pairs += 1;
                p = 1.0;
            }
            if rng.random::<f64>() < p {
                lists[i].push(j as u32);
                lists[j].push(i as u32);
            }
        }
    }
    if clipped_pairs > 0 {
        log::debug!("{clipped_pairs} edge probabilities clipped to 1");
    }
    Ok(PlantedGraph {
        graph: SparseGraph::from_lists(lists),
        membership,
        theta,
        clipped_pairs,
    })
}

/// `(|found ∩ truth| / |found|, |found ∩ truth| / |truth|)`.
pub fn precision_recall(found: &[usize], truth: &[usize]) -> Result<(f64, f64)> {
    if truth.is_empty() {
        return Err(Error::EmptyTruth);
    }
    if found.is_empty() {
        return Err(Error::EmptyFound);
    }
    let truth: std::collections::HashSet<usize> = truth.iter().copied().collect();
    let found: std::collections::HashSet<usize> = found.iter().copied().collect();
    let hits = found.intersection(&truth).count() as f64;
    Ok((hits / found.len() as f64, hits / truth.len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Seeding {
    /// The first `m` nodes of the target block.
    FirstInBlock,
    /// `m` target-block nodes drawn without replacement.
    Random,
}

/// One `(alpha, m)` setting of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub alpha: f64,
    pub seeds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentOptions {
    pub repetitions: usize,
    pub sweep: SweepParams,
    pub seeding: Seeding,
    pub tol: f64,
    pub max_iter: usize,
    /// Block whose members are seeds and ground truth.
    pub target_block: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        let ppr = PprOptions::default();
        ExperimentOptions {
            repetitions: 50,
            sweep: SweepParams {
                window: crate::sweep::DEFAULT_WINDOW,
                n_min: 2,
                n_max: Some(55),
            },
            seeding: Seeding::FirstInBlock,
            tol: ppr.tol,
            max_iter: ppr.max_iter,
            target_block: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub repetition: usize,
    pub edges: usize,
    pub clipped_pairs: u64,
    /// Whether the top `n_target` ranked nodes are exactly the target block.
    pub exact_at_block_size: bool,
    pub cutoff: Option<usize>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub alpha: f64,
    pub seeds: usize,
    pub repetitions: usize,
    pub failures: usize,
    pub precision_mean: f64,
    pub precision_sd: f64,
    pub recall_mean: f64,
    pub recall_sd: f64,
    pub exact_recovery_rate: f64,
    pub runs: Vec<RunRecord>,
}

/// Mean and sample standard deviation; the deviation of fewer than two
/// values is 0.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ExperimentReport {
    fn from_runs(cell: Cell, runs: Vec<RunRecord>) -> Self {
        let precision: Vec<f64> = runs.iter().filter_map(|r| r.precision).collect();
        let recall: Vec<f64> = runs.iter().filter_map(|r| r.recall).collect();
        let (precision_mean, precision_sd) = mean_sd(&precision);
        let (recall_mean, recall_sd) = mean_sd(&recall);
        let exact = runs.iter().filter(|r| r.exact_at_block_size).count();
        ExperimentReport {
            alpha: cell.alpha,
            seeds: cell.seeds,
            repetitions: runs.len(),
            failures: runs.iter().filter(|r| r.error.is_some()).count(),
            precision_mean,
            precision_sd,
            recall_mean,
            recall_sd,
            exact_recovery_rate: exact as f64 / runs.len().max(1) as f64,
            runs,
        }
    }
}

fn choose_seeds(spec: &BlockModelSpec, opts: &ExperimentOptions, m: usize, repetition: u64) -> Vec<usize> {
    let block = spec.block_range(opts.target_block);
    match opts.seeding {
        Seeding::FirstInBlock => block.take(m).collect(),
        Seeding::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed ^ 0x5eed_5eed_5eed_5eed);
            rng.set_stream(repetition);
            let mut picked: Vec<usize> = sample(&mut rng, block.len(), m)
                .into_iter()
                .map(|i| block.start + i)
                .collect();
            picked.sort_unstable();
            picked
        }
    }
}

fn run_cell(
    planted: &PlantedGraph,
    spec: &BlockModelSpec,
    opts: &ExperimentOptions,
    cell: Cell,
    repetition: usize,
) -> RunRecord {
    let truth: Vec<usize> = spec.block_range(opts.target_block).collect();
    let mut record = RunRecord {
        repetition,
        edges: planted.graph.edge_count(),
        clipped_pairs: planted.clipped_pairs,
        exact_at_block_size: false,
        cutoff: None,
        precision: None,
        recall: None,
        error: None,
    };
    let ppr_opts = PprOptions {
        alpha: cell.alpha,
        tol: opts.tol,
        max_iter: opts.max_iter,
    };
    let outcome = (|| -> Result<()> {
        let seeds = choose_seeds(spec, opts, cell.seeds, repetition as u64);
        let pref = uniform_seeds(&seeds)?;
        let p = solve_ppr(&planted.graph, &pref, &ppr_opts)?;
        let ranking = adjust_and_rank(&planted.graph, &p);
        let mut top: Vec<usize> = ranking.order[..truth.len()].to_vec();
        top.sort_unstable();
        record.exact_at_block_size = top == truth;
        let result = sweep_ranking(&planted.graph, &ranking, &opts.sweep)?;
        let (precision, recall) = precision_recall(&result.cluster, &truth)?;
        record.cutoff = Some(result.cutoff);
        record.precision = Some(precision);
        record.recall = Some(recall);
        Ok(())
    })();
    if let Err(e) = outcome {
        record.error = Some(e.to_string());
    }
    record
}

/// Runs every cell on the same sequence of graph draws.
///
/// Repetition `r` samples its graph from stream `r`, so a given cell gets
/// identical results whether it runs alone or inside a larger grid. Runs
/// are spread over the current rayon pool and gathered in repetition order.
pub fn run_grid(spec: &BlockModelSpec, cells: &[Cell], opts: &ExperimentOptions) -> Result<Vec<ExperimentReport>> {
    spec.validate()?;
    if opts.repetitions == 0 {
        return Err(Error::param("repetitions", "must be at least 1"));
    }
    if opts.target_block >= spec.blocks() {
        return Err(Error::param("target_block", "no such block"));
    }
    let target = spec.sizes[opts.target_block];
    for cell in cells {
        if cell.seeds == 0 || cell.seeds > target {
            return Err(Error::param(
                "seeds",
                format!("{} is outside 1..={target}", cell.seeds),
            ));
        }
        PprOptions::with_alpha(cell.alpha).validate()?;
    }

    let per_rep: Vec<Vec<RunRecord>> = (0..opts.repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = spec.rng(rep as u64);
            match sample_graph(spec, &mut rng) {
                Ok(planted) => cells
                    .iter()
                    .map(|&cell| run_cell(&planted, spec, opts, cell, rep))
                    .collect(),
                Err(e) => unreachable!("spec validated above: {e}"),
            }
        })
        .collect();

    let reports = cells
        .iter()
        .enumerate()
        .map(|(c, &cell)| {
            let runs = per_rep.iter().map(|row| row[c].clone()).collect();
            ExperimentReport::from_runs(cell, runs)
        })
        .collect();
    Ok(reports)
}

pub fn run_experiment(spec: &BlockModelSpec, cell: Cell, opts: &ExperimentOptions) -> Result<ExperimentReport> {
    Ok(run_grid(spec, &[cell], opts)?.remove(0))
}
