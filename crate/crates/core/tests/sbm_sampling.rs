//! Sampler checks against expectations computed pair by pair.

use seedclust::sbm::{sample_graph, sample_theta};
use seedclust::{BlockModelSpec, ThetaRecipe};

/// Expected edge count and its variance for fixed thetas.
fn edge_moments(spec: &BlockModelSpec, theta: &[f64]) -> (f64, f64) {
    let g = spec.membership();
    let n = theta.len();
    let (mut mean, mut var) = (0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let p = (theta[i] * theta[j] * spec.rho * spec.s[g[i]][g[j]]).min(1.0);
            mean += p;
            var += p * (1.0 - p);
        }
    }
    (mean, var)
}

#[test]
fn mean_edge_count_matches_analytic_expectation() {
    let spec = BlockModelSpec::small_community(11);
    let draws = 50;
    let (mut observed, mut expected, mut var) = (0.0, 0.0, 0.0);
    for rep in 0..draws {
        let planted = sample_graph(&spec, &mut spec.rng(rep)).unwrap();
        assert_eq!(planted.clipped_pairs, 0);
        let (m, v) = edge_moments(&spec, &planted.theta);
        observed += planted.graph.edge_count() as f64;
        expected += m;
        var += v;
    }
    let d = draws as f64;
    let se = var.sqrt() / d;
    let gap = (observed / d - expected / d).abs();
    assert!(gap <= 3.0 * se, "gap {gap} exceeds 3 SE = {}", 3.0 * se);
}

#[test]
fn constant_theta_reduces_to_plain_block_model() {
    let spec = BlockModelSpec {
        sizes: vec![20, 30],
        s: vec![vec![0.3, 0.05], vec![0.05, 0.2]],
        rho: 0.8,
        theta: ThetaRecipe::Constant,
        rng_seed: 5,
    };
    let draws = 400;
    let mut counts = [0usize; 3];
    for rep in 0..draws {
        let planted = sample_graph(&spec, &mut spec.rng(rep)).unwrap();
        for (u, v) in planted.graph.edges() {
            let slot = match (planted.membership[u], planted.membership[v]) {
                (0, 0) => 0,
                (1, 1) => 1,
                _ => 2,
            };
            counts[slot] += 1;
        }
    }
    let pairs = [190.0, 435.0, 600.0];
    let probs = [0.24, 0.16, 0.04];
    for k in 0..3 {
        let trials = pairs[k] * draws as f64;
        let freq = counts[k] as f64 / trials;
        let se = (probs[k] * (1.0 - probs[k]) / trials).sqrt();
        assert!((freq - probs[k]).abs() <= 3.0 * se, "slot {k}: {freq} vs {}", probs[k]);
    }
}

#[test]
fn theta_sums_equal_block_sizes_on_every_draw() {
    let spec = BlockModelSpec::small_community(2);
    for rep in 0..20 {
        let theta = sample_theta(&spec, &mut spec.rng(rep));
        for b in 0..spec.blocks() {
            let sum: f64 = theta[spec.block_range(b)].iter().sum();
            assert!((sum - spec.sizes[b] as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn clipping_is_counted() {
    let spec = BlockModelSpec {
        sizes: vec![30],
        s: vec![vec![0.9]],
        rho: 1.0,
        theta: ThetaRecipe::UniformNormalized { lo: 1.0, hi: 10.0 },
        rng_seed: 1,
    };
    let planted = sample_graph(&spec, &mut spec.rng(0)).unwrap();
    let theta = &planted.theta;
    let over = (0..30)
        .flat_map(|i| (i + 1..30).map(move |j| (i, j)))
        .filter(|&(i, j)| theta[i] * theta[j] * 0.9 > 1.0)
        .count() as u64;
    assert!(over > 0);
    assert_eq!(planted.clipped_pairs, over);
}

#[test]
fn same_seed_same_graph() {
    let spec = BlockModelSpec::small_community(99);
    let a = sample_graph(&spec, &mut spec.rng(3)).unwrap();
    let b = sample_graph(&spec, &mut spec.rng(3)).unwrap();
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.theta, b.theta);
    let c = sample_graph(&spec, &mut spec.rng(4)).unwrap();
    assert_ne!(a.graph, c.graph);
}
