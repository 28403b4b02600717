//! Solver and sweep results checked against independent brute-force routes.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seedclust::{
    adjust_and_rank, solve_ppr, sweep, uniform_seeds, PprOptions, PreferenceVector, SparseGraph,
};

/// Solves `p^T (I - (1 - alpha) P) = alpha pi^T` by LU.
fn dense_ppr(graph: &SparseGraph, pi: &[f64], alpha: f64) -> Vec<f64> {
    let n = graph.node_count();
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        let d = graph.degree(u) as f64;
        for &v in graph.neighbors(u) {
            // transpose of P: row v, column u
            m[(v as usize, u)] -= (1.0 - alpha) / d;
        }
    }
    let rhs = DVector::from_iterator(n, pi.iter().map(|x| alpha * x));
    m.lu().solve(&rhs).expect("nonsingular").iter().copied().collect()
}

/// Cut and volume of `set` recounted from scratch.
fn naive_cut_vol(graph: &SparseGraph, set: &[usize]) -> (u64, u64) {
    let mut inside = vec![false; graph.node_count()];
    for &v in set {
        inside[v] = true;
    }
    let mut cut = 0;
    let mut vol = 0;
    for &v in set {
        vol += graph.degree(v) as u64;
        cut += graph
            .neighbors(v)
            .iter()
            .filter(|&&u| !inside[u as usize])
            .count() as u64;
    }
    (cut, vol)
}

/// Erdős–Rényi graph plus a random spanning path, so it is connected.
fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SparseGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<(usize, usize)> = perm.windows(2).map(|w| (w[0], w[1])).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    SparseGraph::from_edges(n, edges).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SparseGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    SparseGraph::from_edges(n, edges).unwrap()
}

fn random_seeds(rng: &mut ChaCha8Rng, n: usize, max: usize) -> PreferenceVector {
    let k = rng.random_range(1..=max.min(n));
    let mut seeds: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        seeds.swap(i, j);
    }
    uniform_seeds(&seeds[..k]).unwrap()
}

#[test]
fn two_node_value_matches_dense_solve() {
    let g = SparseGraph::from_edges(2, [(0, 1)]).unwrap();
    let oracle = dense_ppr(&g, &[1.0, 0.0], 0.5);
    // frozen from the oracle: (2/3, 1/3)
    assert!((oracle[0] - 2.0 / 3.0).abs() < 1e-14);
    assert!((oracle[1] - 1.0 / 3.0).abs() < 1e-14);
    let p = solve_ppr(&g, &uniform_seeds(&[0]).unwrap(), &PprOptions::with_alpha(0.5)).unwrap();
    for (a, b) in p.values.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn power_iteration_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdead);
    for _ in 0..25 {
        let n = rng.random_range(2..=120);
        let density = rng.random_range(0.0..0.1);
        let g = random_connected(&mut rng, n, density);
        let alpha = rng.random_range(0.05..0.9);
        let pref = random_seeds(&mut rng, n, 5);
        let p = solve_ppr(&g, &pref, &PprOptions::with_alpha(alpha)).unwrap();
        let oracle = dense_ppr(&g, &pref.to_dense(n), alpha);
        let err = p
            .values
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "n={n} alpha={alpha} err={err:e}");
        assert!((p.values.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn incremental_sweep_matches_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    for _ in 0..20 {
        let n = rng.random_range(2..=300);
        let density = rng.random_range(0.0..0.08);
        let g = random_graph(&mut rng, n, density);
        let seed = (0..n).find(|&v| g.degree(v) > 0);
        let Some(seed) = seed else { continue };
        let p = solve_ppr(&g, &uniform_seeds(&[seed]).unwrap(), &PprOptions::default()).unwrap();
        let r = adjust_and_rank(&g, &p);
        let len = r.positive_count();
        let curve = sweep(&g, &r, len).unwrap();
        for k in 1..=len {
            assert_eq!(naive_cut_vol(&g, &r.order[..k]), (curve.cut[k - 1], curve.vol[k - 1]));
        }
        assert!(curve.vol.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn bridged_triangles_recount() {
    let g = SparseGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
    // oracle value frozen into the unit test: cut 1, vol 7
    assert_eq!(naive_cut_vol(&g, &[0, 1, 2]), (1, 7));
}

fn arb_graph() -> impl Strategy<Value = SparseGraph> {
    (2usize..40, any::<u64>(), 0.05f64..0.5).prop_map(|(n, seed, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_connected(&mut rng, n, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ppr_is_linear_in_preference(
        g in arb_graph(),
        seed in any::<u64>(),
        w in 0.0f64..=1.0,
        alpha in 0.05f64..0.6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.node_count();
        let a = random_seeds(&mut rng, n, 4);
        let b = random_seeds(&mut rng, n, 4);
        let opts = PprOptions::with_alpha(alpha);
        let mixed = solve_ppr(&g, &a.mix(w, &b, 1.0 - w).unwrap(), &opts).unwrap();
        let pa = solve_ppr(&g, &a, &opts).unwrap();
        let pb = solve_ppr(&g, &b, &opts).unwrap();
        for i in 0..n {
            let combo = w * pa.values[i] + (1.0 - w) * pb.values[i];
            prop_assert!((mixed.values[i] - combo).abs() <= 10.0 * opts.tol);
        }
    }

    #[test]
    fn ranking_is_label_equivariant(g in arb_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let src = rng.random_range(0..n);
        let opts = PprOptions::default();
        let p = solve_ppr(&g, &uniform_seeds(&[src]).unwrap(), &opts).unwrap();
        let h = g.permute(&perm).unwrap();
        let q = solve_ppr(&h, &uniform_seeds(&[perm[src]]).unwrap(), &opts).unwrap();
        let rp = adjust_and_rank(&g, &p);
        let rq = adjust_and_rank(&h, &q);
        for v in 0..n {
            prop_assert!((rp.scores[v] - rq.scores[perm[v]]).abs() < 1e-9);
        }
    }

    #[test]
    fn ranking_invariants(g in arb_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pref = random_seeds(&mut rng, g.node_count(), 3);
        let p = solve_ppr(&g, &pref, &PprOptions::default()).unwrap();
        prop_assert!(p.values.iter().all(|&x| x >= 0.0));
        let r = adjust_and_rank(&g, &p);
        let mut sorted = r.order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..g.node_count()).collect::<Vec<_>>());
        for w in r.order.windows(2) {
            prop_assert!(r.scores[w[0]] >= r.scores[w[1]]);
            if r.scores[w[0]] == r.scores[w[1]] {
                prop_assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn conductance_bounded_below_half_volume(g in arb_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pref = random_seeds(&mut rng, g.node_count(), 2);
        let r = adjust_and_rank(&g, &solve_ppr(&g, &pref, &PprOptions::default()).unwrap());
        let curve = sweep(&g, &r, r.positive_count()).unwrap();
        let total = g.volume() as u64;
        for k in 1..=curve.len() {
            prop_assert_eq!(naive_cut_vol(&g, &r.order[..k]), (curve.cut[k - 1], curve.vol[k - 1]));
            if 2 * curve.vol[k - 1] <= total {
                let phi = curve.phi(k);
                prop_assert!((0.0..=1.0).contains(&phi));
            }
        }
    }
}
