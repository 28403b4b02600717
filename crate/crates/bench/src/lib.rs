//! Shared fixtures for the criterion benchmarks.

use seedclust::{BlockModelSpec, PlantedGraph};

/// One draw of the two-block benchmark model (50 + 3000 nodes).
pub fn planted(seed: u64) -> PlantedGraph {
    let spec = BlockModelSpec::small_community(seed);
    seedclust::sbm::sample_graph(&spec, &mut spec.rng(0)).expect("valid spec")
}
