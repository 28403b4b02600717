//! Seeded local community detection.
//!
//! Seeds define a personalized PageRank restart distribution; nodes are
//! ranked by PageRank over degree, and the community size is the first
//! local minimum of conductance along that ranking. Around this core sit
//! a citation-corpus loader, a degree-corrected block model simulator for
//! recovery experiments, and descriptive bibliometrics.

pub mod biblio;
pub mod corpus;
pub mod error;
pub mod export;
pub mod graph;
pub mod ppr;
pub mod sbm;
pub mod sweep;

pub use corpus::{
    citation_counts, keyword_counts, load_corpus, select_topic_papers, source_network, CitationCorpus,
    PaperKind, PaperRecord, TextField, TopicQuery,
};
pub use error::{Error, Result};
pub use graph::{subgraph_stats, SparseGraph, SubgraphStats};
pub use ppr::{
    adjust_and_rank, build_preference, cluster_at, solve_ppr, uniform_seeds, ApprRanking, PprOptions,
    PprVector, PreferenceVector,
};
pub use sbm::{BlockModelSpec, Cell, ExperimentOptions, ExperimentReport, PlantedGraph, ThetaRecipe};
pub use sweep::{first_local_min, local_cluster, sweep, SweepCurve, SweepParams, SweepResult};
