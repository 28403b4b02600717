//! `cluster` and `sweep`: topic papers to seed sources to a local cluster.

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use seedclust::biblio::{AreaMap, Tag};
use seedclust::export::{write_curve_csv, write_ranking_csv};
use seedclust::sweep::{first_local_min, sweep_limit, DEFAULT_N_MAX, DEFAULT_N_MIN, DEFAULT_WINDOW};
use seedclust::{
    adjust_and_rank, build_preference, citation_counts, keyword_counts, load_corpus, select_topic_papers,
    solve_ppr, source_network, subgraph_stats, sweep, uniform_seeds, ApprRanking, CitationCorpus, Error,
    PprOptions, PreferenceVector, SparseGraph, SubgraphStats, TextField, TopicQuery,
};

use crate::output::{ensure_dir, rows, write_csv, write_json};
use crate::{CommonArgs, Failure};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Title,
    Abstract,
}

impl From<Field> for TextField {
    fn from(f: Field) -> Self {
        match f {
            Field::Title => TextField::Title,
            Field::Abstract => TextField::Abstract,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CorpusArgs {
    /// Citation edges, one `citing_id,source_id` pair per line
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Paper metadata TSV
    #[arg(long)]
    pub metadata: Option<PathBuf>,
    /// Area-to-tag table replacing the built-in one
    #[arg(long)]
    pub area_map: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TopicArgs {
    /// Comma-separated topic keywords
    #[arg(long, value_delimiter = ',')]
    pub keywords: Vec<String>,
    /// Text field searched for keywords
    #[arg(long, value_enum, default_value_t = Field::Title)]
    pub field: Field,
    /// Keep only topic papers carrying this broad-area tag
    #[arg(long)]
    pub area: Option<Tag>,
    /// Match whole words instead of substrings
    #[arg(long)]
    pub exact_word: bool,
    /// Minimum topic citations for a source to become a seed
    #[arg(long, default_value_t = 5)]
    pub threshold: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SweepFlags {
    /// Teleportation constant
    #[arg(long, default_value_t = seedclust::ppr::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Half-width of the local-minimum window
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Smallest cluster size considered
    #[arg(long, default_value_t = DEFAULT_N_MIN)]
    pub nmin: usize,
    /// Largest cluster size considered
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    /// Rows written to ranking.csv
    #[arg(long, default_value_t = 1000)]
    pub ranking_limit: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub topic: TopicArgs,
    #[command(flatten)]
    pub sweep: SweepFlags,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Comma-separated seed source ids; replaces keyword seeding
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<usize>,
    #[command(flatten)]
    pub topic: TopicArgs,
    #[command(flatten)]
    pub sweep: SweepFlags,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    edges: &'a PathBuf,
    metadata: Option<&'a PathBuf>,
    area_map: Option<&'a PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seeds: Option<&'a [usize]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    keywords: Option<&'a [String]>,
    field: Field,
    area: Option<Tag>,
    exact_word: bool,
    threshold: u64,
    alpha: f64,
    tol: f64,
    max_iter: usize,
    window: usize,
    n_min: usize,
    n_max: usize,
}

struct Loaded {
    corpus: CitationCorpus,
    areas: AreaMap,
    graph: SparseGraph,
}

fn load(args: &CorpusArgs) -> Result<Loaded> {
    let Some(edges) = &args.edges else {
        bail!("--edges is required");
    };
    let corpus = load_corpus(edges, args.metadata.as_deref())?;
    let areas = match &args.area_map {
        Some(path) => AreaMap::load(path)?,
        None => AreaMap::default(),
    };
    let graph = source_network(&corpus);
    log::info!(
        "{} papers, {} sources, {} source-network edges",
        corpus.len(),
        corpus.n_sources(),
        graph.edge_count()
    );
    Ok(Loaded { corpus, areas, graph })
}

fn validate(flags: &SweepFlags) -> Result<PprOptions> {
    let opts = PprOptions::with_alpha(flags.alpha);
    opts.validate()?;
    if flags.window == 0 {
        return Err(Error::param("window", "must be at least 1").into());
    }
    if flags.nmin == 0 || flags.nmin >= flags.nmax {
        return Err(Error::param("nmin", format!("need 1 <= nmin < nmax, got {} and {}", flags.nmin, flags.nmax)).into());
    }
    Ok(opts)
}

struct Seeding {
    topic: BTreeSet<usize>,
    counts: Vec<u64>,
    pref: PreferenceVector,
}

/// Topic papers, their citation counts over sources, and the seed vector.
fn topic_seeds(data: &Loaded, topic: &TopicArgs) -> Result<Seeding> {
    let query = TopicQuery {
        keywords: topic.keywords.clone(),
        field: topic.field.into(),
        area_filter: topic.area,
        exact_word: topic.exact_word,
    };
    let selected = select_topic_papers(&data.corpus, &query, &data.areas)?;
    if selected.is_empty() {
        return Err(Failure::NoTopicPapers(topic.keywords.clone()).into());
    }
    let counts = citation_counts(&data.corpus, &selected)?;
    let mut usable = counts.clone();
    let mut dropped = 0;
    for (v, c) in usable.iter_mut().enumerate() {
        if *c >= topic.threshold && *c > 0 && data.graph.degree(v) == 0 {
            *c = 0;
            dropped += 1;
        }
    }
    if dropped > 0 {
        log::warn!("{dropped} qualifying sources have no links in the source network and were not seeded");
    }
    let pref = build_preference(&usable, topic.threshold)?;
    Ok(Seeding {
        topic: selected,
        counts,
        pref,
    })
}

fn rank(data: &Loaded, pref: &PreferenceVector, opts: &PprOptions) -> Result<ApprRanking> {
    let p = solve_ppr(&data.graph, pref, opts)?;
    log::info!("PageRank converged in {} iterations", p.iterations);
    Ok(adjust_and_rank(&data.graph, &p))
}

#[derive(Serialize)]
struct Member<'a> {
    rank: usize,
    id: usize,
    score: f64,
    degree: usize,
    topic_citations: u64,
    year: Option<i32>,
    venue: &'a str,
    title: &'a str,
}

#[derive(Serialize)]
struct ClusterFile<'a> {
    topic_papers: usize,
    seeds: Vec<usize>,
    cutoff: usize,
    phi: f64,
    members: Vec<Member<'a>>,
}

#[derive(Serialize)]
struct StatsFile {
    cluster: SubgraphStats,
    network: SubgraphStats,
}

#[derive(Serialize)]
struct KeywordRow<'a> {
    keyword: &'a str,
    count: usize,
}

pub fn run_cluster(args: &ClusterArgs) -> Result<()> {
    let opts = validate(&args.sweep)?;
    let data = load(&args.corpus)?;
    let seeding = topic_seeds(&data, &args.topic)?;
    let ranking = rank(&data, &seeding.pref, &opts)?;
    let n_max = args.sweep.nmax.min(sweep_limit(&data.graph, &ranking));
    let config = RunConfig {
        command: "cluster",
        edges: args.corpus.edges.as_ref().expect("checked in load"),
        metadata: args.corpus.metadata.as_ref(),
        area_map: args.corpus.area_map.as_ref(),
        seeds: None,
        keywords: Some(&args.topic.keywords),
        field: args.topic.field,
        area: args.topic.area,
        exact_word: args.topic.exact_word,
        threshold: args.topic.threshold,
        alpha: opts.alpha,
        tol: opts.tol,
        max_iter: opts.max_iter,
        window: args.sweep.window,
        n_min: args.sweep.nmin,
        n_max,
    };

    let out = &args.common.out;
    ensure_dir(out)?;
    write_csv(&out.join("ranking.csv"), &config, |w| {
        Ok(write_ranking_csv(w, &data.graph, &ranking, args.sweep.ranking_limit)?)
    })?;
    if n_max <= args.sweep.nmin {
        return Err(Error::NoLocalMinimum {
            n_min: args.sweep.nmin,
            n_max,
        }
        .into());
    }
    let curve = sweep(&data.graph, &ranking, n_max)?;
    write_csv(&out.join("curve.csv"), &config, |w| Ok(write_curve_csv(w, &curve)?))?;
    let cutoff = first_local_min(&curve, args.sweep.window, args.sweep.nmin, n_max)
        .context("curve.csv holds the conductance values that were searched")?;

    let members: Vec<usize> = ranking.order[..cutoff].to_vec();
    let papers = data.corpus.papers();
    let cluster = ClusterFile {
        topic_papers: seeding.topic.len(),
        seeds: seeding.pref.seeds().collect(),
        cutoff,
        phi: curve.phi(cutoff),
        members: members
            .iter()
            .enumerate()
            .map(|(r, &v)| Member {
                rank: r + 1,
                id: v,
                score: ranking.scores[v],
                degree: data.graph.degree(v),
                topic_citations: seeding.counts[v],
                year: papers[v].year,
                venue: &papers[v].venue,
                title: &papers[v].title,
            })
            .collect(),
    };
    write_json(&out.join("cluster.json"), &config, &cluster)?;

    let all: Vec<usize> = (0..data.graph.node_count()).collect();
    let stats = StatsFile {
        cluster: subgraph_stats(&data.graph, &members)?,
        network: subgraph_stats(&data.graph, &all)?,
    };
    write_json(&out.join("stats.json"), &config, &stats)?;

    let mut keywords: Vec<(String, usize)> = keyword_counts(&data.corpus, &members).into_iter().collect();
    keywords.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    write_csv(&out.join("keywords.csv"), &config, |w| {
        rows(w, keywords.iter().map(|(k, c)| KeywordRow { keyword: k, count: *c }))
    })?;

    println!(
        "{} topic papers, {} seeds, cluster of {} at phi = {:.4}; results in {}",
        cluster.topic_papers,
        cluster.seeds.len(),
        cutoff,
        cluster.phi,
        out.display()
    );
    Ok(())
}

pub fn run_sweep(args: &SweepArgs) -> Result<()> {
    let opts = validate(&args.sweep)?;
    let data = load(&args.corpus)?;
    let pref = if args.seeds.is_empty() {
        topic_seeds(&data, &args.topic)?.pref
    } else {
        uniform_seeds(&args.seeds)?
    };
    let ranking = rank(&data, &pref, &opts)?;
    let n_max = args.sweep.nmax.min(sweep_limit(&data.graph, &ranking));
    let use_topic = args.seeds.is_empty();
    let config = RunConfig {
        command: "sweep",
        edges: args.corpus.edges.as_ref().expect("checked in load"),
        metadata: args.corpus.metadata.as_ref(),
        area_map: args.corpus.area_map.as_ref(),
        seeds: (!use_topic).then_some(args.seeds.as_slice()),
        keywords: use_topic.then_some(args.topic.keywords.as_slice()),
        field: args.topic.field,
        area: args.topic.area,
        exact_word: args.topic.exact_word,
        threshold: args.topic.threshold,
        alpha: opts.alpha,
        tol: opts.tol,
        max_iter: opts.max_iter,
        window: args.sweep.window,
        n_min: args.sweep.nmin,
        n_max,
    };
    let out = &args.common.out;
    ensure_dir(out)?;
    write_csv(&out.join("ranking.csv"), &config, |w| {
        Ok(write_ranking_csv(w, &data.graph, &ranking, args.sweep.ranking_limit)?)
    })?;
    if n_max == 0 {
        bail!("no node with positive score fits under half the total volume");
    }
    let curve = sweep(&data.graph, &ranking, n_max)?;
    write_csv(&out.join("curve.csv"), &config, |w| Ok(write_curve_csv(w, &curve)?))?;
    let found = if n_max > args.sweep.nmin {
        first_local_min(&curve, args.sweep.window, args.sweep.nmin, n_max).ok()
    } else {
        None
    };
    match found {
        Some(n) => println!("{n_max} prefixes swept; first local minimum at n = {n}, phi = {:.4}", curve.phi(n)),
        None => println!("{n_max} prefixes swept; no local minimum in [{}, {n_max}]", args.sweep.nmin),
    }
    Ok(())
}
