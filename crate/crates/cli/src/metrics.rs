//! `metrics`: plot data for citation trends, field mixes and rank comparisons.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use seedclust::biblio::{
    classify_all, fractional_breakdown, gini_concentration, lorenz, normalized_trend, proportions, rank_compare,
    rank_outliers, AreaMap, CountUnit, Normalization, Tag, DEFAULT_LORENZ_STEPS,
};
use seedclust::{load_corpus, CitationCorpus, Error};

use crate::output::{ensure_dir, rows, write_csv};
use crate::CommonArgs;

pub const ALL_JOURNALS: &str = "ALL";

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    /// Each citation counts once
    Citations,
    /// Each citing paper counts once
    Papers,
}

#[derive(Args, Debug, Clone)]
pub struct MetricsArgs {
    /// Citation edges, one `citing_id,source_id` pair per line
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Paper metadata TSV with years and venues
    #[arg(long)]
    pub metadata: Option<PathBuf>,
    /// Area-to-tag table replacing the built-in one
    #[arg(long)]
    pub area_map: Option<PathBuf>,
    /// Comma-separated source venues; every venue when absent
    #[arg(long, value_delimiter = ',')]
    pub journals: Vec<String>,
    /// Year range as `FIRST-LAST`; the span of the data when absent
    #[arg(long)]
    pub years: Option<String>,
    /// Keep BE and CS apart from SOC and TECH
    #[arg(long)]
    pub carve_out: bool,
    /// What a unit of the field breakdown counts
    #[arg(long, value_enum, default_value_t = Unit::Citations)]
    pub unit: Unit,
    /// Grid steps of the Lorenz curves
    #[arg(long, default_value_t = DEFAULT_LORENZ_STEPS)]
    pub steps: usize,
    /// Size of the top lists scanned for rank outliers
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    edges: &'a PathBuf,
    metadata: &'a PathBuf,
    area_map: Option<&'a PathBuf>,
    journals: &'a [String],
    first_year: i32,
    last_year: i32,
    carve_out: bool,
    unit: Unit,
    steps: usize,
    top: usize,
}

fn parse_years(text: &str) -> Result<RangeInclusive<i32>> {
    let (a, b) = text
        .split_once('-')
        .with_context(|| format!("--years expects FIRST-LAST, got `{text}`"))?;
    let a: i32 = a.trim().parse().with_context(|| format!("bad year `{a}`"))?;
    let b: i32 = b.trim().parse().with_context(|| format!("bad year `{b}`"))?;
    if a > b {
        return Err(Error::param("years", format!("{a} is after {b}")).into());
    }
    Ok(a..=b)
}

fn data_years(corpus: &CitationCorpus) -> Result<RangeInclusive<i32>> {
    let years: BTreeSet<i32> = corpus.papers().iter().filter_map(|p| p.year).collect();
    match (years.first(), years.last()) {
        (Some(&a), Some(&b)) => Ok(a..=b),
        _ => Err(Error::Validation("no paper has a publication year; the metadata year column is required".into()).into()),
    }
}

#[derive(Serialize)]
struct TrendRow<'a> {
    journal: &'a str,
    year: i32,
    citations: f64,
    normalized: f64,
}

#[derive(Serialize)]
struct LorenzRow<'a> {
    journal: &'a str,
    p: f64,
    share: f64,
}

#[derive(Serialize)]
struct BreakdownRow<'a> {
    journal: &'a str,
    year: i32,
    tag: Tag,
    weight: f64,
    proportion: f64,
}

#[derive(Serialize)]
struct GiniRow<'a> {
    journal: &'a str,
    /// A year, or `all` for the pooled period.
    year: String,
    gini: f64,
}

#[derive(Serialize)]
struct RankRowOut<'a> {
    source: usize,
    venue: &'a str,
    year: Option<i32>,
    title: &'a str,
    internal: u64,
    external: u64,
    total: u64,
    internal_rank: usize,
    external_rank: usize,
}

pub fn run(args: &MetricsArgs) -> Result<()> {
    let (Some(edges), Some(metadata)) = (&args.edges, &args.metadata) else {
        bail!("--edges and --metadata are required");
    };
    let corpus = load_corpus(edges, Some(metadata))?;
    let areas = match &args.area_map {
        Some(path) => AreaMap::load(path)?,
        None => AreaMap::default(),
    };
    let span = data_years(&corpus)?;
    let years = match &args.years {
        Some(text) => parse_years(text)?,
        None => span,
    };
    let journals: Vec<String> = if args.journals.is_empty() {
        corpus
            .sources()
            .iter()
            .map(|p| p.venue.trim())
            .filter(|v| !v.is_empty())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_owned)
            .collect()
    } else {
        args.journals.iter().map(|j| j.trim().to_owned()).collect()
    };
    if journals.is_empty() {
        bail!("no source venues found; pass --journals or fill the venue column");
    }
    if args.steps == 0 {
        return Err(Error::param("steps", "must be positive").into());
    }

    let config = RunConfig {
        command: "metrics",
        edges,
        metadata,
        area_map: args.area_map.as_ref(),
        journals: &journals,
        first_year: *years.start(),
        last_year: *years.end(),
        carve_out: args.carve_out,
        unit: args.unit,
        steps: args.steps,
        top: args.top,
    };
    let out = &args.common.out;
    ensure_dir(out)?;

    let mut trends = Vec::new();
    for j in &journals {
        let raw = normalized_trend(&corpus, j, years.clone(), Normalization::Raw)?;
        let norm = normalized_trend(&corpus, j, years.clone(), Normalization::PerCumulativePublication)?;
        for (&year, &citations) in &raw.values {
            trends.push(TrendRow {
                journal: j,
                year,
                citations,
                normalized: norm.values[&year],
            });
        }
    }
    write_csv(&out.join("trends.csv"), &config, |w| rows(w, trends))?;

    let mut received = vec![0i64; corpus.n_sources()];
    for &(citing, source) in corpus.edges() {
        if corpus.papers()[citing].year.is_some_and(|y| years.contains(&y)) {
            received[source] += 1;
        }
    }
    let in_journal = |j: &str| -> Vec<bool> {
        corpus
            .sources()
            .iter()
            .map(|p| j == ALL_JOURNALS || p.venue.trim().eq_ignore_ascii_case(j))
            .collect()
    };
    let scopes: Vec<&str> = journals.iter().map(String::as_str).chain([ALL_JOURNALS]).collect();

    let mut lorenz_rows = Vec::new();
    for &j in &scopes {
        let mask = in_journal(j);
        let counts: Vec<i64> = (0..corpus.n_sources()).filter(|&i| mask[i]).map(|i| received[i]).collect();
        if counts.is_empty() {
            continue;
        }
        for pt in lorenz(&counts, args.steps)?.points {
            lorenz_rows.push(LorenzRow {
                journal: j,
                p: pt.p,
                share: pt.share,
            });
        }
    }
    write_csv(&out.join("lorenz.csv"), &config, |w| rows(w, lorenz_rows))?;

    let labels = classify_all(&corpus, &areas, args.carve_out);
    let mut breakdown_rows = Vec::new();
    let mut gini_rows = Vec::new();
    for &j in &scopes {
        let mask = in_journal(j);
        let unit = match args.unit {
            Unit::Citations => CountUnit::Citations { sources: Some(&mask) },
            Unit::Papers => {
                if j != ALL_JOURNALS {
                    continue;
                }
                CountUnit::CitingPapers
            }
        };
        let table = fractional_breakdown(&corpus, &labels, unit);
        let mut pooled: BTreeMap<Tag, f64> = BTreeMap::new();
        for (&year, row) in table.range(years.clone()) {
            let shares = proportions(row);
            for (&tag, &weight) in row {
                breakdown_rows.push(BreakdownRow {
                    journal: j,
                    year,
                    tag,
                    weight,
                    proportion: shares.get(&tag).copied().unwrap_or(0.0),
                });
                *pooled.entry(tag).or_insert(0.0) += weight;
            }
            if !shares.is_empty() {
                gini_rows.push(GiniRow {
                    journal: j,
                    year: year.to_string(),
                    gini: gini_concentration(&shares)?,
                });
            }
        }
        let shares = proportions(&pooled);
        if !shares.is_empty() {
            gini_rows.push(GiniRow {
                journal: j,
                year: "all".into(),
                gini: gini_concentration(&shares)?,
            });
        }
    }
    write_csv(&out.join("breakdown.csv"), &config, |w| rows(w, breakdown_rows))?;
    write_csv(&out.join("gini.csv"), &config, |w| rows(w, gini_rows))?;

    let ranks = rank_compare(&corpus, &labels);
    let to_out = |r: &seedclust::biblio::RankRow| {
        let p = &corpus.papers()[r.source];
        RankRowOut {
            source: r.source,
            venue: &p.venue,
            year: p.year,
            title: &p.title,
            internal: r.internal,
            external: r.external,
            total: r.total,
            internal_rank: r.internal_rank,
            external_rank: r.external_rank,
        }
    };
    write_csv(&out.join("ranks.csv"), &config, |w| rows(w, ranks.iter().map(to_out)))?;
    let outliers = rank_outliers(&ranks, args.top);
    write_csv(&out.join("outliers.csv"), &config, |w| rows(w, outliers.iter().map(to_out)))?;

    println!(
        "{} journals over {}-{}; plot data in {}",
        journals.len(),
        years.start(),
        years.end(),
        out.display()
    );
    Ok(())
}
