//! Bibliographic records, citation edges and the source-paper network.
//!
//! Edge files are headerless CSV, one `citing_id,source_id` pair per line.
//! Metadata files are TSV with the column order
//! `id kind year venue title abstract keywords categories areas`, where the
//! list columns are `;`-separated. Trailing columns may be omitted. In both
//! formats blank lines and lines starting with `#` are skipped.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::biblio::{classify, AreaMap, Tag};
use crate::error::{Error, Result};
use crate::graph::SparseGraph;

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PaperKind {
    Source,
    Citing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperRecord {
    pub id: usize,
    pub kind: PaperKind,
    pub year: Option<i32>,
    pub venue: String,
    pub title: String,
    pub abstract_text: String,
    pub keywords: Vec<String>,
    pub categories: Vec<String>,
    pub areas: Vec<String>,
}

impl PaperRecord {
    /// A record with no metadata beyond its id and kind.
    pub fn bare(id: usize, kind: PaperKind) -> Self {
        PaperRecord {
            id,
            kind,
            year: None,
            venue: String::new(),
            title: String::new(),
            abstract_text: String::new(),
            keywords: Vec::new(),
            categories: Vec::new(),
            areas: Vec::new(),
        }
    }
}

/// Papers indexed by id plus the deduplicated `citing -> source` edge set.
///
/// Source papers occupy ids `0..n_sources`; everything above is a citing
/// paper. Edges are kept sorted by `(citing, source)`.
#[derive(Debug, Clone)]
pub struct CitationCorpus {
    papers: Vec<PaperRecord>,
    edges: Vec<(usize, usize)>,
    n_sources: usize,
    duplicate_edges: usize,
}

impl CitationCorpus {
    pub fn new(papers: Vec<PaperRecord>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n_sources = papers
            .iter()
            .take_while(|p| p.kind == PaperKind::Source)
            .count();
        for (i, p) in papers.iter().enumerate() {
            if p.id != i {
                return Err(Error::Validation(format!(
                    "paper at position {i} has id {}; ids must be 0..n in order",
                    p.id
                )));
            }
            if i >= n_sources && p.kind == PaperKind::Source {
                return Err(Error::Validation(format!(
                    "source paper {i} lies outside the source prefix 0..{n_sources}"
                )));
            }
            if let Some(y) = p.year {
                if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                    return Err(Error::Validation(format!("paper {i} has year {y}")));
                }
            }
        }

        let mut edges = edges;
        for &(citing, source) in &edges {
            if citing == source {
                return Err(Error::Validation(format!("self-citation ({citing},{source})")));
            }
            if citing >= papers.len() {
                return Err(Error::Validation(format!("edge references unknown paper {citing}")));
            }
            if source >= n_sources {
                return Err(Error::Validation(format!(
                    "edge ({citing},{source}) targets a paper that is not a source"
                )));
            }
        }
        let before = edges.len();
        edges.sort_unstable();
        edges.dedup();
        let duplicate_edges = before - edges.len();
        if duplicate_edges > 0 {
            log::warn!("collapsed {duplicate_edges} duplicate citation edges");
        }

        Ok(CitationCorpus {
            papers,
            edges,
            n_sources,
            duplicate_edges,
        })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn paper(&self, id: usize) -> Option<&PaperRecord> {
        self.papers.get(id)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Number of input edges dropped as duplicates.
    pub fn duplicate_edges(&self) -> usize {
        self.duplicate_edges
    }

    pub fn sources(&self) -> &[PaperRecord] {
        &self.papers[..self.n_sources]
    }

    /// Distinct venues of source papers, sorted.
    pub fn source_venues(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .sources()
            .iter()
            .map(|p| p.venue.as_str())
            .filter(|v| !v.is_empty())
            .collect();
        set.into_iter().map(str::to_owned).collect()
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn parse_edges(path: &Path, text: &str) -> Result<Vec<(usize, usize)>> {
    let err = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut edges = Vec::new();
    for (line, raw) in content_lines(text) {
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(err(line, format!("expected `citing_id,source_id`, got `{raw}`")));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line, format!("`{s}` is not a nonnegative integer id")))
        };
        edges.push((parse(fields[0])?, parse(fields[1])?));
    }
    Ok(edges)
}

fn split_list(field: &str) -> Vec<String> {
    let field = field.trim();
    if field.is_empty() || field == "NA" {
        return Vec::new();
    }
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

struct MetadataRow {
    record: PaperRecord,
    explicit_kind: Option<PaperKind>,
}

fn parse_metadata(path: &Path, text: &str) -> Result<Vec<MetadataRow>> {
    let err = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rows = Vec::new();
    for (line, raw) in content_lines(text) {
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() > 9 {
            return Err(err(line, format!("expected at most 9 columns, got {}", cols.len())));
        }
        let col = |i: usize| cols.get(i).copied().unwrap_or("").trim();
        let id = col(0)
            .parse::<usize>()
            .map_err(|_| err(line, format!("`{}` is not a nonnegative integer id", col(0))))?;
        let explicit_kind = match col(1).to_ascii_lowercase().as_str() {
            "" => None,
            "source" => Some(PaperKind::Source),
            "citing" => Some(PaperKind::Citing),
            other => return Err(err(line, format!("unknown kind `{other}`"))),
        };
        let year = match col(2) {
            "" | "NA" => None,
            y => {
                let y = y
                    .parse::<i32>()
                    .map_err(|_| err(line, format!("`{y}` is not a year")))?;
                if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                    return Err(err(line, format!("year {y} outside {MIN_YEAR}..={MAX_YEAR}")));
                }
                Some(y)
            }
        };
        rows.push(MetadataRow {
            record: PaperRecord {
                id,
                kind: explicit_kind.unwrap_or(PaperKind::Citing),
                year,
                venue: col(3).to_owned(),
                title: col(4).to_owned(),
                abstract_text: col(5).to_owned(),
                keywords: split_list(col(6)),
                categories: split_list(col(7)),
                areas: split_list(col(8)),
            },
            explicit_kind,
        });
    }
    Ok(rows)
}

/// Loads a corpus from an edge CSV and an optional metadata TSV.
///
/// Papers without an explicit kind are sources when they appear as a citation
/// target or sit below the highest source id; all others are citing papers.
/// When metadata is given, every id used by an edge must have a metadata row.
pub fn load_corpus(edge_file: &Path, metadata_file: Option<&Path>) -> Result<CitationCorpus> {
    let edges = parse_edges(edge_file, &read_to_string(edge_file)?)?;
    let rows = match metadata_file {
        Some(path) => Some(parse_metadata(path, &read_to_string(path)?)?),
        None => None,
    };
    assemble(edges, rows)
}

fn assemble(edges: Vec<(usize, usize)>, rows: Option<Vec<MetadataRow>>) -> Result<CitationCorpus> {
    let mut by_id: BTreeMap<usize, MetadataRow> = BTreeMap::new();
    if let Some(rows) = rows {
        for row in rows {
            let id = row.record.id;
            if by_id.insert(id, row).is_some() {
                return Err(Error::Validation(format!("duplicate metadata row for id {id}")));
            }
        }
        for &(c, s) in &edges {
            for id in [c, s] {
                if !by_id.contains_key(&id) {
                    return Err(Error::Validation(format!(
                        "edge ({c},{s}) references id {id} with no metadata row"
                    )));
                }
            }
        }
    }

    let max_id = edges
        .iter()
        .flat_map(|&(c, s)| [c, s])
        .chain(by_id.keys().copied())
        .max();
    let Some(max_id) = max_id else {
        return CitationCorpus::new(Vec::new(), Vec::new());
    };

    let explicit = |id: usize| by_id.get(&id).and_then(|r| r.explicit_kind);
    let mut source_end = 0usize;
    for &(c, s) in &edges {
        if c == s {
            return Err(Error::Validation(format!("self-citation ({c},{s})")));
        }
        if explicit(s) == Some(PaperKind::Citing) {
            return Err(Error::Validation(format!(
                "edge ({c},{s}) targets paper {s}, which is declared citing"
            )));
        }
        source_end = source_end.max(s + 1);
    }
    for (&id, row) in &by_id {
        if row.explicit_kind == Some(PaperKind::Source) {
            source_end = source_end.max(id + 1);
        }
    }

    let kinds: Vec<Option<PaperKind>> = (0..=max_id).map(explicit).collect();
    let mut papers = Vec::with_capacity(max_id + 1);
    for id in 0..=max_id {
        let kind = match kinds[id] {
            Some(PaperKind::Citing) if id < source_end => {
                return Err(Error::Validation(format!(
                    "paper {id} is declared citing but lies inside the source id range 0..{source_end}"
                )))
            }
            Some(kind) => kind,
            None if id < source_end => PaperKind::Source,
            None => PaperKind::Citing,
        };
        let mut record = match by_id.remove(&id) {
            Some(row) => row.record,
            None => PaperRecord::bare(id, kind),
        };
        record.kind = kind;
        papers.push(record);
    }
    CitationCorpus::new(papers, edges)
}

/// Undirected network over the source papers: `{i, j}` is an edge when
/// either cites the other.
pub fn source_network(corpus: &CitationCorpus) -> SparseGraph {
    let n = corpus.n_sources();
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(citing, source) in corpus.edges() {
        if citing < n {
            lists[citing].push(source as u32);
            lists[source].push(citing as u32);
        }
    }
    SparseGraph::from_lists(lists)
}

/// For every source paper, the number of papers in `topic` citing it.
pub fn citation_counts(corpus: &CitationCorpus, topic: &BTreeSet<usize>) -> Result<Vec<u64>> {
    let mut in_topic = vec![false; corpus.len()];
    for &id in topic {
        if id >= corpus.len() {
            return Err(Error::UnknownNode(id));
        }
        in_topic[id] = true;
    }
    let mut counts = vec![0u64; corpus.n_sources()];
    for &(citing, source) in corpus.edges() {
        if in_topic[citing] {
            counts[source] += 1;
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextField {
    Title,
    Abstract,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopicQuery {
    pub keywords: Vec<String>,
    pub field: TextField,
    /// Keep only papers carrying this broad-area label.
    pub area_filter: Option<Tag>,
    /// Match whole words instead of substrings.
    pub exact_word: bool,
}

fn word_normalize(text: &str) -> String {
    let mut out = String::from(" ");
    for word in text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        out.push_str(&word.to_lowercase());
        out.push(' ');
    }
    out
}

fn text_matches(text: &str, keyword: &str, exact_word: bool) -> bool {
    if exact_word {
        let kw = word_normalize(keyword);
        kw.trim() != "" && word_normalize(text).contains(&kw)
    } else {
        let kw = keyword.trim().to_lowercase();
        !kw.is_empty() && text.to_lowercase().contains(&kw)
    }
}

/// Citing papers whose chosen text field contains any of the keywords.
pub fn select_topic_papers(
    corpus: &CitationCorpus,
    query: &TopicQuery,
    areas: &AreaMap,
) -> Result<BTreeSet<usize>> {
    if query.keywords.iter().all(|k| k.trim().is_empty()) {
        return Err(Error::param("keywords", "at least one keyword is required"));
    }
    let selected = corpus.papers()[corpus.n_sources()..]
        .iter()
        .filter(|p| {
            let text = match query.field {
                TextField::Title => &p.title,
                TextField::Abstract => &p.abstract_text,
            };
            query
                .keywords
                .iter()
                .any(|k| text_matches(text, k, query.exact_word))
        })
        .filter(|p| match query.area_filter {
            None => true,
            Some(tag) => classify(p, areas, false).iter().any(|l| l.tag == tag),
        })
        .map(|p| p.id)
        .collect();
    Ok(selected)
}

/// Case-folded author keyword frequencies over `nodes`.
pub fn keyword_counts(corpus: &CitationCorpus, nodes: &[usize]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for p in nodes.iter().filter_map(|&id| corpus.paper(id)) {
        for kw in &p.keywords {
            let kw = kw.trim().to_lowercase();
            if !kw.is_empty() {
                *counts.entry(kw).or_insert(0) += 1;
            }
        }
    }
    counts
}
