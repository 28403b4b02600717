//! Descriptive bibliometrics over a citation corpus.
//!
//! Citing papers are split into internal (statistics or mathematics) and
//! external papers. Internal papers carry `STATS` when any WoS category is
//! exactly "Statistics & Probability" and `MATH` when a category mentions
//! "math". External papers are labeled by research area through an
//! [`AreaMap`], one label per listed area.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::{CitationCorpus, PaperKind, PaperRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Internal,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Stats,
    Math,
    Art,
    Bio,
    Phy,
    Soc,
    Tech,
    Be,
    Cs,
    Na,
}

impl Tag {
    pub const ALL: [Tag; 10] = [
        Tag::Stats,
        Tag::Math,
        Tag::Art,
        Tag::Bio,
        Tag::Phy,
        Tag::Soc,
        Tag::Tech,
        Tag::Be,
        Tag::Cs,
        Tag::Na,
    ];

    pub fn side(self) -> Side {
        match self {
            Tag::Stats | Tag::Math => Side::Internal,
            _ => Side::External,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Stats => "STATS",
            Tag::Math => "MATH",
            Tag::Art => "ART",
            Tag::Bio => "BIO",
            Tag::Phy => "PHY",
            Tag::Soc => "SOC",
            Tag::Tech => "TECH",
            Tag::Be => "BE",
            Tag::Cs => "CS",
            Tag::Na => "NA",
        }
    }

    /// The broad area a carve-out tag belongs to.
    fn folded(self) -> Tag {
        match self {
            Tag::Be => Tag::Soc,
            Tag::Cs => Tag::Tech,
            t => t,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown tag `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassLabel {
    pub side: Side,
    pub tag: Tag,
}

impl From<Tag> for ClassLabel {
    fn from(tag: Tag) -> Self {
        ClassLabel {
            side: tag.side(),
            tag,
        }
    }
}

/// WoS research areas grouped into broad tags. `BE` and `CS` are carve-outs
/// of `SOC` and `TECH`.
pub const DEFAULT_AREA_MAP: &str = include_str!("area_map.tsv");

/// Research-area to tag lookup, loaded from a two-column `pattern<TAB>tag`
/// table. Patterns compare case-insensitively; a trailing `*` matches any
/// area with that prefix.
#[derive(Debug, Clone)]
pub struct AreaMap {
    exact: HashMap<String, Tag>,
    prefixes: Vec<(String, Tag)>,
}

impl Default for AreaMap {
    fn default() -> Self {
        AreaMap::parse(DEFAULT_AREA_MAP).expect("built-in area map parses")
    }
}

impl AreaMap {
    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut exact = HashMap::new();
        let mut prefixes = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (pattern, tag) = line
                .split_once('\t')
                .ok_or_else(|| (i + 1, format!("expected `pattern<TAB>tag`, got `{line}`")))?;
            let tag: Tag = tag.parse().map_err(|e| (i + 1, e))?;
            let pattern = pattern.trim().to_lowercase();
            match pattern.strip_suffix('*') {
                Some(prefix) => prefixes.push((prefix.to_owned(), tag)),
                None => {
                    exact.insert(pattern, tag);
                }
            }
        }
        Ok(AreaMap { exact, prefixes })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        AreaMap::parse(&text).map_err(|(line, message)| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    pub fn lookup(&self, area: &str) -> Option<Tag> {
        let key = area.trim().to_lowercase();
        self.exact.get(&key).copied().or_else(|| {
            self.prefixes
                .iter()
                .filter(|(p, _)| key.starts_with(p.as_str()))
                .max_by_key(|(p, _)| p.len())
                .map(|&(_, t)| t)
        })
    }
}

const STATS_CATEGORY: &str = "statistics & probability";

/// Labels for one paper, sorted. With `carve_out` off, `BE` and `CS` fold
/// back into `SOC` and `TECH`.
pub fn classify(record: &PaperRecord, areas: &AreaMap, carve_out: bool) -> Vec<ClassLabel> {
    let categories = record.categories.iter().map(|c| c.trim().to_lowercase());
    let mut math = false;
    for c in categories {
        if c == STATS_CATEGORY {
            return vec![Tag::Stats.into()];
        }
        math |= c.contains("math");
    }
    if math {
        return vec![Tag::Math.into()];
    }
    if record.areas.is_empty() {
        return vec![Tag::Na.into()];
    }
    let mut labels: Vec<ClassLabel> = record
        .areas
        .iter()
        .map(|a| match areas.lookup(a) {
            Some(t) if carve_out => t,
            Some(t) => t.folded(),
            None => {
                log::warn!("research area `{a}` of paper {} not in area map", record.id);
                Tag::Na
            }
        })
        .map(ClassLabel::from)
        .collect();
    labels.sort();
    labels
}

/// Labels for every paper of the corpus, indexed by id.
pub fn classify_all(corpus: &CitationCorpus, areas: &AreaMap, carve_out: bool) -> Vec<Vec<ClassLabel>> {
    corpus
        .papers()
        .iter()
        .map(|p| classify(p, areas, carve_out))
        .collect()
}

pub fn is_internal(labels: &[ClassLabel]) -> bool {
    labels.iter().any(|l| l.side == Side::Internal)
}

/// What one unit of mass in [`fractional_breakdown`] stands for.
#[derive(Debug, Clone, Copy)]
pub enum CountUnit<'a> {
    /// Each citing paper with a year counts once.
    CitingPapers,
    /// Each citation edge counts once, in the citing paper's year. When
    /// `sources` is given only citations to flagged source papers count.
    Citations { sources: Option<&'a [bool]> },
}

pub type Breakdown = BTreeMap<i32, BTreeMap<Tag, f64>>;

/// Year by tag totals where an item with `k` labels adds `1/k` to each.
pub fn fractional_breakdown(
    corpus: &CitationCorpus,
    labels: &[Vec<ClassLabel>],
    unit: CountUnit<'_>,
) -> Breakdown {
    let mut out: Breakdown = BTreeMap::new();
    let mut add = |paper: &PaperRecord| {
        let (Some(year), Some(ls)) = (paper.year, labels.get(paper.id)) else {
            return;
        };
        if ls.is_empty() {
            return;
        }
        let w = 1.0 / ls.len() as f64;
        let row = out.entry(year).or_default();
        for l in ls {
            *row.entry(l.tag).or_insert(0.0) += w;
        }
    };
    match unit {
        CountUnit::CitingPapers => corpus
            .papers()
            .iter()
            .filter(|p| p.kind == PaperKind::Citing)
            .for_each(&mut add),
        CountUnit::Citations { sources } => {
            for &(citing, source) in corpus.edges() {
                if sources.is_none_or(|s| s.get(source).copied().unwrap_or(false)) {
                    add(&corpus.papers()[citing]);
                }
            }
        }
    }
    out
}

/// Normalizes one breakdown row to proportions.
pub fn proportions(row: &BTreeMap<Tag, f64>) -> BTreeMap<Tag, f64> {
    let total: f64 = row.values().sum();
    if total <= 0.0 {
        return BTreeMap::new();
    }
    row.iter().map(|(&t, &v)| (t, v / total)).collect()
}

/// `100 * sum(s_i^2)` with `STATS` and `MATH` merged into one internal share.
pub fn gini_concentration(proportions: &BTreeMap<Tag, f64>) -> Result<f64> {
    let total: f64 = proportions.values().sum();
    if (total - 1.0).abs() > 1e-9 || proportions.values().any(|&s| s < 0.0) {
        return Err(Error::NotNormalized(total));
    }
    let mut internal = 0.0;
    let mut sum_sq = 0.0;
    for (&tag, &s) in proportions {
        if tag.side() == Side::Internal {
            internal += s;
        } else {
            sum_sq += s * s;
        }
    }
    Ok(100.0 * (sum_sq + internal * internal))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorenzPoint {
    pub p: f64,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    pub points: Vec<LorenzPoint>,
}

pub const DEFAULT_LORENZ_STEPS: usize = 100;

impl LorenzCurve {
    /// Share at grid position `k` of `steps`.
    pub fn at(&self, k: usize) -> f64 {
        self.points[k].share
    }
}

/// Lorenz curve on the grid `p = k / steps`, `k = 0..=steps`.
///
/// The share at `p` is the citation total of the `floor(p * N)` least-cited
/// papers over the grand total. An all-zero vector yields the identity line.
pub fn lorenz(counts: &[i64], steps: usize) -> Result<LorenzCurve> {
    if counts.is_empty() {
        return Err(Error::param("counts", "empty count vector"));
    }
    if steps == 0 {
        return Err(Error::param("steps", "must be positive"));
    }
    if let Some((index, &value)) = counts.iter().enumerate().find(|(_, &c)| c < 0) {
        return Err(Error::NegativeCount { index, value });
    }
    let mut sorted: Vec<u64> = counts.iter().map(|&c| c as u64).collect();
    sorted.sort_unstable();
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    prefix.push(0u64);
    for &c in &sorted {
        prefix.push(prefix.last().unwrap() + c);
    }
    let n = sorted.len();
    let total = prefix[n];
    let points = (0..=steps)
        .map(|k| {
            let p = k as f64 / steps as f64;
            let share = if total == 0 {
                p
            } else {
                prefix[k * n / steps] as f64 / total as f64
            };
            LorenzPoint { p, share }
        })
        .collect();
    Ok(LorenzCurve { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    Raw,
    PerCumulativePublication,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSeries {
    pub journal: String,
    pub normalization: Normalization,
    pub values: BTreeMap<i32, f64>,
}

/// Citations received per year by a journal's source papers.
///
/// With [`Normalization::PerCumulativePublication`] the year-`T` count is
/// divided by the journal's publications up to and including `T`. Years
/// before the journal's first publication are omitted in both modes.
pub fn normalized_trend(
    corpus: &CitationCorpus,
    journal: &str,
    years: RangeInclusive<i32>,
    normalization: Normalization,
) -> Result<TrendSeries> {
    let in_journal: Vec<bool> = corpus
        .sources()
        .iter()
        .map(|p| p.venue.eq_ignore_ascii_case(journal.trim()))
        .collect();
    if !in_journal.iter().any(|&b| b) {
        return Err(Error::param("journal", format!("no source papers from `{journal}`")));
    }

    let mut published: BTreeMap<i32, u64> = BTreeMap::new();
    for p in corpus.sources().iter().filter(|p| in_journal[p.id]) {
        if let Some(y) = p.year {
            *published.entry(y).or_insert(0) += 1;
        }
    }
    let mut cited: BTreeMap<i32, u64> = BTreeMap::new();
    for &(citing, source) in corpus.edges() {
        if in_journal[source] {
            if let Some(y) = corpus.papers()[citing].year {
                *cited.entry(y).or_insert(0) += 1;
            }
        }
    }

    let mut cumulative: u64 = published.range(..*years.start()).map(|(_, &c)| c).sum();
    let mut values = BTreeMap::new();
    for year in years {
        cumulative += published.get(&year).copied().unwrap_or(0);
        if cumulative == 0 {
            continue;
        }
        let count = cited.get(&year).copied().unwrap_or(0) as f64;
        let value = match normalization {
            Normalization::Raw => count,
            Normalization::PerCumulativePublication => count / cumulative as f64,
        };
        values.insert(year, value);
    }
    Ok(TrendSeries {
        journal: journal.to_owned(),
        normalization,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub source: usize,
    pub internal: u64,
    pub external: u64,
    pub total: u64,
    pub internal_rank: usize,
    pub external_rank: usize,
}

/// Competition ranks (1 = most) for descending counts.
fn competition_ranks(counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; counts.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = if pos > 0 && counts[order[pos - 1]] == counts[i] {
            ranks[order[pos - 1]]
        } else {
            pos + 1
        };
    }
    ranks
}

/// Ranks every source paper by internal and by external citation count.
pub fn rank_compare(corpus: &CitationCorpus, labels: &[Vec<ClassLabel>]) -> Vec<RankRow> {
    let n = corpus.n_sources();
    let mut internal = vec![0u64; n];
    let mut external = vec![0u64; n];
    for &(citing, source) in corpus.edges() {
        let ls = labels.get(citing).map(Vec::as_slice).unwrap_or(&[]);
        if is_internal(ls) {
            internal[source] += 1;
        } else {
            external[source] += 1;
        }
    }
    let ir = competition_ranks(&internal);
    let er = competition_ranks(&external);
    (0..n)
        .map(|i| RankRow {
            source: i,
            internal: internal[i],
            external: external[i],
            total: internal[i] + external[i],
            internal_rank: ir[i],
            external_rank: er[i],
        })
        .collect()
}

/// Papers in the top `k` by either count, largest rank disagreement first.
pub fn rank_outliers(rows: &[RankRow], k: usize) -> Vec<RankRow> {
    let mut top: Vec<RankRow> = rows
        .iter()
        .filter(|r| r.internal_rank <= k || r.external_rank <= k)
        .cloned()
        .collect();
    top.sort_by_key(|r| {
        (
            std::cmp::Reverse(r.internal_rank.abs_diff(r.external_rank)),
            r.source,
        )
    });
    top
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperKind::{Citing, Source};

    fn paper(id: usize, kind: PaperKind, year: i32, cats: &[&str], areas: &[&str]) -> PaperRecord {
        PaperRecord {
            year: Some(year),
            categories: cats.iter().map(|s| s.to_string()).collect(),
            areas: areas.iter().map(|s| s.to_string()).collect(),
            ..PaperRecord::bare(id, kind)
        }
    }

    fn tags(ls: &[ClassLabel]) -> Vec<Tag> {
        ls.iter().map(|l| l.tag).collect()
    }

    #[test]
    fn stats_takes_precedence() {
        let map = AreaMap::default();
        let p = paper(0, Citing, 2000, &["Statistics & Probability", "Economics"], &[]);
        let ls = classify(&p, &map, false);
        assert_eq!(tags(&ls), vec![Tag::Stats]);
        assert_eq!(ls[0].side, Side::Internal);
    }

    #[test]
    fn math_substring() {
        let map = AreaMap::default();
        let p = paper(0, Citing, 2000, &["Mathematical & Computational Biology"], &["Life Sciences & Biomedicine - Other Topics"]);
        assert_eq!(tags(&classify(&p, &map, false)), vec![Tag::Math]);
    }

    #[test]
    fn external_lookup_and_fallbacks() {
        let map = AreaMap::default();
        let p = paper(0, Citing, 2000, &["Psychiatry"], &["Psychiatry"]);
        let ls = classify(&p, &map, false);
        assert_eq!(tags(&ls), vec![Tag::Bio]);
        assert_eq!(ls[0].side, Side::External);

        let none = paper(0, Citing, 2000, &[], &[]);
        assert_eq!(tags(&classify(&none, &map, false)), vec![Tag::Na]);
        let unknown = paper(0, Citing, 2000, &["Basket Weaving"], &["Basket Weaving"]);
        assert_eq!(tags(&classify(&unknown, &map, false)), vec![Tag::Na]);
    }

    #[test]
    fn carve_out_and_order_independence() {
        let map = AreaMap::default();
        let a = paper(0, Citing, 2000, &["Economics"], &["Business & Economics", "Computer Science", "Sociology"]);
        let mut b = a.clone();
        b.areas.reverse();
        assert_eq!(tags(&classify(&a, &map, true)), vec![Tag::Soc, Tag::Be, Tag::Cs]);
        assert_eq!(tags(&classify(&a, &map, false)), vec![Tag::Soc, Tag::Soc, Tag::Tech]);
        assert_eq!(classify(&a, &map, true), classify(&b, &map, true));
    }

    #[test]
    fn area_map_prefix_patterns() {
        let map = AreaMap::parse("Engineering*\tTECH\nengineering, civil\tPHY\n# comment\n").unwrap();
        assert_eq!(map.lookup("Engineering, Electrical"), Some(Tag::Tech));
        assert_eq!(map.lookup("ENGINEERING, CIVIL"), Some(Tag::Phy));
        assert_eq!(map.lookup("Art"), None);
        assert!(AreaMap::parse("no tab here").is_err());
        assert!(AreaMap::parse("x\tNOPE").is_err());
    }

    fn small_corpus() -> CitationCorpus {
        let papers = vec![
            paper(0, Source, 2000, &["Statistics & Probability"], &["Mathematics"]),
            paper(1, Source, 2001, &["Statistics & Probability"], &["Mathematics"]),
            paper(2, Citing, 2001, &[], &["Genetics & Heredity", "Sociology"]),
            paper(3, Citing, 2001, &["Statistics & Probability"], &[]),
            paper(4, Citing, 2002, &[], &["Business & Economics"]),
        ];
        CitationCorpus::new(papers, vec![(2, 0), (3, 0), (4, 0), (4, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn breakdown_fractions_and_conservation() {
        let c = small_corpus();
        let map = AreaMap::default();
        let labels = classify_all(&c, &map, false);
        let b = fractional_breakdown(&c, &labels, CountUnit::CitingPapers);
        assert_eq!(b[&2001][&Tag::Bio], 0.5);
        assert_eq!(b[&2001][&Tag::Soc], 0.5);
        assert_eq!(b[&2001][&Tag::Stats], 1.0);
        for (year, row) in &b {
            let papers = c
                .papers()
                .iter()
                .filter(|p| p.kind == Citing && p.year == Some(*year))
                .count();
            assert!((row.values().sum::<f64>() - papers as f64).abs() < 1e-12);
        }
        // edges: 3 citations in 2001 (incl. source 1 citing 0), 2 in 2002
        let b = fractional_breakdown(&c, &labels, CountUnit::Citations { sources: None });
        assert!((b[&2001].values().sum::<f64>() - 3.0).abs() < 1e-12);
        assert!((b[&2002].values().sum::<f64>() - 2.0).abs() < 1e-12);
        let only0 = [true, false];
        let b = fractional_breakdown(&c, &labels, CountUnit::Citations { sources: Some(&only0) });
        assert!((b[&2002].values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn carve_out_removes_be_from_soc() {
        let c = small_corpus();
        let map = AreaMap::default();
        let folded = fractional_breakdown(&c, &classify_all(&c, &map, false), CountUnit::CitingPapers);
        let carved = fractional_breakdown(&c, &classify_all(&c, &map, true), CountUnit::CitingPapers);
        assert_eq!(folded[&2002][&Tag::Soc], 1.0);
        assert_eq!(carved[&2002].get(&Tag::Soc), None);
        assert_eq!(carved[&2002][&Tag::Be], 1.0);
    }

    #[test]
    fn gini_reference_values() {
        let one: BTreeMap<Tag, f64> = [(Tag::Bio, 1.0)].into();
        assert_eq!(gini_concentration(&one).unwrap(), 100.0);
        let two: BTreeMap<Tag, f64> = [(Tag::Bio, 0.5), (Tag::Soc, 0.5)].into();
        assert!((gini_concentration(&two).unwrap() - 50.0).abs() < 1e-12);
        let six: BTreeMap<Tag, f64> = [Tag::Art, Tag::Bio, Tag::Phy, Tag::Soc, Tag::Tech, Tag::Na]
            .into_iter()
            .map(|t| (t, 1.0 / 6.0))
            .collect();
        assert!((gini_concentration(&six).unwrap() - 100.0 / 6.0).abs() < 1e-9);
        // internal shares merge before squaring
        let internal: BTreeMap<Tag, f64> = [(Tag::Stats, 0.5), (Tag::Math, 0.5)].into();
        assert!((gini_concentration(&internal).unwrap() - 100.0).abs() < 1e-12);
        let bad: BTreeMap<Tag, f64> = [(Tag::Bio, 0.7)].into();
        assert!(matches!(gini_concentration(&bad), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn lorenz_reference_values() {
        let l = lorenz(&[1, 1, 1, 1], 100).unwrap();
        assert_eq!(l.at(50), 0.5);
        let l = lorenz(&[0, 0, 0, 10], 100).unwrap();
        assert_eq!(l.at(75), 0.0);
        assert_eq!(l.at(100), 1.0);
        // sorted [1,2,3,4]: bottom two hold 3 of 10
        let l = lorenz(&[4, 2, 3, 1], 100).unwrap();
        assert!((l.at(50) - 0.3).abs() < 1e-15);
        let z = lorenz(&[0, 0], 4).unwrap();
        assert_eq!(z.at(1), 0.25);
        assert!(matches!(lorenz(&[1, -2], 10), Err(Error::NegativeCount { index: 1, value: -2 })));
        assert!(lorenz(&[], 10).is_err());
    }

    fn journal_corpus() -> CitationCorpus {
        // journal J publishes 10 papers a year in 2000..=2002, each year's
        // citing papers cite 10 times in the same year
        let mut papers = Vec::new();
        let mut edges = Vec::new();
        for y in 0..3 {
            for _ in 0..10 {
                let mut p = paper(papers.len(), Source, 2000 + y, &[], &[]);
                p.venue = "J".into();
                papers.push(p);
            }
        }
        let mut lateb = paper(papers.len(), Source, 2002, &[], &[]);
        lateb.venue = "L".into();
        papers.push(lateb);
        let n_src = papers.len();
        for y in 0..3 {
            for k in 0..10 {
                let id = papers.len();
                papers.push(paper(id, Citing, 2000 + y, &[], &[]));
                edges.push((id, k));
            }
        }
        let id = papers.len();
        papers.push(paper(id, Citing, 2002, &[], &[]));
        edges.push((id, n_src - 1));
        edges.push((id, 0));
        CitationCorpus::new(papers, edges).unwrap()
    }

    #[test]
    fn trend_denominator_accumulates() {
        let c = journal_corpus();
        let t = normalized_trend(&c, "J", 2000..=2002, Normalization::PerCumulativePublication).unwrap();
        assert_eq!(t.values[&2000], 1.0);
        assert_eq!(t.values[&2001], 0.5);
        assert!((t.values[&2002] - 11.0 / 30.0).abs() < 1e-15);
        let raw = normalized_trend(&c, "j", 2000..=2002, Normalization::Raw).unwrap();
        assert_eq!(raw.values[&2002], 11.0);
        // journal L only starts publishing in 2002
        let late = normalized_trend(&c, "L", 1999..=2002, Normalization::PerCumulativePublication).unwrap();
        assert_eq!(late.values.keys().copied().collect::<Vec<_>>(), vec![2002]);
        assert_eq!(late.values[&2002], 1.0);
        assert!(normalized_trend(&c, "nope", 2000..=2001, Normalization::Raw).is_err());
    }

    #[test]
    fn single_paper_trend() {
        let mut src = paper(0, Source, 2010, &[], &[]);
        src.venue = "AOAS".into();
        let papers = vec![src, paper(1, Citing, 2010, &[], &[]), paper(2, Citing, 2010, &[], &[])];
        let c = CitationCorpus::new(papers, vec![(1, 0), (2, 0)]).unwrap();
        let t = normalized_trend(&c, "AOAS", 2005..=2010, Normalization::PerCumulativePublication).unwrap();
        assert_eq!(t.values.len(), 1);
        assert_eq!(t.values[&2010], 2.0);
    }

    #[test]
    fn ranks_with_ties() {
        let c = small_corpus();
        let labels = classify_all(&c, &AreaMap::default(), false);
        let rows = rank_compare(&c, &labels);
        // source 0: internal citers 3 and 1, external 2 and 4
        assert_eq!((rows[0].internal, rows[0].external), (2, 2));
        assert_eq!((rows[0].internal_rank, rows[0].external_rank), (1, 1));
        assert_eq!((rows[1].internal, rows[1].external, rows[1].external_rank), (0, 1, 2));
        assert_eq!(rows[1].internal_rank, 2);
        assert_eq!(competition_ranks(&[5, 3, 5, 0, 3]), vec![1, 3, 1, 5, 3]);
        let out = rank_outliers(&rows, 1);
        assert_eq!(out.len(), 1);
    }
}
