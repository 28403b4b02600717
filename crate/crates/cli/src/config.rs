//! TOML run files. Every key present overrides the flag of the same name.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use seedclust::biblio::Tag;

use crate::cluster::{ClusterArgs, CorpusArgs, Field, SweepArgs, SweepFlags, TopicArgs};
use crate::metrics::{MetricsArgs, Unit};
use crate::simulate::SimulateArgs;
use crate::CommonArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    // shared
    out: Option<PathBuf>,
    seed: Option<u64>,
    jobs: Option<usize>,
    alpha: Option<AlphaValue>,
    window: Option<usize>,
    nmin: Option<usize>,
    nmax: Option<usize>,
    // corpus
    edges: Option<PathBuf>,
    metadata: Option<PathBuf>,
    area_map: Option<PathBuf>,
    // topic
    keywords: Option<Vec<String>>,
    field: Option<Field>,
    area: Option<String>,
    exact_word: Option<bool>,
    threshold: Option<u64>,
    seeds: Option<Vec<usize>>,
    ranking_limit: Option<usize>,
    // simulate
    spec: Option<PathBuf>,
    m: Option<Vec<usize>>,
    reps: Option<usize>,
    random_seeds: Option<bool>,
    // metrics
    journals: Option<Vec<String>>,
    years: Option<String>,
    carve_out: Option<bool>,
    unit: Option<Unit>,
    steps: Option<usize>,
    top: Option<usize>,
}

/// `alpha = 0.15` or `alpha = [0.05, 0.15]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AlphaValue {
    One(f64),
    Many(Vec<f64>),
}

impl AlphaValue {
    fn first(&self) -> Option<f64> {
        match self {
            AlphaValue::One(a) => Some(*a),
            AlphaValue::Many(v) => v.first().copied(),
        }
    }

    fn all(&self) -> Vec<f64> {
        match self {
            AlphaValue::One(a) => vec![*a],
            AlphaValue::Many(v) => v.clone(),
        }
    }
}

fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
    if let Some(v) = value {
        *slot = v.clone();
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let cfg: FileConfig = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        if let Some(area) = &cfg.area {
            area.parse::<Tag>()
                .map_err(anyhow::Error::msg)
                .with_context(|| format!("invalid config {}", path.display()))?;
        }
        Ok(cfg)
    }

    fn common(&self, c: &mut CommonArgs) {
        set(&mut c.out, &self.out);
        if self.seed.is_some() {
            c.seed = self.seed;
        }
        set(&mut c.jobs, &self.jobs);
    }

    fn corpus(&self, c: &mut CorpusArgs) {
        if self.edges.is_some() {
            c.edges.clone_from(&self.edges);
        }
        if self.metadata.is_some() {
            c.metadata.clone_from(&self.metadata);
        }
        if self.area_map.is_some() {
            c.area_map.clone_from(&self.area_map);
        }
    }

    fn topic(&self, t: &mut TopicArgs) {
        set(&mut t.keywords, &self.keywords);
        set(&mut t.field, &self.field);
        if let Some(area) = &self.area {
            t.area = area.parse().ok();
        }
        set(&mut t.exact_word, &self.exact_word);
        set(&mut t.threshold, &self.threshold);
    }

    fn sweep(&self, s: &mut SweepFlags) {
        if let Some(a) = self.alpha.as_ref().and_then(AlphaValue::first) {
            s.alpha = a;
        }
        set(&mut s.window, &self.window);
        set(&mut s.nmin, &self.nmin);
        set(&mut s.nmax, &self.nmax);
        set(&mut s.ranking_limit, &self.ranking_limit);
    }

    pub fn apply_cluster(&self, a: &mut ClusterArgs) {
        self.corpus(&mut a.corpus);
        self.topic(&mut a.topic);
        self.sweep(&mut a.sweep);
        self.common(&mut a.common);
    }

    pub fn apply_sweep(&self, a: &mut SweepArgs) {
        self.corpus(&mut a.corpus);
        self.topic(&mut a.topic);
        self.sweep(&mut a.sweep);
        self.common(&mut a.common);
        set(&mut a.seeds, &self.seeds);
    }

    pub fn apply_simulate(&self, a: &mut SimulateArgs) {
        if self.spec.is_some() {
            a.spec.clone_from(&self.spec);
        }
        if let Some(alpha) = &self.alpha {
            a.alpha = alpha.all();
        }
        set(&mut a.m, &self.m);
        set(&mut a.reps, &self.reps);
        set(&mut a.random_seeds, &self.random_seeds);
        set(&mut a.window, &self.window);
        set(&mut a.nmin, &self.nmin);
        set(&mut a.nmax, &self.nmax);
        self.common(&mut a.common);
    }

    pub fn apply_metrics(&self, a: &mut MetricsArgs) {
        if self.edges.is_some() {
            a.edges.clone_from(&self.edges);
        }
        if self.metadata.is_some() {
            a.metadata.clone_from(&self.metadata);
        }
        if self.area_map.is_some() {
            a.area_map.clone_from(&self.area_map);
        }
        set(&mut a.journals, &self.journals);
        if self.years.is_some() {
            a.years.clone_from(&self.years);
        }
        set(&mut a.carve_out, &self.carve_out);
        set(&mut a.unit, &self.unit);
        set(&mut a.steps, &self.steps);
        set(&mut a.top, &self.top);
        self.common(&mut a.common);
    }
}
