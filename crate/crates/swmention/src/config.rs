//! Pipeline configuration (TOML).
//!
//! Relative paths are resolved against the directory of the config file.
//! API tokens are never read from here; see [`LinkingConfig::token_env`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swmention_core::cluster::DisambiguationConfig;
use swmention_core::eval::UncertainPolicy;
use swmention_core::linking::LinkSource;
use swmention_core::mention::CorpusKind;
use swmention_core::synonyms::{Registry, DEFAULT_RECORD_THRESHOLD};

use crate::error::{Error, Result};
use crate::io::read_to_string;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub thresholds: Thresholds,
    pub dbscan: Dbscan,
    pub linking: LinkingConfig,
    pub parallelism: Parallelism,
    pub ingest: Ingest,
    pub evaluation: EvaluationConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    /// Raw corpus files. Frequencies are counted over `comm` only.
    pub comm: Option<PathBuf>,
    pub non_comm: Option<PathBuf>,
    pub publishers: Option<PathBuf>,
    /// Registry name lists, keyed `pypi`, `cran`, `bioconductor`.
    pub registries: BTreeMap<String, PathBuf>,
    pub kb_dictionary: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    /// Directory of per-name link snapshots.
    pub snapshots: Option<PathBuf>,
    /// Directory holding the evaluation CSVs.
    pub evaluation: Option<PathBuf>,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// String-similarity pairs at or above this are written out.
    pub record: f64,
    /// String-similarity pairs at or above this enter the matrix.
    #[serde(rename = "use")]
    pub use_: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        let d = DisambiguationConfig::default();
        Thresholds { record: DEFAULT_RECORD_THRESHOLD, use_: d.use_threshold }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Dbscan {
    pub eps: f64,
    pub min_pts: usize,
}

impl Default for Dbscan {
    fn default() -> Self {
        let d = DisambiguationConfig::default();
        Dbscan { eps: d.eps, min_pts: d.min_pts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkingConfig {
    pub offline: bool,
    /// Sources consulted, most preferred first.
    pub precedence: Vec<String>,
    /// Environment variable holding each source's API token.
    pub token_env: BTreeMap<String, String>,
}

impl Default for LinkingConfig {
    fn default() -> Self {
        LinkingConfig {
            offline: true,
            precedence: LinkSource::ALL.iter().map(|s| s.as_str().to_string()).collect(),
            token_env: [("GitHub", "GITHUB_TOKEN"), ("SciCrunch", "SCICRUNCH_API_KEY")]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

impl LinkingConfig {
    pub fn sources(&self) -> Result<Vec<LinkSource>> {
        let mut out = Vec::new();
        for s in &self.precedence {
            let src = LinkSource::parse(s).ok_or_else(|| Error::Config(format!("linking.precedence: unknown source `{s}`")))?;
            if out.contains(&src) {
                return Err(Error::Config(format!("linking.precedence: `{s}` listed twice")));
            }
            out.push(src);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Parallelism {
    /// Worker threads; 0 picks one per core.
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Ingest {
    /// Abort on the first malformed row instead of skipping it.
    pub strict: bool,
}

impl Default for Ingest {
    fn default() -> Self {
        Ingest { strict: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationConfig {
    /// Synonym pairs labelled unclear or not-software: `exclude` leaves
    /// them out of precision and recall, `negative` counts them as
    /// non-synonyms.
    pub uncertain: String,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig { uncertain: "exclude".into() }
    }
}

impl EvaluationConfig {
    pub fn policy(&self) -> Result<UncertainPolicy> {
        match self.uncertain.as_str() {
            "exclude" => Ok(UncertainPolicy::Exclude),
            "negative" => Ok(UncertainPolicy::AsNegative),
            other => Err(Error::Config(format!("evaluation.uncertain: expected `exclude` or `negative`, got `{other}`"))),
        }
    }
}

impl PipelineConfig {
    /// Parses TOML and resolves relative paths against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.resolve(base);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&read_to_string(path)?, base)
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let p = &mut self.paths;
        for o in [&mut p.comm, &mut p.non_comm, &mut p.publishers, &mut p.kb_dictionary, &mut p.stoplist, &mut p.snapshots, &mut p.evaluation]
            .into_iter()
            .flatten()
        {
            fix(o);
        }
        p.registries.values_mut().for_each(fix);
        if !p.output.as_os_str().is_empty() {
            fix(&mut p.output);
        }
    }

    /// Checks every numeric bound and name, listing the offending field.
    pub fn validate(&self) -> Result<()> {
        let t = &self.thresholds;
        if !(t.record > 0.0 && t.record <= t.use_ && t.use_ <= 1.0) {
            return Err(Error::Config(format!(
                "thresholds: need 0 < record <= use <= 1, got record = {}, use = {}",
                t.record, t.use_
            )));
        }
        if !(self.dbscan.eps > 0.0 && self.dbscan.eps.is_finite()) {
            return Err(Error::Config(format!("dbscan.eps must be positive, got {}", self.dbscan.eps)));
        }
        if self.dbscan.min_pts < 1 {
            return Err(Error::Config("dbscan.min_pts must be at least 1".into()));
        }
        for k in self.paths.registries.keys() {
            if Registry::parse(k).is_none() {
                return Err(Error::Config(format!("paths.registries: unknown registry `{k}`")));
            }
        }
        for k in self.linking.token_env.keys() {
            if LinkSource::parse(k).is_none() {
                return Err(Error::Config(format!("linking.token_env: unknown source `{k}`")));
            }
        }
        self.linking.sources()?;
        self.evaluation.policy()?;
        if self.paths.output.as_os_str().is_empty() {
            return Err(Error::Config("paths.output is not set".into()));
        }
        Ok(())
    }

    pub fn disambiguation(&self) -> DisambiguationConfig {
        DisambiguationConfig { use_threshold: self.thresholds.use_, eps: self.dbscan.eps, min_pts: self.dbscan.min_pts }
    }

    pub fn corpora(&self) -> Vec<(CorpusKind, &Path)> {
        [
            (CorpusKind::Comm, &self.paths.comm),
            (CorpusKind::NonComm, &self.paths.non_comm),
            (CorpusKind::Publishers, &self.paths.publishers),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.as_deref().map(|p| (k, p)))
        .collect()
    }

    pub fn registries(&self) -> Vec<(Registry, &Path)> {
        let mut v: Vec<(Registry, &Path)> =
            self.paths.registries.iter().filter_map(|(k, p)| Registry::parse(k).map(|r| (r, p.as_path()))).collect();
        v.sort_by_key(|(r, _)| Registry::ALL.iter().position(|x| x == r));
        v
    }

    /// Canonical TOML rendering, used for the manifest snapshot.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }
}
