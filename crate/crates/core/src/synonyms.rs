//! Synonym pair generation through three channels: registry keyword
//! expansion, a knowledge-base synonym dictionary, and all-pairs
//! Jaro-Winkler similarity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jaro::{jaro_winkler_chars, jaro_winkler_upper_bound};
use crate::mention::{MentionId, MentionTable};
use crate::text::bounded_occurrences;

/// Confidence assigned to keyword-derived pairs.
pub const KEYWORD_CONFIDENCE: f64 = 0.99;
/// Confidence assigned to knowledge-base pairs.
pub const KNOWLEDGE_BASE_CONFIDENCE: f64 = 1.0;
/// Pairs below this Jaro-Winkler score are not recorded at all.
pub const DEFAULT_RECORD_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Registry {
    PyPI,
    Cran,
    Bioconductor,
}

impl Registry {
    pub const ALL: [Registry; 3] = [Registry::PyPI, Registry::Cran, Registry::Bioconductor];

    pub fn as_str(self) -> &'static str {
        match self {
            Registry::PyPI => "PyPI",
            Registry::Cran => "CRAN",
            Registry::Bioconductor => "Bioconductor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "PyPI" | "pypi" => Some(Registry::PyPI),
            "CRAN" | "cran" => Some(Registry::Cran),
            "Bioconductor" | "bioconductor" | "bioc" => Some(Registry::Bioconductor),
            _ => None,
        }
    }

    /// Keywords that mark a mention as referring to a package of this
    /// registry. Matching is case-sensitive, hence the case variants.
    pub fn default_keywords(self) -> &'static [&'static str] {
        match self {
            Registry::PyPI => &["python", "Python", "API"],
            Registry::Cran => &["R", "r", "package", "Package", "R-package", "R-Package", "r-package"],
            Registry::Bioconductor => &[
                "R",
                "r",
                "package",
                "Package",
                "R-package",
                "R-Package",
                "r-package",
                "bioconductor",
                "Bioconductor",
            ],
        }
    }
}

impl fmt::Display for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SynonymSource {
    KnowledgeBase,
    KeywordIndex(Registry),
    StringSimilarity,
    PostProcess,
}

impl SynonymSource {
    /// Label used in synonym files.
    pub fn label(self) -> &'static str {
        match self {
            SynonymSource::KnowledgeBase => "SciCrunch",
            SynonymSource::KeywordIndex(r) => r.as_str(),
            SynonymSource::StringSimilarity => "string_similarity",
            SynonymSource::PostProcess => "post_process",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "knowledge_base" | "SciCrunch" | "scicrunch_page_query" => Some(SynonymSource::KnowledgeBase),
            "string_similarity" => Some(SynonymSource::StringSimilarity),
            "post_process" => Some(SynonymSource::PostProcess),
            other => Registry::parse(other).map(SynonymSource::KeywordIndex),
        }
    }

    /// Higher wins when several channels assert the same pair.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            SynonymSource::KnowledgeBase => 3,
            SynonymSource::PostProcess => 3,
            SynonymSource::KeywordIndex(_) => 2,
            SynonymSource::StringSimilarity => 1,
        }
    }
}

/// An edge between two distinct mentions, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynonymPair {
    pub a: MentionId,
    pub b: MentionId,
    pub confidence: f64,
    pub source: SynonymSource,
}

impl SynonymPair {
    /// Orders the endpoints. Returns `None` for self-pairs or a
    /// non-positive confidence.
    pub fn new(x: MentionId, y: MentionId, confidence: f64, source: SynonymSource) -> Option<Self> {
        if x == y || !(confidence > 0.0 && confidence <= 1.0) {
            return None;
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Some(SynonymPair { a, b, confidence, source })
    }

    pub fn key(&self) -> (MentionId, MentionId) {
        (self.a, self.b)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.a >= self.b {
            return Err(Error::NonCanonicalPair { a: self.a, b: self.b });
        }
        if self.b.index() >= n {
            return Err(Error::UnknownMention { id: self.b, len: n });
        }
        Ok(())
    }
}

/// Sorts by `(a, b, source)` so downstream output is independent of the
/// order in which channels or worker threads produced the pairs.
pub fn sort_pairs(pairs: &mut [SynonymPair]) {
    pairs.sort_by_key(|p| (p.a, p.b, p.source));
}

/// Package names of one registry plus the keywords used to expand them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryIndex {
    pub registry: Registry,
    pub entries: BTreeSet<String>,
    pub keywords: Vec<String>,
}

impl RegistryIndex {
    pub fn new<I, S>(registry: Registry, entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        RegistryIndex {
            registry,
            entries: entries.into_iter().map(Into::into).collect(),
            keywords: registry.default_keywords().iter().map(|&k| String::from(k)).collect(),
        }
    }

    pub fn with_keywords<I, S>(mut self, keywords: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.keywords = keywords.into_iter().map(Into::into).collect();
        if self.keywords.is_empty() {
            return Err(Error::invalid("keywords", "registry keyword list must not be empty"));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeywordReport {
    /// Entries skipped because they are shorter than two characters.
    pub skipped_short: Vec<String>,
    /// Entries that occur verbatim in the mention table.
    pub entries_present: usize,
}

/// Alphanumeric runs of `s`.
fn word_runs(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty())
}

/// Inverted index from alphanumeric runs to the mentions containing them.
/// Build once and reuse across registries.
#[derive(Debug, Clone, Default)]
pub struct TokenIndex {
    postings: BTreeMap<String, Vec<MentionId>>,
}

impl TokenIndex {
    pub fn new(table: &MentionTable) -> Self {
        let mut postings: BTreeMap<String, Vec<MentionId>> = BTreeMap::new();
        for (id, name) in table.iter() {
            let runs: BTreeSet<&str> = word_runs(name).collect();
            for run in runs {
                postings.entry(String::from(run)).or_default().push(id);
            }
        }
        TokenIndex { postings }
    }

    fn candidates(&self, run: &str) -> &[MentionId] {
        self.postings.get(run).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Whether `variant` contains `entry` and at least one keyword, both as
/// whole words, with the keyword outside the entry occurrences.
pub fn keyword_match(entry: &str, variant: &str, keywords: &[String]) -> bool {
    if entry == variant {
        return false;
    }
    let spans: Vec<(usize, usize)> = bounded_occurrences(variant, entry).collect();
    if spans.is_empty() {
        return false;
    }
    keywords.iter().any(|kw| {
        bounded_occurrences(variant, kw)
            .any(|(s, e)| !spans.iter().any(|&(es, ee)| s >= es && e <= ee))
    })
}

/// Pairs `(entry, variant)` for registry entries found verbatim among the
/// mentions and every other mention that contains the entry together with a
/// registry keyword.
pub fn generate_keyword_synonyms(
    index: &RegistryIndex,
    table: &MentionTable,
    tokens: &TokenIndex,
) -> (Vec<SynonymPair>, KeywordReport) {
    let mut report = KeywordReport::default();
    let mut out = Vec::new();
    for entry in &index.entries {
        if entry.chars().count() < 2 {
            report.skipped_short.push(entry.clone());
            continue;
        }
        let Some(entry_id) = table.id(entry) else { continue };
        report.entries_present += 1;
        let starts_with_word = entry.chars().next().is_some_and(char::is_alphanumeric);
        let first_run = word_runs(entry).next();
        let mut check = |vid: MentionId| {
            let variant = table.name(vid).unwrap_or_default();
            if keyword_match(entry, variant, &index.keywords) {
                if let Some(p) = SynonymPair::new(
                    entry_id,
                    vid,
                    KEYWORD_CONFIDENCE,
                    SynonymSource::KeywordIndex(index.registry),
                ) {
                    out.push(p);
                }
            }
        };
        match (starts_with_word, first_run) {
            (true, Some(run)) => tokens.candidates(run).iter().copied().for_each(&mut check),
            _ => table.iter().map(|(id, _)| id).for_each(&mut check),
        }
    }
    sort_pairs(&mut out);
    (out, report)
}

/// Knowledge-base synonyms: mention string to alternative names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbSynonymDict {
    entries: BTreeMap<String, Vec<String>>,
}

impl KbSynonymDict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a synonym. Self-mappings and duplicates are ignored.
    pub fn insert(&mut self, key: impl Into<String>, synonym: impl Into<String>) {
        let key = key.into();
        let synonym = synonym.into();
        if key == synonym {
            return;
        }
        let list = self.entries.entry(key).or_default();
        if !list.contains(&synonym) {
            list.push(synonym);
        }
    }

    pub fn get(&self, key: &str) -> Option<&[String]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.entries
            .iter()
            .flat_map(|(k, vs)| vs.iter().map(move |v| (k.as_str(), v.as_str())))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for KbSynonymDict {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut d = KbSynonymDict::new();
        for (k, v) in iter {
            d.insert(k, v);
        }
        d
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbReport {
    pub matched: usize,
    /// Dictionary rows where the key or the synonym is not a known mention.
    pub unmatched: usize,
}

pub fn load_kb_synonyms(dict: &KbSynonymDict, table: &MentionTable) -> (Vec<SynonymPair>, KbReport) {
    let mut report = KbReport::default();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (key, syn) in dict.iter() {
        match (table.id(key), table.id(syn)) {
            (Some(a), Some(b)) => {
                report.matched += 1;
                if let Some(p) = SynonymPair::new(a, b, KNOWLEDGE_BASE_CONFIDENCE, SynonymSource::KnowledgeBase) {
                    if seen.insert(p.key()) {
                        out.push(p);
                    }
                }
            }
            _ => report.unmatched += 1,
        }
    }
    sort_pairs(&mut out);
    (out, report)
}

/// Mentions pre-split into chars and ordered by length, for the all-pairs
/// Jaro-Winkler search.
#[derive(Debug, Clone)]
pub struct SimilarityIndex {
    /// `(char length, id, chars)` sorted by length then id.
    items: Vec<(usize, MentionId, Vec<char>)>,
}

impl SimilarityIndex {
    pub fn new(table: &MentionTable) -> Self {
        let mut items: Vec<_> = table
            .iter()
            .map(|(id, s)| {
                let chars: Vec<char> = s.chars().collect();
                (chars.len(), id, chars)
            })
            .collect();
        items.sort_by_key(|(len, id, _)| (*len, *id));
        SimilarityIndex { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Pairs between item `pos` and every longer-or-equal item after it
    /// scoring at least `threshold`. The union over all positions is the
    /// full pair set; rows are independent and may run in parallel.
    pub fn pairs_from(&self, pos: usize, threshold: f64) -> Vec<SynonymPair> {
        let (len_i, id_i, ref chars_i) = self.items[pos];
        let mut out = Vec::new();
        for (len_j, id_j, chars_j) in &self.items[pos + 1..] {
            if jaro_winkler_upper_bound(len_i, *len_j) < threshold {
                break;
            }
            let score = jaro_winkler_chars(chars_i, chars_j);
            if score >= threshold {
                if let Some(p) = SynonymPair::new(id_i, *id_j, score, SynonymSource::StringSimilarity) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Every pair of distinct mentions with Jaro-Winkler score at least
/// `threshold`, sorted by `(a, b)`.
pub fn all_pairs_similarity(table: &MentionTable, threshold: f64) -> Result<Vec<SynonymPair>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid("record_threshold", "must lie in (0, 1]"));
    }
    let index = SimilarityIndex::new(table);
    let mut out: Vec<SynonymPair> = (0..index.len()).flat_map(|p| index.pairs_from(p, threshold)).collect();
    sort_pairs(&mut out);
    Ok(out)
}
