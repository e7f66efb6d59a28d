//! Mention records, mention ids and distinct-paper frequencies.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Dense id of a distinct mention string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MentionId(pub u32);

impl MentionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MentionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for MentionId {
    fn from(v: u32) -> Self {
        MentionId(v)
    }
}

/// Which corpus a raw file belongs to. Determines the column layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusKind {
    Comm,
    NonComm,
    Publishers,
}

impl CorpusKind {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            CorpusKind::Comm | CorpusKind::NonComm => &[
                "license",
                "location",
                "pmcid",
                "pmid",
                "doi",
                "pubdate",
                "source",
                "number",
                "text",
                "software",
                "version",
                "ID",
                "curation_label",
            ],
            CorpusKind::Publishers => &[
                "doi",
                "pubdate",
                "source",
                "number",
                "text",
                "software",
                "ID",
                "curation_label",
            ],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusKind::Comm => "comm",
            CorpusKind::NonComm => "non_comm",
            CorpusKind::Publishers => "publishers",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum License {
    Comm,
    NonComm,
    Publisher,
}

impl License {
    pub fn as_str(self) -> &'static str {
        match self {
            License::Comm => "comm",
            License::NonComm => "non_comm",
            License::Publisher => "publisher",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "comm" => Some(License::Comm),
            "non_comm" => Some(License::NonComm),
            "publisher" | "publishers" | "publishers_collection" => Some(License::Publisher),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CurationLabel {
    Software,
    NotSoftware,
    Unclear,
    #[default]
    NotCurated,
}

impl CurationLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurationLabel::Software => "software",
            CurationLabel::NotSoftware => "not_software",
            CurationLabel::Unclear => "unclear",
            CurationLabel::NotCurated => "not_curated",
        }
    }

    /// Empty input maps to `NotCurated`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "software" => Some(CurationLabel::Software),
            "not_software" => Some(CurationLabel::NotSoftware),
            "unclear" => Some(CurationLabel::Unclear),
            "not_curated" | "" => Some(CurationLabel::NotCurated),
            _ => None,
        }
    }
}

/// Part of the paper a mention was extracted from.
///
/// Section names in the body are free text ("materials and methods"), the
/// other parts use fixed tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TextSource {
    Section(String),
    PaperTitle,
    PaperAbstract,
    TableCaption,
    FigureCaption,
}

impl TextSource {
    pub fn parse(s: &str) -> Self {
        match s {
            "paper_title" => TextSource::PaperTitle,
            "paper_abstract" => TextSource::PaperAbstract,
            "tab_caption" => TextSource::TableCaption,
            "fig_caption" => TextSource::FigureCaption,
            other => TextSource::Section(String::from(other)),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            TextSource::Section(s) => s,
            TextSource::PaperTitle => "paper_title",
            TextSource::PaperAbstract => "paper_abstract",
            TextSource::TableCaption => "tab_caption",
            TextSource::FigureCaption => "fig_caption",
        }
    }

    /// Body text and captions carry a sequence number; titles and abstracts
    /// always have number 0.
    pub fn is_numbered(&self) -> bool {
        !matches!(self, TextSource::PaperTitle | TextSource::PaperAbstract)
    }
}

/// One NER-extracted mention.
///
/// Optional columns that are empty in the source file are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionRecord {
    pub license: Option<License>,
    pub location: Option<String>,
    pub pmcid: Option<String>,
    pub pmid: Option<String>,
    pub doi: Option<String>,
    pub pubdate: Option<i32>,
    pub source: TextSource,
    pub number: u32,
    pub text: String,
    pub software: String,
    pub version: Option<String>,
    pub id: Option<MentionId>,
    pub curation_label: CurationLabel,
}

impl MentionRecord {
    /// Paper key for distinct-paper counting: pmcid, then doi.
    pub fn paper_key(&self) -> Option<PaperKey<'_>> {
        match (&self.pmcid, &self.doi) {
            (Some(p), _) => Some(PaperKey::Pmcid(p)),
            (None, Some(d)) => Some(PaperKey::Doi(d)),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PaperKey<'a> {
    Pmcid(&'a str),
    Doi(&'a str),
    Synthetic(&'a str),
}

/// Bidirectional mention-string / id table.
///
/// Ids are dense, assigned in byte-wise sorted order of the distinct strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionTable {
    names: Vec<String>,
    ids: BTreeMap<String, MentionId>,
}

impl MentionTable {
    pub fn assign<I, S>(mentions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let distinct: BTreeSet<String> =
            mentions.into_iter().map(|s| String::from(s.as_ref())).collect();
        let names: Vec<String> = distinct.into_iter().collect();
        let ids = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), MentionId(i as u32)))
            .collect();
        MentionTable { names, ids }
    }

    /// Rebuilds a table from explicit `(string, id)` rows, e.g. a stored
    /// `mention2id` file. Returns `None` if the rows are not a bijection onto
    /// `0..n`.
    pub fn from_rows<I>(rows: I) -> Option<Self>
    where
        I: IntoIterator<Item = (String, MentionId)>,
    {
        let mut ids = BTreeMap::new();
        for (name, id) in rows {
            if ids.insert(name, id).is_some() {
                return None;
            }
        }
        let mut names = alloc::vec![None; ids.len()];
        for (name, id) in &ids {
            let slot = names.get_mut(id.index())?;
            if slot.is_some() {
                return None;
            }
            *slot = Some(name.clone());
        }
        let names = names.into_iter().collect::<Option<Vec<_>>>()?;
        Some(MentionTable { names, ids })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, mention: &str) -> Option<MentionId> {
        self.ids.get(mention).copied()
    }

    pub fn name(&self, id: MentionId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn contains(&self, mention: &str) -> bool {
        self.ids.contains_key(mention)
    }

    /// `(id, string)` in id order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (MentionId, &str)> + '_ {
        self.names.iter().enumerate().map(|(i, n)| (MentionId(i as u32), n.as_str()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Number of distinct papers each mention occurs in.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<MentionId, u32>,
}

impl FrequencyTable {
    pub fn get(&self, id: MentionId) -> u32 {
        self.counts.get(&id).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, id: MentionId, count: u32) {
        self.counts.insert(id, count);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MentionId, u32)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&v| u64::from(v)).sum()
    }
}

impl FromIterator<(MentionId, u32)> for FrequencyTable {
    fn from_iter<T: IntoIterator<Item = (MentionId, u32)>>(iter: T) -> Self {
        FrequencyTable { counts: iter.into_iter().collect() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyReport {
    pub table: FrequencyTable,
    /// Records without pmcid or doi, counted under the synthetic key.
    pub missing_paper_key: usize,
    /// Records whose mention string is not in the id table.
    pub unmapped: usize,
}

/// Counts distinct papers per mention.
///
/// Records lacking both pmcid and doi are all attributed to a single
/// synthetic paper for this call, so callers should pass one file at a time
/// when such records are possible and merge with [`merge_frequencies`].
pub fn compute_frequencies<'a, I>(records: I, table: &MentionTable) -> FrequencyReport
where
    I: IntoIterator<Item = &'a MentionRecord>,
{
    let mut seen: BTreeSet<(MentionId, PaperKey<'a>)> = BTreeSet::new();
    let mut report = FrequencyReport::default();
    for rec in records {
        let Some(id) = table.id(&rec.software) else {
            report.unmapped += 1;
            continue;
        };
        let key = rec.paper_key().unwrap_or_else(|| {
            report.missing_paper_key += 1;
            PaperKey::Synthetic("")
        });
        seen.insert((id, key));
    }
    let mut counts: BTreeMap<MentionId, u32> = BTreeMap::new();
    for (id, _) in seen {
        *counts.entry(id).or_default() += 1;
    }
    report.table = FrequencyTable { counts };
    report
}

/// Sums per-file frequency reports. Only valid when the files cover
/// disjoint sets of papers, which holds for the per-corpus raw files.
pub fn merge_frequencies<I>(reports: I) -> FrequencyReport
where
    I: IntoIterator<Item = FrequencyReport>,
{
    let mut out = FrequencyReport::default();
    for r in reports {
        out.missing_paper_key += r.missing_paper_key;
        out.unmapped += r.unmapped;
        for (id, c) in r.table.iter() {
            *out.table.counts.entry(id).or_default() += c;
        }
    }
    out
}
