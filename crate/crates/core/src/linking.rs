//! Exact-match linking of mentions to registry and database records, and
//! normalization of their metadata to one schema.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mention::{MentionId, MentionTable};

/// Where a link came from. Declaration order is the precedence order used
/// when several sources match one name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkSource {
    Bioconductor,
    Cran,
    PyPI,
    SciCrunch,
    GitHub,
}

impl LinkSource {
    pub const ALL: [LinkSource; 5] =
        [LinkSource::Bioconductor, LinkSource::Cran, LinkSource::PyPI, LinkSource::SciCrunch, LinkSource::GitHub];

    pub fn as_str(self) -> &'static str {
        match self {
            LinkSource::Bioconductor => "Bioconductor",
            LinkSource::Cran => "CRAN",
            LinkSource::PyPI => "PyPI",
            LinkSource::SciCrunch => "SciCrunch",
            LinkSource::GitHub => "GitHub",
        }
    }

    /// Value of the normalized `source` column.
    pub fn index_name(self) -> &'static str {
        match self {
            LinkSource::Bioconductor => "Bioconductor Index",
            LinkSource::Cran => "CRAN Index",
            LinkSource::PyPI => "PyPI Index",
            LinkSource::SciCrunch => "SciCrunch API",
            LinkSource::GitHub => "GitHub API",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        LinkSource::ALL.into_iter().find(|x| x.as_str().eq_ignore_ascii_case(s))
    }

    /// Package indices are curated; the code host is not.
    pub fn is_code_host(self) -> bool {
        self == LinkSource::GitHub
    }
}

impl fmt::Display for LinkSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fields of the normalized schema that are filled by mapping rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalizedField {
    MappedTo,
    Source,
    Platform,
    PackageUrl,
    Description,
    HomepageUrl,
    OtherUrls,
    License,
    GithubRepo,
    GithubRepoLicense,
    Reference,
    Rrid,
    ScicrunchSynonyms,
}

impl NormalizedField {
    pub const ALL: [NormalizedField; 13] = [
        NormalizedField::MappedTo,
        NormalizedField::Source,
        NormalizedField::Platform,
        NormalizedField::PackageUrl,
        NormalizedField::Description,
        NormalizedField::HomepageUrl,
        NormalizedField::OtherUrls,
        NormalizedField::License,
        NormalizedField::GithubRepo,
        NormalizedField::GithubRepoLicense,
        NormalizedField::Reference,
        NormalizedField::Rrid,
        NormalizedField::ScicrunchSynonyms,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NormalizedField::MappedTo => "mapped_to",
            NormalizedField::Source => "source",
            NormalizedField::Platform => "platform",
            NormalizedField::PackageUrl => "package_url",
            NormalizedField::Description => "description",
            NormalizedField::HomepageUrl => "homepage_url",
            NormalizedField::OtherUrls => "other_urls",
            NormalizedField::License => "license",
            NormalizedField::GithubRepo => "github_repo",
            NormalizedField::GithubRepoLicense => "github_repo_licenses",
            NormalizedField::Reference => "reference",
            NormalizedField::Rrid => "RRID",
            NormalizedField::ScicrunchSynonyms => "scicrunch_synonyms",
        }
    }

    /// Fields whose raw values are comma-separated lists.
    fn splits_on_comma(self) -> bool {
        matches!(self, NormalizedField::OtherUrls | NormalizedField::ScicrunchSynonyms)
    }
}

/// How one normalized field is obtained from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldRule {
    None,
    /// Copy a raw field.
    Raw(String),
    /// Every listed raw field contributes.
    All(Vec<String>),
    /// First listed raw field that is present and non-empty.
    FirstOf(Vec<String>),
    /// Comes from a fetched detail page, if one was cached.
    QueryPage,
    Constant(String),
}

impl FieldRule {
    fn raw(s: &str) -> Self {
        FieldRule::Raw(s.to_string())
    }

    fn raw_fields(&self) -> Vec<&str> {
        match self {
            FieldRule::Raw(f) => alloc::vec![f.as_str()],
            FieldRule::All(fs) | FieldRule::FirstOf(fs) => fs.iter().map(String::as_str).collect(),
            _ => Vec::new(),
        }
    }
}

/// Per-source mapping from raw fields to the normalized schema. Every
/// normalized field has exactly one rule per source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaMapping {
    rules: BTreeMap<(LinkSource, NormalizedField), FieldRule>,
}

impl Default for SchemaMapping {
    fn default() -> Self {
        use FieldRule as R;
        use LinkSource::*;
        use NormalizedField as F;
        let mut m = SchemaMapping { rules: BTreeMap::new() };
        for s in LinkSource::ALL {
            for f in NormalizedField::ALL {
                m.rules.insert((s, f), R::None);
            }
        }
        let mut set = |s, f, r| {
            m.rules.insert((s, f), r);
        };
        // names of the matched entries
        set(PyPI, F::MappedTo, R::raw("pypi package"));
        set(Cran, F::MappedTo, R::raw("CRAN Package"));
        set(Bioconductor, F::MappedTo, R::raw("Bioconductor Package"));
        set(SciCrunch, F::MappedTo, R::raw("Resource Name"));
        set(GitHub, F::MappedTo, R::raw("best_github_match"));
        for (s, source, platform) in [
            (PyPI, "PyPI Index", "PyPI"),
            (Cran, "CRAN Index", "CRAN"),
            (Bioconductor, "Bioconductor Index", "Bioconductor"),
            (SciCrunch, "SciCrunch API", "SciCrunch"),
            (GitHub, "GitHub API", "GitHub"),
        ] {
            set(s, F::Source, R::Constant(source.to_string()));
            set(s, F::Platform, R::Constant(platform.to_string()));
        }
        set(PyPI, F::PackageUrl, R::raw("pypi_url"));
        set(Cran, F::PackageUrl, R::raw("CRAN Link"));
        set(Bioconductor, F::PackageUrl, R::raw("Bioconductor Link"));
        set(SciCrunch, F::PackageUrl, R::raw("Resource ID Link"));
        set(GitHub, F::PackageUrl, R::raw("github_url"));

        set(PyPI, F::Description, R::QueryPage);
        set(Cran, F::Description, R::raw("Title"));
        set(Bioconductor, F::Description, R::raw("Title"));
        set(SciCrunch, F::Description, R::raw("Description"));
        set(GitHub, F::Description, R::raw("description"));

        set(PyPI, F::HomepageUrl, R::QueryPage);
        set(Cran, F::HomepageUrl, R::QueryPage);
        set(Bioconductor, F::HomepageUrl, R::QueryPage);
        set(SciCrunch, F::HomepageUrl, R::raw("Resource Name Link"));
        set(GitHub, F::HomepageUrl, R::raw("github_url"));

        set(SciCrunch, F::OtherUrls, R::All(alloc::vec!["Alternate URLs".into(), "Old URLs".into()]));

        for s in [PyPI, Cran, Bioconductor, SciCrunch] {
            set(s, F::GithubRepo, R::QueryPage);
        }
        set(GitHub, F::GithubRepo, R::raw("github_url"));
        set(GitHub, F::GithubRepoLicense, R::raw("license"));

        for s in [PyPI, Cran, Bioconductor] {
            set(s, F::License, R::QueryPage);
        }

        set(Cran, F::Reference, R::QueryPage);
        set(Bioconductor, F::Reference, R::QueryPage);
        set(SciCrunch, F::Reference, R::FirstOf(alloc::vec!["Reference Link".into(), "Proper Citation".into()]));
        set(GitHub, F::Reference, R::QueryPage);

        set(SciCrunch, F::Rrid, R::raw("Resource ID"));
        set(SciCrunch, F::ScicrunchSynonyms, R::raw("scicrunch_synonyms"));
        m
    }
}

impl SchemaMapping {
    pub fn rule(&self, source: LinkSource, field: NormalizedField) -> &FieldRule {
        self.rules.get(&(source, field)).unwrap_or(&FieldRule::None)
    }

    pub fn set(&mut self, source: LinkSource, field: NormalizedField, rule: FieldRule) {
        self.rules.insert((source, field), rule);
    }

    /// Raw field holding the entry name for `source`, used as the lookup key.
    pub fn name_field(&self, source: LinkSource) -> Option<&str> {
        match self.rule(source, NormalizedField::MappedTo) {
            FieldRule::Raw(f) => Some(f),
            _ => None,
        }
    }

    /// Raw fields read by any rule of `source`.
    pub fn mapped_raw_fields(&self, source: LinkSource) -> Vec<&str> {
        let mut v: Vec<&str> = NormalizedField::ALL
            .iter()
            .flat_map(|&f| self.rule(source, f).raw_fields())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// A raw metadata record as returned by one source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawRecord {
    pub fields: BTreeMap<String, String>,
    /// Values scraped from the entry's detail page, keyed by normalized
    /// field name (`description`, `homepage_url`, ...).
    pub page: BTreeMap<String, String>,
}

impl RawRecord {
    pub fn from_fields<I, K, V>(fields: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        RawRecord {
            fields: fields.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
            page: BTreeMap::new(),
        }
    }

    pub fn get(&self, field: &str) -> Option<&str> {
        self.fields.get(field).map(String::as_str).filter(|v| !v.trim().is_empty())
    }
}

/// One linked record in the normalized schema.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkedMetadata {
    pub id: MentionId,
    pub software_mention: String,
    pub mapped_to: Vec<String>,
    pub source: Option<LinkSource>,
    pub platform: Vec<String>,
    pub package_url: String,
    pub description: Vec<String>,
    pub homepage_url: Vec<String>,
    pub other_urls: Vec<String>,
    pub license: Vec<String>,
    pub github_repo: Vec<String>,
    pub github_repo_licenses: Vec<String>,
    pub exact_match: bool,
    pub rrid: Option<String>,
    pub reference: Vec<String>,
    pub scicrunch_synonyms: Vec<String>,
}

impl LinkedMetadata {
    fn field_mut(&mut self, f: NormalizedField) -> Option<&mut Vec<String>> {
        Some(match f {
            NormalizedField::MappedTo => &mut self.mapped_to,
            NormalizedField::Platform => &mut self.platform,
            NormalizedField::Description => &mut self.description,
            NormalizedField::HomepageUrl => &mut self.homepage_url,
            NormalizedField::OtherUrls => &mut self.other_urls,
            NormalizedField::License => &mut self.license,
            NormalizedField::GithubRepo => &mut self.github_repo,
            NormalizedField::GithubRepoLicense => &mut self.github_repo_licenses,
            NormalizedField::Reference => &mut self.reference,
            NormalizedField::ScicrunchSynonyms => &mut self.scicrunch_synonyms,
            NormalizedField::Source | NormalizedField::PackageUrl | NormalizedField::Rrid => return None,
        })
    }

    /// Values of a list-valued (or scalar) normalized field.
    pub fn values(&self, f: NormalizedField) -> Vec<&str> {
        let list = match f {
            NormalizedField::Source => return self.source.map(|s| s.as_str()).into_iter().collect(),
            NormalizedField::PackageUrl => return alloc::vec![self.package_url.as_str()],
            NormalizedField::Rrid => return self.rrid.as_deref().into_iter().collect(),
            NormalizedField::MappedTo => &self.mapped_to,
            NormalizedField::Platform => &self.platform,
            NormalizedField::Description => &self.description,
            NormalizedField::HomepageUrl => &self.homepage_url,
            NormalizedField::OtherUrls => &self.other_urls,
            NormalizedField::License => &self.license,
            NormalizedField::GithubRepo => &self.github_repo,
            NormalizedField::GithubRepoLicense => &self.github_repo_licenses,
            NormalizedField::Reference => &self.reference,
            NormalizedField::ScicrunchSynonyms => &self.scicrunch_synonyms,
        };
        list.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub metadata: LinkedMetadata,
    /// Raw fields no rule reads; dropped.
    pub unmapped_fields: Vec<String>,
}

fn push_values(out: &mut Vec<String>, value: &str, split: bool) {
    if split {
        out.extend(value.split(',').map(str::trim).filter(|v| !v.is_empty()).map(ToString::to_string));
    } else {
        out.push(value.trim().to_string());
    }
}

/// Maps a raw record of `source` onto the normalized schema.
///
/// Fails when the record yields no package URL.
pub fn normalize_metadata(
    id: MentionId,
    software_mention: &str,
    raw: &RawRecord,
    source: LinkSource,
    mapping: &SchemaMapping,
) -> Result<Normalized> {
    let mut md = LinkedMetadata {
        id,
        software_mention: software_mention.to_string(),
        source: Some(source),
        exact_match: true,
        ..Default::default()
    };
    for field in NormalizedField::ALL {
        let mut values = Vec::new();
        let split = field.splits_on_comma();
        match mapping.rule(source, field) {
            FieldRule::None => {}
            FieldRule::Raw(f) => {
                if let Some(v) = raw.get(f) {
                    push_values(&mut values, v, split);
                }
            }
            FieldRule::All(fs) => {
                for f in fs {
                    if let Some(v) = raw.get(f) {
                        push_values(&mut values, v, split);
                    }
                }
            }
            FieldRule::FirstOf(fs) => {
                if let Some(v) = fs.iter().find_map(|f| raw.get(f)) {
                    push_values(&mut values, v, split);
                }
            }
            FieldRule::QueryPage => {
                if let Some(v) = raw.page.get(field.as_str()).filter(|v| !v.trim().is_empty()) {
                    push_values(&mut values, v, split);
                }
            }
            FieldRule::Constant(c) => values.push(c.clone()),
        }
        match field {
            NormalizedField::Source => {}
            NormalizedField::PackageUrl => md.package_url = values.into_iter().next().unwrap_or_default(),
            NormalizedField::Rrid => md.rrid = values.into_iter().next(),
            other => {
                if let Some(slot) = md.field_mut(other) {
                    *slot = values;
                }
            }
        }
    }
    if md.package_url.is_empty() {
        return Err(Error::invalid("package_url", alloc::format!("{source} record for `{software_mention}` has no package URL")));
    }
    if source == LinkSource::GitHub {
        md.exact_match = md.mapped_to.iter().any(|m| m == software_mention);
    }
    let mapped = mapping.mapped_raw_fields(source);
    let unmapped_fields = raw.fields.keys().filter(|k| !mapped.contains(&k.as_str())).cloned().collect();
    Ok(Normalized { metadata: md, unmapped_fields })
}

/// Raw records from all sources, keyed for exact-name lookup.
#[derive(Debug, Clone, Default)]
pub struct CandidateIndex {
    by_source: BTreeMap<LinkSource, BTreeMap<String, Vec<RawRecord>>>,
}

impl CandidateIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a record under the value of its source's name field. GitHub
    /// records are keyed case-insensitively.
    pub fn insert(&mut self, source: LinkSource, record: RawRecord, mapping: &SchemaMapping) -> bool {
        let Some(key) = mapping.name_field(source).and_then(|f| record.get(f)) else {
            return false;
        };
        let key = lookup_key(source, key);
        self.by_source.entry(source).or_default().entry(key).or_default().push(record);
        true
    }

    pub fn len(&self) -> usize {
        self.by_source.values().flat_map(|m| m.values()).map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Raw candidates whose entry name equals `name`, in source precedence
    /// order. Package indices and the knowledge base compare byte-exact;
    /// the code host compares case-insensitively.
    pub fn exact_match_lookup(&self, name: &str) -> Vec<(LinkSource, &RawRecord)> {
        let mut out = Vec::new();
        for (&source, entries) in &self.by_source {
            if let Some(recs) = entries.get(&lookup_key(source, name)) {
                out.extend(recs.iter().map(|r| (source, r)));
            }
        }
        out
    }
}

fn lookup_key(source: LinkSource, name: &str) -> String {
    if source.is_code_host() {
        name.to_lowercase()
    } else {
        name.to_string()
    }
}

/// All normalized candidates for one mention plus the preferred one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub chosen: LinkedMetadata,
    pub candidates: Vec<LinkedMetadata>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkReport {
    pub links: BTreeMap<MentionId, Link>,
    /// `(source, mention, reason)` for candidates that failed to normalize.
    pub rejected: Vec<(LinkSource, String, String)>,
    /// Raw field names dropped during normalization, with counts.
    pub dropped_fields: BTreeMap<String, usize>,
}

/// Looks up each mention and normalizes its candidates. Only sources listed
/// in `precedence` are consulted, and the chosen record is the first
/// candidate in that order; its `mapped_to` lists every candidate's entry
/// name. [`LinkSource::ALL`] is the default order.
pub fn link_mentions<'a, I>(
    mentions: I,
    index: &CandidateIndex,
    mapping: &SchemaMapping,
    precedence: &[LinkSource],
) -> LinkReport
where
    I: IntoIterator<Item = (MentionId, &'a str)>,
{
    let mut report = LinkReport::default();
    for (id, name) in mentions {
        let mut hits: Vec<(usize, LinkSource, &RawRecord)> = index
            .exact_match_lookup(name)
            .into_iter()
            .filter_map(|(s, r)| precedence.iter().position(|&p| p == s).map(|rank| (rank, s, r)))
            .collect();
        hits.sort_by_key(|&(rank, _, _)| rank);
        let mut candidates = Vec::new();
        for (_, source, raw) in hits {
            match normalize_metadata(id, name, raw, source, mapping) {
                Ok(n) => {
                    for f in n.unmapped_fields {
                        *report.dropped_fields.entry(f).or_default() += 1;
                    }
                    candidates.push(n.metadata);
                }
                Err(e) => report.rejected.push((source, name.to_string(), e.to_string())),
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let mut chosen = candidates[0].clone();
        let mut all_names: Vec<String> = Vec::new();
        for c in &candidates {
            for m in &c.mapped_to {
                if !all_names.contains(m) {
                    all_names.push(m.clone());
                }
            }
        }
        chosen.mapped_to = all_names;
        report.links.insert(id, Link { chosen, candidates });
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkOrigin {
    /// Inherited from the cluster name.
    Cluster(MentionId),
    /// The mention's own exact match.
    Own,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagatedLink {
    pub metadata: LinkedMetadata,
    pub origin: LinkOrigin,
}

/// Gives every cluster member its cluster name's link; mentions whose
/// cluster name has no link, or that are not clustered, fall back to
/// their own exact match.
///
/// `cluster_names` maps each clustered mention to its cluster name, as
/// returned by [`crate::cluster::mapping`].
pub fn propagate_links(
    cluster_names: &BTreeMap<MentionId, MentionId>,
    table: &MentionTable,
    links: &BTreeMap<MentionId, Link>,
) -> BTreeMap<MentionId, PropagatedLink> {
    let mut out = BTreeMap::new();
    for (id, _) in table.iter() {
        let from_cluster = cluster_names.get(&id).and_then(|&name_id| links.get(&name_id).map(|l| (name_id, l)));
        let entry = match from_cluster {
            Some((name_id, l)) => PropagatedLink { metadata: l.chosen.clone(), origin: LinkOrigin::Cluster(name_id) },
            None => match links.get(&id) {
                Some(l) => PropagatedLink { metadata: l.chosen.clone(), origin: LinkOrigin::Own },
                None => continue,
            },
        };
        out.insert(id, entry);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub source: LinkSource,
    pub count: usize,
    pub percent: f64,
}

/// Linked mentions per source, most frequent first.
pub fn link_report<'a, I>(linked: I) -> Vec<CoverageRow>
where
    I: IntoIterator<Item = &'a LinkedMetadata>,
{
    let mut counts: BTreeMap<LinkSource, usize> = BTreeMap::new();
    for md in linked {
        if let Some(s) = md.source {
            *counts.entry(s).or_default() += 1;
        }
    }
    let total: usize = counts.values().sum();
    let mut rows: Vec<CoverageRow> = counts
        .into_iter()
        .map(|(source, count)| CoverageRow { source, count, percent: 100.0 * count as f64 / total as f64 })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then(a.source.cmp(&b.source)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mapping() -> SchemaMapping {
        SchemaMapping::default()
    }

    #[test]
    fn every_field_has_one_rule_per_source() {
        let m = mapping();
        for s in LinkSource::ALL {
            for f in NormalizedField::ALL {
                assert!(m.rules.contains_key(&(s, f)));
            }
        }
        assert_eq!(m.rules.len(), LinkSource::ALL.len() * NormalizedField::ALL.len());
    }

    #[test]
    fn scicrunch_resource_id_is_rrid() {
        let raw = RawRecord::from_fields([
            ("Resource Name", "ImageJ"),
            ("Resource ID", "SCR_003070"),
            ("Resource ID Link", "https://scicrunch.org/resolver/SCR_003070"),
            ("Alternate URLs", "https://a.example, https://b.example"),
            ("Old URLs", "https://c.example"),
            ("Proper Citation", "(RRID:SCR_003070)"),
            ("Keywords", "image analysis"),
        ]);
        let n = normalize_metadata(MentionId(1), "ImageJ", &raw, LinkSource::SciCrunch, &mapping()).unwrap();
        assert_eq!(n.metadata.rrid.as_deref(), Some("SCR_003070"));
        assert_eq!(n.metadata.other_urls, ["https://a.example", "https://b.example", "https://c.example"]);
        assert_eq!(n.metadata.reference, ["(RRID:SCR_003070)"]);
        assert_eq!(n.unmapped_fields, ["Keywords"]);
    }

    #[test]
    fn cran_title_is_description() {
        let raw = RawRecord::from_fields([("CRAN Package", "ggplot2"), ("CRAN Link", "https://cran.r-project.org/package=ggplot2"), ("Title", "Create Elegant Data Visualisations")]);
        let n = normalize_metadata(MentionId(0), "ggplot2", &raw, LinkSource::Cran, &mapping()).unwrap();
        assert_eq!(n.metadata.description, ["Create Elegant Data Visualisations"]);
        assert!(n.metadata.rrid.is_none());
    }

    #[test]
    fn github_url_fans_out() {
        let raw = RawRecord::from_fields([("best_github_match", "samtools"), ("github_url", "https://github.com/samtools/samtools"), ("license", "MIT")]);
        let n = normalize_metadata(MentionId(0), "samtools", &raw, LinkSource::GitHub, &mapping()).unwrap();
        let url = "https://github.com/samtools/samtools";
        assert_eq!(n.metadata.package_url, url);
        assert_eq!(n.metadata.homepage_url, [url]);
        assert_eq!(n.metadata.github_repo, [url]);
        assert_eq!(n.metadata.github_repo_licenses, ["MIT"]);
        assert!(n.metadata.exact_match);
    }

    #[test]
    fn missing_package_url_rejected() {
        let raw = RawRecord::from_fields([("pypi package", "x")]);
        assert!(normalize_metadata(MentionId(0), "x", &raw, LinkSource::PyPI, &mapping()).is_err());
    }

    #[test]
    fn page_enrichment() {
        let mut raw = RawRecord::from_fields([("pypi package", "numpy"), ("pypi_url", "https://pypi.org/project/numpy")]);
        raw.page.insert("description".into(), "Fundamental package for array computing".into());
        raw.page.insert("homepage_url".into(), "https://numpy.org".into());
        let n = normalize_metadata(MentionId(0), "numpy", &raw, LinkSource::PyPI, &mapping()).unwrap();
        assert_eq!(n.metadata.description.len(), 1);
        assert_eq!(n.metadata.homepage_url, ["https://numpy.org"]);
    }

    #[test]
    fn precedence_and_case_rules() {
        let m = mapping();
        let mut idx = CandidateIndex::new();
        idx.insert(LinkSource::GitHub, RawRecord::from_fields([("best_github_match", "Limma"), ("github_url", "https://github.com/x/Limma")]), &m);
        idx.insert(LinkSource::Bioconductor, RawRecord::from_fields([("Bioconductor Package", "limma"), ("Bioconductor Link", "https://www.bioconductor.org/packages/limma")]), &m);
        idx.insert(LinkSource::PyPI, RawRecord::from_fields([("pypi package", "Limma"), ("pypi_url", "https://pypi.org/project/Limma")]), &m);
        let hits = idx.exact_match_lookup("limma");
        assert_eq!(hits.iter().map(|h| h.0).collect::<Vec<_>>(), [LinkSource::Bioconductor, LinkSource::GitHub]);
        let rep = link_mentions([(MentionId(0), "limma")], &idx, &m, &LinkSource::ALL);
        let link = &rep.links[&MentionId(0)];
        assert_eq!(link.chosen.source, Some(LinkSource::Bioconductor));
        assert_eq!(link.chosen.mapped_to, ["limma", "Limma"]);
        assert!(!link.candidates[1].exact_match);
        assert!(idx.exact_match_lookup("zzz-no-such-package-qq").is_empty());
    }

    #[test]
    fn members_inherit_cluster_link() {
        let table = MentionTable::assign(["scikit-learn", "sklearn", "scikit learn", "numpy", "zzz"]);
        let id = |s: &str| table.id(s).unwrap();
        let link = |name: &str, url: &str| {
            let md = LinkedMetadata { id: id(name), software_mention: name.into(), package_url: url.into(), source: Some(LinkSource::PyPI), ..Default::default() };
            Link { chosen: md.clone(), candidates: vec![md] }
        };
        let mut links = BTreeMap::new();
        links.insert(id("scikit-learn"), link("scikit-learn", "https://pypi.org/project/scikit-learn"));
        links.insert(id("sklearn"), link("sklearn", "https://pypi.org/project/sklearn"));
        links.insert(id("numpy"), link("numpy", "https://pypi.org/project/numpy"));
        let names: BTreeMap<MentionId, MentionId> =
            ["scikit-learn", "sklearn", "scikit learn"].iter().map(|&m| (id(m), id("scikit-learn"))).collect();
        let out = propagate_links(&names, &table, &links);
        for m in ["sklearn", "scikit learn"] {
            assert_eq!(out[&id(m)].metadata.package_url, "https://pypi.org/project/scikit-learn");
            assert_eq!(out[&id(m)].origin, LinkOrigin::Cluster(id("scikit-learn")));
        }
        assert_eq!(out[&id("numpy")].origin, LinkOrigin::Own);
        assert!(!out.contains_key(&id("zzz")));
    }

    #[test]
    fn coverage_percentages() {
        let mk = |s| LinkedMetadata { source: Some(s), package_url: "u".into(), ..Default::default() };
        let v = vec![mk(LinkSource::GitHub), mk(LinkSource::GitHub), mk(LinkSource::GitHub), mk(LinkSource::Cran)];
        let rows = link_report(&v);
        assert_eq!(rows[0].source, LinkSource::GitHub);
        assert_eq!(rows[0].count, 3);
        assert!((rows[0].percent - 75.0).abs() < 1e-12);
        assert!(link_report(&[]).is_empty());
    }
}
