//! Link snapshots and metadata outputs.
//!
//! A snapshot directory holds one sub-directory per source (`pypi`, `cran`,
//! `bioconductor`, `scicrunch`, `github`) with one JSON document per
//! queried name:
//!
//! ```json
//! {"query": "limma", "records": [{"fields": {"Bioconductor Package": "limma", ...}, "page": {}}]}
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swmention_core::linking::{CandidateIndex, LinkSource, LinkedMetadata, RawRecord, SchemaMapping};

use crate::error::{Error, IoContext, Result};
use crate::io::{read_to_string, write_file};

pub fn source_dir(source: LinkSource) -> &'static str {
    match source {
        LinkSource::Bioconductor => "bioconductor",
        LinkSource::Cran => "cran",
        LinkSource::PyPI => "pypi",
        LinkSource::SciCrunch => "scicrunch",
        LinkSource::GitHub => "github",
    }
}

/// Raw CSV columns per source.
pub fn raw_columns(source: LinkSource) -> &'static [&'static str] {
    match source {
        LinkSource::Bioconductor => &["Bioconductor Package", "Bioconductor Link", "Maintainer", "Title"],
        LinkSource::Cran => &["CRAN Package", "CRAN Link", "Title"],
        LinkSource::GitHub => &["software_mention", "best_github_match", "description", "github_url", "license", "exact_match"],
        LinkSource::PyPI => &["pypi package", "pypi_url"],
        LinkSource::SciCrunch => &[
            "software_name",
            "scicrunch_synonyms",
            "Resource Name",
            "Resource Name Link",
            "Description",
            "Keywords",
            "Resource ID",
            "Resource ID Link",
            "Proper Citation",
            "Parent Organization",
            "Parent Organization Link",
            "Related Condition",
            "Funding Agency",
            "Relation",
            "Reference",
            "Website Status",
            "Alternate IDs",
            "Alternate URLs",
            "Old URLs",
            "Reference Link",
        ],
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub fields: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub page: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub query: String,
    #[serde(default)]
    pub records: Vec<SnapshotRecord>,
}

impl From<SnapshotRecord> for RawRecord {
    fn from(r: SnapshotRecord) -> Self {
        RawRecord { fields: r.fields, page: r.page }
    }
}

/// File name for a query: ASCII alphanumerics, `-`, `_` and `.` are kept,
/// every other byte is written as `%XX`.
pub fn snapshot_file_name(query: &str) -> String {
    let mut s = String::new();
    for b in query.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_') || (b == b'.' && !s.is_empty()) {
            s.push(b as char);
        } else {
            s.push_str(&format!("%{b:02X}"));
        }
    }
    s.push_str(".json");
    s
}

pub fn snapshot_path(dir: &Path, source: LinkSource, query: &str) -> PathBuf {
    dir.join(source_dir(source)).join(snapshot_file_name(query))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_snapshot(dir: &Path, source: LinkSource, snap: &Snapshot) -> Result<()> {
    let path = snapshot_path(dir, source, &snap.query);
    let json = serde_json::to_string_pretty(snap).map_err(|e| Error::format(&path, e.to_string()))?;
    write_file(&path, |w| writeln!(w, "{json}"))
}

/// Everything loaded from a snapshot directory.
#[derive(Debug, Clone, Default)]
pub struct Snapshots {
    pub index: CandidateIndex,
    /// Raw records per source in file-name order, for the raw CSVs.
    pub raw: BTreeMap<LinkSource, Vec<RawRecord>>,
    /// Records skipped because they lack the source's name field.
    pub unkeyed: usize,
}

/// Loads every snapshot of the listed sources. Missing source directories
/// are treated as empty.
pub fn load_snapshots(dir: &Path, sources: &[LinkSource], mapping: &SchemaMapping) -> Result<Snapshots> {
    if !dir.is_dir() {
        return Err(Error::MissingInput { artifact: "link snapshot directory", path: dir.to_path_buf() });
    }
    let mut out = Snapshots::default();
    for &source in sources {
        let sub = dir.join(source_dir(source));
        if !sub.is_dir() {
            continue;
        }
        let mut files: Vec<PathBuf> = std::fs::read_dir(&sub)
            .at(&sub)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()
            .at(&sub)?;
        files.retain(|p| p.extension().is_some_and(|e| e == "json"));
        files.sort();
        for f in files {
            for rec in read_snapshot(&f)?.records {
                let raw = RawRecord::from(rec);
                out.raw.entry(source).or_default().push(raw.clone());
                if !out.index.insert(source, raw, mapping) {
                    out.unkeyed += 1;
                }
            }
        }
    }
    Ok(out)
}

pub fn write_raw_csv(path: &Path, source: LinkSource, records: &[RawRecord]) -> Result<()> {
    let cols = raw_columns(source);
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let csv_err = |e: csv::Error| Error::format(path, e.to_string());
        w.write_record(cols).map_err(csv_err)?;
        for r in records {
            w.write_record(cols.iter().map(|c| r.get(c).unwrap_or(""))).map_err(csv_err)?;
        }
        w.flush().at(path)?;
    }
    write_file(path, |w| w.write_all(&buf))
}

pub const METADATA_COLUMNS: [&str; 16] = [
    "ID",
    "software_mention",
    "mapped_to",
    "source",
    "platform",
    "package_url",
    "description",
    "homepage_url",
    "other_urls",
    "license",
    "github_repo",
    "github_repo_licenses",
    "exact_match",
    "RRID",
    "reference",
    "scicrunch_synonyms",
];

fn list(v: &[String]) -> String {
    serde_json::to_string(v).expect("string lists always serialize")
}

/// The 16 metadata fields of one record. Lists are JSON arrays and
/// `exact_match` is `True` or `False`.
pub fn metadata_fields(md: &LinkedMetadata) -> [String; 16] {
    [
        md.id.to_string(),
        md.software_mention.clone(),
        list(&md.mapped_to),
        md.source.map_or("", LinkSource::index_name).to_string(),
        list(&md.platform),
        md.package_url.clone(),
        list(&md.description),
        list(&md.homepage_url),
        list(&md.other_urls),
        list(&md.license),
        list(&md.github_repo),
        list(&md.github_repo_licenses),
        if md.exact_match { "True" } else { "False" }.to_string(),
        md.rrid.clone().unwrap_or_default(),
        list(&md.reference),
        list(&md.scicrunch_synonyms),
    ]
}

pub fn write_normalized_csv<'a, I>(path: &Path, records: I) -> Result<()>
where
    I: IntoIterator<Item = &'a LinkedMetadata>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let csv_err = |e: csv::Error| Error::format(path, e.to_string());
        w.write_record(METADATA_COLUMNS).map_err(csv_err)?;
        for md in records {
            w.write_record(metadata_fields(md)).map_err(csv_err)?;
        }
        w.flush().at(path)?;
    }
    write_file(path, |w| w.write_all(&buf))
}

/// Tab-separated master file. Field values never contain tabs or newlines
/// because lists are JSON-escaped and scalars are cleaned here.
pub fn write_metadata_tsv<'a, I>(path: &Path, records: I) -> Result<()>
where
    I: IntoIterator<Item = &'a LinkedMetadata>,
{
    write_file(path, |w| {
        writeln!(w, "{}", METADATA_COLUMNS.join("\t"))?;
        for md in records {
            let row: Vec<String> = metadata_fields(md).into_iter().map(|f| f.replace(['\t', '\n', '\r'], " ")).collect();
            writeln!(w, "{}", row.join("\t"))?;
        }
        Ok(())
    })
}
