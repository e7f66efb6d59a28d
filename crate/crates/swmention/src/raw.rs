//! Raw mention TSV files (`comm`, `non_comm`, publishers' collection).
//!
//! Fields are separated by `\t` and rows by `\n`. Quote characters carry no
//! meaning. Empty optional fields read as `None` and are written back empty.

use std::borrow::Cow;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use swmention_core::mention::{CorpusKind, CurationLabel, License, MentionId, MentionRecord, TextSource};

use crate::error::{Error, Result};
use crate::io::open_input;

/// A data row that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct RawFile {
    pub records: Vec<MentionRecord>,
    /// Rows dropped in lenient mode.
    pub skipped: Vec<RowError>,
}

pub fn header(kind: CorpusKind) -> String {
    kind.columns().join("\t")
}

fn opt(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

/// Parses one data row, already split on tabs.
pub fn parse_row(kind: CorpusKind, fields: &[&str]) -> Result<MentionRecord, String> {
    let cols = kind.columns();
    if fields.len() != cols.len() {
        return Err(format!("expected {} columns, found {}", cols.len(), fields.len()));
    }
    let get = |name: &str| fields[cols.iter().position(|c| *c == name).unwrap()];
    let has = |name: &str| cols.contains(&name);

    let license = if has("license") && !get("license").is_empty() {
        Some(License::parse(get("license")).ok_or_else(|| format!("unknown license `{}`", get("license")))?)
    } else {
        None
    };
    let pubdate = match get("pubdate") {
        "" => None,
        s => Some(s.parse::<i32>().map_err(|_| format!("pubdate `{s}` is not a year"))?),
    };
    let number = match get("number") {
        "" => 0,
        s => s.parse::<u32>().map_err(|_| format!("number `{s}` is not a non-negative integer"))?,
    };
    let source = TextSource::parse(get("source"));
    if number != 0 && !source.is_numbered() {
        return Err(format!("number {number} given for `{}`, which is unnumbered", source.as_str()));
    }
    let software = get("software");
    if software.trim().is_empty() {
        return Err("empty software mention".into());
    }
    let id = match get("ID") {
        "" => None,
        s => Some(MentionId(s.parse::<u32>().map_err(|_| format!("ID `{s}` is not a mention id"))?)),
    };
    let curation_label =
        CurationLabel::parse(get("curation_label")).ok_or_else(|| format!("unknown curation_label `{}`", get("curation_label")))?;
    let pick = |name: &str| if has(name) { opt(get(name)) } else { None };
    Ok(MentionRecord {
        license,
        location: pick("location"),
        pmcid: pick("pmcid"),
        pmid: pick("pmid"),
        doi: opt(get("doi")),
        pubdate,
        source,
        number,
        text: get("text").to_string(),
        software: software.to_string(),
        version: pick("version"),
        id,
        curation_label,
    })
}

/// Streaming reader over the data rows of a raw file.
pub struct MentionReader<R> {
    reader: R,
    kind: CorpusKind,
    line: usize,
    buf: String,
}

impl<R: BufRead> MentionReader<R> {
    /// Consumes and checks the header row.
    pub fn new(mut reader: R, kind: CorpusKind) -> Result<Self, RowError> {
        let mut buf = String::new();
        let n = reader.read_line(&mut buf).map_err(|e| RowError { line: 1, message: e.to_string() })?;
        let got = buf.strip_suffix('\n').unwrap_or(&buf);
        if n == 0 || got != header(kind) {
            return Err(RowError { line: 1, message: format!("expected header `{}`", header(kind).replace('\t', "\\t")) });
        }
        Ok(MentionReader { reader, kind, line: 1, buf })
    }
}

impl<R: BufRead> Iterator for MentionReader<R> {
    type Item = Result<MentionRecord, RowError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.buf.clear();
        self.line += 1;
        let line = self.line;
        match self.reader.read_line(&mut self.buf) {
            Ok(0) => None,
            Ok(_) => {
                let row = self.buf.strip_suffix('\n').unwrap_or(&self.buf);
                let fields: Vec<&str> = row.split('\t').collect();
                Some(parse_row(self.kind, &fields).map_err(|message| RowError { line, message }))
            }
            Err(e) => Some(Err(RowError { line, message: e.to_string() })),
        }
    }
}

/// Reads a whole raw file. In strict mode the first bad row is fatal;
/// otherwise bad rows are skipped and reported.
pub fn read_mentions(path: &Path, kind: CorpusKind, strict: bool) -> Result<RawFile> {
    let reader = MentionReader::new(open_input(path)?, kind)
        .map_err(|e| Error::Header { path: path.to_path_buf(), expected: e.message })?;
    let mut out = RawFile::default();
    for row in reader {
        match row {
            Ok(r) => out.records.push(r),
            Err(e) if strict => return Err(row_error(path, e)),
            Err(e) => out.skipped.push(e),
        }
    }
    Ok(out)
}

pub(crate) fn row_error(path: &Path, e: RowError) -> Error {
    Error::Row { path: PathBuf::from(path), line: e.line, message: e.message }
}

/// Field values of `rec` in the column order of `kind`.
pub fn record_fields(kind: CorpusKind, rec: &MentionRecord) -> Vec<Cow<'_, str>> {
    fn s(o: &Option<String>) -> Cow<'_, str> {
        Cow::Borrowed(o.as_deref().unwrap_or(""))
    }
    kind.columns()
        .iter()
        .map(|&c| match c {
            "license" => Cow::Borrowed(rec.license.map_or("", License::as_str)),
            "location" => s(&rec.location),
            "pmcid" => s(&rec.pmcid),
            "pmid" => s(&rec.pmid),
            "doi" => s(&rec.doi),
            "pubdate" => rec.pubdate.map_or(Cow::Borrowed(""), |y| Cow::Owned(y.to_string())),
            "source" => Cow::Borrowed(rec.source.as_str()),
            "number" => Cow::Owned(rec.number.to_string()),
            "text" => Cow::Borrowed(rec.text.as_str()),
            "software" => Cow::Borrowed(rec.software.as_str()),
            "version" => s(&rec.version),
            "ID" => rec.id.map_or(Cow::Borrowed(""), |id| Cow::Owned(id.to_string())),
            "curation_label" => Cow::Borrowed(rec.curation_label.as_str()),
            other => unreachable!("unknown column {other}"),
        })
        .collect()
}

pub fn write_mentions<'a, W, I>(w: &mut W, kind: CorpusKind, records: I) -> io::Result<()>
where
    W: Write + ?Sized,
    I: IntoIterator<Item = &'a MentionRecord>,
{
    writeln!(w, "{}", header(kind))?;
    for rec in records {
        writeln!(w, "{}", record_fields(kind, rec).join("\t"))?;
    }
    Ok(())
}
