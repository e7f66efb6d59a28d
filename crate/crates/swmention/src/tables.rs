//! Small TSV and list files: id and frequency tables, registry snapshots,
//! the knowledge-base dictionary, the stoplist, synonym pairs and the
//! matrix dump.

use std::io::{self, BufRead, Write};
use std::path::Path;

use swmention_core::graph::{SimilarityGraph, Stoplist};
use swmention_core::mention::{FrequencyTable, MentionId, MentionTable};
use swmention_core::synonyms::{KbSynonymDict, SynonymPair, SynonymSource};

use crate::error::{Error, IoContext, Result};
use crate::io::{open_input, write_file};

/// Reads a headed TSV, checking the header, and returns `(line, fields)`
/// for every data row.
pub fn read_tsv(path: &Path, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut lines = open_input(path)?.lines();
    let header = lines.next().transpose().at(path)?.unwrap_or_default();
    if header != columns.join("\t") {
        return Err(Error::Header { path: path.to_path_buf(), expected: columns.join(", ") });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.at(path)?;
        let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
        if fields.len() != columns.len() {
            return Err(Error::Row {
                path: path.to_path_buf(),
                line: i + 2,
                message: format!("expected {} columns, found {}", columns.len(), fields.len()),
            });
        }
        rows.push((i + 2, fields));
    }
    Ok(rows)
}

/// One entry per non-blank line, surrounding whitespace removed.
pub fn read_list(path: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in open_input(path)?.lines() {
        let line = line.at(path)?;
        let t = line.trim();
        if !t.is_empty() {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

pub fn write_list<'a, I: IntoIterator<Item = &'a str>>(path: &Path, items: I) -> Result<()> {
    write_file(path, |w| items.into_iter().try_for_each(|s| writeln!(w, "{s}")))
}

pub const MENTION2ID_COLUMNS: [&str; 2] = ["mention", "ID"];
pub const FREQUENCY_COLUMNS: [&str; 2] = ["mention", "frequency"];
pub const KB_COLUMNS: [&str; 2] = ["key", "synonym"];
pub const SYNONYM_COLUMNS: [&str; 6] = ["ID", "synonym_ID", "software_mention", "synonym", "synonym_conf", "synonym_source"];
pub const MATRIX_COLUMNS: [&str; 4] = ["i", "j", "value", "source"];

fn bad_row(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Row { path: path.to_path_buf(), line, message: message.into() }
}

pub fn write_mention2id(path: &Path, table: &MentionTable) -> Result<()> {
    write_file(path, |w| {
        writeln!(w, "{}", MENTION2ID_COLUMNS.join("\t"))?;
        table.iter().try_for_each(|(id, name)| writeln!(w, "{name}\t{id}"))
    })
}

pub fn read_mention2id(path: &Path) -> Result<MentionTable> {
    let mut rows = Vec::new();
    for (line, f) in read_tsv(path, &MENTION2ID_COLUMNS)? {
        let id = f[1].parse::<u32>().map_err(|_| bad_row(path, line, format!("bad ID `{}`", f[1])))?;
        rows.push((f[0].clone(), MentionId(id)));
    }
    MentionTable::from_rows(rows).ok_or_else(|| Error::format(path, "IDs are not a dense bijection onto 0..n"))
}

pub fn write_frequencies(path: &Path, table: &MentionTable, freq: &FrequencyTable) -> Result<()> {
    write_file(path, |w| {
        writeln!(w, "{}", FREQUENCY_COLUMNS.join("\t"))?;
        freq.iter().try_for_each(|(id, n)| writeln!(w, "{}\t{n}", table.name(id).unwrap_or_default()))
    })
}

pub fn read_frequencies(path: &Path, table: &MentionTable) -> Result<FrequencyTable> {
    let mut freq = FrequencyTable::default();
    for (line, f) in read_tsv(path, &FREQUENCY_COLUMNS)? {
        let id = table.id(&f[0]).ok_or_else(|| bad_row(path, line, format!("`{}` is not in the mention table", f[0])))?;
        let n = f[1].parse::<u32>().map_err(|_| bad_row(path, line, format!("bad frequency `{}`", f[1])))?;
        freq.insert(id, n);
    }
    Ok(freq)
}

pub fn read_kb_dictionary(path: &Path) -> Result<KbSynonymDict> {
    Ok(read_tsv(path, &KB_COLUMNS)?.into_iter().map(|(_, f)| (f[0].clone(), f[1].clone())).collect())
}

pub fn read_stoplist(path: &Path) -> Result<Stoplist> {
    Ok(Stoplist::new(read_list(path)?))
}

fn format_conf(x: f64) -> String {
    // shortest representation that reads back to the same value
    format!("{x}")
}

pub fn write_synonyms(path: &Path, table: &MentionTable, pairs: &[SynonymPair]) -> Result<()> {
    write_file(path, |w| write_synonyms_to(w, table, pairs))
}

pub fn write_synonyms_to<W: Write + ?Sized>(w: &mut W, table: &MentionTable, pairs: &[SynonymPair]) -> io::Result<()> {
    writeln!(w, "{}", SYNONYM_COLUMNS.join("\t"))?;
    for p in pairs {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            p.a,
            p.b,
            table.name(p.a).unwrap_or_default(),
            table.name(p.b).unwrap_or_default(),
            format_conf(p.confidence),
            p.source.label()
        )?;
    }
    Ok(())
}

/// Reads synonym pairs, checking ids and strings against `table`.
pub fn read_synonyms(path: &Path, table: &MentionTable) -> Result<Vec<SynonymPair>> {
    let mut out = Vec::new();
    for (line, f) in read_tsv(path, &SYNONYM_COLUMNS)? {
        let id = |s: &str| s.parse::<u32>().map(MentionId).map_err(|_| bad_row(path, line, format!("bad id `{s}`")));
        let (a, b) = (id(&f[0])?, id(&f[1])?);
        for (i, name) in [(a, &f[2]), (b, &f[3])] {
            if table.name(i) != Some(name.as_str()) {
                return Err(bad_row(path, line, format!("id {i} does not name `{name}` in the mention table")));
            }
        }
        let conf: f64 = f[4].parse().map_err(|_| bad_row(path, line, format!("bad confidence `{}`", f[4])))?;
        let source = SynonymSource::parse(&f[5]).ok_or_else(|| bad_row(path, line, format!("unknown source `{}`", f[5])))?;
        let pair = SynonymPair::new(a, b, conf, source).ok_or_else(|| bad_row(path, line, "self-pair or confidence outside (0, 1]"))?;
        out.push(pair);
    }
    Ok(out)
}

pub fn write_matrix(path: &Path, graph: &SimilarityGraph) -> Result<()> {
    write_file(path, |w| {
        writeln!(w, "{}", MATRIX_COLUMNS.join("\t"))?;
        graph.edges().try_for_each(|((a, b), e)| writeln!(w, "{a}\t{b}\t{}\t{}", format_conf(e.value), e.source.label()))
    })
}
