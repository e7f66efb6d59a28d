//! Evaluation CSV readers and the metrics report.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use swmention_core::eval::{BinaryLabel, CurationLabelRow, LinkVerdict, MultiLabel, SynonymLabel, SynonymVerdict};
use swmention_core::linking::LinkSource;

use crate::error::{Error, Result};
use crate::io::{open_input, write_file};

struct Table {
    header: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn column(&self, path: &Path, names: &[&str]) -> Result<usize> {
        self.find(names)
            .ok_or_else(|| Error::format(path, format!("no column named {}", names.join(" or "))))
    }

    fn find(&self, names: &[&str]) -> Option<usize> {
        names.iter().find_map(|n| self.header.iter().position(|h| h.trim() == *n))
    }
}

fn read_csv(path: &Path) -> Result<Table> {
    let mut r = csv::ReaderBuilder::new().flexible(false).from_reader(open_input(path)?);
    let header = r
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_string())
        .collect();
    let rows = r.records().collect::<Result<Vec<_>, _>>().map_err(|e| Error::format(path, e.to_string()))?;
    Ok(Table { header, rows })
}

fn bad(path: &Path, i: usize, message: String) -> Error {
    // csv line numbers: header is line 1
    Error::Row { path: path.to_path_buf(), line: i + 2, message }
}

/// Curation rows in file order, which is corpus frequency, descending.
pub fn read_curation(path: &Path) -> Result<Vec<CurationLabelRow>> {
    let t = read_csv(path)?;
    let mention = t.column(path, &["software_mention"])?;
    let label = t.column(path, &["label"])?;
    let multi = t.find(&["multi_label"]);
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let l = &r[label];
            let label = BinaryLabel::parse(l).ok_or_else(|| bad(path, i, format!("unknown label `{l}`")))?;
            let multi_label = match multi.map(|m| r[m].trim()).filter(|m| !m.is_empty()) {
                Some(m) => Some(MultiLabel::parse(m).ok_or_else(|| bad(path, i, format!("unknown multi_label `{m}`")))?),
                None => None,
            };
            Ok(CurationLabelRow { mention: r[mention].to_string(), multi_label, label })
        })
        .collect()
}

pub fn read_synonym_labels(path: &Path) -> Result<Vec<SynonymLabel>> {
    let t = read_csv(path)?;
    let mention = t.column(path, &["software_mention", "link_label"])?;
    let synonym = t.column(path, &["synonym"])?;
    let label = t.column(path, &["synonym_label"])?;
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let l = &r[label];
            let label = SynonymVerdict::parse(l).ok_or_else(|| bad(path, i, format!("unknown synonym_label `{l}`")))?;
            Ok(SynonymLabel { mention: r[mention].to_string(), synonym: r[synonym].to_string(), label })
        })
        .collect()
}

/// `(is_code_host, verdict)` per evaluated link.
pub fn read_link_labels(path: &Path) -> Result<Vec<(bool, LinkVerdict)>> {
    let t = read_csv(path)?;
    let source = t.column(path, &["source"])?;
    let label = t.column(path, &["link_label", "label", "evaluation"])?;
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let l = &r[label];
            let v = LinkVerdict::parse(l).ok_or_else(|| bad(path, i, format!("unknown link label `{l}`")))?;
            let s = r[source].trim();
            let code_host = LinkSource::parse(s).map(LinkSource::is_code_host).unwrap_or(s.eq_ignore_ascii_case("GitHub API"));
            Ok((code_host, v))
        })
        .collect()
}

/// Agreement ratings in long form: one `item,rater,label` row per rating.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ratings {
    pub items: Vec<String>,
    pub raters: Vec<String>,
    /// `labels[rater][item]`.
    pub labels: Vec<Vec<Option<String>>>,
}

impl Ratings {
    /// Per-item label lists, for Fleiss. Fails unless every rater rated
    /// every item.
    pub fn complete_items(&self) -> Option<Vec<Vec<String>>> {
        (0..self.items.len()).map(|u| self.labels.iter().map(|r| r[u].clone()).collect::<Option<Vec<_>>>()).collect()
    }

    /// The same ratings with every label mapped through `f`.
    pub fn map(&self, f: impl Fn(&str) -> String) -> Ratings {
        Ratings {
            items: self.items.clone(),
            raters: self.raters.clone(),
            labels: self.labels.iter().map(|r| r.iter().map(|l| l.as_deref().map(&f)).collect()).collect(),
        }
    }
}

pub fn read_ratings(path: &Path) -> Result<Ratings> {
    let t = read_csv(path)?;
    let (item, rater, label) = (t.column(path, &["item"])?, t.column(path, &["rater"])?, t.column(path, &["label"])?);
    let mut items: BTreeMap<String, usize> = BTreeMap::new();
    let mut raters: BTreeMap<String, usize> = BTreeMap::new();
    for r in &t.rows {
        let n = items.len();
        items.entry(r[item].to_string()).or_insert(n);
        let n = raters.len();
        raters.entry(r[rater].to_string()).or_insert(n);
    }
    let order = |m: BTreeMap<String, usize>| {
        let mut v: Vec<(String, usize)> = m.into_iter().collect();
        v.sort_by_key(|&(_, i)| i);
        v.into_iter().map(|(s, _)| s).collect::<Vec<_>>()
    };
    let (items_v, raters_v) = (order(items.clone()), order(raters.clone()));
    let mut labels = vec![vec![None; items_v.len()]; raters_v.len()];
    for (i, r) in t.rows.iter().enumerate() {
        let slot = &mut labels[raters[&r[rater]]][items[&r[item]]];
        if slot.is_some() {
            return Err(bad(path, i, format!("rater `{}` rated item `{}` twice", &r[rater], &r[item])));
        }
        *slot = Some(r[label].trim().to_string());
    }
    Ok(Ratings { items: items_v, raters: raters_v, labels })
}

/// Named metric values; `None` marks a metric that is undefined for the
/// input, which is reported distinctly from zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub values: BTreeMap<String, Value>,
}

impl MetricsReport {
    pub fn set(&mut self, key: impl Into<String>, v: impl Into<Value>) {
        self.values.insert(key.into(), v.into());
    }

    pub fn set_opt(&mut self, key: impl Into<String>, v: Option<f64>) {
        self.set(key, v.map_or(Value::Null, |x| json!(x)));
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.values.get(key).and_then(Value::as_f64)
    }

    /// `key = value` lines, sorted by key.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            let v = match v {
                Value::Null => "undefined".to_string(),
                Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.values).expect("report always serializes")
    }

    pub fn write(&self, text: &Path, json: &Path) -> Result<()> {
        write_file(text, |w| w.write_all(self.to_text().as_bytes()))?;
        write_file(json, |w| writeln!(w, "{}", self.to_json()))
    }
}
