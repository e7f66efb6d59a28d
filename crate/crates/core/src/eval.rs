//! Evaluation metrics: synonym-pair precision/recall/F1, Precision@k over
//! curation labels, inter-annotator agreement, and link-label summaries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynonymVerdict {
    Exact,
    Narrow,
    NotSynonym,
    Unclear,
    NotSoftware,
}

impl SynonymVerdict {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace(['_', '-'], " ").as_str() {
            "exact" => Some(SynonymVerdict::Exact),
            "narrow" => Some(SynonymVerdict::Narrow),
            "not synonym" | "incorrect" => Some(SynonymVerdict::NotSynonym),
            "unclear" => Some(SynonymVerdict::Unclear),
            "not software" => Some(SynonymVerdict::NotSoftware),
            _ => None,
        }
    }

    pub fn is_true_synonym(self) -> bool {
        matches!(self, SynonymVerdict::Exact | SynonymVerdict::Narrow)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymLabel {
    pub mention: String,
    pub synonym: String,
    pub label: SynonymVerdict,
}

/// What to do with pairs labelled `Unclear` or `NotSoftware`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UncertainPolicy {
    /// Leave them out of every count.
    #[default]
    Exclude,
    /// Treat them like `NotSynonym`.
    AsNegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// `None` when the denominator is zero.
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

/// Scores predicted synonym pairs against curator labels. Pairs are
/// unordered; predicted pairs without a label are ignored.
pub fn synonym_prf<'a, I>(predicted: I, labeled: &[SynonymLabel], policy: UncertainPolicy) -> Result<Prf>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let predicted: BTreeSet<(String, String)> = predicted.into_iter().map(|(a, b)| unordered(a, b)).collect();
    let mut truth: BTreeMap<(String, String), bool> = BTreeMap::new();
    for l in labeled {
        let positive = match (l.label, policy) {
            (v, _) if v.is_true_synonym() => true,
            (SynonymVerdict::NotSynonym, _) => false,
            (_, UncertainPolicy::AsNegative) => false,
            (_, UncertainPolicy::Exclude) => continue,
        };
        truth.insert(unordered(&l.mention, &l.synonym), positive);
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput("no usable synonym labels"));
    }
    let mut prf = Prf::default();
    for (pair, &positive) in &truth {
        match (predicted.contains(pair), positive) {
            (true, true) => prf.tp += 1,
            (true, false) => prf.fp += 1,
            (false, true) => prf.fn_ += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    prf.precision = ratio(prf.tp, prf.tp + prf.fp);
    prf.recall = ratio(prf.tp, prf.tp + prf.fn_);
    prf.f1 = match (prf.precision, prf.recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    Ok(prf)
}

/// Fine-grained curation category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultiLabel {
    Software,
    Algorithm,
    Database,
    Hardware,
    WebPlatform,
    Other,
    Unclear,
}

impl MultiLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace(['_', '-'], " ").as_str() {
            "software" => Some(MultiLabel::Software),
            "algorithm" => Some(MultiLabel::Algorithm),
            "database" => Some(MultiLabel::Database),
            "hardware" => Some(MultiLabel::Hardware),
            "web platform" => Some(MultiLabel::WebPlatform),
            "other" => Some(MultiLabel::Other),
            "unclear" => Some(MultiLabel::Unclear),
            _ => None,
        }
    }

    /// Software and algorithm are true software; the rest is not, except
    /// `Unclear`.
    pub fn collapse(self) -> BinaryLabel {
        match self {
            MultiLabel::Software | MultiLabel::Algorithm => BinaryLabel::SoftwareAndAlgorithm,
            MultiLabel::Unclear => BinaryLabel::Unclear,
            _ => BinaryLabel::NotSoftware,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryLabel {
    SoftwareAndAlgorithm,
    NotSoftware,
    Unclear,
}

impl BinaryLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "software&algorithm" | "software_and_algorithm" | "software" => Some(BinaryLabel::SoftwareAndAlgorithm),
            "not_software" | "not software" | "non-software" => Some(BinaryLabel::NotSoftware),
            "unclear" => Some(BinaryLabel::Unclear),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurationLabelRow {
    pub mention: String,
    pub multi_label: Option<MultiLabel>,
    pub label: BinaryLabel,
}

/// Category shares in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionAtK {
    pub k: usize,
    pub software: f64,
    pub not_software: f64,
    pub unclear: f64,
}

/// Shares of the first `k` rows, which must already be ordered by corpus
/// frequency, descending.
pub fn precision_at_k(rows: &[CurationLabelRow], k: usize) -> Result<PrecisionAtK> {
    if k == 0 {
        return Err(Error::invalid("k", "must be positive"));
    }
    if k > rows.len() {
        return Err(Error::invalid("k", alloc::format!("{k} exceeds the {} labelled rows", rows.len())));
    }
    let (mut s, mut n, mut u) = (0usize, 0usize, 0usize);
    for r in &rows[..k] {
        match r.label {
            BinaryLabel::SoftwareAndAlgorithm => s += 1,
            BinaryLabel::NotSoftware => n += 1,
            BinaryLabel::Unclear => u += 1,
        }
    }
    let pct = |c: usize| 100.0 * c as f64 / k as f64;
    Ok(PrecisionAtK { k, software: pct(s), not_software: pct(n), unclear: pct(u) })
}

/// Fleiss' kappa from an items x categories count matrix. Every row must
/// sum to the same number of raters, at least two.
pub fn fleiss_kappa(counts: &[Vec<u32>]) -> Result<f64> {
    let first = counts.first().ok_or(Error::EmptyInput("rating matrix"))?;
    let k = first.len();
    let n: u32 = first.iter().sum();
    if n < 2 {
        return Err(Error::invalid("raters", "need at least two ratings per item"));
    }
    let mut column_totals = alloc::vec![0u64; k];
    let mut agreement_sum = 0.0;
    for (row_idx, row) in counts.iter().enumerate() {
        if row.len() != k {
            return Err(Error::RaggedRatings { row: row_idx, expected: k, found: row.len() });
        }
        let total: u32 = row.iter().sum();
        if total != n {
            return Err(Error::RaggedRatings { row: row_idx, expected: n as usize, found: total as usize });
        }
        let sq: u64 = row.iter().map(|&c| u64::from(c) * u64::from(c)).sum();
        agreement_sum += (sq - u64::from(n)) as f64 / (f64::from(n) * f64::from(n - 1));
        for (j, &c) in row.iter().enumerate() {
            column_totals[j] += u64::from(c);
        }
    }
    let items = counts.len() as f64;
    let p_bar = agreement_sum / items;
    let grand = items * f64::from(n);
    let p_e: f64 = column_totals.iter().map(|&t| (t as f64 / grand) * (t as f64 / grand)).sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return Err(Error::Undefined("Fleiss' kappa (all ratings in one category)"));
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// Builds the Fleiss count matrix from per-item label lists.
pub fn fleiss_counts<T: Ord + Clone>(items: &[Vec<T>]) -> Vec<Vec<u32>> {
    let categories: BTreeSet<T> = items.iter().flatten().cloned().collect();
    let index: BTreeMap<T, usize> = categories.into_iter().enumerate().map(|(i, c)| (c, i)).collect();
    items
        .iter()
        .map(|labels| {
            let mut row = alloc::vec![0u32; index.len()];
            for l in labels {
                row[index[l]] += 1;
            }
            row
        })
        .collect()
}

/// Krippendorff's alpha, nominal metric, from a raters x items table with
/// missing ratings allowed. Items with fewer than two ratings are not
/// pairable and are skipped.
pub fn krippendorff_alpha<T: Ord + Clone>(ratings: &[Vec<Option<T>>]) -> Result<f64> {
    let items = ratings.iter().map(Vec::len).max().unwrap_or(0);
    let mut coincidence: BTreeMap<(T, T), f64> = BTreeMap::new();
    let mut pairable_items = 0usize;
    for u in 0..items {
        let values: Vec<&T> = ratings.iter().filter_map(|r| r.get(u).and_then(Option::as_ref)).collect();
        let m = values.len();
        if m < 2 {
            continue;
        }
        pairable_items += 1;
        let w = 1.0 / (m - 1) as f64;
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if i != j {
                    *coincidence.entry(((*a).clone(), (*b).clone())).or_default() += w;
                }
            }
        }
    }
    if pairable_items == 0 {
        return Err(Error::EmptyInput("no item has two or more ratings"));
    }
    let mut marginals: BTreeMap<&T, f64> = BTreeMap::new();
    let mut observed_disagreement = 0.0;
    for ((c, k), &o) in &coincidence {
        *marginals.entry(c).or_default() += o;
        if c != k {
            observed_disagreement += o;
        }
    }
    let n: f64 = marginals.values().sum();
    let sum_sq: f64 = marginals.values().map(|v| v * v).sum();
    let expected_disagreement = n * n - sum_sq;
    if expected_disagreement.abs() < 1e-12 {
        return Err(Error::Undefined("Krippendorff's alpha (no variation in ratings)"));
    }
    Ok(1.0 - (n - 1.0) * observed_disagreement / expected_disagreement)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkVerdict {
    Correct,
    Incorrect,
    Unclear,
}

impl LinkVerdict {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "correct" => Some(LinkVerdict::Correct),
            "incorrect" | "inccorrect" => Some(LinkVerdict::Incorrect),
            "unclear" => Some(LinkVerdict::Unclear),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkShares {
    pub total: usize,
    pub correct: usize,
    pub unclear: usize,
    pub incorrect: usize,
}

impl LinkShares {
    fn pct(&self, c: usize) -> Option<f64> {
        (self.total > 0).then(|| 100.0 * c as f64 / self.total as f64)
    }

    pub fn correct_pct(&self) -> Option<f64> {
        self.pct(self.correct)
    }

    pub fn unclear_pct(&self) -> Option<f64> {
        self.pct(self.unclear)
    }

    pub fn incorrect_pct(&self) -> Option<f64> {
        self.pct(self.incorrect)
    }

    fn add(&mut self, v: LinkVerdict) {
        self.total += 1;
        match v {
            LinkVerdict::Correct => self.correct += 1,
            LinkVerdict::Unclear => self.unclear += 1,
            LinkVerdict::Incorrect => self.incorrect += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkEvalSummary {
    pub all: LinkShares,
    pub excluding_code_host: LinkShares,
}

/// `rows` are `(is_code_host, verdict)`.
pub fn link_eval_summary(rows: &[(bool, LinkVerdict)]) -> Result<LinkEvalSummary> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("link evaluation rows"));
    }
    let mut s = LinkEvalSummary::default();
    for &(code_host, v) in rows {
        s.all.add(v);
        if !code_host {
            s.excluding_code_host.add(v);
        }
    }
    Ok(s)
}
