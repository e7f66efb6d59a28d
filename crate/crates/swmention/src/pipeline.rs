//! Pipeline stages. Each stage reads the previous stage's files from the
//! output directory, writes its own, and records a manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use swmention_core::cluster::{assemble, cluster_component, MentionStatus};
use swmention_core::eval::{
    fleiss_counts, fleiss_kappa, krippendorff_alpha, link_eval_summary, precision_at_k, synonym_prf, MultiLabel,
};
use swmention_core::graph::{SimilarityGraph, Stoplist};
use swmention_core::linking::{link_mentions, link_report, propagate_links, LinkOrigin, LinkSource, SchemaMapping};
use swmention_core::mention::{compute_frequencies, merge_frequencies, CorpusKind, MentionId, MentionTable};
use swmention_core::synonyms::{
    generate_keyword_synonyms, load_kb_synonyms, sort_pairs, RegistryIndex, SimilarityIndex, SynonymPair, TokenIndex,
};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::evaluation::{read_curation, read_link_labels, read_ratings, read_synonym_labels, MetricsReport, Ratings};
use crate::io::write_file;
use crate::manifest::Manifest;
use crate::metadata::{load_snapshots, source_dir, write_metadata_tsv, write_normalized_csv, write_raw_csv};
use crate::raw::{read_mentions, record_fields, header, MentionReader};
use crate::tables::{
    read_frequencies, read_kb_dictionary, read_list, read_mention2id, read_stoplist, read_synonyms, read_tsv,
    write_frequencies, write_matrix, write_mention2id, write_synonyms,
};

/// File locations under the output directory.
#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn mention2id(&self) -> PathBuf {
        self.root.join("intermediate/mention2id.tsv")
    }
    pub fn frequencies(&self) -> PathBuf {
        self.root.join("intermediate/frequencies.tsv")
    }
    pub fn synonyms(&self) -> PathBuf {
        self.root.join("synonyms/synonyms.tsv")
    }
    pub fn matrix(&self) -> PathBuf {
        self.root.join("disambiguated/matrix.tsv")
    }
    pub fn clusters(&self) -> PathBuf {
        self.root.join("disambiguated/clusters.tsv")
    }
    pub fn status(&self) -> PathBuf {
        self.root.join("disambiguated/mention_status.tsv")
    }
    pub fn accounting(&self) -> PathBuf {
        self.root.join("disambiguated/accounting.tsv")
    }
    pub fn disambiguated(&self, kind: CorpusKind) -> PathBuf {
        self.root.join(format!("disambiguated/{}_disambiguated.tsv", kind.as_str()))
    }
    pub fn raw_metadata(&self, s: LinkSource) -> PathBuf {
        self.root.join(format!("linked/raw/{}_raw_df.csv", source_dir(s)))
    }
    pub fn normalized_metadata(&self, s: LinkSource) -> PathBuf {
        self.root.join(format!("linked/normalized/{}_df.csv", source_dir(s)))
    }
    pub fn metadata(&self) -> PathBuf {
        self.root.join("linked/metadata.tsv")
    }
    pub fn mention_links(&self) -> PathBuf {
        self.root.join("linked/mention_links.tsv")
    }
    pub fn coverage(&self) -> PathBuf {
        self.root.join("linked/coverage.tsv")
    }
    pub fn metrics_text(&self) -> PathBuf {
        self.root.join("evaluation/metrics.txt")
    }
    pub fn metrics_json(&self) -> PathBuf {
        self.root.join("evaluation/metrics.json")
    }
    pub fn manifest(&self, stage: &str) -> PathBuf {
        self.root.join(format!("manifests/{stage}.json"))
    }
}

fn require<'a>(artifact: &'static str, path: Option<&'a Path>) -> Result<&'a Path> {
    match path {
        Some(p) if p.exists() => Ok(p),
        Some(p) => Err(Error::MissingInput { artifact, path: p.to_path_buf() }),
        None => Err(Error::Config(format!("{artifact} is not configured"))),
    }
}

fn require_file(artifact: &'static str, path: PathBuf) -> Result<PathBuf> {
    if path.exists() {
        Ok(path)
    } else {
        Err(Error::MissingInput { artifact, path })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestSummary {
    pub records: usize,
    pub skipped_rows: usize,
    pub unique_mentions: usize,
    pub missing_paper_key: usize,
}

/// Reads the raw corpora, assigns ids over all of them and counts paper
/// frequencies over `comm` (or over every corpus when `comm` is absent).
pub fn ingest(cfg: &PipelineConfig) -> Result<IngestSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.paths.output);
    let corpora = cfg.corpora();
    if corpora.is_empty() {
        return Err(Error::Config("no corpus configured under [paths]".into()));
    }
    let mut manifest = Manifest::new("ingest", cfg);
    let mut files = Vec::new();
    let mut summary = IngestSummary::default();
    for &(kind, path) in &corpora {
        let file = read_mentions(require("corpus file", Some(path))?, kind, cfg.ingest.strict)?;
        manifest.input(kind.as_str(), path)?;
        manifest.count(&format!("{}.records", kind.as_str()), file.records.len());
        manifest.count(&format!("{}.skipped_rows", kind.as_str()), file.skipped.len());
        summary.records += file.records.len();
        summary.skipped_rows += file.skipped.len();
        files.push((kind, file));
    }
    let table = MentionTable::assign(files.iter().flat_map(|(_, f)| f.records.iter().map(|r| r.software.as_str())));
    let has_comm = files.iter().any(|(k, _)| *k == CorpusKind::Comm);
    let freq = merge_frequencies(
        files
            .iter()
            .filter(|(k, _)| !has_comm || *k == CorpusKind::Comm)
            .map(|(_, f)| compute_frequencies(&f.records, &table)),
    );
    summary.unique_mentions = table.len();
    summary.missing_paper_key = freq.missing_paper_key;

    write_mention2id(&layout.mention2id(), &table)?;
    write_frequencies(&layout.frequencies(), &table, &freq.table)?;
    manifest.count("unique_mentions", table.len());
    manifest.count("missing_paper_key", freq.missing_paper_key);
    manifest.output("mention2id", &layout.mention2id())?;
    manifest.output("frequencies", &layout.frequencies())?;
    manifest.write(&layout.manifest("ingest"))?;
    Ok(summary)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymSummary {
    pub keyword_pairs: BTreeMap<String, usize>,
    pub skipped_short_entries: usize,
    pub kb_pairs: usize,
    pub kb_unmatched: usize,
    pub string_pairs: usize,
}

/// Pairs of every Jaro-Winkler score at least `threshold`, computed row
/// by row in parallel and returned in canonical order.
pub fn parallel_similarity(table: &MentionTable, threshold: f64) -> Vec<SynonymPair> {
    let index = SimilarityIndex::new(table);
    let mut pairs: Vec<SynonymPair> =
        (0..index.len()).into_par_iter().flat_map_iter(|p| index.pairs_from(p, threshold)).collect();
    sort_pairs(&mut pairs);
    pairs
}

/// Keyword, knowledge-base and string-similarity pairs for every mention.
pub fn synonyms(cfg: &PipelineConfig) -> Result<SynonymSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.paths.output);
    let mut manifest = Manifest::new("synonyms", cfg);
    let m2i = require_file("mention2id.tsv (run `ingest` first)", layout.mention2id())?;
    let table = read_mention2id(&m2i)?;
    manifest.input("mention2id", &m2i)?;
    let mut summary = SynonymSummary::default();
    let mut pairs = Vec::new();

    let tokens = TokenIndex::new(&table);
    for (registry, path) in cfg.registries() {
        let entries = read_list(require("registry snapshot", Some(path))?)?;
        manifest.input(&format!("registry.{}", registry.as_str()), path)?;
        let index = RegistryIndex::new(registry, entries);
        let (p, rep) = generate_keyword_synonyms(&index, &table, &tokens);
        summary.keyword_pairs.insert(registry.as_str().to_string(), p.len());
        summary.skipped_short_entries += rep.skipped_short.len();
        manifest.count(&format!("keyword_pairs.{}", registry.as_str()), p.len());
        pairs.extend(p);
    }
    if let Some(path) = cfg.paths.kb_dictionary.as_deref() {
        let dict = read_kb_dictionary(require("knowledge-base dictionary", Some(path))?)?;
        manifest.input("kb_dictionary", path)?;
        let (p, rep) = load_kb_synonyms(&dict, &table);
        summary.kb_pairs = p.len();
        summary.kb_unmatched = rep.unmatched;
        pairs.extend(p);
    }
    let string_pairs = parallel_similarity(&table, cfg.thresholds.record);
    summary.string_pairs = string_pairs.len();
    pairs.extend(string_pairs);
    sort_pairs(&mut pairs);

    write_synonyms(&layout.synonyms(), &table, &pairs)?;
    manifest.count("skipped_short_entries", summary.skipped_short_entries);
    manifest.count("kb_pairs", summary.kb_pairs);
    manifest.count("kb_unmatched", summary.kb_unmatched);
    manifest.count("string_pairs", summary.string_pairs);
    manifest.count("pairs", pairs.len());
    manifest.output("synonyms", &layout.synonyms())?;
    manifest.write(&layout.manifest("synonyms"))?;
    Ok(summary)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterSummary {
    pub unique_mentions: usize,
    pub edges: usize,
    pub components: usize,
    pub clusters: usize,
    pub no_significant_synonyms: usize,
    pub no_cluster_output: usize,
    pub disambiguated: usize,
}

pub const CLUSTER_COLUMNS: [&str; 5] = ["cluster", "name_ID", "name", "ID", "mention"];
pub const STATUS_COLUMNS: [&str; 5] = ["ID", "mention", "status", "mapped_to_software", "mapped_to_software_ID"];

fn status_label(s: &MentionStatus) -> &'static str {
    match s {
        MentionStatus::NoSignificantSynonyms => "no_significant_synonyms",
        MentionStatus::NoClusterOutput => "no_cluster_output",
        MentionStatus::Disambiguated { .. } => "disambiguated",
    }
}

/// Builds the matrix, clusters every component and writes the mapping.
pub fn cluster(cfg: &PipelineConfig) -> Result<ClusterSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.paths.output);
    let mut manifest = Manifest::new("cluster", cfg);
    let config = cfg.disambiguation();
    config.validate()?;
    let m2i = require_file("mention2id.tsv (run `ingest` first)", layout.mention2id())?;
    let table = read_mention2id(&m2i)?;
    let fpath = require_file("frequencies.tsv (run `ingest` first)", layout.frequencies())?;
    let freq = read_frequencies(&fpath, &table)?;
    let spath = require_file("synonyms.tsv (run `synonyms` first)", layout.synonyms())?;
    let pairs = read_synonyms(&spath, &table)?;
    let stoplist = match cfg.paths.stoplist.as_deref() {
        Some(p) => {
            manifest.input("stoplist", p)?;
            read_stoplist(require("stoplist", Some(p))?)?
        }
        None => Stoplist::default(),
    };
    manifest.input("mention2id", &m2i)?;
    manifest.input("frequencies", &fpath)?;
    manifest.input("synonyms", &spath)?;

    let graph = SimilarityGraph::build(&pairs, table.len(), config.use_threshold)?.post_process(&table, &stoplist);
    let components = graph.connected_components();
    let per_component =
        components.par_iter().map(|c| cluster_component(&graph, c, &config)).collect::<Result<Vec<_>, _>>()?;
    let result = assemble(&table, &freq, graph, per_component);

    write_matrix(&layout.matrix(), &result.graph)?;
    write_file(&layout.clusters(), |w| {
        writeln!(w, "{}", CLUSTER_COLUMNS.join("\t"))?;
        for (ci, c) in result.clusters.iter().enumerate() {
            for &m in &c.members {
                writeln!(w, "{ci}\t{}\t{}\t{m}\t{}", c.name_id, c.name, table.name(m).unwrap_or_default())?;
            }
        }
        Ok(())
    })?;
    write_file(&layout.status(), |w| {
        writeln!(w, "{}", STATUS_COLUMNS.join("\t"))?;
        for (id, name) in table.iter() {
            let s = &result.status[id.index()];
            match result.cluster_of(id) {
                Some(c) => writeln!(w, "{id}\t{name}\t{}\t{}\t{}", status_label(s), c.name, c.name_id)?,
                None => writeln!(w, "{id}\t{name}\t{}\t\t", status_label(s))?,
            }
        }
        Ok(())
    })?;
    let acc = result.accounting;
    write_file(&layout.accounting(), |w| {
        writeln!(w, "category\tcount")?;
        writeln!(w, "no_significant_synonyms\t{}", acc.no_significant_synonyms)?;
        writeln!(w, "no_cluster_output\t{}", acc.no_cluster_output)?;
        writeln!(w, "disambiguated\t{}", acc.disambiguated)?;
        writeln!(w, "total\t{}", acc.total())
    })?;
    manifest.output("matrix", &layout.matrix())?;
    manifest.output("clusters", &layout.clusters())?;
    manifest.output("mention_status", &layout.status())?;

    for (kind, path) in cfg.corpora() {
        let out = layout.disambiguated(kind);
        let reader = MentionReader::new(crate::io::open_input(require("corpus file", Some(path))?)?, kind)
            .map_err(|e| Error::Header { path: path.to_path_buf(), expected: e.message })?;
        let mut rows = 0;
        write_file(&out, |w| {
            writeln!(w, "{}\tmapped_to_software\tmapped_to_software_ID", header(kind))?;
            for rec in reader {
                let Ok(mut rec) = rec else { continue };
                let Some(id) = table.id(&rec.software) else { continue };
                rec.id = Some(id);
                let fields = record_fields(kind, &rec).join("\t");
                match result.cluster_of(id) {
                    Some(c) => writeln!(w, "{fields}\t{}\t{}", c.name, c.name_id)?,
                    None => writeln!(w, "{fields}\t\t")?,
                }
                rows += 1;
            }
            Ok(())
        })?;
        manifest.input(kind.as_str(), path)?;
        manifest.count(&format!("{}_disambiguated.rows", kind.as_str()), rows);
        manifest.output(&format!("{}_disambiguated", kind.as_str()), &out)?;
    }

    let summary = ClusterSummary {
        unique_mentions: table.len(),
        edges: result.graph.edge_count(),
        components: result.components,
        clusters: result.clusters.len(),
        no_significant_synonyms: acc.no_significant_synonyms,
        no_cluster_output: acc.no_cluster_output,
        disambiguated: acc.disambiguated,
    };
    manifest.count("edges", summary.edges);
    manifest.count("components", summary.components);
    manifest.count("clusters", summary.clusters);
    manifest.count("no_significant_synonyms", acc.no_significant_synonyms);
    manifest.count("no_cluster_output", acc.no_cluster_output);
    manifest.count("disambiguated", acc.disambiguated);
    manifest.write(&layout.manifest("cluster"))?;
    Ok(summary)
}

/// `member -> cluster name` as written by [`cluster`].
pub fn read_cluster_names(path: &Path, table: &MentionTable) -> Result<BTreeMap<MentionId, MentionId>> {
    let mut out = BTreeMap::new();
    for (line, f) in read_tsv(path, &CLUSTER_COLUMNS)? {
        let parse = |s: &str| {
            s.parse::<u32>().map(MentionId).map_err(|_| Error::Row {
                path: path.to_path_buf(),
                line,
                message: format!("bad id `{s}`"),
            })
        };
        let (name, member) = (parse(&f[1])?, parse(&f[3])?);
        if table.name(member).is_none() || table.name(name).is_none() {
            return Err(Error::Row { path: path.to_path_buf(), line, message: "id not in the mention table".into() });
        }
        out.insert(member, name);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkSummary {
    pub linked_names: usize,
    pub linked_mentions: usize,
    pub via_cluster: usize,
    pub rejected: usize,
    pub coverage: Vec<(String, usize, f64)>,
}

pub const MENTION_LINK_COLUMNS: [&str; 7] =
    ["ID", "software_mention", "origin", "linked_via_ID", "source", "package_url", "mapped_to"];

/// Exact-match linking from snapshots, then propagation through clusters.
pub fn link(cfg: &PipelineConfig) -> Result<LinkSummary> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.paths.output);
    let mut manifest = Manifest::new("link", cfg);
    if !cfg.linking.offline {
        return Err(Error::Service {
            source_name: "linking".into(),
            message: "live registry clients are not available in this build; use snapshots (--offline)".into(),
        });
    }
    let sources = cfg.linking.sources()?;
    let snap_dir = require("link snapshot directory (paths.snapshots)", cfg.paths.snapshots.as_deref())?;
    let m2i = require_file("mention2id.tsv (run `ingest` first)", layout.mention2id())?;
    let table = read_mention2id(&m2i)?;
    let cpath = require_file("clusters.tsv (run `cluster` first)", layout.clusters())?;
    let names = read_cluster_names(&cpath, &table)?;
    manifest.input("snapshots", snap_dir)?;
    manifest.input("mention2id", &m2i)?;
    manifest.input("clusters", &cpath)?;

    let mapping = SchemaMapping::default();
    let snaps = load_snapshots(snap_dir, &sources, &mapping)?;
    let report = link_mentions(table.iter(), &snaps.index, &mapping, &sources);
    let propagated = propagate_links(&names, &table, &report.links);

    for &s in &sources {
        let raw = snaps.raw.get(&s).map(Vec::as_slice).unwrap_or(&[]);
        write_raw_csv(&layout.raw_metadata(s), s, raw)?;
        let normalized: Vec<_> =
            report.links.values().flat_map(|l| l.candidates.iter()).filter(|c| c.source == Some(s)).collect();
        write_normalized_csv(&layout.normalized_metadata(s), normalized.iter().copied())?;
        manifest.count(&format!("normalized.{}", s.as_str()), normalized.len());
    }
    let master: Vec<_> = sources
        .iter()
        .flat_map(|&s| report.links.values().flat_map(|l| l.candidates.iter()).filter(move |c| c.source == Some(s)))
        .collect();
    write_metadata_tsv(&layout.metadata(), master.iter().copied())?;

    write_file(&layout.mention_links(), |w| {
        writeln!(w, "{}", MENTION_LINK_COLUMNS.join("\t"))?;
        for (id, p) in &propagated {
            let (origin, via) = match p.origin {
                LinkOrigin::Cluster(n) => ("cluster", n),
                LinkOrigin::Own => ("own", *id),
            };
            let md = &p.metadata;
            writeln!(
                w,
                "{id}\t{}\t{origin}\t{via}\t{}\t{}\t{}",
                table.name(*id).unwrap_or_default(),
                md.source.map_or("", LinkSource::as_str),
                md.package_url,
                serde_json::to_string(&md.mapped_to).expect("string lists serialize")
            )?;
        }
        Ok(())
    })?;
    let coverage = link_report(propagated.values().map(|p| &p.metadata));
    write_file(&layout.coverage(), |w| {
        writeln!(w, "source\tcount\tpercent")?;
        coverage.iter().try_for_each(|r| writeln!(w, "{}\t{}\t{:.2}", r.source, r.count, r.percent))
    })?;

    let summary = LinkSummary {
        linked_names: report.links.len(),
        linked_mentions: propagated.len(),
        via_cluster: propagated.values().filter(|p| matches!(p.origin, LinkOrigin::Cluster(_))).count(),
        rejected: report.rejected.len(),
        coverage: coverage.iter().map(|r| (r.source.as_str().to_string(), r.count, r.percent)).collect(),
    };
    manifest.count("linked_names", summary.linked_names);
    manifest.count("linked_mentions", summary.linked_mentions);
    manifest.count("linked_via_cluster", summary.via_cluster);
    manifest.count("rejected_candidates", summary.rejected);
    manifest.count("unkeyed_snapshot_records", snaps.unkeyed);
    for (field, n) in &report.dropped_fields {
        manifest.count(&format!("dropped_field.{field}"), *n);
    }
    manifest.output("metadata", &layout.metadata())?;
    manifest.output("mention_links", &layout.mention_links())?;
    manifest.write(&layout.manifest("link"))?;
    Ok(summary)
}

/// `dir/name.csv`, or its gzipped form.
fn find_csv(dir: &Path, name: &str) -> Option<PathBuf> {
    [format!("{name}.csv"), format!("{name}.csv.gz")].into_iter().map(|f| dir.join(f)).find(|p| p.exists())
}

fn agreement(report: &mut MetricsReport, prefix: &str, ratings: &Ratings) -> Result<()> {
    let items = ratings.complete_items();
    let kappa = match &items {
        Some(items) => Some(fleiss_kappa(&fleiss_counts(items))?),
        None => None,
    };
    report.set_opt(format!("{prefix}.fleiss_kappa"), kappa);
    report.set_opt(format!("{prefix}.krippendorff_alpha"), Some(krippendorff_alpha(&ratings.labels)?));
    report.set(format!("{prefix}.items"), ratings.items.len());
    report.set(format!("{prefix}.raters"), ratings.raters.len());
    Ok(())
}

fn collapse_label(l: &str) -> String {
    match MultiLabel::parse(l) {
        Some(m) => format!("{:?}", m.collapse()),
        None => l.to_string(),
    }
}

/// Unordered mention-string pairs from a synonyms file, or from this run's
/// matrix when no file is given.
fn predicted_pairs(cfg: &PipelineConfig, eval_dir: &Path) -> Result<Option<Vec<(String, String)>>> {
    let given = ["synonyms.tsv", "synonyms.tsv.gz"].iter().map(|f| eval_dir.join(f)).find(|p| p.exists());
    if let Some(p) = given {
        let rows = read_tsv(&p, &crate::tables::SYNONYM_COLUMNS)?;
        return Ok(Some(rows.into_iter().map(|(_, f)| (f[2].clone(), f[3].clone())).collect()));
    }
    let layout = Layout::new(&cfg.paths.output);
    if !(layout.matrix().exists() && layout.mention2id().exists()) {
        return Ok(None);
    }
    let table = read_mention2id(&layout.mention2id())?;
    let rows = read_tsv(&layout.matrix(), &crate::tables::MATRIX_COLUMNS)?;
    let name = |s: &str| s.parse::<u32>().ok().and_then(|i| table.name(MentionId(i))).unwrap_or_default().to_string();
    Ok(Some(rows.into_iter().map(|(_, f)| (name(&f[0]), name(&f[1]))).collect()))
}

/// Metrics over whichever evaluation files are present.
pub fn evaluate(cfg: &PipelineConfig) -> Result<MetricsReport> {
    cfg.validate()?;
    let layout = Layout::new(&cfg.paths.output);
    let mut manifest = Manifest::new("evaluate", cfg);
    let dir = require("evaluation directory (paths.evaluation)", cfg.paths.evaluation.as_deref())?;
    let mut report = MetricsReport::default();

    for (name, k, key) in [
        ("curation_top1k_mentions_multi_labels", 1000, "precision_at_1k"),
        ("curation_top10k_mentions_binary_labels", 10000, "precision_at_10k"),
    ] {
        if let Some(p) = find_csv(dir, name) {
            let rows = read_curation(&p)?;
            manifest.input(name, &p)?;
            let k = k.min(rows.len());
            let pk = precision_at_k(&rows, k)?;
            report.set(format!("{key}.k"), k);
            report.set(format!("{key}.software"), pk.software);
            report.set(format!("{key}.not_software"), pk.not_software);
            report.set(format!("{key}.unclear"), pk.unclear);
        }
    }
    if let Some(p) = find_csv(dir, "evaluation_disambiguation") {
        let labels = read_synonym_labels(&p)?;
        manifest.input("evaluation_disambiguation", &p)?;
        if let Some(pred) = predicted_pairs(cfg, dir)? {
            let prf = synonym_prf(pred.iter().map(|(a, b)| (a.as_str(), b.as_str())), &labels, cfg.evaluation.policy()?)?;
            report.set("synonyms.tp", prf.tp);
            report.set("synonyms.fp", prf.fp);
            report.set("synonyms.fn", prf.fn_);
            report.set_opt("synonyms.precision", prf.precision);
            report.set_opt("synonyms.recall", prf.recall);
            report.set_opt("synonyms.f1", prf.f1);
        }
    }
    if let Some(p) = find_csv(dir, "evaluation_linking") {
        let rows = read_link_labels(&p)?;
        manifest.input("evaluation_linking", &p)?;
        let s = link_eval_summary(&rows)?;
        for (prefix, shares) in [("linking.all", s.all), ("linking.excluding_code_host", s.excluding_code_host)] {
            report.set(format!("{prefix}.total"), shares.total);
            report.set_opt(format!("{prefix}.correct_pct"), shares.correct_pct());
            report.set_opt(format!("{prefix}.unclear_pct"), shares.unclear_pct());
            report.set_opt(format!("{prefix}.incorrect_pct"), shares.incorrect_pct());
        }
    }
    let five = find_csv(dir, "iaa_five_categories");
    if let Some(p) = &five {
        let r = read_ratings(p)?;
        manifest.input("iaa_five_categories", p)?;
        agreement(&mut report, "iaa.five_categories", &r)?;
    }
    if let Some(p) = find_csv(dir, "iaa_two_categories") {
        let r = read_ratings(&p)?;
        manifest.input("iaa_two_categories", &p)?;
        agreement(&mut report, "iaa.two_categories", &r)?;
    } else if let Some(p) = &five {
        agreement(&mut report, "iaa.two_categories", &read_ratings(p)?.map(collapse_label))?;
    }

    report.write(&layout.metrics_text(), &layout.metrics_json())?;
    manifest.count("metrics", report.values.len());
    manifest.output("metrics", &layout.metrics_json())?;
    manifest.write(&layout.manifest("evaluate"))?;
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub ingest: IngestSummary,
    pub synonyms: SynonymSummary,
    pub cluster: ClusterSummary,
    pub link: Option<LinkSummary>,
    pub metrics: Option<MetricsReport>,
}

/// Every stage in order. Linking and evaluation run only when their
/// inputs are configured.
pub fn run_all(cfg: &PipelineConfig) -> Result<RunSummary> {
    Ok(RunSummary {
        ingest: ingest(cfg)?,
        synonyms: synonyms(cfg)?,
        cluster: cluster(cfg)?,
        link: cfg.paths.snapshots.is_some().then(|| link(cfg)).transpose()?,
        metrics: cfg.paths.evaluation.is_some().then(|| evaluate(cfg)).transpose()?,
    })
}

/// Runs `f` on a pool of `workers` threads (0: one per core).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("parallelism.workers: {e}")))?;
    Ok(pool.install(f))
}
