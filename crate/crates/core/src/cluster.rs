//! Per-component clustering, cluster naming, and the disambiguation result.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dbscan::{dbscan, to_distance};
use crate::error::{Error, Result};
use crate::graph::{Component, SimilarityGraph, Stoplist, DEFAULT_USE_THRESHOLD};
use crate::mention::{FrequencyTable, MentionId, MentionTable};
use crate::synonyms::SynonymPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisambiguationConfig {
    pub use_threshold: f64,
    pub eps: f64,
    pub min_pts: usize,
}

impl Default for DisambiguationConfig {
    fn default() -> Self {
        DisambiguationConfig { use_threshold: DEFAULT_USE_THRESHOLD, eps: 0.03, min_pts: 2 }
    }
}

impl DisambiguationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.use_threshold > 0.0 && self.use_threshold <= 1.0) {
            return Err(Error::invalid("thresholds.use", "must lie in (0, 1]"));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::invalid("dbscan.eps", "must be positive"));
        }
        if self.min_pts < 1 {
            return Err(Error::invalid("dbscan.min_pts", "must be at least 1"));
        }
        Ok(())
    }
}

/// A software entity: its variants and the variant used as its name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<MentionId>,
    pub name_id: MentionId,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MentionStatus {
    /// No edge survived into the similarity matrix.
    NoSignificantSynonyms,
    /// In a component, but DBSCAN marked it as noise.
    NoClusterOutput,
    Disambiguated { cluster: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Accounting {
    pub no_significant_synonyms: usize,
    pub no_cluster_output: usize,
    pub disambiguated: usize,
}

impl Accounting {
    pub fn total(&self) -> usize {
        self.no_significant_synonyms + self.no_cluster_output + self.disambiguated
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisambiguationResult {
    pub clusters: Vec<Cluster>,
    /// Status per mention id.
    pub status: Vec<MentionStatus>,
    pub accounting: Accounting,
    /// The post-processed matrix the clusters were computed on.
    pub graph: SimilarityGraph,
    pub components: usize,
}

impl DisambiguationResult {
    pub fn cluster_of(&self, id: MentionId) -> Option<&Cluster> {
        match self.status.get(id.index())? {
            MentionStatus::Disambiguated { cluster } => self.clusters.get(*cluster),
            _ => None,
        }
    }
}

/// DBSCAN output for one component, in global ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComponentClustering {
    pub clusters: Vec<Vec<MentionId>>,
    pub noise: Vec<MentionId>,
}

pub fn cluster_component(
    graph: &SimilarityGraph,
    component: &Component,
    config: &DisambiguationConfig,
) -> Result<ComponentClustering> {
    let distances = to_distance(&graph.component_edges(component));
    let out = dbscan(component.members.len(), &distances, config.eps, config.min_pts)?;
    let global = |i: usize| component.members[i];
    Ok(ComponentClustering {
        clusters: out.clusters.iter().map(|c| c.iter().copied().map(global).collect()).collect(),
        noise: out.noise.iter().copied().map(global).collect(),
    })
}

/// Picks the member with the highest frequency; ties go to the
/// lexicographically smallest string, then the smallest id.
pub fn pick_name(members: &[MentionId], freq: &FrequencyTable, table: &MentionTable) -> Option<MentionId> {
    members.iter().copied().max_by(|&x, &y| {
        freq.get(x)
            .cmp(&freq.get(y))
            .then_with(|| table.name(y).cmp(&table.name(x)))
            .then_with(|| y.cmp(&x))
    })
}

pub fn name_clusters(groups: Vec<Vec<MentionId>>, freq: &FrequencyTable, table: &MentionTable) -> Vec<Cluster> {
    groups
        .into_iter()
        .filter_map(|members| {
            let name_id = pick_name(&members, freq, table)?;
            let name = String::from(table.name(name_id).unwrap_or_default());
            Some(Cluster { members, name_id, name })
        })
        .collect()
}

/// Combines per-component clusterings (in component order) into the final
/// result and its accounting.
pub fn assemble(
    table: &MentionTable,
    freq: &FrequencyTable,
    graph: SimilarityGraph,
    per_component: Vec<ComponentClustering>,
) -> DisambiguationResult {
    let mut status = alloc::vec![MentionStatus::NoSignificantSynonyms; table.len()];
    let components = per_component.len();
    let mut groups = Vec::new();
    for cc in per_component {
        for id in cc.noise {
            status[id.index()] = MentionStatus::NoClusterOutput;
        }
        groups.extend(cc.clusters);
    }
    let clusters = name_clusters(groups, freq, table);
    for (ci, c) in clusters.iter().enumerate() {
        for &m in &c.members {
            status[m.index()] = MentionStatus::Disambiguated { cluster: ci };
        }
    }
    let mut accounting = Accounting::default();
    for s in &status {
        match s {
            MentionStatus::NoSignificantSynonyms => accounting.no_significant_synonyms += 1,
            MentionStatus::NoClusterOutput => accounting.no_cluster_output += 1,
            MentionStatus::Disambiguated { .. } => accounting.disambiguated += 1,
        }
    }
    DisambiguationResult { clusters, status, accounting, graph, components }
}

/// Builds and cleans the similarity matrix from `pairs`, splits it into
/// components and clusters each one.
pub fn disambiguate(
    table: &MentionTable,
    freq: &FrequencyTable,
    pairs: &[SynonymPair],
    stoplist: &Stoplist,
    config: &DisambiguationConfig,
) -> Result<DisambiguationResult> {
    config.validate()?;
    let graph = SimilarityGraph::build(pairs, table.len(), config.use_threshold)?.post_process(table, stoplist);
    let per_component = graph
        .connected_components()
        .iter()
        .map(|c| cluster_component(&graph, c, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(table, freq, graph, per_component))
}

/// `mention -> cluster name` for every disambiguated mention.
pub fn mapping(result: &DisambiguationResult) -> BTreeMap<MentionId, MentionId> {
    result
        .clusters
        .iter()
        .flat_map(|c| c.members.iter().map(move |&m| (m, c.name_id)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synonyms::SynonymSource;
    use alloc::vec;

    #[test]
    fn name_by_frequency() {
        let t = MentionTable::assign(["ImageJ", "Image J", "Image-J"]);
        let f: FrequencyTable = [
            (t.id("ImageJ").unwrap(), 5000),
            (t.id("Image J").unwrap(), 1200),
            (t.id("Image-J").unwrap(), 40),
        ]
        .into_iter()
        .collect();
        let members: Vec<_> = t.iter().map(|(id, _)| id).collect();
        let c = name_clusters(vec![members], &f, &t);
        assert_eq!(c[0].name, "ImageJ");
    }

    #[test]
    fn singleton_and_ties() {
        let t = MentionTable::assign(["abd", "abc"]);
        let f = FrequencyTable::default();
        let c = name_clusters(vec![vec![t.id("abd").unwrap()]], &f, &t);
        assert_eq!(c[0].name, "abd");
        let both: Vec<_> = t.iter().map(|(id, _)| id).collect();
        assert_eq!(name_clusters(vec![both], &f, &t)[0].name, "abc");
    }

    #[test]
    fn dissimilar_corpus_has_no_clusters() {
        let t = MentionTable::assign(["BLAST", "SPSS", "ImageJ"]);
        let r = disambiguate(&t, &FrequencyTable::default(), &[], &Stoplist::default(), &DisambiguationConfig::default()).unwrap();
        assert!(r.clusters.is_empty());
        assert_eq!(r.accounting.no_significant_synonyms, 3);
        assert_eq!(r.accounting.total(), 3);
    }

    #[test]
    fn accounting_covers_three_states() {
        let t = MentionTable::assign(["a", "b", "c", "d", "e"]);
        // a-b tight, b-c too far for eps 0.03 once ... c-d at 0.975 within eps
        let pairs = [
            SynonymPair::new(MentionId(0), MentionId(1), 1.0, SynonymSource::KnowledgeBase).unwrap(),
            SynonymPair::new(MentionId(2), MentionId(3), 0.975, SynonymSource::StringSimilarity).unwrap(),
        ];
        let cfg = DisambiguationConfig { eps: 0.02, ..Default::default() };
        let r = disambiguate(&t, &FrequencyTable::default(), &pairs, &Stoplist::empty(), &cfg).unwrap();
        assert_eq!(r.accounting, Accounting { no_significant_synonyms: 1, no_cluster_output: 2, disambiguated: 2 });
        assert_eq!(r.cluster_of(MentionId(1)).unwrap().members, [MentionId(0), MentionId(1)]);
        assert!(r.cluster_of(MentionId(2)).is_none());
    }

    #[test]
    fn invalid_config_rejected() {
        let t = MentionTable::assign(["a"]);
        let cfg = DisambiguationConfig { eps: 0.0, ..Default::default() };
        assert!(disambiguate(&t, &FrequencyTable::default(), &[], &Stoplist::empty(), &cfg).is_err());
    }
}
