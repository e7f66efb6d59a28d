//! The sparse similarity matrix, its clean-up rules, and connected
//! components.
//!
//! Matrix values follow channel precedence: knowledge-base pairs are 1.0,
//! keyword pairs not in the knowledge base are 0.99, and any remaining
//! string-similarity pair is kept with its own score only when it reaches the
//! use threshold.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mention::{MentionId, MentionTable};
use crate::synonyms::{SynonymPair, SynonymSource, KEYWORD_CONFIDENCE, KNOWLEDGE_BASE_CONFIDENCE};
use crate::text::{strip_digits_punct_marks, word_count};
use crate::unionfind::UnionFind;

/// Minimum string-similarity score admitted into the matrix.
pub const DEFAULT_USE_THRESHOLD: f64 = 0.97;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub value: f64,
    pub source: SynonymSource,
}

/// Upper triangle of a symmetric sparse matrix over mention ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimilarityGraph {
    n: usize,
    edges: BTreeMap<(MentionId, MentionId), Edge>,
}

impl SimilarityGraph {
    pub fn empty(n: usize) -> Self {
        SimilarityGraph { n, edges: BTreeMap::new() }
    }

    /// Number of vertices (mentions), whether or not they carry edges.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn get(&self, a: MentionId, b: MentionId) -> Option<Edge> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.get(&key).copied()
    }

    /// Edges as `((a, b), edge)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = ((MentionId, MentionId), Edge)> + '_ {
        self.edges.iter().map(|(&k, &e)| (k, e))
    }

    /// Vertices with at least one edge, ascending.
    pub fn covered(&self) -> BTreeSet<MentionId> {
        self.edges.keys().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Builds the matrix from synonym pairs.
    ///
    /// When a pair arrives through several channels the higher-precedence
    /// channel wins: knowledge base (and post-process) over keyword over
    /// string similarity. String-similarity pairs below `use_threshold` are
    /// dropped.
    pub fn build(pairs: &[SynonymPair], n: usize, use_threshold: f64) -> Result<Self> {
        if !(use_threshold > 0.0 && use_threshold <= 1.0) {
            return Err(Error::invalid("use_threshold", "must lie in (0, 1]"));
        }
        let mut edges: BTreeMap<(MentionId, MentionId), Edge> = BTreeMap::new();
        for p in pairs {
            p.check(n)?;
            let value = match p.source {
                SynonymSource::KnowledgeBase | SynonymSource::PostProcess => KNOWLEDGE_BASE_CONFIDENCE,
                SynonymSource::KeywordIndex(_) => KEYWORD_CONFIDENCE,
                SynonymSource::StringSimilarity => {
                    if p.confidence < use_threshold {
                        continue;
                    }
                    p.confidence
                }
            };
            let candidate = Edge { value, source: p.source };
            edges
                .entry(p.key())
                .and_modify(|e| {
                    let (cp, ep) = (candidate.source.precedence(), e.source.precedence());
                    if cp > ep || (cp == ep && candidate.value > e.value) {
                        *e = candidate;
                    }
                })
                .or_insert(candidate);
        }
        Ok(SimilarityGraph { n, edges })
    }

    /// Applies the clean-up rules:
    ///
    /// * a pair whose strings are equal once digits, punctuation and `©®™`
    ///   are removed is set to 1.0;
    /// * a pair of multi-word strings equal up to case is set to 1.0;
    /// * every edge touching a stoplisted mention is removed.
    ///
    /// Idempotent; never adds edges.
    pub fn post_process(&self, table: &MentionTable, stoplist: &Stoplist) -> Self {
        let mut edges = BTreeMap::new();
        for (&(a, b), &edge) in &self.edges {
            let (sa, sb) = (table.name(a).unwrap_or_default(), table.name(b).unwrap_or_default());
            if stoplist.contains(sa) || stoplist.contains(sb) {
                continue;
            }
            let mut edge = edge;
            if edge.value < 1.0 && promotes(sa, sb) {
                edge = Edge { value: 1.0, source: SynonymSource::PostProcess };
            }
            edges.insert((a, b), edge);
        }
        SimilarityGraph { n: self.n, edges }
    }

    /// Connected components over stored edges, ordered by smallest member.
    /// Isolated vertices belong to no component.
    pub fn connected_components(&self) -> Vec<Component> {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in self.edges.keys() {
            uf.union(a.0, b.0);
        }
        let mut by_root: BTreeMap<u32, Vec<MentionId>> = BTreeMap::new();
        for v in self.covered() {
            by_root.entry(uf.find(v.0)).or_default().push(v);
        }
        let mut comps: Vec<Component> = by_root.into_values().map(|members| Component { members }).collect();
        comps.sort_by_key(|c| c.members[0]);
        comps
    }

    /// Edges restricted to `component`, re-indexed to positions in
    /// `component.members`.
    pub fn component_edges(&self, component: &Component) -> Vec<(usize, usize, f64)> {
        let pos: BTreeMap<MentionId, usize> =
            component.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut out = Vec::new();
        for (i, &a) in component.members.iter().enumerate() {
            let lo = (a, MentionId(0));
            let hi = (a, MentionId(u32::MAX));
            for (&(_, b), e) in self.edges.range(lo..=hi) {
                if let Some(&j) = pos.get(&b) {
                    out.push((i, j, e.value));
                }
            }
        }
        out
    }
}

/// Whether either string-equality clean-up rule holds for the pair.
pub fn promotes(a: &str, b: &str) -> bool {
    let (sa, sb) = (strip_digits_punct_marks(a), strip_digits_punct_marks(b));
    if !sa.trim().is_empty() && sa == sb {
        return true;
    }
    word_count(a) > 1 && word_count(b) > 1 && a.to_lowercase() == b.to_lowercase()
}

/// Broad terms whose edges are dropped from the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stoplist {
    terms: BTreeSet<String>,
}

impl Default for Stoplist {
    fn default() -> Self {
        Stoplist::new(["R package", "r package", "interface"])
    }
}

impl Stoplist {
    pub fn new<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Stoplist { terms: terms.into_iter().map(Into::into).collect() }
    }

    pub fn empty() -> Self {
        Stoplist { terms: BTreeSet::new() }
    }

    pub fn contains(&self, s: &str) -> bool {
        self.terms.contains(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Connected set of mentions, members ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub members: Vec<MentionId>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synonyms::Registry;

    fn pair(a: u32, b: u32, c: f64, s: SynonymSource) -> SynonymPair {
        SynonymPair::new(MentionId(a), MentionId(b), c, s).unwrap()
    }

    #[test]
    fn equation_cases() {
        let pairs = [
            pair(0, 1, 1.0, SynonymSource::KnowledgeBase),
            pair(0, 1, 0.92, SynonymSource::StringSimilarity),
            pair(2, 3, 0.99, SynonymSource::KeywordIndex(Registry::Bioconductor)),
            pair(4, 5, 0.95, SynonymSource::StringSimilarity),
            pair(5, 6, 0.975, SynonymSource::StringSimilarity),
        ];
        let g = SimilarityGraph::build(&pairs, 7, DEFAULT_USE_THRESHOLD).unwrap();
        assert_eq!(g.get(MentionId(1), MentionId(0)).unwrap().value, 1.0);
        assert_eq!(g.get(MentionId(2), MentionId(3)).unwrap().value, 0.99);
        assert!(g.get(MentionId(4), MentionId(5)).is_none());
        assert_eq!(g.get(MentionId(5), MentionId(6)).unwrap().value, 0.975);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn keyword_beats_higher_string_score() {
        let pairs = [
            pair(0, 1, 0.995, SynonymSource::StringSimilarity),
            pair(0, 1, 0.99, SynonymSource::KeywordIndex(Registry::PyPI)),
        ];
        let g = SimilarityGraph::build(&pairs, 2, 0.97).unwrap();
        assert_eq!(g.get(MentionId(0), MentionId(1)).unwrap().value, 0.99);
    }

    #[test]
    fn unknown_id_is_fatal() {
        let pairs = [pair(0, 9, 1.0, SynonymSource::KnowledgeBase)];
        assert!(matches!(SimilarityGraph::build(&pairs, 3, 0.97), Err(Error::UnknownMention { .. })));
    }

    #[test]
    fn post_process_rules() {
        let t = MentionTable::assign(["ImageJ", "ImageJ2", "GraphPad Prism", "graphpad prism", "R package", "R package limma", "Prism", "PRISM"]);
        let id = |s: &str| t.id(s).unwrap();
        let pairs = [
            pair(id("ImageJ").0, id("ImageJ2").0, 0.971, SynonymSource::StringSimilarity),
            pair(id("GraphPad Prism").0, id("graphpad prism").0, 0.99, SynonymSource::KeywordIndex(Registry::Cran)),
            pair(id("R package").0, id("R package limma").0, 0.99, SynonymSource::KeywordIndex(Registry::Cran)),
            pair(id("Prism").0, id("PRISM").0, 0.98, SynonymSource::StringSimilarity),
        ];
        let g = SimilarityGraph::build(&pairs, t.len(), 0.97).unwrap();
        let p = g.post_process(&t, &Stoplist::default());
        assert_eq!(p.get(id("ImageJ"), id("ImageJ2")).unwrap().value, 1.0);
        assert_eq!(p.get(id("GraphPad Prism"), id("graphpad prism")).unwrap().value, 1.0);
        assert!(p.get(id("R package"), id("R package limma")).is_none());
        // single-token case variants are not promoted
        assert_eq!(p.get(id("Prism"), id("PRISM")).unwrap().value, 0.98);
        assert_eq!(p.post_process(&t, &Stoplist::default()), p);
    }

    #[test]
    fn promotion_requires_nonempty_residue() {
        assert!(!promotes("123", "(1)"));
        assert!(promotes("Scikit-Learn®", "ScikitLearn"));
    }

    #[test]
    fn path_component() {
        let pairs = [pair(0, 1, 1.0, SynonymSource::KnowledgeBase), pair(1, 2, 1.0, SynonymSource::KnowledgeBase)];
        let g = SimilarityGraph::build(&pairs, 4, 0.97).unwrap();
        let cc = g.connected_components();
        assert_eq!(cc, [Component { members: alloc::vec![MentionId(0), MentionId(1), MentionId(2)] }]);
    }

    #[test]
    fn empty_graph_no_components() {
        assert!(SimilarityGraph::empty(10).connected_components().is_empty());
    }

    #[test]
    fn component_edges_are_local() {
        let pairs = [pair(3, 7, 1.0, SynonymSource::KnowledgeBase), pair(1, 2, 0.99, SynonymSource::KeywordIndex(Registry::Cran))];
        let g = SimilarityGraph::build(&pairs, 8, 0.97).unwrap();
        let cc = g.connected_components();
        assert_eq!(cc.len(), 2);
        assert_eq!(g.component_edges(&cc[1]), [(0, 1, 1.0)]);
    }
}
