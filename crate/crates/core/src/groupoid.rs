//! Positive paths in an exchange graph, reducedness, and the two lemmas
//! used to build the arrangement groupoid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{ExchangeGraph, UnwalkablePath};
use crate::linalg::dot;
use crate::tracking::{path_matrix, TrackingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error(transparent)]
    Unwalkable(#[from] UnwalkablePath),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("no completion found for label s{label} after path {word:?}")]
    SearchFailed { label: usize, word: Vec<usize> },
    #[error("paths have different endpoints")]
    EndpointMismatch,
    #[error("reduced paths {p:?} and {q:?} disagree: {what}")]
    CoherenceViolation { p: Vec<usize>, q: Vec<usize>, what: String },
}

/// A source chamber and a word of labels, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositivePath {
    pub source: usize,
    pub word: Vec<usize>,
}

impl PositivePath {
    pub fn new(source: usize, word: Vec<usize>) -> Self {
        Self { source, word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The path followed by one more crossing.
    pub fn then(&self, label: usize) -> Self {
        let mut word = self.word.clone();
        word.push(label);
        Self { source: self.source, word }
    }

    pub fn target(&self, graph: &ExchangeGraph) -> Result<usize, UnwalkablePath> {
        graph.walk(self.source, &self.word)
    }

    /// Chambers visited, starting with the source.
    pub fn chambers(&self, graph: &ExchangeGraph) -> Result<Vec<usize>, UnwalkablePath> {
        let mut out = vec![self.source];
        for k in 1..=self.word.len() {
            out.push(graph.walk(self.source, &self.word[..k])?);
        }
        Ok(out)
    }

    pub fn to_json(&self, graph: &ExchangeGraph) -> PathJson {
        PathJson { source: self.source, word: self.word.iter().map(|&l| graph.label_name(l)).collect() }
    }
}

/// `{ "source": 0, "word": ["s1", "s0"] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub source: usize,
    pub word: Vec<String>,
}

/// Multiset of crossed walls, keyed by wall index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrossingRecord {
    pub counts: BTreeMap<usize, usize>,
}

impl CrossingRecord {
    pub fn cardinality(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn has_repeat(&self) -> bool {
        self.counts.values().any(|&c| c > 1)
    }
}

pub fn crossing_set(graph: &ExchangeGraph, p: &PositivePath) -> Result<CrossingRecord, GroupoidError> {
    let chambers = p.chambers(graph)?;
    let mut rec = CrossingRecord::default();
    for (c, &l) in chambers.iter().zip(&p.word) {
        *rec.counts.entry(graph.chamber(*c).facet_walls[l]).or_insert(0) += 1;
    }
    Ok(rec)
}

/// No wall is crossed twice.
pub fn is_reduced(graph: &ExchangeGraph, p: &PositivePath) -> Result<bool, GroupoidError> {
    Ok(!crossing_set(graph, p)?.has_repeat())
}

/// Length equals the graph distance between the endpoints.
pub fn is_shortest(graph: &ExchangeGraph, p: &PositivePath) -> Result<bool, GroupoidError> {
    let t = p.target(graph)?;
    Ok(graph.distances_from(p.source)[t] == Some(p.len()))
}

/// Given a reduced `alpha: A -> B` such that `alpha` followed by `s_i` is not
/// reduced, returns a reduced `gamma: A -> C` (with `C` the `s_i`-neighbour
/// of `B`) such that `gamma` followed by `s_i` is reduced.
pub fn lemma1_completion(
    graph: &ExchangeGraph,
    alpha: &PositivePath,
    i: usize,
) -> Result<PositivePath, GroupoidError> {
    if !is_reduced(graph, alpha)? {
        return Err(GroupoidError::Precondition("alpha is not reduced".into()));
    }
    let extended = alpha.then(i);
    extended.target(graph)?;
    if is_reduced(graph, &extended)? {
        return Err(GroupoidError::Precondition("alpha followed by s_i is already reduced".into()));
    }
    let b = alpha.target(graph)?;
    let c = graph.neighbour(b, i).expect("walk succeeded");
    let fail = || GroupoidError::SearchFailed { label: i, word: alpha.word.clone() };
    let word = graph.shortest_word(alpha.source, c).ok_or_else(fail)?;
    let gamma = PositivePath::new(alpha.source, word);
    if !is_reduced(graph, &gamma)? || !is_reduced(graph, &gamma.then(i))? {
        return Err(fail());
    }
    Ok(gamma)
}

/// For each step of a reduced path, the source chamber and the chamber just
/// before the step lie on the same side of the crossed wall.
pub fn verify_same_side(graph: &ExchangeGraph, alpha: &PositivePath) -> Result<bool, GroupoidError> {
    if !is_reduced(graph, alpha)? {
        return Err(GroupoidError::Precondition("path is not reduced".into()));
    }
    let chambers = alpha.chambers(graph)?;
    let source_point = graph.chamber(alpha.source).interior_point();
    for (c, &l) in chambers.iter().zip(&alpha.word) {
        let wall = &graph.walls[graph.chamber(*c).facet_walls[l]].covector;
        let before = dot(wall, &graph.chamber(*c).interior_point()).signum();
        if dot(wall, &source_point).signum() != before {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether two paths with the same endpoints are both reduced. When they
/// are, their crossing multisets and path matrices must agree; a
/// disagreement is an error.
pub fn equivalent_reduced(graph: &ExchangeGraph, p: &PositivePath, q: &PositivePath) -> Result<bool, GroupoidError> {
    if p.source != q.source || p.target(graph)? != q.target(graph)? {
        return Err(GroupoidError::EndpointMismatch);
    }
    if !is_reduced(graph, p)? || !is_reduced(graph, q)? {
        return Ok(false);
    }
    let violation = |what: &str| GroupoidError::CoherenceViolation {
        p: p.word.clone(),
        q: q.word.clone(),
        what: what.to_string(),
    };
    if crossing_set(graph, p)? != crossing_set(graph, q)? {
        return Err(violation("crossing multisets differ"));
    }
    if path_matrix(graph, p.source, &p.word)?.matrix != path_matrix(graph, q.source, &q.word)?.matrix {
        return Err(violation("path matrices differ"));
    }
    Ok(true)
}

/// Every walkable positive path from `source` of length at most `max_len`.
pub fn positive_paths_from(graph: &ExchangeGraph, source: usize, max_len: usize) -> Vec<(PositivePath, usize)> {
    let mut out = vec![(PositivePath::new(source, Vec::new()), source)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (p, end) in &frontier {
            for (l, n) in graph.chamber(*end).neighbours.iter().enumerate() {
                if let Some(n) = n {
                    next.push((p.then(l), *n));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{enumerate_alcoves, enumerate_chambers, FiniteArrangement, LevelArrangement, Window};
    use crate::dynkin::{build_diagram, catalog_datum, Family, FlopDatum};
    use crate::linalg::qi;

    fn a2() -> ExchangeGraph {
        let fd = FlopDatum::new(build_diagram(Family::A, 2).unwrap(), &[1, 2]).unwrap();
        enumerate_chambers(&FiniteArrangement::new(&fd).unwrap()).unwrap()
    }

    #[test]
    fn hexagon_crossings() {
        let g = a2();
        let single = PositivePath::new(0, vec![0]);
        assert_eq!(crossing_set(&g, &single).unwrap().cardinality(), 1);
        let half = PositivePath::new(0, vec![0, 1, 0]);
        let rec = crossing_set(&g, &half).unwrap();
        assert_eq!(rec.counts.len(), 3);
        assert!(!rec.has_repeat());
        let full = PositivePath::new(0, vec![0, 1, 0, 1, 0, 1]);
        let rec = crossing_set(&g, &full).unwrap();
        assert_eq!(rec.counts.len(), 3);
        assert!(rec.counts.values().all(|&c| c == 2));
    }

    #[test]
    fn reducedness() {
        let g = a2();
        assert!(is_reduced(&g, &PositivePath::new(0, vec![])).unwrap());
        assert!(!is_reduced(&g, &PositivePath::new(0, vec![1, 1])).unwrap());
        let p = PositivePath::new(0, vec![0, 1, 0]);
        let q = PositivePath::new(0, vec![1, 0, 1]);
        assert!(is_reduced(&g, &p).unwrap() && is_reduced(&g, &q).unwrap());
        assert!(equivalent_reduced(&g, &p, &q).unwrap());
        assert!(equivalent_reduced(&g, &p, &p).unwrap());
        let long = PositivePath::new(0, vec![0, 1, 0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(long.target(&g).unwrap(), p.target(&g).unwrap());
        assert!(!equivalent_reduced(&g, &p, &long).unwrap());
        assert_eq!(
            equivalent_reduced(&g, &p, &PositivePath::new(0, vec![0])),
            Err(GroupoidError::EndpointMismatch)
        );
    }

    #[test]
    fn reduced_iff_shortest() {
        let g = a2();
        for s in 0..g.len() {
            for (p, _) in positive_paths_from(&g, s, 7) {
                assert_eq!(is_reduced(&g, &p).unwrap(), is_shortest(&g, &p).unwrap(), "{p:?}");
            }
        }
    }

    #[test]
    fn lemma1_on_hexagon() {
        let g = a2();
        let alpha = PositivePath::new(0, vec![0, 1]);
        // alpha then s1 closes the arc to the antipode: reduced.
        assert!(lemma1_completion(&g, &alpha, 0).is_err());
        let arc = PositivePath::new(0, vec![0, 1, 0]);
        let gamma = lemma1_completion(&g, &arc, 1).unwrap();
        assert!(is_reduced(&g, &gamma).unwrap());
        assert!(is_reduced(&g, &gamma.then(1)).unwrap());
        assert_eq!(gamma.then(1).target(&g).unwrap(), arc.target(&g).unwrap());
        assert_eq!(gamma.word, vec![1, 0]);
        let empty = PositivePath::new(0, vec![]);
        assert!(matches!(lemma1_completion(&g, &empty, 0), Err(GroupoidError::Precondition(_))));
    }

    #[test]
    fn lemma1_on_level_line() {
        let fd = catalog_datum(3).unwrap();
        let la = LevelArrangement::new(&fd, Window::covering(&fd, qi(-1), qi(2))).unwrap();
        let g = enumerate_alcoves(&la).unwrap();
        // three steps right then back across the last wall
        let alpha = PositivePath::new(0, vec![0, 1, 0]);
        assert!(is_reduced(&g, &alpha).unwrap());
        let gamma = lemma1_completion(&g, &alpha, 0).unwrap();
        assert_eq!(gamma.word, vec![0, 1]);
    }

    #[test]
    fn same_side_for_all_short_reduced_paths() {
        let g = a2();
        for s in 0..g.len() {
            for (p, _) in positive_paths_from(&g, s, 6) {
                if is_reduced(&g, &p).unwrap() {
                    assert!(verify_same_side(&g, &p).unwrap());
                } else {
                    assert!(verify_same_side(&g, &p).is_err());
                }
            }
        }
    }
}
