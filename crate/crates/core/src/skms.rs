//! The punctured-sphere description of the stringy Kähler moduli space of
//! an irreducible flop, read off from the level line modulo translation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{
    enumerate_alcoves, wall_rank_labels, ArrangementError, ExchangeGraph, LevelArrangement, Window,
};
use crate::dynkin::catalog_datum;
use crate::linalg::{fmt_q, qi, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkmsError {
    #[error("no smooth irreducible flop has length {0}; lengths run from 1 to 6")]
    UnsupportedLength(i64),
    #[error("the fundamental domain is only defined for one-curve data")]
    Unsupported,
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("fundamental domain [{0}, {0}+1) is not inside the window")]
    OutsideWindow(String),
}

/// A half-open unit interval `[start, start + 1)` of the level line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub start: Q,
    /// Alcoves whose left endpoint lies in the interval.
    pub alcoves: Vec<usize>,
    /// Walls in the interval, with positions and rank labels, sorted.
    pub walls: Vec<(usize, Q, i64)>,
}

/// The unit interval starting at `start`, with its alcoves and walls.
pub fn fundamental_domain_at(
    la: &LevelArrangement,
    graph: &ExchangeGraph,
    start: Q,
) -> Result<FundamentalDomain, SkmsError> {
    if la.fd.n() != 1 {
        return Err(SkmsError::Unsupported);
    }
    let end = start + qi(1);
    if !la.window.contains(&start) || !la.window.contains(&end) {
        return Err(SkmsError::OutsideWindow(fmt_q(&start)));
    }
    let inside = |p: &Q| *p >= start && *p < end;
    let alcoves = (0..graph.len())
        .filter(|&c| {
            let left = graph.alcove_vertices(c).into_iter().map(|v| v[0]).min().expect("two vertices");
            inside(&left)
        })
        .collect();
    let walls = wall_rank_labels(la, graph)?
        .into_iter()
        .filter(|w| inside(&w.position))
        .map(|w| (w.wall, w.position, w.label))
        .collect();
    Ok(FundamentalDomain { start, alcoves, walls })
}

/// The domain `[0, 1)`; the translation `y -> y + 1` glues its ends.
pub fn fundamental_domain(la: &LevelArrangement, graph: &ExchangeGraph) -> Result<FundamentalDomain, SkmsError> {
    fundamental_domain_at(la, graph, qi(0))
}

/// A sphere with two pole punctures and labelled holes along the equator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkmsDescription {
    pub length: i64,
    /// Hole positions in `[0, 1)`.
    pub equator_holes: Vec<Q>,
    /// Rank label of each hole.
    pub hole_labels: Vec<i64>,
    /// The alcove count of the fundamental domain.
    pub fundamental_alcoves: usize,
}

impl SkmsDescription {
    pub const POLE_PUNCTURES: usize = 2;

    pub fn equator_hole_count(&self) -> usize {
        self.equator_holes.len()
    }

    pub fn total_punctures(&self) -> usize {
        self.equator_hole_count() + Self::POLE_PUNCTURES
    }

    pub fn to_json(&self) -> SkmsJson {
        SkmsJson {
            length: self.length,
            equator_holes: self.equator_holes.iter().map(|p| format!("{}/{}", p.numer(), p.denom())).collect(),
            labels: self.hole_labels.clone(),
            equator_hole_count: self.equator_hole_count(),
            pole_punctures: Self::POLE_PUNCTURES,
            total_punctures: self.total_punctures(),
        }
    }
}

/// `{ "length": 4, "equator_holes": ["0/1", "1/4", ...], "labels": [...], "total_punctures": 8 }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkmsJson {
    pub length: i64,
    pub equator_holes: Vec<String>,
    pub labels: Vec<i64>,
    pub equator_hole_count: usize,
    pub pole_punctures: usize,
    pub total_punctures: usize,
}

/// The level arrangement used for SKMS extraction: the box `[-1, 2]`.
pub fn skms_arrangement(length: i64) -> Result<(LevelArrangement, ExchangeGraph), SkmsError> {
    let fd = catalog_datum(length).ok_or(SkmsError::UnsupportedLength(length))?;
    let la = LevelArrangement::new(&fd, Window::covering(&fd, qi(-1), qi(2)))?;
    let graph = enumerate_alcoves(&la)?;
    Ok((la, graph))
}

pub fn skms_from_domain(length: i64, domain: &FundamentalDomain) -> SkmsDescription {
    SkmsDescription {
        length,
        equator_holes: domain.walls.iter().map(|w| w.1 - domain.start).collect(),
        hole_labels: domain.walls.iter().map(|w| w.2).collect(),
        fundamental_alcoves: domain.alcoves.len(),
    }
}

pub fn skms_for_length(length: i64) -> Result<SkmsDescription, SkmsError> {
    let (la, graph) = skms_arrangement(length)?;
    let domain = fundamental_domain(&la, &graph)?;
    Ok(skms_from_domain(length, &domain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn hole_table() {
        let counts: Vec<usize> = (1..=6).map(|l| skms_for_length(l).unwrap().equator_hole_count()).collect();
        assert_eq!(counts, vec![1, 2, 4, 6, 10, 12]);
        let totals: Vec<usize> = (1..=6).map(|l| skms_for_length(l).unwrap().total_punctures()).collect();
        assert_eq!(totals, vec![3, 4, 6, 8, 12, 14]);
    }

    #[test]
    fn length_one_and_four() {
        let s = skms_for_length(1).unwrap();
        assert_eq!(s.equator_holes, vec![qi(0)]);
        assert_eq!(s.hole_labels, vec![1]);
        assert_eq!(s.fundamental_alcoves, 1);
        let s = skms_for_length(4).unwrap();
        assert_eq!(s.equator_holes, vec![qi(0), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)]);
        assert_eq!(s.hole_labels, vec![1, 4, 3, 2, 3, 4]);
        let j = s.to_json();
        assert_eq!(j.equator_holes[1], "1/4");
        assert_eq!(j.total_punctures, 8);
    }

    #[test]
    fn length_six_labels() {
        let s = skms_for_length(6).unwrap();
        assert_eq!(s.hole_labels, vec![1, 6, 5, 4, 3, 5, 2, 5, 3, 4, 5, 6]);
    }

    #[test]
    fn fundamental_alcove_counts() {
        let counts: Vec<usize> = (1..=6).map(|l| skms_for_length(l).unwrap().fundamental_alcoves).collect();
        assert_eq!(counts, vec![1, 2, 4, 6, 10, 12]);
        let (la, g) = skms_arrangement(2).unwrap();
        let d = fundamental_domain(&la, &g).unwrap();
        let pos: Vec<Q> = d.walls.iter().map(|w| w.1).collect();
        assert_eq!(pos, vec![qi(0), q(1, 2)]);
    }

    #[test]
    fn labels_are_symmetric_and_denominators() {
        for l in 1..=6 {
            let s = skms_for_length(l).unwrap();
            let n = s.equator_hole_count();
            for k in 1..n {
                assert_eq!(s.hole_labels[k], s.hole_labels[n - k]);
                assert_eq!(s.equator_holes[k] + s.equator_holes[n - k], qi(1));
            }
            for (p, lab) in s.equator_holes.iter().zip(&s.hole_labels) {
                assert_eq!(*p.denom() as i64, *lab);
            }
        }
    }

    #[test]
    fn translated_domain_gives_the_same_description() {
        for l in 1..=6 {
            let (la, g) = skms_arrangement(l).unwrap();
            let a = skms_from_domain(l, &fundamental_domain_at(&la, &g, qi(0)).unwrap());
            let b = skms_from_domain(l, &fundamental_domain_at(&la, &g, qi(1)).unwrap());
            let c = skms_from_domain(l, &fundamental_domain_at(&la, &g, qi(-1)).unwrap());
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }

    #[test]
    fn unsupported_lengths() {
        assert_eq!(skms_for_length(7), Err(SkmsError::UnsupportedLength(7)));
        assert_eq!(skms_for_length(0), Err(SkmsError::UnsupportedLength(0)));
    }
}
