//! Wall-crossing matrices on K-theory, the Picard action, and tracking of
//! complexified points through the chambers.
//!
//! Coordinates of a chamber `C` are coefficients in its ray basis, so the
//! matrix of a path from `A` to `B` is `R_A^{-1} R_B`. A single crossing
//! fixes every basis vector except `e_i`, which goes to
//! `-e_i + sum_j b_ij e_j`.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{crossing_data, ArrangementError, ExchangeGraph, Kind, LevelArrangement, UnwalkablePath};
use crate::dynkin::FlopDatum;
use crate::linalg::{dot_q, fmt_q, qi, IntMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackingError {
    #[error("chamber {chamber} has no neighbour across s{label}")]
    NoSuchWall { chamber: usize, label: usize },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Unwalkable(#[from] UnwalkablePath),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("point lies on a complexified wall (wall {0})")]
    OnComplexifiedWall(usize),
    #[error("tracking left the explored window after {0} steps")]
    StepLimitExceeded(usize),
    #[error("point is not on the boundary of the positive region")]
    NotOnBoundary,
    #[error("point is not on the complexified level")]
    NotOnLevel,
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("translated base alcove is outside the window")]
    TranslateOutsideWindow,
}

/// An integer matrix between the coordinate lattices of two chambers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackingMatrix {
    pub source: usize,
    pub target: usize,
    pub matrix: IntMatrix,
}

/// Matrix of the crossing of chamber `c` across `s_i`, solved from the rays.
pub fn crossing_matrix(graph: &ExchangeGraph, c: usize, i: usize) -> Result<TrackingMatrix, TrackingError> {
    let target = graph.neighbour(c, i).ok_or(TrackingError::NoSuchWall { chamber: c, label: i })?;
    let data = crossing_data(graph, c, i)?;
    let mut m = IntMatrix::identity(graph.dim);
    m.set_column(i, &data.coefficients);
    if graph.chamber(c).rays.mul(&m) != graph.chamber(target).rays {
        return Err(TrackingError::VerificationFailed(format!(
            "crossing s{i} from chamber {c} does not land on chamber {target}"
        )));
    }
    Ok(TrackingMatrix { source: c, target, matrix: m })
}

/// Ordered product of crossing matrices along a word.
pub fn path_matrix(graph: &ExchangeGraph, source: usize, word: &[usize]) -> Result<TrackingMatrix, TrackingError> {
    graph.walk(source, word)?;
    let mut m = IntMatrix::identity(graph.dim);
    let mut cur = source;
    for &l in word {
        let step = crossing_matrix(graph, cur, l)?;
        m = m.mul(&step.matrix);
        cur = step.target;
    }
    Ok(TrackingMatrix { source, target: cur, matrix: m })
}

/// Pairing of the normalization covector with each ray of `c`.
pub fn rank_vector(graph: &ExchangeGraph, c: usize) -> Vec<i64> {
    graph.chamber(c).rays.transpose().mul_vec(&graph.normalization)
}

/// Matrix of tensoring by the `i`-th line bundle (`i` from 1) on the dual
/// lattice, in the basis `(star, white...)`.
pub fn pic_dual_matrix(fd: &FlopDatum, i: usize) -> IntMatrix {
    let l = fd.length_vector();
    let n = fd.n();
    let li = l[i - 1];
    let mut d = IntMatrix::identity(n + 1);
    d.set(0, 0, 1 - li);
    d.set(0, i, 1);
    d.set(i, 0, -li * li);
    d.set(i, i, li + 1);
    for j in (1..=n).filter(|&j| j != i) {
        d.set(j, 0, -li * l[j - 1]);
        d.set(j, i, l[j - 1]);
    }
    d
}

/// The Picard action on the star-plus-white lattice: the transpose of
/// [`pic_dual_matrix`]. On the level it sends `y_i` to `y_i + 1`.
pub fn pic_action_matrix(fd: &FlopDatum, i: usize) -> IntMatrix {
    pic_dual_matrix(fd, i).transpose()
}

/// A shortest positive path realising a translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicDecomposition {
    pub word: Vec<usize>,
    pub target: usize,
    /// `path_matrix` column `j` equals `pic_matrix` column `permutation[j]`.
    pub permutation: Vec<usize>,
    pub path_matrix: IntMatrix,
    pub pic_matrix: IntMatrix,
}

impl PicDecomposition {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn permutation_is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(a, b)| a == *b)
    }
}

/// Finds the alcove `T_i(C_+)` in the graph, a shortest path to it, and the
/// coordinate identification under which the path matrix equals `T_i`.
pub fn decompose_pic_as_mutations(
    la: &LevelArrangement,
    graph: &ExchangeGraph,
    i: usize,
) -> Result<PicDecomposition, TrackingError> {
    let t = pic_action_matrix(&la.fd, i);
    let r = &la.normalization;
    if t.transpose().mul_vec(r) != *r {
        return Err(TrackingError::VerificationFailed("Picard matrix does not preserve the level".into()));
    }
    let base = &graph.chamber(ExchangeGraph::BASE).rays;
    let image = t.mul(base);
    let target = graph.find_by_rays(&image).ok_or(TrackingError::TranslateOutsideWindow)?;
    let word = graph.shortest_word(ExchangeGraph::BASE, target).expect("alcove graph is connected");
    let path = path_matrix(graph, ExchangeGraph::BASE, &word)?.matrix;
    let t_cols = image.columns();
    let permutation: Vec<usize> = path
        .columns()
        .iter()
        .map(|c| t_cols.iter().position(|tc| tc == c))
        .collect::<Option<_>>()
        .ok_or_else(|| TrackingError::VerificationFailed("path matrix is not a column permutation of T".into()))?;
    if t.permute_columns(&permutation) != path {
        return Err(TrackingError::VerificationFailed("path matrix differs from T under the identification".into()));
    }
    Ok(PicDecomposition { word, target, permutation, path_matrix: path, pic_matrix: t })
}

/// `z = x + i y` in the coordinates of a chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPoint {
    pub x: Vec<Q>,
    pub y: Vec<Q>,
}

impl ComplexPoint {
    pub fn new(x: Vec<Q>, y: Vec<Q>) -> Self {
        assert_eq!(x.len(), y.len());
        Self { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Coordinates in the ray basis of a chamber.
    pub fn in_basis(&self, rays: &IntMatrix) -> ComplexPoint {
        ComplexPoint {
            x: rays.solve_q(&self.x).expect("rays are a basis"),
            y: rays.solve_q(&self.y).expect("rays are a basis"),
        }
    }

    pub fn is_on_level(&self, r: &[i64]) -> bool {
        dot_q(r, &self.y) == qi(1) && dot_q(r, &self.x).is_zero()
    }
}

/// Semi-closed upper half plane: `y > 0`, or `y = 0` and `x < 0`.
pub fn in_upper_half_plane(x: &Q, y: &Q) -> bool {
    y.is_positive() || (y.is_zero() && x.is_negative())
}

/// Per-coordinate membership of `phi_C^{-1}(z)` in the upper half plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub chamber: usize,
    /// `(x'_j, y'_j)` as exact fractions.
    pub coordinates: Vec<(String, String)>,
    pub in_half_plane: Vec<bool>,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.in_half_plane.iter().all(|b| *b)
    }
}

pub fn certificate(graph: &ExchangeGraph, c: usize, z: &ComplexPoint) -> Certificate {
    let local = z.in_basis(&graph.chamber(c).rays);
    Certificate {
        chamber: c,
        coordinates: local.x.iter().zip(&local.y).map(|(a, b)| (fmt_q(a), fmt_q(b))).collect(),
        in_half_plane: local.x.iter().zip(&local.y).map(|(a, b)| in_upper_half_plane(a, b)).collect(),
    }
}

/// All chambers of the graph whose tracked region contains `z`.
pub fn member_chambers(graph: &ExchangeGraph, z: &ComplexPoint) -> Vec<usize> {
    (0..graph.len()).filter(|&c| certificate(graph, c, z).passes()).collect()
}

/// Result of tracking a complexified point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub chamber: usize,
    /// Labels crossed from the base chamber.
    pub path: Vec<usize>,
    pub certificate: Certificate,
}

/// The first wall containing both `x` and `y`, if any.
pub fn complexified_wall(graph: &ExchangeGraph, z: &ComplexPoint) -> Option<usize> {
    graph
        .walls
        .iter()
        .position(|w| dot_q(&w.covector, &z.x).is_zero() && dot_q(&w.covector, &z.y).is_zero())
}

/// The chamber `L` with `z` in the tracked region of `L`.
///
/// First `y` is tracked from the base chamber into a closed chamber by
/// crossing walls on which its local coordinate is negative. Then, among
/// the labels where `y` has local coordinate zero, walls are crossed while
/// the local `x` coordinate is positive.
pub fn classify_complex_point(graph: &ExchangeGraph, z: &ComplexPoint) -> Result<Classification, TrackingError> {
    if z.dim() != graph.dim {
        return Err(TrackingError::DimensionMismatch { expected: graph.dim, got: z.dim() });
    }
    if graph.kind == Kind::Affine && !z.is_on_level(&graph.normalization) {
        return Err(TrackingError::NotOnLevel);
    }
    if let Some(w) = complexified_wall(graph, z) {
        return Err(TrackingError::OnComplexifiedWall(w));
    }
    let limit = graph.len() + 1;
    let mut cur = ExchangeGraph::BASE;
    let mut path = Vec::new();
    let step = |cur: usize, l: usize, path: &mut Vec<usize>| -> Result<usize, TrackingError> {
        if path.len() >= limit {
            return Err(TrackingError::StepLimitExceeded(path.len()));
        }
        path.push(l);
        graph.neighbour(cur, l).ok_or(TrackingError::StepLimitExceeded(path.len()))
    };
    loop {
        let local = z.in_basis(&graph.chamber(cur).rays);
        match local.y.iter().position(|v| v.is_negative()) {
            Some(j) => cur = step(cur, j, &mut path)?,
            None => break,
        }
    }
    let zero_set: Vec<usize> = {
        let local = z.in_basis(&graph.chamber(cur).rays);
        (0..graph.dim).filter(|&j| local.y[j].is_zero()).collect()
    };
    loop {
        let local = z.in_basis(&graph.chamber(cur).rays);
        if let Some(&j) = zero_set.iter().find(|&&j| local.x[j].is_zero()) {
            return Err(TrackingError::OnComplexifiedWall(graph.chamber(cur).facet_walls[j]));
        }
        match zero_set.iter().find(|&&j| local.x[j].is_positive()) {
            Some(&j) => cur = step(cur, j, &mut path)?,
            None => break,
        }
    }
    let certificate = certificate(graph, cur, z);
    if !certificate.passes() {
        return Err(TrackingError::VerificationFailed(format!("certificate fails at chamber {cur}")));
    }
    Ok(Classification { chamber: cur, path, certificate })
}

/// A straight path from a boundary point of the positive level region into
/// its interior, keeping `x` fixed and the level equation satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorPath {
    pub start: ComplexPoint,
    /// Coordinates where `y` vanishes; they rise as `t`.
    pub zero_set: Vec<usize>,
    /// The coordinate lowered to compensate.
    pub compensating: Option<usize>,
    /// `gamma = sum of the weights over the zero set`.
    pub gamma: Q,
    /// Parameter range `[0, s]`; zero for an interior start.
    pub s: Q,
    pub weights: Vec<i64>,
}

impl InteriorPath {
    pub fn is_empty(&self) -> bool {
        self.s.is_zero()
    }

    pub fn at(&self, t: Q) -> ComplexPoint {
        let mut y = self.start.y.clone();
        for &j in &self.zero_set {
            y[j] = t;
        }
        if let Some(m) = self.compensating {
            y[m] = self.start.y[m] - self.gamma * t / qi(self.weights[m]);
        }
        ComplexPoint { x: self.start.x.clone(), y }
    }

    pub fn end(&self) -> ComplexPoint {
        self.at(self.s)
    }
}

/// Path from `z` (in base chamber coordinates, on the level with weights
/// `lambda`) into the open region where every `y_j > 0`.
pub fn path_into_interior(lambda: &[i64], z: &ComplexPoint) -> Result<InteriorPath, TrackingError> {
    if z.dim() != lambda.len() {
        return Err(TrackingError::DimensionMismatch { expected: lambda.len(), got: z.dim() });
    }
    if !z.is_on_level(lambda) {
        return Err(TrackingError::NotOnLevel);
    }
    if !z.x.iter().zip(&z.y).all(|(a, b)| in_upper_half_plane(a, b)) {
        return Err(TrackingError::NotOnBoundary);
    }
    let zero_set: Vec<usize> = (0..z.dim()).filter(|&j| z.y[j].is_zero()).collect();
    if zero_set.is_empty() {
        return Ok(InteriorPath {
            start: z.clone(),
            zero_set,
            compensating: None,
            gamma: qi(0),
            s: qi(0),
            weights: lambda.to_vec(),
        });
    }
    let m = (0..z.dim()).rev().find(|&j| z.y[j].is_positive()).ok_or(TrackingError::NotOnBoundary)?;
    let gamma: Q = zero_set.iter().map(|&j| qi(lambda[j])).sum();
    let s = qi(lambda[m]) * z.y[m] / (gamma * qi(2));
    Ok(InteriorPath { start: z.clone(), zero_set, compensating: Some(m), gamma, s, weights: lambda.to_vec() })
}
