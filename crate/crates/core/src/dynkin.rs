//! Simply-laced Dynkin diagrams, their affine extensions, Dynkin
//! involutions, and the catalog of irreducible smooth flops.
//!
//! Vertex numbering (see `DIAGRAMS.md`):
//!
//! * `A_n`: the chain `1 - 2 - ... - n`.
//! * `D_n`: the chain `1 - ... - (n-2)`, with leaves `n-1` and `n` both
//!   attached to the fork vertex `n-2`.
//! * `E_n`: Bourbaki numbering, the chain `1 - 3 - 4 - ... - n` with `2`
//!   attached to the branch vertex `4`.
//!
//! The extending vertex of an affine diagram is always vertex `0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{canonical, kernel_line, IntMatrix};
use crate::roots;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynkinError {
    #[error("no simply-laced Dynkin diagram of type {family}{rank}")]
    IllegalDiagram { family: Family, rank: usize },
    #[error("vertex {0} is not a vertex of the diagram")]
    NoSuchVertex(usize),
    #[error("a flop datum needs at least one white vertex")]
    NoWhiteVertex,
    #[error("vertex {0} is not currently white")]
    NotWhite(usize),
    #[error("unknown Dynkin family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            other => Err(DynkinError::UnknownFamily(other.to_string())),
        }
    }
}

/// A finite simply-laced Dynkin diagram with vertices `1..=rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    family: Family,
    rank: usize,
    edges: Vec<(usize, usize)>,
}

impl DynkinDiagram {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    /// Edges as unordered pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Cartan matrix indexed by `vertex - 1`.
    pub fn cartan(&self) -> IntMatrix {
        let mut c = IntMatrix::identity(self.rank);
        for i in 0..self.rank {
            c.set(i, i, 2);
        }
        for &(a, b) in &self.edges {
            c.set(a - 1, b - 1, -1);
            c.set(b - 1, a - 1, -1);
        }
        c
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The whole diagram as a Cartan subgraph.
    pub fn as_subgraph(&self) -> CartanSubgraph {
        CartanSubgraph { labels: self.vertices().collect(), cartan: self.cartan() }
    }
}

/// Returns the standard diagram of the given type.
pub fn build_diagram(family: Family, rank: usize) -> Result<DynkinDiagram, DynkinError> {
    let legal = match family {
        Family::A => rank >= 1,
        Family::D => rank >= 4,
        Family::E => (6..=8).contains(&rank),
    };
    if !legal {
        return Err(DynkinError::IllegalDiagram { family, rank });
    }
    let mut edges = Vec::new();
    match family {
        Family::A => edges.extend((1..rank).map(|i| (i, i + 1))),
        Family::D => {
            edges.extend((1..rank - 1).map(|i| (i, i + 1)));
            edges.push((rank - 2, rank));
        }
        Family::E => {
            edges.push((1, 3));
            edges.extend((3..rank).map(|i| (i, i + 1)));
            edges.push((2, 4));
        }
    }
    edges.sort_unstable();
    Ok(DynkinDiagram { family, rank, edges })
}

/// A set of labelled vertices with a symmetric generalized Cartan matrix:
/// a full diagram, an affine diagram, or what is left after deleting
/// vertices from one of those.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanSubgraph {
    /// Vertex labels, in matrix order.
    pub labels: Vec<usize>,
    pub cartan: IntMatrix,
}

impl CartanSubgraph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Removes the given vertices.
    pub fn delete(&self, removed: &[usize]) -> CartanSubgraph {
        let keep: Vec<usize> =
            (0..self.len()).filter(|&i| !removed.contains(&self.labels[i])).collect();
        let mut cartan = IntMatrix::zeros(keep.len(), keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                cartan.set(a, b, self.cartan.get(i, j));
            }
        }
        CartanSubgraph { labels: keep.iter().map(|&i| self.labels[i]).collect(), cartan }
    }

    /// Connected components, each as its own subgraph, in order of their
    /// smallest label.
    pub fn components(&self) -> Vec<CartanSubgraph> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for (w, flag) in seen.iter_mut().enumerate() {
                    if !*flag && w != u && self.cartan.get(u, w) != 0 {
                        *flag = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            let removed: Vec<usize> =
                (0..n).filter(|x| !comp.contains(x)).map(|x| self.labels[x]).collect();
            out.push(self.delete(&removed));
        }
        out
    }

    fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| j != i && self.cartan.get(i, j) != 0).collect()
    }
}

/// An extended (affine) Dynkin diagram. Vertex `0` is the extending vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDiagram {
    base: DynkinDiagram,
    cartan: IntMatrix,
    marks: Vec<i64>,
}

impl AffineDiagram {
    pub fn base(&self) -> &DynkinDiagram {
        &self.base
    }

    pub fn star_vertex(&self) -> usize {
        0
    }

    /// Affine Cartan matrix indexed by vertex (`0` is the extending vertex).
    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    /// Coefficients of the imaginary root, indexed by vertex.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn mark(&self, v: usize) -> i64 {
        self.marks[v]
    }

    pub fn as_subgraph(&self) -> CartanSubgraph {
        CartanSubgraph { labels: (0..=self.base.rank).collect(), cartan: self.cartan.clone() }
    }

    /// Edges of the affine diagram as `(a, b, multiplicity)`.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let n = self.base.rank;
        let mut out = Vec::new();
        for a in 0..=n {
            for b in a + 1..=n {
                let m = -self.cartan.get(a, b);
                if m != 0 {
                    out.push((a, b, m));
                }
            }
        }
        out
    }
}

/// Vertices of the base diagram joined to the extending vertex.
fn star_attachment(d: &DynkinDiagram) -> Vec<usize> {
    match (d.family, d.rank) {
        (Family::A, 1) => vec![1, 1],
        (Family::A, n) => vec![1, n],
        (Family::D, _) => vec![2],
        (Family::E, 6) => vec![2],
        (Family::E, 7) => vec![1],
        (Family::E, _) => vec![8],
    }
}

/// Adds the extending vertex and computes marks as the primitive positive
/// kernel vector of the affine Cartan matrix.
pub fn affine_extension(d: &DynkinDiagram) -> AffineDiagram {
    let n = d.rank;
    let mut cartan = IntMatrix::zeros(n + 1, n + 1);
    cartan.set(0, 0, 2);
    let fin = d.cartan();
    for i in 0..n {
        for j in 0..n {
            cartan.set(i + 1, j + 1, fin.get(i, j));
        }
    }
    for v in star_attachment(d) {
        cartan.set(0, v, cartan.get(0, v) - 1);
        cartan.set(v, 0, cartan.get(v, 0) - 1);
    }
    let rows = cartan.to_rows();
    let k = kernel_line(&rows, n + 1).expect("affine Cartan matrix has corank one");
    let marks = canonical(&k);
    debug_assert!(marks.iter().all(|m| *m > 0) && marks[0] == 1);
    AffineDiagram { base: d.clone(), cartan, marks }
}

/// A permutation of a finite vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Involution {
    map: BTreeMap<usize, usize>,
}

impl Involution {
    pub fn identity_on(vertices: impl IntoIterator<Item = usize>) -> Self {
        Self { map: vertices.into_iter().map(|v| (v, v)).collect() }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map.get(&v).copied().unwrap_or(v)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.map.iter().filter(|(a, b)| a == b).map(|(a, _)| *a).collect()
    }

    pub fn squares_to_identity(&self) -> bool {
        self.map.keys().all(|&v| self.apply(self.apply(v)) == v)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    fn extend(&mut self, other: Involution) {
        self.map.extend(other.map);
    }
}

/// `-w_0` on simple roots, computed from the root system of each component.
///
/// The longest element is found by walking `rho` to `-rho` with simple
/// reflections; the resulting reduced word is then applied to each simple
/// root.
pub fn dynkin_involution(g: &CartanSubgraph) -> Involution {
    let mut inv = Involution::default();
    for comp in g.components() {
        inv.extend(component_involution_from_roots(&comp));
    }
    inv
}

fn component_involution_from_roots(g: &CartanSubgraph) -> Involution {
    let n = g.len();
    let c = &g.cartan;
    // Weight coordinates of rho.
    let mut lambda = vec![1i64; n];
    let mut word = Vec::new();
    while let Some(i) = (0..n).find(|&i| lambda[i] > 0) {
        let li = lambda[i];
        for (j, l) in lambda.iter_mut().enumerate() {
            *l -= li * c.get(i, j);
        }
        word.push(i);
    }
    let mut map = BTreeMap::new();
    for j in 0..n {
        let mut beta = vec![0i64; n];
        beta[j] = 1;
        for &i in &word {
            let pairing: i64 = (0..n).map(|k| beta[k] * c.get(k, i)).sum();
            beta[i] -= pairing;
        }
        let target = (0..n)
            .find(|&k| beta[k] == -1 && beta.iter().filter(|x| **x != 0).count() == 1)
            .expect("-w0 permutes the simple roots");
        map.insert(g.labels[j], g.labels[target]);
    }
    Involution { map }
}

/// The same involution read off from the classical table: reverse `A_n`,
/// swap the short legs of odd `D_n`, swap the long arms of `E_6`, identity
/// otherwise.
pub fn dynkin_involution_table(g: &CartanSubgraph) -> Involution {
    let mut inv = Involution::default();
    for comp in g.components() {
        inv.extend(component_involution_from_table(&comp));
    }
    inv
}

fn component_involution_from_table(g: &CartanSubgraph) -> Involution {
    let n = g.len();
    let identity = Involution::identity_on(g.labels.iter().copied());
    if n <= 1 {
        return identity;
    }
    let branch = (0..n).find(|&i| g.neighbours(i).len() >= 3);
    let Some(b) = branch else {
        // A path: walk it from one end and reverse.
        let end = (0..n).find(|&i| g.neighbours(i).len() == 1).expect("a path has an end");
        let order = walk_arm(g, end, usize::MAX);
        let map = order
            .iter()
            .zip(order.iter().rev())
            .map(|(&a, &b)| (g.labels[a], g.labels[b]))
            .collect();
        return Involution { map };
    };
    let mut arms: Vec<Vec<usize>> = g.neighbours(b).into_iter().map(|s| walk_arm(g, s, b)).collect();
    arms.sort_by_key(Vec::len);
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    let swap = |a: &[usize], c: &[usize]| -> Involution {
        let mut map = identity.map.clone();
        for (&x, &y) in a.iter().zip(c) {
            map.insert(g.labels[x], g.labels[y]);
            map.insert(g.labels[y], g.labels[x]);
        }
        Involution { map }
    };
    match lens.as_slice() {
        // D_n with n = len + 3 vertices.
        [1, 1, _] if n % 2 == 1 => swap(&arms[0], &arms[1]),
        [1, 2, 2] => swap(&arms[1], &arms[2]),
        _ => identity,
    }
}

/// Vertices of the arm starting at `start`, moving away from `from`.
fn walk_arm(g: &CartanSubgraph, start: usize, from: usize) -> Vec<usize> {
    let mut arm = vec![start];
    let mut prev = from;
    let mut cur = start;
    loop {
        let next: Vec<usize> = g.neighbours(cur).into_iter().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [w] => {
                prev = cur;
                cur = *w;
                arm.push(cur);
            }
            _ => return arm,
        }
    }
}

/// A Dynkin diagram together with its white (curve) vertices; the
/// remaining vertices form the contracted set `J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlopDatum {
    diagram: DynkinDiagram,
    white: Vec<usize>,
    lengths: Vec<i64>,
}

impl FlopDatum {
    pub fn new(diagram: DynkinDiagram, white: &[usize]) -> Result<Self, DynkinError> {
        let set: BTreeSet<usize> = white.iter().copied().collect();
        if set.is_empty() {
            return Err(DynkinError::NoWhiteVertex);
        }
        if let Some(&bad) = set.iter().find(|v| !diagram.vertices().contains(v)) {
            return Err(DynkinError::NoSuchVertex(bad));
        }
        let white: Vec<usize> = set.into_iter().collect();
        let marks = affine_extension(&diagram).marks;
        let lengths = white.iter().map(|&v| marks[v]).collect();
        Ok(Self { diagram, white, lengths })
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    /// White vertices in increasing order; finite coordinate `p` is
    /// `white()[p]`.
    pub fn white(&self) -> &[usize] {
        &self.white
    }

    /// The contracted vertices.
    pub fn j_set(&self) -> Vec<usize> {
        self.diagram.vertices().filter(|v| !self.white.contains(v)).collect()
    }

    /// Number of curves.
    pub fn n(&self) -> usize {
        self.white.len()
    }

    pub fn affine(&self) -> AffineDiagram {
        affine_extension(&self.diagram)
    }

    /// Affine marks at the white vertices.
    pub fn length_vector(&self) -> Vec<i64> {
        self.lengths.clone()
    }

    /// Normalization covector `(1, l_1, ..., l_n)` over the extending vertex
    /// and the white vertices.
    pub fn rank_covector(&self) -> Vec<i64> {
        std::iter::once(1).chain(self.length_vector()).collect()
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            family: self.diagram.family.to_string(),
            rank: self.diagram.rank,
            white: self.white.clone(),
            edges: self.diagram.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Self, DynkinError> {
        let family: Family = j.family.parse()?;
        let d = build_diagram(family, j.rank)?;
        FlopDatum::new(d, &j.white)
    }
}

/// Diagram serialization: `{ "family": "E", "rank": 6, "white": [4], "edges": [[1,3], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub family: String,
    pub rank: usize,
    pub white: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub datum: FlopDatum,
    pub length: i64,
}

/// The six Dynkin data of smooth irreducible flops, in order of length.
pub fn katz_morrison_catalog() -> Vec<CatalogEntry> {
    let table: [(&str, Family, usize, usize); 6] = [
        ("A1", Family::A, 1, 1),
        ("D4", Family::D, 4, 2),
        ("E6", Family::E, 6, 4),
        ("E7", Family::E, 7, 4),
        ("E8(5)", Family::E, 8, 5),
        ("E8(6)", Family::E, 8, 4),
    ];
    table
        .iter()
        .map(|&(name, family, rank, white)| {
            let d = build_diagram(family, rank).expect("catalog diagrams are legal");
            let datum = FlopDatum::new(d, &[white]).expect("catalog white vertex exists");
            let length = datum.length_vector()[0];
            CatalogEntry { name, datum, length }
        })
        .collect()
}

/// Catalog entry of the given length, if `1 <= length <= 6`.
pub fn catalog_datum(length: i64) -> Option<FlopDatum> {
    katz_morrison_catalog().into_iter().find(|e| e.length == length).map(|e| e.datum)
}

/// Vertices of an affine diagram carrying the summands of the current
/// module, indexed by summand: entry `0` starts at the extending vertex and
/// entry `p > 0` at the `p`-th white vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledState {
    pub white: Vec<usize>,
}

impl LabeledState {
    pub fn initial(fd: &FlopDatum) -> Self {
        Self { white: std::iter::once(0).chain(fd.white().iter().copied()).collect() }
    }

    pub fn is_white(&self, v: usize) -> bool {
        self.white.contains(&v)
    }
}

/// Crossing the wall labelled by white vertex `v`: delete `v`, apply the
/// Dynkin involution of what remains to the other white vertices, and put
/// `v` back.
pub fn wall_cross_label(
    aff: &AffineDiagram,
    state: &LabeledState,
    v: usize,
) -> Result<LabeledState, DynkinError> {
    if !state.is_white(v) {
        return Err(DynkinError::NotWhite(v));
    }
    let rest = aff.as_subgraph().delete(&[v]);
    let inv = dynkin_involution(&rest);
    Ok(LabeledState {
        white: state.white.iter().map(|&u| if u == v { v } else { inv.apply(u) }).collect(),
    })
}

/// Walks the one-curve affine line away from the base chamber, alternately
/// mutating summands `0` and `1`, and returns the states of the visited
/// chambers (starting with the base) together with the rank label of each
/// crossed wall.
///
/// Mutating summand `k` crosses the wall labelled by the vertex of the other
/// summand, whose mark is the rank label of that wall.
pub fn one_curve_label_walk(fd: &FlopDatum, steps: usize) -> (Vec<LabeledState>, Vec<i64>) {
    assert_eq!(fd.n(), 1, "label walk is defined for one-curve data");
    let aff = fd.affine();
    let mut state = LabeledState::initial(fd);
    let mut states = vec![state.clone()];
    let mut labels = Vec::with_capacity(steps);
    for step in 0..steps {
        let mutated = step % 2;
        let wall_vertex = state.white[1 - mutated];
        labels.push(aff.mark(wall_vertex));
        state = wall_cross_label(&aff, &state, wall_vertex).expect("wall vertex is white");
        states.push(state.clone());
    }
    (states, labels)
}

/// Smallest period `p` of the (state, parity) sequence of the label walk.
pub fn label_walk_period(fd: &FlopDatum) -> usize {
    let horizon = 64;
    let (states, _) = one_curve_label_walk(fd, 2 * horizon);
    (1..=horizon)
        .find(|&p| (0..horizon).all(|t| states[t] == states[t + p] && (t % 2) == ((t + p) % 2)))
        .expect("label walk is periodic")
}

/// Highest root of a finite diagram, by root closure.
pub fn highest_root(d: &DynkinDiagram) -> Vec<i64> {
    roots::positive_roots(d)
        .into_iter()
        .max_by_key(|r| r.coefficients().iter().sum::<i64>())
        .expect("a diagram has roots")
        .coefficients()
        .to_vec()
}
