//! Chamber and alcove enumeration by wall crossing.
//!
//! Both the finite arrangement (in the white coordinates) and the affine
//! arrangement (in star-plus-white coordinates, cut down to a window of
//! the level) are handled by one engine: a chamber is a simplicial cone
//! given by an integer ray matrix whose columns are labelled by coordinate
//! index, and crossing the wall opposite ray `i` replaces that ray by the
//! unique primitive ray on the other side.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Signed;
use thiserror::Error;

use crate::dynkin::FlopDatum;
use crate::linalg::{canonical, clear_denominators, dot, kernel, kernel_line, q, qi, IntMatrix, Q};
use crate::roots::{affine_wall_set, finite_wall_set, max_white_norm, positive_roots, white_part, Wall};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("walls have a common kernel, arrangement is not essential")]
    NotEssential,
    #[error("cone reached from chamber {chamber} across s{label} is cut by wall {wall}")]
    NotSimplicial { chamber: usize, label: usize, wall: usize },
    #[error("new ray {ray:?} from chamber {chamber} across s{label} has coefficients {coefficients:?}")]
    NonIntegralRay { chamber: usize, label: usize, ray: Vec<i64>, coefficients: Vec<String> },
    #[error("walls around chamber {chamber} across s{label} do not meet in a line")]
    Degenerate { chamber: usize, label: usize },
    #[error("facet s{label} of chamber {chamber} is not a wall of the arrangement")]
    NoSuchWall { chamber: usize, label: usize },
    #[error("chamber reached twice with different ray labels: {first:?} vs {second:?}")]
    LabelMismatch { first: Vec<Vec<i64>>, second: Vec<Vec<i64>> },
    #[error("window {0} does not contain the base alcove")]
    WindowTooSmall(String),
    #[error("window bound k = {k_max} does not cover the box (needs k >= {needed})")]
    IncompleteWindow { k_max: i64, needed: i64 },
    #[error("rank labels of walls are only defined for one-curve data")]
    Unsupported,
    #[error("wall at {position} has denominator {denominator} but an adjacent ray has rank {rank}")]
    LabelDisagreement { position: String, denominator: i64, rank: i64 },
}

/// Finite or affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Finite,
    Affine,
}

/// The finite arrangement in the white coordinates of a flop datum.
#[derive(Debug, Clone)]
pub struct FiniteArrangement {
    pub fd: FlopDatum,
    pub walls: Vec<Wall>,
}

impl FiniteArrangement {
    pub fn new(fd: &FlopDatum) -> Result<Self, ArrangementError> {
        let walls = finite_wall_set(fd);
        let rows: Vec<Vec<i64>> = walls.iter().map(|w| w.covector.clone()).collect();
        if !kernel(&rows, fd.n()).is_empty() {
            return Err(ArrangementError::NotEssential);
        }
        Ok(Self { fd: fd.clone(), walls })
    }

    pub fn dimension(&self) -> usize {
        self.fd.n()
    }
}

/// A truncation of the affine arrangement: affine roots with `|k| <= k_max`
/// and the box `[lo, hi]^n` in the white level coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub k_max: i64,
    pub lo: Q,
    pub hi: Q,
}

impl Window {
    /// A symmetric box on which every wall has `|k| <= k_max`. For one
    /// curve this is the largest such box bounded by walls; otherwise it is
    /// `|y_i| <= k_max / m` with `m` the largest white root norm.
    pub fn from_k(fd: &FlopDatum, k_max: i64) -> Self {
        let k_max = k_max.max(0);
        let r = if fd.n() == 1 {
            let radius = completeness_radius(fd, k_max);
            let coeffs = white_coefficients(fd);
            let mut best = qi(0);
            for &a in &coeffs {
                for k in 0..=k_max {
                    let p = q(k as i128, a as i128);
                    if p < radius && p > best {
                        best = p;
                    }
                }
            }
            best
        } else {
            q(k_max as i128, max_white_norm(fd).max(1) as i128)
        };
        Self { k_max, lo: -r, hi: r }
    }

    /// The box `[lo, hi]^n` with the smallest complete `k_max`.
    pub fn covering(fd: &FlopDatum, lo: Q, hi: Q) -> Self {
        let k_max = minimal_k(fd, lo.abs().max(hi.abs()));
        Self { k_max, lo, hi }
    }

    /// Minimal `k_max` for which no wall meeting the box is missing.
    pub fn needed_k(&self, fd: &FlopDatum) -> i64 {
        minimal_k(fd, self.lo.abs().max(self.hi.abs()))
    }

    pub fn contains(&self, x: &Q) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    pub fn describe(&self) -> String {
        format!(
            "k<={} box [{}, {}]",
            self.k_max,
            crate::linalg::fmt_q(&self.lo),
            crate::linalg::fmt_q(&self.hi)
        )
    }
}

/// Distance from the origin of the level to the nearest wall with
/// `|k| > k_max`. Boxes strictly inside this radius see every wall that
/// meets them or bounds one of their alcoves.
///
/// One-curve walls sit at `-k/a` for the white coefficients `a` of the
/// roots, so the nearest missing position is exact. With several curves the
/// bound `|k| <= |a|_1 * radius` is used.
pub fn completeness_radius(fd: &FlopDatum, k_max: i64) -> Q {
    let k_max = k_max.max(0);
    if fd.n() != 1 {
        return q((k_max + 1) as i128, max_white_norm(fd).max(1) as i128);
    }
    let coeffs = white_coefficients(fd);
    let smallest_k = |u: i64, d: i64| coeffs.iter().filter(|&&a| a % d == 0).map(|&a| u * (a / d)).min();
    let mut best: Option<Q> = None;
    for &a in &coeffs {
        for k in (k_max + 1).. {
            let p = q(k as i128, a as i128);
            let (u, d) = (*p.numer() as i64, *p.denom() as i64);
            if smallest_k(u, d).is_some_and(|m| m > k_max) {
                best = Some(best.map_or(p, |b| b.min(p)));
                break;
            }
        }
    }
    best.unwrap_or_else(|| qi(k_max + 1))
}

fn white_coefficients(fd: &FlopDatum) -> BTreeSet<i64> {
    positive_roots(fd.diagram()).iter().map(|r| white_part(r, fd)[0]).filter(|a| *a != 0).collect()
}

/// Smallest `k_max` whose completeness radius exceeds `reach`.
fn minimal_k(fd: &FlopDatum, reach: Q) -> i64 {
    let mut k = 0;
    while completeness_radius(fd, k) <= reach {
        k += 1;
    }
    k
}

/// Chamber ids keyed by their sorted ray columns.
type RayIndex = HashMap<Vec<Vec<i64>>, usize>;

/// The affine arrangement restricted to a window, on the level
/// `<r, theta> = 1` with `r = (1, l_1, ..., l_n)`.
#[derive(Debug, Clone)]
pub struct LevelArrangement {
    pub fd: FlopDatum,
    pub normalization: Vec<i64>,
    pub walls: Vec<Wall>,
    pub window: Window,
}

impl LevelArrangement {
    pub fn new(fd: &FlopDatum, window: Window) -> Result<Self, ArrangementError> {
        let needed = window.needed_k(fd);
        if window.k_max < needed {
            return Err(ArrangementError::IncompleteWindow { k_max: window.k_max, needed });
        }
        let walls = affine_wall_set(fd, window.k_max);
        Ok(Self { fd: fd.clone(), normalization: fd.rank_covector(), walls, window })
    }

    pub fn dimension(&self) -> usize {
        self.fd.n() + 1
    }

    /// Level coordinates `(theta_1, ..., theta_n)` of a ray in the Tits cone.
    pub fn level_point(&self, ray: &[i64]) -> Vec<Q> {
        level_point(&self.normalization, ray)
    }

    /// Where a wall meets the level line (one-curve data only).
    pub fn wall_position(&self, covector: &[i64]) -> Option<Q> {
        if covector.len() != 2 {
            return None;
        }
        let l = self.normalization[1];
        let den = covector[0] * l - covector[1];
        if den == 0 {
            return None;
        }
        Some(q(covector[0] as i128, den as i128))
    }

    /// Walls meeting the window box, with their level positions, sorted by
    /// position (one-curve data only).
    pub fn level_walls(&self) -> Vec<(usize, Q)> {
        let mut out: Vec<(usize, Q)> = self
            .walls
            .iter()
            .enumerate()
            .filter_map(|(id, w)| self.wall_position(&w.covector).map(|p| (id, p)))
            .filter(|(_, p)| self.window.contains(p))
            .collect();
        out.sort_by_key(|a| a.1);
        out
    }
}

/// `ray / <r, ray>`, dropping the star coordinate.
pub fn level_point(r: &[i64], ray: &[i64]) -> Vec<Q> {
    let s = dot(r, ray);
    ray[1..].iter().map(|&x| q(x as i128, s as i128)).collect()
}

/// One chamber (or alcove cone) of an exchange graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub id: usize,
    /// Columns are primitive rays; column `i` is opposite the wall labelled `s_i`.
    pub rays: IntMatrix,
    /// `+` or `-` per wall of the graph, evaluated at the sum of the rays.
    pub sign_vector: String,
    /// A shortest word of labels from the base chamber.
    pub word: Vec<usize>,
    /// Neighbour across each label, if it lies in the explored region.
    pub neighbours: Vec<Option<usize>>,
    /// Wall index (into the graph's wall list) of each facet.
    pub facet_walls: Vec<usize>,
}

impl Chamber {
    pub fn ray(&self, i: usize) -> Vec<i64> {
        self.rays.column(i)
    }

    /// The sum of the rays, a point of the open cone.
    pub fn interior_point(&self) -> Vec<i64> {
        (0..self.rays.rows()).map(|r| self.rays.row(r).iter().sum()).collect()
    }
}

/// Chambers with labelled adjacency. Chamber `0` is the base chamber.
#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub kind: Kind,
    pub dim: usize,
    pub walls: Vec<Wall>,
    pub chambers: Vec<Chamber>,
    /// `(l_1, ..., l_n)` for finite graphs, `(1, l_1, ..., l_n)` for affine.
    pub normalization: Vec<i64>,
    pub window: Option<Window>,
    index: HashMap<Vec<Vec<i64>>, usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("path {word:?} from chamber {source_id} leaves the graph at step {step}")]
pub struct UnwalkablePath {
    pub source_id: usize,
    pub word: Vec<usize>,
    pub step: usize,
}

impl ExchangeGraph {
    pub const BASE: usize = 0;

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chamber(&self, id: usize) -> &Chamber {
        &self.chambers[id]
    }

    pub fn neighbour(&self, id: usize, label: usize) -> Option<usize> {
        self.chambers[id].neighbours[label]
    }

    /// Display name of a label: finite labels are numbered from 1, affine
    /// ones from 0 (the star coordinate).
    pub fn label_name(&self, label: usize) -> String {
        match self.kind {
            Kind::Finite => format!("s{}", label + 1),
            Kind::Affine => format!("s{label}"),
        }
    }

    pub fn parse_label(&self, name: &str) -> Option<usize> {
        let n: usize = name.trim().strip_prefix('s')?.parse().ok()?;
        let label = match self.kind {
            Kind::Finite => n.checked_sub(1)?,
            Kind::Affine => n,
        };
        (label < self.dim).then_some(label)
    }

    /// Chamber with exactly this set of rays, in any column order.
    pub fn find_by_rays(&self, rays: &IntMatrix) -> Option<usize> {
        self.index.get(&ray_key(rays)).copied()
    }

    /// Follows a word from `source`.
    pub fn walk(&self, source: usize, word: &[usize]) -> Result<usize, UnwalkablePath> {
        let mut cur = source;
        for (step, &l) in word.iter().enumerate() {
            cur = self
                .chambers[cur]
                .neighbours
                .get(l)
                .copied()
                .flatten()
                .ok_or(UnwalkablePath { source_id: source, word: word.to_vec(), step })?;
        }
        Ok(cur)
    }

    /// Graph distances from `source` (`None` if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have distances");
            for v in self.chambers[u].neighbours.iter().flatten() {
                if dist[*v].is_none() {
                    dist[*v] = Some(du + 1);
                    queue.push_back(*v);
                }
            }
        }
        dist
    }

    /// A shortest word from `a` to `b`, choosing the smallest label first
    /// at each step.
    pub fn shortest_word(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let dist = self.distances_from(b);
        dist[a]?;
        let mut word = Vec::new();
        let mut cur = a;
        while cur != b {
            let d = dist[cur].expect("reachable");
            let (l, next) = self.chambers[cur]
                .neighbours
                .iter()
                .enumerate()
                .find_map(|(l, n)| n.filter(|v| dist[*v] == Some(d - 1)).map(|v| (l, v)))
                .expect("a neighbour is closer");
            word.push(l);
            cur = next;
        }
        Some(word)
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.chambers.iter().map(|c| c.neighbours.iter().flatten().count()).sum::<usize>() / 2
    }

    /// Walls read off from the chambers themselves: every facet normal.
    pub fn facet_covectors(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self
            .chambers
            .iter()
            .flat_map(|c| (0..self.dim).map(move |i| facet_normal(&c.rays, i)))
            .map(|h| canonical(&h))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Rays of the base chamber's image of each chamber, as level points.
    pub fn alcove_vertices(&self, id: usize) -> Vec<Vec<Q>> {
        assert_eq!(self.kind, Kind::Affine);
        self.chambers[id].rays.columns().iter().map(|c| level_point(&self.normalization, c)).collect()
    }
}

/// Column set of a ray matrix, sorted: the identity of a chamber.
fn ray_key(rays: &IntMatrix) -> Vec<Vec<i64>> {
    let mut cols = rays.columns();
    cols.sort();
    cols
}

/// Primitive integer normal of the facet opposite ray `i`, positive on ray `i`.
pub fn facet_normal(rays: &IntMatrix, i: usize) -> Vec<i64> {
    let inv = rays.inverse_q().expect("chamber rays are a basis");
    clear_denominators(&inv[i])
}

/// The geometric data of one wall crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// The new ray replacing ray `i`.
    pub ray: Vec<i64>,
    /// Coordinates of the new ray in the old ray basis: `-1` at `i`.
    pub coefficients: Vec<i64>,
    pub wall: usize,
}

struct Engine<'a> {
    dim: usize,
    walls: &'a [Wall],
    wall_index: HashMap<Vec<i64>, usize>,
}

impl<'a> Engine<'a> {
    fn new(dim: usize, walls: &'a [Wall]) -> Self {
        let wall_index = walls.iter().enumerate().map(|(i, w)| (w.covector.clone(), i)).collect();
        Self { dim, walls, wall_index }
    }

    fn wall_of_facet(&self, rays: &IntMatrix, i: usize, chamber: usize) -> Result<usize, ArrangementError> {
        let h = canonical(&facet_normal(rays, i));
        self.wall_index
            .get(&h)
            .copied()
            .ok_or(ArrangementError::NoSuchWall { chamber, label: i })
    }

    /// Crosses the facet opposite ray `i` and checks the shape of the
    /// new ray's coefficients.
    fn cross(&self, rays: &IntMatrix, i: usize, chamber: usize) -> Result<Crossing, ArrangementError> {
        let (ray, coeffs, wall) = self.cross_unchecked(rays, i, chamber)?;
        let integral = coeffs.iter().all(|c| c.is_integer());
        let shape_ok = integral
            && coeffs[i] == qi(-1)
            && coeffs.iter().enumerate().all(|(j, c)| j == i || !c.is_negative());
        if !shape_ok {
            return Err(ArrangementError::NonIntegralRay {
                chamber,
                label: i,
                ray,
                coefficients: coeffs.iter().map(crate::linalg::fmt_q).collect(),
            });
        }
        let coefficients = coeffs.iter().map(|c| c.to_integer() as i64).collect();
        Ok(Crossing { ray, coefficients, wall })
    }

    /// The new ray across the facet opposite ray `i`, with its coordinates
    /// in the old ray basis.
    ///
    /// For each other ray `k`, the walls through the codimension-two face
    /// spanned by the remaining rays form a pencil; the new facet opposite
    /// `k` is the first wall of that pencil met after the crossed one.
    fn cross_unchecked(
        &self,
        rays: &IntMatrix,
        i: usize,
        chamber: usize,
    ) -> Result<(Vec<i64>, Vec<Q>, usize), ArrangementError> {
        let d = self.dim;
        let wall = self.wall_of_facet(rays, i, chamber)?;
        let h_i = facet_normal(rays, i);
        let cols = rays.columns();
        // dots[w][j] = <w, rho_j>
        let dots: Vec<Vec<i64>> =
            self.walls.iter().map(|w| cols.iter().map(|c| dot(&w.covector, c)).collect()).collect();
        let mut new_walls: Vec<Vec<i64>> = Vec::with_capacity(d.saturating_sub(1));
        for k in (0..d).filter(|&k| k != i) {
            let mut best: Option<(Q, usize)> = None;
            for (w, dw) in dots.iter().enumerate() {
                let through = (0..d).all(|j| j == i || j == k || dw[j] == 0);
                if !through || dw[i] == 0 || dw[k] == 0 {
                    continue;
                }
                let c = q(dw[k] as i128, dw[i] as i128);
                if c.is_positive() && best.as_ref().is_none_or(|(b, _)| c < *b) {
                    best = Some((c, w));
                }
            }
            new_walls.push(match best {
                Some((_, w)) => self.walls[w].covector.clone(),
                None => facet_normal(rays, k),
            });
        }
        let mut ray =
            kernel_line(&new_walls, d).ok_or(ArrangementError::Degenerate { chamber, label: i })?;
        if dot(&h_i, &ray) > 0 {
            ray.iter_mut().for_each(|x| *x = -*x);
        }
        let coeffs = rays
            .solve_q(&ray.iter().map(|&x| qi(x)).collect::<Vec<_>>())
            .expect("rays are a basis");
        Ok((ray, coeffs, wall))
    }

    fn check_simplicial(&self, rays: &IntMatrix, chamber: usize, label: usize) -> Result<(), ArrangementError> {
        let cols = rays.columns();
        for (w, wall) in self.walls.iter().enumerate() {
            let signs: Vec<i64> = cols.iter().map(|c| dot(&wall.covector, c).signum()).collect();
            if signs.contains(&1) && signs.contains(&-1) {
                return Err(ArrangementError::NotSimplicial { chamber, label, wall: w });
            }
        }
        Ok(())
    }

    fn sign_vector(&self, rays: &IntMatrix) -> String {
        let p: Vec<i64> = (0..rays.rows()).map(|r| rays.row(r).iter().sum()).collect();
        self.walls
            .iter()
            .map(|w| match dot(&w.covector, &p).signum() {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }

    /// Breadth-first exploration from `base`, keeping chambers accepted by
    /// `keep`.
    fn explore(
        &self,
        base: IntMatrix,
        keep: impl Fn(&IntMatrix) -> bool,
    ) -> Result<(Vec<Chamber>, RayIndex), ArrangementError> {
        let d = self.dim;
        let mut chambers: Vec<Chamber> = Vec::new();
        let mut index: RayIndex = HashMap::new();
        let mut facets = Vec::with_capacity(d);
        for i in 0..d {
            facets.push(self.wall_of_facet(&base, i, 0)?);
        }
        index.insert(ray_key(&base), 0);
        chambers.push(Chamber {
            id: 0,
            sign_vector: self.sign_vector(&base),
            rays: base,
            word: Vec::new(),
            neighbours: vec![None; d],
            facet_walls: facets,
        });
        let mut head = 0;
        while head < chambers.len() {
            let cur = head;
            head += 1;
            for i in 0..d {
                if chambers[cur].neighbours[i].is_some() {
                    continue;
                }
                // Cones leaving the window may be computed from an incomplete
                // wall list, so they are discarded before any checks.
                let (ray, _, _) = self.cross_unchecked(&chambers[cur].rays, i, cur)?;
                let mut rays = chambers[cur].rays.clone();
                rays.set_column(i, &ray);
                if !keep(&rays) {
                    continue;
                }
                self.cross(&chambers[cur].rays, i, cur)?;
                let key = ray_key(&rays);
                let target = match index.get(&key) {
                    Some(&t) => {
                        if chambers[t].rays != rays {
                            return Err(ArrangementError::LabelMismatch {
                                first: chambers[t].rays.columns(),
                                second: rays.columns(),
                            });
                        }
                        t
                    }
                    None => {
                        self.check_simplicial(&rays, cur, i)?;
                        let id = chambers.len();
                        let mut facets = Vec::with_capacity(d);
                        for j in 0..d {
                            facets.push(self.wall_of_facet(&rays, j, id)?);
                        }
                        let mut word = chambers[cur].word.clone();
                        word.push(i);
                        index.insert(key, id);
                        chambers.push(Chamber {
                            id,
                            sign_vector: self.sign_vector(&rays),
                            rays,
                            word,
                            neighbours: vec![None; d],
                            facet_walls: facets,
                        });
                        id
                    }
                };
                chambers[cur].neighbours[i] = Some(target);
                chambers[target].neighbours[i] = Some(cur);
            }
        }
        Ok((chambers, index))
    }
}

/// Renumbers chambers in sign-vector order (`+` before `-`), which puts the
/// base chamber first.
fn canonical_order(
    mut chambers: Vec<Chamber>,
    index: HashMap<Vec<Vec<i64>>, usize>,
) -> (Vec<Chamber>, HashMap<Vec<Vec<i64>>, usize>) {
    let mut order: Vec<usize> = (0..chambers.len()).collect();
    order.sort_by(|&a, &b| chambers[a].sign_vector.cmp(&chambers[b].sign_vector));
    let mut new_id = vec![0; chambers.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    for c in &mut chambers {
        c.id = new_id[c.id];
        for n in c.neighbours.iter_mut().flatten() {
            *n = new_id[*n];
        }
    }
    chambers.sort_by_key(|c| c.id);
    let index = index.into_iter().map(|(k, v)| (k, new_id[v])).collect();
    (chambers, index)
}

/// Crossing data for chamber `id` of `graph` across label `i`, recomputed
/// from the rays.
pub fn crossing_data(graph: &ExchangeGraph, id: usize, i: usize) -> Result<Crossing, ArrangementError> {
    Engine::new(graph.dim, &graph.walls).cross(&graph.chambers[id].rays, i, id)
}

/// All chambers of the finite arrangement, by BFS from the positive orthant.
pub fn enumerate_chambers(fa: &FiniteArrangement) -> Result<ExchangeGraph, ArrangementError> {
    let d = fa.dimension();
    let engine = Engine::new(d, &fa.walls);
    let (chambers, index) = engine.explore(IntMatrix::identity(d), |_| true)?;
    let (chambers, index) = canonical_order(chambers, index);
    Ok(ExchangeGraph {
        kind: Kind::Finite,
        dim: d,
        walls: fa.walls.clone(),
        chambers,
        normalization: fa.fd.length_vector(),
        window: None,
        index,
    })
}

/// Alcoves whose closure lies in the window box, by BFS from the base
/// alcove.
pub fn enumerate_alcoves(la: &LevelArrangement) -> Result<ExchangeGraph, ArrangementError> {
    let d = la.dimension();
    let r = la.normalization.clone();
    let window = la.window.clone();
    let inside = |rays: &IntMatrix| {
        rays.columns().iter().all(|c| {
            dot(&r, c) > 0 && level_point(&r, c).iter().all(|x| window.contains(x))
        })
    };
    let base = IntMatrix::identity(d);
    if !inside(&base) {
        return Err(ArrangementError::WindowTooSmall(window.describe()));
    }
    let engine = Engine::new(d, &la.walls);
    let (chambers, index) = engine.explore(base, inside)?;
    let (chambers, index) = canonical_order(chambers, index);
    Ok(ExchangeGraph {
        kind: Kind::Affine,
        dim: d,
        walls: la.walls.clone(),
        chambers,
        normalization: r,
        window: Some(window),
        index,
    })
}

/// A wall of a one-curve level arrangement with its rank label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledWall {
    pub wall: usize,
    pub position: Q,
    pub label: i64,
}

/// Rank labels of the level walls meeting the window: the wall at `p/q` in
/// lowest terms is labelled `q`. Each label is checked against the rank of
/// the ray lying on that wall in the adjacent alcoves.
pub fn wall_rank_labels(
    la: &LevelArrangement,
    graph: &ExchangeGraph,
) -> Result<Vec<LabelledWall>, ArrangementError> {
    if la.fd.n() != 1 {
        return Err(ArrangementError::Unsupported);
    }
    let labelled: Vec<LabelledWall> = la
        .level_walls()
        .into_iter()
        .map(|(wall, position)| LabelledWall { wall, label: *position.denom() as i64, position })
        .collect();
    for c in &graph.chambers {
        for ray in c.rays.columns() {
            let rank = dot(&la.normalization, &ray);
            let pos = level_point(&la.normalization, &ray)[0];
            if let Some(w) = labelled.iter().find(|w| w.position == pos) {
                if w.label != rank {
                    return Err(ArrangementError::LabelDisagreement {
                        position: crate::linalg::fmt_q(&pos),
                        denominator: w.label,
                        rank,
                    });
                }
            }
        }
    }
    Ok(labelled)
}

/// A lattice translation of the affine arrangement, with its effect on the
/// explored cells.
#[derive(Debug, Clone)]
pub struct Translation {
    /// Integer matrix acting on the star-plus-white lattice.
    pub matrix: IntMatrix,
    /// Image of each alcove, when it is also in the window.
    pub alcove_map: Vec<Option<usize>>,
    /// Image of each wall, when it is also in the wall list.
    pub wall_map: Vec<Option<usize>>,
}

/// Translation by `steps` along each primitive direction of the base
/// alcove: the product of the Picard matrices `T_i^{steps_i}`.
pub fn translation_by(la: &LevelArrangement, graph: &ExchangeGraph, steps: &[i64]) -> Translation {
    let d = la.dimension();
    let mut m = IntMatrix::identity(d);
    for (i, &s) in steps.iter().enumerate() {
        let t = crate::tracking::pic_action_matrix(&la.fd, i + 1);
        let t = if s >= 0 { t } else { t.inverse().expect("Picard matrices are unimodular") };
        for _ in 0..s.abs() {
            m = m.mul(&t);
        }
    }
    let inv_t = m.inverse().expect("unimodular").transpose();
    let alcove_map = graph
        .chambers
        .iter()
        .map(|c| graph.find_by_rays(&m.mul(&c.rays)))
        .collect();
    let cov_index: HashMap<&Vec<i64>, usize> =
        graph.walls.iter().enumerate().map(|(i, w)| (&w.covector, i)).collect();
    let wall_map = graph
        .walls
        .iter()
        .map(|w| cov_index.get(&canonical(&inv_t.mul_vec(&w.covector))).copied())
        .collect();
    Translation { matrix: m, alcove_map, wall_map }
}

/// Translation by one step along the `i`-th white direction (`i` from 1).
pub fn translation_action(la: &LevelArrangement, graph: &ExchangeGraph, i: usize) -> Translation {
    let mut steps = vec![0; la.fd.n()];
    steps[i - 1] = 1;
    translation_by(la, graph, &steps)
}

/// Number of walls through the codimension-two face of chamber `id`
/// spanned by all rays except `i` and `j`.
pub fn walls_through_face(graph: &ExchangeGraph, id: usize, i: usize, j: usize) -> usize {
    let c = &graph.chambers[id];
    let cols: Vec<Vec<i64>> = (0..graph.dim).filter(|&k| k != i && k != j).map(|k| c.ray(k)).collect();
    graph.walls.iter().filter(|w| cols.iter().all(|r| dot(&w.covector, r) == 0)).count()
}
