//! Positive roots by closure, real affine roots, and their restrictions to
//! the white coordinates of a flop datum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynkin::{DynkinDiagram, FlopDatum};
use crate::linalg::{canonical, IntMatrix};

/// Integer coefficients over the simple roots of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn negate(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|c| *c >= 0) && self.0.iter().any(|c| *c > 0)
    }
}

/// The real affine root `finite_part + level * delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub finite_part: RootVector,
    pub level: i64,
}

impl AffineRoot {
    /// Coefficients over the affine simple roots `(alpha_0, alpha_1, ...)`,
    /// using `delta = alpha_0 + theta`.
    pub fn affine_coefficients(&self, theta: &[i64]) -> Vec<i64> {
        let k = self.level;
        std::iter::once(k)
            .chain(self.finite_part.0.iter().zip(theta).map(|(a, t)| a + k * t))
            .collect()
    }
}

/// Positive roots of a finite diagram, sorted by height and then
/// lexicographically.
pub fn positive_roots(d: &DynkinDiagram) -> Vec<RootVector> {
    positive_roots_of(&d.cartan())
}

/// Positive roots of any finite-type symmetric Cartan matrix, by closure
/// under adding simple roots along root strings.
pub fn positive_roots_of(cartan: &IntMatrix) -> Vec<RootVector> {
    let n = cartan.rows();
    let mut found: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        found.insert(e.clone(), ());
        queue.push(e);
    }
    let mut head = 0;
    while head < queue.len() {
        let beta = queue[head].clone();
        head += 1;
        for i in 0..n {
            let pairing: i64 = (0..n).map(|k| beta[k] * cartan.get(k, i)).sum();
            // p = how far the alpha_i-string through beta extends downwards
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if down[i] < 0 || !found.contains_key(&down) {
                    break;
                }
                p += 1;
            }
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if found.insert(up.clone(), ()).is_none() {
                    queue.push(up);
                }
            }
        }
    }
    let mut roots: Vec<RootVector> = found.into_keys().map(RootVector).collect();
    roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.0.cmp(&b.0)));
    roots
}

/// White coefficients of a root, before any normalization.
pub fn white_part(root: &RootVector, fd: &FlopDatum) -> Vec<i64> {
    fd.white().iter().map(|&w| root.0[w - 1]).collect()
}

/// Restriction of a root of the base diagram to the white coordinates, as a
/// primitive covector. Returns `None` when every white coefficient vanishes.
pub fn restrict_to_white(root: &RootVector, fd: &FlopDatum) -> Option<Vec<i64>> {
    let v = white_part(root, fd);
    if v.iter().all(|c| *c == 0) {
        None
    } else {
        Some(canonical(&v))
    }
}

/// Restriction of a real affine root to `(star, white...)` coordinates.
///
/// The covector is `(k, a_w + k l_w)` where `a` is the white part of the
/// finite root and `l` the length vector.
pub fn restrict_affine(root: &AffineRoot, fd: &FlopDatum) -> Option<Vec<i64>> {
    let k = root.level;
    let lengths = fd.length_vector();
    let v: Vec<i64> = std::iter::once(k)
        .chain(fd.white().iter().zip(&lengths).map(|(&w, l)| root.finite_part.0[w - 1] + k * l))
        .collect();
    if v.iter().all(|c| *c == 0) {
        None
    } else {
        Some(canonical(&v))
    }
}

/// A hyperplane of a finite or affine arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub covector: Vec<i64>,
    /// A root restricting to this wall (finite part, over the base diagram).
    pub source_root: Vec<i64>,
    /// Coefficient of `delta` in the source root; absent for finite walls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
}

/// Deduplicated restrictions of the positive roots, sorted by covector.
pub fn finite_wall_set(fd: &FlopDatum) -> Vec<Wall> {
    let mut walls: BTreeMap<Vec<i64>, Wall> = BTreeMap::new();
    for root in positive_roots(fd.diagram()) {
        if let Some(c) = restrict_to_white(&root, fd) {
            walls.entry(c.clone()).or_insert(Wall {
                covector: c,
                source_root: root.0.clone(),
                level: None,
            });
        }
    }
    walls.into_values().collect()
}

/// True when a covector is proportional to the normalization covector
/// `(1, l_1, ..., l_n)`: such a hyperplane is the boundary of the Tits cone,
/// not a wall inside it.
pub fn is_tits_boundary(covector: &[i64], fd: &FlopDatum) -> bool {
    canonical(covector) == fd.rank_covector()
}

/// Restrictions of the real affine roots `alpha + k delta` with `|k| <= k_max`,
/// deduplicated and sorted by covector. Restrictions lying on the boundary of
/// the Tits cone are dropped.
pub fn affine_wall_set(fd: &FlopDatum, k_max: i64) -> Vec<Wall> {
    let pos = positive_roots(fd.diagram());
    let r = fd.rank_covector();
    let mut walls: BTreeMap<Vec<i64>, Wall> = BTreeMap::new();
    let mut levels: Vec<i64> = (-k_max..=k_max).collect();
    levels.sort_by_key(|k| (k.abs(), *k < 0));
    for k in levels {
        for root in pos.iter().flat_map(|r| [r.clone(), r.negate()]) {
            let ar = AffineRoot { finite_part: root, level: k };
            let Some(c) = restrict_affine(&ar, fd) else { continue };
            if c == r {
                continue;
            }
            walls.entry(c.clone()).or_insert(Wall {
                covector: c,
                source_root: ar.finite_part.0.clone(),
                level: Some(k),
            });
        }
    }
    walls.into_values().collect()
}

/// Largest `|a|_1` over white restrictions of roots; bounds how far a wall
/// with offset `k` can sit from the origin of the level.
pub fn max_white_norm(fd: &FlopDatum) -> i64 {
    positive_roots(fd.diagram())
        .iter()
        .map(|r| fd.white().iter().map(|&w| r.0[w - 1].abs()).sum::<i64>())
        .max()
        .unwrap_or(0)
}

/// Wall-set JSON document body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallSetJson {
    pub walls: Vec<Wall>,
}
