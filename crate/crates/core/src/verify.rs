//! Verification suites over a fixed family of instances. Randomized checks
//! use a ChaCha generator seeded per instance, and instances may run in
//! parallel; results are always collected in instance order.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{
    enumerate_alcoves, enumerate_chambers, translation_by, ExchangeGraph, FiniteArrangement, Kind,
    LevelArrangement, Window,
};
use crate::dynkin::{build_diagram, katz_morrison_catalog, Family, FlopDatum};
use crate::groupoid::{equivalent_reduced, is_reduced, lemma1_completion, positive_paths_from, verify_same_side, PositivePath};
use crate::linalg::{dot, dot_q, fmt_q, q, qi, IntMatrix, Q};
use crate::skms::fundamental_domain;
use crate::tracking::{
    classify_complex_point, complexified_wall, crossing_matrix, decompose_pic_as_mutations, member_chambers,
    path_into_interior, path_matrix, ComplexPoint, TrackingError,
};

pub const SUITES: [&str; 6] = ["involution", "loops", "coverage", "cross-oracle", "pic-decompose", "appendix"];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub instance: String,
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl PropertyResult {
    fn new(name: &str, instance: &str) -> Self {
        Self {
            name: name.into(),
            instance: instance.into(),
            passed: true,
            checked: 0,
            counterexamples: Vec::new(),
            details: Value::Null,
        }
    }

    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.counterexamples.len() < 10 {
                self.counterexamples.push(counterexample());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl Report {
    fn new(suite: &str, seed: u64, properties: Vec<PropertyResult>) -> Self {
        Self { suite: suite.into(), seed, passed: properties.iter().all(|p| p.passed), properties }
    }

    pub fn counterexample_count(&self) -> usize {
        self.properties.iter().map(|p| p.counterexamples.len()).sum()
    }
}

/// A named exchange graph with the data it came from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub fd: FlopDatum,
    pub graph: ExchangeGraph,
    pub level: Option<LevelArrangement>,
}

fn datum(f: Family, n: usize, white: &[usize]) -> FlopDatum {
    FlopDatum::new(build_diagram(f, n).expect("legal"), white).expect("valid white set")
}

fn white_name(fd: &FlopDatum) -> String {
    let w: Vec<String> = fd.white().iter().map(|v| v.to_string()).collect();
    format!("{}[{}]", fd.diagram().name(), w.join(","))
}

/// Finite instances: the catalog plus some multi-curve data.
pub fn finite_instances() -> Vec<Instance> {
    let mut data: Vec<FlopDatum> = katz_morrison_catalog().into_iter().map(|e| e.datum).collect();
    data.extend([
        datum(Family::A, 2, &[1, 2]),
        datum(Family::A, 3, &[1, 2, 3]),
        datum(Family::A, 3, &[1, 3]),
        datum(Family::D, 4, &[1, 2, 4]),
        datum(Family::E, 6, &[1, 4]),
    ]);
    data.into_iter()
        .map(|fd| {
            let graph = enumerate_chambers(&FiniteArrangement::new(&fd).expect("essential")).expect("simplicial");
            Instance { name: format!("finite {}", white_name(&fd)), fd, graph, level: None }
        })
        .collect()
}

pub fn affine_instance(fd: &FlopDatum, window: Window) -> Instance {
    let la = LevelArrangement::new(fd, window).expect("complete window");
    let graph = enumerate_alcoves(&la).expect("simplicial");
    Instance { name: format!("affine {} {}", white_name(fd), la.window.describe()), fd: fd.clone(), graph, level: Some(la) }
}

/// Catalog level lines on `[-1, 2]`, plus affine A2 with both vertices white.
pub fn affine_instances(max_length: i64) -> Vec<Instance> {
    let mut out: Vec<Instance> = katz_morrison_catalog()
        .into_iter()
        .filter(|e| e.length <= max_length)
        .map(|e| affine_instance(&e.datum, Window::covering(&e.datum, qi(-1), qi(2))))
        .collect();
    let a2 = datum(Family::A, 2, &[1, 2]);
    out.push(affine_instance(&a2, Window::from_k(&a2, 4)));
    out
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(name: &str, seed: u64, samples: usize) -> Option<Report> {
    let props = match name {
        "involution" => suite_involution(),
        "loops" => suite_loops(seed),
        "coverage" => suite_coverage(seed, samples),
        "cross-oracle" => suite_cross_oracle(),
        "pic-decompose" => suite_pic_decompose(),
        "appendix" => suite_appendix(seed, samples),
        _ => return None,
    };
    Some(Report::new(name, seed, props))
}

fn all_instances() -> Vec<Instance> {
    let mut v = finite_instances();
    v.extend(affine_instances(6));
    v
}

/// Every crossing matrix squares to the identity.
pub fn suite_involution() -> Vec<PropertyResult> {
    all_instances()
        .par_iter()
        .map(|inst| {
            let mut p = PropertyResult::new("crossing matrices are involutions", &inst.name);
            let g = &inst.graph;
            for c in 0..g.len() {
                for l in 0..g.dim {
                    if g.neighbour(c, l).is_none() {
                        continue;
                    }
                    match crossing_matrix(g, c, l) {
                        Ok(m) => p.check(m.matrix.mul(&m.matrix).is_identity(), || {
                            json!({ "chamber": c, "label": g.label_name(l), "matrix": m.matrix.to_rows() })
                        }),
                        Err(e) => p.check(false, || json!({ "chamber": c, "error": e.to_string() })),
                    }
                }
            }
            p
        })
        .collect()
}

/// Graphs used by the loop and reduced-path suites.
pub fn loop_instances() -> Vec<Instance> {
    let mut v: Vec<Instance> =
        finite_instances().into_iter().filter(|i| i.fd.diagram().name() == "A2").collect();
    v.extend(affine_instances(3));
    v
}

/// Positive loops at the base chamber have identity path matrices:
/// exhaustively up to length 8, and on random longer loops.
pub fn suite_loops(seed: u64) -> Vec<PropertyResult> {
    loop_instances()
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(idx, inst)| {
            let g = &inst.graph;
            let mut exhaustive = PropertyResult::new("loops of length <= 8 act trivially", &inst.name);
            for (path, end) in positive_paths_from(g, ExchangeGraph::BASE, 8) {
                if end != ExchangeGraph::BASE {
                    continue;
                }
                let m = path_matrix(g, path.source, &path.word).expect("walkable");
                exhaustive.check(m.matrix.is_identity(), || json!({ "word": path.to_json(g).word }));
            }
            let mut random = PropertyResult::new("random long loops act trivially", &inst.name);
            let mut rng = rng_for(seed, idx);
            for _ in 0..200 {
                let len = rng.gen_range(8..=24);
                let mut word = Vec::new();
                let mut cur = ExchangeGraph::BASE;
                for _ in 0..len {
                    let options: Vec<(usize, usize)> = g
                        .chamber(cur)
                        .neighbours
                        .iter()
                        .enumerate()
                        .filter_map(|(l, n)| n.map(|n| (l, n)))
                        .collect();
                    let (l, n) = options[rng.gen_range(0..options.len())];
                    word.push(l);
                    cur = n;
                }
                word.extend(g.shortest_word(cur, ExchangeGraph::BASE).expect("connected"));
                let m = path_matrix(g, ExchangeGraph::BASE, &word).expect("walkable");
                random.check(m.matrix.is_identity(), || {
                    json!({ "word": word.iter().map(|&l| g.label_name(l)).collect::<Vec<_>>() })
                });
            }
            [exhaustive, random]
        })
        .collect()
}

/// Reduced positive paths with equal endpoints agree, reducedness equals
/// shortness, and the lemmas hold wherever their hypotheses arise.
pub fn reduced_path_coherence(max_len: usize) -> Vec<PropertyResult> {
    loop_instances()
        .into_par_iter()
        .flat_map_iter(|inst| {
            let g = &inst.graph;
            let mut coherence = PropertyResult::new("reduced paths with equal endpoints agree", &inst.name);
            let mut shortest = PropertyResult::new("reduced iff shortest", &inst.name);
            let mut lemma1 = PropertyResult::new("lemma 1 completions exist", &inst.name);
            let mut lemma2 = PropertyResult::new("reduced paths keep the source on one side", &inst.name);
            for source in 0..g.len() {
                let dist = g.distances_from(source);
                let mut by_target: BTreeMap<usize, Vec<PositivePath>> = BTreeMap::new();
                for (path, end) in positive_paths_from(g, source, max_len) {
                    let reduced = is_reduced(g, &path).expect("walkable");
                    shortest.check(reduced == (dist[end] == Some(path.len())), || json!(path.to_json(g)));
                    if !reduced {
                        continue;
                    }
                    lemma2.check(verify_same_side(g, &path).unwrap_or(false), || json!(path.to_json(g)));
                    for l in 0..g.dim {
                        if g.neighbour(end, l).is_none() || is_reduced(g, &path.then(l)).expect("walkable") {
                            continue;
                        }
                        let ok = lemma1_completion(g, &path, l).is_ok();
                        lemma1.check(ok, || json!({ "path": path.to_json(g), "label": g.label_name(l) }));
                    }
                    by_target.entry(end).or_default().push(path);
                }
                for paths in by_target.values() {
                    let first = &paths[0];
                    for other in &paths[1..] {
                        let ok = matches!(equivalent_reduced(g, first, other), Ok(true));
                        coherence.check(ok, || json!({ "p": first.to_json(g), "q": other.to_json(g) }));
                    }
                }
            }
            [coherence, shortest, lemma1, lemma2]
        })
        .collect()
}

fn random_q(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Q {
    q(rng.gen_range(-span * max_den..=span * max_den) as i128, rng.gen_range(1..=max_den) as i128)
}

/// Chambers cover the complement of the walls exactly once.
pub fn suite_coverage(seed: u64, samples: usize) -> Vec<PropertyResult> {
    let instances = all_instances();
    let per = (samples / instances.len()).max(20);
    instances
        .into_par_iter()
        .enumerate()
        .flat_map_iter(|(idx, inst)| {
            let g = &inst.graph;
            let mut rng = rng_for(seed, idx);
            let mut cover = PropertyResult::new("random points lie in exactly one open chamber", &inst.name);
            let mut tries = 0;
            while cover.checked < per && tries < 50 * per {
                tries += 1;
                let point: Vec<Q> = match (g.kind, &inst.level) {
                    (Kind::Affine, Some(la)) => {
                        let span = la.window.hi.abs().max(la.window.lo.abs());
                        let mut y: Vec<Q> = (0..g.dim - 1)
                            .map(|_| {
                                let t = q(rng.gen_range(0..=1000), 1000);
                                la.window.lo + (la.window.hi - la.window.lo) * t
                            })
                            .collect();
                        let _ = span;
                        let rest: Q = y.iter().zip(&g.normalization[1..]).map(|(v, r)| *v * qi(*r)).sum();
                        y.insert(0, qi(1) - rest);
                        y
                    }
                    _ => (0..g.dim).map(|_| random_q(&mut rng, 5, 7)).collect(),
                };
                if g.walls.iter().any(|w| dot_q(&w.covector, &point).is_zero()) {
                    continue;
                }
                let hits: Vec<usize> = (0..g.len())
                    .filter(|&c| {
                        g.chamber(c).rays.solve_q(&point).expect("basis").iter().all(|v| v.is_positive())
                    })
                    .collect();
                // Affine points near the box edge may lie in an alcove that
                // pokes out of the window.
                let ok = hits.len() == 1 || (g.kind == Kind::Affine && hits.is_empty());
                cover.check(ok, || json!({ "point": point.iter().map(fmt_q).collect::<Vec<_>>(), "hits": hits }));
            }
            let mut out = vec![cover];
            if let (Some(la), 1) = (&inst.level, inst.fd.n()) {
                let mut tiles = PropertyResult::new("alcoves are translates of the fundamental alcoves", &inst.name);
                let domain = fundamental_domain(la, g).expect("window covers [0,1]");
                for c in 0..g.len() {
                    let left = g.alcove_vertices(c).into_iter().map(|v| v[0]).min().expect("vertices");
                    let m = left.floor().to_integer() as i64;
                    let t = translation_by(la, g, &[-m]);
                    let image = t.alcove_map[c];
                    tiles.check(image.is_some_and(|i| domain.alcoves.contains(&i)), || json!({ "alcove": c }));
                }
                tiles.details = json!({ "fundamental_alcoves": domain.alcoves.len() });
                out.push(tiles);
            }
            out
        })
        .collect()
}

/// Walls from root restriction equal walls read off the chambers.
pub fn suite_cross_oracle() -> Vec<PropertyResult> {
    let mut instances = finite_instances();
    instances.extend(affine_instances(6).into_iter().filter(|i| i.fd.n() == 1));
    instances
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            let mut p = PropertyResult::new("root walls equal chamber walls", &inst.name);
            let from_roots: Vec<Vec<i64>> = match &inst.level {
                None => g.walls.iter().map(|w| w.covector.clone()).collect(),
                Some(la) => {
                    let mut v: Vec<Vec<i64>> =
                        la.level_walls().into_iter().map(|(id, _)| la.walls[id].covector.clone()).collect();
                    v.sort();
                    v
                }
            };
            let from_chambers = g.facet_covectors();
            p.check(from_roots == from_chambers, || {
                json!({ "roots": from_roots, "chambers": from_chambers })
            });
            p.details = json!({ "walls": from_chambers.len() });
            p
        })
        .collect()
}

/// The Picard translation is a shortest mutation path whose matrix is the
/// Picard matrix up to relabelling, passing once through a fundamental domain.
pub fn suite_pic_decompose() -> Vec<PropertyResult> {
    affine_instances(6)
        .into_par_iter()
        .filter(|i| i.fd.n() == 1)
        .map(|inst| {
            let la = inst.level.as_ref().expect("affine");
            let g = &inst.graph;
            let mut p = PropertyResult::new("Picard translation decomposes into mutations", &inst.name);
            let domain = fundamental_domain(la, g).expect("window covers [0,1]");
            match decompose_pic_as_mutations(la, g, 1) {
                Ok(d) => {
                    p.check(d.path_matrix == d.pic_matrix.permute_columns(&d.permutation), || json!("matrix"));
                    p.check(d.len() == domain.alcoves.len(), || {
                        json!({ "length": d.len(), "fundamental_alcoves": domain.alcoves.len() })
                    });
                    p.details = json!({
                        "length": d.len(),
                        "word": d.word.iter().map(|&l| g.label_name(l)).collect::<Vec<_>>(),
                        "permutation": d.permutation,
                        "pic_matrix": d.pic_matrix.to_rows(),
                    });
                }
                Err(e) => p.check(false, || json!(e.to_string())),
            }
            p
        })
        .collect()
}

/// A random point of the tracked region of a random chamber.
fn sample_point(g: &ExchangeGraph, rng: &mut ChaCha8Rng) -> ComplexPoint {
    let c = rng.gen_range(0..g.len());
    let rays = &g.chamber(c).rays;
    let d = g.dim;
    let xl: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
    let coeffs: Vec<i64> = loop {
        let v: Vec<i64> = (0..d).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=3) }).collect();
        if g.kind == Kind::Finite || v.iter().any(|x| *x > 0) {
            break v;
        }
    };
    let to_q = |v: Vec<i64>| v.into_iter().map(qi).collect::<Vec<Q>>();
    let mut x = to_q(rays.mul_vec(&xl));
    let mut y = to_q(rays.mul_vec(&coeffs));
    if g.kind == Kind::Affine {
        let s = dot_q(&g.normalization, &y);
        y.iter_mut().for_each(|v| *v /= s);
        let shift = dot_q(&g.normalization, &x);
        x[0] -= shift;
    }
    ComplexPoint::new(x, y)
}

/// Tracking classifies sampled points into exactly one tracked region, and
/// boundary points of the positive level region connect to its interior.
pub fn suite_appendix(seed: u64, samples: usize) -> Vec<PropertyResult> {
    let instances = all_instances();
    let per = samples.div_ceil(instances.len()).max(1);
    let mut out: Vec<PropertyResult> = instances
        .into_par_iter()
        .enumerate()
        .map(|(idx, inst)| {
            let g = &inst.graph;
            let mut rng = rng_for(seed, idx);
            let mut p = PropertyResult::new("tracked regions cover disjointly", &inst.name);
            let mut skipped = 0;
            let mut attempts = 0;
            while p.checked < per && attempts < 20 * per {
                attempts += 1;
                let z = sample_point(g, &mut rng);
                if complexified_wall(g, &z).is_some() {
                    skipped += 1;
                    continue;
                }
                match classify_complex_point(g, &z) {
                    Ok(c) => {
                        let members = member_chambers(g, &z);
                        p.check(c.certificate.passes() && members == vec![c.chamber], || {
                            json!({ "x": z.x.iter().map(fmt_q).collect::<Vec<_>>(),
                                    "y": z.y.iter().map(fmt_q).collect::<Vec<_>>(),
                                    "chamber": c.chamber, "members": members })
                        });
                    }
                    // The straight walk to a sampled point can leave a
                    // window whose box is not convex in alcove terms.
                    Err(TrackingError::StepLimitExceeded(_)) if g.kind == Kind::Affine => skipped += 1,
                    Err(e) => p.check(false, || json!(e.to_string())),
                }
            }
            p.details = json!({ "skipped": skipped });
            p
        })
        .collect();
    out.extend(interior_path_checks(seed));
    out
}

/// Boundary points of the positive level region for each catalog datum and
/// for affine A2, joined to the interior.
fn interior_path_checks(seed: u64) -> Vec<PropertyResult> {
    let mut data: Vec<FlopDatum> = katz_morrison_catalog().into_iter().map(|e| e.datum).collect();
    data.push(datum(Family::A, 2, &[1, 2]));
    data.into_par_iter()
        .enumerate()
        .map(|(idx, fd)| {
            let r = fd.rank_covector();
            let d = r.len();
            let mut rng = rng_for(seed.wrapping_add(7), idx);
            let mut p = PropertyResult::new("boundary points connect to the interior", &white_name(&fd));
            for _ in 0..50 {
                let zero: Vec<bool> = loop {
                    let z: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.5)).collect();
                    if z.iter().any(|b| *b) && z.iter().any(|b| !*b) {
                        break z;
                    }
                };
                let c: Vec<i64> = zero.iter().map(|&z| if z { 0 } else { rng.gen_range(1..=4) }).collect();
                let s = dot(&r, &c);
                let y: Vec<Q> = c.iter().map(|&v| q(v as i128, s as i128)).collect();
                let mut x: Vec<Q> =
                    zero.iter().map(|&z| if z { -qi(rng.gen_range(1..=3)) } else { qi(rng.gen_range(-3..=3)) }).collect();
                let shift = dot_q(&r, &x);
                // keep x negative on the zero set by moving a positive coordinate
                let m = (0..d).find(|&j| !zero[j]).expect("some coordinate is positive");
                x[m] -= shift / qi(r[m]);
                let z = ComplexPoint::new(x, y);
                match path_into_interior(&r, &z) {
                    Ok(path) => {
                        let end = path.end();
                        let mid = path.at(path.s / qi(2));
                        let ok = !path.is_empty()
                            && [&end, &mid].iter().all(|w| {
                                w.is_on_level(&r) && w.y.iter().all(|v| v.is_positive()) && w.x == z.x
                            });
                        p.check(ok, || json!({ "y": z.y.iter().map(fmt_q).collect::<Vec<_>>() }));
                    }
                    Err(e) => p.check(false, || json!(e.to_string())),
                }
            }
            p
        })
        .collect()
}

/// Identity matrix check used by callers that only have rows.
pub fn is_identity_rows(rows: &[Vec<i64>]) -> bool {
    IntMatrix::from_rows(rows).is_identity()
}
