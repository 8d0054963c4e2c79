//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flop_core::arrangement::{
    enumerate_alcoves, enumerate_chambers, wall_rank_labels, ExchangeGraph, FiniteArrangement, Kind,
    LevelArrangement, Window,
};
use flop_core::dynkin::{build_diagram, katz_morrison_catalog, Family, FlopDatum};
use flop_core::groupoid::{
    crossing_set, is_reduced, lemma1_completion, positive_paths_from, verify_same_side, PositivePath,
};
use flop_core::linalg::{dot_q, q, qi, IntMatrix, Q};
use flop_core::roots::{affine_wall_set, finite_wall_set, positive_roots};
use flop_core::skms::{skms_arrangement, skms_for_length};
use flop_core::tracking::{
    classify_complex_point, crossing_matrix, decompose_pic_as_mutations, path_matrix, pic_action_matrix,
    ComplexPoint,
};

type Outcome = Result<String, String>;

/// Title, time budget in seconds, and the check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn a2_all_white() -> FlopDatum {
    FlopDatum::new(build_diagram(Family::A, 2).unwrap(), &[1, 2]).unwrap()
}

fn finite_graph(fd: &FlopDatum) -> ExchangeGraph {
    enumerate_chambers(&FiniteArrangement::new(fd).unwrap()).unwrap()
}

fn unit_box(fd: &FlopDatum) -> (LevelArrangement, ExchangeGraph) {
    let la = LevelArrangement::new(fd, Window::covering(fd, qi(-1), qi(2))).unwrap();
    let g = enumerate_alcoves(&la).unwrap();
    (la, g)
}

fn criterion_1() -> Outcome {
    let catalog = katz_morrison_catalog();
    let names: Vec<String> = catalog.iter().map(|e| e.datum.diagram().name()).collect();
    ensure(names == ["A1", "D4", "E6", "E7", "E8", "E8"], || format!("diagrams {names:?}"))?;
    for (expected, e) in (1..=6).zip(&catalog) {
        ensure(e.length == expected, || format!("{} has length {}", e.name, e.length))?;
        let w = e.datum.white()[0];
        let mark = e.datum.affine().mark(w);
        ensure(mark == expected, || format!("{}: affine mark {mark}", e.name))?;
        // the mark is also the coefficient of the highest root
        let top = positive_roots(e.datum.diagram()).into_iter().max_by_key(|r| r.height()).unwrap();
        ensure(top.coefficients()[w - 1] == expected, || format!("{}: highest root {:?}", e.name, top))?;
    }
    Ok("lengths 1..6".into())
}

fn criterion_2() -> Outcome {
    let fd = katz_morrison_catalog()[2].datum.clone();
    let la = LevelArrangement::new(&fd, Window::from_k(&fd, 2)).map_err(|e| e.to_string())?;
    let all: Vec<Q> = la.level_walls().into_iter().map(|(_, p)| p).collect();
    let mut shown: Vec<Q> = all.iter().copied().filter(|p| *p >= q(-1, 2) && *p <= qi(1)).collect();
    shown.reverse();
    let expected = vec![qi(1), q(2, 3), q(1, 2), q(1, 3), qi(0), q(-1, 3), q(-1, 2)];
    ensure(shown == expected, || format!("circles {shown:?}"))?;
    let full = vec![q(-1, 1), q(-2, 3), q(-1, 2), q(-1, 3), qi(0), q(1, 3), q(1, 2), q(2, 3), qi(1)];
    ensure(all == full, || format!("window walls {all:?}"))?;
    Ok(format!("{} walls in {}", all.len(), la.window.describe()))
}

fn criterion_3() -> Outcome {
    let rows: [&[i64]; 6] = [
        &[1, 1],
        &[1, 2, 1],
        &[1, 3, 2, 3, 1],
        &[1, 4, 3, 2, 3, 4, 1],
        &[1, 5, 4, 3, 5, 2, 5, 3, 4, 5, 1],
        &[1, 6, 5, 4, 3, 5, 2, 5, 3, 4, 5, 6, 1],
    ];
    for (len, row) in (1..=6).zip(rows) {
        let (la, g) = skms_arrangement(len).map_err(|e| e.to_string())?;
        let labels: Vec<i64> = wall_rank_labels(&la, &g)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|w| w.position >= qi(0) && w.position <= qi(1))
            .map(|w| w.label)
            .collect();
        ensure(labels == row, || format!("length {len}: {labels:?}"))?;
    }
    Ok("six rows".into())
}

fn criterion_4() -> Outcome {
    let mut holes = Vec::new();
    let mut totals = Vec::new();
    for len in 1..=6 {
        let d = skms_for_length(len).map_err(|e| e.to_string())?;
        holes.push(d.equator_hole_count());
        totals.push(d.total_punctures());
    }
    ensure(holes == [1, 2, 4, 6, 10, 12], || format!("holes {holes:?}"))?;
    ensure(totals == [3, 4, 6, 8, 12, 14], || format!("punctures {totals:?}"))?;
    let four = skms_for_length(4).map_err(|e| e.to_string())?;
    ensure(four.hole_labels == [1, 4, 3, 2, 3, 4], || format!("length 4 labels {:?}", four.hole_labels))?;
    Ok(format!("holes {holes:?}, punctures {totals:?}"))
}

fn criterion_5() -> Outcome {
    let mut data: Vec<FlopDatum> = katz_morrison_catalog().into_iter().map(|e| e.datum).collect();
    data.push(a2_all_white());
    let mut edges = 0;
    for fd in &data {
        let g = finite_graph(fd);
        for c in 0..g.len() {
            for l in 0..g.dim {
                if g.neighbour(c, l).is_none() {
                    continue;
                }
                let m = crossing_matrix(&g, c, l).map_err(|e| e.to_string())?.matrix;
                ensure(m.mul(&m).is_identity(), || format!("{} chamber {c} label {l}", fd.diagram().name()))?;
                edges += 1;
            }
        }
    }
    Ok(format!("{edges} directed edges"))
}

fn loop_graphs() -> Vec<(String, ExchangeGraph)> {
    let mut out = vec![("A2 finite".to_string(), finite_graph(&a2_all_white()))];
    for e in katz_morrison_catalog().into_iter().filter(|e| e.length <= 3) {
        out.push((format!("{} affine", e.name), unit_box(&e.datum).1));
    }
    let a2 = a2_all_white();
    let la = LevelArrangement::new(&a2, Window::from_k(&a2, 6)).unwrap();
    out.push(("A2 affine".to_string(), enumerate_alcoves(&la).unwrap()));
    out
}

fn criterion_6() -> Outcome {
    let mut loops = 0;
    for (name, g) in loop_graphs() {
        for (p, end) in positive_paths_from(&g, ExchangeGraph::BASE, 8) {
            if end != ExchangeGraph::BASE {
                continue;
            }
            let m = path_matrix(&g, p.source, &p.word).map_err(|e| e.to_string())?.matrix;
            ensure(m.is_identity(), || format!("{name}: loop {:?}", p.word))?;
            loops += 1;
        }
    }
    Ok(format!("{loops} loops"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for e in katz_morrison_catalog() {
        let g = finite_graph(&e.datum);
        let mut roots: Vec<Vec<i64>> = finite_wall_set(&e.datum).into_iter().map(|w| w.covector).collect();
        roots.sort();
        roots.dedup();
        ensure(roots == g.facet_covectors(), || format!("{} finite", e.name))?;
        let (la, g) = unit_box(&e.datum);
        // walls of the affine root system that cross the window box
        let mut roots: Vec<Vec<i64>> = affine_wall_set(&e.datum, la.window.k_max)
            .into_iter()
            .filter(|w| la.wall_position(&w.covector).is_some_and(|p| la.window.contains(&p)))
            .map(|w| w.covector)
            .collect();
        roots.sort();
        roots.dedup();
        let chambers = g.facet_covectors();
        ensure(roots == chambers, || format!("{} affine: {} vs {}", e.name, roots.len(), chambers.len()))?;
        checked += 2;
    }
    Ok(format!("{checked} arrangements"))
}

/// Closed upper half plane without the nonnegative real axis.
fn in_h(x: &Q, y: &Q) -> bool {
    y.is_positive() || (y.is_zero() && x.is_negative())
}

fn directly_contains(g: &ExchangeGraph, c: usize, z: &ComplexPoint) -> bool {
    let rays = &g.chamber(c).rays;
    let x = rays.solve_q(&z.x).unwrap();
    let y = rays.solve_q(&z.y).unwrap();
    x.iter().zip(&y).all(|(a, b)| in_h(a, b))
}

/// Whether every alcove whose closure contains the level point `y` was
/// enumerated. The level has dimension at most two here, so a face cut out
/// by `m >= 2` walls is surrounded by `2m` alcoves.
fn star_in_window(g: &ExchangeGraph, y: &[Q]) -> bool {
    let through = g.walls.iter().filter(|w| dot_q(&w.covector, y).is_zero()).count();
    let expected = if through < 2 { through + 1 } else { 2 * through };
    let around = (0..g.len())
        .filter(|&c| g.chamber(c).rays.solve_q(y).unwrap().iter().all(|v| !v.is_negative()))
        .count();
    around == expected
}

fn criterion_8() -> Outcome {
    let mut graphs: Vec<ExchangeGraph> = katz_morrison_catalog().iter().map(|e| finite_graph(&e.datum)).collect();
    graphs.push(finite_graph(&a2_all_white()));
    graphs.extend(katz_morrison_catalog().iter().map(|e| unit_box(&e.datum).1));
    let a2 = a2_all_white();
    graphs.push(enumerate_alcoves(&LevelArrangement::new(&a2, Window::from_k(&a2, 4)).unwrap()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(20240615);
    let mut checked = 0;
    let mut skipped = 0;
    let per_graph = 1000 / graphs.len() + 1;
    for g in &graphs {
        let mut done = 0;
        while done < per_graph {
            let d = g.dim;
            let mut x: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-12..=12), rng.gen_range(1..=4))).collect();
            let mut y: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-12..=12), rng.gen_range(1..=4))).collect();
            if g.kind == Kind::Affine {
                // move onto the level: r.y = 1 and r.x = 0, within the box
                let r = &g.normalization;
                for v in y.iter_mut().skip(1) {
                    *v /= qi(12);
                }
                let rest: Q = y[1..].iter().zip(&r[1..]).map(|(a, b)| *a * qi(*b)).sum();
                y[0] = qi(1) - rest;
                let rx = dot_q(r, &x);
                x[0] -= rx;
            }
            let z = ComplexPoint::new(x, y);
            if g.walls.iter().any(|w| dot_q(&w.covector, &z.x).is_zero() && dot_q(&w.covector, &z.y).is_zero()) {
                skipped += 1;
                continue;
            }
            if g.kind == Kind::Affine && !star_in_window(g, &z.y) {
                skipped += 1;
                continue;
            }
            let class = classify_complex_point(g, &z).map_err(|e| format!("{e} at {z:?}"))?;
            ensure(class.certificate.passes(), || format!("certificate fails at {z:?}"))?;
            ensure(directly_contains(g, class.chamber, &z), || format!("direct check fails at {z:?}"))?;
            for other in (0..g.len()).filter(|&c| c != class.chamber) {
                ensure(!directly_contains(g, other, &z), || format!("{z:?} also in chamber {other}"))?;
            }
            done += 1;
            checked += 1;
        }
    }
    ensure(checked >= 1000, || format!("only {checked} points"))?;
    Ok(format!("{checked} points, {skipped} resampled"))
}

fn criterion_9() -> Outcome {
    let expected = [2, 2, 4, 6, 10, 12];
    let mut lengths = Vec::new();
    let mut failures = Vec::new();
    for e in katz_morrison_catalog() {
        let (la, g) = unit_box(&e.datum);
        let d = decompose_pic_as_mutations(&la, &g, 1).map_err(|err| format!("{}: {err}", e.name))?;
        let t: IntMatrix = pic_action_matrix(&e.datum, 1);
        lengths.push(d.len());
        if d.len() != expected[(e.length - 1) as usize] {
            failures.push(format!("length {}: shortest path has {} steps", e.length, d.len()));
        }
        if d.path_matrix != t {
            failures.push(format!("length {}: path matrix {:?} != {:?}", e.length, d.path_matrix.to_rows(), t.to_rows()));
        }
    }
    if failures.is_empty() {
        Ok(format!("lengths {lengths:?}"))
    } else {
        Err(format!("lengths {lengths:?}; {}", failures.join("; ")))
    }
}

fn criterion_10() -> Outcome {
    let mut pairs = 0;
    let mut completions = 0;
    for (name, g) in loop_graphs() {
        for source in 0..g.len() {
            let mut by_end: BTreeMap<usize, Vec<PositivePath>> = BTreeMap::new();
            for (p, end) in positive_paths_from(&g, source, 8) {
                if !is_reduced(&g, &p).map_err(|e| e.to_string())? {
                    continue;
                }
                ensure(verify_same_side(&g, &p).map_err(|e| e.to_string())?, || format!("{name}: {p:?}"))?;
                for l in 0..g.dim {
                    if g.neighbour(end, l).is_none() || is_reduced(&g, &p.then(l)).map_err(|e| e.to_string())? {
                        continue;
                    }
                    let gamma = lemma1_completion(&g, &p, l).map_err(|e| format!("{name}: {e}"))?;
                    ensure(gamma.then(l).target(&g).ok() == Some(end), || format!("{name}: {gamma:?}"))?;
                    completions += 1;
                }
                by_end.entry(end).or_default().push(p);
            }
            for paths in by_end.values() {
                let first = &paths[0];
                let m0 = path_matrix(&g, first.source, &first.word).map_err(|e| e.to_string())?.matrix;
                let c0 = crossing_set(&g, first).map_err(|e| e.to_string())?;
                for p in &paths[1..] {
                    let m = path_matrix(&g, p.source, &p.word).map_err(|e| e.to_string())?.matrix;
                    ensure(m == m0, || format!("{name}: {:?} vs {:?}", first.word, p.word))?;
                    ensure(crossing_set(&g, p).map_err(|e| e.to_string())? == c0, || {
                        format!("{name}: crossings {:?} vs {:?}", first.word, p.word)
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs, {completions} completions"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("catalog lengths and marks", 1, criterion_1),
        ("E6 level wall positions", 1, criterion_2),
        ("rank label rows", 5, criterion_3),
        ("SKMS hole and puncture counts", 5, criterion_4),
        ("crossing matrices are involutions", 5, criterion_5),
        ("positive loops act trivially", 60, criterion_6),
        ("root walls equal chamber walls", 30, criterion_7),
        ("complexified complement is covered disjointly", 60, criterion_8),
        ("Picard translation as shortest mutation path", 10, criterion_9),
        ("reduced path coherence", 120, criterion_10),
    ];
    let mut failed = 0;
    for (k, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status}: {title} ({:.2}s, budget {budget}s): {detail}", k + 1, elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
