//! JSON documents. Every document carries the schema version, an echo of
//! the configuration that produced it, the window (if any) and the seed.

use serde_json::{json, Map, Value};

use crate::arrangement::{wall_rank_labels, ExchangeGraph, Kind, LevelArrangement, Window};
use crate::dynkin::FlopDatum;
use crate::linalg::{fmt_q, IntMatrix};
use crate::skms::SkmsDescription;
use crate::tracking::rank_vector;

pub const SCHEMA_VERSION: &str = "1.0.0";

/// Provenance recorded in every document.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub window: Option<Window>,
}

pub fn window_json(w: &Window) -> Value {
    json!({ "k_max": w.k_max, "lo": fmt_q(&w.lo), "hi": fmt_q(&w.hi) })
}

fn envelope(kind: &str, meta: &Meta, body: Map<String, Value>) -> Value {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("kind".into(), json!(kind));
    doc.insert("command".into(), json!(meta.command));
    doc.insert("config".into(), meta.config.clone());
    doc.insert("seed".into(), meta.seed.map_or(Value::Null, |s| json!(s)));
    doc.insert("window".into(), meta.window.as_ref().map_or(Value::Null, window_json));
    doc.extend(body);
    Value::Object(doc)
}

/// Columns of a matrix as a list of integer vectors.
pub fn columns_json(m: &IntMatrix) -> Value {
    json!(m.columns())
}

/// Row-major integer arrays.
pub fn matrix_json(m: &IntMatrix) -> Value {
    json!(m.to_rows())
}

/// Arrangement dump: walls, chambers and (for affine graphs) alcoves.
pub fn arrangement_document(fd: &FlopDatum, graph: &ExchangeGraph, la: Option<&LevelArrangement>, meta: &Meta) -> Value {
    let mut body = Map::new();
    body.insert("datum".into(), serde_json::to_value(fd.to_json()).expect("plain data"));
    body.insert(
        "mode".into(),
        json!(match graph.kind {
            Kind::Finite => "finite",
            Kind::Affine => "affine",
        }),
    );
    body.insert("normalization".into(), json!(graph.normalization));
    body.insert("walls".into(), serde_json::to_value(&graph.walls).expect("plain data"));
    let chambers: Vec<Value> = graph
        .chambers
        .iter()
        .map(|c| {
            let neighbours: Map<String, Value> = c
                .neighbours
                .iter()
                .enumerate()
                .map(|(l, n)| (graph.label_name(l), n.map_or(Value::Null, |v| json!(v))))
                .collect();
            json!({
                "id": c.id,
                "sign_vector": c.sign_vector,
                "rays": columns_json(&c.rays),
                "word": c.word.iter().map(|&l| graph.label_name(l)).collect::<Vec<_>>(),
                "neighbours": neighbours,
                "rank_vector": rank_vector(graph, c.id),
            })
        })
        .collect();
    body.insert("chambers".into(), json!(chambers));
    if graph.kind == Kind::Affine {
        let alcoves: Vec<Value> = (0..graph.len())
            .map(|c| {
                let vertices: Vec<Vec<String>> =
                    graph.alcove_vertices(c).iter().map(|v| v.iter().map(fmt_q).collect()).collect();
                json!({ "id": c, "vertices": vertices, "labels": rank_vector(graph, c) })
            })
            .collect();
        body.insert("alcoves".into(), json!(alcoves));
        if let Some(la) = la {
            if let Ok(labels) = wall_rank_labels(la, graph) {
                let lw: Vec<Value> = labels
                    .iter()
                    .map(|w| json!({ "wall": w.wall, "position": fmt_q(&w.position), "label": w.label }))
                    .collect();
                body.insert("level_walls".into(), json!(lw));
            }
        }
    }
    envelope("arrangement", meta, body)
}

pub fn skms_document(desc: &SkmsDescription, meta: &Meta) -> Value {
    let Value::Object(mut body) = serde_json::to_value(desc.to_json()).expect("plain data") else {
        unreachable!("structs serialize to objects")
    };
    body.insert("fundamental_alcoves".into(), json!(desc.fundamental_alcoves));
    body.insert("pole_labels".into(), json!([Value::Null, Value::Null]));
    envelope("skms", meta, body)
}

pub fn report_document(report: &crate::verify::Report, meta: &Meta) -> Value {
    let Value::Object(body) = serde_json::to_value(report).expect("plain data") else {
        unreachable!("structs serialize to objects")
    };
    envelope("verify", meta, body)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{enumerate_chambers, FiniteArrangement};
    use crate::dynkin::{build_diagram, Family};

    #[test]
    fn envelope_fields() {
        let fd = FlopDatum::new(build_diagram(Family::A, 1).unwrap(), &[1]).unwrap();
        let g = enumerate_chambers(&FiniteArrangement::new(&fd).unwrap()).unwrap();
        let meta = Meta { command: "arrangement".into(), config: json!({"finite": true}), seed: Some(3), window: None };
        let doc = arrangement_document(&fd, &g, None, &meta);
        assert_eq!(doc["schema_version"], SCHEMA_VERSION);
        assert_eq!(doc["seed"], 3);
        assert_eq!(doc["walls"].as_array().unwrap().len(), 1);
        assert_eq!(doc["chambers"].as_array().unwrap().len(), 2);
        assert_eq!(doc["chambers"][1]["word"][0], "s1");
        assert_eq!(to_pretty(&doc), to_pretty(&arrangement_document(&fd, &g, None, &meta)));
    }
}
