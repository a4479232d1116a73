//! Serialization of graphs, complexes and realizations to json, off and dot.

use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::kneser::SchrijverGraph;
use crate::realize::PolytopeRealization;
use crate::simplicial::{Complex, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Off,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "off" => Ok(Format::Off),
            "dot" => Ok(Format::Dot),
            other => Err(Error::Export(format!("unknown format `{other}`"))),
        }
    }
}

pub enum ExportObject<'a> {
    Graph(&'a SchrijverGraph),
    Complex(&'a Complex<VertexLabel>),
    Polytope(&'a PolytopeRealization<f64>),
}

pub fn export(object: &ExportObject<'_>, format: Format) -> Result<String> {
    match (object, format) {
        (ExportObject::Graph(g), Format::Json) => Ok(graph_json(g)),
        (ExportObject::Graph(g), Format::Dot) => {
            let names: Vec<String> = g.vertices().iter().map(|v| v.key()).collect();
            Ok(dot(&names, &g.edges().iter().map(|&(a, b)| (a as u32, b as u32)).collect::<Vec<_>>()))
        }
        (ExportObject::Complex(k), Format::Json) => complex_json(k),
        (ExportObject::Complex(k), Format::Dot) => {
            if k.vertex_count() == 0 {
                return Err(Error::Export("empty complex".into()));
            }
            let names: Vec<String> = k.labels().iter().map(ToString::to_string).collect();
            Ok(dot(&names, &k.edges()))
        }
        (ExportObject::Polytope(p), Format::Off) => Ok(p.to_off()),
        (ExportObject::Polytope(p), Format::Json) => Ok(pretty(&json!({
            "vertices": p.points,
            "facets": p.facets,
            "planes": p.planes,
            "outer_face": p.outer_face,
            "convexity_margin": p.margin,
        }))),
        (ExportObject::Polytope(p), Format::Dot) => {
            let mut edges: Vec<(u32, u32)> = p
                .facets
                .iter()
                .flat_map(|&[a, b, c]| [(a, b), (b, c), (a, c)])
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let names: Vec<String> = (0..p.points.len()).map(|i| i.to_string()).collect();
            Ok(dot(&names, &edges))
        }
        (_, Format::Off) => Err(Error::Export("OFF export needs coordinates; realize a polytope first".into())),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn graph_json(g: &SchrijverGraph) -> String {
    let vertices: Vec<String> = g.vertices().iter().map(|v| v.key()).collect();
    pretty(&json!({
        "n": g.n(),
        "k": g.k(),
        "ground": g.ground(),
        "vertices": vertices,
        "edges": g.edges(),
    }))
}

fn complex_json(k: &Complex<VertexLabel>) -> Result<String> {
    if k.vertex_count() == 0 {
        return Err(Error::Export("empty complex".into()));
    }
    let labels: Vec<String> = k.labels().iter().map(ToString::to_string).collect();
    let faces: Vec<Vec<Vec<&str>>> = (0..k.f_vector().len())
        .map(|d| k.faces_of_dim(d).map(|(_, f)| f.iter().map(|&v| labels[v as usize].as_str()).collect()).collect())
        .collect();
    let facets: Vec<Vec<&str>> = k.facets().map(|f| f.iter().map(|&v| labels[v as usize].as_str()).collect()).collect();
    Ok(pretty(&json!({
        "vertices": labels,
        "f_vector": k.f_vector(),
        "euler_characteristic": k.euler_characteristic(),
        "facets": facets,
        "faces": faces,
    })))
}

fn dot(names: &[String], edges: &[(u32, u32)]) -> String {
    let mut out = String::from("graph G {\n");
    for (i, name) in names.iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{name}\"];");
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneser::build_graph;

    #[test]
    fn graph_dot_counts() {
        let g = build_graph(2, 2).unwrap();
        let s = export(&ExportObject::Graph(&g), Format::Dot).unwrap();
        assert_eq!(s.lines().filter(|l| l.contains("[label=")).count(), 9);
        assert_eq!(s.lines().filter(|l| l.contains(" -- ")).count(), 18);
    }

    #[test]
    fn off_needs_coordinates() {
        let g = build_graph(2, 2).unwrap();
        assert!(export(&ExportObject::Graph(&g), Format::Off).is_err());
        let empty: Complex<VertexLabel> = Complex::from_facets(Vec::<Vec<VertexLabel>>::new());
        assert!(export(&ExportObject::Complex(&empty), Format::Json).is_err());
    }
}
