//! JSON documents for meshes, measured Reeb graphs, circulation graphs and
//! discrete 1-forms, plus Graphviz export. Rationals travel as "p/q"
//! strings so round trips are exact.

use crate::circulation::{CirculationGraph, DiscreteOneForm};
use crate::mesh::{MeshError, SurfaceComplex};
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::reeb::{
    EdgeMeasureProfile, GraphInvolution, MeasuredReebGraph, ReebEdge, ReebNode,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational '{0}'")]
    BadRational(String),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("{0}")]
    Malformed(String),
}

fn rational(s: &str) -> Result<Rat, IoError> {
    parse_rat(s).map_err(|_| IoError::BadRational(s.to_string()))
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: i64,
    f: String,
}

#[derive(Serialize, Deserialize)]
pub struct MeshDoc {
    vertices: Vec<VertexDoc>,
    triangles: Vec<[i64; 3]>,
    areas: Vec<String>,
    involution: Vec<[i64; 2]>,
}

pub fn mesh_to_json(s: &SurfaceComplex) -> String {
    let doc = MeshDoc {
        vertices: s
            .vertices
            .iter()
            .map(|v| VertexDoc { id: v.id, f: fmt_rat(&v.f) })
            .collect(),
        triangles: s
            .triangles
            .iter()
            .map(|t| [s.vertices[t[0]].id, s.vertices[t[1]].id, s.vertices[t[2]].id])
            .collect(),
        areas: s.areas.iter().map(fmt_rat).collect(),
        involution: s
            .involution
            .iter()
            .enumerate()
            .map(|(v, &iv)| [s.vertices[v].id, s.vertices[iv].id])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("mesh serialization cannot fail")
}

pub fn mesh_from_json(text: &str) -> Result<SurfaceComplex, IoError> {
    let doc: MeshDoc = serde_json::from_str(text)?;
    let vertices = doc
        .vertices
        .iter()
        .map(|v| Ok((v.id, rational(&v.f)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let areas = doc.areas.iter().map(|a| rational(a)).collect::<Result<Vec<_>, _>>()?;
    let pairs = doc.involution.iter().map(|&[a, b]| (a, b)).collect();
    Ok(SurfaceComplex::new(vertices, doc.triangles, areas, pairs)?)
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    f: String,
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    breaks: Vec<String>,
    /// Quadratic coefficients (a, b, c) per piece, one more piece than
    /// breaks; the cumulative mass on a piece is a t^2 + b t + c.
    pieces: Vec<[String; 3]>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: usize,
    tail: usize,
    head: usize,
    mass: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<ProfileDoc>,
    /// Reference circulation, present in circulation-graph documents.
    #[serde(skip_serializing_if = "Option::is_none")]
    cref: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct IotaDoc {
    nodes: Vec<usize>,
    edges: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iota: Option<IotaDoc>,
}

fn graph_doc(g: &MeasuredReebGraph, cref: Option<&[Rat]>) -> GraphDoc {
    GraphDoc {
        nodes: g
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeDoc { id: i, f: fmt_rat(&n.f) })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeDoc {
                id: i,
                tail: e.tail,
                head: e.head,
                mass: e.profile.as_ref().map(|p| fmt_rat(&p.mass())).unwrap_or_default(),
                profile: e.profile.as_ref().map(|p| ProfileDoc {
                    breaks: p.breaks.iter().map(fmt_rat).collect(),
                    pieces: p
                        .pieces
                        .iter()
                        .map(|q| [fmt_rat(&q[0]), fmt_rat(&q[1]), fmt_rat(&q[2])])
                        .collect(),
                }),
                cref: cref.map(|c| fmt_rat(&c[i])),
            })
            .collect(),
        iota: g.iota.as_ref().map(|i| IotaDoc { nodes: i.nodes.clone(), edges: i.edges.clone() }),
    }
}

pub fn graph_to_json(g: &MeasuredReebGraph) -> String {
    serde_json::to_string_pretty(&graph_doc(g, None)).expect("graph serialization cannot fail")
}

pub fn circulation_to_json(c: &CirculationGraph) -> String {
    serde_json::to_string_pretty(&graph_doc(&c.base, Some(&c.cref)))
        .expect("graph serialization cannot fail")
}

fn graph_from_doc(doc: &GraphDoc) -> Result<(MeasuredReebGraph, Option<Vec<Rat>>), IoError> {
    let n = doc.nodes.len();
    for (i, node) in doc.nodes.iter().enumerate() {
        if node.id != i {
            return Err(IoError::Malformed(format!("node ids must be 0..{n} in order")));
        }
    }
    let nodes: Vec<ReebNode> = doc
        .nodes
        .iter()
        .map(|nd| Ok(ReebNode { f: rational(&nd.f)?, mesh_vertex: None }))
        .collect::<Result<_, IoError>>()?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    let mut cref: Vec<Rat> = Vec::new();
    let mut has_cref = false;
    for (i, ed) in doc.edges.iter().enumerate() {
        if ed.id != i {
            return Err(IoError::Malformed(format!("edge ids must be 0..{} in order", doc.edges.len())));
        }
        if ed.tail >= n || ed.head >= n {
            return Err(IoError::Malformed(format!("edge {i}: endpoint out of range")));
        }
        let profile = match &ed.profile {
            None => None,
            Some(p) => {
                if p.pieces.len() != p.breaks.len() + 1 {
                    return Err(IoError::Malformed(format!(
                        "edge {i}: need one more piece than breaks"
                    )));
                }
                let breaks =
                    p.breaks.iter().map(|b| rational(b)).collect::<Result<Vec<_>, _>>()?;
                let pieces = p
                    .pieces
                    .iter()
                    .map(|q| Ok([rational(&q[0])?, rational(&q[1])?, rational(&q[2])?]))
                    .collect::<Result<Vec<_>, IoError>>()?;
                let prof = EdgeMeasureProfile {
                    f_lo: nodes[ed.tail].f.clone(),
                    f_hi: nodes[ed.head].f.clone(),
                    breaks,
                    pieces,
                };
                if !ed.mass.is_empty() && rational(&ed.mass)? != prof.mass() {
                    return Err(IoError::Malformed(format!(
                        "edge {i}: stated mass disagrees with the profile"
                    )));
                }
                Some(prof)
            }
        };
        edges.push(ReebEdge { tail: ed.tail, head: ed.head, profile });
        if let Some(c) = &ed.cref {
            has_cref = true;
            cref.push(rational(c)?);
        } else {
            cref.push(num_traits::Zero::zero());
        }
    }
    let iota = match &doc.iota {
        None => None,
        Some(i) => {
            if i.nodes.len() != n || i.edges.len() != edges.len() {
                return Err(IoError::Malformed("iota tables have wrong lengths".into()));
            }
            if i.nodes.iter().any(|&x| x >= n) || i.edges.iter().any(|&x| x >= edges.len()) {
                return Err(IoError::Malformed("iota tables out of range".into()));
            }
            Some(GraphInvolution { nodes: i.nodes.clone(), edges: i.edges.clone() })
        }
    };
    let g = MeasuredReebGraph { nodes, edges, iota, cellmap: Vec::new() };
    Ok((g, has_cref.then_some(cref)))
}

pub fn graph_from_json(text: &str) -> Result<MeasuredReebGraph, IoError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    Ok(graph_from_doc(&doc)?.0)
}

pub fn circulation_from_json(text: &str) -> Result<CirculationGraph, IoError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    let (base, cref) = graph_from_doc(&doc)?;
    let cref = cref.ok_or_else(|| IoError::Malformed("no cref values in document".into()))?;
    Ok(CirculationGraph { base, cref })
}

#[derive(Serialize, Deserialize)]
pub struct OneFormDoc {
    /// Entries (u, v, value) on oriented mesh edges u -> v, by vertex id.
    edges: Vec<(i64, i64, String)>,
}

pub fn oneform_to_json(s: &SurfaceComplex, alpha: &DiscreteOneForm) -> String {
    let mut entries: Vec<(i64, i64, String)> = s
        .edge_map()
        .keys()
        .map(|&(u, v)| (s.vertices[u].id, s.vertices[v].id, fmt_rat(&alpha.get(u, v))))
        .collect();
    entries.sort();
    serde_json::to_string_pretty(&OneFormDoc { edges: entries })
        .expect("one-form serialization cannot fail")
}

pub fn oneform_from_json(s: &SurfaceComplex, text: &str) -> Result<DiscreteOneForm, IoError> {
    let doc: OneFormDoc = serde_json::from_str(text)?;
    let mut index = std::collections::HashMap::new();
    for (k, v) in s.vertices.iter().enumerate() {
        index.insert(v.id, k);
    }
    let mut alpha = DiscreteOneForm::default();
    for (u, v, val) in &doc.edges {
        let (&ui, &vi) = (
            index.get(u).ok_or(IoError::Malformed(format!("unknown vertex {u}")))?,
            index.get(v).ok_or(IoError::Malformed(format!("unknown vertex {v}")))?,
        );
        alpha.set(ui, vi, rational(val)?);
    }
    Ok(alpha)
}

/// Graphviz rendering of a measured Reeb graph: nodes ranked by f from the
/// bottom up, ι-fixed edges drawn bold.
pub fn graph_to_dot(g: &MeasuredReebGraph, cref: Option<&[Rat]>) -> String {
    let mut out = String::from("digraph reeb {\n  rankdir=BT;\n  node [shape=circle];\n");
    // group nodes of equal value on one rank
    let mut values: Vec<&Rat> = g.nodes.iter().map(|n| &n.f).collect();
    values.sort();
    values.dedup();
    for v in values {
        let ids: Vec<String> = g
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| &n.f == v)
            .map(|(i, _)| format!("n{i}"))
            .collect();
        out.push_str(&format!("  {{ rank=same; {}; }}\n", ids.join("; ")));
    }
    for (i, n) in g.nodes.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{i}\\nf={}\"];\n", fmt_rat(&n.f)));
    }
    for (e, edge) in g.edges.iter().enumerate() {
        let fixed = g.iota.as_ref().map_or(false, |i| i.edges[e] == e);
        let mut attrs: Vec<String> = Vec::new();
        let mut label = format!("e{e}");
        if let Some(p) = &edge.profile {
            label.push_str(&format!(" m={}", fmt_rat(&p.mass())));
        }
        if let Some(c) = cref {
            label.push_str(&format!(" c={}", fmt_rat(&c[e])));
        }
        attrs.push(format!("label=\"{label}\""));
        if fixed {
            attrs.push("style=bold".into());
            attrs.push("color=\"#b40426\"".into());
        }
        out.push_str(&format!(
            "  n{} -> n{} [{}];\n",
            edge.tail,
            edge.head,
            attrs.join(", ")
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{figure3_graph, random_graph, vertical_torus};
    use crate::circulation::solve_circulation_space;

    #[test]
    fn mesh_json_roundtrip() {
        let s = vertical_torus(4, 4);
        let t = mesh_from_json(&mesh_to_json(&s)).unwrap();
        assert_eq!(s.vertices.len(), t.vertices.len());
        assert_eq!(s.triangles, t.triangles);
        assert_eq!(s.areas, t.areas);
        assert_eq!(s.involution, t.involution);
        assert_eq!(
            s.vertices.iter().map(|v| &v.f).collect::<Vec<_>>(),
            t.vertices.iter().map(|v| &v.f).collect::<Vec<_>>()
        );
    }

    #[test]
    fn graph_json_roundtrip_exact() {
        for seed in 0..5 {
            let g = random_graph(seed, 5);
            let h = graph_from_json(&graph_to_json(&g)).unwrap();
            assert_eq!(g.nodes.len(), h.nodes.len());
            for (a, b) in g.edges.iter().zip(&h.edges) {
                assert_eq!(a.tail, b.tail);
                assert_eq!(a.head, b.head);
                let (pa, pb) = (a.profile.as_ref().unwrap(), b.profile.as_ref().unwrap());
                assert_eq!(pa.breaks, pb.breaks);
                assert_eq!(pa.pieces, pb.pieces);
            }
            assert_eq!(g.iota, h.iota);
        }
    }

    #[test]
    fn circulation_json_roundtrip() {
        let g = figure3_graph();
        let (c, _) = solve_circulation_space(&g).unwrap();
        let d = circulation_from_json(&circulation_to_json(&c)).unwrap();
        assert_eq!(c.cref, d.cref);
    }

    #[test]
    fn tampered_mass_is_rejected() {
        let g = figure3_graph();
        let text = graph_to_json(&g).replace("\"mass\": \"2\"", "\"mass\": \"3\"");
        assert!(graph_from_json(&text).is_err());
    }

    #[test]
    fn dot_marks_fixed_edges() {
        let dot = graph_to_dot(&figure3_graph(), None);
        assert!(dot.contains("style=bold"));
        assert!(dot.contains("rank=same"));
    }
}
