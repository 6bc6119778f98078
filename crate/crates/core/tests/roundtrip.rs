//! Property tests: serialization must be the identity on every document we
//! can generate, and rationals must survive format/parse exactly.

use num_traits::One;
use orbitgraph::fixtures::{random_graph, random_mesh};
use orbitgraph::io::{graph_from_json, graph_to_json, mesh_from_json, mesh_to_json};
use orbitgraph::rat::{fmt_rat, parse_rat, rat_int, Rat};
use proptest::prelude::*;

proptest! {
    #[test]
    fn rational_format_parse_identity(num in -1_000_000i64..1_000_000, den in 1i64..1_000_000) {
        let r = rat_int(num) / rat_int(den);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn rational_arithmetic_survives_roundtrip(a in -999i64..999, b in 1i64..999, c in 1i64..999) {
        let r = rat_int(a) / rat_int(b) + Rat::one() / rat_int(c);
        let s = fmt_rat(&r);
        prop_assert_eq!(parse_rat(&s).unwrap(), r);
        // canonical form: no leading '+', reduced denominator
        prop_assert!(!s.starts_with('+'));
    }

    #[test]
    fn graph_json_identity(seed in 0u64..500) {
        let g = random_graph(seed, 5);
        let h = graph_from_json(&graph_to_json(&g)).unwrap();
        prop_assert_eq!(g.nodes.len(), h.nodes.len());
        prop_assert_eq!(g.edges.len(), h.edges.len());
        prop_assert_eq!(&g.iota, &h.iota);
        for n in 0..g.nodes.len() {
            prop_assert_eq!(&g.nodes[n].f, &h.nodes[n].f);
        }
        for e in 0..g.edges.len() {
            prop_assert_eq!((g.edges[e].tail, g.edges[e].head), (h.edges[e].tail, h.edges[e].head));
            let (p, q) = (g.profile(e).unwrap(), h.profile(e).unwrap());
            prop_assert_eq!(p.mass(), q.mass());
            prop_assert!(p.sup_distance(q).unwrap() == rat_int(0));
        }
    }

    #[test]
    fn mesh_json_identity(seed in 0u64..40) {
        let s = random_mesh(seed, 1);
        let t = mesh_from_json(&mesh_to_json(&s)).unwrap();
        prop_assert_eq!(s.vertex_count(), t.vertex_count());
        prop_assert_eq!(&s.triangles, &t.triangles);
        for v in 0..s.vertex_count() {
            prop_assert_eq!(s.f(v), t.f(v));
        }
        prop_assert_eq!(s.total_area(), t.total_area());
    }
}
