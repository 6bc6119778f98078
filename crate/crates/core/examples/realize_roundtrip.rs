//! Realizes a random measured Reeb graph with involution as an equivariant
//! triangulated surface, sweeps it back, and matches the result to the
//! input within the guaranteed tolerance total-mass / 2^r.

use orbitgraph::classify::iso_measured_reeb;
use orbitgraph::fixtures::random_graph;
use orbitgraph::mesh::{topology_invariants, validate_surface};
use orbitgraph::rat::fmt_rat;
use orbitgraph::realize::{realize_graph, roundtrip_tolerance};
use orbitgraph::reeb::measured_reeb_graph;

fn main() {
    let refinement = 4;
    let g = random_graph(6, 4);
    println!("input: {} nodes, {} edges, mass {}", g.nodes.len(), g.edges.len(), fmt_rat(&g.total_mass().unwrap()));

    let s = realize_graph(&g, refinement).expect("realization");
    assert!(validate_surface(&s).is_valid());
    let (chi_m, b1_m, chi_n, _) = topology_invariants(&s).unwrap();
    println!("mesh: {} triangles, chi(M) = {chi_m}, b1(M) = {b1_m}, chi(N) = {chi_n}", s.triangles.len());

    let back = measured_reeb_graph(&s).expect("sweep");
    let tol = roundtrip_tolerance(&g, refinement).unwrap();
    let iso = iso_measured_reeb(&back, &g, Some(&tol)).expect("round trip isomorphism");
    println!("round trip: isomorphic within {}, node map {:?}", fmt_rat(&tol), iso.nodes);
}
