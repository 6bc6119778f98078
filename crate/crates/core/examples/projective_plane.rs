//! RP^2: the double cover is a sphere with the antipodal involution. The
//! Reeb graph is a path, the orbit moduli are a point, and the circulation
//! function is determined by the measure alone.

use orbitgraph::circulation::solve_circulation_space;
use orbitgraph::fixtures::perturbed_octahedron;
use orbitgraph::homology::orbit_moduli_dimension;
use orbitgraph::rat::fmt_rat;
use orbitgraph::reeb::measured_reeb_graph;

fn main() {
    let s = perturbed_octahedron();
    let g = measured_reeb_graph(&s).expect("sweep");
    println!("{} nodes, {} edges, d = {}", g.nodes.len(), g.edges.len(), orbit_moduli_dimension(&g, None).unwrap());

    let (c, basis) = solve_circulation_space(&g).expect("circulation");
    assert!(basis.is_empty(), "circulation must be unique on a path");
    for (e, v) in c.cref.iter().enumerate() {
        println!("  C(e{e}) = {}", fmt_rat(v));
    }
}
