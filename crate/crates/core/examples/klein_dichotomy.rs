//! The two Klein-bottle families: a "vertical" torus function whose graph
//! involution is free (rigid orbits, d = 0) and an "inclined" one with two
//! fixed edges (a 1-parameter orbit family, d = 1).

use orbitgraph::fixtures::{inclined_torus, vertical_torus};
use orbitgraph::homology::involution_h1_action;
use orbitgraph::reeb::measured_reeb_graph;

fn main() {
    for (name, mesh) in [("vertical", vertical_torus(8, 8)), ("inclined", inclined_torus(8, 8))] {
        let g = measured_reeb_graph(&mesh).expect("sweep");
        let h = involution_h1_action(&g).expect("homology");
        println!(
            "{name:8} torus: b1 = {}, #Fix(iota) = {}, d = (#Fix + b1 - 1)/2 = {}",
            h.b1,
            h.fix_count,
            (h.fix_count + h.b1 - 1) / 2
        );
        assert!(h.hopf_identity_holds() && h.parity_holds());
    }
}
