//! Renders a circulation graph as Graphviz DOT on stdout; iota-fixed edges
//! come out bold and red. Pipe into `dot -Tsvg` to draw it.

use orbitgraph::circulation::solve_circulation_space;
use orbitgraph::fixtures::figure3_graph;
use orbitgraph::io::graph_to_dot;

fn main() {
    let (c, _) = solve_circulation_space(&figure3_graph()).expect("circulation");
    print!("{}", graph_to_dot(&c.base, Some(&c.cref)));
}
