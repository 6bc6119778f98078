//! Samples random measured Reeb graphs with involution and tabulates the
//! orbit-moduli dimension, checking the closed formula against the odd
//! eigenspace of iota_* on H1 and against the homogeneous circulation basis.

use orbitgraph::circulation::solve_circulation_space;
use orbitgraph::fixtures::random_graph;
use orbitgraph::homology::involution_h1_action;

fn main() {
    let mut by_d = std::collections::BTreeMap::<usize, usize>::new();
    for seed in 0..100u64 {
        let g = random_graph(seed, 6);
        let h = involution_h1_action(&g).expect("homology");
        let (_, basis) = solve_circulation_space(&g).expect("circulation");
        let d = (h.fix_count + h.b1 - 1) / 2;
        assert_eq!(d, h.dim_odd);
        assert_eq!(d, basis.len());
        *by_d.entry(d).or_default() += 1;
    }
    println!("d  graphs (of 100, b1 <= 6)");
    for (d, n) in by_d {
        println!("{d}  {n}");
    }
}
