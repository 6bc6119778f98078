//! Casimir moments I_k = integral of t^k d(mu) on a fixture graph: per edge,
//! globally on the cover, and halved on the non-orientable quotient (even k
//! only; odd moments vanish by equivariance).

use orbitgraph::circulation::casimir_moments;
use orbitgraph::fixtures::figure3_graph;
use orbitgraph::rat::fmt_rat;

fn main() {
    let g = figure3_graph();
    let t = casimir_moments(&g, &[0, 1, 2, 3, 4]).expect("moments");
    println!("k   global        quotient");
    for (i, k) in t.ks.iter().enumerate() {
        let q = t.quotient[i].as_ref().map(|v| fmt_rat(v)).unwrap_or_else(|| "-".into());
        println!("{k}   {:<12}  {q}", fmt_rat(&t.global[i]));
    }
}
