//! Circulation as a coset invariant: integrating a discrete 1-form over PL
//! level circles is unchanged by adding an exact form, so the circulation
//! graph depends only on the coset alpha + dC^0.

use orbitgraph::circulation::{build_primitive, coset_to_circulation_graph, DiscreteOneForm};
use orbitgraph::fixtures::inclined_torus;
use orbitgraph::rat::rat_int;
use orbitgraph::reeb::measured_reeb_graph;

fn main() {
    let s = inclined_torus(6, 8);
    let g = measured_reeb_graph(&s).expect("sweep");
    let alpha = build_primitive(&s).expect("primitive with curl = area");

    // any exact shift: here dh for h = 3f + f^3 (odd, so dh is even)
    let h: Vec<_> = (0..s.vertex_count())
        .map(|v| {
            let f = s.f(v);
            rat_int(3) * f + f * f * f
        })
        .collect();
    let shifted = alpha.add(&DiscreteOneForm::exact(&h, &s));

    let (c1, defect1) = coset_to_circulation_graph(&s, &alpha, &g, None).expect("coset");
    let (c2, _) = coset_to_circulation_graph(&s, &shifted, &g, None).expect("coset");
    assert_eq!(c1.cref, c2.cref, "circulation is a coset invariant");

    use num_traits::ToPrimitive;
    println!("tail/head sampling defect: {:.3e} (exact rational internally)",
        defect1.to_f64().unwrap_or(f64::NAN));
    for (e, v) in c1.cref.iter().enumerate() {
        println!("C(e{e}) ~ {:.6}", v.to_f64().unwrap_or(f64::NAN));
    }
}
