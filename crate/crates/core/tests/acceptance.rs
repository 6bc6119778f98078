//! Acceptance gate: every primary criterion, one pass/fail line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_traits::Zero;
use orbitgraph::circulation::{
    build_primitive, casimir_moments, coset_to_circulation_graph, solve_circulation_space,
    CirculationGraph, DiscreteOneForm,
};
use orbitgraph::classify::{iso_circulation_graph, iso_measured_reeb, relabel_graph, GraphIso};
use orbitgraph::fixtures::{
    inclined_torus, perturbed_octahedron, random_graph, random_mesh, vertical_torus,
};
use orbitgraph::homology::involution_h1_action;
use orbitgraph::mesh::topology_invariants;
use orbitgraph::rat::{rat_int, Rat};
use orbitgraph::realize::{realize_graph, roundtrip_tolerance};
use orbitgraph::reeb::{measured_reeb_graph, reeb_oracle, MeasuredReebGraph};
use rand::{Rng, SeedableRng};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

fn check(
    name: &str,
    budget_secs: u64,
    failures: &mut Vec<String>,
    body: impl FnOnce() -> Result<String, String>,
) {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = t.elapsed();
    let outcome = match outcome {
        Ok(_) if elapsed.as_secs() >= budget_secs => {
            Err(format!("over time budget of {budget_secs}s"))
        }
        other => other,
    };
    match outcome {
        Ok(detail) => println!("PASS {name} ({elapsed:.2?}) {detail}"),
        Err(why) => {
            println!("FAIL {name} ({elapsed:.2?}) {why}");
            failures.push(name.to_string());
        }
    }
}

/// 100 regular levels spread evenly across the f-range of the mesh, nudged
/// off vertex values.
fn regular_levels(s: &orbitgraph::mesh::SurfaceComplex, n: i64) -> Vec<Rat> {
    let mut vals: Vec<Rat> = s.vertices.iter().map(|v| v.f.clone()).collect();
    vals.sort();
    let (lo, hi) = (vals[0].clone(), vals[vals.len() - 1].clone());
    let span = &hi - &lo;
    let mut out = Vec::with_capacity(n as usize);
    for k in 0..n {
        let mut t = &lo + &span * rat_int(2 * k + 1) / rat_int(2 * n);
        while vals.binary_search(&t).is_ok() {
            t += &span / rat_int(2 * n * 9973);
        }
        out.push(t);
    }
    out
}

fn klein_dichotomy() -> Result<String, String> {
    let gv = measured_reeb_graph(&vertical_torus(8, 8)).map_err(|e| e.to_string())?;
    let hv = involution_h1_action(&gv).map_err(|e| e.to_string())?;
    if (hv.b1, hv.fix_count, hv.dim_odd) != (1, 0, 0) {
        return Err(format!("vertical torus: b1={} fix={} d={}", hv.b1, hv.fix_count, hv.dim_odd));
    }
    let gi = measured_reeb_graph(&inclined_torus(8, 8)).map_err(|e| e.to_string())?;
    let hi = involution_h1_action(&gi).map_err(|e| e.to_string())?;
    if (hi.b1, hi.fix_count, hi.dim_odd) != (1, 2, 1) {
        return Err(format!("inclined torus: b1={} fix={} d={}", hi.b1, hi.fix_count, hi.dim_odd));
    }
    Ok("vertical d=0, inclined d=1".into())
}

fn projective_plane() -> Result<String, String> {
    let g = measured_reeb_graph(&perturbed_octahedron()).map_err(|e| e.to_string())?;
    let h = involution_h1_action(&g).map_err(|e| e.to_string())?;
    if h.b1 != 0 || h.fix_count != 1 || h.dim_odd != 0 {
        return Err(format!("b1={} fix={} d={}", h.b1, h.fix_count, h.dim_odd));
    }
    if g.nodes.iter().enumerate().any(|(n, _)| g.valence(n) > 2) {
        return Err("not a path graph".into());
    }
    let (_, hom) = solve_circulation_space(&g).map_err(|e| e.to_string())?;
    if !hom.is_empty() {
        return Err(format!("circulation space has dimension {}", hom.len()));
    }
    Ok("path graph, unique circulation".into())
}

fn dimension_identity() -> Result<String, String> {
    for seed in 0..200u64 {
        let g = random_graph(seed, 6);
        let h = involution_h1_action(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        let (_, hom) = solve_circulation_space(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        let d = (h.fix_count + h.b1 - 1) / 2;
        if (h.fix_count + h.b1 - 1) % 2 != 0 {
            return Err(format!("seed {seed}: parity of #Fix + b1 - 1 is odd"));
        }
        if hom.len() != d || h.dim_odd != d {
            return Err(format!(
                "seed {seed}: basis {} odd {} formula {d}",
                hom.len(),
                h.dim_odd
            ));
        }
        if !h.hopf_identity_holds() || !h.parity_holds() {
            return Err(format!("seed {seed}: Hopf or parity identity fails"));
        }
    }
    Ok("200 graphs".into())
}

fn oracle_equivalence() -> Result<String, String> {
    for seed in 0..50u64 {
        let s = random_mesh(seed, 2);
        if s.triangles.len() > 5000 {
            return Err(format!("seed {seed}: {} triangles", s.triangles.len()));
        }
        let g = measured_reeb_graph(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut vertex_vals: Vec<Rat> = s.vertices.iter().map(|v| v.f.clone()).collect();
        vertex_vals.sort();
        let levels = regular_levels(&s, 100);
        let scan = reeb_oracle(&s, &levels).map_err(|e| format!("seed {seed}: {e}"))?;
        for (t, &count) in scan.levels.iter().zip(&scan.counts) {
            if g.edges_crossing(t).len() != count {
                return Err(format!("seed {seed}: edge/component count mismatch"));
            }
        }
        // between two levels with no vertex value in between the crossing
        // triangles are identical, so adjacency must be a perfect matching
        for i in 0..scan.levels.len() - 1 {
            let (a, b) = (&scan.levels[i], &scan.levels[i + 1]);
            if vertex_vals.iter().any(|v| a < v && v < b) {
                continue;
            }
            let pairs = &scan.adjacency[i];
            let n = scan.counts[i];
            if scan.counts[i + 1] != n || pairs.len() != n {
                return Err(format!("seed {seed}: band adjacency not a matching"));
            }
            let mut left = vec![false; n];
            let mut right = vec![false; n];
            for &(x, y) in pairs {
                if left[x] || right[y] {
                    return Err(format!("seed {seed}: band adjacency not a bijection"));
                }
                left[x] = true;
                right[y] = true;
            }
        }
    }
    Ok("50 meshes x 100 levels".into())
}

fn conservation_compatibility() -> Result<String, String> {
    for seed in 0..50u64 {
        let s = random_mesh(seed, 2);
        let g = measured_reeb_graph(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        if g.total_mass().map_err(|e| e.to_string())? != s.total_area() {
            return Err(format!("seed {seed}: mass != area"));
        }
        let h = involution_h1_action(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        let (_, b1_m, _, _) = topology_invariants(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        if 2 * h.b1 as i64 != b1_m {
            return Err(format!("seed {seed}: 2 b1(graph) = {} != b1(M) = {b1_m}", 2 * h.b1));
        }
        let table = casimir_moments(&g, &[1]).map_err(|e| format!("seed {seed}: {e}"))?;
        if !table.global[0].is_zero() {
            return Err(format!("seed {seed}: global I1 nonzero"));
        }
    }
    Ok("50 meshes".into())
}

fn coset_invariance() -> Result<String, String> {
    for seed in 0..20u64 {
        let s = random_mesh(seed, 2);
        let g = measured_reeb_graph(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        let alpha = build_primitive(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(977));
        let h: Vec<Rat> = (0..s.vertex_count())
            .map(|_| rat_int(rng.gen_range(-40..40)) / rat_int(rng.gen_range(1..12)))
            .collect();
        let shifted = alpha.add(&DiscreteOneForm::exact(&h, &s));
        let (c1, _) =
            coset_to_circulation_graph(&s, &alpha, &g, None).map_err(|e| format!("seed {seed}: {e}"))?;
        let (c2, _) = coset_to_circulation_graph(&s, &shifted, &g, None)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if c1.cref != c2.cref {
            return Err(format!("seed {seed}: circulation changed under exact shift"));
        }
    }
    Ok("20 fixtures, exact".into())
}

fn orbit_separation() -> Result<String, String> {
    let gi = measured_reeb_graph(&inclined_torus(8, 8)).map_err(|e| e.to_string())?;
    let (ci, hom) = solve_circulation_space(&gi).map_err(|e| e.to_string())?;
    if hom.len() != 1 {
        return Err(format!("inclined torus: basis dimension {}", hom.len()));
    }
    let scale = rat_int(7) / rat_int(2);
    let shifted = CirculationGraph {
        base: ci.base.clone(),
        cref: ci.cref.iter().zip(&hom[0]).map(|(c, b)| c + &scale * b).collect(),
    };
    if iso_circulation_graph(&ci, &shifted, None).is_some() {
        return Err("inclined torus: distinct orbits reported isomorphic".into());
    }
    let gv = measured_reeb_graph(&vertical_torus(8, 8)).map_err(|e| e.to_string())?;
    let (cv, hom) = solve_circulation_space(&gv).map_err(|e| e.to_string())?;
    if !hom.is_empty() {
        return Err(format!("vertical torus: basis dimension {}", hom.len()));
    }
    let (base2, iso) = relabel_graph(&cv.base, 11);
    let mut cref2 = vec![Rat::zero(); cv.cref.len()];
    for (e, c) in cv.cref.iter().enumerate() {
        cref2[iso.edges[e]] = c.clone();
    }
    let cv2 = CirculationGraph { base: base2, cref: cref2 };
    if iso_circulation_graph(&cv, &cv2, None).is_none() {
        return Err("vertical torus: equal orbits reported distinct".into());
    }
    Ok("inclined separates, vertical identifies".into())
}

fn node_values_and_masses_match(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    iso: &GraphIso,
) -> bool {
    g1.nodes.iter().enumerate().all(|(n, node)| node.f == g2.nodes[iso.nodes[n]].f)
        && (0..g1.edges.len()).all(|e| {
            g1.profile(e).unwrap().mass() == g2.profile(iso.edges[e]).unwrap().mass()
        })
}

fn realization_round_trip() -> Result<String, String> {
    let r = 4u32;
    let mut done = 0;
    let mut seed = 0u64;
    while done < 20 {
        seed += 1;
        if seed > 200 {
            return Err("fewer than 20 realizable graphs in 200 seeds".into());
        }
        let g = random_graph(seed, 4);
        let s = match realize_graph(&g, r) {
            Ok(s) => s,
            Err(_) => continue, // not every random measure admits this construction
        };
        let g2 = measured_reeb_graph(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        let tol = roundtrip_tolerance(&g, r).map_err(|e| e.to_string())?;
        let iso = iso_measured_reeb(&g2, &g, Some(&tol))
            .ok_or_else(|| format!("seed {seed}: round trip not isomorphic within tol"))?;
        if !node_values_and_masses_match(&g2, &g, &iso) {
            return Err(format!("seed {seed}: node values or masses differ"));
        }
        done += 1;
    }
    Ok(format!("20 graphs at r = {r}, scanned {seed} seeds"))
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    check("klein-bottle dichotomy", 2, &mut failures, klein_dichotomy);
    check("projective-plane case", 1, &mut failures, projective_plane);
    check("dimension identity", 30, &mut failures, dimension_identity);
    check("sweep vs oracle", 120, &mut failures, oracle_equivalence);
    check("conservation + compatibility", 120, &mut failures, conservation_compatibility);
    check("coset invariance", 120, &mut failures, coset_invariance);
    check("orbit separation", 1, &mut failures, orbit_separation);
    check("realization round trip", 120, &mut failures, realization_round_trip);
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
