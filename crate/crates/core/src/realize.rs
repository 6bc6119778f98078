//! Inverse construction: builds a triangulated double cover with free
//! orientation-reversing involution, odd simple Morse vertex values and even
//! triangle areas whose measured Reeb graph reproduces a given abstract
//! graph — exactly on node values and edge masses, within 2^-refinement of
//! the total mass on measure profiles.
//!
//! Every edge becomes a triangulated cylinder of C-gon rings placed at the
//! profile breakpoints and refined by bisection; 1-valent nodes are capped
//! with cones and 3-valent nodes filled with a pair-of-pants template whose
//! triangle areas are solved exactly so that the sublevel mass on each side
//! of the node value matches the profile. The involution is realized by
//! building one representative of every edge/node orbit and mirroring.

use crate::mesh::SurfaceComplex;
use crate::rat::{rat_int, Rat};
use crate::reeb::{validate_graph, MeasuredReebGraph, ReebError};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Ring circumference. Even (the involution rotates rings by half a turn)
/// and large enough that the saddle template arcs have length ≥ 2.
const CIRC: usize = 6;
const HALF: usize = CIRC / 2;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Node(usize),
    /// Ring vertex (edge, ring index, position).
    Ring(usize, usize, usize),
}

struct Builder {
    index: HashMap<Key, usize>,
    values: Vec<Rat>,
    partner: Vec<usize>,
    triangles: Vec<[usize; 3]>,
    areas: Vec<Rat>,
}

impl Builder {
    fn vertex(&mut self, key: Key, value: Rat) -> usize {
        let idx = self.values.len();
        let old = self.index.insert(key, idx);
        debug_assert!(old.is_none());
        self.values.push(value);
        self.partner.push(usize::MAX);
        idx
    }

    fn at(&self, key: Key) -> usize {
        self.index[&key]
    }

    fn pair(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    fn emit(&mut self, batch: &[([usize; 3], Rat)]) {
        for (tri, area) in batch {
            self.triangles.push(*tri);
            self.areas.push(area.clone());
        }
    }

    /// The mirror copy of a batch: I applied vertexwise, orientation
    /// reversed, areas kept (areas of a valid cover are even).
    fn emit_mirror(&mut self, batch: &[([usize; 3], Rat)]) {
        for ([u, v, w], area) in batch {
            self.triangles.push([self.partner[*u], self.partner[*w], self.partner[*v]]);
            self.areas.push(area.clone());
        }
    }
}

/// Annulus triangulation between two cycles of arbitrary lengths, advancing
/// whichever side lags. Lower edges are traversed forward, upper edges
/// backward, matching the cylinder convention.
fn zigzag(lower: &[usize], upper: &[usize]) -> Vec<[usize; 3]> {
    let (n, m) = (lower.len(), upper.len());
    let mut tris = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < m {
        let adv_lower = i < n && (j == m || (i + 1) * m <= (j + 1) * n);
        if adv_lower {
            tris.push([lower[i % n], lower[(i + 1) % n], upper[j % m]]);
            i += 1;
        } else {
            tris.push([lower[i % n], upper[(j + 1) % m], upper[j % m]]);
            j += 1;
        }
    }
    tris
}

/// Fraction of a triangle's area below level s under the PL sublevel rule.
fn frac_below(s: &Rat, vals: &[Rat; 3]) -> Rat {
    let mut v = vals.clone();
    v.sort();
    let [v0, v1, v2] = v;
    if *s <= v0 {
        return Rat::zero();
    }
    if *s >= v2 {
        return Rat::one();
    }
    if *s <= v1 {
        let d = s - &v0;
        &d * &d / ((&v1 - &v0) * (&v2 - &v0))
    } else {
        let d = &v2 - s;
        Rat::one() - &d * &d / ((&v2 - &v1) * (&v2 - &v0))
    }
}

/// Interior ring levels of an edge: profile breakpoints, then level
/// bisection until every band carries at most `target` mass. For ι-fixed
/// edges the level set is kept symmetric and avoids 0.
fn ring_levels(
    g: &MeasuredReebGraph,
    e: usize,
    fixed: bool,
    target: &Rat,
) -> Result<Vec<Rat>, ReebError> {
    let profile = g.profile(e)?;
    let (lo, hi) = (&profile.f_lo, &profile.f_hi);
    let mut levels: Vec<Rat> = profile
        .breaks
        .iter()
        .filter(|b| *b > lo && *b < hi)
        .cloned()
        .collect();
    if fixed {
        let mirrored: Vec<Rat> = levels.iter().map(|t| -t).collect();
        levels.extend(mirrored);
        levels.retain(|t| !t.is_zero());
        levels.sort();
        levels.dedup();
        if levels.is_empty() {
            let q = hi / rat_int(2);
            levels = vec![-q.clone(), q];
        }
    } else if levels.is_empty() {
        levels.push((lo + hi) / rat_int(2));
    }

    let band_over = |levels: &[Rat]| -> Option<(Rat, Rat)> {
        let mut prev = lo.clone();
        for t in levels.iter().chain(std::iter::once(hi)) {
            if &(profile.eval(t) - profile.eval(&prev)) > target {
                return Some((prev, t.clone()));
            }
            prev = t.clone();
        }
        None
    };
    let mut guard = 0usize;
    while let Some((x, y)) = band_over(&levels) {
        guard += 1;
        if guard > 1 << 16 {
            break; // accept a coarser approximation rather than diverge
        }
        if fixed && x == -y.clone() {
            // splitting the middle band at 0 is forbidden; use quarter points
            let q = &y / rat_int(2);
            levels.push(-q.clone());
            levels.push(q);
        } else {
            let m = (&x + &y) / rat_int(2);
            if fixed {
                levels.push(-m.clone());
            }
            levels.push(m);
        }
        levels.sort();
        levels.dedup();
    }

    // positive measure on every band, else positive areas are impossible
    let mut prev = lo.clone();
    for t in levels.iter().chain(std::iter::once(hi)) {
        if profile.eval(t) <= profile.eval(&prev) {
            return Err(ReebError::Other(format!(
                "edge {e}: measure vanishes on a band; cannot realize with positive areas"
            )));
        }
        prev = t.clone();
    }
    Ok(levels)
}

/// Builds a surface complex realizing `g`. The profile deviation of the
/// round trip is at most totalmass / 2^refinement.
pub fn realize_graph(g: &MeasuredReebGraph, refinement: u32) -> Result<SurfaceComplex, ReebError> {
    let problems = validate_graph(g);
    if !problems.is_empty() {
        return Err(ReebError::Other(format!("graph invalid: {}", problems.join("; "))));
    }
    let iota = g.iota()?.clone();
    let r = refinement.min(24);

    // in/out degrees decide the template at each node
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); g.nodes.len()];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); g.nodes.len()];
    for (e, edge) in g.edges.iter().enumerate() {
        outs[edge.tail].push(e);
        ins[edge.head].push(e);
    }
    for n in 0..g.nodes.len() {
        let (i, o) = (ins[n].len(), outs[n].len());
        if !matches!((i, o), (1, 0) | (0, 1) | (2, 1) | (1, 2)) {
            return Err(ReebError::Other(format!(
                "node {n}: {i} edges in, {o} out; only extrema and 2-1 saddles are realizable"
            )));
        }
    }

    // ring levels for every edge; partners get the mirrored levels
    let mut levels: Vec<Vec<Rat>> = vec![Vec::new(); g.edges.len()];
    for e in 0..g.edges.len() {
        let ie = iota.edges[e];
        if e > ie {
            continue;
        }
        let target = g.profile(e)?.mass() / rat_int(1i64 << (r + 2));
        let ls = ring_levels(g, e, e == ie, &target)?;
        if e < ie {
            let mut mirrored: Vec<Rat> = ls.iter().map(|t| -t).collect();
            mirrored.reverse();
            levels[ie] = mirrored;
        }
        levels[e] = ls;
    }

    // jitter unit: small against every level gap so ring vertices stay
    // regular and all values distinct
    let mut marks: Vec<Rat> = g.nodes.iter().map(|n| n.f.clone()).collect();
    marks.push(Rat::zero());
    for ls in &levels {
        marks.extend(ls.iter().cloned());
    }
    marks.sort();
    marks.dedup();
    let mut gap: Option<Rat> = None;
    for w in marks.windows(2) {
        let d = &w[1] - &w[0];
        if gap.as_ref().map_or(true, |g| &d < g) {
            gap = Some(d);
        }
    }
    let gap = gap.ok_or_else(|| ReebError::Other("graph has no level structure".into()))?;
    let ring_total: usize = levels.iter().map(|ls| ls.len() * CIRC).sum();
    let unit = gap / rat_int(4 * (ring_total as i64 + 2));

    let mut b = Builder {
        index: HashMap::new(),
        values: Vec::new(),
        partner: Vec::new(),
        triangles: Vec::new(),
        areas: Vec::new(),
    };

    for (n, node) in g.nodes.iter().enumerate() {
        b.vertex(Key::Node(n), node.f.clone());
    }
    for n in 0..g.nodes.len() {
        let (a, bb) = (b.at(Key::Node(n)), b.at(Key::Node(iota.nodes[n])));
        b.partner[a] = bb;
    }

    let mut counter: i64 = 0;
    let mut jitter = || {
        counter += 1;
        &unit * rat_int(counter)
    };
    for e in 0..g.edges.len() {
        let ie = iota.edges[e];
        if e > ie {
            continue;
        }
        let jn = levels[e].len();
        if e == ie {
            debug_assert!(jn % 2 == 0);
            for j in 0..jn / 2 {
                for k in 0..CIRC {
                    let v = &levels[e][j] + jitter();
                    b.vertex(Key::Ring(e, j, k), v);
                }
            }
            for j in jn / 2..jn {
                for k in 0..CIRC {
                    let src = b.at(Key::Ring(e, jn - 1 - j, (k + HALF) % CIRC));
                    let v = -b.values[src].clone();
                    let idx = b.vertex(Key::Ring(e, j, k), v);
                    b.pair(idx, src);
                }
            }
        } else {
            for j in 0..jn {
                for k in 0..CIRC {
                    let v = &levels[e][j] + jitter();
                    b.vertex(Key::Ring(e, j, k), v);
                }
            }
            for j in 0..jn {
                for k in 0..CIRC {
                    let src = b.at(Key::Ring(e, jn - 1 - j, (k + HALF) % CIRC));
                    let v = -b.values[src].clone();
                    let idx = b.vertex(Key::Ring(ie, j, k), v);
                    b.pair(idx, src);
                }
            }
        }
    }

    let ring = |b: &Builder, e: usize, j: usize| -> Vec<usize> {
        (0..CIRC).map(|k| b.at(Key::Ring(e, j, k))).collect()
    };

    // cylinder bands; the middle band of a fixed edge maps to itself under I
    // and needs the half-split diagonal pattern
    let band = |b: &Builder, e: usize, j: usize, split: bool, area: &Rat| {
        let lo = ring(b, e, j);
        let hi = ring(b, e, j + 1);
        let mut batch = Vec::with_capacity(2 * CIRC);
        for k in 0..CIRC {
            let (a0, a1) = (lo[k], lo[(k + 1) % CIRC]);
            let (b0, b1) = (hi[k], hi[(k + 1) % CIRC]);
            if split && k < HALF {
                batch.push(([a0, a1, b1], area.clone()));
                batch.push(([a0, b1, b0], area.clone()));
            } else {
                batch.push(([a0, a1, b0], area.clone()));
                batch.push(([a1, b1, b0], area.clone()));
            }
        }
        batch
    };

    for e in 0..g.edges.len() {
        let ie = iota.edges[e];
        if e > ie {
            continue;
        }
        let profile = g.profile(e)?;
        let jn = levels[e].len();
        let band_area = |j: usize| -> Rat {
            (profile.eval(&levels[e][j + 1]) - profile.eval(&levels[e][j]))
                / rat_int(2 * CIRC as i64)
        };
        if e == ie {
            let mid = jn / 2 - 1; // bands 0..jn-1; mid is its own mirror
            for j in 0..mid {
                let batch = band(&b, e, j, false, &band_area(j));
                b.emit(&batch);
                b.emit_mirror(&batch);
            }
            let batch = band(&b, e, mid, true, &band_area(mid));
            b.emit(&batch);
        } else {
            for j in 0..jn - 1 {
                let batch = band(&b, e, j, false, &band_area(j));
                b.emit(&batch);
                b.emit_mirror(&batch);
            }
        }
    }

    // node templates: build the maximum of each 1-valent orbit and the
    // merge side of each saddle orbit, then mirror
    let mut done = vec![false; g.nodes.len()];
    for n in 0..g.nodes.len() {
        if done[n] {
            continue;
        }
        done[n] = true;
        done[iota.nodes[n]] = true;
        match (ins[n].len(), outs[n].len()) {
            (1, 0) | (0, 1) => {
                // use the max of the orbit
                let n = if outs[n].is_empty() { n } else { iota.nodes[n] };
                let e = ins[n][0];
                let top = ring(&b, e, levels[e].len() - 1);
                let p = g.profile(e)?;
                let cap = p.mass() - p.eval(levels[e].last().unwrap());
                let area = &cap / rat_int(CIRC as i64);
                let apex = b.at(Key::Node(n));
                let batch: Vec<([usize; 3], Rat)> = (0..CIRC)
                    .map(|k| ([top[k], top[(k + 1) % CIRC], apex], area.clone()))
                    .collect();
                b.emit(&batch);
                b.emit_mirror(&batch);
            }
            _ => {
                // use the merge (2 in, 1 out) of the orbit
                let n = if ins[n].len() == 2 { n } else { iota.nodes[n] };
                let s = g.nodes[n].f.clone();
                let (p, q) = (ins[n][0].min(ins[n][1]), ins[n][0].max(ins[n][1]));
                let o = outs[n][0];
                let w = b.at(Key::Node(n));
                let rp = ring(&b, p, levels[p].len() - 1);
                let rq = ring(&b, q, levels[q].len() - 1);
                let ro = ring(&b, o, 0);

                let mut upper1 = vec![w];
                upper1.extend_from_slice(&ro[..HALF]);
                let mut upper2 = vec![w];
                upper2.extend_from_slice(&ro[HALF..]);
                let mut tris: Vec<([usize; 3], u8)> = Vec::new(); // (triangle, side)
                tris.extend(zigzag(&rp, &upper1).into_iter().map(|t| (t, 0)));
                tris.extend(zigzag(&rq, &upper2).into_iter().map(|t| (t, 1)));
                tris.push(([ro[HALF - 1], w, ro[HALF]], 2));
                tris.push(([w, ro[0], ro[CIRC - 1]], 2));

                // remaining masses each side of the node value
                let prof_p = g.profile(p)?;
                let prof_q = g.profile(q)?;
                let prof_o = g.profile(o)?;
                let rem_p = prof_p.mass() - prof_p.eval(levels[p].last().unwrap());
                let rem_q = prof_q.mass() - prof_q.eval(levels[q].last().unwrap());
                let head = prof_o.eval(&levels[o][0]);
                if rem_p <= Rat::zero() || rem_q <= Rat::zero() || head <= Rat::zero() {
                    return Err(ReebError::Other(format!(
                        "node {n}: measure vanishes next to the node; cannot realize"
                    )));
                }

                // group by sublevel fraction at s and solve one scale per
                // group so each side's mass is exact
                #[derive(Default)]
                struct Group {
                    pure: usize,          // fraction 1 triangles
                    mid: Vec<usize>,      // strictly straddling
                    sum_below: Rat,
                    sum_above: Rat,
                }
                let mut groups = [Group::default(), Group::default()];
                let mut top: Vec<usize> = Vec::new();
                let mut fracs = vec![Rat::zero(); tris.len()];
                for (i, (tri, side)) in tris.iter().enumerate() {
                    let vals = [
                        b.values[tri[0]].clone(),
                        b.values[tri[1]].clone(),
                        b.values[tri[2]].clone(),
                    ];
                    let f = frac_below(&s, &vals);
                    if f.is_zero() {
                        top.push(i);
                    } else if f.is_one() {
                        groups[*side as usize].pure += 1;
                    } else {
                        let gr = &mut groups[*side as usize];
                        gr.mid.push(i);
                        gr.sum_below += &f;
                        gr.sum_above += Rat::one() - &f;
                    }
                    fracs[i] = f;
                }
                let mut areas = vec![Rat::zero(); tris.len()];
                let mut head_left = head.clone();
                for (gi, rem) in [(0usize, &rem_p), (1usize, &rem_q)] {
                    let gr = &groups[gi];
                    if gr.pure == 0 {
                        return Err(ReebError::Other(format!(
                            "node {n}: saddle template degenerate"
                        )));
                    }
                    let x_mid = if gr.mid.is_empty() {
                        Rat::zero()
                    } else {
                        (rem / (rat_int(2) * &gr.sum_below))
                            .min(&head / (rat_int(8) * &gr.sum_above))
                    };
                    let x_pure = (rem - &x_mid * &gr.sum_below) / rat_int(gr.pure as i64);
                    head_left -= &x_mid * &gr.sum_above;
                    for (i, (_, side)) in tris.iter().enumerate() {
                        if *side as usize == gi {
                            if fracs[i].is_one() {
                                areas[i] = x_pure.clone();
                            } else if !fracs[i].is_zero() {
                                areas[i] = x_mid.clone();
                            }
                        }
                    }
                }
                let x_top = &head_left / rat_int(top.len() as i64);
                for &i in &top {
                    areas[i] = x_top.clone();
                }
                debug_assert!(areas.iter().all(|a| a > &Rat::zero()));

                let batch: Vec<([usize; 3], Rat)> =
                    tris.into_iter().zip(areas).map(|((t, _), a)| (t, a)).collect();
                b.emit(&batch);
                b.emit_mirror(&batch);
            }
        }
    }

    debug_assert!(b.partner.iter().all(|&p| p != usize::MAX));
    let vertices: Vec<(i64, Rat)> =
        b.values.iter().cloned().enumerate().map(|(i, v)| (i as i64, v)).collect();
    let triangles: Vec<[i64; 3]> = b
        .triangles
        .iter()
        .map(|t| [t[0] as i64, t[1] as i64, t[2] as i64])
        .collect();
    let pairs: Vec<(i64, i64)> =
        b.partner.iter().enumerate().map(|(i, &p)| (i as i64, p as i64)).collect();
    SurfaceComplex::new(vertices, triangles, b.areas, pairs)
        .map_err(|e| ReebError::Other(format!("realization produced a bad complex: {e}")))
}

/// Round-trip tolerance matching the deviation guarantee.
pub fn roundtrip_tolerance(g: &MeasuredReebGraph, refinement: u32) -> Result<Rat, ReebError> {
    Ok(g.total_mass()? / rat_int(1i64 << refinement.min(24)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::iso_measured_reeb;
    use crate::fixtures::{figure2_graph, figure3_graph, path_graph, random_graph};
    use crate::mesh::{check_simple_morse_odd, topology_invariants, validate_surface};
    use crate::reeb::measured_reeb_graph;

    fn roundtrip(g: &MeasuredReebGraph, refinement: u32) {
        let s = realize_graph(g, refinement).expect("realize");
        let report = validate_surface(&s);
        assert!(report.is_valid(), "invalid surface: {:?}", report.violations);
        let morse = check_simple_morse_odd(&s);
        assert!(morse.is_empty(), "not simple Morse odd: {morse:?}");
        let h = measured_reeb_graph(&s).expect("sweep");
        let tol = roundtrip_tolerance(g, refinement).unwrap();
        let iso = iso_measured_reeb(&h, g, Some(&tol));
        assert!(iso.is_some(), "round trip not isomorphic within tolerance");
        // node values and total mass reproduce exactly
        assert_eq!(h.total_mass().unwrap(), g.total_mass().unwrap());
    }

    #[test]
    fn path_graph_realizes_to_sphere() {
        let g = path_graph();
        let s = realize_graph(&g, 3).unwrap();
        let (chi_m, _, chi_n, _) = topology_invariants(&s).unwrap();
        assert_eq!(chi_m, 2); // sphere
        assert_eq!(chi_n, 1); // projective plane
        roundtrip(&g, 3);
    }

    #[test]
    fn figure_graphs_realize_to_klein_bottle_covers() {
        for g in [figure2_graph(), figure3_graph()] {
            let s = realize_graph(&g, 3).unwrap();
            let (chi_m, b1_m, chi_n, _) = topology_invariants(&s).unwrap();
            assert_eq!(chi_m, 0); // torus double cover
            assert_eq!(b1_m, 2);
            assert_eq!(chi_n, 0); // Klein bottle
            roundtrip(&g, 3);
        }
    }

    #[test]
    fn random_graphs_roundtrip() {
        for seed in 0..6 {
            let g = random_graph(seed, 4);
            roundtrip(&g, 3);
        }
    }

    #[test]
    fn three_in_saddle_is_rejected() {
        // three parallel strands meeting at a single node on each end: a
        // valid abstract graph, but the node is not a surface saddle
        use crate::fixtures::uniform_edge;
        use crate::rat::rat_int;
        use crate::reeb::{GraphInvolution, ReebNode};
        let nodes = vec![
            ReebNode { f: rat_int(-1), mesh_vertex: None },
            ReebNode { f: rat_int(1), mesh_vertex: None },
        ];
        let edges = vec![
            uniform_edge(0, 1, rat_int(-1), rat_int(1), rat_int(1)),
            uniform_edge(0, 1, rat_int(-1), rat_int(1), rat_int(2)),
            uniform_edge(0, 1, rat_int(-1), rat_int(1), rat_int(1)),
        ];
        let g = crate::reeb::MeasuredReebGraph {
            nodes,
            edges,
            iota: Some(GraphInvolution { nodes: vec![1, 0], edges: vec![2, 1, 0] }),
            cellmap: Vec::new(),
        };
        let err = realize_graph(&g, 2);
        assert!(err.is_err());
    }
}
