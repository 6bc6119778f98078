//! Deciding the equivalences: isomorphism of measured Reeb graphs with
//! involution (pseudo-function classification) and of circulation graphs
//! (coadjoint-orbit classification).
//!
//! Node images are forced by the distinct f-values; the only freedom is the
//! permutation of parallel-edge bundles, resolved by backtracking with
//! invariant pruning.

use crate::circulation::CirculationGraph;
use crate::rat::Rat;
use crate::reeb::MeasuredReebGraph;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// An explicit isomorphism: images of nodes and edges of the first graph in
/// the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Cheap isomorphism invariants: on mismatch the graphs cannot be
/// isomorphic and the search is skipped.
fn invariants_match(g1: &MeasuredReebGraph, g2: &MeasuredReebGraph) -> bool {
    if g1.nodes.len() != g2.nodes.len() || g1.edges.len() != g2.edges.len() {
        return false;
    }
    let values = |g: &MeasuredReebGraph| sorted(g.nodes.iter().map(|n| n.f.clone()).collect());
    if values(g1) != values(g2) {
        return false;
    }
    let fixes = |g: &MeasuredReebGraph| g.fixed_edge_count().ok();
    if fixes(g1) != fixes(g2) {
        return false;
    }
    let masses = |g: &MeasuredReebGraph| -> Option<Vec<Rat>> {
        let mut m = Vec::new();
        for e in 0..g.edges.len() {
            m.push(g.profile(e).ok()?.mass());
        }
        Some(sorted(m))
    };
    // without tolerance, sorted masses must agree exactly
    masses(g1) == masses(g2)
}

fn profiles_close(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    e1: usize,
    e2: usize,
    tol: Option<&Rat>,
) -> bool {
    let (Ok(p1), Ok(p2)) = (g1.profile(e1), g2.profile(e2)) else {
        return false;
    };
    match p1.sup_distance(p2) {
        None => false,
        Some(d) => match tol {
            None => d.is_zero(),
            Some(t) => &d <= t,
        },
    }
}

/// Searches for an isomorphism φ with φ∘ι₁ = ι₂∘φ, f preserved exactly and
/// profiles equal (exactly, or within `tol` when given — realize round
/// trips). Returns the mapping, or `None` when not isomorphic.
pub fn iso_measured_reeb(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    tol: Option<&Rat>,
) -> Option<GraphIso> {
    // with a tolerance, masses may differ slightly; skip the exact-mass prune
    if tol.is_none() && !invariants_match(g1, g2) {
        return None;
    }
    if g1.nodes.len() != g2.nodes.len() || g1.edges.len() != g2.edges.len() {
        return None;
    }

    // node map forced by distinct f-values
    let mut by_value: HashMap<&Rat, usize> = HashMap::new();
    for (n, node) in g2.nodes.iter().enumerate() {
        if by_value.insert(&node.f, n).is_some() {
            return None; // duplicate values: not a valid graph
        }
    }
    let mut node_map = Vec::with_capacity(g1.nodes.len());
    for node in &g1.nodes {
        node_map.push(*by_value.get(&node.f)?);
    }

    // bundle parallel edges by their mapped endpoints
    let mut bundles2: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, edge) in g2.edges.iter().enumerate() {
        bundles2.entry((edge.tail, edge.head)).or_default().push(e);
    }
    let mut bundles1: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, edge) in g1.edges.iter().enumerate() {
        bundles1
            .entry((node_map[edge.tail], node_map[edge.head]))
            .or_default()
            .push(e);
    }
    if bundles1.len() != bundles2.len() {
        return None;
    }
    let mut order: Vec<usize> = Vec::new(); // g1 edges in bundle order
    let mut candidates: Vec<Vec<usize>> = Vec::new(); // per g1 edge, g2 bundle
    for (key, es) in &bundles1 {
        let Some(target) = bundles2.get(key) else {
            return None;
        };
        if target.len() != es.len() {
            return None;
        }
        for &e in es {
            order.push(e);
            candidates.push(target.clone());
        }
    }

    let mut edge_map = vec![usize::MAX; g1.edges.len()];
    let mut used = vec![false; g2.edges.len()];
    if assign_edges(g1, g2, tol, &order, &candidates, 0, &mut edge_map, &mut used) {
        Some(GraphIso { nodes: node_map, edges: edge_map })
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_edges(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    tol: Option<&Rat>,
    order: &[usize],
    candidates: &[Vec<usize>],
    at: usize,
    edge_map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if at == order.len() {
        // the involution must commute with the mapping
        return match (g1.iota.as_ref(), g2.iota.as_ref()) {
            (Some(i1), Some(i2)) => (0..g1.edges.len())
                .all(|e| edge_map[i1.edges[e]] == i2.edges[edge_map[e]]),
            (None, None) => true,
            _ => false,
        };
    }
    let e1 = order[at];
    for &e2 in &candidates[at] {
        if used[e2] || !profiles_close(g1, g2, e1, e2, tol) {
            continue;
        }
        // partial involution consistency
        if let (Some(i1), Some(i2)) = (g1.iota.as_ref(), g2.iota.as_ref()) {
            let p1 = i1.edges[e1];
            if edge_map[p1] != usize::MAX && edge_map[p1] != i2.edges[e2] {
                continue;
            }
        }
        edge_map[e1] = e2;
        used[e2] = true;
        if assign_edges(g1, g2, tol, order, candidates, at + 1, edge_map, used) {
            return true;
        }
        edge_map[e1] = usize::MAX;
        used[e2] = false;
    }
    false
}

/// Isomorphism of circulation graphs: a base isomorphism that additionally
/// carries cref to cref (exactly, or within `tol`).
pub fn iso_circulation_graph(
    c1: &CirculationGraph,
    c2: &CirculationGraph,
    tol: Option<&Rat>,
) -> Option<GraphIso> {
    // enumerate base isomorphisms until one preserves C
    let iso = iso_measured_reeb_filtered(&c1.base, &c2.base, tol, &mut |iso: &GraphIso| {
        (0..c1.base.edges.len()).all(|e| {
            let d = &c1.cref[e] - &c2.cref[iso.edges[e]];
            match tol {
                None => d.is_zero(),
                Some(t) => &d.abs() <= t,
            }
        })
    });
    iso
}

/// Like [`iso_measured_reeb`] but only accepts mappings passing `accept`,
/// continuing the search otherwise.
pub fn iso_measured_reeb_filtered(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    tol: Option<&Rat>,
    accept: &mut dyn FnMut(&GraphIso) -> bool,
) -> Option<GraphIso> {
    if tol.is_none() && !invariants_match(g1, g2) {
        return None;
    }
    if g1.nodes.len() != g2.nodes.len() || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let mut by_value: HashMap<&Rat, usize> = HashMap::new();
    for (n, node) in g2.nodes.iter().enumerate() {
        if by_value.insert(&node.f, n).is_some() {
            return None;
        }
    }
    let mut node_map = Vec::with_capacity(g1.nodes.len());
    for node in &g1.nodes {
        node_map.push(*by_value.get(&node.f)?);
    }
    let mut bundles2: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, edge) in g2.edges.iter().enumerate() {
        bundles2.entry((edge.tail, edge.head)).or_default().push(e);
    }
    let mut order = Vec::new();
    let mut candidates = Vec::new();
    {
        let mut bundles1: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (e, edge) in g1.edges.iter().enumerate() {
            bundles1
                .entry((node_map[edge.tail], node_map[edge.head]))
                .or_default()
                .push(e);
        }
        if bundles1.len() != bundles2.len() {
            return None;
        }
        for (key, es) in &bundles1 {
            let Some(target) = bundles2.get(key) else {
                return None;
            };
            if target.len() != es.len() {
                return None;
            }
            for &e in es {
                order.push(e);
                candidates.push(target.clone());
            }
        }
    }
    let mut edge_map = vec![usize::MAX; g1.edges.len()];
    let mut used = vec![false; g2.edges.len()];
    let mut found: Option<GraphIso> = None;
    search_all(
        g1,
        g2,
        tol,
        &order,
        &candidates,
        0,
        &mut edge_map,
        &mut used,
        &mut |em: &[usize]| {
            let iso = GraphIso { nodes: node_map.clone(), edges: em.to_vec() };
            if accept(&iso) {
                found = Some(iso);
                true
            } else {
                false
            }
        },
    );
    found
}

#[allow(clippy::too_many_arguments)]
fn search_all(
    g1: &MeasuredReebGraph,
    g2: &MeasuredReebGraph,
    tol: Option<&Rat>,
    order: &[usize],
    candidates: &[Vec<usize>],
    at: usize,
    edge_map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    on_complete: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if at == order.len() {
        let commutes = match (g1.iota.as_ref(), g2.iota.as_ref()) {
            (Some(i1), Some(i2)) => (0..g1.edges.len())
                .all(|e| edge_map[i1.edges[e]] == i2.edges[edge_map[e]]),
            (None, None) => true,
            _ => false,
        };
        return commutes && on_complete(edge_map);
    }
    let e1 = order[at];
    for e2 in candidates[at].clone() {
        if used[e2] || !profiles_close(g1, g2, e1, e2, tol) {
            continue;
        }
        if let (Some(i1), Some(i2)) = (g1.iota.as_ref(), g2.iota.as_ref()) {
            let p1 = i1.edges[e1];
            if edge_map[p1] != usize::MAX && edge_map[p1] != i2.edges[e2] {
                continue;
            }
        }
        edge_map[e1] = e2;
        used[e2] = true;
        if search_all(g1, g2, tol, order, candidates, at + 1, edge_map, used, on_complete) {
            return true;
        }
        edge_map[e1] = usize::MAX;
        used[e2] = false;
    }
    false
}

/// A relabeled copy of g under seeded node and edge permutations; used to
/// exercise the isomorphism search.
pub fn relabel_graph(g: &MeasuredReebGraph, seed: u64) -> (MeasuredReebGraph, GraphIso) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut node_perm: Vec<usize> = (0..g.nodes.len()).collect();
    node_perm.shuffle(&mut rng);
    let mut edge_perm: Vec<usize> = (0..g.edges.len()).collect();
    edge_perm.shuffle(&mut rng);

    let mut nodes = vec![g.nodes[0].clone(); g.nodes.len()];
    for (old, &new) in node_perm.iter().enumerate() {
        nodes[new] = g.nodes[old].clone();
    }
    let mut edges = vec![g.edges[0].clone(); g.edges.len()];
    for (old, &new) in edge_perm.iter().enumerate() {
        let mut e = g.edges[old].clone();
        e.tail = node_perm[e.tail];
        e.head = node_perm[e.head];
        edges[new] = e;
    }
    let iota = g.iota.as_ref().map(|i| crate::reeb::GraphInvolution {
        nodes: {
            let mut v = vec![0; g.nodes.len()];
            for n in 0..g.nodes.len() {
                v[node_perm[n]] = node_perm[i.nodes[n]];
            }
            v
        },
        edges: {
            let mut v = vec![0; g.edges.len()];
            for e in 0..g.edges.len() {
                v[edge_perm[e]] = edge_perm[i.edges[e]];
            }
            v
        },
    });
    (
        MeasuredReebGraph { nodes, edges, iota, cellmap: Vec::new() },
        GraphIso { nodes: node_perm, edges: edge_perm },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulation::solve_circulation_space;
    use crate::fixtures::{figure2_graph, figure3_graph, random_graph};
    use crate::rat::{rat, rat_int};

    #[test]
    fn relabeled_copy_is_isomorphic() {
        for seed in 0..10 {
            let g = random_graph(seed, 5);
            let (h, perm) = relabel_graph(&g, seed ^ 99);
            let iso = iso_measured_reeb(&g, &h, None).expect("must be isomorphic");
            assert_eq!(iso.nodes, perm.nodes);
        }
    }

    #[test]
    fn mass_change_breaks_isomorphism() {
        let g = figure2_graph();
        let mut h = figure2_graph();
        // double the measure on one middle edge
        let p = h.edges[1].profile.as_mut().unwrap();
        for piece in &mut p.pieces {
            for c in piece.iter_mut() {
                *c *= rat_int(2);
            }
        }
        assert!(iso_measured_reeb(&g, &h, None).is_none());
    }

    #[test]
    fn figure2_vs_figure3_not_isomorphic() {
        // identical f and measures; distinguished only by the involution
        assert!(iso_measured_reeb(&figure2_graph(), &figure3_graph(), None).is_none());
    }

    #[test]
    fn circulation_orbit_separation() {
        // Figure 3: d = 1; shifting cref by a nonzero homogeneous element
        // changes the orbit
        let g = figure3_graph();
        let (c, basis) = solve_circulation_space(&g).unwrap();
        assert_eq!(basis.len(), 1);
        let mut shifted = c.clone();
        for (e, delta) in basis[0].iter().enumerate() {
            shifted.cref[e] += delta * rat(7, 2);
        }
        assert!(shifted.check().unwrap().is_empty());
        assert!(iso_circulation_graph(&c, &shifted, None).is_none());
        assert!(iso_circulation_graph(&c, &c, None).is_some());
    }

    #[test]
    fn figure2_circulations_all_isomorphic() {
        // d = 0: the solution is unique, so any two valid assignments agree
        let g = figure2_graph();
        let (c, basis) = solve_circulation_space(&g).unwrap();
        assert!(basis.is_empty());
        let (c2, _) = solve_circulation_space(&g).unwrap();
        assert!(iso_circulation_graph(&c, &c2, None).is_some());
    }
}
