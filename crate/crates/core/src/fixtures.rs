//! Named fixtures from the worked examples, plus randomized generators:
//! graph-level pictures (path / Figure 2 / Figure 3), equivariant meshes
//! (perturbed octahedron, vertical and inclined torus, monkey saddle), and
//! seeded random graphs and meshes for property tests.

use crate::mesh::SurfaceComplex;
use crate::rat::{rat, rat_int, Rat};
use crate::reeb::{
    EdgeMeasureProfile, GraphInvolution, MeasuredReebGraph, QuadContribution, ReebEdge, ReebNode,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn node(f: Rat) -> ReebNode {
    ReebNode { f, mesh_vertex: None }
}

/// Edge with a uniform (linear cumulative) measure of the given mass.
pub fn uniform_edge(tail: usize, head: usize, f_lo: Rat, f_hi: Rat, mass: Rat) -> ReebEdge {
    let density = &mass / (&f_hi - &f_lo);
    let p = EdgeMeasureProfile::build(
        f_lo.clone(),
        f_hi.clone(),
        vec![QuadContribution { lo: f_lo, hi: f_hi, quad: [Rat::zero(), density, Rat::zero()] }],
    );
    ReebEdge { tail, head, profile: Some(p) }
}

/// Single edge on [-1, 1] with mass 4, reversed by ι: the RP² picture.
pub fn path_graph() -> MeasuredReebGraph {
    MeasuredReebGraph {
        nodes: vec![node(rat_int(-1)), node(rat_int(1))],
        edges: vec![uniform_edge(0, 1, rat_int(-1), rat_int(1), rat_int(4))],
        iota: Some(GraphInvolution { nodes: vec![1, 0], edges: vec![0] }),
        cellmap: Vec::new(),
    }
}

fn theta_nodes_edges() -> (Vec<ReebNode>, Vec<ReebEdge>) {
    let nodes = vec![
        node(rat_int(-2)),
        node(rat_int(-1)),
        node(rat_int(1)),
        node(rat_int(2)),
    ];
    let edges = vec![
        uniform_edge(0, 1, rat_int(-2), rat_int(-1), rat_int(1)),
        uniform_edge(1, 2, rat_int(-1), rat_int(1), rat_int(2)),
        uniform_edge(1, 2, rat_int(-1), rat_int(1), rat_int(2)),
        uniform_edge(2, 3, rat_int(1), rat_int(2), rat_int(1)),
    ];
    (nodes, edges)
}

/// Height function on the torus, Figure 2: ι swaps the two parallel edges.
/// #Fix = 0, so d = 0 over the Klein bottle.
pub fn figure2_graph() -> MeasuredReebGraph {
    let (nodes, edges) = theta_nodes_edges();
    MeasuredReebGraph {
        nodes,
        edges,
        iota: Some(GraphInvolution { nodes: vec![3, 2, 1, 0], edges: vec![3, 2, 1, 0] }),
        cellmap: Vec::new(),
    }
}

/// Same shape as Figure 2, but ι reverses each parallel edge (Figure 3).
/// #Fix = 2, so d = 1.
pub fn figure3_graph() -> MeasuredReebGraph {
    let (nodes, edges) = theta_nodes_edges();
    MeasuredReebGraph {
        nodes,
        edges,
        iota: Some(GraphInvolution { nodes: vec![3, 2, 1, 0], edges: vec![3, 1, 2, 0] }),
        cellmap: Vec::new(),
    }
}

/// Octahedron with the antipodal vertex map and f = z. Not simple Morse:
/// the four equator vertices share the value 0.
pub fn octahedron() -> SurfaceComplex {
    // ids: 0 = north, 1..=4 = equator, 5 = south; antipode of k is (k+2) on
    // the equator and 0 <-> 5 on the poles.
    let vertices = vec![
        (0, rat_int(1)),
        (1, rat_int(0)),
        (2, rat_int(0)),
        (3, rat_int(0)),
        (4, rat_int(0)),
        (5, rat_int(-1)),
    ];
    let triangles = vec![
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 1],
        [5, 2, 1],
        [5, 3, 2],
        [5, 4, 3],
        [5, 1, 4],
    ];
    let areas = vec![rat_int(1); 8];
    let involution = vec![(0, 5), (5, 0), (1, 3), (3, 1), (2, 4), (4, 2)];
    SurfaceComplex::new(vertices, triangles, areas, involution).unwrap()
}

/// Octahedron with generic odd values: one minimum, one maximum, no saddles.
/// The path graph of Example 4.12; quotient RP².
pub fn perturbed_octahedron() -> SurfaceComplex {
    let vertices = vec![
        (0, rat_int(1)),
        (1, rat(1, 8)),
        (2, rat(1, 4)),
        (3, rat(-1, 8)),
        (4, rat(-1, 4)),
        (5, rat_int(-1)),
    ];
    let triangles = vec![
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 1],
        [5, 2, 1],
        [5, 3, 2],
        [5, 4, 3],
        [5, 1, 4],
    ];
    let areas = vec![rat_int(1); 8];
    let involution = vec![(0, 5), (5, 0), (1, 3), (3, 1), (2, 4), (4, 2)];
    SurfaceComplex::new(vertices, triangles, areas, involution).unwrap()
}

/// Triangulated torus grid Z_n x Z_m with the free orientation-reversing
/// involution I(i, j) = (-i mod n, j + m/2 mod m) and vertex values from
/// `height`. The diagonal pattern flips halfway in i so that I maps
/// triangles to triangles.
fn torus_grid(
    n: i64,
    m: i64,
    height: impl Fn(i64, i64) -> Rat,
) -> SurfaceComplex {
    assert!(n >= 4 && m >= 4 && m % 2 == 0 && n % 2 == 0);
    let id = |i: i64, j: i64| i.rem_euclid(n) * m + j.rem_euclid(m);
    let mut vertices = Vec::new();
    for i in 0..n {
        for j in 0..m {
            vertices.push((id(i, j), height(i, j)));
        }
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in 0..m {
            // cell (i, j) with corners a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1)
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if i < n / 2 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    let areas = vec![rat_int(1); triangles.len()];
    let involution =
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| (id(i, j), id(-i, j + m / 2))).collect();
    SurfaceComplex::new(vertices, triangles, areas, involution).unwrap()
}

/// "Standing" torus: f separates into a radial factor in i and a sign factor
/// in j, so the Reeb graph is Figure 2 and ι swaps the parallel edges.
pub fn vertical_torus(n: i64, m: i64) -> SurfaceComplex {
    // g(i) > 0 even around i = 0; s(j) alternates sign between the two
    // j-halves and never vanishes. f(i,j) = g(i) * s(j) is odd under I.
    torus_grid(n, m, |i, j| {
        let g = radial_profile(i, n);
        let s = sign_profile(j, m);
        g * s + tiny_jitter(i, j, n, m)
    })
}

/// "Inclined" torus: f is dominated by an odd function of i alone, so both
/// parallel edges of the Reeb graph are preserved (and reversed) by ι.
pub fn inclined_torus(n: i64, m: i64) -> SurfaceComplex {
    torus_grid(n, m, |i, j| {
        let b = odd_profile(i, n);
        let c = sign_profile(j, m);
        b + c * rat(1, 100) + tiny_jitter(i, j, n, m)
    })
}

/// Even positive bump in i: large at i = 0, small at i = n/2, asymmetric in
/// shape only through the jitter added by callers.
fn radial_profile(i: i64, n: i64) -> Rat {
    let i = i.rem_euclid(n);
    let k = i.min(n - i); // distance from 0 along the circle
    rat_int(2 * (n / 2 - k) + 1)
}

/// Cosine-like on the j-circle: maximal at j = 0, minimal at j = m/2,
/// anti-periodic s(j + m/2) = -s(j), never zero (the numerator is odd).
fn sign_profile(j: i64, m: i64) -> Rat {
    let j = j.rem_euclid(m);
    if j < m / 2 {
        rat(3 * m - 12 * j + 1, 3 * m)
    } else {
        -sign_profile(j - m / 2, m)
    }
}

/// Odd in i: b(-i) = -b(i), vanishing at i = 0 and i = n/2, and deliberately
/// asymmetric between the two halves so the two Reeb edges get different
/// measure profiles.
fn odd_profile(i: i64, n: i64) -> Rat {
    let i = i.rem_euclid(n);
    if i == 0 || i == n / 2 {
        return Rat::zero();
    }
    if i < n / 2 {
        // roughly tent-shaped on (0, n/2), with a lopsided peak
        rat_int((i.min(n / 2 - i)) * 2 + if 2 * i < n / 2 { 1 } else { 0 })
    } else {
        -odd_profile(n - i, n)
    }
}

/// Small odd tiebreaker, distinct per orbit: keeps vertex values pairwise
/// distinct and nonzero without disturbing the intended Morse structure.
fn tiny_jitter(i: i64, j: i64, n: i64, m: i64) -> Rat {
    let i = i.rem_euclid(n);
    let j = j.rem_euclid(m);
    // pick a canonical orbit representative: I(i,j) = (-i, j + m/2)
    let (oi, oj) = ((-i).rem_euclid(n), (j + m / 2).rem_euclid(m));
    let sign = if (i, j) <= (oi, oj) { 1 } else { -1 };
    let (ri, rj) = if sign == 1 { (i, j) } else { (oi, oj) };
    rat_int(sign) * rat(ri * m + rj + 1, 1_000_000 * n * m)
}

/// Hexagonal bipyramid whose top cone vertex has three lower-link
/// components: a monkey saddle no value perturbation can fix.
pub fn monkey_saddle() -> SurfaceComplex {
    // ring ids 0..6 alternating high/low values, apexes 6 (top) and 7 (bottom)
    let eta = rat(1, 100);
    let mut vertices: Vec<(i64, Rat)> = Vec::new();
    for k in 0..6i64 {
        // antipode on the ring is k+3; make values odd under it
        let base = match k {
            0 => rat_int(2),
            1 => rat_int(-3),
            2 => rat_int(4),
            3 => rat_int(-2),
            4 => rat_int(3),
            _ => rat_int(-4),
        };
        vertices.push((k, base));
    }
    vertices.push((6, eta.clone())); // top apex: monkey saddle
    vertices.push((7, -eta)); // bottom apex
    let mut triangles = Vec::new();
    for k in 0..6i64 {
        let k2 = (k + 1) % 6;
        triangles.push([6, k, k2]);
        triangles.push([7, k2, k]);
    }
    let areas = vec![rat_int(1); triangles.len()];
    let involution = vec![(0, 3), (3, 0), (1, 4), (4, 1), (2, 5), (5, 2), (6, 7), (7, 6)];
    SurfaceComplex::new(vertices, triangles, areas, involution).unwrap()
}

/// Random measured Reeb graph with involution: an upper half built from
/// seeded split/merge events, mirrored to the lower half, glued at f = 0 by
/// a random strand involution. Retries until connected with b₁ ≤ `b1_max`.
pub fn random_graph(seed: u64, b1_max: usize) -> MeasuredReebGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        if let Some(g) = try_random_graph(&mut rng, b1_max) {
            return g;
        }
    }
    // fall back to a picture that always works
    figure3_graph()
}

fn try_random_graph(rng: &mut ChaCha8Rng, b1_max: usize) -> Option<MeasuredReebGraph> {
    // Upper half: k strands crossing f = 0, evolved by events at levels
    // 1, 2, ... Each strand is an open edge; events merge two strands,
    // split one, or cap one with a maximum. All strands are capped by the end.
    let k = rng.gen_range(1..=4usize);
    let mut half_nodes: Vec<Rat> = Vec::new(); // f-values > 0
    let mut half_edges: Vec<(Option<usize>, Option<usize>)> = Vec::new(); // (tail node, head node), None = f=0 end for tails
    let mut open: Vec<usize> = (0..k).collect();
    for _ in 0..k {
        half_edges.push((None, None));
    }
    let mut level = 0i64;
    while !open.is_empty() {
        level += 1;
        if level > 40 {
            return None;
        }
        let f = rat_int(level) + rat(rng.gen_range(1..1000), 2000);
        let choice = rng.gen_range(0..4u8);
        match choice {
            0 if open.len() >= 2 => {
                // merge two strands into one
                let a = open.swap_remove(rng.gen_range(0..open.len()));
                let b = open.swap_remove(rng.gen_range(0..open.len()));
                let n = half_nodes.len();
                half_nodes.push(f);
                half_edges[a].1 = Some(n);
                half_edges[b].1 = Some(n);
                let e = half_edges.len();
                half_edges.push((Some(n), None));
                open.push(e);
            }
            1 => {
                // split one strand in two
                let a = open.swap_remove(rng.gen_range(0..open.len()));
                let n = half_nodes.len();
                half_nodes.push(f);
                half_edges[a].1 = Some(n);
                for _ in 0..2 {
                    let e = half_edges.len();
                    half_edges.push((Some(n), None));
                    open.push(e);
                }
            }
            _ => {
                // cap with a maximum
                let a = open.swap_remove(rng.gen_range(0..open.len()));
                let n = half_nodes.len();
                half_nodes.push(f);
                half_edges[a].1 = Some(n);
            }
        }
    }

    // Gluing involution on the k strands at f = 0.
    let mut pi: Vec<usize> = (0..k).collect();
    let mut order: Vec<usize> = (0..k).collect();
    use rand::seq::SliceRandom;
    order.shuffle(rng);
    let mut it = order.into_iter();
    while let Some(a) = it.next() {
        if pi[a] != a {
            continue;
        }
        if rng.gen_bool(0.5) {
            continue; // leave fixed
        }
        if let Some(b) = it.next() {
            pi[a] = b;
            pi[b] = a;
        }
    }

    // Assemble the full graph: upper-half nodes, mirrored lower-half nodes;
    // each upper-half edge gets a mirror; strand s and its mirror are fused
    // into one edge crossing 0 glued to strand pi(s)'s mirror.
    let hn = half_nodes.len();
    let mut nodes: Vec<ReebNode> = Vec::new();
    for f in &half_nodes {
        nodes.push(node(f.clone()));
    }
    for f in &half_nodes {
        nodes.push(node(-f));
    }
    let upper = |n: usize| n;
    let lower = |n: usize| hn + n;

    // Edges: strands (crossing zero) come first, then non-strand upper
    // edges and their mirrors.
    let mut edges: Vec<ReebEdge> = Vec::new();
    let mut iota_edges: Vec<usize> = Vec::new();
    for s in 0..k {
        let head = half_edges[s].1.unwrap();
        // strand s runs from the mirror of strand pi(s)'s head up to its own head
        let tail = lower(half_edges[pi[s]].1.unwrap());
        edges.push(ReebEdge { tail, head: upper(head), profile: None });
        iota_edges.push(pi[s]);
    }
    let inner: Vec<usize> = (k..half_edges.len()).collect();
    for &he in &inner {
        let (t, h) = (half_edges[he].0.unwrap(), half_edges[he].1.unwrap());
        edges.push(ReebEdge { tail: upper(t), head: upper(h), profile: None });
    }
    for &he in &inner {
        let (t, h) = (half_edges[he].0.unwrap(), half_edges[he].1.unwrap());
        edges.push(ReebEdge { tail: lower(h), head: lower(t), profile: None });
    }
    for i in 0..inner.len() {
        iota_edges.push(k + inner.len() + i);
    }
    for i in 0..inner.len() {
        iota_edges.push(k + i);
    }
    let mut iota_nodes: Vec<usize> = Vec::with_capacity(2 * hn);
    for n in 0..hn {
        iota_nodes.push(lower(n));
    }
    for n in 0..hn {
        iota_nodes.push(upper(n));
    }

    let mut g = MeasuredReebGraph {
        nodes,
        edges,
        iota: Some(GraphInvolution { nodes: iota_nodes, edges: iota_edges }),
        cellmap: Vec::new(),
    };
    if !g.is_connected() {
        return None;
    }
    let b1 = g.edges.len() + 1 - g.nodes.len();
    if b1 > b1_max {
        return None;
    }

    // ι-symmetric random measure: pick profiles on orbit representatives,
    // mirror onto partners; fixed strands get symmetric profiles directly.
    let iota = g.iota.clone().unwrap();
    for e in 0..g.edges.len() {
        if g.edges[e].profile.is_some() {
            continue;
        }
        let f_lo = g.nodes[g.edges[e].tail].f.clone();
        let f_hi = g.nodes[g.edges[e].head].f.clone();
        let p = if iota.edges[e] == e {
            random_symmetric_profile(rng, &f_hi)
        } else {
            random_profile(rng, &f_lo, &f_hi)
        };
        let mirror = p.mirror();
        g.edges[e].profile = Some(p);
        if iota.edges[e] != e {
            g.edges[iota.edges[e]].profile = Some(mirror);
        }
    }
    Some(g)
}

/// Piecewise-uniform random profile: 1 to 3 spans of positive density.
fn random_profile(rng: &mut ChaCha8Rng, f_lo: &Rat, f_hi: &Rat) -> EdgeMeasureProfile {
    let spans = rng.gen_range(1..=3u32);
    let width = f_hi - f_lo;
    let mut contributions = Vec::new();
    for s in 0..spans {
        let lo = f_lo + &width * rat(s as i64, spans as i64);
        let hi = f_lo + &width * rat(s as i64 + 1, spans as i64);
        let density = rat(rng.gen_range(1..8), rng.gen_range(1..4));
        contributions.push(QuadContribution {
            lo,
            hi,
            quad: [Rat::zero(), density, Rat::zero()],
        });
    }
    EdgeMeasureProfile::build(f_lo.clone(), f_hi.clone(), contributions)
}

/// Profile on [-h, h] equal to its own mirror: symmetric density.
fn random_symmetric_profile(rng: &mut ChaCha8Rng, f_hi: &Rat) -> EdgeMeasureProfile {
    let inner = rng.gen_range(1..8i64);
    let outer = rng.gen_range(1..8i64);
    let half = f_hi / rat_int(2);
    let f_lo = -f_hi;
    let contributions = vec![
        QuadContribution {
            lo: f_lo.clone(),
            hi: -&half,
            quad: [Rat::zero(), rat_int(outer), Rat::zero()],
        },
        QuadContribution {
            lo: -&half,
            hi: half.clone(),
            quad: [Rat::zero(), rat_int(inner), Rat::zero()],
        },
        QuadContribution {
            lo: half,
            hi: f_hi.clone(),
            quad: [Rat::zero(), rat_int(outer), Rat::zero()],
        },
    ];
    EdgeMeasureProfile::build(f_lo, f_hi.clone(), contributions)
}

/// Seeded random equivariant mesh: a torus-family member for even seeds, a
/// perturbed sphere for seed 2 mod 4, a realized random graph otherwise.
pub fn random_mesh(seed: u64, refinement: u32) -> SurfaceComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    match seed % 4 {
        0 => {
            let n = 2 * rng.gen_range(2..5i64);
            let m = 2 * rng.gen_range(2..5i64);
            vertical_torus(n, m)
        }
        1 => {
            let n = 2 * rng.gen_range(2..5i64);
            let m = 2 * rng.gen_range(2..5i64);
            inclined_torus(n, m)
        }
        2 => perturbed_octahedron(),
        _ => {
            let g = random_graph(seed.wrapping_mul(31).wrapping_add(7), 4);
            crate::realize::realize_graph(&g, refinement)
                .unwrap_or_else(|_| perturbed_octahedron())
        }
    }
}

/// True when the absolute value of r is at most 1/2^k (used in tests).
pub fn within_pow2(r: &Rat, total: &Rat, k: u32) -> bool {
    r.abs() * rat_int(1 << k.min(62)) <= total.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{check_simple_morse_odd, classify_critical_vertices, validate_surface, CriticalTag};
    use crate::reeb::validate_graph;

    #[test]
    fn octahedron_flags_duplicate_zeros() {
        let s = octahedron();
        let report = validate_surface(&s);
        assert!(report.is_structurally_valid());
        assert!(!report.is_valid());
        assert!(!check_simple_morse_odd(&s).is_empty());
    }

    #[test]
    fn perturbed_octahedron_is_two_critical_sphere() {
        let s = perturbed_octahedron();
        assert!(validate_surface(&s).is_valid());
        assert!(check_simple_morse_odd(&s).is_empty());
        let report = classify_critical_vertices(&s);
        assert_eq!(report.count(CriticalTag::Min), 1);
        assert_eq!(report.count(CriticalTag::Max), 1);
        assert_eq!(report.count(CriticalTag::Saddle), 0);
    }

    #[test]
    fn torus_fixtures_are_valid() {
        for s in [vertical_torus(8, 8), inclined_torus(8, 8)] {
            let report = validate_surface(&s);
            assert!(report.is_valid(), "violations: {:?}", report.violations);
            assert!(check_simple_morse_odd(&s).is_empty());
        }
    }

    #[test]
    fn vertical_torus_critical_counts() {
        let report = classify_critical_vertices(&vertical_torus(8, 8));
        assert_eq!(report.count(CriticalTag::Min), 1);
        assert_eq!(report.count(CriticalTag::Max), 1);
        assert_eq!(report.count(CriticalTag::Saddle), 2);
    }

    #[test]
    fn monkey_saddle_is_degenerate() {
        // both apexes: the involution pairs degenerate points
        let report = classify_critical_vertices(&monkey_saddle());
        assert_eq!(report.count(CriticalTag::Degenerate), 2);
    }

    #[test]
    fn named_graph_fixtures_are_valid() {
        for g in [path_graph(), figure2_graph(), figure3_graph()] {
            assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
        }
    }

    #[test]
    fn random_graphs_are_valid() {
        for seed in 0..30 {
            let g = random_graph(seed, 6);
            let v = validate_graph(&g);
            assert!(v.is_empty(), "seed {seed}: {v:?}");
        }
    }
}
