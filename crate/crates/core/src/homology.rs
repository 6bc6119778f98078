//! Homological invariants of the Reeb graph with involution: b₁(Γ), the
//! induced action ι_* on H₁, its even/odd eigenspace dimensions, the
//! fixed-point count, the Hopf trace identity, and the orbit-moduli
//! dimension d = (#Fix + b₁ − 1)/2.

use crate::linalg::Matrix;
use crate::rat::rat_int;
use crate::reeb::MeasuredReebGraph;

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no involution data")]
    MissingInvolution,
    #[error("involution fixes node {0} (f cannot be odd there)")]
    FixedNode(usize),
    #[error("fix_count + b1 - 1 = {0} is odd; corrupted involution")]
    ParityViolation(i64),
    #[error("b1(Gamma) = {got} does not match b1(N) = {want}")]
    BettiMismatch { got: i64, want: i64 },
}

/// Invariants of the ι-action on H₁(Γ): eigenspace dimensions, fixed points,
/// a fundamental cycle basis and the action matrix in that basis.
#[derive(Debug, Clone)]
pub struct InvolutionHomology {
    pub b1: usize,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub fix_count: usize,
    /// One fundamental cycle per co-tree edge, as signed edge chains.
    pub cycle_basis: Vec<Vec<(usize, i8)>>,
    /// Matrix of ι_* in the cycle basis (columns are images).
    pub action: Matrix,
}

pub fn graph_first_betti(g: &MeasuredReebGraph) -> Result<usize, HomologyError> {
    if !g.is_connected() {
        return Err(HomologyError::Disconnected);
    }
    Ok(g.edges.len() + 1 - g.nodes.len())
}

/// Number of ι-fixed edges; each carries exactly one fixed point, at f = 0.
pub fn count_fixed_points(g: &MeasuredReebGraph) -> Result<usize, HomologyError> {
    let iota = g.iota.as_ref().ok_or(HomologyError::MissingInvolution)?;
    if let Some(n) = (0..g.nodes.len()).find(|&n| iota.nodes[n] == n) {
        return Err(HomologyError::FixedNode(n));
    }
    Ok(iota.edges.iter().enumerate().filter(|&(e, &ie)| e == ie).count())
}

/// Spanning tree edges, lowest edge id first, plus parent links rooted at 0.
/// Returns (tree membership per edge, per-node (parent node, edge, sign)).
fn spanning_tree(g: &MeasuredReebGraph) -> (Vec<bool>, Vec<Option<(usize, usize, i8)>>) {
    let n = g.nodes.len();
    let mut in_tree = vec![false; g.edges.len()];
    let mut uf = crate::mesh::UnionFind::new(n);
    for (e, edge) in g.edges.iter().enumerate() {
        if uf.union(edge.tail, edge.head) {
            in_tree[e] = true;
        }
    }
    // parent links by BFS over tree edges from node 0
    let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); n];
    for (e, edge) in g.edges.iter().enumerate() {
        if in_tree[e] {
            adj[edge.tail].push((edge.head, e, 1));
            adj[edge.head].push((edge.tail, e, -1));
        }
    }
    let mut parent: Vec<Option<(usize, usize, i8)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, e, sign) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                // walking the edge from u to v uses it with `sign`
                parent[v] = Some((u, e, sign));
                queue.push_back(v);
            }
        }
    }
    (in_tree, parent)
}

/// Signed-edge path from `from` up/down the tree to `to` (as 1-chain coeffs).
fn tree_path(parent: &[Option<(usize, usize, i8)>], from: usize, to: usize, n_edges: usize) -> Vec<i64> {
    let depth = |mut v: usize| {
        let mut d = 0;
        while let Some((p, _, _)) = parent[v] {
            v = p;
            d += 1;
        }
        d
    };
    let mut coeffs = vec![0i64; n_edges];
    let (mut a, mut b) = (from, to);
    let (mut da, mut db) = (depth(a), depth(b));
    // walk `from` upward adds edges reversed, walk `to` upward adds them forward
    while da > db {
        let (p, e, sign) = parent[a].unwrap();
        coeffs[e] -= sign as i64;
        a = p;
        da -= 1;
    }
    while db > da {
        let (p, e, sign) = parent[b].unwrap();
        coeffs[e] += sign as i64;
        b = p;
        db -= 1;
    }
    while a != b {
        let (pa, ea, sa) = parent[a].unwrap();
        let (pb, eb, sb) = parent[b].unwrap();
        coeffs[ea] -= sa as i64;
        coeffs[eb] += sb as i64;
        a = pa;
        b = pb;
    }
    coeffs
}

/// Computes the ι_* action on H₁(Γ) in a fundamental cycle basis and the
/// even/odd eigenspace dimensions, exactly over the rationals.
pub fn involution_h1_action(g: &MeasuredReebGraph) -> Result<InvolutionHomology, HomologyError> {
    let b1 = graph_first_betti(g)?;
    let iota = g.iota.as_ref().ok_or(HomologyError::MissingInvolution)?;
    let fix_count = count_fixed_points(g)?;
    let n_edges = g.edges.len();

    let (in_tree, parent) = spanning_tree(g);
    let co_edges: Vec<usize> = (0..n_edges).filter(|&e| !in_tree[e]).collect();
    debug_assert_eq!(co_edges.len(), b1);

    // fundamental cycle of co-edge e = e followed by the tree path head -> tail
    let mut cycles: Vec<Vec<i64>> = Vec::with_capacity(b1);
    for &e in &co_edges {
        let mut c = tree_path(&parent, g.edges[e].head, g.edges[e].tail, n_edges);
        c[e] += 1;
        cycles.push(c);
    }

    // ι on 1-chains reverses orientation: ι_#(e) = -ι(e).
    let push = |c: &[i64]| {
        let mut out = vec![0i64; n_edges];
        for (e, &coeff) in c.iter().enumerate() {
            out[iota.edges[e]] -= coeff;
        }
        out
    };

    // In a fundamental basis, a cycle's coordinates are its coefficients on
    // the co-tree edges.
    let mut action = Matrix::zero(b1, b1);
    for (j, c) in cycles.iter().enumerate() {
        let img = push(c);
        for (i, &ce) in co_edges.iter().enumerate() {
            action[(i, j)] = rat_int(img[ce]);
        }
        // the image must be recovered exactly from its coordinates
        let mut recon = vec![0i64; n_edges];
        for (i, ci) in cycles.iter().enumerate() {
            let a = img[co_edges[i]];
            for (e, &v) in ci.iter().enumerate() {
                recon[e] += a * v;
            }
        }
        debug_assert_eq!(recon, img, "image cycle left the cycle space");
    }

    let shifted = |sign: i64| {
        let mut m = action.clone();
        for i in 0..b1 {
            let v = m[(i, i)].clone() + rat_int(sign);
            m[(i, i)] = v;
        }
        m.rank()
    };
    let dim_even = b1 - shifted(-1); // ker(A - I)
    let dim_odd = b1 - shifted(1); // ker(A + I)

    let cycle_basis = cycles
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(e, &v)| (e, v as i8))
                .collect()
        })
        .collect();

    let h = InvolutionHomology { b1, dim_even, dim_odd, fix_count, cycle_basis, action };
    debug_assert_eq!(h.dim_even + h.dim_odd, h.b1);
    Ok(h)
}

impl InvolutionHomology {
    /// Hopf trace identity: #Fix = 1 - dim_even + dim_odd.
    pub fn hopf_identity_holds(&self) -> bool {
        self.fix_count as i64 == 1 - self.dim_even as i64 + self.dim_odd as i64
    }

    /// Parity constraint: #Fix ≡ b₁ + 1 (mod 2).
    pub fn parity_holds(&self) -> bool {
        (self.fix_count as i64 - self.b1 as i64 - 1) % 2 == 0
    }
}

/// The dimension d = (#Fix + b₁ − 1)/2 of the affine space of coadjoint
/// orbits over one measured Reeb graph. When `b1_n` is given it must equal
/// b₁(Γ) (compatibility with the quotient surface).
pub fn orbit_moduli_dimension(
    g: &MeasuredReebGraph,
    b1_n: Option<i64>,
) -> Result<usize, HomologyError> {
    let h = involution_h1_action(g)?;
    if let Some(want) = b1_n {
        if h.b1 as i64 != want {
            return Err(HomologyError::BettiMismatch { got: h.b1 as i64, want });
        }
    }
    let num = h.fix_count as i64 + h.b1 as i64 - 1;
    if num % 2 != 0 {
        return Err(HomologyError::ParityViolation(num));
    }
    let d = (num / 2) as usize;
    assert_eq!(d, h.dim_odd, "closed formula disagrees with the odd eigenspace");
    assert!(2 * d as i64 >= h.b1 as i64 - 1 && d <= h.b1, "moduli bounds violated");
    Ok(d)
}

/// Independent b₁ oracle: co-edge count of a randomized-order spanning tree.
pub fn betti_oracle(g: &MeasuredReebGraph, seed: u64) -> usize {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.shuffle(&mut rng);
    let mut uf = crate::mesh::UnionFind::new(g.nodes.len());
    let mut co = 0;
    for e in order {
        if !uf.union(g.edges[e].tail, g.edges[e].head) {
            co += 1;
        }
    }
    co
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{figure2_graph, figure3_graph, path_graph};

    #[test]
    fn betti_numbers() {
        assert_eq!(graph_first_betti(&path_graph()).unwrap(), 0);
        assert_eq!(graph_first_betti(&figure2_graph()).unwrap(), 1);
        assert_eq!(betti_oracle(&figure2_graph(), 7), 1);
    }

    #[test]
    fn fixed_points() {
        assert_eq!(count_fixed_points(&path_graph()).unwrap(), 1);
        assert_eq!(count_fixed_points(&figure2_graph()).unwrap(), 0);
        assert_eq!(count_fixed_points(&figure3_graph()).unwrap(), 2);
    }

    #[test]
    fn eigenspaces_and_moduli() {
        let h2 = involution_h1_action(&figure2_graph()).unwrap();
        assert_eq!((h2.dim_even, h2.dim_odd), (1, 0));
        assert!(h2.hopf_identity_holds() && h2.parity_holds());
        assert_eq!(orbit_moduli_dimension(&figure2_graph(), Some(1)).unwrap(), 0);

        let h3 = involution_h1_action(&figure3_graph()).unwrap();
        assert_eq!((h3.dim_even, h3.dim_odd), (0, 1));
        assert!(h3.hopf_identity_holds() && h3.parity_holds());
        assert_eq!(orbit_moduli_dimension(&figure3_graph(), Some(1)).unwrap(), 1);

        let hp = involution_h1_action(&path_graph()).unwrap();
        assert_eq!((hp.dim_even, hp.dim_odd), (0, 0));
        assert_eq!(orbit_moduli_dimension(&path_graph(), Some(0)).unwrap(), 0);
    }
}
