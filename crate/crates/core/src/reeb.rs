//! Measured Reeb graphs with involution, computed from equivariant simple
//! PL Morse data by an ascending sweep.
//!
//! The sweep processes vertices in increasing f-order, maintaining the
//! connected components of the level set with a union-find structure over
//! crossing mesh edges. Pushforward measures are exact piecewise quadratics:
//! a linearly interpolated f on a triangle makes the sublevel area a
//! quadratic function of the level.

use crate::mesh::{
    classify_critical_vertices, check_simple_morse_odd, CriticalTag, SurfaceComplex, TriIdx,
    UnionFind, VertexIdx,
};
use crate::rat::{fmt_rat, rat_int, Rat};
use num_traits::{Signed, Zero};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum ReebError {
    #[error("input is not simple Morse odd: {0}")]
    NotSimpleMorse(String),
    #[error("sweep event at vertex {0} produced an invalid valence")]
    BadValence(i64),
    #[error("graph has no involution data")]
    MissingInvolution,
    #[error("graph has no measure profiles")]
    MissingProfiles,
    #[error("involution does not permute level components consistently (edge {0})")]
    InconsistentInvolution(usize),
    #[error("level {0} equals a vertex value")]
    LevelAtVertex(String),
    #[error("{0}")]
    Other(String),
}

/// Exact cumulative measure of one graph edge: m(t) = mu{ f <= t } on the
/// edge, a continuous non-decreasing piecewise quadratic on [f_lo, f_hi].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMeasureProfile {
    pub f_lo: Rat,
    pub f_hi: Rat,
    /// Sorted breakpoints strictly inside (f_lo, f_hi).
    pub breaks: Vec<Rat>,
    /// Coefficients (a, b, c) with m(t) = a t^2 + b t + c per piece;
    /// `pieces.len() == breaks.len() + 1`.
    pub pieces: Vec<[Rat; 3]>,
}

/// One contribution to a cumulative profile: a quadratic Q valid on
/// [lo, hi], entering as Q(t) - Q(lo) inside the interval and saturating at
/// Q(hi) - Q(lo) above it.
#[derive(Debug, Clone)]
pub struct QuadContribution {
    pub lo: Rat,
    pub hi: Rat,
    pub quad: [Rat; 3],
}

fn eval_quad(q: &[Rat; 3], t: &Rat) -> Rat {
    (&q[0] * t + &q[1]) * t + &q[2]
}

impl EdgeMeasureProfile {
    pub fn zero(f_lo: Rat, f_hi: Rat) -> Self {
        EdgeMeasureProfile {
            f_lo,
            f_hi,
            breaks: Vec::new(),
            pieces: vec![[Rat::zero(), Rat::zero(), Rat::zero()]],
        }
    }

    /// Assembles a cumulative profile on [f_lo, f_hi] from saturating
    /// quadratic contributions.
    pub fn build(f_lo: Rat, f_hi: Rat, mut contributions: Vec<QuadContribution>) -> Self {
        contributions.retain(|c| c.lo < c.hi);
        let mut cuts: Vec<Rat> = contributions
            .iter()
            .flat_map(|c| [c.lo.clone(), c.hi.clone()])
            .filter(|t| t > &f_lo && t < &f_hi)
            .collect();
        cuts.sort();
        cuts.dedup();

        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(f_lo.clone());
        bounds.extend(cuts.iter().cloned());
        bounds.push(f_hi.clone());

        // event sweep: a contribution activates as Q(t) - Q(lo) at its lo
        // and saturates to the constant Q(hi) - Q(lo) at its hi
        let mut events: Vec<(Rat, usize, bool)> = Vec::with_capacity(2 * contributions.len());
        for (i, c) in contributions.iter().enumerate() {
            events.push((c.lo.clone(), i, false));
            events.push((c.hi.clone(), i, true));
        }
        events.sort_by(|a, b| a.0.cmp(&b.0));
        let mut next = 0usize;
        let mut acc = [Rat::zero(), Rat::zero(), Rat::zero()];
        let mut pieces = Vec::with_capacity(bounds.len() - 1);
        for w in bounds.windows(2) {
            let s0 = &w[0];
            while next < events.len() && &events[next].0 <= s0 {
                let (_, i, is_hi) = &events[next];
                let c = &contributions[*i];
                if *is_hi {
                    acc[0] -= &c.quad[0];
                    acc[1] -= &c.quad[1];
                    acc[2] += eval_quad(&c.quad, &c.hi) - &c.quad[2];
                } else {
                    acc[0] += &c.quad[0];
                    acc[1] += &c.quad[1];
                    acc[2] += &c.quad[2] - eval_quad(&c.quad, &c.lo);
                }
                next += 1;
            }
            pieces.push(acc.clone());
        }
        EdgeMeasureProfile { f_lo, f_hi, breaks: cuts, pieces }
    }

    fn piece_bounds(&self, i: usize) -> (Rat, Rat) {
        let lo = if i == 0 { self.f_lo.clone() } else { self.breaks[i - 1].clone() };
        let hi = if i == self.pieces.len() - 1 {
            self.f_hi.clone()
        } else {
            self.breaks[i].clone()
        };
        (lo, hi)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        if t <= &self.f_lo {
            return Rat::zero();
        }
        let t = if t >= &self.f_hi { &self.f_hi } else { t };
        let i = self.breaks.partition_point(|b| b < t);
        eval_quad(&self.pieces[i], t)
    }

    pub fn mass(&self) -> Rat {
        self.eval(&self.f_hi.clone())
    }

    /// Integral of t dm(t) over the edge: the flux of f against the measure.
    pub fn flux(&self) -> Rat {
        self.partial_flux(&self.f_hi.clone())
    }

    /// Integral of s dm(s) from f_lo to t.
    pub fn partial_flux(&self, t: &Rat) -> Rat {
        self.weighted_integral(1, t)
    }

    /// Integral of s^k dm(s) over the whole edge.
    pub fn moment(&self, k: u32) -> Rat {
        self.weighted_integral(k, &self.f_hi.clone())
    }

    fn weighted_integral(&self, k: u32, upto: &Rat) -> Rat {
        // m'(s) = 2a s + b on each piece, so the integrand s^k m'(s) has
        // antiderivative 2a s^{k+2}/(k+2) + b s^{k+1}/(k+1).
        let anti = |q: &[Rat; 3], s: &Rat| {
            let sk1 = num_traits::pow::pow(s.clone(), (k + 1) as usize);
            let sk2 = &sk1 * s;
            &q[0] * rat_int(2) * sk2 / rat_int((k + 2) as i64) + &q[1] * sk1 / rat_int((k + 1) as i64)
        };
        let upto = if upto > &self.f_hi { &self.f_hi } else { upto };
        let mut total = Rat::zero();
        for (i, q) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.piece_bounds(i);
            if upto <= &lo {
                break;
            }
            let hi = if upto < &hi { upto.clone() } else { hi };
            total += anti(q, &hi) - anti(q, &lo);
        }
        total
    }

    /// The profile the involution forces on the partner edge:
    /// m'(t) = mass - m(-t) on [-f_hi, -f_lo].
    pub fn mirror(&self) -> EdgeMeasureProfile {
        let mass = self.mass();
        let mut breaks: Vec<Rat> = self.breaks.iter().map(|b| -b).collect();
        breaks.reverse();
        let mut pieces: Vec<[Rat; 3]> = self
            .pieces
            .iter()
            .map(|q| [-&q[0], q[1].clone(), &mass - &q[2]])
            .collect();
        pieces.reverse();
        EdgeMeasureProfile { f_lo: -&self.f_hi, f_hi: -&self.f_lo, breaks, pieces }
    }

    /// Sup-norm distance to another profile over the shared domain; the two
    /// must cover the same f-interval.
    pub fn sup_distance(&self, other: &EdgeMeasureProfile) -> Option<Rat> {
        if self.f_lo != other.f_lo || self.f_hi != other.f_hi {
            return None;
        }
        let mut cuts: Vec<Rat> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let mut bounds = vec![self.f_lo.clone()];
        bounds.extend(cuts);
        bounds.push(self.f_hi.clone());

        let piece_at = |p: &EdgeMeasureProfile, t: &Rat| {
            let i = p.breaks.partition_point(|b| b <= t);
            p.pieces[i].clone()
        };
        let mut best = Rat::zero();
        for w in bounds.windows(2) {
            let (s0, s1) = (&w[0], &w[1]);
            if s0 >= s1 {
                continue;
            }
            let qa = piece_at(self, s0);
            let qb = piece_at(other, s0);
            let d = [&qa[0] - &qb[0], &qa[1] - &qb[1], &qa[2] - &qb[2]];
            let mut candidates = vec![eval_quad(&d, s0), eval_quad(&d, s1)];
            if !d[0].is_zero() {
                let vertex = -&d[1] / (rat_int(2) * &d[0]);
                if &vertex > s0 && &vertex < s1 {
                    candidates.push(eval_quad(&d, &vertex));
                }
            }
            for c in candidates {
                let c = c.abs();
                if c > best {
                    best = c;
                }
            }
        }
        Some(best)
    }

    pub fn same_function(&self, other: &EdgeMeasureProfile) -> bool {
        matches!(self.sup_distance(other), Some(d) if d.is_zero())
    }

    /// Structural sanity: starts at zero, continuous, non-decreasing,
    /// positive total mass.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.f_lo >= self.f_hi {
            out.push("empty f-interval".into());
        }
        if !self.eval(&self.f_lo.clone()).is_zero() {
            out.push("m(f_lo) != 0".into());
        }
        if self.mass() <= Rat::zero() {
            out.push("total edge mass is not positive".into());
        }
        for i in 0..self.pieces.len() {
            let (lo, hi) = self.piece_bounds(i);
            // continuity at the left boundary
            if i > 0 {
                let prev = eval_quad(&self.pieces[i - 1], &lo);
                let here = eval_quad(&self.pieces[i], &lo);
                if prev != here {
                    out.push(format!("discontinuity at {}", fmt_rat(&lo)));
                }
            }
            // derivative 2a t + b is linear: checking both ends suffices
            let q = &self.pieces[i];
            for t in [&lo, &hi] {
                if rat_int(2) * &q[0] * t + &q[1] < Rat::zero() {
                    out.push(format!("decreasing near {}", fmt_rat(t)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ReebNode {
    pub f: Rat,
    /// Mesh critical vertex this node came from, when mesh-derived.
    pub mesh_vertex: Option<VertexIdx>,
}

#[derive(Debug, Clone)]
pub struct ReebEdge {
    pub tail: usize,
    pub head: usize,
    pub profile: Option<EdgeMeasureProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphInvolution {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// One f-interval of a mesh triangle assigned to a graph edge.
#[derive(Debug, Clone)]
pub struct CellPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub edge: usize,
}

#[derive(Debug, Clone)]
pub struct MeasuredReebGraph {
    pub nodes: Vec<ReebNode>,
    pub edges: Vec<ReebEdge>,
    pub iota: Option<GraphInvolution>,
    /// Per mesh triangle, its assignment history; empty for graphs not
    /// derived from a mesh.
    pub cellmap: Vec<Vec<CellPiece>>,
}

impl MeasuredReebGraph {
    pub fn valence(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == node || e.head == node).count()
    }

    pub fn iota(&self) -> Result<&GraphInvolution, ReebError> {
        self.iota.as_ref().ok_or(ReebError::MissingInvolution)
    }

    pub fn profile(&self, e: usize) -> Result<&EdgeMeasureProfile, ReebError> {
        self.edges[e].profile.as_ref().ok_or(ReebError::MissingProfiles)
    }

    pub fn total_mass(&self) -> Result<Rat, ReebError> {
        let mut m = Rat::zero();
        for e in 0..self.edges.len() {
            m += self.profile(e)?.mass();
        }
        Ok(m)
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        let root = uf.find(0);
        (1..self.nodes.len()).all(|n| uf.find(n) == root)
    }

    /// Number of involution-fixed edges; each carries one fixed point of the
    /// involution, at its f = 0 level.
    pub fn fixed_edge_count(&self) -> Result<usize, ReebError> {
        let iota = self.iota()?;
        Ok(iota.edges.iter().enumerate().filter(|&(e, &ie)| e == ie).count())
    }

    /// Edges whose open f-interval contains t.
    pub fn edges_crossing(&self, t: &Rat) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| &self.nodes[e.tail].f < t && t < &self.nodes[e.head].f)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Checks every invariant of a measured Reeb graph with involution.
pub fn validate_graph(g: &MeasuredReebGraph) -> Vec<String> {
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if g.nodes[e.tail].f >= g.nodes[e.head].f {
            out.push(format!("edge {i}: f not increasing tail -> head"));
        }
        if let Some(p) = &e.profile {
            for msg in p.check() {
                out.push(format!("edge {i} profile: {msg}"));
            }
            if p.f_lo != g.nodes[e.tail].f || p.f_hi != g.nodes[e.head].f {
                out.push(format!("edge {i}: profile interval does not match node values"));
            }
        }
    }
    for n in 0..g.nodes.len() {
        let v = g.valence(n);
        if v != 1 && v != 3 {
            out.push(format!("node {n} has valence {v}"));
        }
    }
    if !g.is_connected() {
        out.push("graph is disconnected".into());
    }
    // distinct nonzero node values
    let mut values: Vec<&Rat> = g.nodes.iter().map(|n| &n.f).collect();
    values.sort();
    if values.windows(2).any(|w| w[0] == w[1]) {
        out.push("duplicate node f-values".into());
    }
    if g.nodes.iter().any(|n| n.f.is_zero()) {
        out.push("node at f = 0".into());
    }

    if let Some(iota) = &g.iota {
        if iota.nodes.len() != g.nodes.len() || iota.edges.len() != g.edges.len() {
            out.push("involution tables have wrong size".into());
            return out;
        }
        for n in 0..g.nodes.len() {
            if iota.nodes[iota.nodes[n]] != n {
                out.push(format!("node involution not self-inverse at {n}"));
            }
            if iota.nodes[n] == n {
                out.push(format!("involution fixes node {n}"));
            }
            if g.nodes[iota.nodes[n]].f != -&g.nodes[n].f {
                out.push(format!("f not anti-invariant at node {n}"));
            }
        }
        for e in 0..g.edges.len() {
            let ie = iota.edges[e];
            if iota.edges[ie] != e {
                out.push(format!("edge involution not self-inverse at {e}"));
            }
            // orientation reversal: tail of e maps to head of iota(e)
            if iota.nodes[g.edges[e].tail] != g.edges[ie].head
                || iota.nodes[g.edges[e].head] != g.edges[ie].tail
            {
                out.push(format!("edge involution does not reverse orientation at {e}"));
            }
            if let (Some(p), Some(q)) = (&g.edges[e].profile, &g.edges[ie].profile) {
                if !p.mirror().same_function(q) {
                    out.push(format!("measure not involution-invariant on edge {e}"));
                }
            }
        }
    }
    out
}

/// Builds the Reeb graph of an equivariant simple PL Morse function by an
/// ascending sweep, populating the triangle cellmap. Profiles and the graph
/// involution are filled by [`pushforward_measure`] and
/// [`induce_involution`].
pub fn compute_reeb(s: &SurfaceComplex) -> Result<MeasuredReebGraph, ReebError> {
    let violations = check_simple_morse_odd(s);
    if !violations.is_empty() {
        return Err(ReebError::NotSimpleMorse(violations.join("; ")));
    }
    let tags = classify_critical_vertices(s).tags;

    let mesh = MeshEdges::new(s);

    let mut order: Vec<VertexIdx> = (0..s.vertex_count()).collect();
    order.sort_by(|&a, &b| s.f(a).cmp(s.f(b)));

    let mut nodes: Vec<ReebNode> = Vec::new();
    let mut edges: Vec<ReebEdge> = Vec::new();
    let mut cellmap: Vec<Vec<CellPiece>> = vec![Vec::new(); s.triangles.len()];
    let mut open: Vec<Option<(Rat, usize)>> = vec![None; s.triangles.len()];

    let mut slots = UnionFind::new(0);
    let mut edge_slot: Vec<Option<usize>> = vec![None; mesh.edges.len()];
    let mut slot_edge: HashMap<usize, usize> = HashMap::new();

    // triangles keyed by their extreme vertices
    let mut tris_min: Vec<Vec<TriIdx>> = vec![Vec::new(); s.vertex_count()];
    let mut tris_max: Vec<Vec<TriIdx>> = vec![Vec::new(); s.vertex_count()];
    for (t, tri) in s.triangles.iter().enumerate() {
        let lo = *tri.iter().min_by(|&&a, &&b| s.f(a).cmp(s.f(b))).unwrap();
        let hi = *tri.iter().max_by(|&&a, &&b| s.f(a).cmp(s.f(b))).unwrap();
        tris_min[lo].push(t);
        tris_max[hi].push(t);
    }

    let assign = |open: &mut Vec<Option<(Rat, usize)>>,
                  cellmap: &mut Vec<Vec<CellPiece>>,
                  tri: TriIdx,
                  t: &Rat,
                  e: usize| {
        match &open[tri] {
            Some((_, cur)) if *cur == e => {}
            Some((start, cur)) => {
                cellmap[tri].push(CellPiece { lo: start.clone(), hi: t.clone(), edge: *cur });
                open[tri] = Some((t.clone(), e));
            }
            None => open[tri] = Some((t.clone(), e)),
        }
    };

    for &v in &order {
        let t = s.f(v).clone();

        // triangles topping out at v leave the sweep
        for &tri in &tris_max[v] {
            if let Some((start, cur)) = open[tri].take() {
                cellmap[tri].push(CellPiece { lo: start, hi: t.clone(), edge: cur });
            }
        }

        let lower: Vec<usize> = mesh.incident[v]
            .iter()
            .copied()
            .filter(|&me| mesh.other(me, v) != v && s.f(mesh.other(me, v)) < &t)
            .collect();
        let upper: Vec<usize> = mesh.incident[v]
            .iter()
            .copied()
            .filter(|&me| s.f(mesh.other(me, v)) > &t)
            .collect();

        match tags[v] {
            CriticalTag::Degenerate => {
                return Err(ReebError::BadValence(s.id(v)));
            }
            CriticalTag::Min => {
                let n = nodes.len();
                nodes.push(ReebNode { f: t.clone(), mesh_vertex: Some(v) });
                let e = edges.len();
                edges.push(ReebEdge { tail: n, head: usize::MAX, profile: None });
                let c = slots.push();
                slot_edge.insert(c, e);
                for &me in &upper {
                    edge_slot[me] = Some(c);
                }
            }
            CriticalTag::Regular => {
                let me0 = *lower.first().ok_or(ReebError::BadValence(s.id(v)))?;
                let c = slots.find(edge_slot[me0].ok_or(ReebError::BadValence(s.id(v)))?);
                for &me in &lower {
                    edge_slot[me] = None;
                }
                for &me in &upper {
                    edge_slot[me] = Some(c);
                }
            }
            CriticalTag::Max => {
                let me0 = *lower.first().ok_or(ReebError::BadValence(s.id(v)))?;
                let c = slots.find(edge_slot[me0].ok_or(ReebError::BadValence(s.id(v)))?);
                let e = *slot_edge.get(&c).ok_or(ReebError::BadValence(s.id(v)))?;
                let n = nodes.len();
                nodes.push(ReebNode { f: t.clone(), mesh_vertex: Some(v) });
                edges[e].head = n;
                slot_edge.remove(&c);
                for &me in &lower {
                    edge_slot[me] = None;
                }
            }
            CriticalTag::Saddle => {
                let lower_arcs = link_arcs(s, v, true);
                let upper_arcs = link_arcs(s, v, false);
                let n = nodes.len();
                nodes.push(ReebNode { f: t.clone(), mesh_vertex: Some(v) });

                if lower_arcs.len() == 2 {
                    let c1 = slots.find(
                        edge_slot[mesh.idx(v, lower_arcs[0][0])]
                            .ok_or(ReebError::BadValence(s.id(v)))?,
                    );
                    let c2 = slots.find(
                        edge_slot[mesh.idx(v, lower_arcs[1][0])]
                            .ok_or(ReebError::BadValence(s.id(v)))?,
                    );
                    for &me in &lower {
                        edge_slot[me] = None;
                    }
                    if c1 != c2 {
                        // two level circles merge into one
                        let e1 = slot_edge.remove(&c1).ok_or(ReebError::BadValence(s.id(v)))?;
                        let e2 = slot_edge.remove(&c2).ok_or(ReebError::BadValence(s.id(v)))?;
                        edges[e1].head = n;
                        edges[e2].head = n;
                        slots.union(c1, c2);
                        let r = slots.find(c1);
                        let e = edges.len();
                        edges.push(ReebEdge { tail: n, head: usize::MAX, profile: None });
                        slot_edge.insert(r, e);
                        for &me in &upper {
                            edge_slot[me] = Some(r);
                        }
                        let start = mesh.idx(v, upper_arcs[0][0]);
                        mesh.walk_circle(s, v, start, |_me, tri| {
                            assign(&mut open, &mut cellmap, tri, &t, e);
                        });
                    } else {
                        // one level circle splits in two
                        if upper_arcs.len() != 2 {
                            return Err(ReebError::BadValence(s.id(v)));
                        }
                        let e0 = slot_edge.remove(&c1).ok_or(ReebError::BadValence(s.id(v)))?;
                        edges[e0].head = n;
                        for arc in &upper_arcs {
                            let c = slots.push();
                            let e = edges.len();
                            edges.push(ReebEdge { tail: n, head: usize::MAX, profile: None });
                            slot_edge.insert(c, e);
                            let start = mesh.idx(v, arc[0]);
                            mesh.walk_circle(s, v, start, |me, tri| {
                                edge_slot[me] = Some(c);
                                assign(&mut open, &mut cellmap, tri, &t, e);
                            });
                        }
                    }
                } else {
                    return Err(ReebError::BadValence(s.id(v)));
                }
            }
        }

        // triangles bottoming out at v enter the sweep
        for &tri in &tris_min[v] {
            let others: Vec<VertexIdx> =
                s.triangles[tri].iter().copied().filter(|&u| u != v).collect();
            let me = mesh.idx(v, others[0]);
            let c = slots.find(edge_slot[me].ok_or(ReebError::BadValence(s.id(v)))?);
            let e = *slot_edge.get(&c).ok_or(ReebError::BadValence(s.id(v)))?;
            assign(&mut open, &mut cellmap, tri, &t, e);
        }
    }

    if edges.iter().any(|e| e.head == usize::MAX) || open.iter().any(|o| o.is_some()) {
        return Err(ReebError::Other("sweep finished with open components".into()));
    }

    Ok(MeasuredReebGraph { nodes, edges, iota: None, cellmap })
}

/// Pushes the deck involution of the mesh down to the graph: node images via
/// critical vertices, edge images via the triangle cellmap.
pub fn induce_involution(
    s: &SurfaceComplex,
    g: &MeasuredReebGraph,
) -> Result<MeasuredReebGraph, ReebError> {
    let node_of: HashMap<VertexIdx, usize> = g
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(n, node)| node.mesh_vertex.map(|v| (v, n)))
        .collect();
    let mut iota_nodes = vec![usize::MAX; g.nodes.len()];
    for (n, node) in g.nodes.iter().enumerate() {
        let v = node.mesh_vertex.ok_or(ReebError::Other("graph not mesh-derived".into()))?;
        let iv = s.involution[v];
        iota_nodes[n] =
            *node_of.get(&iv).ok_or(ReebError::Other(format!("image of node {n} not critical")))?;
    }

    let img = s
        .triangle_image_map()
        .ok_or(ReebError::Other("involution does not permute triangles".into()))?;
    let mut iota_edges = vec![usize::MAX; g.edges.len()];
    let two = rat_int(2);
    for (tri, pieces) in g.cellmap.iter().enumerate() {
        for p in pieces {
            let mid = -(&p.lo + &p.hi) / &two;
            let target = g.cellmap[img[tri]]
                .iter()
                .find(|q| q.lo < mid && mid < q.hi)
                .ok_or(ReebError::InconsistentInvolution(p.edge))?;
            if iota_edges[p.edge] == usize::MAX {
                iota_edges[p.edge] = target.edge;
            } else if iota_edges[p.edge] != target.edge {
                return Err(ReebError::InconsistentInvolution(p.edge));
            }
        }
    }
    if iota_edges.iter().any(|&e| e == usize::MAX) {
        return Err(ReebError::Other("cellmap does not cover every edge".into()));
    }

    let mut out = g.clone();
    out.iota = Some(GraphInvolution { nodes: iota_nodes, edges: iota_edges });
    Ok(out)
}

/// Computes the exact pushforward of the triangle area weights along the
/// cellmap: each triangle contributes a piecewise quadratic in the level.
pub fn pushforward_measure(
    s: &SurfaceComplex,
    g: &MeasuredReebGraph,
) -> Result<MeasuredReebGraph, ReebError> {
    if g.cellmap.iter().all(|p| p.is_empty()) {
        return Err(ReebError::Other("cellmap not populated".into()));
    }
    let mut contributions: Vec<Vec<QuadContribution>> = vec![Vec::new(); g.edges.len()];
    for (tri, pieces) in g.cellmap.iter().enumerate() {
        let mut vals: Vec<&Rat> = s.triangles[tri].iter().map(|&u| s.f(u)).collect();
        vals.sort();
        let (fa, fb, fc) = (vals[0].clone(), vals[1].clone(), vals[2].clone());
        let area = &s.areas[tri];

        // Sublevel-area quadratics of a linear function on a triangle:
        //   lower lobe  A (t-fa)^2 / ((fb-fa)(fc-fa))        on [fa, fb]
        //   upper lobe  A (1 - (fc-t)^2/((fc-fb)(fc-fa)))    on [fb, fc]
        let dlo = (&fb - &fa) * (&fc - &fa);
        let qlo = [
            area / &dlo,
            -rat_int(2) * area * &fa / &dlo,
            area * &fa * &fa / &dlo,
        ];
        let dhi = (&fc - &fb) * (&fc - &fa);
        let qhi = [
            -area / &dhi,
            rat_int(2) * area * &fc / &dhi,
            area - area * &fc * &fc / &dhi,
        ];
        for p in pieces {
            // clip each assigned interval against the two lobes
            let clips = [(&fa, &fb, &qlo), (&fb, &fc, &qhi)];
            for (lo, hi, quad) in clips {
                let a = if &p.lo > lo { p.lo.clone() } else { (*lo).clone() };
                let b = if &p.hi < hi { p.hi.clone() } else { (*hi).clone() };
                if a < b {
                    contributions[p.edge].push(QuadContribution {
                        lo: a,
                        hi: b,
                        quad: (*quad).clone(),
                    });
                }
            }
        }
    }
    let mut out = g.clone();
    for (e, contrib) in contributions.into_iter().enumerate() {
        let f_lo = g.nodes[g.edges[e].tail].f.clone();
        let f_hi = g.nodes[g.edges[e].head].f.clone();
        out.edges[e].profile = Some(EdgeMeasureProfile::build(f_lo, f_hi, contrib));
    }
    Ok(out)
}

/// Full pipeline: sweep, involution, measure.
pub fn measured_reeb_graph(s: &SurfaceComplex) -> Result<MeasuredReebGraph, ReebError> {
    let g = compute_reeb(s)?;
    let g = pushforward_measure(s, &g)?;
    induce_involution(s, &g)
}

/// Brute-force level-set scan, independent of the sweep: per level, the
/// connected components of crossing triangles, linked across consecutive
/// levels through shared triangles.
#[derive(Debug, Clone)]
pub struct OracleScan {
    pub levels: Vec<Rat>,
    pub counts: Vec<usize>,
    /// Component labels per level, keyed by triangle; labels are dense and
    /// ordered by smallest member triangle.
    pub components: Vec<HashMap<TriIdx, usize>>,
    /// Pairs (component at level i, component at level i+1) sharing a
    /// triangle.
    pub adjacency: Vec<Vec<(usize, usize)>>,
}

pub fn reeb_oracle(s: &SurfaceComplex, levels: &[Rat]) -> Result<OracleScan, ReebError> {
    let mut levels: Vec<Rat> = levels.to_vec();
    levels.sort();
    for t in &levels {
        if s.vertices.iter().any(|v| &v.f == t) {
            return Err(ReebError::LevelAtVertex(fmt_rat(t)));
        }
    }
    let edge_map = s.edge_map();
    let mut counts = Vec::new();
    let mut components = Vec::new();
    for t in &levels {
        let crossing: Vec<TriIdx> = (0..s.triangles.len())
            .filter(|&tri| {
                let vs = &s.triangles[tri];
                let below = vs.iter().filter(|&&u| s.f(u) < t).count();
                below >= 1 && below <= 2
            })
            .collect();
        let index: HashMap<TriIdx, usize> =
            crossing.iter().enumerate().map(|(i, &tri)| (tri, i)).collect();
        let mut uf = UnionFind::new(crossing.len());
        for (&(u, v), inc) in &edge_map {
            let crosses = (s.f(u) < t) != (s.f(v) < t);
            if crosses && inc.len() == 2 {
                uf.union(index[&inc[0].0], index[&inc[1].0]);
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut comp: HashMap<TriIdx, usize> = HashMap::new();
        for &tri in &crossing {
            let root = uf.find(index[&tri]);
            let next = label.len();
            let l = *label.entry(root).or_insert(next);
            comp.insert(tri, l);
        }
        counts.push(label.len());
        components.push(comp);
    }
    let mut adjacency = Vec::new();
    for i in 0..levels.len().saturating_sub(1) {
        let mut pairs: Vec<(usize, usize)> = components[i]
            .iter()
            .filter_map(|(tri, &a)| components[i + 1].get(tri).map(|&b| (a, b)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        adjacency.push(pairs);
    }
    Ok(OracleScan { levels, counts, components, adjacency })
}

/// Undirected mesh-edge tables used by the sweep and the level walks.
pub struct MeshEdges {
    pub edges: Vec<(VertexIdx, VertexIdx)>,
    pub tris: Vec<[TriIdx; 2]>,
    pub incident: Vec<Vec<usize>>,
    index: HashMap<(VertexIdx, VertexIdx), usize>,
}

impl MeshEdges {
    pub fn new(s: &SurfaceComplex) -> Self {
        let mut edges = Vec::new();
        let mut tris = Vec::new();
        let mut index = HashMap::new();
        for (key, inc) in s.edge_map() {
            assert_eq!(inc.len(), 2, "mesh must be validated before the sweep");
            index.insert(key, edges.len());
            edges.push(key);
            tris.push([inc[0].0, inc[1].0]);
        }
        let mut incident = vec![Vec::new(); s.vertex_count()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(i);
            incident[v].push(i);
        }
        MeshEdges { edges, tris, incident, index }
    }

    pub fn idx(&self, u: VertexIdx, v: VertexIdx) -> usize {
        let key = if u < v { (u, v) } else { (v, u) };
        self.index[&key]
    }

    pub fn other(&self, me: usize, v: VertexIdx) -> VertexIdx {
        let (a, b) = self.edges[me];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Whether a mesh edge crosses the level just above f(v). Values are
    /// distinct, so this is: lower end at or below f(v), upper end above.
    fn crosses_above(&self, s: &SurfaceComplex, me: usize, v: VertexIdx) -> bool {
        let (a, b) = self.edges[me];
        let t = s.f(v);
        let (fa, fb) = (s.f(a), s.f(b));
        let (lo, hi) = if fa < fb { (fa, fb) } else { (fb, fa) };
        lo <= t && hi > t
    }

    /// The other edge of `tri` crossing the level just above f(v).
    fn other_crossing_edge(&self, s: &SurfaceComplex, tri: TriIdx, me: usize, v: VertexIdx) -> usize {
        let vs = s.triangles[tri];
        for k in 0..3 {
            let cand = self.idx(vs[k], vs[(k + 1) % 3]);
            if cand != me && self.crosses_above(s, cand, v) {
                return cand;
            }
        }
        unreachable!("crossing triangle must have two crossing edges");
    }

    fn other_triangle(&self, me: usize, tri: TriIdx) -> TriIdx {
        let [a, b] = self.tris[me];
        if a == tri {
            b
        } else {
            a
        }
    }

    /// Traverses the level circle just above f(v) through `start`, visiting
    /// each crossing edge and each crossed triangle once.
    pub fn walk_circle(
        &self,
        s: &SurfaceComplex,
        v: VertexIdx,
        start: usize,
        mut visit: impl FnMut(usize, TriIdx),
    ) {
        debug_assert!(self.crosses_above(s, start, v));
        let mut me = start;
        let mut tri = self.tris[start][0];
        loop {
            visit(me, tri);
            let next_edge = self.other_crossing_edge(s, tri, me, v);
            let next_tri = self.other_triangle(next_edge, tri);
            me = next_edge;
            tri = next_tri;
            if me == start {
                break;
            }
        }
    }
}

/// Connected components of the lower (or upper) link of v, as lists of
/// neighbor vertices; used to seed saddle processing.
fn link_arcs(s: &SurfaceComplex, v: VertexIdx, lower: bool) -> Vec<Vec<VertexIdx>> {
    let side = |u: VertexIdx| if lower { s.below(u, v) } else { s.below(v, u) };
    let mut members: Vec<VertexIdx> = Vec::new();
    let mut link_edges: Vec<(VertexIdx, VertexIdx)> = Vec::new();
    for tri in &s.triangles {
        if let Some(k) = tri.iter().position(|&u| u == v) {
            let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            link_edges.push((a, b));
            for u in [a, b] {
                if side(u) && !members.contains(&u) {
                    members.push(u);
                }
            }
        }
    }
    if members.is_empty() {
        return Vec::new();
    }
    let pos = |u: VertexIdx| members.iter().position(|&x| x == u).unwrap();
    let mut uf = UnionFind::new(members.len());
    for &(a, b) in &link_edges {
        if side(a) && side(b) {
            uf.union(pos(a), pos(b));
        }
    }
    let mut by_root: HashMap<usize, Vec<VertexIdx>> = HashMap::new();
    for &u in &members {
        by_root.entry(uf.find(pos(u))).or_default().push(u);
    }
    let mut arcs: Vec<Vec<VertexIdx>> = by_root.into_values().collect();
    arcs.sort_by_key(|a| a[0]);
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn profile_build_and_eval() {
        // Uniform density 2 on [-1, 1]: m(t) = 2(t+1), mass 4.
        let p = EdgeMeasureProfile::build(
            rat_int(-1),
            rat_int(1),
            vec![QuadContribution {
                lo: rat_int(-1),
                hi: rat_int(1),
                quad: [Rat::zero(), rat_int(2), Rat::zero()],
            }],
        );
        assert_eq!(p.mass(), rat_int(4));
        assert_eq!(p.eval(&rat_int(0)), rat_int(2));
        assert_eq!(p.flux(), rat_int(0));
        assert_eq!(p.moment(2), rat(4, 3));
        assert!(p.check().is_empty());
    }

    #[test]
    fn profile_mirror_of_symmetric_is_itself() {
        let p = EdgeMeasureProfile::build(
            rat_int(-1),
            rat_int(1),
            vec![QuadContribution {
                lo: rat_int(-1),
                hi: rat_int(1),
                quad: [Rat::zero(), rat_int(2), Rat::zero()],
            }],
        );
        assert!(p.mirror().same_function(&p));
    }

    #[test]
    fn profile_flux_shifted_interval() {
        // m(t) = 2t on [0, 2]: flux = int t * 2 dt = 4.
        let p = EdgeMeasureProfile::build(
            rat_int(0),
            rat_int(2),
            vec![QuadContribution {
                lo: rat_int(0),
                hi: rat_int(2),
                quad: [Rat::zero(), rat_int(2), Rat::zero()],
            }],
        );
        assert_eq!(p.flux(), rat_int(4));
    }

    #[test]
    fn single_triangle_halfway_mass() {
        // Triangle with values 0 < 1 < 2 and area 1: sublevel area at t = 1
        // is (1-0)^2 / ((1-0)(2-0)) = 1/2.
        let q = [rat(1, 2), Rat::zero(), Rat::zero()]; // (t-0)^2/(1*2)
        let p = EdgeMeasureProfile::build(
            rat_int(0),
            rat_int(1),
            vec![QuadContribution { lo: rat_int(0), hi: rat_int(1), quad: q }],
        );
        assert_eq!(p.eval(&rat_int(1)), rat(1, 2));
    }

    #[test]
    fn octahedron_sweep_is_path_graph() {
        let s = crate::fixtures::perturbed_octahedron();
        let g = measured_reeb_graph(&s).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
        assert_eq!(g.fixed_edge_count().unwrap(), 1);
        assert_eq!(g.total_mass().unwrap(), s.total_area());
    }

    #[test]
    fn vertical_torus_sweep_is_figure2() {
        let s = crate::fixtures::vertical_torus(8, 8);
        let g = measured_reeb_graph(&s).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 4);
        assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
        assert_eq!(g.fixed_edge_count().unwrap(), 0);
        assert_eq!(g.total_mass().unwrap(), s.total_area());
    }

    #[test]
    fn inclined_torus_sweep_is_figure3() {
        let s = crate::fixtures::inclined_torus(8, 8);
        let g = measured_reeb_graph(&s).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 4);
        assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
        assert_eq!(g.fixed_edge_count().unwrap(), 2);
        assert_eq!(g.total_mass().unwrap(), s.total_area());
    }

    #[test]
    fn sweep_matches_oracle_on_tori() {
        for s in [crate::fixtures::vertical_torus(8, 8), crate::fixtures::inclined_torus(6, 8)] {
            let g = measured_reeb_graph(&s).unwrap();
            let mut values: Vec<Rat> = s.vertices.iter().map(|v| v.f.clone()).collect();
            values.sort();
            let levels: Vec<Rat> = values
                .windows(2)
                .filter(|w| w[0] != w[1])
                .map(|w| (&w[0] + &w[1]) / rat_int(2))
                .filter(|t| s.vertices.iter().all(|v| &v.f != t))
                .collect();
            let scan = reeb_oracle(&s, &levels).unwrap();
            for (t, &count) in scan.levels.iter().zip(&scan.counts) {
                assert_eq!(g.edges_crossing(t).len(), count, "level {}", fmt_rat(t));
            }
        }
    }

    #[test]
    fn sup_distance_detects_difference() {
        let p = EdgeMeasureProfile::build(
            rat_int(0),
            rat_int(1),
            vec![QuadContribution {
                lo: rat_int(0),
                hi: rat_int(1),
                quad: [Rat::zero(), rat_int(1), Rat::zero()],
            }],
        );
        let q = EdgeMeasureProfile::build(
            rat_int(0),
            rat_int(1),
            vec![QuadContribution {
                lo: rat_int(0),
                hi: rat_int(1),
                quad: [Rat::zero(), rat_int(2), Rat::zero()],
            }],
        );
        assert_eq!(p.sup_distance(&q).unwrap(), rat_int(1));
        assert!(p.same_function(&p));
        assert!(!p.same_function(&q));
    }
}
