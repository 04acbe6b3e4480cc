//! The hub triangle basis of the binary cycle space `Z_2(K_n)`.

use alloc::vec::Vec;

use crate::graph::{edge_count, edge_endpoints, edge_index, Circle, GraphError, SignedCompleteGraph, Triangle, Vertex};
use crate::group::F22;

/// All triangles through `hub`, i.e. `T_{hub,i,j}` for `i < j` distinct from the hub,
/// together with their signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleBasis {
    pub hub: Vertex,
    pub triangles: Vec<(Triangle, F22)>,
}

impl TriangleBasis {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn signs(&self) -> impl Iterator<Item = F22> + '_ {
        self.triangles.iter().map(|(_, s)| *s)
    }
}

/// The hub triangle basis of `g`, ordered lexicographically by the two non-hub vertices.
pub fn basis(g: &SignedCompleteGraph, hub: Vertex) -> Result<TriangleBasis, GraphError> {
    g.require_vertices(3)?;
    g.check_vertex(hub)?;
    let others: Vec<Vertex> = g.vertices().filter(|&v| v != hub).collect();
    let mut triangles = Vec::with_capacity(edge_count(others.len()));
    for (k, &i) in others.iter().enumerate() {
        for &j in &others[k + 1..] {
            triangles.push((Triangle::new(hub, i, j)?, g.tri(hub, i, j)));
        }
    }
    Ok(TriangleBasis { hub, triangles })
}

/// Splits a Hamiltonian circle into the `n - 2` fan triangles at `hub`.
///
/// Reading the circle from the hub as `hub, w_2, ..., w_n`, the result is
/// `T_{hub, w_i, w_{i+1}}` for `i = 2..n-1`; their signs sum to the circle's.
pub fn decompose_hamiltonian(
    g: &SignedCompleteGraph,
    h: &Circle,
    hub: Vertex,
) -> Result<Vec<Triangle>, GraphError> {
    g.check_vertex(hub)?;
    if !h.is_hamiltonian(g.n()) {
        return Err(GraphError::NotHamiltonian { len: h.len(), n: g.n() });
    }
    let vs = h.as_slice();
    let pos = vs.iter().position(|&v| v == hub).ok_or(GraphError::VertexNotOnWalk(hub))?;
    let k = vs.len();
    let ordered: Vec<Vertex> = (0..k).map(|i| vs[(pos + i) % k]).collect();
    ordered[1..]
        .windows(2)
        .map(|w| Triangle::new(hub, w[0], w[1]))
        .collect()
}

/// A set of edges of `K_n`, as a bitset over colexicographic edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    n: usize,
    bits: Vec<u64>,
}

impl EdgeSet {
    pub fn empty(n: usize) -> Self {
        EdgeSet { n, bits: alloc::vec![0; edge_count(n).div_ceil(64)] }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut s = EdgeSet::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexOutOfRange(w));
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            s.toggle(u, v);
        }
        Ok(s)
    }

    pub fn from_circle(n: usize, c: &Circle) -> Result<Self, GraphError> {
        let edges: Vec<_> = c.edges().collect();
        EdgeSet::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn toggle(&mut self, u: Vertex, v: Vertex) {
        let i = edge_index(u, v);
        self.bits[i / 64] ^= 1 << (i % 64);
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        let i = edge_index(u, v);
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.n, other.n, "edge sets of different graphs");
        EdgeSet {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..edge_count(self.n))
            .filter(|&i| self.bits[i / 64] & (1 << (i % 64)) != 0)
            .map(edge_endpoints)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        (1..=self.n).filter(|&u| u != v && self.contains(u, v)).count()
    }
}

/// Membership in `Z_2(K_n)`: every vertex has even degree.
pub fn is_even_subgraph(edges: &EdgeSet) -> bool {
    let mut parity: u64 = 0;
    for (u, v) in edges.edges() {
        parity ^= 1 << (u - 1);
        parity ^= 1 << (v - 1);
    }
    parity == 0
}

/// Coordinates of an edge set relative to the hub basis: the hub triangles
/// `T_{hub,i,j}` for each non-hub edge `{i, j}` in the set.
///
/// The set lies in `Z_2(K_n)` exactly when the sum of these triangles
/// reproduces it.
pub fn basis_coordinates(edges: &EdgeSet, hub: Vertex) -> Result<Vec<Triangle>, GraphError> {
    if hub == 0 || hub > edges.n() {
        return Err(GraphError::VertexOutOfRange(hub));
    }
    edges
        .edges()
        .filter(|&(u, v)| u != hub && v != hub)
        .map(|(u, v)| Triangle::new(hub, u, v))
        .collect()
}

/// The edge set spanned by a sum of triangles.
pub fn span(n: usize, triangles: &[Triangle]) -> EdgeSet {
    let mut s = EdgeSet::empty(n);
    for t in triangles {
        let [a, b, c] = t.vertices();
        s.toggle(a, b);
        s.toggle(b, c);
        s.toggle(a, c);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{SignCounts, F22 as G};
    use alloc::vec;

    fn share_vertex_k4() -> SignedCompleteGraph {
        SignedCompleteGraph::build(
            4,
            &[(1, 2, G::B), (1, 3, G::C), (1, 4, G::A), (2, 3, G::E), (3, 4, G::A), (2, 4, G::A)],
        )
        .unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(&SignedCompleteGraph::identity(4), 1).unwrap().len(), 3);
        assert_eq!(basis(&SignedCompleteGraph::identity(6), 1).unwrap().len(), 10);
        assert_eq!(basis(&SignedCompleteGraph::identity(7), 3).unwrap().len(), 15);
        assert!(basis(&SignedCompleteGraph::identity(4), 5).is_err());
        assert!(basis(&SignedCompleteGraph::identity(2), 1).is_err());
    }

    #[test]
    fn basis_signs_on_share_vertex_k4() {
        let b = basis(&share_vertex_k4(), 1).unwrap();
        let tris: Vec<_> = b.triangles.iter().map(|(t, _)| *t).collect();
        assert_eq!(
            tris,
            vec![
                Triangle::new(1, 2, 3).unwrap(),
                Triangle::new(1, 2, 4).unwrap(),
                Triangle::new(1, 3, 4).unwrap()
            ]
        );
        let signs: Vec<_> = b.signs().collect();
        assert_eq!(signs, vec![G::A, G::B, G::C]);
        assert!(b.triangles.iter().all(|(t, _)| t.contains(1)));
    }

    #[test]
    fn decompose_examples() {
        let g = SignedCompleteGraph::identity(4);
        let h = Circle::new(vec![1, 2, 3, 4]).unwrap();
        let d = decompose_hamiltonian(&g, &h, 1).unwrap();
        assert_eq!(d, vec![Triangle::new(1, 2, 3).unwrap(), Triangle::new(1, 3, 4).unwrap()]);

        let g = SignedCompleteGraph::identity(6);
        let h = Circle::new(vec![1, 4, 2, 6, 3, 5]).unwrap();
        let d = decompose_hamiltonian(&g, &h, 3).unwrap();
        assert_eq!(d.len(), 4);
        let sum: G = d.iter().map(|t| g.triangle_sign(t).unwrap()).sum();
        assert_eq!(sum, G::E);
        assert_eq!(sum, g.walk_sign(&h).unwrap());
    }

    #[test]
    fn decompose_rejects_non_hamiltonian() {
        let g = SignedCompleteGraph::identity(5);
        let h = Circle::new(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(
            decompose_hamiltonian(&g, &h, 1),
            Err(GraphError::NotHamiltonian { len: 4, n: 5 })
        );
    }

    #[test]
    fn decomposition_sum_matches_share_vertex_k4() {
        let g = share_vertex_k4();
        let h = Circle::new(vec![1, 2, 3, 4]).unwrap();
        for hub in 1..=4 {
            let d = decompose_hamiltonian(&g, &h, hub).unwrap();
            let counts = SignCounts::from_slice(
                &d.iter().map(|t| g.triangle_sign(t).unwrap()).collect::<Vec<_>>(),
            );
            assert_eq!(counts.total(), 2);
            let sum: G = d.iter().map(|t| g.triangle_sign(t).unwrap()).sum();
            assert_eq!(sum, G::B);
        }
    }

    #[test]
    fn even_subgraph_examples() {
        let c = Circle::new(vec![1, 3, 5, 2]).unwrap();
        let s = EdgeSet::from_circle(6, &c).unwrap();
        assert!(is_even_subgraph(&s));
        let single = EdgeSet::from_edges(6, &[(2, 5)]).unwrap();
        assert!(!is_even_subgraph(&single));
        let c2 = Circle::new(vec![1, 2, 4, 6, 5]).unwrap();
        let s2 = EdgeSet::from_circle(6, &c2).unwrap();
        let d = s.symmetric_difference(&s2);
        assert!(is_even_subgraph(&d));
        assert!(is_even_subgraph(&EdgeSet::empty(6)));
    }

    #[test]
    fn coordinates_reconstruct_even_sets_only() {
        let c = Circle::new(vec![2, 5, 3, 6, 4]).unwrap();
        let s = EdgeSet::from_circle(6, &c).unwrap();
        let coords = basis_coordinates(&s, 1).unwrap();
        assert_eq!(span(6, &coords), s);
        let odd = EdgeSet::from_edges(6, &[(2, 5), (1, 3)]).unwrap();
        let coords = basis_coordinates(&odd, 1).unwrap();
        assert_ne!(span(6, &coords), odd);
    }
}
