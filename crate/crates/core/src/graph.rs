//! Doubly signed complete graphs and sign evaluation of walks.
//!
//! Vertices are numbered `1..=n`. Edge signs live in a flat array indexed in
//! colexicographic order, so `{u, v}` with `u < v` sits at
//! `(v-1)(v-2)/2 + (u-1)` and the edges of `K_{n-1}` form a prefix of those
//! of `K_n`.

use alloc::vec::Vec;
use core::fmt;

use crate::group::F22;

pub type Vertex = usize;

/// Upper bound on the vertex count; vertex sets fit in a `u64` mask.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphError {
    TooManyVertices(usize),
    TooFewVertices { needed: usize, got: usize },
    VertexOutOfRange(Vertex),
    SelfLoop(Vertex),
    DuplicateEdge(Vertex, Vertex),
    MissingEdge(Vertex, Vertex),
    WrongEdgeCount { expected: usize, got: usize },
    RepeatedVertex(Vertex),
    WalkTooShort { needed: usize, got: usize },
    EdgeNotOnCircle(Vertex, Vertex),
    VertexAlreadyOnCircle(Vertex),
    /// The triangle does not consist of one off-circle vertex and one circle edge.
    NotAnInsertion,
    NotHamiltonian { len: usize, n: usize },
    VertexNotOnWalk(Vertex),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::TooManyVertices(n) => {
                write!(f, "{n} vertices exceeds the supported maximum of {MAX_VERTICES}")
            }
            GraphError::TooFewVertices { needed, got } => {
                write!(f, "operation needs at least {needed} vertices, graph has {got}")
            }
            GraphError::VertexOutOfRange(v) => write!(f, "vertex {v} is out of range"),
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateEdge(u, v) => write!(f, "edge {u} {v} listed more than once"),
            GraphError::MissingEdge(u, v) => write!(f, "edge {u} {v} has no sign"),
            GraphError::WrongEdgeCount { expected, got } => {
                write!(f, "expected {expected} edge signs, got {got}")
            }
            GraphError::RepeatedVertex(v) => write!(f, "vertex {v} is repeated"),
            GraphError::WalkTooShort { needed, got } => {
                write!(f, "walk needs at least {needed} vertices, got {got}")
            }
            GraphError::EdgeNotOnCircle(u, v) => write!(f, "edge {u} {v} is not on the circle"),
            GraphError::VertexAlreadyOnCircle(v) => write!(f, "vertex {v} is already on the circle"),
            GraphError::NotAnInsertion => {
                f.write_str("triangle must be an off-circle vertex plus a circle edge")
            }
            GraphError::NotHamiltonian { len, n } => {
                write!(f, "circle of length {len} is not Hamiltonian in K{n}")
            }
            GraphError::VertexNotOnWalk(v) => write!(f, "vertex {v} is not on the walk"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Index of edge `{u, v}` in the colexicographic edge order. Requires `u != v`.
#[inline]
pub const fn edge_index(u: Vertex, v: Vertex) -> usize {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    (hi - 1) * (hi - 2) / 2 + (lo - 1)
}

/// Number of edges of `K_n`.
#[inline]
pub const fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Inverse of [`edge_index`]: the endpoints `(u, v)` with `u < v`.
pub fn edge_endpoints(index: usize) -> (Vertex, Vertex) {
    let mut hi = 2;
    while edge_count(hi) <= index {
        hi += 1;
    }
    (index - edge_count(hi - 1) + 1, hi)
}

/// `K_n` with a total sign assignment on its edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedCompleteGraph {
    n: usize,
    signs: Vec<F22>,
}

impl SignedCompleteGraph {
    /// Builds a graph from an edge list that must cover every unordered pair exactly once.
    pub fn build(n: usize, signs: &[(Vertex, Vertex, F22)]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut slots: Vec<Option<F22>> = alloc::vec![None; edge_count(n)];
        for &(u, v, s) in signs {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexOutOfRange(w));
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let slot = &mut slots[edge_index(u, v)];
            if slot.is_some() {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            *slot = Some(s);
        }
        let mut out = Vec::with_capacity(slots.len());
        for (i, s) in slots.into_iter().enumerate() {
            match s {
                Some(s) => out.push(s),
                None => {
                    let (u, v) = edge_endpoints(i);
                    return Err(GraphError::MissingEdge(u, v));
                }
            }
        }
        Ok(SignedCompleteGraph { n, signs: out })
    }

    /// Builds a graph from signs listed in colexicographic edge order.
    pub fn from_edge_signs(n: usize, signs: Vec<F22>) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        if signs.len() != edge_count(n) {
            return Err(GraphError::WrongEdgeCount { expected: edge_count(n), got: signs.len() });
        }
        Ok(SignedCompleteGraph { n, signs })
    }

    /// Every edge carries `sign`.
    pub fn uniform(n: usize, sign: F22) -> Self {
        assert!(n <= MAX_VERTICES, "too many vertices");
        SignedCompleteGraph { n, signs: alloc::vec![sign; edge_count(n)] }
    }

    /// Every edge carries the identity.
    pub fn identity(n: usize) -> Self {
        Self::uniform(n, F22::E)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> core::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Edge signs in colexicographic order.
    #[inline]
    pub fn edge_signs(&self) -> &[F22] {
        &self.signs
    }

    /// All edges as `(u, v, sign)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, F22)> {
        let mut out = Vec::with_capacity(self.signs.len());
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                out.push((u, v, self.sign(u, v)));
            }
        }
        out
    }

    /// Sign of edge `{u, v}`. Both vertices must be valid and distinct.
    #[inline]
    pub fn sign(&self, u: Vertex, v: Vertex) -> F22 {
        debug_assert!(u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n);
        self.signs[edge_index(u, v)]
    }

    pub fn try_sign(&self, u: Vertex, v: Vertex) -> Result<F22, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.sign(u, v))
    }

    pub(crate) fn set_sign(&mut self, u: Vertex, v: Vertex, s: F22) {
        self.signs[edge_index(u, v)] = s;
    }

    #[inline]
    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange(v))
        } else {
            Ok(())
        }
    }

    pub fn require_vertices(&self, needed: usize) -> Result<(), GraphError> {
        if self.n < needed {
            Err(GraphError::TooFewVertices { needed, got: self.n })
        } else {
            Ok(())
        }
    }

    /// Sum of the edge signs of the closed walk through `vs` (no validation).
    #[inline]
    pub fn cycle_sign(&self, vs: &[Vertex]) -> F22 {
        let mut s = self.path_sign(vs);
        if vs.len() > 2 {
            s += self.sign(vs[vs.len() - 1], vs[0]);
        }
        s
    }

    /// Sum of the edge signs of the open walk through `vs` (no validation).
    #[inline]
    pub fn path_sign(&self, vs: &[Vertex]) -> F22 {
        vs.windows(2).map(|w| self.sign(w[0], w[1])).sum()
    }

    /// Sign of a [`Circle`] or [`Path`], checking that its vertices exist.
    pub fn walk_sign<W: Walk + ?Sized>(&self, w: &W) -> Result<F22, GraphError> {
        for &v in w.vertices() {
            self.check_vertex(v)?;
        }
        Ok(if w.is_closed() {
            self.cycle_sign(w.vertices())
        } else {
            self.path_sign(w.vertices())
        })
    }

    pub fn triangle_sign(&self, t: &Triangle) -> Result<F22, GraphError> {
        let [u, v, w] = t.vertices();
        for x in [u, v, w] {
            self.check_vertex(x)?;
        }
        Ok(self.tri(u, v, w))
    }

    /// Sign of the triangle on three distinct vertices (no validation).
    #[inline]
    pub fn tri(&self, u: Vertex, v: Vertex, w: Vertex) -> F22 {
        self.sign(u, v) + self.sign(v, w) + self.sign(u, w)
    }

    /// The subgraph induced by `vs`, with `vs[i]` renamed to `i + 1`.
    pub fn induced(&self, vs: &[Vertex]) -> SignedCompleteGraph {
        let k = vs.len();
        let mut signs = alloc::vec![F22::E; edge_count(k)];
        for j in 1..k {
            for i in 0..j {
                signs[edge_index(i + 1, j + 1)] = self.sign(vs[i], vs[j]);
            }
        }
        SignedCompleteGraph { n: k, signs }
    }
}

impl fmt::Debug for SignedCompleteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}[", self.n)?;
        for (i, (u, v, s)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{u}{v}:{s}")?;
        }
        f.write_str("]")
    }
}

/// Anything whose sign is the sum of the edges between consecutive vertices.
pub trait Walk {
    fn vertices(&self) -> &[Vertex];
    /// Whether the last vertex joins back to the first.
    fn is_closed(&self) -> bool;
}

fn check_distinct(vs: &[Vertex]) -> Result<(), GraphError> {
    let mut seen: u64 = 0;
    for &v in vs {
        if v == 0 || v > MAX_VERTICES {
            return Err(GraphError::VertexOutOfRange(v));
        }
        let bit = 1u64 << (v - 1);
        if seen & bit != 0 {
            return Err(GraphError::RepeatedVertex(v));
        }
        seen |= bit;
    }
    Ok(())
}

/// A simple cycle, stored in canonical form: smallest vertex first, and the
/// smaller of its two neighbours second.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circle(Vec<Vertex>);

impl Circle {
    pub fn new(mut vs: Vec<Vertex>) -> Result<Circle, GraphError> {
        if vs.len() < 3 {
            return Err(GraphError::WalkTooShort { needed: 3, got: vs.len() });
        }
        check_distinct(&vs)?;
        let (pos, _) = vs.iter().enumerate().min_by_key(|&(_, v)| *v).unwrap();
        vs.rotate_left(pos);
        if vs[vs.len() - 1] < vs[1] {
            vs[1..].reverse();
        }
        Ok(Circle(vs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    /// Visits every vertex of `K_n` exactly once.
    pub fn is_hamiltonian(&self, n: usize) -> bool {
        self.0.len() == n && self.0.iter().all(|&v| v >= 1 && v <= n)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// Whether `{u, v}` is an edge of the circle.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_position(u, v).is_some()
    }

    /// Position `i` such that the circle edge `(vs[i], vs[i+1 mod k])` equals `{u, v}`.
    fn edge_position(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let k = self.0.len();
        (0..k).find(|&i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % k]);
            (a == u && b == v) || (a == v && b == u)
        })
    }

    /// The edges `(vs[i], vs[i+1])`, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    /// The circle with vertex `v` spliced between the endpoints of edge `{i, j}`.
    pub fn insert_vertex(&self, v: Vertex, i: Vertex, j: Vertex) -> Result<Circle, GraphError> {
        if self.contains(v) {
            return Err(GraphError::VertexAlreadyOnCircle(v));
        }
        let pos = self.edge_position(i, j).ok_or(GraphError::EdgeNotOnCircle(i, j))?;
        let mut vs = self.0.clone();
        vs.insert(pos + 1, v);
        Circle::new(vs)
    }
}

impl Walk for Circle {
    fn vertices(&self) -> &[Vertex] {
        &self.0
    }
    fn is_closed(&self) -> bool {
        true
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("-")?;
        write!(f, "{}", self.0[0])
    }
}

impl fmt::Debug for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A simple open path, stored in the lexicographically smaller orientation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(mut vs: Vec<Vertex>) -> Result<Path, GraphError> {
        if vs.len() < 2 {
            return Err(GraphError::WalkTooShort { needed: 2, got: vs.len() });
        }
        check_distinct(&vs)?;
        if vs[0] > vs[vs.len() - 1] {
            vs.reverse();
        }
        Ok(Path(vs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

impl Walk for Path {
    fn vertices(&self) -> &[Vertex] {
        &self.0
    }
    fn is_closed(&self) -> bool {
        false
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Three distinct vertices, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle([Vertex; 3]);

impl Triangle {
    pub fn new(u: Vertex, v: Vertex, w: Vertex) -> Result<Triangle, GraphError> {
        if u == v || v == w || u == w {
            return Err(GraphError::RepeatedVertex(if u == v || u == w { u } else { v }));
        }
        let mut t = [u, v, w];
        t.sort_unstable();
        Ok(Triangle(t))
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `h Δ t`: splices the off-circle vertex of `t` into the circle edge spanned
/// by its other two vertices. The sign of the result is
/// `sign(h) + sign(t)`.
pub fn circle_symmetric_difference(
    g: &SignedCompleteGraph,
    h: &Circle,
    t: &Triangle,
) -> Result<Circle, GraphError> {
    for &v in h.as_slice() {
        g.check_vertex(v)?;
    }
    let tv = t.vertices();
    for v in tv {
        g.check_vertex(v)?;
    }
    let off: Vec<Vertex> = tv.iter().copied().filter(|&v| !h.contains(v)).collect();
    match off.as_slice() {
        [v] => {
            let mut rest = tv.iter().copied().filter(|&x| x != *v);
            let (i, j) = (rest.next().unwrap(), rest.next().unwrap());
            h.insert_vertex(*v, i, j)
        }
        [] => Err(GraphError::NotAnInsertion),
        _ => Err(GraphError::NotAnInsertion),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use F22 as G;

    pub(crate) fn share_vertex_k4() -> SignedCompleteGraph {
        SignedCompleteGraph::build(
            4,
            &[(1, 2, G::B), (1, 3, G::C), (1, 4, G::A), (2, 3, G::E), (3, 4, G::A), (2, 4, G::A)],
        )
        .unwrap()
    }

    #[test]
    fn edge_index_roundtrip() {
        let mut i = 0;
        for v in 2..=10 {
            for u in 1..v {
                assert_eq!(edge_index(u, v), i);
                assert_eq!(edge_index(v, u), i);
                assert_eq!(edge_endpoints(i), (u, v));
                i += 1;
            }
        }
        assert_eq!(i, edge_count(10));
    }

    #[test]
    fn build_examples() {
        let g = SignedCompleteGraph::build(3, &[(1, 2, G::E), (2, 3, G::E), (1, 3, G::E)]).unwrap();
        assert_eq!(g.triangle_sign(&Triangle::new(1, 2, 3).unwrap()), Ok(G::E));
        let g = share_vertex_k4();
        assert_eq!(g.sign(4, 2), G::A);
        assert_eq!(g.sign(2, 4), G::A);
    }

    #[test]
    fn build_errors() {
        let dup = SignedCompleteGraph::build(
            4,
            &[(1, 2, G::B), (2, 1, G::C), (1, 3, G::C), (1, 4, G::A), (2, 3, G::E), (3, 4, G::A)],
        );
        assert_eq!(dup, Err(GraphError::DuplicateEdge(1, 2)));
        let missing = SignedCompleteGraph::build(3, &[(1, 2, G::E), (2, 3, G::E)]);
        assert_eq!(missing, Err(GraphError::MissingEdge(1, 3)));
        let oob = SignedCompleteGraph::build(3, &[(1, 4, G::E)]);
        assert_eq!(oob, Err(GraphError::VertexOutOfRange(4)));
        let selfloop = SignedCompleteGraph::build(3, &[(2, 2, G::E)]);
        assert_eq!(selfloop, Err(GraphError::SelfLoop(2)));
    }

    #[test]
    fn walk_sign_examples() {
        let g = share_vertex_k4();
        let c = Circle::new(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(g.walk_sign(&c), Ok(G::B));
        let p = Path::new(vec![1, 4]).unwrap();
        assert_eq!(g.walk_sign(&p), Ok(G::A));
        let id = SignedCompleteGraph::identity(6);
        let c = Circle::new(vec![3, 1, 6, 2, 5, 4]).unwrap();
        assert_eq!(id.walk_sign(&c), Ok(G::E));
        let bad = Circle::new(vec![1, 2, 7]).unwrap();
        assert_eq!(g.walk_sign(&bad), Err(GraphError::VertexOutOfRange(7)));
    }

    #[test]
    fn triangle_sign_examples() {
        let g = share_vertex_k4();
        assert_eq!(g.triangle_sign(&Triangle::new(1, 2, 3).unwrap()), Ok(G::A));
        assert_eq!(g.triangle_sign(&Triangle::new(2, 3, 4).unwrap()), Ok(G::E));
        assert!(Triangle::new(1, 1, 2).is_err());
    }

    #[test]
    fn canonical_forms() {
        let c1 = Circle::new(vec![3, 4, 1, 2]).unwrap();
        let c2 = Circle::new(vec![2, 1, 4, 3]).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1.as_slice(), &[1, 2, 3, 4]);
        assert_eq!(Path::new(vec![4, 2, 1]).unwrap().as_slice(), &[1, 2, 4]);
        assert_eq!(Circle::new(vec![1, 2, 1]), Err(GraphError::RepeatedVertex(1)));
        assert!(Circle::new(vec![1, 2]).is_err());
        assert!(Path::new(vec![5]).is_err());
    }

    #[test]
    fn insertion_examples() {
        let g = SignedCompleteGraph::identity(4);
        let h = Circle::new(vec![1, 2, 3]).unwrap();
        let t = Triangle::new(4, 1, 2).unwrap();
        let out = circle_symmetric_difference(&g, &h, &t).unwrap();
        assert_eq!(out, Circle::new(vec![1, 4, 2, 3]).unwrap());
        assert_eq!(g.walk_sign(&out), Ok(G::E));

        let t = Triangle::new(4, 1, 3).unwrap();
        assert!(circle_symmetric_difference(&g, &h, &t).is_ok());
        let h4 = Circle::new(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(
            circle_symmetric_difference(&g, &h4, &Triangle::new(1, 2, 3).unwrap()),
            Err(GraphError::NotAnInsertion)
        );
        let h = Circle::new(vec![1, 2, 3, 4]).unwrap();
        assert_eq!(h.insert_vertex(5, 1, 3), Err(GraphError::EdgeNotOnCircle(1, 3)));
        assert_eq!(h.insert_vertex(2, 1, 4), Err(GraphError::VertexAlreadyOnCircle(2)));
    }

    #[test]
    fn insertion_ledger_on_share_vertex_k4_extension() {
        // Five vertices: share-a-vertex K4 plus a fifth vertex joined by mixed signs.
        let mut edges = share_vertex_k4().edges();
        edges.extend([(1, 5, G::B), (2, 5, G::C), (3, 5, G::A), (4, 5, G::E)]);
        let g = SignedCompleteGraph::build(5, &edges).unwrap();
        let h = Circle::new(vec![1, 2, 3, 4]).unwrap();
        let t = Triangle::new(5, 1, 4).unwrap();
        let out = circle_symmetric_difference(&g, &h, &t).unwrap();
        assert_eq!(
            g.walk_sign(&out).unwrap(),
            g.walk_sign(&h).unwrap() + g.triangle_sign(&t).unwrap()
        );
    }

    #[test]
    fn induced_relabels_in_order() {
        let g = share_vertex_k4();
        let sub = g.induced(&[4, 2, 3]);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.sign(1, 2), g.sign(4, 2));
        assert_eq!(sub.sign(1, 3), g.sign(4, 3));
        assert_eq!(sub.sign(2, 3), g.sign(2, 3));
    }
}
