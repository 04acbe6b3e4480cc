//! Triangle censuses, `K_4` classification and the structural finders the
//! constructions rely on. All finders break ties lexicographically.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{GraphError, SignedCompleteGraph, Vertex};
use crate::group::{SignCounts, SignSet, F22};
use crate::switching::is_normalized_at;

/// Triangle sign counts over all `C(n,3)` triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriangleCensus {
    pub counts: SignCounts,
    pub diversity: usize,
}

impl TriangleCensus {
    pub fn signs(&self) -> SignSet {
        self.counts.support()
    }
}

pub fn triangle_census(g: &SignedCompleteGraph) -> Result<TriangleCensus, GraphError> {
    g.require_vertices(3)?;
    let n = g.n();
    let mut counts = SignCounts::new();
    for w in 3..=n {
        for v in 2..w {
            let s_vw = g.sign(v, w);
            for u in 1..v {
                counts.push(g.sign(u, v) + g.sign(u, w) + s_vw);
            }
        }
    }
    let diversity = counts.support().len();
    Ok(TriangleCensus { counts, diversity })
}

/// Set of triangle signs, without counting.
pub fn triangle_signs(g: &SignedCompleteGraph) -> SignSet {
    let n = g.n();
    let mut set = SignSet::EMPTY;
    for w in 3..=n {
        for v in 2..w {
            let s_vw = g.sign(v, w);
            for u in 1..v {
                set.insert(g.sign(u, v) + g.sign(u, w) + s_vw);
                if set.is_full() {
                    return set;
                }
            }
        }
    }
    set
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripleShape {
    /// The three edges share a vertex.
    Star,
    /// The three edges form a triangle.
    Triangle,
}

impl fmt::Display for TripleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleShape::Star => "star",
            TripleShape::Triangle => "triangle",
        })
    }
}

/// Exactly three edges of a `K_4` carrying a common sign, arranged as a star or triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommonSignTriple {
    pub sign: F22,
    pub shape: TripleShape,
    /// Edges as `(u, v)` with `u < v`, sorted.
    pub edges: [(Vertex, Vertex); 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum K4Class {
    /// The four triangle signs are pairwise distinct; `common` marks the starred-star case.
    AllDistinct { common: Option<CommonSignTriple> },
    /// Triangle signs `x, x, y, y` with `x <= y`; `x == y` when all four agree.
    TwoTwo(F22, F22),
}

impl K4Class {
    pub fn is_all_distinct(&self) -> bool {
        matches!(self, K4Class::AllDistinct { .. })
    }
}

/// Signs of the triangles of the `K_4` on `q`, each indexed by the vertex it omits:
/// entry `i` is the triangle on `q` minus `q[i]`.
#[inline]
pub fn k4_triangle_signs(g: &SignedCompleteGraph, q: [Vertex; 4]) -> [F22; 4] {
    let [a, b, c, d] = q;
    [g.tri(b, c, d), g.tri(a, c, d), g.tri(a, b, d), g.tri(a, b, c)]
}

#[inline]
fn pairwise_distinct(s: [F22; 4]) -> bool {
    SignSet::from_slice(&s).len() == 4
}

pub fn is_all_distinct_k4(g: &SignedCompleteGraph, q: [Vertex; 4]) -> bool {
    pairwise_distinct(k4_triangle_signs(g, q))
}

fn check_quad(g: &SignedCompleteGraph, q: [Vertex; 4]) -> Result<(), GraphError> {
    for (i, &v) in q.iter().enumerate() {
        g.check_vertex(v)?;
        if q[..i].contains(&v) {
            return Err(GraphError::RepeatedVertex(v));
        }
    }
    Ok(())
}

/// The common-sign triple of the `K_4` on `q`, if some sign sits on exactly
/// three edges forming a star or a triangle.
pub fn common_sign_triple(g: &SignedCompleteGraph, q: [Vertex; 4]) -> Option<CommonSignTriple> {
    let mut edges: Vec<(Vertex, Vertex, F22)> = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let (u, v) = (q[i].min(q[j]), q[i].max(q[j]));
            edges.push((u, v, g.sign(u, v)));
        }
    }
    for s in F22::ALL {
        let mut same: Vec<(Vertex, Vertex)> =
            edges.iter().filter(|e| e.2 == s).map(|e| (e.0, e.1)).collect();
        if same.len() != 3 {
            continue;
        }
        same.sort_unstable();
        let mut deg = [0usize; 4];
        for &(u, v) in &same {
            for w in [u, v] {
                deg[q.iter().position(|&x| x == w).unwrap()] += 1;
            }
        }
        let shape = if deg.contains(&3) {
            Some(TripleShape::Star)
        } else if deg.iter().filter(|&&d| d == 2).count() == 3 {
            Some(TripleShape::Triangle)
        } else {
            None
        };
        if let Some(shape) = shape {
            return Some(CommonSignTriple { sign: s, shape, edges: [same[0], same[1], same[2]] });
        }
    }
    None
}

pub fn classify_k4(g: &SignedCompleteGraph, q: [Vertex; 4]) -> Result<K4Class, GraphError> {
    check_quad(g, q)?;
    let t = k4_triangle_signs(g, q);
    if pairwise_distinct(t) {
        return Ok(K4Class::AllDistinct { common: common_sign_triple(g, q) });
    }
    // Each edge lies on two of the four triangles, so the signs sum to e and
    // a non-distinct pattern is forced to be x,x,y,y.
    let mut sorted = t;
    sorted.sort_unstable();
    debug_assert!(sorted[0] == sorted[1] && sorted[2] == sorted[3]);
    Ok(K4Class::TwoTwo(sorted[0], sorted[2]))
}

/// The lexicographically first 4-set whose triangles carry four distinct signs.
pub fn find_all_distinct_k4(g: &SignedCompleteGraph) -> Option<[Vertex; 4]> {
    let n = g.n();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    if is_all_distinct_k4(g, [a, b, c, d]) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Per-`K_4` classification summary over every 4-subset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct K4Summary {
    pub total: u64,
    pub all_distinct: u64,
    pub star_triples: u64,
    pub triangle_triples: u64,
    pub two_two: u64,
    pub uniform: u64,
}

pub fn k4_summary(g: &SignedCompleteGraph) -> K4Summary {
    let n = g.n();
    let mut s = K4Summary::default();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    s.total += 1;
                    match classify_k4(g, [a, b, c, d]).expect("valid quad") {
                        K4Class::AllDistinct { common } => {
                            s.all_distinct += 1;
                            match common.map(|t| t.shape) {
                                Some(TripleShape::Star) => s.star_triples += 1,
                                Some(TripleShape::Triangle) => s.triangle_triples += 1,
                                None => {}
                            }
                        }
                        K4Class::TwoTwo(x, y) if x == y => s.uniform += 1,
                        K4Class::TwoTwo(..) => s.two_two += 1,
                    }
                }
            }
        }
    }
    s
}

/// Dense table of hub-triangle signs: entry `(i, j)` is the sign of `T_{hub,i,j}`.
pub(crate) struct HubTable {
    n: usize,
    signs: Vec<F22>,
}

impl HubTable {
    pub(crate) fn new(g: &SignedCompleteGraph, hub: Vertex) -> Self {
        let n = g.n();
        let mut signs = alloc::vec![F22::E; (n + 1) * (n + 1)];
        for i in 1..=n {
            for j in 1..=n {
                if i != j && i != hub && j != hub {
                    signs[i * (n + 1) + j] = g.tri(hub, i, j);
                }
            }
        }
        HubTable { n, signs }
    }

    #[inline]
    pub(crate) fn get(&self, i: Vertex, j: Vertex) -> F22 {
        self.signs[i * (self.n + 1) + j]
    }
}

/// Calls `f` on each `(a, b, c, d)`, distinct and avoiding the hub, whose hub
/// triangles `T_{hub,a,b}`, `T_{hub,b,c}`, `T_{hub,c,d}` have pairwise distinct
/// signs, in lexicographic order, until `f` returns false.
fn visit_consecutive_triples<F: FnMut([Vertex; 4]) -> bool>(g: &SignedCompleteGraph, hub: Vertex, mut f: F) {
    let n = g.n();
    if n < 5 || hub == 0 || hub > n {
        return;
    }
    let t = HubTable::new(g, hub);
    let others: Vec<Vertex> = (1..=n).filter(|&v| v != hub).collect();
    for &a in &others {
        for &b in &others {
            if b == a {
                continue;
            }
            let x = t.get(a, b);
            for &c in &others {
                if c == a || c == b {
                    continue;
                }
                let y = t.get(b, c);
                if y == x {
                    continue;
                }
                for &d in &others {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let z = t.get(c, d);
                    if z != x && z != y && !f([a, b, c, d]) {
                        return;
                    }
                }
            }
        }
    }
}

/// The lexicographically smallest `(a, b, c, d)`, distinct and avoiding the hub,
/// such that `T_{hub,a,b}`, `T_{hub,b,c}`, `T_{hub,c,d}` have pairwise distinct signs.
pub fn find_consecutive_distinct_triple(g: &SignedCompleteGraph, hub: Vertex) -> Option<[Vertex; 4]> {
    let mut found = None;
    visit_consecutive_triples(g, hub, |q| {
        found = Some(q);
        false
    });
    found
}

/// Every tuple qualifying for [`find_consecutive_distinct_triple`], in lexicographic order.
pub fn consecutive_distinct_triples(g: &SignedCompleteGraph, hub: Vertex) -> Vec<[Vertex; 4]> {
    let mut all = Vec::new();
    visit_consecutive_triples(g, hub, |q| {
        all.push(q);
        true
    });
    all
}

/// Two hub triangles `T_{hub,a,b}`, `T_{hub,b,c}` sharing the hub edge to `b`
/// with different signs, plus a hub triangle `T_{hub,d,f}` on two further
/// vertices carrying a third sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedEdgeConfiguration {
    pub hub: Vertex,
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
    pub d: Vertex,
    pub f: Vertex,
    pub signs: [F22; 3],
}

/// Lexicographically first [`SharedEdgeConfiguration`] at `hub`, if any.
pub fn find_shared_edge_configuration(
    g: &SignedCompleteGraph,
    hub: Vertex,
) -> Option<SharedEdgeConfiguration> {
    let n = g.n();
    if n < 6 || hub == 0 || hub > n {
        return None;
    }
    let t = HubTable::new(g, hub);
    let others: Vec<Vertex> = (1..=n).filter(|&v| v != hub).collect();
    for &a in &others {
        for &b in &others {
            if b == a {
                continue;
            }
            let x = t.get(a, b);
            for &c in &others {
                if c == a || c == b {
                    continue;
                }
                let y = t.get(b, c);
                if y == x {
                    continue;
                }
                for &d in &others {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    for &f in &others {
                        if f <= d || f == a || f == b || f == c {
                            continue;
                        }
                        let z = t.get(d, f);
                        if z != x && z != y {
                            return Some(SharedEdgeConfiguration { hub, a, b, c, d, f, signs: [x, y, z] });
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusError {
    Graph(GraphError),
    NotNormalized(Vertex),
    /// No hub triangle realizes this sign.
    MissingSign(F22),
    /// The four edges do not carry four distinct signs.
    SignsNotDistinct,
    /// The four distinct-sign edges close a circle of this length.
    CycleAmongEdges { length: usize },
}

impl From<GraphError> for CensusError {
    fn from(e: GraphError) -> Self {
        CensusError::Graph(e)
    }
}

impl fmt::Display for CensusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusError::Graph(e) => write!(f, "{e}"),
            CensusError::NotNormalized(v) => write!(f, "graph is not normalized at vertex {v}"),
            CensusError::MissingSign(s) => write!(f, "no hub triangle has sign {s}"),
            CensusError::SignsNotDistinct => f.write_str("edges do not carry four distinct signs"),
            CensusError::CycleAmongEdges { length } => {
                write!(f, "distinct-sign edges contain a circle of length {length}")
            }
        }
    }
}

impl core::error::Error for CensusError {}

/// Shape of four edges that form a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForestCase {
    /// All four edges meet at `center`.
    CommonVertex { center: Vertex },
    /// Three edges meet at `center`; the fourth hangs off one of their far ends.
    StarPlusAttached { center: Vertex },
    /// Three edges meet at `center`; the fourth touches none of them.
    StarPlusDisjoint { center: Vertex },
    /// Every vertex has degree at most two: a union of vertex-disjoint paths.
    LinearForest,
}

impl ForestCase {
    pub fn case_number(&self) -> u8 {
        match self {
            ForestCase::CommonVertex { .. } => 1,
            ForestCase::StarPlusAttached { .. } => 2,
            ForestCase::StarPlusDisjoint { .. } => 3,
            ForestCase::LinearForest => 4,
        }
    }
}

/// Four distinct-sign edges read off a hub-normalized graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeStructure {
    pub hub: Vertex,
    /// `(u, v, sign)` with `u < v`, in sign order `e, a, b, c`.
    pub edges: [(Vertex, Vertex, F22); 4],
    pub case: ForestCase,
}

/// Classifies four edges as one of the four forest shapes, or reports the
/// circle they close.
pub fn classify_edge_forest(edges: &[(Vertex, Vertex); 4]) -> Result<ForestCase, CensusError> {
    let mut verts: Vec<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let idx = |v: Vertex| verts.iter().position(|&x| x == v).unwrap();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut deg = alloc::vec![0usize; verts.len()];
    for &(u, v) in edges {
        deg[idx(u)] += 1;
        deg[idx(v)] += 1;
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, idx(u)), find(&mut parent, idx(v)));
        if ru == rv {
            // Four edges on four vertices each of degree two is the square;
            // any other cycle among four edges is a triangle.
            let length = if verts.len() == 4 && deg.iter().all(|&d| d == 2) { 4 } else { 3 };
            return Err(CensusError::CycleAmongEdges { length });
        }
        parent[ru] = rv;
    }
    let max = *deg.iter().max().unwrap();
    let center = verts[deg.iter().position(|&d| d == max).unwrap()];
    Ok(match max {
        4 => ForestCase::CommonVertex { center },
        3 => {
            let fourth = edges.iter().find(|&&(u, v)| u != center && v != center).unwrap();
            let touches = edges
                .iter()
                .filter(|&&(u, v)| u == center || v == center)
                .any(|&(u, v)| {
                    let leaf = if u == center { v } else { u };
                    fourth.0 == leaf || fourth.1 == leaf
                });
            if touches {
                ForestCase::StarPlusAttached { center }
            } else {
                ForestCase::StarPlusDisjoint { center }
            }
        }
        _ => ForestCase::LinearForest,
    })
}

/// In a graph normalized at `hub`, picks for each sign the lexicographically
/// first hub triangle carrying it and classifies the four opposite edges.
pub fn distinct_sign_edge_structure(
    g: &SignedCompleteGraph,
    hub: Vertex,
) -> Result<EdgeStructure, CensusError> {
    g.require_vertices(5)?;
    g.check_vertex(hub)?;
    if !is_normalized_at(g, hub) {
        return Err(CensusError::NotNormalized(hub));
    }
    let mut chosen: [Option<(Vertex, Vertex, F22)>; 4] = [None; 4];
    for u in 1..=g.n() {
        for v in u + 1..=g.n() {
            if u == hub || v == hub {
                continue;
            }
            let s = g.sign(u, v);
            if chosen[s.index()].is_none() {
                chosen[s.index()] = Some((u, v, s));
            }
        }
    }
    let mut edges = [(0, 0, F22::E); 4];
    for (i, c) in chosen.iter().enumerate() {
        edges[i] = c.ok_or(CensusError::MissingSign(F22::ALL[i]))?;
    }
    let plain = [
        (edges[0].0, edges[0].1),
        (edges[1].0, edges[1].1),
        (edges[2].0, edges[2].1),
        (edges[3].0, edges[3].1),
    ];
    let case = classify_edge_forest(&plain)?;
    Ok(EdgeStructure { hub, edges, case })
}

/// Checks an arbitrary choice of four edges for distinct signs before classifying.
pub fn classify_distinct_sign_edges(
    g: &SignedCompleteGraph,
    edges: &[(Vertex, Vertex); 4],
) -> Result<ForestCase, CensusError> {
    let mut set = SignSet::EMPTY;
    for &(u, v) in edges {
        set.insert(g.try_sign(u, v)?);
    }
    if !set.is_full() {
        return Err(CensusError::SignsNotDistinct);
    }
    classify_edge_forest(edges)
}
