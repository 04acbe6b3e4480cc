//! Brute-force ground truth: every Hamiltonian circle and path, enumerated.
//!
//! Circles are enumerated as lexicographic permutations of `2..=n` behind a
//! pinned vertex `1`, keeping only those whose second vertex is smaller than
//! the last so that each undirected circle appears once. There are
//! `(n-1)!/2` of them.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{edge_index, Circle, GraphError, Path, SignedCompleteGraph, Vertex};
use crate::group::{SignCounts, SignSet, F22};

/// Largest `n` the oracle enumerates unless told otherwise (181,440 circles).
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { n: usize, bound: usize },
    TooSmall { n: usize, needed: usize },
    /// The path report is defined on `K_4` only.
    NotK4(usize),
    Graph(GraphError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, bound } => {
                write!(f, "n = {n} exceeds the enumeration bound {bound}")
            }
            OracleError::TooSmall { n, needed } => write!(f, "n = {n} is below the minimum {needed}"),
            OracleError::NotK4(n) => write!(f, "path report needs n = 4, got {n}"),
            OracleError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OracleError {}

impl From<GraphError> for OracleError {
    fn from(e: GraphError) -> Self {
        OracleError::Graph(e)
    }
}

/// Counts of Hamiltonian circles per sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Spectrum {
    pub counts: SignCounts,
}

impl Spectrum {
    pub fn realized(&self) -> SignSet {
        self.counts.support()
    }

    pub fn total(&self) -> u64 {
        self.counts.total()
    }

    pub fn merge(&mut self, other: &Spectrum) {
        self.counts.merge(&other.counts);
    }
}

/// `(n-1)!/2` for `n >= 3`.
pub fn circle_count(n: usize) -> u64 {
    if n < 3 {
        return 0;
    }
    (1..n as u64).product::<u64>() / 2
}

/// Rearranges `xs` into the next lexicographic permutation; false once exhausted.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Calls `f` with the vertex sequence of every Hamiltonian circle of `K_n`
/// whose second vertex is `second` (or every circle when `second` is `None`).
fn visit_circles<F: FnMut(&[Vertex])>(n: usize, second: Option<Vertex>, mut f: F) {
    if n < 3 {
        return;
    }
    let mut buf: Vec<Vertex> = Vec::with_capacity(n);
    buf.push(1);
    match second {
        None => buf.extend(2..=n),
        Some(s) => {
            buf.push(s);
            buf.extend((2..=n).filter(|&v| v != s));
        }
    }
    let fixed = if second.is_some() { 2 } else { 1 };
    loop {
        if buf[1] < buf[n - 1] {
            f(&buf);
        }
        if !next_permutation(&mut buf[fixed..]) {
            break;
        }
    }
}

/// Every Hamiltonian circle of `K_n` once, in enumeration order.
pub fn hamiltonian_circles(n: usize) -> Vec<Circle> {
    let mut out = Vec::new();
    visit_circles(n, None, |vs| out.push(Circle::new(vs.to_vec()).expect("distinct vertices")));
    out
}

fn check_bound(g: &SignedCompleteGraph, bound: usize) -> Result<(), OracleError> {
    if g.n() < 3 {
        return Err(OracleError::TooSmall { n: g.n(), needed: 3 });
    }
    if g.n() > bound {
        return Err(OracleError::TooLarge { n: g.n(), bound });
    }
    Ok(())
}

pub fn hamiltonian_spectrum(g: &SignedCompleteGraph) -> Result<Spectrum, OracleError> {
    hamiltonian_spectrum_bounded(g, DEFAULT_ENUMERATION_BOUND)
}

pub fn hamiltonian_spectrum_bounded(g: &SignedCompleteGraph, bound: usize) -> Result<Spectrum, OracleError> {
    check_bound(g, bound)?;
    let mut counts = SignCounts::new();
    visit_circles(g.n(), None, |vs| counts.push(g.cycle_sign(vs)));
    Ok(Spectrum { counts })
}

/// The circles whose second vertex is `second`; partitions over `second` in
/// `2..=n` cover the whole enumeration and can be merged in any order.
pub fn spectrum_partition(
    g: &SignedCompleteGraph,
    second: Vertex,
    bound: usize,
) -> Result<Spectrum, OracleError> {
    check_bound(g, bound)?;
    if second < 2 || second > g.n() {
        return Err(OracleError::Graph(GraphError::VertexOutOfRange(second)));
    }
    let mut counts = SignCounts::new();
    visit_circles(g.n(), Some(second), |vs| counts.push(g.cycle_sign(vs)));
    Ok(Spectrum { counts })
}

/// The first circle in enumeration order for each realized sign.
pub fn spectrum_witnesses(g: &SignedCompleteGraph, bound: usize) -> Result<[Option<Circle>; 4], OracleError> {
    check_bound(g, bound)?;
    let mut out: [Option<Circle>; 4] = [None, None, None, None];
    let mut found = 0;
    visit_circles(g.n(), None, |vs| {
        if found == 4 {
            return;
        }
        let s = g.cycle_sign(vs);
        if out[s.index()].is_none() {
            out[s.index()] = Some(Circle::new(vs.to_vec()).expect("distinct vertices"));
            found += 1;
        }
    });
    Ok(out)
}

/// Precomputed edge indices of every Hamiltonian circle of `K_n`, for sweeps
/// that evaluate the same enumeration on many graphs.
#[derive(Debug, Clone)]
pub struct CircleTable {
    n: usize,
    edges: Vec<u16>,
}

impl CircleTable {
    pub fn new(n: usize) -> Result<Self, OracleError> {
        if n < 3 {
            return Err(OracleError::TooSmall { n, needed: 3 });
        }
        if n > DEFAULT_ENUMERATION_BOUND {
            return Err(OracleError::TooLarge { n, bound: DEFAULT_ENUMERATION_BOUND });
        }
        let mut edges = Vec::with_capacity(circle_count(n) as usize * n);
        visit_circles(n, None, |vs| {
            for i in 0..n {
                edges.push(edge_index(vs[i], vs[(i + 1) % n]) as u16);
            }
        });
        Ok(CircleTable { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Spectrum of `g`, which must have exactly `n` vertices.
    pub fn spectrum(&self, g: &SignedCompleteGraph) -> Spectrum {
        assert_eq!(g.n(), self.n, "graph size does not match table");
        let signs = g.edge_signs();
        let mut counts = SignCounts::new();
        for circle in self.edges.chunks_exact(self.n) {
            let s: F22 = circle.iter().map(|&e| signs[e as usize]).sum();
            counts.push(s);
        }
        Spectrum { counts }
    }

    /// Realized set only; stops early once all four signs appear.
    pub fn realized(&self, g: &SignedCompleteGraph) -> SignSet {
        assert_eq!(g.n(), self.n, "graph size does not match table");
        let signs = g.edge_signs();
        let mut set = SignSet::EMPTY;
        for circle in self.edges.chunks_exact(self.n) {
            let s: F22 = circle.iter().map(|&e| signs[e as usize]).sum();
            set.insert(s);
            if set.is_full() {
                break;
            }
        }
        set
    }
}

/// Sign multiset of every Hamiltonian path that starts at `start` (`(n-1)!` paths).
pub fn hamiltonian_paths_spectrum(
    g: &SignedCompleteGraph,
    start: Vertex,
) -> Result<SignCounts, OracleError> {
    hamiltonian_paths_spectrum_bounded(g, start, DEFAULT_ENUMERATION_BOUND)
}

pub fn hamiltonian_paths_spectrum_bounded(
    g: &SignedCompleteGraph,
    start: Vertex,
    bound: usize,
) -> Result<SignCounts, OracleError> {
    g.check_vertex(start)?;
    if g.n() < 2 {
        return Err(OracleError::TooSmall { n: g.n(), needed: 2 });
    }
    if g.n() > bound {
        return Err(OracleError::TooLarge { n: g.n(), bound });
    }
    let mut counts = SignCounts::new();
    let mut rest: Vec<Vertex> = g.vertices().filter(|&v| v != start).collect();
    loop {
        let mut s = g.sign(start, rest[0]);
        s += g.path_sign(&rest);
        counts.push(s);
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(counts)
}

/// The twelve Hamiltonian paths of a `K_4`, grouped two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMultisetReport {
    /// Every undirected Hamiltonian path with its sign, in canonical order.
    pub paths: Vec<(Path, F22)>,
    /// Entry `i` is the multiset over the six directed paths leaving vertex `i + 1`.
    pub per_start: [SignCounts; 4],
    /// Paths by endpoint pair: `{1,2}|{3,4}`, `{1,4}|{2,3}`, `{1,3}|{2,4}`.
    pub groups: [Vec<(Path, F22)>; 3],
    pub totals: SignCounts,
}

/// Which of the three endpoint groups a `K_4` path with these ends belongs to.
pub fn k4_path_group(u: Vertex, v: Vertex) -> usize {
    match (u.min(v), u.max(v)) {
        (1, 2) | (3, 4) => 0,
        (1, 4) | (2, 3) => 1,
        _ => 2,
    }
}

pub fn k4_path_report(g: &SignedCompleteGraph) -> Result<PathMultisetReport, OracleError> {
    if g.n() != 4 {
        return Err(OracleError::NotK4(g.n()));
    }
    let mut per_start = [SignCounts::new(); 4];
    let mut paths = Vec::with_capacity(12);
    let mut perm: Vec<Vertex> = alloc::vec![1, 2, 3, 4];
    loop {
        let s = g.path_sign(&perm);
        per_start[perm[0] - 1].push(s);
        if perm[0] < perm[3] {
            paths.push((Path::new(perm.clone())?, s));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    paths.sort();
    let mut groups: [Vec<(Path, F22)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut totals = SignCounts::new();
    for (p, s) in &paths {
        let vs = p.as_slice();
        groups[k4_path_group(vs[0], vs[3])].push((p.clone(), *s));
        totals.push(*s);
    }
    Ok(PathMultisetReport { paths, per_start, groups, totals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::F22 as G;

    fn share_vertex_k4() -> SignedCompleteGraph {
        SignedCompleteGraph::build(
            4,
            &[(1, 2, G::B), (1, 3, G::C), (1, 4, G::A), (2, 3, G::E), (3, 4, G::A), (2, 4, G::A)],
        )
        .unwrap()
    }

    #[test]
    fn circle_counts() {
        assert_eq!(hamiltonian_circles(3).len(), 1);
        assert_eq!(hamiltonian_circles(4).len(), 3);
        assert_eq!(hamiltonian_circles(6).len(), 60);
        assert_eq!(hamiltonian_circles(7).len(), 360);
        assert_eq!(circle_count(7), 360);
        let mut all = hamiltonian_circles(6);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 60);
    }

    #[test]
    fn identity_spectrum() {
        let s = hamiltonian_spectrum(&SignedCompleteGraph::identity(6)).unwrap();
        assert_eq!(s.counts, SignCounts([60, 0, 0, 0]));
        let s = hamiltonian_spectrum(&share_vertex_k4()).unwrap();
        assert_eq!(s.total(), 3);
    }

    #[test]
    fn bound_enforced() {
        let g = SignedCompleteGraph::identity(11);
        assert_eq!(
            hamiltonian_spectrum(&g),
            Err(OracleError::TooLarge { n: 11, bound: 10 })
        );
        assert!(hamiltonian_spectrum_bounded(&SignedCompleteGraph::identity(7), 6).is_err());
        assert!(hamiltonian_spectrum(&SignedCompleteGraph::identity(2)).is_err());
    }

    #[test]
    fn partitions_merge_to_whole() {
        let mut g = SignedCompleteGraph::identity(6);
        g.set_sign(1, 2, G::A);
        g.set_sign(3, 5, G::B);
        g.set_sign(4, 6, G::C);
        let whole = hamiltonian_spectrum(&g).unwrap();
        let mut merged = Spectrum::default();
        for second in 2..=6 {
            merged.merge(&spectrum_partition(&g, second, 10).unwrap());
        }
        assert_eq!(merged, whole);
        assert_eq!(CircleTable::new(6).unwrap().spectrum(&g), whole);
    }

    #[test]
    fn witnesses_match_realized() {
        let mut g = SignedCompleteGraph::identity(6);
        g.set_sign(2, 3, G::A);
        g.set_sign(3, 4, G::B);
        g.set_sign(4, 5, G::C);
        let spec = hamiltonian_spectrum(&g).unwrap();
        let w = spectrum_witnesses(&g, 10).unwrap();
        for x in G::ALL {
            assert_eq!(w[x.index()].is_some(), spec.realized().contains(x));
            if let Some(c) = &w[x.index()] {
                assert_eq!(g.walk_sign(c).unwrap(), x);
            }
        }
    }

    #[test]
    fn share_vertex_paths() {
        let r = k4_path_report(&share_vertex_k4()).unwrap();
        assert_eq!(r.paths.len(), 12);
        assert_eq!(r.per_start[0], SignCounts([2, 0, 2, 2]));
        assert_eq!(r.totals.count(G::A), 0);
        assert!(r.groups.iter().all(|g| g.len() == 4));
        for x in G::ALL {
            assert_eq!(r.totals.count(x) % 2, 0);
        }
        assert_eq!(
            hamiltonian_paths_spectrum(&share_vertex_k4(), 1).unwrap(),
            SignCounts([2, 0, 2, 2])
        );
    }

    #[test]
    fn identity_paths() {
        let r = k4_path_report(&SignedCompleteGraph::identity(4)).unwrap();
        assert_eq!(r.totals, SignCounts([12, 0, 0, 0]));
        let p = hamiltonian_paths_spectrum(&SignedCompleteGraph::identity(5), 3).unwrap();
        assert_eq!(p, SignCounts([24, 0, 0, 0]));
        assert_eq!(k4_path_report(&SignedCompleteGraph::identity(5)), Err(OracleError::NotK4(5)));
    }

    #[test]
    fn next_permutation_counts() {
        let mut xs = [1, 2, 3, 4];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(xs, [4, 3, 2, 1]);
    }
}
