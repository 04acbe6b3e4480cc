//! Switching functions and normalization at a vertex.
//!
//! Switching by `ζ` relabels `σ'(u,v) = ζ(u) + σ(u,v) + ζ(v)`. Every closed
//! walk passes through each of its vertices twice, so circle and triangle
//! signs are unchanged. Path signs are not: the endpoints contribute once.

use alloc::vec::Vec;

use crate::graph::{GraphError, SignedCompleteGraph, Vertex};
use crate::group::F22;

/// A value `ζ(v)` for every vertex `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwitchingFunction {
    values: Vec<F22>,
}

impl SwitchingFunction {
    pub fn new(values: Vec<F22>) -> Self {
        SwitchingFunction { values }
    }

    pub fn trivial(n: usize) -> Self {
        SwitchingFunction { values: alloc::vec![F22::E; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> F22 {
        self.values[v - 1]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|z| z.is_identity())
    }

    pub fn values(&self) -> &[F22] {
        &self.values
    }
}

/// Applies `ζ` to every edge. `ζ` must be defined on every vertex of `g`.
pub fn apply(g: &SignedCompleteGraph, z: &SwitchingFunction) -> Result<SignedCompleteGraph, GraphError> {
    if z.len() != g.n() {
        return Err(GraphError::WrongEdgeCount { expected: g.n(), got: z.len() });
    }
    let mut out = g.clone();
    for v in 2..=g.n() {
        for u in 1..v {
            out.set_sign(u, v, z.get(u) + g.sign(u, v) + z.get(v));
        }
    }
    Ok(out)
}

/// Switches so that every edge at `v` carries `e`.
///
/// Uses `ζ(u) = σ(u, v)` for `u != v` and `ζ(v) = e`; afterwards the sign of
/// `{u, w}` equals the old sign of the triangle `u w v`.
pub fn normalize_at(
    g: &SignedCompleteGraph,
    v: Vertex,
) -> Result<(SignedCompleteGraph, SwitchingFunction), GraphError> {
    g.check_vertex(v)?;
    let z = SwitchingFunction::new(
        g.vertices().map(|u| if u == v { F22::E } else { g.sign(u, v) }).collect(),
    );
    let out = apply(g, &z)?;
    Ok((out, z))
}

/// Like [`normalize_at`] but only returns the switched graph.
pub fn normalized(g: &SignedCompleteGraph, v: Vertex) -> Result<SignedCompleteGraph, GraphError> {
    normalize_at(g, v).map(|(h, _)| h)
}

/// Whether every edge at `v` carries `e`.
pub fn is_normalized_at(g: &SignedCompleteGraph, v: Vertex) -> bool {
    g.vertices().filter(|&u| u != v).all(|u| g.sign(u, v).is_identity())
}
