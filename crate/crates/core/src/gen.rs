//! Instance generation: exhaustive hub-normalized labelings, seeded random
//! instances and the named figures.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{edge_count, edge_index, Circle, SignedCompleteGraph, Vertex};
use crate::group::F22;
use crate::switching::SwitchingFunction;

/// Smallest and largest `n` for the exhaustive normalized stream.
pub const NORMALIZED_MIN_N: usize = 4;
pub const NORMALIZED_MAX_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    UnsupportedOrder { n: usize, min: usize, max: usize },
    IndexOutOfRange { index: u64, size: u64 },
    UnknownName(String),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::UnsupportedOrder { n, min, max } => {
                write!(f, "n = {n} is outside the supported range {min}..={max}")
            }
            GenError::IndexOutOfRange { index, size } => {
                write!(f, "index {index} is outside a domain of {size} instances")
            }
            GenError::UnknownName(name) => write!(f, "unknown named instance `{name}`"),
        }
    }
}

impl core::error::Error for GenError {}

/// Number of free edges once the star at vertex 1 is pinned: `C(n-1, 2)`.
pub fn normalized_free_edges(n: usize) -> usize {
    edge_count(n.saturating_sub(1))
}

/// `4^{C(n-1,2)}`.
pub fn normalized_domain_size(n: usize) -> u64 {
    1u64 << (2 * normalized_free_edges(n))
}

fn check_normalized_order(n: usize) -> Result<(), GenError> {
    if !(NORMALIZED_MIN_N..=NORMALIZED_MAX_N).contains(&n) {
        return Err(GenError::UnsupportedOrder { n, min: NORMALIZED_MIN_N, max: NORMALIZED_MAX_N });
    }
    Ok(())
}

/// Position in the full edge array of the `k`-th free edge. Free edges avoid
/// vertex 1 and are ordered colexicographically, which makes `k` equal to the
/// edge index of `{u-1, v-1}`.
fn free_edge_slots(n: usize) -> Vec<usize> {
    let mut slots = alloc::vec![0; normalized_free_edges(n)];
    for v in 3..=n {
        for u in 2..v {
            slots[edge_index(u - 1, v - 1)] = edge_index(u, v);
        }
    }
    slots
}

/// The labeling with index `index`: base-4 digits, least significant first,
/// assigned to the free edges; the star at vertex 1 is all `e`.
pub fn normalized_instance_at(n: usize, index: u64) -> Result<SignedCompleteGraph, GenError> {
    check_normalized_order(n)?;
    let size = normalized_domain_size(n);
    if index >= size {
        return Err(GenError::IndexOutOfRange { index, size });
    }
    let mut signs = alloc::vec![F22::E; edge_count(n)];
    for (k, slot) in free_edge_slots(n).into_iter().enumerate() {
        signs[slot] = F22::from_bits((index >> (2 * k)) as u8);
    }
    Ok(SignedCompleteGraph::from_edge_signs(n, signs).expect("edge count matches"))
}

/// Lazy stream over a range of hub-normalized labelings, in index order.
///
/// Successive instances differ by a base-4 increment, so each step touches
/// only the edges whose digit changed.
#[derive(Debug, Clone)]
pub struct NormalizedLabelings {
    slots: Vec<usize>,
    signs: Vec<F22>,
    n: usize,
    next: u64,
    end: u64,
}

impl NormalizedLabelings {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the instance the next call to `next` yields.
    pub fn position(&self) -> u64 {
        self.next
    }
}

/// Every hub-normalized labeling of `K_n`.
pub fn gen_exhaustive_normalized(n: usize) -> Result<NormalizedLabelings, GenError> {
    gen_normalized_range(n, 0, normalized_domain_size(n.clamp(NORMALIZED_MIN_N, NORMALIZED_MAX_N)))
}

/// The labelings with indices in `start..end`, for splitting across workers.
pub fn gen_normalized_range(n: usize, start: u64, end: u64) -> Result<NormalizedLabelings, GenError> {
    check_normalized_order(n)?;
    let size = normalized_domain_size(n);
    if end > size || start > end {
        return Err(GenError::IndexOutOfRange { index: end.max(start), size });
    }
    let first = if start < size { normalized_instance_at(n, start)? } else { SignedCompleteGraph::identity(n) };
    Ok(NormalizedLabelings {
        slots: free_edge_slots(n),
        signs: first.edge_signs().to_vec(),
        n,
        next: start,
        end,
    })
}

impl Iterator for NormalizedLabelings {
    type Item = SignedCompleteGraph;

    fn next(&mut self) -> Option<SignedCompleteGraph> {
        if self.next >= self.end {
            return None;
        }
        let out = SignedCompleteGraph::from_edge_signs(self.n, self.signs.clone()).expect("edge count matches");
        self.next += 1;
        for &slot in &self.slots {
            let s = F22::from_bits(self.signs[slot].bits().wrapping_add(1));
            self.signs[slot] = s;
            if !s.is_identity() {
                break;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for NormalizedLabelings {}

/// Deterministic source of random instances, switchings and circles.
///
/// Instance `i` of a seeded batch uses ChaCha stream `i`, so batches can be
/// split across workers and replayed one instance at a time.
#[derive(Debug, Clone)]
pub struct InstanceRng {
    rng: ChaCha8Rng,
}

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn for_instance(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        InstanceRng { rng }
    }

    pub fn sign(&mut self) -> F22 {
        F22::from_bits((self.rng.next_u32() & 3) as u8)
    }

    /// Uniform in `0..bound` by rejection.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0 && bound <= u32::MAX as usize);
        let bound = bound as u32;
        let zone = u32::MAX - u32::MAX % bound;
        loop {
            let x = self.rng.next_u32();
            if x < zone {
                return (x % bound) as usize;
            }
        }
    }

    pub fn graph(&mut self, n: usize) -> SignedCompleteGraph {
        let signs = (0..edge_count(n)).map(|_| self.sign()).collect();
        SignedCompleteGraph::from_edge_signs(n, signs).expect("edge count matches")
    }

    pub fn switching(&mut self, n: usize) -> SwitchingFunction {
        SwitchingFunction::new((0..n).map(|_| self.sign()).collect())
    }

    /// Uniformly shuffled `1..=n`.
    pub fn permutation(&mut self, n: usize) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = (1..=n).collect();
        for i in (1..n).rev() {
            vs.swap(i, self.below(i + 1));
        }
        vs
    }

    pub fn hamiltonian_circle(&mut self, n: usize) -> Circle {
        Circle::new(self.permutation(n)).expect("permutation is simple")
    }
}

/// Uniform independent edge signs; identical `(n, seed)` gives an identical instance.
pub fn gen_random(n: usize, seed: u64) -> SignedCompleteGraph {
    InstanceRng::new(seed).graph(n)
}

/// Instance `index` of the seeded batch `seed`.
pub fn gen_random_indexed(n: usize, seed: u64, index: u64) -> SignedCompleteGraph {
    InstanceRng::for_instance(seed, index).graph(n)
}

/// Three edges of sign `a` sharing vertex 4.
pub fn share_vertex_k4() -> SignedCompleteGraph {
    SignedCompleteGraph::build(
        4,
        &[(1, 2, F22::B), (1, 3, F22::C), (1, 4, F22::A), (2, 3, F22::E), (3, 4, F22::A), (2, 4, F22::A)],
    )
    .expect("complete labeling")
}

/// Three edges of sign `a` forming the triangle `1 2 3`.
pub fn triangle_k4() -> SignedCompleteGraph {
    SignedCompleteGraph::build(
        4,
        &[(1, 2, F22::A), (1, 3, F22::A), (1, 4, F22::E), (2, 3, F22::A), (3, 4, F22::B), (2, 4, F22::C)],
    )
    .expect("complete labeling")
}

/// Names accepted by [`named_instance`], for help text.
pub const NAMED_INSTANCES: &[&str] = &["share_vertex_k4", "triangle_k4", "identity(n)"];

/// `share_vertex_k4`, `triangle_k4` or `identity(n)` for `1 <= n <= 64`.
pub fn named_instance(name: &str) -> Result<SignedCompleteGraph, GenError> {
    let name = name.trim();
    match name {
        "share_vertex_k4" => return Ok(share_vertex_k4()),
        "triangle_k4" => return Ok(triangle_k4()),
        _ => {}
    }
    let n = name
        .strip_prefix("identity(")
        .and_then(|rest| rest.strip_suffix(')'))
        .and_then(|digits| digits.trim().parse::<usize>().ok())
        .filter(|&n| (1..=crate::graph::MAX_VERTICES).contains(&n))
        .ok_or_else(|| GenError::UnknownName(name.into()))?;
    Ok(SignedCompleteGraph::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{k4_triangle_signs, triangle_census};
    use crate::switching::is_normalized_at;

    #[test]
    fn domain_sizes() {
        assert_eq!(normalized_domain_size(4), 64);
        assert_eq!(normalized_domain_size(6), 1 << 20);
        assert_eq!(gen_exhaustive_normalized(4).unwrap().count(), 64);
        assert_eq!(gen_exhaustive_normalized(5).unwrap().len(), 4096);
        assert!(gen_exhaustive_normalized(3).is_err());
        assert!(gen_exhaustive_normalized(8).is_err());
    }

    #[test]
    fn index_zero_is_identity() {
        assert_eq!(normalized_instance_at(6, 0).unwrap(), SignedCompleteGraph::identity(6));
        assert_eq!(
            gen_exhaustive_normalized(6).unwrap().next().unwrap(),
            SignedCompleteGraph::identity(6)
        );
    }

    #[test]
    fn stream_matches_indexing_and_is_normalized() {
        let all: Vec<_> = gen_exhaustive_normalized(5).unwrap().collect();
        for (i, g) in all.iter().enumerate().step_by(37) {
            assert_eq!(*g, normalized_instance_at(5, i as u64).unwrap());
            assert!(is_normalized_at(g, 1));
        }
        let mut sorted: Vec<_> = all.iter().map(|g| g.edge_signs().to_vec()).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 4096);
        let tail: Vec<_> = gen_normalized_range(5, 4000, 4096).unwrap().collect();
        assert_eq!(tail.as_slice(), &all[4000..]);
        assert!(gen_normalized_range(5, 0, 4097).is_err());
        assert!(normalized_instance_at(5, 4096).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(gen_random(7, 42), gen_random(7, 42));
        assert_eq!(gen_random_indexed(6, 1, 9), gen_random_indexed(6, 1, 9));
        assert_eq!(gen_random(7, 3).n(), 7);
    }

    #[test]
    fn random_circles_are_hamiltonian() {
        let mut rng = InstanceRng::new(5);
        for n in 3..9 {
            assert!(rng.hamiltonian_circle(n).is_hamiltonian(n));
        }
    }

    #[test]
    fn named_figures() {
        let expected = [F22::E, F22::C, F22::B, F22::A];
        assert_eq!(k4_triangle_signs(&named_instance("share_vertex_k4").unwrap(), [1, 2, 3, 4]), expected);
        assert_eq!(k4_triangle_signs(&named_instance("triangle_k4").unwrap(), [1, 2, 3, 4]), expected);
        let id = named_instance("identity(5)").unwrap();
        assert_eq!(triangle_census(&id).unwrap().diversity, 1);
        assert!(named_instance("petersen").is_err());
        assert!(named_instance("identity(0)").is_err());
    }
}
