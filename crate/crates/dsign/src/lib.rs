//! Instance files, reports and parallel sweeps on top of `dsign-core`.

pub mod format;
pub mod report;
pub mod runner;

use dsign_core::gen::{gen_random, named_instance, normalized_instance_at};
use dsign_core::SignedCompleteGraph;
use thiserror::Error;

use crate::format::{Instance, Metadata};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse instance spec `{spec}`: {reason}")]
pub struct SpecError {
    pub spec: String,
    pub reason: String,
}

/// Builds an instance from an inline spec: `share_vertex_k4`, `triangle_k4`,
/// `identity(N)`, `random(N,SEED)` or `normalized(N,INDEX)`.
pub fn instance_from_spec(spec: &str) -> Result<Instance, SpecError> {
    let spec = spec.trim();
    let err = |reason: String| SpecError { spec: spec.to_string(), reason };
    let args = |prefix: &str| -> Option<Vec<u64>> {
        let inner = spec.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
        inner.split(',').map(|a| a.trim().parse().ok()).collect()
    };
    let (graph, seed): (SignedCompleteGraph, Option<u64>) = if let Some(a) = args("random") {
        let [n, seed] = a[..] else { return Err(err("expected random(N,SEED)".into())) };
        if n < 3 || n > dsign_core::graph::MAX_VERTICES as u64 {
            return Err(err(format!("n must be between 3 and {}", dsign_core::graph::MAX_VERTICES)));
        }
        (gen_random(n as usize, seed), Some(seed))
    } else if let Some(a) = args("normalized") {
        let [n, index] = a[..] else { return Err(err("expected normalized(N,INDEX)".into())) };
        (normalized_instance_at(n as usize, index).map_err(|e| err(e.to_string()))?, None)
    } else {
        (named_instance(spec).map_err(|e| err(e.to_string()))?, None)
    };
    Ok(Instance {
        graph,
        metadata: Metadata { name: Some(spec.to_string()), seed, generator: Some(spec.to_string()) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(instance_from_spec("triangle_k4").unwrap().graph, dsign_core::gen::triangle_k4());
        assert_eq!(instance_from_spec("identity(5)").unwrap().graph.n(), 5);
        assert_eq!(instance_from_spec("random(7, 3)").unwrap().graph, gen_random(7, 3));
        assert_eq!(instance_from_spec("normalized(6,0)").unwrap().graph, SignedCompleteGraph::identity(6));
        assert!(instance_from_spec("random(7)").is_err());
        assert!(instance_from_spec("normalized(9,0)").is_err());
        assert!(instance_from_spec("petersen").is_err());
    }
}
