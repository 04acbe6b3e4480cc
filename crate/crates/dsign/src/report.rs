//! Reports for the analysis subcommands, in text and JSON.

use std::collections::BTreeMap;
use std::fmt;

use dsign_core::census::{k4_summary, triangle_census, K4Summary};
use dsign_core::graph::GraphError;
use dsign_core::oracle::{hamiltonian_spectrum_bounded, spectrum_witnesses, OracleError};
use dsign_core::solver::{construct_witnesses, predict_spectrum, verify_witnesses, SolverError, SpectrumPrediction};
use dsign_core::{Circle, SignCounts, Vertex, F22};
use serde::Serialize;

use crate::format::Instance;

/// Largest `n` for which `census` also enumerates the spectrum.
pub const CENSUS_SPECTRUM_MAX_N: usize = 9;

fn counts_map(c: &SignCounts) -> BTreeMap<String, u64> {
    F22::ALL.iter().map(|&x| (x.to_string(), c.count(x))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub sign: String,
    pub circle: Vec<Vertex>,
}

impl WitnessRecord {
    fn new(sign: F22, circle: &Circle) -> Self {
        WitnessRecord { sign: sign.to_string(), circle: circle.as_slice().to_vec() }
    }
}

impl fmt::Display for WitnessRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.sign)?;
        for v in &self.circle {
            write!(f, "{v} ")?;
        }
        write!(f, "{}", self.circle[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub kind: String,
    pub bound: String,
    pub reason: String,
}

impl From<&SpectrumPrediction> for PredictionRecord {
    fn from(p: &SpectrumPrediction) -> Self {
        PredictionRecord { kind: p.to_string(), bound: p.bound().to_string(), reason: p.provenance.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K4Record {
    pub total: u64,
    pub all_distinct: u64,
    pub all_distinct_with_star_triple: u64,
    pub all_distinct_with_triangle_triple: u64,
    pub two_two: u64,
    pub uniform: u64,
}

impl From<K4Summary> for K4Record {
    fn from(s: K4Summary) -> Self {
        K4Record {
            total: s.total,
            all_distinct: s.all_distinct,
            all_distinct_with_star_triple: s.star_triples,
            all_distinct_with_triangle_triple: s.triangle_triples,
            two_two: s.two_two,
            uniform: s.uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub label: String,
    pub n: usize,
    pub triangle_counts: BTreeMap<String, u64>,
    pub triangle_signs: String,
    pub diversity: usize,
    pub k4: K4Record,
    pub prediction: PredictionRecord,
    /// Oracle counts, for small `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<BTreeMap<String, u64>>,
}

pub fn census_report(inst: &Instance) -> Result<CensusReport, GraphError> {
    let g = &inst.graph;
    let census = triangle_census(g)?;
    let prediction = predict_spectrum(g)?;
    let spectrum = (g.n() <= CENSUS_SPECTRUM_MAX_N)
        .then(|| hamiltonian_spectrum_bounded(g, CENSUS_SPECTRUM_MAX_N).ok())
        .flatten()
        .map(|s| counts_map(&s.counts));
    Ok(CensusReport {
        label: inst.label(),
        n: g.n(),
        triangle_counts: counts_map(&census.counts),
        triangle_signs: census.signs().to_string(),
        diversity: census.diversity,
        k4: k4_summary(g).into(),
        prediction: (&prediction).into(),
        spectrum,
    })
}

fn write_counts(f: &mut fmt::Formatter<'_>, counts: &BTreeMap<String, u64>) -> fmt::Result {
    for x in F22::ALL {
        write!(f, " {x}={}", counts[&x.to_string()])?;
    }
    Ok(())
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {} (n = {})", self.label, self.n)?;
        write!(f, "triangles:")?;
        write_counts(f, &self.triangle_counts)?;
        writeln!(f)?;
        writeln!(f, "diversity {} with signs {}", self.diversity, self.triangle_signs)?;
        let k = &self.k4;
        writeln!(
            f,
            "K4s: {} total, {} all-distinct ({} star triple, {} triangle triple), {} x,x,y,y, {} uniform",
            k.total,
            k.all_distinct,
            k.all_distinct_with_star_triple,
            k.all_distinct_with_triangle_triple,
            k.two_two,
            k.uniform
        )?;
        write!(f, "predicted spectrum: {} ({})", self.prediction.kind, self.prediction.reason)?;
        if let Some(s) = &self.spectrum {
            write!(f, "\nspectrum:")?;
            write_counts(f, s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub label: String,
    pub n: usize,
    pub circles: u64,
    pub counts: BTreeMap<String, u64>,
    pub realized: String,
    pub prediction: PredictionRecord,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessRecord>>,
}

pub fn spectrum_report(inst: &Instance, bound: usize, with_witnesses: bool) -> Result<SpectrumReport, OracleError> {
    let g = &inst.graph;
    let spectrum = hamiltonian_spectrum_bounded(g, bound)?;
    let prediction = predict_spectrum(g).map_err(OracleError::Graph)?;
    let witnesses = if with_witnesses {
        let found = spectrum_witnesses(g, bound)?;
        Some(
            F22::ALL
                .iter()
                .zip(found.iter())
                .filter_map(|(&x, c)| c.as_ref().map(|c| WitnessRecord::new(x, c)))
                .collect(),
        )
    } else {
        None
    };
    let realized = spectrum.realized();
    Ok(SpectrumReport {
        label: inst.label(),
        n: g.n(),
        circles: spectrum.total(),
        counts: counts_map(&spectrum.counts),
        realized: realized.to_string(),
        prediction: (&prediction).into(),
        consistent: prediction.admits(realized),
        witnesses,
    })
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {} (n = {}): {} Hamiltonian circles", self.label, self.n, self.circles)?;
        write!(f, "counts:")?;
        write_counts(f, &self.counts)?;
        writeln!(f)?;
        writeln!(f, "realized {}", self.realized)?;
        write!(
            f,
            "predicted {}: {}",
            self.prediction.kind,
            if self.consistent { "consistent" } else { "INCONSISTENT" }
        )?;
        if let Some(ws) = &self.witnesses {
            for w in ws {
                write!(f, "\n  {w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructStatus {
    /// Four verified witnesses.
    Constructed,
    /// At most two triangle signs: the spectrum cannot be full.
    Refused,
    /// `n` below the constructive range.
    Unsupported,
    /// Neither the case analysis nor the fallback search found all four signs.
    CounterexampleCandidate,
    /// A witness set failed independent re-verification.
    VerificationFailed,
}

impl ConstructStatus {
    /// Whether the status is a failure of the theory or the construction.
    pub fn is_violation(self) -> bool {
        matches!(self, ConstructStatus::CounterexampleCandidate | ConstructStatus::VerificationFailed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructReport {
    pub label: String,
    pub n: usize,
    pub status: ConstructStatus,
    pub prediction: PredictionRecord,
    pub witnesses: Vec<WitnessRecord>,
    pub verified: bool,
    pub search_backed: bool,
    pub trace: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub fn construct_report(inst: &Instance) -> Result<ConstructReport, GraphError> {
    let g = &inst.graph;
    let prediction = predict_spectrum(g)?;
    let mut report = ConstructReport {
        label: inst.label(),
        n: g.n(),
        status: ConstructStatus::Constructed,
        prediction: (&prediction).into(),
        witnesses: Vec::new(),
        verified: false,
        search_backed: false,
        trace: Vec::new(),
        message: None,
    };
    match construct_witnesses(g) {
        Ok(ws) => {
            report.witnesses = ws.witnesses.iter().map(|w| WitnessRecord::new(w.sign, &w.circle)).collect();
            report.search_backed = ws.search_backed;
            report.trace = ws.trace.clone();
            match verify_witnesses(g, &ws) {
                Ok(()) => report.verified = true,
                Err(e) => {
                    report.status = ConstructStatus::VerificationFailed;
                    report.message = Some(e.to_string());
                }
            }
        }
        Err(SolverError::Graph(e)) => return Err(e),
        Err(e) => {
            report.status = match &e {
                SolverError::Refused(_) => ConstructStatus::Refused,
                SolverError::Unsupported { .. } => ConstructStatus::Unsupported,
                _ => ConstructStatus::CounterexampleCandidate,
            };
            if let SolverError::CounterexampleCandidate { trace, .. } = &e {
                report.trace = trace.clone();
            }
            report.message = Some(e.to_string());
        }
    }
    Ok(report)
}

impl ConstructReport {
    /// Text rendering; `with_trace` adds the case-analysis path.
    pub fn render(&self, with_trace: bool) -> String {
        let mut out = format!(
            "instance {} (n = {}): {}",
            self.label,
            self.n,
            serde_json::to_value(self.status).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
        );
        if self.status == ConstructStatus::Constructed {
            out.push_str(if self.verified { ", verified" } else { ", NOT verified" });
            if self.search_backed {
                out.push_str(", search-backed");
            }
        }
        for w in &self.witnesses {
            out.push_str(&format!("\n  {w}"));
        }
        if let Some(m) = &self.message {
            out.push_str(&format!("\n  {m}"));
        }
        if with_trace && !self.trace.is_empty() {
            out.push_str(&format!("\n  trace: {}", self.trace.join(" / ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::Metadata;
    use dsign_core::gen::{gen_random, share_vertex_k4};

    fn inst(g: dsign_core::SignedCompleteGraph) -> Instance {
        Instance { graph: g, metadata: Metadata::default() }
    }

    #[test]
    fn census_of_share_vertex_k4() {
        let r = census_report(&inst(share_vertex_k4())).unwrap();
        assert_eq!(r.diversity, 4);
        assert_eq!(r.k4.all_distinct, 1);
        assert_eq!(r.k4.all_distinct_with_star_triple, 1);
        assert_eq!(r.spectrum.as_ref().unwrap().values().sum::<u64>(), 3);
    }

    #[test]
    fn spectrum_witnesses_match_counts() {
        let r = spectrum_report(&inst(gen_random(6, 3)), 10, true).unwrap();
        assert_eq!(r.circles, 60);
        assert!(r.consistent);
        let nonzero = r.counts.values().filter(|&&c| c > 0).count();
        assert_eq!(r.witnesses.unwrap().len(), nonzero);
    }

    #[test]
    fn construct_statuses() {
        let r = construct_report(&inst(dsign_core::SignedCompleteGraph::identity(6))).unwrap();
        assert_eq!(r.status, ConstructStatus::Refused);
        let r = construct_report(&inst(share_vertex_k4())).unwrap();
        assert_eq!(r.status, ConstructStatus::Unsupported);
        let mut seed = 0;
        let g = loop {
            let g = gen_random(7, seed);
            if dsign_core::census::triangle_signs(&g).len() >= 3 {
                break g;
            }
            seed += 1;
        };
        let r = construct_report(&inst(g)).unwrap();
        assert_eq!(r.status, ConstructStatus::Constructed);
        assert!(r.verified);
        assert_eq!(r.witnesses.len(), 4);
        assert!(!r.render(true).is_empty());
    }
}
