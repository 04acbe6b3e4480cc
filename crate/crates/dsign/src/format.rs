//! Instance files: a line format for humans and a JSON object for tools.
//!
//! Line format, one record:
//!
//! ```text
//! # name=share_vertex_k4
//! n=4
//! 1 2 b
//! 1 3 c
//! ...
//! ```
//!
//! `# key=value` lines before the header carry metadata (`name`, `seed`,
//! `generator`); other `#` lines and blank lines are ignored. A file may hold
//! several records, each starting at its metadata or `n=` header. The JSON
//! variant is one object per line with the same fields.

use std::collections::HashMap;
use std::fmt::Write as _;

use dsign_core::graph::{edge_count, GraphError, MAX_VERTICES};
use dsign_core::{SignedCompleteGraph, Vertex, F22};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.seed.is_none() && self.generator.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: Vertex,
    pub v: Vertex,
    #[serde(with = "sign_token")]
    pub sign: F22,
}

/// A complete edge labeling plus optional metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: expected a header `n=<N>`, found `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: edge line before any `n=<N>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: expected `u v <sign>`, found `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: unknown sign token `{token}`; expected one of e, a, b, c")]
    BadSign { line: usize, token: String },
    #[error("line {line}: edge {u} {v} is not an edge of K{n}")]
    BadEdge { line: usize, u: Vertex, v: Vertex, n: usize },
    #[error("line {line}: duplicate edge {u} {v}, first given on line {first}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex, first: usize },
    #[error("record starting on line {line}: missing edge {u} {v}")]
    MissingEdge { line: usize, u: Vertex, v: Vertex },
    #[error("line {line}: unknown metadata key `{key}`")]
    UnknownMetadata { line: usize, key: String },
    #[error("line {line}: bad metadata value `{value}` for `{key}`")]
    BadMetadata { line: usize, key: String, value: String },
    #[error("line {line}: invalid JSON record: {message}")]
    Json { line: usize, message: String },
    #[error("no instance records found")]
    Empty,
    #[error("{0}")]
    Graph(GraphError),
}

mod sign_token {
    use dsign_core::F22;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &F22, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_char(x.symbol())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<F22, D::Error> {
        let token = String::deserialize(d)?;
        token.parse().map_err(|_| D::Error::custom(format!("unknown sign token `{token}`")))
    }
}

impl InstanceRecord {
    pub fn from_graph(g: &SignedCompleteGraph, metadata: Metadata) -> Self {
        let edges = g.edges().into_iter().map(|(u, v, sign)| EdgeRecord { u, v, sign }).collect();
        InstanceRecord { n: g.n(), edges, metadata }
    }

    /// Validates completeness and builds the graph. `line` locates errors.
    fn to_graph_at(&self, line: usize, edge_lines: Option<&[usize]>) -> Result<SignedCompleteGraph, FormatError> {
        let n = self.n;
        if n > MAX_VERTICES {
            return Err(FormatError::Graph(GraphError::TooManyVertices(n)));
        }
        let at = |i: usize| edge_lines.map_or(line, |ls| ls[i]);
        let mut seen: HashMap<(Vertex, Vertex), usize> = HashMap::with_capacity(edge_count(n));
        for (i, e) in self.edges.iter().enumerate() {
            let (u, v) = (e.u.min(e.v), e.u.max(e.v));
            if u == 0 || u == v || v > n {
                return Err(FormatError::BadEdge { line: at(i), u: e.u, v: e.v, n });
            }
            if let Some(&first) = seen.get(&(u, v)) {
                return Err(FormatError::DuplicateEdge { line: at(i), u, v, first });
            }
            seen.insert((u, v), at(i));
        }
        for v in 2..=n {
            for u in 1..v {
                if !seen.contains_key(&(u, v)) {
                    return Err(FormatError::MissingEdge { line, u, v });
                }
            }
        }
        let signs: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, e.sign)).collect();
        SignedCompleteGraph::build(n, &signs).map_err(FormatError::Graph)
    }

    pub fn to_graph(&self) -> Result<SignedCompleteGraph, FormatError> {
        self.to_graph_at(1, None)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        if let Some(name) = &m.name {
            let _ = writeln!(out, "# name={name}");
        }
        if let Some(seed) = m.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        if let Some(generator) = &m.generator {
            let _ = writeln!(out, "# generator={generator}");
        }
        let _ = writeln!(out, "n={}", self.n);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.sign);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// A parsed record with the graph already validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: SignedCompleteGraph,
    pub metadata: Metadata,
}

impl Instance {
    pub fn record(&self) -> InstanceRecord {
        InstanceRecord::from_graph(&self.graph, self.metadata.clone())
    }

    pub fn label(&self) -> String {
        match (&self.metadata.name, self.metadata.seed) {
            (Some(name), _) => name.clone(),
            (None, Some(seed)) => format!("seed {seed}"),
            (None, None) => format!("K{}", self.graph.n()),
        }
    }
}

/// Parses every record in `text`, detecting JSON by a leading `{`.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>, FormatError> {
    let out = if text.trim_start().starts_with('{') { parse_json(text)? } else { parse_lines(text)? };
    if out.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(out)
}

/// Parses exactly one record.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut all = parse_instances(text)?;
    Ok(all.swap_remove(0))
}

fn parse_json(text: &str) -> Result<Vec<Instance>, FormatError> {
    // Either one (possibly pretty-printed) object or one object per line.
    let mut out = Vec::new();
    let mut stream = serde_json::Deserializer::from_str(text).into_iter::<InstanceRecord>();
    loop {
        let offset = stream.byte_offset();
        let line = text[..offset].matches('\n').count() + 1;
        match stream.next() {
            None => break,
            Some(Err(e)) => return Err(FormatError::Json { line: line + e.line().saturating_sub(1), message: e.to_string() }),
            Some(Ok(record)) => {
                let graph = record.to_graph_at(line, None)?;
                out.push(Instance { graph, metadata: record.metadata });
            }
        }
    }
    Ok(out)
}

struct Pending {
    start: usize,
    record: InstanceRecord,
    edge_lines: Vec<usize>,
}

impl Pending {
    fn finish(self) -> Result<Instance, FormatError> {
        let graph = self.record.to_graph_at(self.start, Some(&self.edge_lines))?;
        Ok(Instance { graph, metadata: self.record.metadata })
    }
}

fn parse_lines(text: &str) -> Result<Vec<Instance>, FormatError> {
    let mut out = Vec::new();
    let mut meta = Metadata::default();
    let mut meta_start: Option<usize> = None;
    let mut current: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#') {
            let Some((key, value)) = comment.split_once('=') else { continue };
            if let Some(done) = current.take() {
                out.push(done.finish()?);
            }
            meta_start.get_or_insert(line);
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => meta.name = Some(value.to_string()),
                "generator" => meta.generator = Some(value.to_string()),
                "seed" => {
                    meta.seed = Some(value.parse().map_err(|_| FormatError::BadMetadata {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                    })?)
                }
                _ => return Err(FormatError::UnknownMetadata { line, key: key.to_string() }),
            }
            continue;
        }
        if let Some(rest) = t.strip_prefix("n=") {
            let n: usize =
                rest.trim().parse().map_err(|_| FormatError::BadHeader { line, text: t.to_string() })?;
            if let Some(done) = current.take() {
                out.push(done.finish()?);
            }
            let start = meta_start.take().unwrap_or(line);
            current = Some(Pending {
                start,
                record: InstanceRecord { n, edges: Vec::new(), metadata: std::mem::take(&mut meta) },
                edge_lines: Vec::new(),
            });
            continue;
        }
        let Some(pending) = current.as_mut() else {
            return Err(if t.contains(char::is_whitespace) {
                FormatError::MissingHeader { line }
            } else {
                FormatError::BadHeader { line, text: t.to_string() }
            });
        };
        let fields: Vec<&str> = t.split_whitespace().collect();
        let [u, v, s] = fields[..] else {
            return Err(FormatError::MalformedLine { line, text: t.to_string() });
        };
        let malformed = || FormatError::MalformedLine { line, text: t.to_string() };
        let u: Vertex = u.parse().map_err(|_| malformed())?;
        let v: Vertex = v.parse().map_err(|_| malformed())?;
        let sign: F22 = s.parse().map_err(|_| FormatError::BadSign { line, token: s.to_string() })?;
        pending.record.edges.push(EdgeRecord { u, v, sign });
        pending.edge_lines.push(line);
    }
    if let Some(done) = current.take() {
        out.push(done.finish()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsign_core::gen::share_vertex_k4;

    #[test]
    fn text_round_trip_with_metadata() {
        let meta = Metadata { name: Some("share_vertex_k4".into()), seed: None, generator: Some("named".into()) };
        let rec = InstanceRecord::from_graph(&share_vertex_k4(), meta);
        let parsed = parse_instance(&rec.to_text()).unwrap();
        assert_eq!(parsed.record(), rec);
        let parsed = parse_instance(&rec.to_json()).unwrap();
        assert_eq!(parsed.record(), rec);
    }

    #[test]
    fn errors_carry_locations() {
        let text = "n=3\n1 2 a\n1 3 d\n2 3 e\n";
        assert_eq!(parse_instance(text), Err(FormatError::BadSign { line: 3, token: "d".into() }));
        let text = "n=3\n1 2 a\n2 3 e\n";
        assert_eq!(parse_instance(text), Err(FormatError::MissingEdge { line: 1, u: 1, v: 3 }));
        let text = "n=3\n1 2 a\n1 3 b\n2 1 e\n2 3 e\n";
        assert_eq!(parse_instance(text), Err(FormatError::DuplicateEdge { line: 4, u: 1, v: 2, first: 2 }));
        let text = "n=3\n1 2\n";
        assert!(matches!(parse_instance(text), Err(FormatError::MalformedLine { line: 2, .. })));
        let text = "1 2 a\n";
        assert_eq!(parse_instance(text), Err(FormatError::MissingHeader { line: 1 }));
        let text = "n=3\n1 4 a\n";
        assert!(matches!(parse_instance(text), Err(FormatError::BadEdge { line: 2, .. })));
        assert_eq!(parse_instances("# only a comment\n"), Err(FormatError::Empty));
    }

    #[test]
    fn several_records_in_one_file() {
        let a = InstanceRecord::from_graph(&SignedCompleteGraph::identity(3), Metadata::default());
        let b = InstanceRecord::from_graph(
            &share_vertex_k4(),
            Metadata { seed: Some(7), ..Metadata::default() },
        );
        let text = format!("{}\n{}", a.to_text(), b.to_text());
        let parsed = parse_instances(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].record(), b);
        let json = format!("{}\n{}\n", a.to_json(), b.to_json());
        assert_eq!(parse_instances(&json).unwrap()[0].record(), a);
    }
}
