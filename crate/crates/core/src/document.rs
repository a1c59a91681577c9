//! Canonical JSON documents for friezes, ξ-sequences and graphs.
//!
//! Keys are sorted, output is compact with a trailing newline, and every
//! number is written as a string (`"12"`, `"-3/4"`) so values of any size
//! survive a round trip.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::pattern::{FriezePattern, PatternError, Vertical};
use crate::wild::{GammaSubgraph, GammaVertex, WildError};
use crate::xi::{XiError, XiSequence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Xi(#[from] XiError),
    #[error(transparent)]
    Wild(#[from] WildError),
}

fn invalid(msg: impl Into<String>) -> DocumentError {
    DocumentError::Invalid(msg.into())
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

fn parse_json(text: &str) -> Result<Map<String, Value>, DocumentError> {
    let v: Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(invalid("top level must be an object")),
    }
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value, DocumentError> {
    m.get(key).ok_or_else(|| invalid(format!("missing field {key:?}")))
}

fn usize_field(m: &Map<String, Value>, key: &str) -> Result<usize, DocumentError> {
    field(m, key)?
        .as_u64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| invalid(format!("field {key:?} must be a nonnegative integer")))
}

fn rational_value(v: &Value) -> Result<Rational, DocumentError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| invalid(e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        _ => Err(invalid(format!("entry {v} must be a string like \"3\" or \"-1/2\""))),
    }
}

fn rational_list(v: &Value) -> Result<Vec<Rational>, DocumentError> {
    v.as_array().ok_or_else(|| invalid("expected a list of entries"))?.iter().map(rational_value).collect()
}

fn rows_value(rows: &[Vec<Rational>]) -> Value {
    Value::Array(
        rows.iter().map(|r| Value::Array(r.iter().map(|v| Value::String(format_rational(v))).collect())).collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FriezeDocument {
    pub pattern: FriezePattern,
    pub name: Option<String>,
    pub source: Option<String>,
}

impl FriezeDocument {
    pub fn new(pattern: FriezePattern) -> Self {
        FriezeDocument { pattern, name: None, source: None }
    }

    pub fn named(pattern: FriezePattern, name: &str, source: &str) -> Self {
        FriezeDocument { pattern, name: Some(name.into()), source: Some(source.into()) }
    }

    pub fn to_value(&self) -> Value {
        let f = &self.pattern;
        let vertical = match f.vertical() {
            Vertical::Periodic(m) => json!({"mode": "periodic", "period": m}),
            Vertical::Window { first_index } => json!({"mode": "window", "first_row_index": first_index}),
        };
        let mut m = Map::new();
        m.insert("k".into(), json!(f.k()));
        m.insert("n".into(), json!(f.n()));
        m.insert("rows".into(), rows_value(f.stored_rows()));
        m.insert("vertical".into(), vertical);
        if let Some(name) = &self.name {
            m.insert("name".into(), json!(name));
        }
        if let Some(source) = &self.source {
            m.insert("source".into(), json!(source));
        }
        Value::Object(m)
    }

    pub fn serialize(&self) -> String {
        to_canonical_string(&self.to_value())
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let m = parse_json(text)?;
        Self::from_map(&m)
    }

    fn from_map(m: &Map<String, Value>) -> Result<Self, DocumentError> {
        let k = usize_field(m, "k")?;
        let n = usize_field(m, "n")?;
        let rows = field(m, "rows")?
            .as_array()
            .ok_or_else(|| invalid("\"rows\" must be a list"))?
            .iter()
            .map(rational_list)
            .collect::<Result<Vec<_>, _>>()?;
        let v = field(m, "vertical")?.as_object().ok_or_else(|| invalid("\"vertical\" must be an object"))?;
        let vertical = match field(v, "mode")?.as_str() {
            Some("periodic") => Vertical::Periodic(usize_field(v, "period")?),
            Some("window") => Vertical::Window {
                first_index: field(v, "first_row_index")?
                    .as_i64()
                    .ok_or_else(|| invalid("\"first_row_index\" must be an integer"))?,
            },
            _ => return Err(invalid("\"mode\" must be \"periodic\" or \"window\"")),
        };
        let text = |key: &str| -> Result<Option<String>, DocumentError> {
            match m.get(key) {
                None => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(invalid(format!("{key:?} must be a string"))),
            }
        };
        Ok(FriezeDocument {
            pattern: FriezePattern::from_band_rows(k, n, rows, vertical)?,
            name: text("name")?,
            source: text("source")?,
        })
    }
}

pub fn parse_frieze(text: &str) -> Result<FriezePattern, DocumentError> {
    FriezeDocument::parse(text).map(|d| d.pattern)
}

pub fn serialize_frieze(f: &FriezePattern) -> String {
    FriezeDocument::new(f.clone()).serialize()
}

pub fn xi_to_value(s: &XiSequence) -> Value {
    json!({"k": s.k(), "n": s.n(), "tuples": rows_value(s.tuples())})
}

pub fn xi_from_str(text: &str) -> Result<XiSequence, DocumentError> {
    let m = parse_json(text)?;
    let k = usize_field(&m, "k")?;
    let tuples = field(&m, "tuples")?
        .as_array()
        .ok_or_else(|| invalid("\"tuples\" must be a list"))?
        .iter()
        .map(rational_list)
        .collect::<Result<Vec<_>, _>>()?;
    let s = XiSequence::new(k, tuples)?;
    if let Some(n) = m.get("n") {
        if n.as_u64() != Some(s.n() as u64) {
            return Err(invalid("\"n\" does not match the number of tuples"));
        }
    }
    Ok(s)
}

fn vertex_value(v: &GammaVertex) -> Value {
    Value::Array(
        v.rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

fn vertex_from(k: usize, n: usize, v: &Value) -> Result<GammaVertex, DocumentError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid("a vertex is a list of rows"))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| invalid("a vertex row is a list"))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => s.parse::<u64>().map_err(|_| invalid(format!("bad vertex entry {s:?}"))),
                    Value::Number(num) => num.as_u64().ok_or_else(|| invalid(format!("bad vertex entry {num}"))),
                    _ => Err(invalid("bad vertex entry")),
                })
                .collect::<Result<Vec<u64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GammaVertex::new(k, n, rows)?)
}

/// Vertices in canonical order; edges and frontier refer to their indices.
pub fn graph_to_value(g: &GammaSubgraph, k: usize, n: usize, bound: u64) -> Value {
    let index: std::collections::BTreeMap<&GammaVertex, usize> =
        g.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<Value> = g.edge_list().into_iter().map(|(a, b)| json!([index[a], index[b]])).collect();
    let frontier: Vec<Value> = g.frontier.iter().filter_map(|v| index.get(v)).map(|&i| json!(i)).collect();
    json!({
        "k": k,
        "n": n,
        "bound": bound,
        "vertices": g.vertices.iter().map(vertex_value).collect::<Vec<_>>(),
        "edges": edges,
        "frontier": frontier,
        "budget_exhausted": g.budget_exhausted,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub k: usize,
    pub n: usize,
    pub bound: u64,
    pub graph: GammaSubgraph,
}

impl GraphDocument {
    pub fn to_value(&self) -> Value {
        graph_to_value(&self.graph, self.k, self.n, self.bound)
    }

    pub fn serialize(&self) -> String {
        to_canonical_string(&self.to_value())
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let m = parse_json(text)?;
        let k = usize_field(&m, "k")?;
        let n = usize_field(&m, "n")?;
        let bound = field(&m, "bound")?.as_u64().ok_or_else(|| invalid("\"bound\" must be a nonnegative integer"))?;
        let verts: Vec<GammaVertex> = field(&m, "vertices")?
            .as_array()
            .ok_or_else(|| invalid("\"vertices\" must be a list"))?
            .iter()
            .map(|v| vertex_from(k, n, v))
            .collect::<Result<_, _>>()?;
        let pick = |x: &Value| -> Result<GammaVertex, DocumentError> {
            x.as_u64()
                .and_then(|i| verts.get(i as usize))
                .cloned()
                .ok_or_else(|| invalid(format!("vertex index {x} out of range")))
        };
        let mut g = GammaSubgraph { vertices: verts.iter().cloned().collect(), ..Default::default() };
        if g.vertices.len() != verts.len() {
            return Err(invalid("duplicate vertices"));
        }
        for e in field(&m, "edges")?.as_array().ok_or_else(|| invalid("\"edges\" must be a list"))? {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid("an edge is a pair of indices"))?;
            let (a, b) = (pick(&pair[0])?, pick(&pair[1])?);
            if !a.overlaps(&b) {
                return Err(invalid(format!("edge {a} -> {b} does not overlap")));
            }
            g.edges.entry(a).or_default().insert(b);
        }
        if let Some(fr) = m.get("frontier") {
            let fr = fr.as_array().ok_or_else(|| invalid("\"frontier\" must be a list"))?;
            g.frontier = fr.iter().map(pick).collect::<Result<BTreeSet<_>, _>>()?;
        }
        g.budget_exhausted = m.get("budget_exhausted").and_then(Value::as_bool).unwrap_or(false);
        Ok(GraphDocument { k, n, bound, graph: g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_order() {
        let f = FriezePattern::from_i64(3, 4, &[vec![3, 8, 4, 7], vec![3, 2, 4, 1]], Vertical::Periodic(2)).unwrap();
        let s = serialize_frieze(&f);
        assert_eq!(
            s,
            "{\"k\":3,\"n\":4,\"rows\":[[\"3\",\"8\",\"4\",\"7\"],[\"3\",\"2\",\"4\",\"1\"]],\"vertical\":{\"mode\":\"periodic\",\"period\":2}}\n"
        );
        assert_eq!(parse_frieze(&s).unwrap(), f);
        let w = FriezePattern::window_mode(2, 1, -4, vec![vec![Rational::new(1.into(), 2.into())]]).unwrap();
        let s = serialize_frieze(&w);
        assert!(s.contains("\"1/2\"") && s.contains("\"first_row_index\":-4"));
        assert_eq!(parse_frieze(&s).unwrap(), w);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_frieze("{\"k\":3,\n  \"n\":}"), Err(DocumentError::Syntax { line: 2, .. })));
        let bad_len = "{\"k\":2,\"n\":2,\"rows\":[[\"1\"]],\"vertical\":{\"mode\":\"periodic\",\"period\":1}}";
        assert!(matches!(parse_frieze(bad_len), Err(DocumentError::Pattern(PatternError::ShapeMismatch { .. }))));
        let bad_mode = "{\"k\":2,\"n\":1,\"rows\":[[\"1\"]],\"vertical\":{\"mode\":\"spiral\"}}";
        assert!(matches!(parse_frieze(bad_mode), Err(DocumentError::Invalid(_))));
        assert!(matches!(parse_frieze("[1]"), Err(DocumentError::Invalid(_))));
    }
}
