//! Report trees with a deterministic text rendering and a JSON form.
//!
//! Rationals are stored as `num/den` strings so the JSON form round-trips
//! exactly.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact_linear::{format_scalar, Scalar};
use crate::homology_ext::{CeExt1, ExtTable, NonzeroExt, QuiverPresentation, RelationReport, VkModule};
use crate::structure_analysis::{PairReport, PairVerdict, QuasiNilpotency};
use crate::whittaker_modules::{AnnihilatorReport, CompletionResult, SimplicityCertificate, StarReport, WhittakerSolveResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Bool(bool),
    Int(i64),
    Text(String),
    List(Vec<Node>),
    Map(BTreeMap<String, Node>),
}

impl Node {
    pub fn map<K: Into<String>>(pairs: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn text(s: impl Into<String>) -> Node {
        Node::Text(s.into())
    }

    pub fn int(n: usize) -> Node {
        Node::Int(n as i64)
    }

    pub fn q(x: &Scalar) -> Node {
        Node::Text(format_scalar(x))
    }

    pub fn ints(v: &[usize]) -> Node {
        Node::List(v.iter().map(|&x| Node::int(x)).collect())
    }

    pub fn rationals(v: &[Scalar]) -> Node {
        Node::List(v.iter().map(Node::q).collect())
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(m) => m.get(key),
            _ => None,
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(n) => Value::from(*n),
            Node::Text(s) => Value::String(s.clone()),
            Node::List(v) => Value::Array(v.iter().map(Node::to_value).collect()),
            Node::Map(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_value())).collect()),
        }
    }

    fn from_value(v: &Value) -> Result<Node> {
        Ok(match v {
            Value::Bool(b) => Node::Bool(*b),
            Value::Number(n) => Node::Int(n.as_i64().ok_or_else(|| Error::parse(format!("not an integer: {n}")))?),
            Value::String(s) => Node::Text(s.clone()),
            Value::Array(a) => Node::List(a.iter().map(Node::from_value).collect::<Result<_>>()?),
            Value::Object(o) => Node::Map(o.iter().map(|(k, v)| Ok((k.clone(), Node::from_value(v)?))).collect::<Result<_>>()?),
            Value::Null => return Err(Error::parse("null is not a report value")),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report trees serialize")
    }

    pub fn from_json(text: &str) -> Result<Node> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        Node::from_value(&v)
    }

    fn inline(&self) -> Option<String> {
        match self {
            Node::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
            Node::Int(n) => Some(n.to_string()),
            Node::Text(s) => Some(s.clone()),
            Node::List(v) => {
                let parts: Option<Vec<String>> =
                    v.iter().map(|x| if matches!(x, Node::List(_) | Node::Map(_)) { None } else { x.inline() }).collect();
                parts.map(|p| format!("[{}]", p.join(", ")))
            }
            Node::Map(_) => None,
        }
    }

    fn write_text(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            Node::Map(m) => {
                for (k, v) in m {
                    match v.inline() {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            v.write_text(indent + 1, out);
                        }
                    }
                }
            }
            Node::List(v) => {
                for x in v {
                    match x.inline() {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            x.write_text(indent + 1, out);
                        }
                    }
                }
            }
            other => out.push_str(&format!("{pad}{}\n", other.inline().unwrap())),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }
}

pub trait ToNode {
    fn to_node(&self) -> Node;
}

impl ToNode for ExtTable {
    fn to_node(&self) -> Node {
        Node::Map(self.dims().iter().map(|(i, d)| (i.to_string(), Node::int(*d))).collect())
    }
}

impl ToNode for NonzeroExt {
    fn to_node(&self) -> Node {
        Node::map([
            ("ext", self.table.to_node()),
            ("table", Node::text(self.table.to_string())),
            ("truncation", Node::int(self.truncation as usize)),
            ("surjective_degreewise", Node::Bool(self.surjective_degreewise)),
        ])
    }
}

impl ToNode for CeExt1 {
    fn to_node(&self) -> Node {
        Node::map([
            ("ext1", Node::int(self.total)),
            ("y_part", Node::int(self.y_part)),
            ("x_part", Node::int(self.x_part)),
            ("totals_by_depth", Node::ints(&self.totals)),
            ("saturated", Node::Bool(self.saturated)),
        ])
    }
}

impl ToNode for VkModule {
    fn to_node(&self) -> Node {
        Node::map([
            ("k", Node::int(self.k as usize)),
            ("mu", Node::q(&self.mu)),
            ("dim", Node::int(self.dim())),
            ("end", Node::int(self.end_dim)),
        ])
    }
}

impl ToNode for RelationReport {
    fn to_node(&self) -> Node {
        Node::map([
            ("checked", Node::rationals(&self.checked)),
            ("failures", Node::rationals(&self.failures)),
            ("holds", Node::Bool(self.holds())),
        ])
    }
}

impl ToNode for QuiverPresentation {
    fn to_node(&self) -> Node {
        Node::map([
            ("vertices", Node::rationals(&self.vertices)),
            ("loops", Node::rationals(&self.loops)),
            (
                "steps",
                Node::List(self.steps.iter().map(|(s, t)| Node::text(format!("{} -> {}", format_scalar(s), format_scalar(t)))).collect()),
            ),
            ("relations", Node::List(self.relations.iter().map(Node::text).collect())),
            ("cross_coset_zero", Node::Bool(self.cross_coset_zero)),
        ])
    }
}

pub fn verdict_word(v: PairVerdict) -> &'static str {
    match v {
        PairVerdict::Pair => "yes",
        PairVerdict::NotPair => "no",
        PairVerdict::Inconclusive => "inconclusive",
    }
}

pub fn quasi_word(v: QuasiNilpotency) -> &'static str {
    match v {
        QuasiNilpotency::YesWithinWindow => "yes-within-window",
        QuasiNilpotency::No => "no",
        QuasiNilpotency::Inconclusive => "inconclusive",
    }
}

impl ToNode for PairReport {
    fn to_node(&self) -> Node {
        Node::map([
            ("whittaker_pair", Node::text(verdict_word(self.verdict))),
            ("quasi_nilpotent", Node::text(quasi_word(self.quasi_nilpotent))),
            ("failing", Node::List(self.failing.iter().map(Node::text).collect())),
            ("used_overflow", Node::Bool(self.used_overflow)),
        ])
    }
}

fn components(v: &[Vec<Scalar>]) -> Node {
    Node::List(v.iter().map(|c| Node::rationals(c)).collect())
}

impl ToNode for WhittakerSolveResult {
    fn to_node(&self) -> Node {
        Node::map([
            ("depth", Node::int(self.depth)),
            ("dim", Node::int(self.dim)),
            ("representative", components(&self.representative)),
            ("dropped_equations", Node::int(self.dropped_equations)),
        ])
    }
}

impl ToNode for CompletionResult {
    fn to_node(&self) -> Node {
        Node::map([
            ("ladder", Node::text(format!("{:?}", self.ladder).to_lowercase())),
            ("dims_by_truncation", Node::ints(&self.dims)),
            ("nested", Node::Bool(self.nested)),
            ("solution", self.result.to_node()),
            ("note", Node::text("uniqueness holds per truncation only")),
        ])
    }
}

impl ToNode for StarReport {
    fn to_node(&self) -> Node {
        Node::map([("highest", Node::ints(&self.highest)), ("lowest", Node::ints(&self.lowest)), ("equal", Node::Bool(self.equal()))])
    }
}

impl ToNode for SimplicityCertificate {
    fn to_node(&self) -> Node {
        let mut pairs = vec![
            ("passed", Node::Bool(self.passed())),
            ("whittaker_dim", Node::int(self.whittaker_dim)),
            ("degree_reduction", Node::Bool(self.degree_reduction)),
            ("depth", Node::int(self.depth as usize)),
        ];
        if let Some(d) = &self.designated {
            pairs.push(("designated", Node::text(d)));
        }
        if let Some(w) = &self.witness {
            pairs.push(("witness", Node::text(w)));
        }
        Node::map(pairs)
    }
}

impl ToNode for AnnihilatorReport {
    fn to_node(&self) -> Node {
        Node::map([
            ("depth", Node::int(self.depth as usize)),
            (
                "elements",
                Node::List(
                    self.entries
                        .iter()
                        .map(|e| {
                            Node::map([
                                ("element", Node::text(&e.element)),
                                ("kills_verma_window", Node::Bool(e.kills_verma)),
                                ("kills_whittaker_vector", Node::Bool(e.kills_whittaker)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("disclaimer", Node::text(&self.disclaimer)),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::qq;

    #[test]
    fn json_round_trip() {
        let n = Node::map([("a", Node::q(&qq(-3, 4))), ("b", Node::ints(&[1, 2])), ("c", Node::map([("x", Node::Bool(true))]))]);
        assert_eq!(Node::from_json(&n.to_json()).unwrap(), n);
        assert!(Node::from_json("{\"a\": 1.5}").is_err());
    }

    #[test]
    fn text_form() {
        let n = Node::map([("dim", Node::int(9)), ("end", Node::int(3))]);
        assert_eq!(n.to_text(), "dim: 9\nend: 3\n");
    }
}
