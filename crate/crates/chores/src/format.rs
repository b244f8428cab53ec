//! JSON file formats for instances, allocations and reduction labels.
//!
//! Emission is canonical: keys in sorted order, enums in lowercase, one
//! disutility row or bundle per line, trailing newline. Two equal values
//! always serialize to the same bytes.

use std::fmt::Write as _;

use chores_core::allocation::Allocation;
use chores_core::instance::{Instance, InstanceError, RawInstance, UnknownName};
use chores_core::rational::format_rational;
use chores_core::reductions::{Construction, ReductionOutput};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Name(#[from] UnknownName),
    #[error("invalid instance")]
    Instance(#[from] InstanceError),
    #[error("allocation lists {found} bundles but declares {declared} agents")]
    BundleCount { declared: usize, found: usize },
    #[error("edge #{0} must have exactly two endpoints")]
    EdgeArity(usize),
}

/// A disutility entry: a string such as `"3/4"` or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum Value {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    agents: usize,
    aggregation: String,
    disutility: Vec<Vec<Value>>,
    edges: Vec<Vec<usize>>,
    items: ItemsField,
    #[serde(default = "default_polarity")]
    polarity: String,
}

/// `items` is either a count or a list of names.
#[derive(Deserialize)]
#[serde(untagged)]
enum ItemsField {
    Count(usize),
    Names(Vec<String>),
}

fn default_polarity() -> String {
    "chores".into()
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let items = match doc.items {
        ItemsField::Count(m) => (1..=m).map(|i| format!("v{i}")).collect(),
        ItemsField::Names(names) => names,
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        match e.as_slice() {
            &[a, b] => edges.push((a, b)),
            _ => return Err(FormatError::EdgeArity(i)),
        }
    }
    let raw = RawInstance {
        agents: doc.agents,
        items,
        edges,
        disutility: doc
            .disutility
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| match v {
                        Value::Text(s) => s,
                        Value::Int(i) => i.to_string(),
                    })
                    .collect()
            })
            .collect(),
        aggregation: doc.aggregation.parse()?,
        polarity: doc.polarity.parse()?,
    };
    Ok(Instance::from_raw(&raw)?)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn inline<T, F: Fn(&T) -> String>(xs: &[T], f: F) -> String {
    let parts: Vec<String> = xs.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}

fn block(out: &mut String, key: &str, lines: &[String], last: bool) {
    let comma = if last { "" } else { "," };
    if lines.is_empty() {
        let _ = writeln!(out, "  \"{key}\": []{comma}");
        return;
    }
    let _ = writeln!(out, "  \"{key}\": [");
    for (i, line) in lines.iter().enumerate() {
        let sep = if i + 1 == lines.len() { "" } else { "," };
        let _ = writeln!(out, "    {line}{sep}");
    }
    let _ = writeln!(out, "  ]{comma}");
}

pub fn emit_instance(instance: &Instance) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"agents\": {},", instance.agents());
    let _ = writeln!(out, "  \"aggregation\": \"{}\",", instance.aggregation());
    let rows: Vec<String> = instance
        .table()
        .iter()
        .map(|row| inline(row, |v| json_str(&format_rational(v))))
        .collect();
    block(&mut out, "disutility", &rows, false);
    let _ = writeln!(
        out,
        "  \"edges\": {},",
        inline(instance.edges(), |(a, b)| format!("[{a}, {b}]"))
    );
    let _ = writeln!(
        out,
        "  \"items\": {},",
        inline(instance.item_names(), |s| json_str(s))
    );
    let _ = writeln!(out, "  \"polarity\": \"{}\"", instance.polarity());
    out.push_str("}\n");
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationDoc {
    agents: Option<usize>,
    bundles: Vec<Vec<usize>>,
}

/// Reads `{"agents": n, "bundles": [[item ids], ...]}`; `agents` is
/// optional and must match the number of bundles when present.
pub fn parse_allocation(text: &str) -> Result<Allocation, FormatError> {
    let doc: AllocationDoc = serde_json::from_str(text)?;
    if let Some(declared) = doc.agents {
        if declared != doc.bundles.len() {
            return Err(FormatError::BundleCount {
                declared,
                found: doc.bundles.len(),
            });
        }
    }
    Ok(Allocation::from_bundles(doc.bundles))
}

pub fn emit_allocation(allocation: &Allocation) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"agents\": {},", allocation.agents());
    let lines: Vec<String> = allocation
        .bundles()
        .iter()
        .map(|b| inline(&b.iter().copied().collect::<Vec<_>>(), |v| v.to_string()))
        .collect();
    block(&mut out, "bundles", &lines, true);
    out.push_str("}\n");
    out
}

pub fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::PathZero => "path",
        Construction::PathZeroBinary => "path-binary",
        Construction::CompleteMaxEf => "complete-maxef",
        Construction::StarAddEf => "star-addef",
        Construction::StarAddEq => "star-addeq",
        Construction::TwoAgentPartition => "two-agent",
    }
}

/// Sidecar document naming every agent and chore of a reduction output.
pub fn emit_labels(output: &ReductionOutput) -> String {
    let opt = |v: &Option<chores_core::rational::Rational>| match v {
        Some(v) => json_str(&format_rational(v)),
        None => "null".into(),
    };
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"agents\": {},",
        inline(&output.agent_labels, |s| json_str(s))
    );
    let _ = writeln!(out, "  \"c\": {},", opt(&output.c));
    let _ = writeln!(
        out,
        "  \"chores\": {},",
        inline(output.chore_labels(), |s| json_str(s))
    );
    let _ = writeln!(
        out,
        "  \"construction\": \"{}\",",
        construction_name(output.construction)
    );
    let _ = writeln!(out, "  \"epsilon\": {}", opt(&output.epsilon));
    out.push_str("}\n");
    out
}
