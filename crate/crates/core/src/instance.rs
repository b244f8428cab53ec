//! Instances: agents, a chore graph and a per-agent disutility table.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};

/// How an agent turns item disutilities into a bundle disutility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aggregation {
    /// Sum over the bundle.
    Add,
    /// Worst item in the bundle.
    Max,
}

/// Whether item values are costs (chores) or benefits (goods).
///
/// Goods flip the proportionality and envy-freeness inequalities; they are
/// supported by the checker and the oracle only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Chores,
    Goods,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Add => "add",
            Aggregation::Max => "max",
        })
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Chores => "chores",
            Polarity::Goods => "goods",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown {what} `{text}`")]
pub struct UnknownName {
    pub what: &'static str,
    pub text: String,
}

impl FromStr for Aggregation {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "add" | "additive" => Ok(Aggregation::Add),
            "max" | "maximum" => Ok(Aggregation::Max),
            _ => Err(UnknownName {
                what: "aggregation",
                text: s.to_string(),
            }),
        }
    }
}

impl FromStr for Polarity {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "chores" => Ok(Polarity::Chores),
            "goods" => Ok(Polarity::Goods),
            _ => Err(UnknownName {
                what: "polarity",
                text: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("an instance needs at least one agent")]
    NoAgents,
    #[error("an instance needs at least one item")]
    NoItems,
    #[error("disutility table has {found} rows, expected one per agent ({expected})")]
    RowCount { expected: usize, found: usize },
    #[error("disutility row of agent {agent} has {found} entries, expected {expected}")]
    RowLength {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("disutility of agent {agent} for item {item}: {source}")]
    BadValue {
        agent: usize,
        item: usize,
        source: ParseRationalError,
    },
    #[error("disutility of agent {agent} for item {item} is negative ({value})")]
    Negative {
        agent: usize,
        item: usize,
        value: String,
    },
    #[error("edge #{edge} has endpoint {endpoint}, but items are 0..{items}")]
    DanglingEdge {
        edge: usize,
        endpoint: usize,
        items: usize,
    },
    #[error("edge #{edge} is a self-loop on item {item}")]
    SelfLoop { edge: usize, item: usize },
    #[error("edge #{edge} duplicates edge #{first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("unknown agent {0}")]
    UnknownAgent(usize),
    #[error("unknown item {0}")]
    UnknownItem(usize),
    #[error("agent {agent} values every item at zero; cannot normalize")]
    ZeroRow { agent: usize },
}

/// Unvalidated instance description, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub agents: usize,
    pub items: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub disutility: Vec<Vec<String>>,
    pub aggregation: Aggregation,
    pub polarity: Polarity,
}

/// A validated instance. Items and agents are dense ids starting at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    agents: usize,
    item_names: Vec<String>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    disutility: Vec<Vec<Rational>>,
    aggregation: Aggregation,
    polarity: Polarity,
}

/// Parses and validates a raw description.
pub fn build_instance(raw: &RawInstance) -> Result<Instance, InstanceError> {
    Instance::from_raw(raw)
}

impl Instance {
    /// Builds an instance with item names `v1..vm`.
    pub fn new(
        agents: usize,
        items: usize,
        edges: Vec<(usize, usize)>,
        disutility: Vec<Vec<Rational>>,
        aggregation: Aggregation,
        polarity: Polarity,
    ) -> Result<Self, InstanceError> {
        let names = (1..=items).map(|i| format!("v{i}")).collect();
        Self::with_names(agents, names, edges, disutility, aggregation, polarity)
    }

    pub fn with_names(
        agents: usize,
        item_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        disutility: Vec<Vec<Rational>>,
        aggregation: Aggregation,
        polarity: Polarity,
    ) -> Result<Self, InstanceError> {
        let items = item_names.len();
        if agents == 0 {
            return Err(InstanceError::NoAgents);
        }
        if items == 0 {
            return Err(InstanceError::NoItems);
        }
        if disutility.len() != agents {
            return Err(InstanceError::RowCount {
                expected: agents,
                found: disutility.len(),
            });
        }
        for (agent, row) in disutility.iter().enumerate() {
            if row.len() != items {
                return Err(InstanceError::RowLength {
                    agent,
                    expected: items,
                    found: row.len(),
                });
            }
            if let Some(item) = row.iter().position(|v| v.is_negative()) {
                return Err(InstanceError::Negative {
                    agent,
                    item,
                    value: format_rational(&row[item]),
                });
            }
        }

        let mut seen: Vec<((usize, usize), usize)> = Vec::with_capacity(edges.len());
        for (idx, &(a, b)) in edges.iter().enumerate() {
            for endpoint in [a, b] {
                if endpoint >= items {
                    return Err(InstanceError::DanglingEdge {
                        edge: idx,
                        endpoint,
                        items,
                    });
                }
            }
            if a == b {
                return Err(InstanceError::SelfLoop { edge: idx, item: a });
            }
            let key = (a.min(b), a.max(b));
            if let Some(&(_, first)) = seen.iter().find(|(k, _)| *k == key) {
                return Err(InstanceError::DuplicateEdge { edge: idx, first });
            }
            seen.push((key, idx));
        }
        let mut edges: Vec<(usize, usize)> = seen.into_iter().map(|(k, _)| k).collect();
        edges.sort_unstable();

        let mut adjacency = alloc::vec![Vec::new(); items];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        Ok(Instance {
            agents,
            item_names,
            edges,
            adjacency,
            disutility,
            aggregation,
            polarity,
        })
    }

    pub fn from_raw(raw: &RawInstance) -> Result<Self, InstanceError> {
        if raw.agents == 0 {
            return Err(InstanceError::NoAgents);
        }
        if raw.items.is_empty() {
            return Err(InstanceError::NoItems);
        }
        if raw.disutility.len() != raw.agents {
            return Err(InstanceError::RowCount {
                expected: raw.agents,
                found: raw.disutility.len(),
            });
        }
        let mut table = Vec::with_capacity(raw.agents);
        for (agent, row) in raw.disutility.iter().enumerate() {
            if row.len() != raw.items.len() {
                return Err(InstanceError::RowLength {
                    agent,
                    expected: raw.items.len(),
                    found: row.len(),
                });
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(item, text)| {
                    parse_rational(text).map_err(|source| InstanceError::BadValue {
                        agent,
                        item,
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(parsed);
        }
        Self::with_names(
            raw.agents,
            raw.items.clone(),
            raw.edges.clone(),
            table,
            raw.aggregation,
            raw.polarity,
        )
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            agents: self.agents,
            items: self.item_names.clone(),
            edges: self.edges.clone(),
            disutility: self
                .disutility
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
            aggregation: self.aggregation,
            polarity: self.polarity,
        }
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn items(&self) -> usize {
        self.item_names.len()
    }

    pub fn item_names(&self) -> &[String] {
        &self.item_names
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, item: usize) -> &[usize] {
        &self.adjacency[item]
    }

    pub fn degree(&self, item: usize) -> usize {
        self.adjacency[item].len()
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn value(&self, agent: usize, item: usize) -> &Rational {
        &self.disutility[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.disutility[agent]
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.disutility
    }

    /// Bundle value for `agent`: sum or maximum depending on the
    /// aggregation. The empty bundle is worth 0 in both modes.
    pub fn aggregate<I>(&self, agent: usize, bundle: I) -> Result<Rational, InstanceError>
    where
        I: IntoIterator<Item = usize>,
    {
        if agent >= self.agents {
            return Err(InstanceError::UnknownAgent(agent));
        }
        let items = self.items();
        let mut acc = Rational::zero();
        for item in bundle {
            if item >= items {
                return Err(InstanceError::UnknownItem(item));
            }
            self.accumulate(&mut acc, agent, item);
        }
        Ok(acc)
    }

    /// [`aggregate`](Self::aggregate) for ids already known to be in range.
    pub(crate) fn aggregate_known<I>(&self, agent: usize, bundle: I) -> Rational
    where
        I: IntoIterator<Item = usize>,
    {
        let mut acc = Rational::zero();
        for item in bundle {
            self.accumulate(&mut acc, agent, item);
        }
        acc
    }

    #[inline]
    pub(crate) fn accumulate(&self, acc: &mut Rational, agent: usize, item: usize) {
        let v = &self.disutility[agent][item];
        match self.aggregation {
            Aggregation::Add => *acc += v,
            Aggregation::Max => {
                if v > acc {
                    *acc = v.clone();
                }
            }
        }
    }

    /// Value of the whole item set for `agent` (written `T_i` in the docs
    /// of the fairness checker).
    pub fn total(&self, agent: usize) -> Rational {
        self.aggregate_known(agent, 0..self.items())
    }

    /// Scales every row so that the agent's total is exactly 1.
    pub fn normalize(&self) -> Result<Instance, InstanceError> {
        let mut out = self.clone();
        for agent in 0..self.agents {
            let total = self.total(agent);
            if total.is_zero() {
                return Err(InstanceError::ZeroRow { agent });
            }
            if total.is_one() {
                continue;
            }
            for v in &mut out.disutility[agent] {
                *v = &*v / &total;
            }
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.agents).all(|a| self.total(a).is_one())
    }

    pub fn with_aggregation(&self, aggregation: Aggregation) -> Instance {
        Instance {
            aggregation,
            ..self.clone()
        }
    }

    pub fn with_polarity(&self, polarity: Polarity) -> Instance {
        Instance {
            polarity,
            ..self.clone()
        }
    }

    /// Same agents and values on a different graph.
    pub fn with_edges(&self, edges: Vec<(usize, usize)>) -> Result<Instance, InstanceError> {
        Instance::with_names(
            self.agents,
            self.item_names.clone(),
            edges,
            self.disutility.clone(),
            self.aggregation,
            self.polarity,
        )
    }

    /// Distinct table values in ascending order, always including 0.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = self.disutility.iter().flatten().cloned().collect();
        values.push(Rational::zero());
        values.sort();
        values.dedup();
        values
    }

    /// First pair of items an agent values equally, if any.
    pub fn first_tie(&self) -> Option<(usize, usize, usize)> {
        for agent in 0..self.agents {
            let row = &self.disutility[agent];
            let mut order: Vec<usize> = (0..row.len()).collect();
            order.sort_by(|&a, &b| row[a].cmp(&row[b]).then(a.cmp(&b)));
            for w in order.windows(2) {
                if row[w[0]] == row[w[1]] {
                    return Some((agent, w[0], w[1]));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn strings(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    fn three_agent_path_raw() -> RawInstance {
        RawInstance {
            agents: 3,
            items: ["v1", "v2", "v3", "v4"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            edges: vec![(0, 1), (1, 2), (2, 3)],
            disutility: strings(&[
                &["6", "4", "0", "0"],
                &["7", "0", "1", "2"],
                &["5", "0", "0", "5"],
            ]),
            aggregation: Aggregation::Add,
            polarity: Polarity::Chores,
        }
    }

    #[test]
    fn builds_three_agent_path() {
        let inst = build_instance(&three_agent_path_raw()).unwrap();
        assert_eq!(inst.agents(), 3);
        assert_eq!(inst.items(), 4);
        assert_eq!(inst.value(1, 0), &int(7));
    }

    #[test]
    fn builds_minimal_instance() {
        let raw = RawInstance {
            agents: 1,
            items: vec!["v1".into()],
            edges: vec![],
            disutility: strings(&[&["0"]]),
            aggregation: Aggregation::Max,
            polarity: Polarity::Chores,
        };
        let inst = build_instance(&raw).unwrap();
        assert_eq!((inst.agents(), inst.items()), (1, 1));
    }

    #[test]
    fn reports_malformed_input_with_location() {
        let mut raw = three_agent_path_raw();
        raw.disutility[1].pop();
        assert_eq!(
            build_instance(&raw),
            Err(InstanceError::RowLength {
                agent: 1,
                expected: 4,
                found: 3
            })
        );

        let mut raw = three_agent_path_raw();
        raw.disutility[2][3] = "-1/2".into();
        assert!(matches!(
            build_instance(&raw),
            Err(InstanceError::Negative {
                agent: 2,
                item: 3,
                ..
            })
        ));

        let mut raw = three_agent_path_raw();
        raw.edges.push((3, 4));
        assert!(matches!(
            build_instance(&raw),
            Err(InstanceError::DanglingEdge {
                edge: 3,
                endpoint: 4,
                ..
            })
        ));

        let mut raw = three_agent_path_raw();
        raw.edges.push((1, 0));
        assert_eq!(
            build_instance(&raw),
            Err(InstanceError::DuplicateEdge { edge: 3, first: 0 })
        );

        let mut raw = three_agent_path_raw();
        raw.edges.push((2, 2));
        assert_eq!(
            build_instance(&raw),
            Err(InstanceError::SelfLoop { edge: 3, item: 2 })
        );

        let mut raw = three_agent_path_raw();
        raw.disutility[0][0] = "x".into();
        assert!(matches!(
            build_instance(&raw),
            Err(InstanceError::BadValue {
                agent: 0,
                item: 0,
                ..
            })
        ));
    }

    #[test]
    fn aggregates_add_and_max() {
        let inst = build_instance(&three_agent_path_raw()).unwrap();
        assert_eq!(inst.aggregate(1, [2, 3]).unwrap(), int(3));
        assert_eq!(inst.aggregate(0, []).unwrap(), int(0));
        let max = inst.with_aggregation(Aggregation::Max);
        assert_eq!(max.aggregate(2, []).unwrap(), int(0));

        let small = Instance::new(
            1,
            3,
            vec![(0, 1), (1, 2)],
            vec![vec![int(2), int(5), int(3)]],
            Aggregation::Max,
            Polarity::Chores,
        )
        .unwrap();
        assert_eq!(small.aggregate(0, [0, 1, 2]).unwrap(), int(5));
        assert_eq!(small.aggregate(1, [0]), Err(InstanceError::UnknownAgent(1)));
        assert_eq!(small.aggregate(0, [3]), Err(InstanceError::UnknownItem(3)));
    }

    #[test]
    fn normalizes_rows_exactly() {
        let inst = build_instance(&three_agent_path_raw()).unwrap();
        let norm = inst.normalize().unwrap();
        assert_eq!(norm.row(0), &[ratio(3, 5), ratio(2, 5), int(0), int(0)]);
        assert_eq!(norm.row(2), &[ratio(1, 2), int(0), int(0), ratio(1, 2)]);
        assert!(norm.is_normalized());
        assert_eq!(norm.normalize().unwrap(), norm);

        let mut raw = three_agent_path_raw();
        raw.disutility[1] = vec!["0".into(); 4];
        let zero = build_instance(&raw).unwrap();
        assert_eq!(zero.normalize(), Err(InstanceError::ZeroRow { agent: 1 }));
    }

    #[test]
    fn max_normalization_uses_the_worst_item() {
        let inst = build_instance(&three_agent_path_raw())
            .unwrap()
            .with_aggregation(Aggregation::Max);
        let norm = inst.normalize().unwrap();
        assert_eq!(norm.row(1), &[int(1), int(0), ratio(1, 7), ratio(2, 7)]);
    }

    #[test]
    fn enum_names_are_lowercase() {
        assert_eq!(Aggregation::Add.to_string(), "add");
        assert_eq!("MAX".parse::<Aggregation>().unwrap(), Aggregation::Max);
        assert_eq!("goods".parse::<Polarity>().unwrap(), Polarity::Goods);
        assert!("mean".parse::<Aggregation>().is_err());
    }
}
