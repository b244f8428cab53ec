use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("node {node} is outside a network of {nodes} nodes")]
    UnknownNode { node: usize, nodes: usize },
    #[error("arc {from} -> {to} has negative capacity {capacity}")]
    NegativeCapacity {
        from: usize,
        to: usize,
        capacity: i64,
    },
    #[error("arc {from} -> {to} enters the source")]
    IntoSource { from: usize, to: usize },
    #[error("arc {from} -> {to} leaves the sink")]
    OutOfSink { from: usize, to: usize },
    #[error("source and sink must differ")]
    SourceIsSink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self, FlowError> {
        for node in [source, sink] {
            if node >= nodes {
                return Err(FlowError::UnknownNode { node, nodes });
            }
        }
        if source == sink {
            return Err(FlowError::SourceIsSink);
        }
        Ok(FlowNetwork {
            nodes,
            source,
            sink,
            arcs: Vec::new(),
        })
    }

    /// Adds an arc and returns its index in [`FlowResult::flows`].
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64) -> Result<usize, FlowError> {
        for node in [from, to] {
            if node >= self.nodes {
                return Err(FlowError::UnknownNode {
                    node,
                    nodes: self.nodes,
                });
            }
        }
        if capacity < 0 {
            return Err(FlowError::NegativeCapacity { from, to, capacity });
        }
        if to == self.source {
            return Err(FlowError::IntoSource { from, to });
        }
        if from == self.sink {
            return Err(FlowError::OutOfSink { from, to });
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Capacity and conservation check for `flows` (one entry per arc).
    pub fn is_feasible_flow(&self, flows: &[i64]) -> bool {
        if flows.len() != self.arcs.len() {
            return false;
        }
        let mut excess = vec![0i64; self.nodes];
        for (arc, &f) in self.arcs.iter().zip(flows) {
            if f < 0 || f > arc.capacity {
                return false;
            }
            excess[arc.from] -= f;
            excess[arc.to] += f;
        }
        (0..self.nodes)
            .filter(|&v| v != self.source && v != self.sink)
            .all(|v| excess[v] == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i64,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub flows: Vec<i64>,
}

struct Edge {
    to: usize,
    residual: i64,
}

/// Dinic's algorithm.
pub fn max_flow(network: &FlowNetwork) -> FlowResult {
    let n = network.nodes();
    let (s, t) = (network.source(), network.sink());
    let mut edges: Vec<Edge> = Vec::with_capacity(network.arcs().len() * 2);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for arc in network.arcs() {
        adj[arc.from].push(edges.len());
        edges.push(Edge {
            to: arc.to,
            residual: arc.capacity,
        });
        adj[arc.to].push(edges.len());
        edges.push(Edge {
            to: arc.from,
            residual: 0,
        });
    }
    let mut value = 0i64;
    let mut level = vec![usize::MAX; n];
    let mut cursor = vec![0usize; n];
    loop {
        level.iter_mut().for_each(|l| *l = usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let to = edges[e].to;
                if edges[e].residual > 0 && level[to] == usize::MAX {
                    level[to] = level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        cursor.iter_mut().for_each(|c| *c = 0);
        loop {
            let pushed = push(s, t, i64::MAX, &mut edges, &adj, &level, &mut cursor);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }
    let flows: Vec<i64> = (0..network.arcs().len())
        .map(|i| edges[2 * i + 1].residual)
        .collect();
    debug_assert!(network.is_feasible_flow(&flows));
    FlowResult { value, flows }
}

fn push(
    v: usize,
    t: usize,
    limit: i64,
    edges: &mut [Edge],
    adj: &[Vec<usize>],
    level: &[usize],
    cursor: &mut [usize],
) -> i64 {
    if v == t {
        return limit;
    }
    while cursor[v] < adj[v].len() {
        let e = adj[v][cursor[v]];
        let to = edges[e].to;
        if edges[e].residual > 0 && level[to] == level[v] + 1 {
            let got = push(
                to,
                t,
                limit.min(edges[e].residual),
                edges,
                adj,
                level,
                cursor,
            );
            if got > 0 {
                edges[e].residual -= got;
                edges[e ^ 1].residual += got;
                return got;
            }
        }
        cursor[v] += 1;
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        net.add_arc(0, 1, 4).unwrap();
        assert_eq!(max_flow(&net).value, 4);
    }

    #[test]
    fn two_disjoint_unit_paths() {
        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        for mid in [1, 2] {
            net.add_arc(0, mid, 1).unwrap();
            net.add_arc(mid, 3, 1).unwrap();
        }
        let result = max_flow(&net);
        assert_eq!(result.value, 2);
        assert_eq!(result.flows, vec![1, 1, 1, 1]);
    }

    #[test]
    fn cancels_flow_on_back_edges() {
        // s=0, a=1, b=2, t=3; the first path s-a-b-t must be undone.
        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        net.add_arc(0, 1, 1).unwrap();
        net.add_arc(0, 2, 1).unwrap();
        net.add_arc(1, 2, 1).unwrap();
        net.add_arc(1, 3, 1).unwrap();
        net.add_arc(2, 3, 1).unwrap();
        let result = max_flow(&net);
        assert_eq!(result.value, 2);
        assert!(net.is_feasible_flow(&result.flows));
    }

    #[test]
    fn rejects_malformed_arcs() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        assert!(matches!(
            net.add_arc(1, 0, 1),
            Err(FlowError::IntoSource { .. })
        ));
        assert!(matches!(
            net.add_arc(2, 1, 1),
            Err(FlowError::OutOfSink { .. })
        ));
        assert!(matches!(
            net.add_arc(0, 1, -1),
            Err(FlowError::NegativeCapacity { .. })
        ));
        assert!(matches!(
            net.add_arc(0, 5, 1),
            Err(FlowError::UnknownNode { .. })
        ));
        assert!(FlowNetwork::new(2, 1, 1).is_err());
    }
}
