//! Structural classification of the chore graph, used to route instances
//! to the matching solver.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopologyKind {
    Path,
    Star,
    Complete,
    Tree,
    General,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::Path => "path",
            TopologyKind::Star => "star",
            TopologyKind::Complete => "complete",
            TopologyKind::Tree => "tree",
            TopologyKind::General => "general",
        })
    }
}

/// The most specific class of the graph, in the order path, star,
/// complete, tree, general.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Items listed from one end of the path to the other, starting at the
    /// lower-id endpoint.
    Path {
        order: Vec<usize>,
    },
    Star {
        center: usize,
    },
    Complete,
    Tree,
    General,
}

impl Topology {
    pub fn kind(&self) -> TopologyKind {
        match self {
            Topology::Path { .. } => TopologyKind::Path,
            Topology::Star { .. } => TopologyKind::Star,
            Topology::Complete => TopologyKind::Complete,
            Topology::Tree => TopologyKind::Tree,
            Topology::General => TopologyKind::General,
        }
    }
}

pub fn classify_topology(instance: &Instance) -> Topology {
    if let Some(order) = path_order(instance) {
        return Topology::Path { order };
    }
    let m = instance.items();
    if m >= 3 {
        if let Some(center) = star_center(instance) {
            return Topology::Star { center };
        }
    }
    if is_complete(instance) {
        return Topology::Complete;
    }
    if instance.edges().len() + 1 == m && is_connected(instance) {
        return Topology::Tree;
    }
    Topology::General
}

/// Vertex order along the path if the graph is a simple path (a single
/// vertex counts).
pub fn path_order(instance: &Instance) -> Option<Vec<usize>> {
    let m = instance.items();
    if instance.edges().len() + 1 != m || (0..m).any(|v| instance.degree(v) > 2) {
        return None;
    }
    let start = (0..m).find(|&v| instance.degree(v) <= 1)?;
    let mut order = Vec::with_capacity(m);
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        match instance.neighbors(cur).iter().find(|&&n| n != prev) {
            Some(&next) if order.len() < m => {
                prev = cur;
                cur = next;
            }
            _ => break,
        }
    }
    (order.len() == m).then_some(order)
}

/// Center of the graph when it is a star: one vertex adjacent to all
/// others and no further edges. Graphs on one or two vertices are stars
/// centred at their lowest id.
pub fn star_center(instance: &Instance) -> Option<usize> {
    let m = instance.items();
    if instance.edges().len() + 1 != m {
        return None;
    }
    (0..m).find(|&v| instance.degree(v) == m - 1)
}

pub fn is_complete(instance: &Instance) -> bool {
    let m = instance.items();
    instance.edges().len() == m * (m - 1) / 2
}

pub fn is_connected(instance: &Instance) -> bool {
    let m = instance.items();
    let mut seen = vec![false; m];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &n in instance.neighbors(v) {
            if !seen[n] {
                seen[n] = true;
                count += 1;
                queue.push_back(n);
            }
        }
    }
    count == m
}
