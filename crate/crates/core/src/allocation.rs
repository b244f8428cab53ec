//! Allocations and validity: connected, complete and disjoint bundles.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::Instance;

/// Bundle per agent. Disjointness is not enforced here; see
/// [`validate_allocation`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<BTreeSet<usize>>,
}

impl Allocation {
    /// `agents` empty bundles.
    pub fn empty(agents: usize) -> Self {
        Allocation {
            bundles: vec![BTreeSet::new(); agents],
        }
    }

    pub fn from_bundles<B, I>(bundles: B) -> Self
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        Allocation {
            bundles: bundles
                .into_iter()
                .map(|b| b.into_iter().collect())
                .collect(),
        }
    }

    /// Inverse of an owner map: item `v` goes to `owner[v]`.
    pub fn from_owners(agents: usize, owner: &[usize]) -> Self {
        let mut out = Self::empty(agents);
        for (item, &agent) in owner.iter().enumerate() {
            out.bundles[agent].insert(item);
        }
        out
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &BTreeSet<usize> {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[BTreeSet<usize>] {
        &self.bundles
    }

    pub fn assign(&mut self, agent: usize, item: usize) {
        self.bundles[agent].insert(item);
    }

    pub fn owner_of(&self, item: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(&item))
    }
}

/// Outcome of [`validate_allocation`]. Lists every violation found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    /// Per agent: the bundle induces a connected subgraph (empty counts).
    pub connected: Vec<bool>,
    pub complete: bool,
    pub disjoint: bool,
    /// The allocation has exactly one bundle per agent.
    pub agents_match: bool,
    pub disconnected_agents: Vec<usize>,
    pub unallocated_items: Vec<usize>,
    /// Items held by more than one agent, with their holders.
    pub shared_items: Vec<(usize, Vec<usize>)>,
    /// `(agent, item)` pairs naming items outside the instance.
    pub unknown_items: Vec<(usize, usize)>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.agents_match
            && self.complete
            && self.disjoint
            && self.unknown_items.is_empty()
            && self.connected.iter().all(|&c| c)
    }
}

pub fn validate_allocation(instance: &Instance, allocation: &Allocation) -> ValidityReport {
    let m = instance.items();
    let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut unknown_items = Vec::new();
    let mut connected = Vec::with_capacity(allocation.agents());
    for (agent, bundle) in allocation.bundles().iter().enumerate() {
        let mut in_range = true;
        for &item in bundle {
            if item < m {
                holders.entry(item).or_default().push(agent);
            } else {
                unknown_items.push((agent, item));
                in_range = false;
            }
        }
        connected.push(in_range && induces_connected(instance, bundle));
    }
    let unallocated_items: Vec<usize> = (0..m).filter(|v| !holders.contains_key(v)).collect();
    let shared_items: Vec<(usize, Vec<usize>)> = holders
        .into_iter()
        .filter(|(_, owners)| owners.len() > 1)
        .collect();
    let disconnected_agents = connected
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(a, _)| a)
        .collect();
    ValidityReport {
        complete: unallocated_items.is_empty(),
        disjoint: shared_items.is_empty(),
        agents_match: allocation.agents() == instance.agents(),
        connected,
        disconnected_agents,
        unallocated_items,
        shared_items,
        unknown_items,
    }
}

/// Whether `bundle` induces a connected subgraph. Ids must be in range.
pub fn induces_connected(instance: &Instance, bundle: &BTreeSet<usize>) -> bool {
    let Some(&start) = bundle.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &n in instance.neighbors(v) {
            if bundle.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == bundle.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Aggregation, Polarity};
    use crate::rational::int;

    fn path4() -> Instance {
        Instance::new(
            3,
            4,
            vec![(0, 1), (1, 2), (2, 3)],
            vec![vec![int(0); 4]; 3],
            Aggregation::Add,
            Polarity::Chores,
        )
        .unwrap()
    }

    #[test]
    fn accepts_connected_allocation_with_split_path() {
        let alloc = Allocation::from_bundles([vec![2, 3], vec![1], vec![0]]);
        assert!(validate_allocation(&path4(), &alloc).is_valid());
    }

    #[test]
    fn flags_disconnected_bundle() {
        let alloc = Allocation::from_bundles([vec![0, 3], vec![1, 2], vec![]]);
        let report = validate_allocation(&path4(), &alloc);
        assert!(!report.is_valid());
        assert_eq!(report.disconnected_agents, vec![0]);
        assert!(report.complete && report.disjoint);
    }

    #[test]
    fn flags_double_allocation() {
        let alloc = Allocation::from_bundles([vec![0], vec![0, 1, 2, 3], vec![]]);
        let report = validate_allocation(&path4(), &alloc);
        assert!(!report.disjoint);
        assert_eq!(report.shared_items, vec![(0, vec![0, 1])]);
        assert!(report.complete);
    }

    #[test]
    fn flags_missing_items_and_unknown_ids() {
        let alloc = Allocation::from_bundles([vec![0, 1], vec![7], vec![]]);
        let report = validate_allocation(&path4(), &alloc);
        assert_eq!(report.unallocated_items, vec![2, 3]);
        assert_eq!(report.unknown_items, vec![(1, 7)]);
        assert!(!report.is_valid());

        let short = Allocation::from_bundles([vec![0, 1, 2, 3]]);
        assert!(!validate_allocation(&path4(), &short).agents_match);
    }
}
