use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{Deadline, OracleError, SearchBudget, SearchStats, StopReason};
use crate::allocation::Allocation;
use crate::bits::Bits;
use crate::fairness::{Criterion, FairnessQuery};
use crate::instance::{Aggregation, Instance, Polarity};
use crate::rational::Rational;
use crate::topology::{classify_topology, Topology};

/// Largest scaled row total and factor component accepted. Products of
/// two such numbers stay well inside `i128`.
const LIMIT: i128 = 1 << 62;
/// Proportionality caps are clamped to this magnitude.
const CAP_CLAMP: i128 = 1 << 100;
/// Nodes between deadline polls.
const POLL: u64 = 4096;

pub(super) enum Goal<'v> {
    Enumerate(&'v mut dyn FnMut(&Allocation) -> ControlFlow<()>),
    Query(&'v FairnessQuery),
    MinMax,
}

enum Target<'v> {
    Enumerate(&'v mut dyn FnMut(&Allocation) -> ControlFlow<()>),
    Query(Check),
    MinMax {
        best: Option<i128>,
        owners: Vec<Bits>,
    },
}

/// A fairness query over scaled integers. The factor is `cn / cd`.
struct Check {
    criterion: Criterion,
    goods: bool,
    cn: i128,
    cd: i128,
    /// Proportionality: upper bound per agent for chores, lower bound for
    /// goods, already multiplied by the factor.
    caps: Vec<i128>,
}

pub(super) struct Engine<'a, 'v> {
    n: usize,
    m: usize,
    scale: BigInt,
    val: Vec<Vec<i128>>,
    nbr: Vec<Bits>,
    add: bool,
    path: bool,
    order: Vec<usize>,
    target: Target<'v>,
    zero_only: bool,
    max_nodes: u64,
    deadline: &'a dyn Deadline,
    branch: Option<usize>,
    nodes: u64,
    visited: u64,
    stop: Option<StopReason>,
    found: Option<Allocation>,
    own: Vec<Bits>,
    lo: Vec<i128>,
    unassigned: Bits,
    reach: Vec<Bits>,
    comps: Vec<Bits>,
}

impl<'a, 'v> Engine<'a, 'v> {
    pub fn new(
        instance: &Instance,
        budget: &SearchBudget,
        deadline: &'a dyn Deadline,
        branch: Option<usize>,
        goal: Goal<'v>,
    ) -> Result<Self, OracleError> {
        let (n, m) = (instance.agents(), instance.items());
        let scale = instance
            .table()
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut val = Vec::with_capacity(n);
        for row in instance.table() {
            let scaled: Vec<i128> = row
                .iter()
                .map(|v| {
                    (v.numer() * (&scale / v.denom()))
                        .to_i128()
                        .ok_or(OracleError::ValuesTooLarge)
                })
                .collect::<Result<_, _>>()?;
            if scaled.iter().sum::<i128>() >= LIMIT {
                return Err(OracleError::ValuesTooLarge);
            }
            val.push(scaled);
        }
        let mut nbr = vec![Bits::EMPTY; m];
        for &(a, b) in instance.edges() {
            nbr[a].insert(b);
            nbr[b].insert(a);
        }
        let (path, order) = match classify_topology(instance) {
            Topology::Path { order } => (true, order),
            _ => (false, bfs_order(instance)),
        };
        let target = match goal {
            Goal::Enumerate(f) => Target::Enumerate(f),
            Goal::MinMax => Target::MinMax {
                best: None,
                owners: Vec::new(),
            },
            Goal::Query(q) => Target::Query(Check::new(instance, q, &scale)?),
        };
        Ok(Engine {
            n,
            m,
            scale,
            val,
            nbr,
            add: instance.aggregation() == Aggregation::Add,
            path,
            order,
            target,
            zero_only: budget.zero_only,
            max_nodes: budget.max_nodes,
            deadline,
            branch,
            nodes: 0,
            visited: 0,
            stop: None,
            found: None,
            own: vec![Bits::EMPTY; n],
            lo: vec![0; n],
            unassigned: Bits::full(m),
            reach: vec![Bits::EMPTY; n],
            comps: Vec::new(),
        })
    }

    pub fn run(&mut self) -> ControlFlow<()> {
        if self.path {
            self.blocks(0)
        } else {
            self.label(0)
        }
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            visited: self.visited,
        }
    }

    pub fn stop_reason(&self) -> Option<StopReason> {
        self.stop
    }

    pub fn take_found(&mut self) -> Option<Allocation> {
        self.found.take()
    }

    pub fn take_best(&mut self) -> Option<(Rational, Allocation)> {
        match &self.target {
            Target::MinMax {
                best: Some(best),
                owners,
            } => Some((
                Rational::new(BigInt::from(*best), self.scale.clone()),
                to_allocation(owners),
            )),
            _ => None,
        }
    }

    fn tick(&mut self) -> ControlFlow<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.stop = Some(StopReason::NodeLimit);
            return ControlFlow::Break(());
        }
        if (self.nodes == 1 || self.nodes.is_multiple_of(POLL)) && self.deadline.expired() {
            self.stop = Some(StopReason::TimeLimit);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }

    fn agents_at(&self, first: bool) -> core::ops::Range<usize> {
        match (first, self.branch) {
            (true, Some(b)) => b..b + 1,
            _ => 0..self.n,
        }
    }

    fn combine(&self, acc: i128, x: i128) -> i128 {
        if self.add {
            acc + x
        } else {
            acc.max(x)
        }
    }

    fn value(&self, agent: usize, set: Bits) -> i128 {
        let row = &self.val[agent];
        set.iter().fold(0, |acc, v| self.combine(acc, row[v]))
    }

    /// Vertex-by-vertex labelling for non-path graphs.
    fn label(&mut self, k: usize) -> ControlFlow<()> {
        if k == self.m {
            return self.leaf();
        }
        let v = self.order[k];
        for a in self.agents_at(k == 0) {
            if self.zero_only && self.val[a][v] > 0 {
                continue;
            }
            self.tick()?;
            let saved = self.lo[a];
            self.own[a].insert(v);
            self.unassigned.remove(v);
            self.lo[a] = self.combine(saved, self.val[a][v]);
            let flow = if self.consistent() {
                self.label(k + 1)
            } else {
                ControlFlow::Continue(())
            };
            self.own[a].remove(v);
            self.unassigned.insert(v);
            self.lo[a] = saved;
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Contiguous blocks along the path, each to an agent without one.
    fn blocks(&mut self, pos: usize) -> ControlFlow<()> {
        if pos == self.m {
            return self.leaf();
        }
        for a in self.agents_at(pos == 0) {
            if !self.own[a].is_empty() {
                continue;
            }
            let mut flow = ControlFlow::Continue(());
            for end in pos..self.m {
                if let ControlFlow::Break(()) = self.tick() {
                    flow = ControlFlow::Break(());
                    break;
                }
                let v = self.order[end];
                self.own[a].insert(v);
                self.unassigned.remove(v);
                self.lo[a] = self.combine(self.lo[a], self.val[a][v]);
                if self.own_dead(a) {
                    break;
                }
                if self.consistent() {
                    flow = self.blocks(end + 1);
                    if flow.is_break() {
                        break;
                    }
                }
            }
            self.unassigned = self.unassigned.union(self.own[a]);
            self.own[a] = Bits::EMPTY;
            self.lo[a] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Conditions that only get worse as agent `a`'s block grows.
    fn own_dead(&self, a: usize) -> bool {
        let lo = self.lo[a];
        if self.zero_only && lo > 0 {
            return true;
        }
        match &self.target {
            Target::MinMax { best: Some(b), .. } => lo >= *b,
            Target::Query(check) => {
                check.criterion == Criterion::Prop && !check.goods && lo > check.caps[a]
            }
            _ => false,
        }
    }

    fn leaf(&mut self) -> ControlFlow<()> {
        self.visited += 1;
        match &mut self.target {
            Target::Enumerate(visit) => visit(&to_allocation(&self.own)),
            Target::Query(_) => {
                self.found = Some(to_allocation(&self.own));
                ControlFlow::Break(())
            }
            Target::MinMax { best, owners } => {
                *best = self.lo.iter().copied().max();
                owners.clone_from(&self.own);
                ControlFlow::Continue(())
            }
        }
    }

    /// Whether the partial allocation can still be completed into one in
    /// scope. Exact once every vertex is assigned.
    fn consistent(&mut self) -> bool {
        for a in 0..self.n {
            let own = self.own[a];
            self.reach[a] = if own.is_empty() || self.path {
                own
            } else {
                let start = own.iter().next().expect("non-empty");
                let comp = self.component(own.union(self.unassigned), start);
                if own.0 & !comp.0 != 0 {
                    return false;
                }
                comp
            };
        }
        if self.zero_only && self.lo.iter().any(|&l| l > 0) {
            return false;
        }
        match &self.target {
            Target::Enumerate(_) => true,
            Target::MinMax { best, .. } => best.is_none_or(|b| self.lo.iter().all(|&l| l < b)),
            Target::Query(_) => self.query_ok(),
        }
    }

    fn component(&self, allowed: Bits, start: usize) -> Bits {
        let mut comp = Bits::single(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = 0u128;
            for v in frontier.iter() {
                next |= self.nbr[v].0;
            }
            frontier = Bits(next & allowed.0 & !comp.0);
            comp = comp.union(frontier);
        }
        comp
    }

    fn fill_comps(&mut self) {
        self.comps.clear();
        if self.path {
            if !self.unassigned.is_empty() {
                self.comps.push(self.unassigned);
            }
            return;
        }
        let mut rest = self.unassigned;
        while let Some(start) = rest.iter().next() {
            let comp = self.component(self.unassigned, start);
            rest = Bits(rest.0 & !comp.0);
            self.comps.push(comp);
        }
    }

    /// Largest value agent `i` can see in agent `j`'s final bundle.
    fn upper(&self, i: usize, j: usize) -> i128 {
        if self.own[j].is_empty() {
            self.comps
                .iter()
                .map(|&c| self.value(i, c))
                .max()
                .unwrap_or(0)
        } else {
            self.value(i, self.reach[j])
        }
    }

    fn query_ok(&mut self) -> bool {
        let Target::Query(check) = &self.target else {
            unreachable!()
        };
        let (criterion, goods, cn, cd) = (check.criterion, check.goods, check.cn, check.cd);
        let n = self.n;
        let lo_max = self.lo.iter().copied().max().unwrap_or(0);
        // More agents without items than items left: someone ends empty.
        let empties = self.own.iter().filter(|b| b.is_empty()).count();
        let forced_empty = empties > self.unassigned.len();
        match criterion {
            Criterion::Prop if !goods => self.lo.iter().zip(&check.caps).all(|(l, c)| l <= c),
            Criterion::Prop => {
                let caps = check.caps.clone();
                self.fill_comps();
                (0..n).all(|i| self.upper(i, i) >= caps[i])
            }
            Criterion::Eq => {
                if forced_empty && lo_max > 0 {
                    return false;
                }
                self.fill_comps();
                let min_hi = (0..n).map(|j| self.upper(j, j)).min().unwrap_or(0);
                lo_max * cd <= cn * min_hi
            }
            Criterion::Ef if !goods => {
                if forced_empty && lo_max > 0 {
                    return false;
                }
                self.fill_comps();
                (0..n).all(|i| {
                    let own = self.lo[i] * cd;
                    own == 0 || (0..n).all(|j| j == i || own <= cn * self.upper(i, j))
                })
            }
            Criterion::Ef => {
                self.fill_comps();
                (0..n).all(|i| {
                    let best = cn * self.upper(i, i);
                    (0..n).all(|j| j == i || best >= cd * self.value(i, self.own[j]))
                })
            }
        }
    }
}

impl Check {
    fn new(
        instance: &Instance,
        query: &FairnessQuery,
        scale: &BigInt,
    ) -> Result<Self, OracleError> {
        let factor = query.factor();
        let cn = factor.numer().to_i128().filter(|&x| x < LIMIT);
        let cd = factor.denom().to_i128().filter(|&x| x < LIMIT);
        let (Some(cn), Some(cd)) = (cn, cd) else {
            return Err(OracleError::ValuesTooLarge);
        };
        let goods = instance.polarity() == Polarity::Goods;
        let caps = if query.criterion() == Criterion::Prop {
            let scale = Rational::from_integer(scale.clone());
            (0..instance.agents())
                .map(|a| {
                    let share = query.share(instance, a) * &scale;
                    let bound = if goods {
                        (share / factor).ceil()
                    } else {
                        (share * factor).floor()
                    };
                    clamp(bound.to_integer())
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Check {
            criterion: query.criterion(),
            goods,
            cn,
            cd,
            caps,
        })
    }
}

fn clamp(x: BigInt) -> i128 {
    if x.abs() > BigInt::from(CAP_CLAMP) {
        if x.is_negative() {
            -CAP_CLAMP
        } else {
            CAP_CLAMP
        }
    } else {
        x.to_i128().expect("clamped")
    }
}

fn to_allocation(own: &[Bits]) -> Allocation {
    Allocation::from_bundles(own.iter().map(|b| b.iter()))
}

/// Breadth-first order starting from a vertex of maximum degree (lowest id
/// on ties); each further component starts the same way.
fn bfs_order(instance: &Instance) -> Vec<usize> {
    let m = instance.items();
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    while order.len() < m {
        let start = (0..m)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (instance.degree(v), core::cmp::Reverse(v)))
            .expect("unvisited vertex");
        seen[start] = true;
        let mut head = order.len();
        order.push(start);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in instance.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}
