//! Dinic max-flow over exact integer capacities.
//!
//! Used by the Prohorov kernel on small dense bipartite networks. Capacities
//! are scaled to a common denominator first, so the algorithm only ever
//! sees nonnegative integers; `u128` is tried before falling back to
//! arbitrary precision.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_bigint::BigUint;
use num_traits::Zero;

pub trait Capacity: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl Capacity for u128 {}
impl Capacity for BigUint {}

#[derive(Clone, Debug)]
struct Edge<C> {
    to: usize,
    rev: usize,
    cap: C,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork<C> {
    graph: Vec<Vec<Edge<C>>>,
    level: Vec<i64>,
    iter: Vec<usize>,
}

/// Handle returned by [`FlowNetwork::add_edge`] for reading the flow back.
#[derive(Clone, Copy, Debug)]
pub struct EdgeId {
    from: usize,
    index: usize,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            graph: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: C) -> EdgeId {
        let rev_from = self.graph[to].len() + usize::from(from == to);
        let rev_to = self.graph[from].len();
        self.graph[from].push(Edge { to, rev: rev_from, cap });
        self.graph[to].push(Edge {
            to: from,
            rev: rev_to,
            cap: C::zero(),
        });
        EdgeId { from, index: rev_to }
    }

    /// Flow currently routed through `id`.
    pub fn flow_on(&self, id: EdgeId) -> C {
        let e = &self.graph[id.from][id.index];
        self.graph[e.to][e.rev].cap.clone()
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if !e.cap.is_zero() && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: C) -> C {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let (to, cap) = {
                let e = &self.graph[v][i];
                (e.to, e.cap.clone())
            };
            if !cap.is_zero() && self.level[v] < self.level[to] {
                let pushed = self.dfs(to, t, limit.clone().min(cap));
                if !pushed.is_zero() {
                    let rev = self.graph[v][i].rev;
                    let e = &mut self.graph[v][i];
                    e.cap = e.cap.clone() - pushed.clone();
                    let r = &mut self.graph[to][rev];
                    r.cap = r.cap.clone() + pushed.clone();
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        C::zero()
    }

    /// Maximum `s`–`t` flow; `infinity` must exceed every finite cut.
    pub fn max_flow(&mut self, s: usize, t: usize, infinity: C) -> C {
        let mut total = C::zero();
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, infinity.clone());
                if f.is_zero() {
                    break;
                }
                total = total + f;
            }
        }
    }
}

/// Max flow through a bipartite network `source -> left_i -> right_j -> sink`
/// with the given supplies, demands and admissible pairs. Returns the total
/// and the flow matrix (row `i`, column `j`).
pub fn bipartite_transport<C: Capacity>(
    supply: &[C],
    demand: &[C],
    admissible: &[(usize, usize)],
    infinity: C,
) -> (C, Vec<Vec<C>>) {
    let (a, b) = (supply.len(), demand.len());
    let source = a + b;
    let sink = source + 1;
    let mut net = FlowNetwork::new(a + b + 2);
    for (i, c) in supply.iter().enumerate() {
        net.add_edge(source, i, c.clone());
    }
    for (j, c) in demand.iter().enumerate() {
        net.add_edge(a + j, sink, c.clone());
    }
    let ids: Vec<(usize, usize, EdgeId)> = admissible
        .iter()
        .map(|&(i, j)| (i, j, net.add_edge(i, a + j, infinity.clone())))
        .collect();
    let total = net.max_flow(source, sink, infinity);
    let mut matrix = vec![vec![C::zero(); b]; a];
    for (i, j, id) in ids {
        matrix[i][j] = net.flow_on(id);
    }
    (total, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_small_network() {
        // CLRS-style example, max flow 23
        let mut net = FlowNetwork::<u128>::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            net.add_edge(u, v, c);
        }
        assert_eq!(net.max_flow(0, 5, u128::MAX), 23);
    }

    #[test]
    fn bipartite_respects_admissible_pairs() {
        let supply = [BigUint::from(1u32), BigUint::from(1u32)];
        let demand = [BigUint::from(2u32)];
        let (total, m) = bipartite_transport(&supply, &demand, &[(0, 0)], BigUint::from(100u32));
        assert_eq!(total, BigUint::from(1u32));
        assert_eq!(m[0][0], BigUint::from(1u32));
        assert_eq!(m[1][0], BigUint::zero());
    }

    #[test]
    fn flow_matrix_conserves_mass() {
        let supply = [3u128, 2, 5];
        let demand = [4u128, 4, 2];
        let pairs = [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (2, 0)];
        let (total, m) = bipartite_transport(&supply, &demand, &pairs, 1000);
        assert_eq!(total, 10);
        for (i, row) in m.iter().enumerate() {
            assert_eq!(row.iter().sum::<u128>(), supply[i]);
        }
    }
}
