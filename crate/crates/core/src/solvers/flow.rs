//! Bipartite `(1, t)`-factors via circulation with lower bounds, and the
//! subset condition `|X| ≤ t·|N(X)|` that characterises them.

use std::collections::VecDeque;
use std::time::Instant;

use serde::Serialize;

use super::{certify, require_t, SolveOutcome};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeSelection, Hypergraph};

/// Largest side accepted by [`hall_condition_check`].
pub const HALL_MAX_SIDE: usize = 22;

struct Arc {
    to: usize,
    cap: i64,
}

/// Dinic's algorithm on an adjacency-list residual graph.
struct FlowNet {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Adds `u → v` with capacity `cap`; returns the arc id.
    fn add(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.arcs.push(Arc { to: u, cap: 0 });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    fn flow_on(&self, id: usize) -> i64 {
        self.arcs[id + 1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &id in &self.adj[u] {
                let a = &self.arcs[id];
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    q.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let id = self.adj[u][self.iter[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.arcs[id].cap -= pushed;
                    self.arcs[id ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

fn bipartite_sides(h: &Hypergraph) -> Result<(Vec<usize>, Vec<usize>)> {
    let parts = h
        .parts()
        .filter(|p| p.count() == 2)
        .ok_or_else(|| Error::Precondition("host must carry two parts".into()))?;
    if h.edges().iter().any(|e| e.len() != 2) {
        return Err(Error::Precondition("host must be 2-uniform".into()));
    }
    Ok((parts.members(0), parts.members(1)))
}

/// Finds a subgraph in which every vertex has degree between 1 and `t`,
/// i.e. a `t`-shallow hitting edge set of a bipartite graph, or proves none
/// exists. The source feeds each `a ∈ A` with flow in `[1, t]`, each host
/// edge carries at most one unit, each `b ∈ B` drains `[1, t]` into the sink;
/// lower bounds are removed by the usual excess/deficit transform.
pub fn bipartite_factor(h: &Hypergraph, t: usize) -> Result<SolveOutcome<'_>> {
    require_t(t)?;
    let (side_a, _) = bipartite_sides(h)?;
    let start = Instant::now();
    let n = h.n_vertices();
    let (s, sink, ss, tt) = (n, n + 1, n + 2, n + 3);
    let mut net = FlowNet::new(n + 4);
    let mut excess = vec![0i64; n + 4];
    let mut bounded = |net: &mut FlowNet, u: usize, v: usize, lo: i64, hi: i64| {
        net.add(u, v, hi - lo);
        excess[v] += lo;
        excess[u] -= lo;
    };
    let in_a: Vec<bool> = {
        let mut m = vec![false; n];
        for &a in &side_a {
            m[a] = true;
        }
        m
    };
    for (v, &a_side) in in_a.iter().enumerate() {
        if a_side {
            bounded(&mut net, s, v, 1, t as i64);
        } else {
            bounded(&mut net, v, sink, 1, t as i64);
        }
    }
    let edge_arcs: Vec<usize> = h
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = if in_a[e[0]] {
                (e[0], e[1])
            } else {
                (e[1], e[0])
            };
            net.add(a, b, 1)
        })
        .collect();
    net.add(sink, s, i64::MAX / 4);
    let mut demand = 0;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            net.add(ss, v, x);
            demand += x;
        } else if x < 0 {
            net.add(v, tt, -x);
        }
    }
    let flow = net.max_flow(ss, tt);
    let elapsed = start.elapsed();
    if flow < demand {
        return Ok(SolveOutcome::unsat(1, elapsed));
    }
    let chosen: Vec<usize> = (0..h.n_edges())
        .filter(|&e| net.flow_on(edge_arcs[e]) > 0)
        .collect();
    let sel = EdgeSelection::from_indices(h, &chosen)?;
    Ok(certify(sel, t, 1, elapsed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallReport {
    pub holds: bool,
    /// A set `X` within one side with `|X| > t·|N(X)|`.
    pub violating: Option<(Side, Vec<usize>)>,
}

/// Checks `|X| ≤ t·|N(X)|` for every nonempty `X ⊆ B`, then every
/// nonempty `X ⊆ A`, by enumerating subsets; reports the first violation
/// in that order (smallest bitmask within a side).
pub fn hall_condition_check(h: &Hypergraph, t: usize) -> Result<HallReport> {
    require_t(t)?;
    let (side_a, side_b) = bipartite_sides(h)?;
    if side_a.len() > HALL_MAX_SIDE || side_b.len() > HALL_MAX_SIDE {
        return Err(Error::GuardExceeded(format!(
            "subset enumeration is limited to sides of {HALL_MAX_SIDE} vertices"
        )));
    }
    for (side, this, other) in [(Side::B, &side_b, &side_a), (Side::A, &side_a, &side_b)] {
        let pos = |v: usize| other.iter().position(|&u| u == v);
        let adj: Vec<u32> = this
            .iter()
            .map(|&v| {
                h.incident(v).iter().fold(0u32, |m, &e| {
                    let w = if h.edge(e)[0] == v {
                        h.edge(e)[1]
                    } else {
                        h.edge(e)[0]
                    };
                    m | pos(w).map_or(0, |i| 1 << i)
                })
            })
            .collect();
        let mut nbr = vec![0u32; 1 << this.len()];
        for x in 1usize..nbr.len() {
            let low = x.trailing_zeros() as usize;
            nbr[x] = nbr[x & (x - 1)] | adj[low];
            if x.count_ones() as usize > t * nbr[x].count_ones() as usize {
                let members = (0..this.len())
                    .filter(|&i| x >> i & 1 == 1)
                    .map(|i| this[i])
                    .collect();
                return Ok(HallReport {
                    holds: false,
                    violating: Some((side, members)),
                });
            }
        }
    }
    Ok(HallReport {
        holds: true,
        violating: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::bipartite_tight_gadget;
    use crate::solvers::Status;

    fn four_cycle() -> Hypergraph {
        Hypergraph::new(4, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]])
            .unwrap()
            .with_parts(vec![0, 0, 1, 1], 2)
            .unwrap()
    }

    #[test]
    fn four_cycle_has_perfect_matching() {
        let h = four_cycle();
        let out = bipartite_factor(&h, 1).unwrap();
        assert_eq!(out.status, Status::Sat);
        assert_eq!(out.selection.unwrap().len(), 2);
        assert!(hall_condition_check(&h, 1).unwrap().holds);
    }

    #[test]
    fn tight_gadget_fails_on_b1() {
        let h = bipartite_tight_gadget(13, 2).unwrap();
        assert_eq!(bipartite_factor(&h, 2).unwrap().status, Status::Unsat);
        let rep = hall_condition_check(&h, 2).unwrap();
        assert_eq!(rep.violating, Some((Side::B, (13..22).collect())));
    }

    #[test]
    fn star_needs_large_t() {
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![0, 2], vec![0, 3]])
            .unwrap()
            .with_parts(vec![0, 1, 1, 1], 2)
            .unwrap();
        assert_eq!(bipartite_factor(&h, 2).unwrap().status, Status::Unsat);
        assert_eq!(bipartite_factor(&h, 3).unwrap().status, Status::Sat);
        assert!(!hall_condition_check(&h, 2).unwrap().holds);
        assert!(hall_condition_check(&h, 3).unwrap().holds);
    }

    #[test]
    fn rejects_non_bipartite_hosts() {
        let h = crate::constructions::figure1_witness();
        assert!(bipartite_factor(&h, 2).is_err());
    }
}
