use std::time::Instant;

use super::{certify, require_t, SolveOutcome};
use crate::error::Result;
use crate::hypergraph::{EdgeSelection, Hypergraph};

/// Default node cap for the branch-and-bound solvers.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

struct Search<'h> {
    h: &'h Hypergraph,
    t: usize,
    sel: EdgeSelection<'h>,
    banned: Vec<bool>,
    nodes: u64,
    budget: u64,
}

enum Found {
    Yes,
    No,
    Budget,
}

impl<'h> Search<'h> {
    fn addable(&self, e: usize) -> bool {
        !self.sel.contains(e)
            && !self.banned[e]
            && self.h.edge(e).iter().all(|&v| self.sel.degree(v) < self.t)
    }

    /// Capacity bound. Take a set `S` of vertices meeting every addable
    /// edge (greedy); each future edge consumes capacity at some vertex of
    /// `S`, so at most `cap(S)` edges can still be added, while the
    /// uncovered vertices outside `S` need at least
    /// `⌈|U \ S| / max_e |e ∩ (U \ S)|⌉` of them.
    fn hopeless(&self, addable: &[usize], uncovered: &[usize]) -> bool {
        let n = self.h.n_vertices();
        let mut in_s = vec![false; n];
        let mut live = vec![true; addable.len()];
        let mut remaining = addable.len();
        let mut count = vec![0usize; n];
        for &e in addable {
            for &v in self.h.edge(e) {
                count[v] += 1;
            }
        }
        let mut cap = 0usize;
        while remaining > 0 {
            let v = (0..n)
                .max_by_key(|&v| (count[v], std::cmp::Reverse(v)))
                .expect("n > 0");
            in_s[v] = true;
            cap += self.t - self.sel.degree(v);
            for (i, &e) in addable.iter().enumerate() {
                if live[i] && self.h.edge(e).contains(&v) {
                    live[i] = false;
                    remaining -= 1;
                    for &u in self.h.edge(e) {
                        count[u] -= 1;
                    }
                }
            }
        }
        let outside = uncovered.iter().filter(|&&v| !in_s[v]).count();
        if outside == 0 {
            return false;
        }
        let mut is_target = vec![false; n];
        for &v in uncovered {
            is_target[v] = !in_s[v];
        }
        let per_edge = addable
            .iter()
            .map(|&e| self.h.edge(e).iter().filter(|&&v| is_target[v]).count())
            .max()
            .unwrap_or(0);
        per_edge == 0 || outside.div_ceil(per_edge) > cap
    }

    fn dfs(&mut self) -> Found {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Found::Budget;
        }
        let uncovered = self.sel.uncovered();
        if uncovered.is_empty() {
            return Found::Yes;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for &v in &uncovered {
            let opts: Vec<usize> = self
                .h
                .incident(v)
                .iter()
                .copied()
                .filter(|&e| self.addable(e))
                .collect();
            if opts.is_empty() {
                return Found::No;
            }
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                best = Some((v, opts));
            }
        }
        let addable: Vec<usize> = (0..self.h.n_edges()).filter(|&e| self.addable(e)).collect();
        if self.hopeless(&addable, &uncovered) {
            return Found::No;
        }
        let (_, opts) = best.expect("uncovered is nonempty");
        let mut result = Found::No;
        let mut tried = Vec::new();
        for e in opts {
            if !self.addable(e) {
                continue;
            }
            self.sel.insert(e);
            let r = self.dfs();
            if matches!(r, Found::Yes) {
                return r;
            }
            self.sel.remove(e);
            match r {
                Found::No => {
                    self.banned[e] = true;
                    tried.push(e);
                }
                other => {
                    result = other;
                    break;
                }
            }
        }
        for e in tried {
            self.banned[e] = false;
        }
        result
    }
}

/// Decides whether `h` has a `t`-shallow hitting edge set by branching on
/// the uncovered vertex with the fewest addable incident edges. Edges
/// already tried at a node are excluded from the later sibling branches.
pub fn exact_shallow_hitting(h: &Hypergraph, t: usize, budget: u64) -> Result<SolveOutcome<'_>> {
    require_t(t)?;
    let start = Instant::now();
    let mut s = Search {
        h,
        t,
        sel: EdgeSelection::new(h),
        banned: vec![false; h.n_edges()],
        nodes: 0,
        budget,
    };
    Ok(match s.dfs() {
        Found::Yes => {
            let nodes = s.nodes;
            certify(s.sel, t, nodes, start.elapsed())
        }
        Found::No => SolveOutcome::unsat(s.nodes, start.elapsed()),
        Found::Budget => SolveOutcome::gave_up(
            s.nodes,
            start.elapsed(),
            format!("node budget {budget} exhausted"),
        ),
    })
}

#[derive(Clone, Debug)]
pub struct MaxShallowOutcome<'h> {
    /// `Sat` when optimality was proved, `GaveUp` on budget exhaustion.
    pub outcome: SolveOutcome<'h>,
    /// Size of the best selection found.
    pub nu: usize,
    /// Upper bound on `ν_t` (equal to `nu` when proved optimal).
    pub upper_bound: usize,
    /// `ν_t / (nt/r)` for `r`-uniform hosts.
    pub eta: Option<f64>,
}

struct MaxSearch<'h> {
    h: &'h Hypergraph,
    t: usize,
    min_size: usize,
    sel: EdgeSelection<'h>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl MaxSearch<'_> {
    fn fits(&self, e: usize) -> bool {
        self.h.edge(e).iter().all(|&v| self.sel.degree(v) < self.t)
    }

    fn bound(&self, next: usize) -> usize {
        let remaining = (next..self.h.n_edges()).filter(|&e| self.fits(e)).count();
        let spare: usize = self.sel.degrees().iter().map(|&d| self.t - d).sum();
        self.sel.len() + remaining.min(spare / self.min_size)
    }

    fn dfs(&mut self, next: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.sel.len() > self.best.len() {
            self.best = self.sel.indices();
        }
        if next == self.h.n_edges() || self.bound(next) <= self.best.len() {
            return;
        }
        if self.fits(next) {
            self.sel.insert(next);
            self.dfs(next + 1);
            self.sel.remove(next);
            if self.exhausted {
                return;
            }
        }
        self.dfs(next + 1);
    }
}

/// Maximum `t`-shallow edge set by include/exclude branching in edge order,
/// pruned with `|M| + min(#fitting later edges, ⌊Σ_v (t - deg_M(v)) / r⌋)`.
pub fn exact_max_shallow(h: &Hypergraph, t: usize, budget: u64) -> Result<MaxShallowOutcome<'_>> {
    require_t(t)?;
    let start = Instant::now();
    let min_size = h.edges().iter().map(Vec::len).min().unwrap_or(1).max(1);
    let mut s = MaxSearch {
        h,
        t,
        min_size,
        sel: EdgeSelection::new(h),
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    s.dfs(0);
    let best = EdgeSelection::from_indices(h, &s.best)?;
    assert!(
        best.verify(t).is_t_shallow,
        "maximum search produced a non-shallow set"
    );
    let nu = best.len();
    let eta = h
        .uniformity()
        .filter(|_| h.n_vertices() > 0)
        .map(|r| nu as f64 / (h.n_vertices() as f64 * t as f64 / r as f64));
    let elapsed = start.elapsed();
    Ok(if s.exhausted {
        let upper = (h.n_vertices() * t / min_size).min(h.n_edges());
        let mut outcome =
            SolveOutcome::gave_up(s.nodes, elapsed, format!("node budget {budget} exhausted"));
        outcome.selection = Some(best);
        MaxShallowOutcome {
            outcome,
            nu,
            upper_bound: upper,
            eta,
        }
    } else {
        MaxShallowOutcome {
            outcome: SolveOutcome::sat(best, s.nodes, elapsed),
            nu,
            upper_bound: nu,
            eta,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{codegree_gadget_uniform, projective_truncated};
    use crate::solvers::Status;

    #[test]
    fn truncated_plane() {
        let h = projective_truncated(2).unwrap();
        assert_eq!(
            exact_shallow_hitting(&h, 1, DEFAULT_NODE_BUDGET)
                .unwrap()
                .status,
            Status::Unsat
        );
        assert_eq!(
            exact_shallow_hitting(&h, 2, DEFAULT_NODE_BUDGET)
                .unwrap()
                .status,
            Status::Sat
        );
    }

    #[test]
    fn uniform_gadget_is_unsat() {
        let h = codegree_gadget_uniform(15, 3, 2).unwrap();
        assert_eq!(
            exact_shallow_hitting(&h, 2, DEFAULT_NODE_BUDGET)
                .unwrap()
                .status,
            Status::Unsat
        );
    }

    #[test]
    fn budget_gives_up() {
        let h = projective_truncated(4).unwrap();
        let out = exact_shallow_hitting(&h, 3, 2).unwrap();
        assert_eq!(out.status, Status::GaveUp);
    }

    #[test]
    fn disjoint_edges_all_fit() {
        let h = Hypergraph::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let m = exact_max_shallow(&h, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((m.nu, m.upper_bound), (3, 3));
        assert_eq!(m.eta, Some(1.0));
    }

    #[test]
    fn max_shallow_on_fano() {
        let h = crate::constructions::projective_full(2).unwrap();
        assert_eq!(exact_max_shallow(&h, 1, DEFAULT_NODE_BUDGET).unwrap().nu, 1);
        assert_eq!(exact_max_shallow(&h, 3, DEFAULT_NODE_BUDGET).unwrap().nu, 7);
    }
}
