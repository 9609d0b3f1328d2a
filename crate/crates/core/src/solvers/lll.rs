//! Moser–Tardos resampling for the two local-lemma experiments.
//!
//! In both, a bad event is a vertex `w` with `deg_M(w) ≥ t+1`. The violated
//! vertex with the lowest id is repaired first, and `F` is the first `t+1`
//! chosen edges through it (in incidence order); the variables behind `F`
//! are then redrawn.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certify, require_t, SolveOutcome};
use crate::error::{Error, Result};
use crate::hypergraph::{girth_less_than_4, EdgeSelection, Hypergraph};

pub const DEFAULT_MAX_RESAMPLES: u64 = 1_000_000;
pub const DEFAULT_MAX_RESTARTS: u64 = 20;

/// Variables of the experiments and the derived multiset bookkeeping.
///
/// `pick[v]` is `P_v` (first experiment) or `Y_v` (second); `first_step[e]`
/// is `X_e`. `count[e]` is the number of variables currently selecting `e`,
/// so `e ∈ M` iff `count[e] > 0`.
struct ResampleState<'h> {
    h: &'h Hypergraph,
    t: usize,
    pick: Vec<usize>,
    first_step: Vec<bool>,
    /// Number of step-one edges through each vertex.
    x_deg: Vec<usize>,
    count: Vec<usize>,
    deg: Vec<usize>,
    violated: BTreeSet<usize>,
    rng: ChaCha8Rng,
    resample_log: u64,
}

impl<'h> ResampleState<'h> {
    fn new(h: &'h Hypergraph, t: usize, seed: u64) -> Self {
        ResampleState {
            h,
            t,
            pick: vec![usize::MAX; h.n_vertices()],
            first_step: vec![false; h.n_edges()],
            x_deg: vec![0; h.n_vertices()],
            count: vec![0; h.n_edges()],
            deg: vec![0; h.n_vertices()],
            violated: BTreeSet::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            resample_log: 0,
        }
    }

    fn inc(&mut self, e: usize) {
        self.count[e] += 1;
        if self.count[e] == 1 {
            for &u in self.h.edge(e) {
                self.deg[u] += 1;
                if self.deg[u] == self.t + 1 {
                    self.violated.insert(u);
                }
            }
        }
    }

    fn dec(&mut self, e: usize) {
        self.count[e] -= 1;
        if self.count[e] == 0 {
            for &u in self.h.edge(e) {
                if self.deg[u] == self.t + 1 {
                    self.violated.remove(&u);
                }
                self.deg[u] -= 1;
            }
        }
    }

    /// `Y_v` only contributes while `v` is missed by step one.
    fn pick_active(&self, v: usize) -> bool {
        self.x_deg[v] == 0 && self.pick[v] != usize::MAX
    }

    fn draw_pick(&mut self, v: usize) -> usize {
        *self
            .h
            .incident(v)
            .choose(&mut self.rng)
            .expect("vertex has an incident edge")
    }

    fn set_pick(&mut self, v: usize, e: usize) {
        if self.pick_active(v) {
            self.dec(self.pick[v]);
        }
        self.pick[v] = e;
        if self.pick_active(v) {
            self.inc(e);
        }
    }

    fn set_first_step(&mut self, e: usize, on: bool) {
        if self.first_step[e] == on {
            return;
        }
        if !on {
            self.dec(e);
        }
        self.first_step[e] = on;
        for i in 0..self.h.edge(e).len() {
            let u = self.h.edge(e)[i];
            let was = self.pick_active(u);
            if on {
                self.x_deg[u] += 1;
            } else {
                self.x_deg[u] -= 1;
            }
            match (was, self.pick_active(u)) {
                (true, false) => self.dec(self.pick[u]),
                (false, true) => self.inc(self.pick[u]),
                _ => {}
            }
        }
        if on {
            self.inc(e);
        }
    }

    /// `V(F)` for the lowest violated vertex, ascending.
    fn bad_event(&self) -> Option<Vec<usize>> {
        let &w = self.violated.first()?;
        let mut verts: Vec<usize> = self
            .h
            .incident(w)
            .iter()
            .copied()
            .filter(|&e| self.count[e] > 0)
            .take(self.t + 1)
            .flat_map(|e| self.h.edge(e).iter().copied())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        Some(verts)
    }

    fn selection(&self) -> EdgeSelection<'h> {
        let chosen: Vec<usize> = (0..self.h.n_edges())
            .filter(|&e| self.count[e] > 0)
            .collect();
        EdgeSelection::from_indices(self.h, &chosen).expect("distinct in-range indices")
    }
}

/// First experiment: every vertex picks a uniformly random incident edge,
/// `M = {P_v}`. Violations resample `P_u` for all `u ∈ V(F)`.
pub fn lll_hitting(
    h: &Hypergraph,
    t: usize,
    seed: u64,
    max_resamples: u64,
) -> Result<SolveOutcome<'_>> {
    require_t(t)?;
    if h.n_vertices() > 0 && h.min_degree() == 0 {
        return Err(Error::Precondition(
            "every vertex needs an incident edge".into(),
        ));
    }
    let start = Instant::now();
    let mut st = ResampleState::new(h, t, seed);
    for v in 0..h.n_vertices() {
        let e = st.draw_pick(v);
        st.set_pick(v, e);
    }
    while let Some(vf) = st.bad_event() {
        if st.resample_log >= max_resamples {
            return Ok(SolveOutcome::gave_up(
                st.resample_log,
                start.elapsed(),
                format!("{max_resamples} resamples without quiescence"),
            ));
        }
        st.resample_log += 1;
        for u in vf {
            let e = st.draw_pick(u);
            st.set_pick(u, e);
        }
    }
    let n = st.resample_log;
    Ok(certify(st.selection(), t, n, start.elapsed()))
}

/// Second experiment, for girth at least four: each edge enters with
/// probability `p = (ln r + 1)/(δ - 1)` (`X_e`), then every vertex missed by
/// step one adds its own random incident edge (`Y_v`). A violated star `F`
/// redraws `X_e` for every edge meeting `V(F)` and `Y_v` for `v ∈ V(F)`.
/// After `max_resamples` repairs the whole experiment restarts.
pub fn lll_hitting_girth4(
    h: &Hypergraph,
    t: usize,
    seed: u64,
    max_restarts: u64,
    max_resamples: u64,
) -> Result<SolveOutcome<'_>> {
    require_t(t)?;
    let r = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("girth-four experiment needs a uniform host".into()))?;
    if girth_less_than_4(h) {
        return Err(Error::Precondition(
            "host has a cycle of length 2 or 3".into(),
        ));
    }
    let delta = h.min_degree() as f64;
    let ln_r = (r as f64).ln();
    if delta < ln_r + 2.0 {
        return Err(Error::Precondition(format!(
            "minimum degree {delta} is below ln r + 2 = {:.3}; take M = E instead",
            ln_r + 2.0
        )));
    }
    let p = ((ln_r + 1.0) / (delta - 1.0)).min(1.0);
    let start = Instant::now();
    let mut st = ResampleState::new(h, t, seed);
    let mut total = 0u64;
    for _ in 0..=max_restarts {
        for e in 0..h.n_edges() {
            st.set_first_step(e, false);
        }
        for v in 0..h.n_vertices() {
            st.set_pick(v, usize::MAX);
        }
        debug_assert!(st.count.iter().all(|&c| c == 0));
        for e in 0..h.n_edges() {
            let on = st.rng.gen_bool(p);
            st.set_first_step(e, on);
        }
        for v in 0..h.n_vertices() {
            let e = st.draw_pick(v);
            st.set_pick(v, e);
        }
        let mut round = 0u64;
        while let Some(vf) = st.bad_event() {
            if round >= max_resamples {
                break;
            }
            round += 1;
            let mut touched: Vec<usize> = vf
                .iter()
                .flat_map(|&v| h.incident(v).iter().copied())
                .collect();
            touched.sort_unstable();
            touched.dedup();
            for e in touched {
                let on = st.rng.gen_bool(p);
                st.set_first_step(e, on);
            }
            for &u in &vf {
                let e = st.draw_pick(u);
                st.set_pick(u, e);
            }
        }
        total += round;
        if st.violated.is_empty() {
            return Ok(certify(st.selection(), t, total, start.elapsed()));
        }
    }
    Ok(SolveOutcome::gave_up(
        total,
        start.elapsed(),
        format!(
            "{} restarts of {max_resamples} resamples each",
            max_restarts + 1
        ),
    ))
}
