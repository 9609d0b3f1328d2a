use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{require_t, SolveOutcome};
use crate::bounds::partition_k;
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeSelection, Hypergraph};

#[derive(Clone, Debug)]
pub struct PartitionOutcome<'h> {
    /// On success the selection is a largest colour class.
    pub outcome: SolveOutcome<'h>,
    pub k: usize,
    /// Colour classes as ascending edge-index lists.
    pub classes: Option<Vec<Vec<usize>>>,
}

/// Colours edges with `k` colours so that every colour class is
/// `t`-shallow. A bad event is `t+1` edges of one colour at a vertex; the
/// lowest `(vertex, colour)` pair is repaired first by recolouring its first
/// `t+1` edges. Without `k`, the partition lemma's value `partition_k(Δ, r,
/// t)` is used (or 1 when `t >= Δ`).
pub fn partition_shallow(
    h: &Hypergraph,
    t: usize,
    k: Option<usize>,
    seed: u64,
    max_resamples: u64,
) -> Result<PartitionOutcome<'_>> {
    require_t(t)?;
    let max_delta = h.max_degree();
    let k = match k {
        Some(0) => return Err(Error::InvalidArgument("k must be at least 1".into())),
        Some(k) => k,
        None if max_delta <= t => 1,
        None => {
            let r = h
                .uniformity()
                .ok_or_else(|| Error::Precondition("default k needs a uniform host".into()))?;
            partition_k(max_delta as u64, r.max(2) as u64, t as u64)? as usize
        }
    };
    let start = Instant::now();
    let n = h.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colour: Vec<usize> = (0..h.n_edges()).map(|_| rng.gen_range(0..k)).collect();
    let mut count = vec![0usize; n * k];
    let mut violated = BTreeSet::new();
    let slot = |v: usize, c: usize| v * k + c;
    for (e, &c) in colour.iter().enumerate() {
        for &v in h.edge(e) {
            count[slot(v, c)] += 1;
            if count[slot(v, c)] == t + 1 {
                violated.insert((v, c));
            }
        }
    }
    let mut resamples = 0u64;
    while let Some(&(w, c)) = violated.first() {
        if resamples >= max_resamples {
            return Ok(PartitionOutcome {
                outcome: SolveOutcome::gave_up(
                    resamples,
                    start.elapsed(),
                    format!("{max_resamples} resamples without quiescence"),
                ),
                k,
                classes: None,
            });
        }
        resamples += 1;
        let f: Vec<usize> = h
            .incident(w)
            .iter()
            .copied()
            .filter(|&e| colour[e] == c)
            .take(t + 1)
            .collect();
        for e in f {
            let new = rng.gen_range(0..k);
            for &v in h.edge(e) {
                let s = slot(v, colour[e]);
                if count[s] == t + 1 {
                    violated.remove(&(v, colour[e]));
                }
                count[s] -= 1;
                let s = slot(v, new);
                count[s] += 1;
                if count[s] == t + 1 {
                    violated.insert((v, new));
                }
            }
            colour[e] = new;
        }
    }
    let mut classes = vec![Vec::new(); k];
    for (e, &c) in colour.iter().enumerate() {
        classes[c].push(e);
    }
    for class in &classes {
        let sel = EdgeSelection::from_indices(h, class)?;
        assert!(
            sel.verify(t).is_t_shallow,
            "colour class is not {t}-shallow"
        );
    }
    let largest = classes
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(_, c)| c.clone())
        .unwrap_or_default();
    let sel = EdgeSelection::from_indices(h, &largest)?;
    Ok(PartitionOutcome {
        outcome: SolveOutcome::sat(sel, resamples, start.elapsed()),
        k,
        classes: Some(classes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_regular;
    use crate::solvers::Status;

    #[test]
    fn classes_partition_the_edges() {
        let h = random_regular(40, 3, 6, 3).unwrap();
        let p = partition_shallow(&h, 2, None, 5, 100_000).unwrap();
        assert_eq!(p.outcome.status, Status::Sat);
        let mut all: Vec<usize> = p.classes.unwrap().concat();
        all.sort_unstable();
        assert_eq!(all, (0..h.n_edges()).collect::<Vec<_>>());
    }

    #[test]
    fn t_at_max_degree_is_free() {
        let h = random_regular(12, 3, 3, 1).unwrap();
        let p = partition_shallow(&h, 3, None, 0, 10).unwrap();
        assert_eq!((p.k, p.outcome.iterations), (1, 0));
    }
}
