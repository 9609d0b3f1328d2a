//! Co-degree augmentation: the exchange arguments behind the minimum
//! co-degree thresholds, run as greedy loops. Each move strictly increases
//! the number of covered vertices, so the loops stop after at most `n`
//! moves. When the co-degree hypothesis fails a move may find no suitable
//! vertex; the solver then gives up with a note naming the step.

use std::time::Instant;

use super::{certify, SolveOutcome};
use crate::error::{Error, Result};
use crate::hypergraph::{neighborhood_unchecked, EdgeSelection, Hypergraph};

fn check_t(t: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!(
            "augmentation needs t >= 2, got {t}"
        )));
    }
    Ok(())
}

/// Lowest-id vertex of minimal key among the candidates accepted by `ok`.
fn best_by(
    cands: &[usize],
    key: impl Fn(usize) -> usize,
    ok: impl Fn(usize) -> bool,
) -> Option<usize> {
    cands
        .iter()
        .copied()
        .filter(|&v| ok(v))
        .min_by_key(|&v| (key(v), v))
}

fn edge_for(sel: &EdgeSelection<'_>, hat: &[usize], v: usize) -> usize {
    let mut set = hat.to_vec();
    set.push(v);
    set.sort_unstable();
    sel.host()
        .find_edge(&set, |e| sel.contains(e))
        .expect("neighbourhood vertex completes an edge")
}

/// Greedy form of the uniform co-degree argument.
///
/// While at least `r-1` vertices are uncovered, take `ê` = the `r-1`
/// lowest uncovered vertices and `v ∈ N(ê)` with `deg_M(v) < t` (minimal
/// degree, then lowest id), and add `e = ê ∪ {v}`; if `v` has degree one
/// and its edge `e'` already holds a vertex of degree at least two, `e'` is
/// dropped. This keeps at most one vertex of degree ≥ 2 per chosen edge.
/// Finally, with `0 < n₀ ≤ r-2`, `ê` is the uncovered vertices padded with
/// low-id vertices of degree below `t`.
pub fn codegree_augment_uniform(h: &Hypergraph, t: usize) -> Result<SolveOutcome<'_>> {
    check_t(t)?;
    let r = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("host must be uniform".into()))?;
    if r < 2 {
        return Err(Error::Precondition(
            "host must be at least 2-uniform".into(),
        ));
    }
    let start = Instant::now();
    let mut sel = EdgeSelection::new(h);
    let mut steps = 0u64;
    loop {
        let unc = sel.uncovered();
        if unc.len() < r - 1 {
            break;
        }
        steps += 1;
        let hat = &unc[..r - 1];
        let nbrs = neighborhood_unchecked(h, hat);
        let Some(v) = best_by(&nbrs, |v| sel.degree(v), |v| sel.degree(v) < t) else {
            return Ok(SolveOutcome::gave_up(
                steps,
                start.elapsed(),
                format!("stuck: no vertex of degree < {t} extends {hat:?}"),
            ));
        };
        let e = edge_for(&sel, hat, v);
        if sel.degree(v) == 1 {
            let other = sel.incident_chosen(v).next().expect("degree one");
            if h.edge(other).iter().any(|&u| sel.degree(u) >= 2) {
                sel.remove(other);
            }
        }
        sel.insert(e);
    }
    let unc = sel.uncovered();
    if !unc.is_empty() {
        steps += 1;
        let mut hat = unc.clone();
        hat.extend(
            (0..h.n_vertices())
                .filter(|&u| (1..t).contains(&sel.degree(u)))
                .take(r - 1 - unc.len()),
        );
        if hat.len() < r - 1 {
            return Ok(SolveOutcome::gave_up(
                steps,
                start.elapsed(),
                "stuck: too few vertices of degree below t to complete the final edge",
            ));
        }
        hat.sort_unstable();
        let nbrs = neighborhood_unchecked(h, &hat);
        let Some(v) = best_by(&nbrs, |v| sel.degree(v), |v| sel.degree(v) < t) else {
            return Ok(SolveOutcome::gave_up(
                steps,
                start.elapsed(),
                format!("stuck: final set {hat:?} has no extension of degree < {t}"),
            ));
        };
        let e = edge_for(&sel, &hat, v);
        sel.insert(e);
    }
    Ok(certify(sel, t, steps, start.elapsed()))
}

/// For each target part `i ∈ targets`, an `(r-1)`-set `ê_i` taking one
/// uncovered vertex from every other part, pairwise disjoint as far as the
/// supply allows: part `j` hands its uncovered vertices out in order and
/// repeats its last one once exhausted.
fn spread(uncovered: &[Vec<usize>], targets: &[usize]) -> Vec<Vec<usize>> {
    let mut hats = vec![Vec::new(); targets.len()];
    for (j, pool) in uncovered.iter().enumerate() {
        let mut next = 0;
        for (slot, &i) in targets.iter().enumerate() {
            if i == j {
                continue;
            }
            hats[slot].push(pool[next.min(pool.len() - 1)]);
            next += 1;
        }
    }
    for hat in &mut hats {
        hat.sort_unstable();
    }
    hats
}

/// Greedy form of the partite co-degree argument.
///
/// The selection keeps the same number `n₀` of uncovered vertices in every
/// part and `|M| ≤ ⌈n/k⌉(t-1) + n - n₀`. Moves, in priority order:
/// an edge entirely inside the uncovered set; when `|M|` is below its
/// budget, `r` edges `ê_i ∪ {v_i}` with `1 ≤ deg_M(v_i) < t`; otherwise an
/// edge with two or more vertices of degree at least two is replaced by one
/// such edge per deep vertex. The final step adds `n₀ + 1` edges covering
/// the last `n₀ ≤ r-2` vertices of each part. Part ties are broken by part id.
pub fn codegree_augment_partite(h: &Hypergraph, t: usize) -> Result<SolveOutcome<'_>> {
    check_t(t)?;
    let r = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("host must be uniform".into()))?;
    let parts = h
        .parts()
        .filter(|p| p.count() == r)
        .ok_or_else(|| Error::Precondition(format!("host must carry exactly r = {r} parts")))?;
    let sizes = parts.part_sizes();
    let n = sizes[0];
    if r < 2 || sizes.iter().any(|&s| s != n) {
        return Err(Error::Precondition(
            "parts must have equal sizes and r >= 2".into(),
        ));
    }
    let members: Vec<Vec<usize>> = (0..r).map(|p| parts.members(p)).collect();
    let c = n.div_ceil((r - 1) * t + 1);
    let start = Instant::now();
    let mut sel = EdgeSelection::new(h);
    let mut steps = 0u64;
    let stuck = |steps: u64, msg: String| {
        Ok(SolveOutcome::gave_up(
            steps,
            start.elapsed(),
            format!("stuck: {msg}"),
        ))
    };
    loop {
        let unc: Vec<Vec<usize>> = members
            .iter()
            .map(|m| m.iter().copied().filter(|&v| sel.degree(v) == 0).collect())
            .collect();
        let n0 = unc[0].len();
        debug_assert!(
            unc.iter().all(|u| u.len() == n0),
            "uncovered counts must stay balanced"
        );
        if n0 == 0 {
            break;
        }
        steps += 1;
        if let Some(e) = (0..h.n_edges())
            .find(|&e| !sel.contains(e) && h.edge(e).iter().all(|&v| sel.degree(v) == 0))
        {
            sel.insert(e);
            continue;
        }
        if n0 < r - 1 {
            let targets: Vec<usize> = (0..=n0).collect();
            let hats = spread(&unc, &targets);
            let mut picks = Vec::with_capacity(hats.len());
            for (i, hat) in hats.iter().enumerate() {
                let nbrs = neighborhood_unchecked(h, hat);
                match best_by(&nbrs, |v| sel.degree(v), |v| sel.degree(v) < t) {
                    Some(v) => picks.push(v),
                    None => {
                        return stuck(steps, format!("final set for part {i} has no extension"))
                    }
                }
            }
            for (hat, v) in hats.iter().zip(picks) {
                let e = edge_for(&sel, hat, v);
                sel.insert(e);
            }
            break;
        }
        let budget = c * (t - 1) + n - n0;
        if sel.len() < budget {
            let targets: Vec<usize> = (0..r).collect();
            let hats = spread(&unc, &targets);
            let mut picks = Vec::with_capacity(r);
            for (i, hat) in hats.iter().enumerate() {
                let nbrs = neighborhood_unchecked(h, hat);
                match best_by(
                    &nbrs,
                    |v| sel.degree(v),
                    |v| (1..t).contains(&sel.degree(v)),
                ) {
                    Some(v) => picks.push(v),
                    None => {
                        return stuck(
                            steps,
                            format!("batch move: no partly covered extension in part {i}"),
                        )
                    }
                }
            }
            for (hat, v) in hats.iter().zip(picks) {
                let e = edge_for(&sel, hat, v);
                sel.insert(e);
            }
            continue;
        }
        let Some(deep_edge) = sel
            .indices()
            .into_iter()
            .find(|&e| h.edge(e).iter().filter(|&&v| sel.degree(v) >= 2).count() >= 2)
        else {
            return stuck(
                steps,
                format!("no move applies with n0 = {n0} and |M| at its budget"),
            );
        };
        let deep: Vec<usize> = h
            .edge(deep_edge)
            .iter()
            .copied()
            .filter(|&v| sel.degree(v) >= 2)
            .collect();
        let mut by_part: Vec<(usize, usize)> = deep.iter().map(|&v| (parts.ids()[v], v)).collect();
        by_part.sort_unstable();
        let targets: Vec<usize> = by_part.iter().map(|&(p, _)| p).collect();
        let hats = spread(&unc, &targets);
        let mut picks = Vec::with_capacity(hats.len());
        for (hat, &(p, u)) in hats.iter().zip(&by_part) {
            let after = |v: usize| sel.degree(v) - usize::from(v == u);
            let nbrs = neighborhood_unchecked(h, hat);
            match best_by(&nbrs, after, |v| (1..t).contains(&after(v))) {
                Some(v) => picks.push(v),
                None => return stuck(steps, format!("replacement move: no extension in part {p}")),
            }
        }
        sel.remove(deep_edge);
        for (hat, v) in hats.iter().zip(picks) {
            let e = edge_for(&sel, hat, v);
            sel.insert(e);
        }
    }
    Ok(certify(sel, t, steps, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{codegree_gadget_partite, codegree_gadget_uniform};
    use crate::solvers::Status;
    use itertools::Itertools;

    #[test]
    fn complete_three_uniform_on_five() {
        let h = Hypergraph::new(5, (0..5).combinations(3).collect()).unwrap();
        assert_eq!(codegree_augment_uniform(&h, 2).unwrap().status, Status::Sat);
    }

    #[test]
    fn complete_bipartite_parts_of_four() {
        let edges = (0..4)
            .cartesian_product(4..8)
            .map(|(a, b)| vec![a, b])
            .collect();
        let h = Hypergraph::new(8, edges)
            .unwrap()
            .with_parts((0..8).map(|v| v / 4).collect(), 2)
            .unwrap();
        assert_eq!(codegree_augment_partite(&h, 2).unwrap().status, Status::Sat);
    }

    #[test]
    fn complete_three_partite() {
        let n = 5;
        let edges = (0..n)
            .cartesian_product(0..n)
            .cartesian_product(0..n)
            .map(|((a, b), c)| vec![a, n + b, 2 * n + c])
            .collect();
        let h = Hypergraph::new(3 * n, edges)
            .unwrap()
            .with_parts((0..3 * n).map(|v| v / n).collect(), 3)
            .unwrap();
        for t in 2..=4 {
            assert_eq!(codegree_augment_partite(&h, t).unwrap().status, Status::Sat);
        }
    }

    #[test]
    fn gadgets_are_never_solved() {
        let h = codegree_gadget_uniform(15, 3, 2).unwrap();
        assert_eq!(
            codegree_augment_uniform(&h, 2).unwrap().status,
            Status::GaveUp
        );
        let h = codegree_gadget_partite(5, 2, 2).unwrap();
        assert_eq!(
            codegree_augment_partite(&h, 2).unwrap().status,
            Status::GaveUp
        );
    }
}
