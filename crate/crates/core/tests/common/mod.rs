//! Brute-force oracles and instance generators shared by the integration
//! tests. Nothing here calls into the solvers under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shallow_core::Hypergraph;

pub mod numeric;

/// Vertex degrees under the edge subset encoded by `mask`.
fn mask_degrees(h: &Hypergraph, mask: u64) -> Vec<usize> {
    let mut deg = vec![0; h.n_vertices()];
    for e in 0..h.n_edges() {
        if mask >> e & 1 == 1 {
            for &v in h.edge(e) {
                deg[v] += 1;
            }
        }
    }
    deg
}

/// Every edge subset, as bitmasks. Only for `m <= 22`.
fn subsets(h: &Hypergraph) -> std::ops::Range<u64> {
    assert!(h.n_edges() <= 22, "oracle enumeration is for small hosts");
    0..1u64 << h.n_edges()
}

pub fn brute_shallow_hitting(h: &Hypergraph, t: usize) -> bool {
    subsets(h).any(|m| mask_degrees(h, m).iter().all(|&d| (1..=t).contains(&d)))
}

pub fn brute_max_shallow(h: &Hypergraph, t: usize) -> usize {
    subsets(h)
        .filter(|&m| mask_degrees(h, m).iter().all(|&d| d <= t))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Two edges sharing two vertices, or three distinct edges and three
/// distinct vertices forming a triangle.
pub fn brute_short_cycle(h: &Hypergraph) -> bool {
    let m = h.n_edges();
    let sets: Vec<BTreeSet<usize>> = h.edges().iter().map(|e| e.iter().copied().collect()).collect();
    for i in 0..m {
        for j in i + 1..m {
            if sets[i].intersection(&sets[j]).count() >= 2 {
                return true;
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                for &a in &sets[i] {
                    for &b in &sets[j] {
                        for &c in &sets[k] {
                            if a != b && b != c && a != c
                                && sets[i].contains(&b)
                                && sets[j].contains(&c)
                                && sets[k].contains(&a)
                            {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in k_subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn completing_vertices(h: &Hypergraph, set: &[usize]) -> usize {
    let mut found = BTreeSet::new();
    for v in 0..h.n_vertices() {
        if set.contains(&v) {
            continue;
        }
        let mut e = set.to_vec();
        e.push(v);
        e.sort_unstable();
        if h.edges().contains(&e) {
            found.insert(v);
        }
    }
    found.len()
}

/// `δ_{r-1}` by scanning every `(r-1)`-subset of the vertices.
pub fn brute_codegree(h: &Hypergraph) -> usize {
    let r = h.uniformity().expect("uniform host");
    let verts: Vec<usize> = (0..h.n_vertices()).collect();
    k_subsets(&verts, r - 1)
        .iter()
        .map(|s| completing_vertices(h, s))
        .min()
        .unwrap_or(0)
}

/// `δ'_{r-1}` over subsets meeting `r-1` distinct parts.
pub fn brute_partite_codegree(h: &Hypergraph) -> usize {
    let r = h.uniformity().expect("uniform host");
    let parts = h.parts().expect("partitioned host");
    let verts: Vec<usize> = (0..h.n_vertices()).collect();
    k_subsets(&verts, r - 1)
        .iter()
        .filter(|s| s.iter().map(|&v| parts.ids()[v]).collect::<BTreeSet<_>>().len() == s.len())
        .map(|s| completing_vertices(h, s))
        .min()
        .unwrap_or(0)
}

/// `|X| <= t |N(X)|` for all nonempty `X` inside either side, by plain
/// set arithmetic.
pub fn brute_hall(h: &Hypergraph, t: usize) -> bool {
    let parts = h.parts().expect("bipartite host");
    for side in 0..2 {
        let members = parts.members(side);
        for mask in 1u64..1 << members.len() {
            let x: Vec<usize> = (0..members.len()).filter(|&i| mask >> i & 1 == 1).map(|i| members[i]).collect();
            let nbrs: BTreeSet<usize> = h
                .edges()
                .iter()
                .filter(|e| e.iter().any(|v| x.contains(v)))
                .flat_map(|e| e.iter().copied().filter(|v| !x.contains(v)))
                .collect();
            if x.len() > t * nbrs.len() {
                return false;
            }
        }
    }
    true
}

/// Uniformly random edge sets: `m` edges, sizes in `1..=max_size`.
pub fn random_hypergraph(rng: &mut impl Rng, n: usize, m: usize, max_size: usize) -> Hypergraph {
    let verts: Vec<usize> = (0..n).collect();
    let edges = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            let mut e: Vec<usize> = verts.choose_multiple(rng, size).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    Hypergraph::new(n, edges).expect("valid random hypergraph")
}

pub fn random_uniform(rng: &mut impl Rng, n: usize, m: usize, r: usize) -> Hypergraph {
    let verts: Vec<usize> = (0..n).collect();
    let edges = (0..m)
        .map(|_| {
            let mut e: Vec<usize> = verts.choose_multiple(rng, r).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    Hypergraph::new(n, edges).expect("valid random hypergraph")
}

/// Random bipartite graph with sides `0..a` and `a..a+b`, each edge kept
/// with probability `p`.
pub fn random_bipartite(rng: &mut impl Rng, a: usize, b: usize, p: f64) -> Hypergraph {
    let mut edges = Vec::new();
    for x in 0..a {
        for y in a..a + b {
            if rng.gen_bool(p) {
                edges.push(vec![x, y]);
            }
        }
    }
    let parts = (0..a + b).map(|v| usize::from(v >= a)).collect();
    Hypergraph::new(a + b, edges).unwrap().with_parts(parts, 2).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Proptest strategy: hosts with up to 8 vertices and 10 edges.
pub fn small_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..=8, 0usize..=10, 1usize..=4, any::<u64>())
        .prop_map(|(n, m, s, seed)| random_hypergraph(&mut rng(seed), n, m, s))
}

/// Proptest strategy: `r`-uniform hosts, `r` in 2..=4, up to 8 vertices and 10 edges.
pub fn small_uniform() -> impl Strategy<Value = Hypergraph> {
    (2usize..=4, any::<u64>()).prop_flat_map(|(r, seed)| {
        (r..=8usize, 1usize..=10).prop_map(move |(n, m)| random_uniform(&mut rng(seed), n, m, r))
    })
}

pub fn small_bipartite() -> impl Strategy<Value = Hypergraph> {
    (1usize..=6, 1usize..=6, 0.1f64..0.9, any::<u64>())
        .prop_map(|(a, b, p, seed)| random_bipartite(&mut rng(seed), a, b, p))
}

/// Complete `r`-uniform host on `n` vertices, thinned by deleting edges in
/// random order while every `(r-1)`-set keeps at least `target` completing
/// vertices. Deletions stop after a random fraction of the attempts.
pub fn thinned_uniform(rng: &mut impl Rng, n: usize, r: usize, target: usize) -> Hypergraph {
    let verts: Vec<usize> = (0..n).collect();
    let edges = k_subsets(&verts, r);
    thin(rng, n, edges, target, None)
}

/// Complete `r`-partite host with parts `{i·n, …, i·n + n - 1}`, thinned as
/// in [`thinned_uniform`] with the co-degree taken over sets meeting `r-1`
/// distinct parts.
pub fn thinned_partite(rng: &mut impl Rng, n: usize, r: usize, target: usize) -> Hypergraph {
    let mut edges = vec![Vec::new()];
    for part in 0..r {
        edges = edges
            .into_iter()
            .flat_map(|e: Vec<usize>| {
                (0..n).map(move |i| {
                    let mut e = e.clone();
                    e.push(part * n + i);
                    e
                })
            })
            .collect();
    }
    let ids = (0..n * r).map(|v| v / n).collect();
    thin(rng, n * r, edges, target, Some((ids, r)))
}

fn thin(
    rng: &mut impl Rng,
    n: usize,
    mut edges: Vec<Vec<usize>>,
    target: usize,
    parts: Option<(Vec<usize>, usize)>,
) -> Hypergraph {
    use std::collections::BTreeMap;
    let faces = |e: &[usize]| -> Vec<Vec<usize>> {
        (0..e.len()).map(|i| [&e[..i], &e[i + 1..]].concat()).collect()
    };
    let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for e in &edges {
        for f in faces(e) {
            *count.entry(f).or_default() += 1;
        }
    }
    edges.shuffle(rng);
    let attempts = rng.gen_range(0..=edges.len());
    let mut kept = Vec::new();
    for (i, e) in edges.into_iter().enumerate() {
        let fs = faces(&e);
        if i < attempts && fs.iter().all(|f| count[f] > target) {
            for f in fs {
                *count.get_mut(&f).unwrap() -= 1;
            }
        } else {
            kept.push(e);
        }
    }
    kept.sort();
    let h = Hypergraph::new(n, kept).expect("valid thinned host");
    match parts {
        Some((ids, k)) => h.with_parts(ids, k).expect("valid parts"),
        None => h,
    }
}
