//! Hypergraph data model, structural statistics, duality and the
//! shallow/hitting predicates on edge selections.
//!
//! Edges form a multiset: two edges with the same vertex set are distinct
//! objects, identified by their index in [`Hypergraph::edges`].

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of `(r-1)`-subsets enumerated by co-degree
/// computations.
pub const DEFAULT_CODEGREE_CAP: u128 = 10_000_000;

/// Largest vertex count accepted by [`is_isomorphic`].
pub const ISOMORPHISM_MAX_VERTICES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    parts: Option<Partition>,
    incidence: Vec<Vec<usize>>,
}

/// Assignment of every vertex to one of `count` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    ids: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &p in &self.ids {
            sizes[p] += 1;
        }
        sizes
    }

    /// Vertices of part `p`, ascending.
    pub fn members(&self, p: usize) -> Vec<usize> {
        (0..self.ids.len()).filter(|&v| self.ids[v] == p).collect()
    }
}

impl Hypergraph {
    /// Builds a hypergraph from edges that are already strictly ascending.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {i} is empty")));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} contains vertex {v} >= n = {n}"
                )));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} is not strictly ascending: {e:?}"
                )));
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        Ok(Self {
            n,
            edges,
            parts: None,
            incidence,
        })
    }

    /// Like [`Hypergraph::new`] but sorts every edge first. Repeated
    /// vertices inside an edge are still rejected.
    pub fn from_unsorted(n: usize, mut edges: Vec<Vec<usize>>) -> Result<Self> {
        for e in &mut edges {
            e.sort_unstable();
        }
        Self::new(n, edges)
    }

    /// Attaches a vertex partition into `count` parts. Every edge must meet
    /// each part at most once.
    pub fn with_parts(mut self, ids: Vec<usize>, count: usize) -> Result<Self> {
        if ids.len() != self.n {
            return Err(Error::InvalidHypergraph(format!(
                "partition has {} entries for {} vertices",
                ids.len(),
                self.n
            )));
        }
        if let Some(&p) = ids.iter().find(|&&p| p >= count) {
            return Err(Error::InvalidHypergraph(format!(
                "part id {p} out of range for {count} parts"
            )));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let mut seen = vec![false; count];
            for &v in e {
                if std::mem::replace(&mut seen[ids[v]], true) {
                    return Err(Error::InvalidHypergraph(format!(
                        "edge {i} meets part {} twice",
                        ids[v]
                    )));
                }
            }
        }
        self.parts = Some(Partition { ids, count });
        Ok(self)
    }

    pub fn without_parts(mut self) -> Self {
        self.parts = None;
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn parts(&self) -> Option<&Partition> {
        self.parts.as_ref()
    }

    /// Edge indices containing `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(r)` when every edge has exactly `r` vertices. An edgeless
    /// hypergraph has no uniformity.
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == r).then_some(r)
    }

    /// Re-checks the partition invariant.
    pub fn parts_valid(&self) -> bool {
        match &self.parts {
            None => true,
            Some(p) => self
                .edges
                .iter()
                .all(|e| e.iter().map(|&v| p.ids[v]).all_unique()),
        }
    }

    /// Index of the first edge whose vertex set equals `set` (ascending)
    /// and which is not rejected by `skip`.
    pub(crate) fn find_edge(&self, set: &[usize], skip: impl Fn(usize) -> bool) -> Option<usize> {
        let pivot = *set.first()?;
        self.incidence[pivot]
            .iter()
            .copied()
            .find(|&e| !skip(e) && self.edges[e] == set)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::to_text(self))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureStats {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub r_uniform: Option<usize>,
    pub delta: usize,
    #[serde(rename = "Delta")]
    pub max_delta: usize,
    /// `Δ/δ`; undefined when `δ = 0`.
    pub mu: Option<f64>,
    pub girth_lt4: bool,
    pub part_sizes: Option<Vec<usize>>,
    pub codegree: Option<usize>,
    pub partite_codegree: Option<usize>,
}

/// Degree statistics, optionally with the exact co-degrees `δ_{r-1}` and
/// (for partitioned inputs) `δ'_{r-1}`. Co-degrees use
/// [`DEFAULT_CODEGREE_CAP`]; see [`codegree`] for the cost model.
pub fn stats(h: &Hypergraph, with_codegree: bool) -> Result<StructureStats> {
    let delta = h.min_degree();
    let max_delta = h.max_degree();
    let (codegree, partite_codegree) = if with_codegree && h.uniformity().is_some() {
        let cd = self::codegree(h, DEFAULT_CODEGREE_CAP)?;
        let pcd = if h.parts().is_some() {
            self::partite_codegree(h, DEFAULT_CODEGREE_CAP)?
        } else {
            None
        };
        (cd, pcd)
    } else {
        (None, None)
    };
    Ok(StructureStats {
        n_vertices: h.n_vertices(),
        n_edges: h.n_edges(),
        r_uniform: h.uniformity(),
        delta,
        max_delta,
        mu: (delta > 0).then(|| max_delta as f64 / delta as f64),
        girth_lt4: girth_less_than_4(h),
        part_sizes: h.parts().map(Partition::part_sizes),
        codegree,
        partite_codegree,
    })
}

/// Maps every `(r-1)`-subset that extends to an edge onto its (deduplicated)
/// set of completing vertices.
fn completions(h: &Hypergraph) -> HashMap<Vec<usize>, Vec<usize>> {
    let mut map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for e in h.edges() {
        for i in 0..e.len() {
            let mut key = e.clone();
            let v = key.remove(i);
            map.entry(key).or_default().push(v);
        }
    }
    for ext in map.values_mut() {
        ext.sort_unstable();
        ext.dedup();
    }
    map
}

/// Minimum co-degree `δ_{r-1}`: the minimum of `|N_{r-1}(ê)|` over all
/// `(r-1)`-subsets `ê` of the vertex set. Returns `None` when `h` is not
/// uniform.
///
/// The minimum ranges over `C(n, r-1)` subsets; inputs where that count
/// exceeds `cap` are rejected. Subsets that never extend to an edge
/// contribute zero, so the work itself is proportional to `|E| * r`.
pub fn codegree(h: &Hypergraph, cap: u128) -> Result<Option<usize>> {
    let Some(r) = h.uniformity() else {
        return Ok(None);
    };
    let subsets = crate::combin::binomial(h.n_vertices() as u64, (r - 1) as u64);
    if subsets.is_none_or(|c| c > cap) {
        return Err(Error::GuardExceeded(format!(
            "C({}, {}) exceeds the co-degree cap {cap}",
            h.n_vertices(),
            r - 1
        )));
    }
    let map = completions(h);
    let total = subsets.unwrap_or(0);
    if (map.len() as u128) < total {
        return Ok(Some(0));
    }
    Ok(Some(map.values().map(Vec::len).min().unwrap_or(0)))
}

/// Minimum partite co-degree `δ'_{r-1}` over legal `(r-1)`-sets (at most
/// one vertex per part). `None` unless `h` is uniform and partitioned.
pub fn partite_codegree(h: &Hypergraph, cap: u128) -> Result<Option<usize>> {
    let (Some(r), Some(parts)) = (h.uniformity(), h.parts()) else {
        return Ok(None);
    };
    // Elementary symmetric polynomial e_{r-1} of the part sizes counts the
    // legal (r-1)-sets.
    let mut esym = vec![0u128; r];
    esym[0] = 1;
    for size in parts.part_sizes() {
        for j in (1..r).rev() {
            esym[j] = esym[j].saturating_add(esym[j - 1].saturating_mul(size as u128));
        }
    }
    let legal = esym[r - 1];
    if legal > cap {
        return Err(Error::GuardExceeded(format!(
            "{legal} legal {}-sets exceed the co-degree cap {cap}",
            r - 1
        )));
    }
    let map = completions(h);
    if (map.len() as u128) < legal {
        return Ok(Some(0));
    }
    Ok(Some(map.values().map(Vec::len).min().unwrap_or(0)))
}

/// `N_{r-1}(ê)`: all `v` such that `ê ∪ {v}` is an edge, ascending.
pub fn neighborhood(h: &Hypergraph, hat_e: &[usize]) -> Result<Vec<usize>> {
    let r = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("neighborhood requires a uniform hypergraph".into()))?;
    if hat_e.len() + 1 != r {
        return Err(Error::InvalidArgument(format!(
            "expected a set of {} vertices, got {}",
            r - 1,
            hat_e.len()
        )));
    }
    let mut set = hat_e.to_vec();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) || set.iter().any(|&v| v >= h.n_vertices()) {
        return Err(Error::InvalidArgument(format!(
            "not a vertex set: {hat_e:?}"
        )));
    }
    Ok(neighborhood_unchecked(h, &set))
}

/// Neighborhood of a sorted, in-range `(r-1)`-set in an `r`-uniform host.
pub(crate) fn neighborhood_unchecked(h: &Hypergraph, set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = match set.first() {
        None => h
            .edges()
            .iter()
            .filter(|e| e.len() == 1)
            .map(|e| e[0])
            .collect(),
        Some(&pivot) => h
            .incident(pivot)
            .iter()
            .filter_map(|&e| extension(h.edge(e), set))
            .collect(),
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// If `edge = set ∪ {v}` for a single extra vertex `v`, returns `v`.
pub(crate) fn extension(edge: &[usize], set: &[usize]) -> Option<usize> {
    if edge.len() != set.len() + 1 {
        return None;
    }
    let mut extra = None;
    let mut j = 0;
    for &v in edge {
        if j < set.len() && set[j] == v {
            j += 1;
        } else if extra.replace(v).is_some() {
            return None;
        }
    }
    (j == set.len()).then_some(extra).flatten()
}

/// A cycle of length 2 or 3 in the alternating vertex/edge sense:
/// `{vertices[i], vertices[i+1]} ⊆ edges[i]`, indices taken cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl ShortCycle {
    /// Checks the witness against `h`.
    pub fn is_valid_in(&self, h: &Hypergraph) -> bool {
        let k = self.vertices.len();
        k == self.edges.len()
            && (2..=3).contains(&k)
            && self.vertices.iter().all_unique()
            && self.edges.iter().all_unique()
            && (0..k).all(|i| {
                let e = h.edge(self.edges[i]);
                e.binary_search(&self.vertices[i]).is_ok()
                    && e.binary_search(&self.vertices[(i + 1) % k]).is_ok()
            })
    }
}

pub fn girth_less_than_4(h: &Hypergraph) -> bool {
    find_short_cycle(h).is_some()
}

/// Finds a cycle of length 2 (two edges sharing two vertices) or 3, if any.
pub fn find_short_cycle(h: &Hypergraph) -> Option<ShortCycle> {
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        for (a, &u) in e.iter().enumerate() {
            for &w in &e[a + 1..] {
                if let Some(&j) = pairs.get(&(u, w)) {
                    return Some(ShortCycle {
                        vertices: vec![u, w],
                        edges: vec![j, i],
                    });
                }
                pairs.insert((u, w), i);
            }
        }
    }
    // Pairwise intersections are now at most one vertex, so any edge through
    // {a, b} below differs from e1 and e2.
    for w in 0..h.n_vertices() {
        let inc = h.incident(w);
        for (x, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[x + 1..] {
                for &a in h.edge(e1).iter().filter(|&&a| a != w) {
                    for &b in h.edge(e2).iter().filter(|&&b| b != w) {
                        if let Some(&e3) = pairs.get(&(a.min(b), a.max(b))) {
                            debug_assert!(e3 != e1 && e3 != e2);
                            return Some(ShortCycle {
                                vertices: vec![a, w, b],
                                edges: vec![e1, e2, e3],
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Incidence transpose: vertex `j` of the dual is edge `j` of `h`, and dual
/// edge `v` lists the edges of `h` containing `v`.
///
/// Fails on isolated vertices, whose dual edge would be empty. Parts are
/// not carried over.
pub fn dual(h: &Hypergraph) -> Result<Hypergraph> {
    if let Some(v) = (0..h.n_vertices()).find(|&v| h.degree(v) == 0) {
        return Err(Error::Precondition(format!(
            "vertex {v} has degree 0; its dual edge would be empty"
        )));
    }
    Hypergraph::new(h.n_edges(), h.incidence.clone())
}

/// Brute-force isomorphism test over all vertex permutations, for hosts
/// with at most [`ISOMORPHISM_MAX_VERTICES`] vertices. Parts are ignored.
pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool> {
    let n = a.n_vertices();
    if n > ISOMORPHISM_MAX_VERTICES || b.n_vertices() > ISOMORPHISM_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "isomorphism check limited to {ISOMORPHISM_MAX_VERTICES} vertices"
        )));
    }
    if n != b.n_vertices() || a.n_edges() != b.n_edges() {
        return Ok(false);
    }
    let sorted_degrees = |h: &Hypergraph| {
        let mut d = h.degrees();
        d.sort_unstable();
        d
    };
    if sorted_degrees(a) != sorted_degrees(b) {
        return Ok(false);
    }
    let mut target: Vec<Vec<usize>> = b.edges().to_vec();
    target.sort();
    for perm in (0..n).permutations(n) {
        let mut mapped: Vec<Vec<usize>> = a
            .edges()
            .iter()
            .map(|e| {
                let mut m: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        if mapped == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A subset `M` of the edges of a host, with cached `deg_M`.
#[derive(Clone, Debug)]
pub struct EdgeSelection<'h> {
    host: &'h Hypergraph,
    chosen: Vec<bool>,
    deg: Vec<usize>,
    len: usize,
}

impl PartialEq for EdgeSelection<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.host, other.host) && self.chosen == other.chosen
    }
}

impl<'h> EdgeSelection<'h> {
    pub fn new(host: &'h Hypergraph) -> Self {
        Self {
            host,
            chosen: vec![false; host.n_edges()],
            deg: vec![0; host.n_vertices()],
            len: 0,
        }
    }

    /// Selection of all edges of `host`.
    pub fn all(host: &'h Hypergraph) -> Self {
        Self::from_iter_unchecked(host, 0..host.n_edges())
    }

    /// Builds a selection from edge indices; duplicates and out-of-range
    /// indices are rejected.
    pub fn from_indices(host: &'h Hypergraph, indices: &[usize]) -> Result<Self> {
        let mut sel = Self::new(host);
        for &e in indices {
            if e >= host.n_edges() {
                return Err(Error::InvalidArgument(format!(
                    "edge index {e} out of range for {} edges",
                    host.n_edges()
                )));
            }
            if !sel.insert(e) {
                return Err(Error::InvalidArgument(format!(
                    "edge index {e} listed twice"
                )));
            }
        }
        Ok(sel)
    }

    pub(crate) fn from_iter_unchecked(
        host: &'h Hypergraph,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut sel = Self::new(host);
        for e in indices {
            sel.insert(e);
        }
        sel
    }

    pub fn host(&self) -> &'h Hypergraph {
        self.host
    }

    /// Adds edge `e`; returns `false` if it was already chosen.
    pub fn insert(&mut self, e: usize) -> bool {
        if std::mem::replace(&mut self.chosen[e], true) {
            return false;
        }
        for &v in self.host.edge(e) {
            self.deg[v] += 1;
        }
        self.len += 1;
        true
    }

    /// Removes edge `e`; returns `false` if it was not chosen.
    pub fn remove(&mut self, e: usize) -> bool {
        if !std::mem::replace(&mut self.chosen[e], false) {
            return false;
        }
        for &v in self.host.edge(e) {
            self.deg[v] -= 1;
        }
        self.len -= 1;
        true
    }

    pub fn contains(&self, e: usize) -> bool {
        self.chosen[e]
    }

    /// `deg_M(v)`.
    pub fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.deg
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Chosen edge indices, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.chosen.len()).filter(|&e| self.chosen[e]).collect()
    }

    /// Chosen edges through `v`, ascending.
    pub fn incident_chosen(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.host
            .incident(v)
            .iter()
            .copied()
            .filter(move |&e| self.chosen[e])
    }

    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.deg.len()).filter(|&v| self.deg[v] == 0).collect()
    }

    /// Recomputes `deg_M` from scratch and compares it with the cache.
    pub fn is_coherent(&self) -> bool {
        let mut deg = vec![0; self.deg.len()];
        for e in self.indices() {
            for &v in self.host.edge(e) {
                deg[v] += 1;
            }
        }
        deg == self.deg && self.len == self.chosen.iter().filter(|&&c| c).count()
    }

    pub fn verify(&self, t: usize) -> SelectionReport {
        verify_selection(self, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionReport {
    pub t: usize,
    pub is_t_shallow: bool,
    pub is_hitting: bool,
    pub max_deg: usize,
    pub uncovered: Vec<usize>,
}

impl SelectionReport {
    pub fn is_shallow_hitting(&self) -> bool {
        self.is_t_shallow && self.is_hitting
    }
}

pub fn verify_selection(sel: &EdgeSelection<'_>, t: usize) -> SelectionReport {
    let max_deg = sel.deg.iter().copied().max().unwrap_or(0);
    let uncovered = sel.uncovered();
    SelectionReport {
        t,
        is_t_shallow: max_deg <= t,
        is_hitting: uncovered.is_empty(),
        max_deg,
        uncovered,
    }
}

/// Two-colouring of the dual induced by a selection: dual vertex `e`
/// (an edge of the host) is in class A iff `e` is selected.
#[derive(Clone, Debug)]
pub struct DualColoring {
    pub dual: Hypergraph,
    pub in_a: Vec<bool>,
    /// No dual edge is monochromatic.
    pub proper: bool,
    /// Every dual edge holds between 1 and `shallow` class-A vertices.
    pub bounded: bool,
    pub shallow: usize,
    pub monochromatic: Vec<usize>,
}

/// Translates `sel` into a colouring of the dual of its host. On a
/// `t`-regular host, `proper` with `shallow = t - 1` holds exactly when `sel`
/// is hitting and `(t-1)`-shallow.
pub fn selection_to_2coloring(sel: &EdgeSelection<'_>, shallow: usize) -> Result<DualColoring> {
    let dual = dual(sel.host())?;
    let in_a: Vec<bool> = (0..dual.n_vertices()).map(|e| sel.contains(e)).collect();
    let mut monochromatic = Vec::new();
    let mut bounded = true;
    for (j, de) in dual.edges().iter().enumerate() {
        let a = de.iter().filter(|&&x| in_a[x]).count();
        if a == 0 || a == de.len() {
            monochromatic.push(j);
        }
        if a == 0 || a > shallow {
            bounded = false;
        }
    }
    Ok(DualColoring {
        proper: monochromatic.is_empty(),
        dual,
        in_a,
        bounded,
        shallow,
        monochromatic,
    })
}
