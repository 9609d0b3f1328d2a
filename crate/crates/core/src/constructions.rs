//! Deterministic generators for the explicit extremal constructions, plus
//! seeded random generators for experiment inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::designs::{self, Design};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest `t` accepted by the projective generators. The full space has
/// `(2^{t+1}-1)(2^t-1)` incidences, so larger values do not fit in memory.
pub const MAX_PROJECTIVE_T: u32 = 12;

/// Upper limit on the number of edges any gadget generator materialises.
pub const MAX_GADGET_EDGES: u128 = 10_000_000;

/// Restart cap for the random regular generators.
pub const DEFAULT_MAX_TRIES: u64 = 100_000;

/// An element of `F_2^{t+1}`, stored as the bits of an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Vector(pub u64);

impl Gf2Vector {
    /// `aᵀx` over `F_2`.
    pub fn dot(self, other: Gf2Vector) -> bool {
        (self.0 & other.0).count_ones() % 2 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The distinguished point `x₀ = (1, 0, …, 0)` removed by truncation.
pub const X0: Gf2Vector = Gf2Vector(1);

fn check_projective_t(t: u32) -> Result<()> {
    if !(2..=MAX_PROJECTIVE_T).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "t must lie in [2, {MAX_PROJECTIVE_T}], got {t}"
        )));
    }
    Ok(())
}

/// Points and hyperplanes of `PG(t, 2)`: vertex `i` is the nonzero vector
/// with integer value `i + 1`; edge `j` is `L(a) = {x ≠ 0 : aᵀx = 0}` for
/// `a = j + 1`.
pub fn projective_full(t: u32) -> Result<Hypergraph> {
    check_projective_t(t)?;
    let top = 1u64 << (t + 1);
    let edges = (1..top)
        .map(|a| {
            (1..top)
                .filter(|&x| !Gf2Vector(a).dot(Gf2Vector(x)))
                .map(|x| (x - 1) as usize)
                .collect()
        })
        .collect();
    Hypergraph::new((top - 1) as usize, edges)
}

/// `PG(t, 2)` with `x₀` and every hyperplane through it removed.
///
/// Vertex `i` is the vector with integer value `i + 2`; the part of a vertex
/// pairs `x` with `x + x₀`, i.e. part id `value/2 - 1`. Edges are the `L(a)`
/// with `aᵀx₀ = 1` (odd `a`), in increasing order of `a`. The result has
/// `2r` vertices, `2^t` edges and `r = 2^t - 1` parts, is `r`-uniform and
/// `2^{t-1}`-regular, and any `t` of its edges share a vertex.
pub fn projective_truncated(t: u32) -> Result<Hypergraph> {
    check_projective_t(t)?;
    let top = 1u64 << (t + 1);
    let edges = (1..top)
        .map(Gf2Vector)
        .filter(|a| a.dot(X0))
        .map(|a| {
            (2..top)
                .filter(|&x| !a.dot(Gf2Vector(x)))
                .map(|x| (x - 2) as usize)
                .collect()
        })
        .collect();
    let n = (top - 2) as usize;
    let parts = (2..top).map(|x| (x / 2 - 1) as usize).collect();
    Hypergraph::new(n, edges)?.with_parts(parts, (1usize << t) - 1)
}

/// `(r-1)t + 1`.
pub fn gadget_k(r: usize, t: usize) -> usize {
    (r - 1) * t + 1
}

/// `⌈n/k - 1⌉ = ⌈n/k⌉ - 1` in exact integer arithmetic.
fn gadget_core_size(n: usize, k: usize) -> usize {
    n.div_ceil(k) - 1
}

fn check_gadget_args(r: usize, t: usize) -> Result<()> {
    if r < 2 || t < 2 {
        return Err(Error::InvalidArgument(format!(
            "gadgets need r >= 2 and t >= 2, got r = {r}, t = {t}"
        )));
    }
    Ok(())
}

/// All `r`-subsets of `[n]` meeting `A = {0, …, |A|-1}` where
/// `|A| = ⌈n/k - 1⌉`, `k = (r-1)t + 1`. Co-degree at least `n/k - 1`, and no
/// `t`-shallow hitting edge set. Edges are listed lexicographically.
pub fn codegree_gadget_uniform(n: usize, r: usize, t: usize) -> Result<Hypergraph> {
    check_gadget_args(r, t)?;
    if n <= r {
        return Err(Error::InvalidArgument(format!(
            "need n > r, got n = {n}, r = {r}"
        )));
    }
    let k = gadget_k(r, t);
    let a = gadget_core_size(n, k);
    if a == 0 {
        return Err(Error::InvalidArgument(format!(
            "core set A is empty: n = {n} must exceed k = {k}"
        )));
    }
    let total = crate::combin::binomial(n as u64, r as u64);
    if total.is_none_or(|c| c > MAX_GADGET_EDGES) {
        return Err(Error::GuardExceeded(format!("C({n}, {r}) edges")));
    }
    let edges = (0..n).combinations(r).filter(|e| e[0] < a).collect();
    Hypergraph::new(n, edges)
}

/// `r` parts of size `n` (vertex `i·n + j` is the `j`-th vertex of part
/// `i`); `V'_i` = the first `⌈n/k - 1⌉` vertices of each part; edges are the
/// legal `r`-sets with at least one vertex in some `V'_i`, lexicographic in
/// the per-part indices.
pub fn codegree_gadget_partite(n: usize, r: usize, t: usize) -> Result<Hypergraph> {
    check_gadget_args(r, t)?;
    if n <= 1 {
        return Err(Error::InvalidArgument(format!("need n > 1, got {n}")));
    }
    let k = gadget_k(r, t);
    let a = gadget_core_size(n, k);
    if a == 0 {
        return Err(Error::InvalidArgument(format!(
            "core sets V'_i are empty: n = {n} must exceed k = {k}"
        )));
    }
    let total = (n as u128).checked_pow(r as u32);
    if total.is_none_or(|c| c > MAX_GADGET_EDGES) {
        return Err(Error::GuardExceeded(format!("{n}^{r} candidate edges")));
    }
    let edges = (0..r)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .filter(|idx| idx.iter().any(|&j| j < a))
        .map(|idx| idx.iter().enumerate().map(|(i, &j)| i * n + j).collect())
        .collect();
    let parts = (0..r * n).map(|v| v / n).collect();
    Hypergraph::new(r * n, edges)?.with_parts(parts, r)
}

/// Bipartite graph `A₁×B₁ ∪ A₂×B₂` with `|A₁| = |B₂| = (n-1)/(t+1)` and
/// `|A₂| = |B₁| = (nt+1)/(t+1)`. Vertices `0..n` form `A` (part 0, `A₁`
/// first) and `n..2n` form `B` (part 1, `B₁` first).
pub fn bipartite_tight_gadget(n: usize, t: usize) -> Result<Hypergraph> {
    if t == 0 || n == 0 || !(n - 1).is_multiple_of(t + 1) {
        return Err(Error::InvalidArgument(format!(
            "need t >= 1 and (t+1) | (n-1), got n = {n}, t = {t}"
        )));
    }
    let a1 = (n - 1) / (t + 1);
    if a1 == 0 {
        return Err(Error::InvalidArgument(format!("n = {n} leaves A₁ empty")));
    }
    let b1 = (n * t + 1) / (t + 1);
    let mut edges = Vec::with_capacity(a1 * b1 * 2);
    for a in 0..a1 {
        for b in n..n + b1 {
            edges.push(vec![a, b]);
        }
    }
    for a in a1..n {
        for b in n + b1..2 * n {
            edges.push(vec![a, b]);
        }
    }
    let parts = (0..2 * n).map(|v| usize::from(v >= n)).collect();
    Hypergraph::new(2 * n, edges)?.with_parts(parts, 2)
}

/// Edge list of [`figure1_witness`].
pub const FIGURE1_EDGES: [[usize; 3]; 4] = [[0, 2, 4], [0, 3, 5], [1, 2, 5], [1, 3, 4]];

/// A 2-regular, 3-uniform, 3-partite hypergraph on parts `{0,1}, {2,3},
/// {4,5}` without a perfect matching, in which every 3 or 4 edges form a
/// 2-shallow hitting set. It is the lexicographically first such edge set,
/// a searched stand-in for the introductory example rather than a
/// transcription of it; the search lives in the test suite.
pub fn figure1_witness() -> Hypergraph {
    let edges = FIGURE1_EDGES.iter().map(|e| e.to_vec()).collect();
    Hypergraph::new(6, edges)
        .and_then(|h| h.with_parts(vec![0, 0, 1, 1, 2, 2], 3))
        .expect("static witness is well formed")
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a stub index whose vertex is accepted by `ok`: a few uniform
/// tries, then a scan over all admissible stubs.
fn draw_stub(rng: &mut ChaCha8Rng, stubs: &[usize], ok: impl Fn(usize) -> bool) -> Option<usize> {
    for _ in 0..32 {
        let i = rng.gen_range(0..stubs.len());
        if ok(stubs[i]) {
            return Some(i);
        }
    }
    let admissible: Vec<usize> = (0..stubs.len()).filter(|&i| ok(stubs[i])).collect();
    admissible.choose(rng).copied()
}

fn check_regular_args(n: usize, r: usize, d: usize) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= r <= n, got r = {r}, n = {n}"
        )));
    }
    if !(n * d).is_multiple_of(r) {
        return Err(Error::InvalidArgument(format!(
            "n·d = {} is not divisible by r = {r}",
            n * d
        )));
    }
    Ok(())
}

/// Uniform `d`-regular `r`-graph on `n` vertices from the configuration
/// model: stubs are grouped into edges one draw at a time, rejecting draws
/// that repeat a vertex inside the current edge and restarting when an edge
/// cannot be completed. Parallel edges may occur.
pub fn random_regular(n: usize, r: usize, d: usize, seed: u64) -> Result<Hypergraph> {
    check_regular_args(n, r, d)?;
    let mut rng = seeded(seed);
    for _ in 0..DEFAULT_MAX_TRIES {
        if let Some(edges) = try_configuration(&mut rng, n, r, d) {
            return Hypergraph::new(n, edges);
        }
    }
    Err(Error::GaveUp {
        what: format!("random_regular(n = {n}, r = {r}, d = {d})"),
        tries: DEFAULT_MAX_TRIES,
    })
}

fn try_configuration(
    rng: &mut ChaCha8Rng,
    n: usize,
    r: usize,
    d: usize,
) -> Option<Vec<Vec<usize>>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = Vec::with_capacity(n * d / r);
    while !stubs.is_empty() {
        let mut edge = Vec::with_capacity(r);
        for _ in 0..r {
            let i = draw_stub(rng, &stubs, |v| !edge.contains(&v))?;
            edge.push(stubs.swap_remove(i));
        }
        edge.sort_unstable();
        edges.push(edge);
    }
    Some(edges)
}

/// `r`-partite variant: `r` parts of `n_per_part` vertices (vertex
/// `i·n_per_part + j`), every vertex of degree `d`. Edge `i` joins the `i`-th
/// stub of each independently shuffled part, so no rejection is needed.
pub fn random_regular_partite(
    n_per_part: usize,
    r: usize,
    d: usize,
    seed: u64,
) -> Result<Hypergraph> {
    if r == 0 || n_per_part == 0 {
        return Err(Error::InvalidArgument(
            "need r >= 1 and n_per_part >= 1".into(),
        ));
    }
    let mut rng = seeded(seed);
    let columns: Vec<Vec<usize>> = (0..r)
        .map(|p| {
            let mut stubs: Vec<usize> = (0..n_per_part)
                .flat_map(|j| std::iter::repeat_n(p * n_per_part + j, d))
                .collect();
            stubs.shuffle(&mut rng);
            stubs
        })
        .collect();
    let edges = (0..n_per_part * d)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let parts = (0..r * n_per_part).map(|v| v / n_per_part).collect();
    Hypergraph::new(r * n_per_part, edges)?.with_parts(parts, r)
}

/// Random `d`-regular `r`-graph of girth at least four. Each stub draw is
/// rejected when the new vertex lies within distance two of a vertex of
/// the current edge in the 2-section of the edges placed so far (this
/// excludes both 2-cycles and triangles); attempts restart from scratch up
/// to `max_tries` times.
pub fn random_girth4_regular(
    n: usize,
    r: usize,
    d: usize,
    seed: u64,
    max_tries: u64,
) -> Result<Hypergraph> {
    check_regular_args(n, r, d)?;
    let mut rng = seeded(seed);
    for _ in 0..max_tries {
        if let Some(edges) = try_girth4(&mut rng, n, r, d) {
            let h = Hypergraph::new(n, edges)?;
            debug_assert!(!crate::hypergraph::girth_less_than_4(&h));
            return Ok(h);
        }
    }
    Err(Error::GaveUp {
        what: format!("random_girth4_regular(n = {n}, r = {r}, d = {d})"),
        tries: max_tries,
    })
}

fn try_girth4(rng: &mut ChaCha8Rng, n: usize, r: usize, d: usize) -> Option<Vec<Vec<usize>>> {
    let mut adj: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = Vec::with_capacity(n * d / r);
    while !stubs.is_empty() {
        let mut edge: Vec<usize> = Vec::with_capacity(r);
        for _ in 0..r {
            let far = |x: usize| {
                edge.iter()
                    .all(|&u| u != x && !adj[x].contains(u) && adj[x].is_disjoint(&adj[u]))
            };
            let i = draw_stub(rng, &stubs, far)?;
            edge.push(stubs.swap_remove(i));
        }
        for (&u, &w) in edge.iter().tuple_combinations() {
            adj[u].insert(w);
            adj[w].insert(u);
        }
        edge.sort_unstable();
        edges.push(edge);
    }
    Some(edges)
}

/// Generator names accepted by [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Projective,
    ProjectiveTruncated,
    CodegreeUniform,
    CodegreePartite,
    BipartiteTight,
    Figure1,
    RandomRegular,
    RandomPartite,
    RandomGirth4,
    AffinePlane,
}

impl GenKind {
    pub const ALL: [GenKind; 10] = [
        GenKind::Projective,
        GenKind::ProjectiveTruncated,
        GenKind::CodegreeUniform,
        GenKind::CodegreePartite,
        GenKind::BipartiteTight,
        GenKind::Figure1,
        GenKind::RandomRegular,
        GenKind::RandomPartite,
        GenKind::RandomGirth4,
        GenKind::AffinePlane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Projective => "projective",
            GenKind::ProjectiveTruncated => "projective-truncated",
            GenKind::CodegreeUniform => "codegree-uniform",
            GenKind::CodegreePartite => "codegree-partite",
            GenKind::BipartiteTight => "bipartite-tight",
            GenKind::Figure1 => "figure1",
            GenKind::RandomRegular => "random-regular",
            GenKind::RandomPartite => "random-partite",
            GenKind::RandomGirth4 => "random-girth4",
            GenKind::AffinePlane => "affine-plane",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(
            self,
            GenKind::RandomRegular | GenKind::RandomPartite | GenKind::RandomGirth4
        )
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "affine-plane-dual" {
            return Ok(GenKind::AffinePlane);
        }
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generator kind {s:?}")))
    }
}

/// Parameters shared by all generators; each kind reads the ones it needs.
/// For `random-partite`, `n` is the size of each part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenParams {
    pub t: Option<usize>,
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub d: Option<usize>,
    pub q: Option<usize>,
    pub seed: Option<u64>,
    pub max_tries: Option<u64>,
    pub dual: bool,
}

impl GenParams {
    /// Reads `t n r d q seed max_tries dual` from string key/value pairs.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        fn num<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
            map.get(key)
                .map(|v| {
                    v.parse().map_err(|_| {
                        Error::InvalidArgument(format!("{key} = {v:?} is not a number"))
                    })
                })
                .transpose()
        }
        for key in map.keys() {
            if !["t", "n", "r", "d", "q", "seed", "max_tries", "dual"].contains(&key.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown generator parameter {key:?}"
                )));
            }
        }
        Ok(GenParams {
            t: num(map, "t")?,
            n: num(map, "n")?,
            r: num(map, "r")?,
            d: num(map, "d")?,
            q: num(map, "q")?,
            seed: num(map, "seed")?,
            max_tries: num(map, "max_tries")?,
            dual: matches!(
                map.get("dual").map(String::as_str),
                Some("true" | "1" | "yes")
            ),
        })
    }
}

fn need<T: Copy>(v: Option<T>, name: &str, kind: GenKind) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("{kind} requires --{name}")))
}

#[derive(Clone, Debug)]
pub enum Generated {
    Hypergraph(Hypergraph),
    Design(Design),
}

/// Runs the generator `kind`. Random kinds default to seed 0 when none is
/// given. `affine-plane` yields a design unless `dual` is set.
pub fn generate(kind: GenKind, p: &GenParams) -> Result<Generated> {
    use Generated::Hypergraph as H;
    let seed = p.seed.unwrap_or(0);
    Ok(match kind {
        GenKind::Projective => H(projective_full(need(p.t, "t", kind)? as u32)?),
        GenKind::ProjectiveTruncated => H(projective_truncated(need(p.t, "t", kind)? as u32)?),
        GenKind::CodegreeUniform => H(codegree_gadget_uniform(
            need(p.n, "n", kind)?,
            need(p.r, "r", kind)?,
            need(p.t, "t", kind)?,
        )?),
        GenKind::CodegreePartite => H(codegree_gadget_partite(
            need(p.n, "n", kind)?,
            need(p.r, "r", kind)?,
            need(p.t, "t", kind)?,
        )?),
        GenKind::BipartiteTight => H(bipartite_tight_gadget(
            need(p.n, "n", kind)?,
            need(p.t, "t", kind)?,
        )?),
        GenKind::Figure1 => H(figure1_witness()),
        GenKind::RandomRegular => H(random_regular(
            need(p.n, "n", kind)?,
            need(p.r, "r", kind)?,
            need(p.d, "d", kind)?,
            seed,
        )?),
        GenKind::RandomPartite => H(random_regular_partite(
            need(p.n, "n", kind)?,
            need(p.r, "r", kind)?,
            need(p.d, "d", kind)?,
            seed,
        )?),
        GenKind::RandomGirth4 => H(random_girth4_regular(
            need(p.n, "n", kind)?,
            need(p.r, "r", kind)?,
            need(p.d, "d", kind)?,
            seed,
            p.max_tries.unwrap_or(DEFAULT_MAX_TRIES),
        )?),
        GenKind::AffinePlane => {
            let plane = designs::affine_plane(need(p.q, "q", kind)?)?;
            if p.dual {
                H(designs::design_dual_hypergraph(&plane)?)
            } else {
                Generated::Design(plane)
            }
        }
    })
}
