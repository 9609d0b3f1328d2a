//! Block designs: verification, replication numbers, affine planes and the
//! design-to-dual-hypergraph transform.
//!
//! Text layout: header `D t v k lambda c` (`c` = number of parallel
//! classes, 0 when unresolved), then `c` lines `start end` giving each
//! class as a half-open range of block indices, then one block per line
//! until end of input.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{parse_err, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::io::parse_usizes;

/// Largest point count accepted by [`verify_design`].
pub const VERIFY_MAX_POINTS: usize = 64;
/// Largest strength accepted by [`verify_design`].
pub const VERIFY_MAX_STRENGTH: usize = 3;
/// Largest order accepted by [`affine_plane`].
pub const AFFINE_MAX_Q: usize = 97;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Parallel classes as lists of block indices.
    pub resolution: Option<Vec<Vec<usize>>>,
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `r_i = λ·C(v-i, t-i) / C(k-i, t-i)`, the number of blocks through a
/// fixed `i`-set of points, as an exact rational.
pub fn replication(v: usize, k: usize, lambda: usize, t: usize, i: usize) -> Result<BigRational> {
    if !(i <= t && t <= k && k <= v) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= i <= t <= k <= v, got i = {i}, t = {t}, k = {k}, v = {v}"
        )));
    }
    Ok(BigRational::new(
        BigInt::from(lambda) * binom(v - i, t - i),
        binom(k - i, t - i),
    ))
}

/// Whether every `r_i`, `0 <= i < t`, is an integer.
pub fn divisibility_ok(v: usize, k: usize, lambda: usize, t: usize) -> bool {
    (0..t).all(|i| replication(v, k, lambda, t, i).is_ok_and(|r| r.is_integer()))
}

/// `n = 1 + μ·k(k-1)···(k-t+1)`: with `v = nk` and `λ = 1`, all
/// divisibility conditions for a `t-(nk, k, 1)` design hold.
pub fn corollary_witness_n(k: usize, t: usize, mu: usize) -> Result<u128> {
    if t == 0 || k < t || mu == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k >= t >= 1 and mu >= 1, got k = {k}, t = {t}, mu = {mu}"
        )));
    }
    let falling = (0..t).try_fold(mu as u128, |acc, i| acc.checked_mul((k - i) as u128));
    falling
        .and_then(|f| f.checked_add(1))
        .ok_or_else(|| Error::InvalidArgument("witness overflows u128".into()))
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// The affine plane `AG(2, q)` for prime `q`: point `(x, y)` has id
/// `x·q + y`; classes are the `q` slopes followed by the vertical lines.
pub fn affine_plane(q: usize) -> Result<Design> {
    if !is_prime(q) || q > AFFINE_MAX_Q {
        return Err(Error::InvalidArgument(format!(
            "q must be a prime <= {AFFINE_MAX_Q}, got {q}"
        )));
    }
    let mut blocks = Vec::with_capacity(q * q + q);
    let mut resolution = Vec::with_capacity(q + 1);
    for a in 0..q {
        let class: Vec<usize> = (blocks.len()..blocks.len() + q).collect();
        for b in 0..q {
            let mut line: Vec<usize> = (0..q).map(|x| x * q + (a * x + b) % q).collect();
            line.sort_unstable();
            blocks.push(line);
        }
        resolution.push(class);
    }
    let class: Vec<usize> = (blocks.len()..blocks.len() + q).collect();
    for c in 0..q {
        blocks.push((0..q).map(|y| c * q + y).collect());
    }
    resolution.push(class);
    Ok(Design {
        t: 2,
        v: q * q,
        k: q,
        lambda: 1,
        blocks,
        resolution: Some(resolution),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DesignReport {
    pub blocks_ok: bool,
    pub coverage_ok: bool,
    /// `None` when the design carries no resolution.
    pub resolution_ok: Option<bool>,
    pub problems: Vec<String>,
}

impl DesignReport {
    pub fn is_valid(&self) -> bool {
        self.blocks_ok && self.coverage_ok && self.resolution_ok != Some(false)
    }

    pub fn is_resolvable(&self) -> bool {
        self.is_valid() && self.resolution_ok == Some(true)
    }
}

/// Checks block sizes, that every `t`-set of points lies in exactly `λ`
/// blocks, and that each parallel class partitions the points.
pub fn verify_design(d: &Design) -> Result<DesignReport> {
    if d.v > VERIFY_MAX_POINTS || d.t > VERIFY_MAX_STRENGTH {
        return Err(Error::GuardExceeded(format!(
            "design verification is limited to v <= {VERIFY_MAX_POINTS}, t <= {VERIFY_MAX_STRENGTH}"
        )));
    }
    let mut report = DesignReport {
        blocks_ok: true,
        coverage_ok: true,
        ..Default::default()
    };
    for (i, b) in d.blocks.iter().enumerate() {
        let sorted = b.windows(2).all(|w| w[0] < w[1]);
        if b.len() != d.k || !sorted || b.iter().any(|&p| p >= d.v) {
            report.blocks_ok = false;
            report.problems.push(format!(
                "block {i} is not an ascending {}-subset of [0, {})",
                d.k, d.v
            ));
        }
    }
    if report.blocks_ok {
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for b in &d.blocks {
            for s in b.iter().copied().combinations(d.t) {
                *count.entry(s).or_default() += 1;
            }
        }
        for s in (0..d.v).combinations(d.t) {
            let c = count.get(&s).copied().unwrap_or(0);
            if c != d.lambda {
                report.coverage_ok = false;
                report
                    .problems
                    .push(format!("{s:?} lies in {c} blocks, expected {}", d.lambda));
                break;
            }
        }
    }
    if let Some(classes) = &d.resolution {
        let mut ok = true;
        let mut seen = vec![false; d.blocks.len()];
        for (c, class) in classes.iter().enumerate() {
            let mut hits = vec![0usize; d.v];
            for &b in class {
                if b >= d.blocks.len() || std::mem::replace(&mut seen[b], true) {
                    ok = false;
                    report
                        .problems
                        .push(format!("class {c}: block {b} missing or repeated"));
                    continue;
                }
                for &p in &d.blocks[b] {
                    if p < d.v {
                        hits[p] += 1;
                    }
                }
            }
            if hits.iter().any(|&h| h != 1) {
                ok = false;
                report
                    .problems
                    .push(format!("class {c} does not partition the points"));
            }
        }
        if seen.iter().any(|&s| !s) {
            ok = false;
            report.problems.push("some block lies in no class".into());
        }
        report.resolution_ok = Some(ok);
    }
    Ok(report)
}

/// Blocks become vertices and points become edges: the edge for point `p`
/// lists the blocks through `p`. Parts are the parallel classes, so the
/// result is `r`-partite with `r` the number of classes and each part of
/// size `v/k`.
pub fn design_dual_hypergraph(d: &Design) -> Result<Hypergraph> {
    let classes = d
        .resolution
        .as_ref()
        .ok_or_else(|| Error::Precondition("design has no resolution".into()))?;
    if d.lambda != 1 || d.k == 0 || !d.v.is_multiple_of(d.k) {
        return Err(Error::Precondition(format!(
            "need lambda = 1 and k | v, got lambda = {}, k = {}, v = {}",
            d.lambda, d.k, d.v
        )));
    }
    let report = verify_design(d)?;
    if !report.is_resolvable() {
        return Err(Error::InvalidDesign(report.problems.join("; ")));
    }
    let mut edges = vec![Vec::new(); d.v];
    for (b, block) in d.blocks.iter().enumerate() {
        for &p in block {
            edges[p].push(b);
        }
    }
    let mut parts = vec![0; d.blocks.len()];
    for (c, class) in classes.iter().enumerate() {
        for &b in class {
            parts[b] = c;
        }
    }
    Hypergraph::new(d.blocks.len(), edges)?.with_parts(parts, classes.len())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).join(" ")
}

/// Encodes `d`; each parallel class must be a contiguous block range.
pub fn design_to_text(d: &Design) -> Result<String> {
    let classes = d.resolution.as_deref().unwrap_or(&[]);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "D {} {} {} {} {}",
        d.t,
        d.v,
        d.k,
        d.lambda,
        classes.len()
    );
    for (c, class) in classes.iter().enumerate() {
        let start = class.first().copied().unwrap_or(0);
        if class.iter().enumerate().any(|(i, &b)| b != start + i) {
            return Err(Error::InvalidDesign(format!(
                "class {c} is not a contiguous block range"
            )));
        }
        let _ = writeln!(out, "{start} {}", start + class.len());
    }
    for b in &d.blocks {
        out.push_str(&join(b));
        out.push('\n');
    }
    Ok(out)
}

/// Parses the text layout (`#` starts a comment); when `checked`, the
/// design must also pass [`verify_design`].
pub fn parse_design(src: &str, checked: bool) -> Result<Design> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("D") {
        return Err(parse_err(ln, "header must start with 'D'"));
    }
    let nums = parse_usizes(&toks.join(" "), ln)?;
    let [t, v, k, lambda, c] = nums[..] else {
        return Err(parse_err(ln, "header must be 'D t v k lambda c'"));
    };
    let mut ranges = Vec::with_capacity(c);
    for _ in 0..c {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(ln + 1, "missing class range"))?;
        match parse_usizes(line, ln)?[..] {
            [s, e] if s <= e => ranges.push((ln, s, e)),
            _ => return Err(parse_err(ln, "class range must be 'start end'")),
        }
    }
    let mut blocks = Vec::new();
    for (ln, line) in lines {
        let b = parse_usizes(line, ln)?;
        if b.len() != k {
            return Err(parse_err(
                ln,
                format!("block has {} points, expected k = {k}", b.len()),
            ));
        }
        if let Some(&p) = b.iter().find(|&&p| p >= v) {
            return Err(parse_err(ln, format!("point {p} out of range for v = {v}")));
        }
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(ln, "block points must be strictly ascending"));
        }
        blocks.push(b);
    }
    let mut resolution = Vec::with_capacity(c);
    for (ln, s, e) in ranges {
        if e > blocks.len() {
            return Err(parse_err(
                ln,
                format!("class range ends past the {} blocks", blocks.len()),
            ));
        }
        resolution.push((s..e).collect());
    }
    let d = Design {
        t,
        v,
        k,
        lambda,
        blocks,
        resolution: (c > 0).then_some(resolution),
    };
    if checked {
        let report = verify_design(&d)?;
        if !report.is_valid() {
            return Err(Error::InvalidDesign(report.problems.join("; ")));
        }
    }
    Ok(d)
}

pub fn load_design(path: impl AsRef<Path>, checked: bool) -> Result<Design> {
    parse_design(&std::fs::read_to_string(path)?, checked)
}

pub fn save_design(d: &Design, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, design_to_text(d)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Design {
        let blocks = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        Design {
            t: 2,
            v: 7,
            k: 3,
            lambda: 1,
            blocks: blocks.iter().map(|b| b.to_vec()).collect(),
            resolution: None,
        }
    }

    #[test]
    fn replication_numbers() {
        let int = |x: i64| BigRational::from_integer(x.into());
        assert_eq!(replication(7, 3, 1, 2, 1).unwrap(), int(3));
        assert_eq!(replication(9, 3, 1, 2, 0).unwrap(), int(12));
        assert_eq!(replication(9, 3, 5, 2, 2).unwrap(), int(5));
        assert_eq!(
            replication(8, 3, 1, 2, 0).unwrap(),
            BigRational::new(28.into(), 3.into())
        );
        assert!(replication(3, 4, 1, 2, 0).is_err());
    }

    #[test]
    fn divisibility() {
        assert!(divisibility_ok(9, 3, 1, 2));
        assert!(!divisibility_ok(8, 3, 1, 2));
        assert_eq!(corollary_witness_n(3, 2, 1).unwrap(), 7);
        assert!(divisibility_ok(21, 3, 1, 2));
    }

    #[test]
    fn affine_planes_verify() {
        for q in [2, 3, 5, 7] {
            let d = affine_plane(q).unwrap();
            assert_eq!(d.blocks.len(), q * q + q);
            assert_eq!(d.resolution.as_ref().unwrap().len(), q + 1);
            assert!(verify_design(&d).unwrap().is_resolvable(), "q = {q}");
        }
        assert!(affine_plane(4).is_err());
        assert!(affine_plane(101).is_err());
    }

    #[test]
    fn broken_designs_fail() {
        let mut d = fano();
        assert!(verify_design(&d).unwrap().is_valid());
        d.blocks.pop();
        assert!(!verify_design(&d).unwrap().coverage_ok);

        let mut d = affine_plane(3).unwrap();
        let res = d.resolution.as_mut().unwrap();
        let (a, b) = (res[0][0], res[1][0]);
        res[0][0] = b;
        res[1][0] = a;
        let report = verify_design(&d).unwrap();
        assert!(report.coverage_ok);
        assert_eq!(report.resolution_ok, Some(false));
    }

    #[test]
    fn dual_of_affine_plane() {
        let h = design_dual_hypergraph(&affine_plane(3).unwrap()).unwrap();
        assert_eq!(
            (h.n_vertices(), h.n_edges(), h.uniformity()),
            (12, 9, Some(4))
        );
        assert_eq!((h.min_degree(), h.max_degree()), (3, 3));
        assert_eq!(h.parts().unwrap().part_sizes(), vec![3; 4]);

        let h = design_dual_hypergraph(&affine_plane(2).unwrap()).unwrap();
        assert_eq!(
            (h.n_vertices(), h.n_edges(), h.uniformity()),
            (6, 4, Some(3))
        );
        assert_eq!((h.min_degree(), h.max_degree()), (2, 2));
        assert!(design_dual_hypergraph(&fano()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let d = affine_plane(3).unwrap();
        let text = design_to_text(&d).unwrap();
        let back = parse_design(&text, true).unwrap();
        assert_eq!(back, d);
        assert_eq!(design_to_text(&back).unwrap(), text);
        let plain = design_to_text(&fano()).unwrap();
        assert_eq!(parse_design(&plain, true).unwrap(), fano());
    }

    #[test]
    fn parse_errors() {
        let bad_size = "D 2 7 3 1 0\n0 1 2\n0 3\n";
        assert!(matches!(
            parse_design(bad_size, false),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad_range = "D 2 4 2 1 1\n0 9\n0 1\n";
        assert!(matches!(
            parse_design(bad_range, false),
            Err(Error::Parse { line: 2, .. })
        ));
        let invalid = "D 2 7 3 1 0\n0 1 2\n";
        assert!(matches!(
            parse_design(invalid, true),
            Err(Error::InvalidDesign(_))
        ));
        assert!(parse_design(invalid, false).is_ok());
    }
}
