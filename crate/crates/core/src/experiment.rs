//! Batch runner over a grid of generator parameters, solvers, thresholds
//! and seeds.
//!
//! A spec is a list of blocks separated by blank lines. Each block holds
//! `key = value` lines (`#` starts a comment):
//!
//! ```text
//! kind = random-regular
//! gen.n = 24, 48
//! gen.r = 3
//! gen.d = 4
//! algo = lll, partition
//! t = auto
//! seeds = 0..3
//! max_resamples = 10000
//! ```
//!
//! Values are comma lists; numeric entries may be ranges `a..b` or `a..=b`.
//! `t = auto` takes `min_t_general(Δ/δ, r)` capped at `Δ`. Random
//! generators without an explicit `gen.seed` use the run seed. Caps
//! (`budget`, `max_resamples`, `max_restarts`, `k`) take single values.
//!
//! Cells expand in the order: generator parameters (keys sorted, last key
//! fastest), algo, t, seed. A cell whose generator or solver rejects its
//! input is reported with status `ERROR`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;

use crate::bounds::min_t_general;
use crate::constructions::{generate, GenKind, GenParams, Generated};
use crate::error::{parse_err, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::solvers::{run, Algo, SolveParams};

pub const CSV_HEADER: &str =
    "cell,kind,params,algo,t,seed,n,m,status,iterations,selection_size,elapsed_ms";

/// Grid run by the acceptance suite and `experiment --acceptance`.
pub const ACCEPTANCE_GRID: &str = "\
# truncated projective spaces: no (t-1)-shallow hitting set
kind = projective-truncated
gen.t = 2, 3
algo = exact
t = 1, 2
seeds = 0

# random regular hosts at the general local-lemma threshold
kind = random-regular
gen.n = 24, 48
gen.r = 3, 4
gen.d = 4, 6
algo = lll, partition
t = auto
seeds = 0..4
max_resamples = 100000

# co-degree gadgets against the augmentation solvers
kind = codegree-uniform
gen.n = 15
gen.r = 3
gen.t = 2
algo = exact, codegree
t = 2
seeds = 0

kind = random-partite
gen.n = 6
gen.r = 2
gen.d = 4
algo = codegree-partite, bipartite-flow
t = 2
seeds = 0..3

kind = bipartite-tight
gen.n = 13
gen.t = 2
algo = bipartite-flow
t = 2
seeds = 0

kind = affine-plane
gen.q = 2, 3
gen.dual = true
algo = exact-max
t = 1
seeds = 0
";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TChoice {
    Fixed(usize),
    Auto,
}

/// One block of a spec, with every list expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBlock {
    pub kind: GenKind,
    pub gen: BTreeMap<String, Vec<String>>,
    pub algos: Vec<Algo>,
    pub ts: Vec<TChoice>,
    pub seeds: Vec<u64>,
    pub budget: Option<u64>,
    pub max_resamples: Option<u64>,
    pub max_restarts: Option<u64>,
    pub k: Option<usize>,
}

/// A single run of the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub index: usize,
    pub kind: GenKind,
    pub gen: BTreeMap<String, String>,
    pub algo: Algo,
    pub t: TChoice,
    pub seed: u64,
    pub budget: Option<u64>,
    pub max_resamples: Option<u64>,
    pub max_restarts: Option<u64>,
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub cell: usize,
    pub kind: String,
    pub params: String,
    pub algo: String,
    pub t: Option<usize>,
    pub seed: u64,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub status: String,
    pub iterations: u64,
    pub selection_size: Option<usize>,
    pub elapsed_ms: u64,
}

fn expand_value(raw: &str, numeric: bool, line: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(parse_err(line, "empty list entry"));
        }
        let range = item
            .split_once("..=")
            .map(|(a, b)| (a, b, true))
            .or_else(|| item.split_once("..").map(|(a, b)| (a, b, false)));
        match range {
            Some((a, b, inclusive)) if numeric => {
                let bad = || parse_err(line, format!("bad range {item:?}"));
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                let end = if inclusive {
                    b.checked_add(1).ok_or_else(bad)?
                } else {
                    b
                };
                out.extend((a..end).map(|x| x.to_string()));
            }
            _ => out.push(item.to_string()),
        }
    }
    Ok(out)
}

fn parse_all<T: FromStr>(vals: &[String], key: &str, line: usize) -> Result<Vec<T>> {
    vals.iter()
        .map(|v| {
            v.parse()
                .map_err(|_| parse_err(line, format!("{key}: cannot parse {v:?}")))
        })
        .collect()
}

fn single<T: FromStr>(vals: &[String], key: &str, line: usize) -> Result<T> {
    match vals {
        [v] => v
            .parse()
            .map_err(|_| parse_err(line, format!("{key}: cannot parse {v:?}"))),
        _ => Err(parse_err(line, format!("{key} takes a single value"))),
    }
}

fn parse_block(lines: &[(usize, &str)]) -> Result<GridBlock> {
    let first = lines[0].0;
    let mut kind = None;
    let mut gen = BTreeMap::new();
    let mut algos = None;
    let mut ts = None;
    let mut seeds = None;
    let (mut budget, mut max_resamples, mut max_restarts, mut k) = (None, None, None, None);
    for &(line, text) in lines {
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let numeric = key != "kind" && key != "algo" && key != "gen.dual";
        let vals = expand_value(value, numeric, line)?;
        match key {
            "kind" => {
                kind = Some(
                    single::<String>(&vals, key, line)?
                        .parse::<GenKind>()
                        .map_err(|e| parse_err(line, e.to_string()))?,
                )
            }
            "algo" => {
                algos = Some(
                    parse_all::<String>(&vals, key, line)?
                        .iter()
                        .map(|a| {
                            a.parse::<Algo>()
                                .map_err(|e| parse_err(line, e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "t" => {
                ts = Some(
                    vals.iter()
                        .map(|v| match v.as_str() {
                            "auto" => Ok(TChoice::Auto),
                            _ => v
                                .parse()
                                .map(TChoice::Fixed)
                                .map_err(|_| parse_err(line, format!("t: cannot parse {v:?}"))),
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "seeds" => seeds = Some(parse_all(&vals, key, line)?),
            "budget" => budget = Some(single(&vals, key, line)?),
            "max_resamples" => max_resamples = Some(single(&vals, key, line)?),
            "max_restarts" => max_restarts = Some(single(&vals, key, line)?),
            "k" => k = Some(single(&vals, key, line)?),
            _ => match key.strip_prefix("gen.") {
                Some(g) if !g.is_empty() => {
                    if gen.insert(g.to_string(), vals).is_some() {
                        return Err(parse_err(line, format!("duplicate key {key}")));
                    }
                }
                _ => return Err(parse_err(line, format!("unknown key {key:?}"))),
            },
        }
    }
    let missing = |what: &str| parse_err(first, format!("block is missing {what}"));
    Ok(GridBlock {
        kind: kind.ok_or_else(|| missing("kind"))?,
        gen,
        algos: algos.ok_or_else(|| missing("algo"))?,
        ts: ts.ok_or_else(|| missing("t"))?,
        seeds: seeds.unwrap_or_else(|| vec![0]),
        budget,
        max_resamples,
        max_restarts,
        k,
    })
}

/// Parses a grid spec; an empty spec has no blocks.
pub fn parse_grid(src: &str) -> Result<Vec<GridBlock>> {
    let mut blocks = Vec::new();
    let mut current: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if raw.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(parse_block(&current)?);
                current.clear();
            }
        } else if !text.is_empty() {
            current.push((i + 1, text));
        }
    }
    if !current.is_empty() {
        blocks.push(parse_block(&current)?);
    }
    Ok(blocks)
}

pub fn expand(blocks: &[GridBlock]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for b in blocks {
        let keys: Vec<&String> = b.gen.keys().collect();
        let combos: Vec<Vec<&String>> = if keys.is_empty() {
            vec![Vec::new()]
        } else {
            b.gen
                .values()
                .map(|v| v.iter())
                .multi_cartesian_product()
                .collect()
        };
        for combo in combos {
            let gen: BTreeMap<String, String> = keys
                .iter()
                .map(|k| (*k).clone())
                .zip(combo.into_iter().cloned())
                .collect();
            for &algo in &b.algos {
                for &t in &b.ts {
                    for &seed in &b.seeds {
                        cells.push(Cell {
                            index: cells.len(),
                            kind: b.kind,
                            gen: gen.clone(),
                            algo,
                            t,
                            seed,
                            budget: b.budget,
                            max_resamples: b.max_resamples,
                            max_restarts: b.max_restarts,
                            k: b.k,
                        });
                    }
                }
            }
        }
    }
    cells
}

fn host_for(cell: &Cell) -> Result<Hypergraph> {
    let mut map = cell.gen.clone();
    if cell.kind.is_random() {
        map.entry("seed".into())
            .or_insert_with(|| cell.seed.to_string());
    }
    Ok(match generate(cell.kind, &GenParams::from_map(&map)?)? {
        Generated::Hypergraph(h) => h,
        Generated::Design(d) => Hypergraph::new(d.v, d.blocks)?,
    })
}

fn auto_t(h: &Hypergraph) -> Result<usize> {
    let r = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("t = auto needs a uniform host".into()))?;
    let (lo, hi) = (h.min_degree(), h.max_degree());
    if lo == 0 {
        return Err(Error::Precondition(
            "t = auto needs minimum degree at least 1".into(),
        ));
    }
    let t = min_t_general(hi as f64 / lo as f64, r.max(2) as u64)?.t;
    Ok((t as usize).min(hi).max(1))
}

pub fn run_cell(cell: &Cell) -> Row {
    let start = Instant::now();
    let mut row = Row {
        cell: cell.index,
        kind: cell.kind.name().to_string(),
        params: cell.gen.iter().map(|(k, v)| format!("{k}={v}")).join(";"),
        algo: cell.algo.name().to_string(),
        t: match cell.t {
            TChoice::Fixed(t) => Some(t),
            TChoice::Auto => None,
        },
        seed: cell.seed,
        n: None,
        m: None,
        status: "ERROR".into(),
        iterations: 0,
        selection_size: None,
        elapsed_ms: 0,
    };
    let outcome = (|| -> Result<()> {
        let h = host_for(cell)?;
        row.n = Some(h.n_vertices());
        row.m = Some(h.n_edges());
        let t = match cell.t {
            TChoice::Fixed(t) => t,
            TChoice::Auto => auto_t(&h)?,
        };
        row.t = Some(t);
        let mut p = SolveParams::new(t);
        p.seed = cell.seed;
        p.budget = cell.budget.unwrap_or(p.budget);
        p.max_resamples = cell.max_resamples.unwrap_or(p.max_resamples);
        p.max_restarts = cell.max_restarts.unwrap_or(p.max_restarts);
        p.k = cell.k;
        let rep = run(cell.algo, &h, &p)?;
        row.status = rep.status.to_string();
        row.iterations = rep.iterations;
        row.selection_size = rep.selection.as_ref().map(Vec::len);
        Ok(())
    })();
    if outcome.is_err() {
        row.status = "ERROR".into();
    }
    row.elapsed_ms = start.elapsed().as_millis() as u64;
    row
}

/// Runs every cell on a pool of `workers` threads (all cores when `None`);
/// rows come back in cell order.
pub fn run_grid(cells: &[Cell], workers: Option<usize>) -> Result<Vec<Row>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be at least 1".into(),
            ));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(run_cell).collect()))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.cell,
            r.kind,
            r.params,
            r.algo,
            opt(r.t),
            r.seed,
            opt(r.n),
            opt(r.m),
            r.status,
            r.iterations,
            opt(r.selection_size),
            r.elapsed_ms
        )
        .expect("write to string");
    }
    out
}

/// Parses `spec`, runs it and renders the CSV.
pub fn run_spec(spec: &str, workers: Option<usize>) -> Result<String> {
    let cells = expand(&parse_grid(spec)?);
    Ok(rows_to_csv(&run_grid(&cells, workers)?))
}

/// Drops the trailing `elapsed_ms` column from every line.
pub fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .map(|l| format!("{l}\n"))
        .collect()
}
