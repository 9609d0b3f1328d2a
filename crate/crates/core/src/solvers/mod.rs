//! Algorithms producing shallow (hitting) edge sets.
//!
//! Every solver ends by re-verifying its selection; `Unsat` is reported only
//! by exhaustive search, and running out of budget is `GaveUp`.

mod augment;
mod exact;
mod flow;
mod lll;
mod montecarlo;
mod partition;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeSelection, Hypergraph};

pub use augment::{codegree_augment_partite, codegree_augment_uniform};
pub use exact::{exact_max_shallow, exact_shallow_hitting, MaxShallowOutcome, DEFAULT_NODE_BUDGET};
pub use flow::{bipartite_factor, hall_condition_check, HallReport, Side, HALL_MAX_SIDE};
pub use lll::{lll_hitting, lll_hitting_girth4, DEFAULT_MAX_RESAMPLES, DEFAULT_MAX_RESTARTS};
pub use montecarlo::{monte_carlo_experiment, MonteCarloReport, TrialRow};
pub use partition::{partition_shallow, PartitionOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
    GaveUp,
}

impl Status {
    /// Process exit code: 0 SAT, 3 UNSAT, 4 gave up.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Sat => 0,
            Status::Unsat => 3,
            Status::GaveUp => 4,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::GaveUp => "GaveUp",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome<'h> {
    pub status: Status,
    pub selection: Option<EdgeSelection<'h>>,
    pub iterations: u64,
    pub elapsed: Duration,
    /// Why the solver stopped without an answer, when it did.
    pub note: Option<String>,
}

impl<'h> SolveOutcome<'h> {
    fn sat(sel: EdgeSelection<'h>, iterations: u64, elapsed: Duration) -> Self {
        SolveOutcome {
            status: Status::Sat,
            selection: Some(sel),
            iterations,
            elapsed,
            note: None,
        }
    }

    fn unsat(iterations: u64, elapsed: Duration) -> Self {
        SolveOutcome {
            status: Status::Unsat,
            selection: None,
            iterations,
            elapsed,
            note: None,
        }
    }

    fn gave_up(iterations: u64, elapsed: Duration, note: impl Into<String>) -> Self {
        SolveOutcome {
            status: Status::GaveUp,
            selection: None,
            iterations,
            elapsed,
            note: Some(note.into()),
        }
    }
}

/// Returns `sel` as a SAT outcome after checking it is a `t`-shallow hitting
/// edge set; a failure here is a solver bug.
fn certify<'h>(
    sel: EdgeSelection<'h>,
    t: usize,
    iterations: u64,
    elapsed: Duration,
) -> SolveOutcome<'h> {
    let report = sel.verify(t);
    assert!(
        report.is_shallow_hitting() && sel.is_coherent(),
        "solver produced an invalid selection: {report:?}"
    );
    SolveOutcome::sat(sel, iterations, elapsed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Exact,
    ExactMax,
    Lll,
    LllGirth4,
    Partition,
    Codegree,
    CodegreePartite,
    BipartiteFlow,
}

impl Algo {
    pub const ALL: [Algo; 8] = [
        Algo::Exact,
        Algo::ExactMax,
        Algo::Lll,
        Algo::LllGirth4,
        Algo::Partition,
        Algo::Codegree,
        Algo::CodegreePartite,
        Algo::BipartiteFlow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::ExactMax => "exact-max",
            Algo::Lll => "lll",
            Algo::LllGirth4 => "lll-girth4",
            Algo::Partition => "partition",
            Algo::Codegree => "codegree",
            Algo::CodegreePartite => "codegree-partite",
            Algo::BipartiteFlow => "bipartite-flow",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algo::Lll | Algo::LllGirth4 | Algo::Partition)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveParams {
    pub t: usize,
    pub seed: u64,
    pub budget: u64,
    pub max_resamples: u64,
    pub max_restarts: u64,
    /// Number of colour classes for `partition`; derived from the bounds
    /// when absent.
    pub k: Option<usize>,
}

impl SolveParams {
    pub fn new(t: usize) -> Self {
        SolveParams {
            t,
            seed: 0,
            budget: DEFAULT_NODE_BUDGET,
            max_resamples: DEFAULT_MAX_RESAMPLES,
            max_restarts: DEFAULT_MAX_RESTARTS,
            k: None,
        }
    }
}

/// Machine-readable result of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: Status,
    pub algo: String,
    pub t: usize,
    pub selection: Option<Vec<usize>>,
    pub iterations: u64,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// `ν_t` for `exact-max`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Colour classes for `partition`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl SolveReport {
    fn from_outcome(algo: Algo, t: usize, seed: Option<u64>, out: &SolveOutcome<'_>) -> Self {
        SolveReport {
            status: out.status,
            algo: algo.name().to_string(),
            t,
            selection: out.selection.as_ref().map(EdgeSelection::indices),
            iterations: out.iterations,
            seed,
            elapsed_ms: out.elapsed.as_millis() as u64,
            note: out.note.clone(),
            nu: None,
            eta: None,
            classes: None,
            k: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation")
    }

    /// JSON without `elapsed_ms`, for reproducibility comparisons.
    pub fn to_json_deterministic(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialisation");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("elapsed_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serialisation")
    }
}

/// Runs `algo` on `h` and packages the result.
pub fn run(algo: Algo, h: &Hypergraph, p: &SolveParams) -> Result<SolveReport> {
    let t = p.t;
    let seed = algo.is_randomized().then_some(p.seed);
    let report = match algo {
        Algo::Exact => {
            SolveReport::from_outcome(algo, t, seed, &exact_shallow_hitting(h, t, p.budget)?)
        }
        Algo::ExactMax => {
            let m = exact_max_shallow(h, t, p.budget)?;
            let mut rep = SolveReport::from_outcome(algo, t, seed, &m.outcome);
            rep.nu = Some(m.nu);
            rep.eta = m.eta;
            rep
        }
        Algo::Lll => {
            SolveReport::from_outcome(algo, t, seed, &lll_hitting(h, t, p.seed, p.max_resamples)?)
        }
        Algo::LllGirth4 => SolveReport::from_outcome(
            algo,
            t,
            seed,
            &lll_hitting_girth4(h, t, p.seed, p.max_restarts, p.max_resamples)?,
        ),
        Algo::Partition => {
            let part = partition_shallow(h, t, p.k, p.seed, p.max_resamples)?;
            let mut rep = SolveReport::from_outcome(algo, t, seed, &part.outcome);
            rep.k = Some(part.k);
            rep.classes = part.classes;
            rep
        }
        Algo::Codegree => {
            SolveReport::from_outcome(algo, t, seed, &codegree_augment_uniform(h, t)?)
        }
        Algo::CodegreePartite => {
            SolveReport::from_outcome(algo, t, seed, &codegree_augment_partite(h, t)?)
        }
        Algo::BipartiteFlow => SolveReport::from_outcome(algo, t, seed, &bipartite_factor(h, t)?),
    };
    Ok(report)
}

fn require_t(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    Ok(())
}
