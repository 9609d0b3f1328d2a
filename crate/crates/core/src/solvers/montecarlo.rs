//! The one-pass random experiment without repair: every vertex picks a
//! uniformly random incident edge and the picks are kept as they fall.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::require_t;
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeSelection, Hypergraph};

const TRIAL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub max_deg: usize,
    pub shallow: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub t: usize,
    pub rows: Vec<TrialRow>,
    pub single_pass_success_rate: f64,
    pub mean_max_degree: f64,
}

impl MonteCarloReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,max_deg,shallow\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.trial, r.seed, r.max_deg, r.shallow)
                .expect("write to string");
        }
        out
    }
}

/// Seed used for trial `i`; independent of `t`, so runs at different
/// thresholds share their picks.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_add(i.wrapping_mul(TRIAL_STRIDE))
}

/// Maximum `deg_M` after one pass; isolated vertices pick nothing.
fn one_pass(h: &Hypergraph, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sel = EdgeSelection::new(h);
    for v in 0..h.n_vertices() {
        if let Some(&e) = h.incident(v).choose(&mut rng) {
            sel.insert(e);
        }
    }
    sel.degrees().iter().copied().max().unwrap_or(0)
}

pub fn monte_carlo_experiment(
    h: &Hypergraph,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    require_t(t)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let rows: Vec<TrialRow> = (0..trials)
        .map(|trial| {
            let seed = trial_seed(seed, trial);
            let max_deg = one_pass(h, seed);
            TrialRow {
                trial,
                seed,
                max_deg,
                shallow: max_deg <= t,
            }
        })
        .collect();
    let wins = rows.iter().filter(|r| r.shallow).count();
    let total: usize = rows.iter().map(|r| r.max_deg).sum();
    Ok(MonteCarloReport {
        t,
        single_pass_success_rate: wins as f64 / trials as f64,
        mean_max_degree: total as f64 / trials as f64,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_regular;

    #[test]
    fn t_at_max_degree_always_succeeds() {
        let h = random_regular(30, 3, 5, 1).unwrap();
        let rep = monte_carlo_experiment(&h, 5, 50, 7).unwrap();
        assert_eq!(rep.single_pass_success_rate, 1.0);
    }

    #[test]
    fn csv_has_one_row_per_trial() {
        let h = random_regular(12, 3, 3, 2).unwrap();
        let rep = monte_carlo_experiment(&h, 1, 4, 0).unwrap();
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("trial,seed,max_deg,shallow\n"));
    }
}
