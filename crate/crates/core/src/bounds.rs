//! Threshold formulas: minimal `t` for the two local-lemma conditions, their
//! closed forms, Lambert W, the partition size `k`, and the co-degree,
//! matching and bipartite thresholds.
//!
//! The general condition `t!/(t+1) ≥ e·μ^{t+1}·r^{t+3}` and the girth-four
//! condition `t!/(t+1) ≥ e·r²·(η·L)^{t+1}` with `L = ln r + 1 + 1/e` share the shape
//! `t!/(t+1) ≥ e·r²·B^{t+1}` (`B = μr` resp. `ηL`), which is how they are
//! evaluated here. Minimal values are found in the log domain and then
//! re-checked in exact integer arithmetic on both sides of the boundary.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::fmt;

use num::bigint::BigUint;
use num::rational::Ratio;
use num::{One, ToPrimitive};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Largest `t` for which boundary checks are redone exactly.
pub const EXACT_MAX_T: u64 = 20_000;

/// `e` to 39 decimals, rounded down; `E_DEN` is `10^39`.
const E_DIGITS: &str = "2718281828459045235360287471352662497757";
const E_SCALE: u32 = 39;

/// Fixed-point scale for interval enclosures of `ln r + 1 + 1/e`.
const L_SCALE_BITS: u32 = 40;

/// A minimal-`t` result with the verified boundary `fails = t-1`,
/// `holds = t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Boundary {
    pub fails: u64,
    pub holds: u64,
    /// Both sides were confirmed in exact arithmetic.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinT {
    pub t: u64,
    pub closed_form: u64,
    pub boundary: Boundary,
}

/// Nonnegative rational `num/den`.
#[derive(Clone, Debug)]
struct Q {
    num: BigUint,
    den: BigUint,
}

impl Q {
    fn int(x: u64) -> Q {
        Q {
            num: x.into(),
            den: BigUint::one(),
        }
    }

    /// Exact value of a finite nonnegative float.
    fn from_f64(x: f64) -> Q {
        assert!(
            x.is_finite() && x >= 0.0,
            "expected a finite nonnegative float"
        );
        let Some(r) = Ratio::<num::BigInt>::from_float(x) else {
            unreachable!("finite floats are rational")
        };
        Q {
            num: r.numer().to_biguint().expect("nonnegative"),
            den: r.denom().to_biguint().expect("positive"),
        }
    }

    fn mul(&self, o: &Q) -> Q {
        Q {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn pow(&self, e: u64) -> Q {
        let e = u32::try_from(e).expect("exponent fits in u32");
        Q {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

fn e_bounds() -> (Q, Q) {
    let num: BigUint = E_DIGITS.parse().expect("digits");
    let den = BigUint::from(10u32).pow(E_SCALE);
    (
        Q {
            num: num.clone(),
            den: den.clone(),
        },
        Q {
            num: num + 1u32,
            den,
        },
    )
}

fn factorial(t: u64) -> BigUint {
    fn product(lo: u64, hi: u64) -> BigUint {
        if hi - lo < 16 {
            return (lo..=hi).fold(BigUint::one(), |acc, i| acc * i);
        }
        let mid = lo + (hi - lo) / 2;
        product(lo, mid) * product(mid + 1, hi)
    }
    if t < 2 {
        BigUint::one()
    } else {
        product(2, t)
    }
}

/// `t!/(t+1)` against `e·r²·B^{t+1}` with `B ∈ [b_lo, b_hi]`: `Some(true)`
/// if the inequality holds for every admissible `B` and `e`, `Some(false)`
/// if it fails for every one, `None` if undecided or `t` is too large.
fn exact_check(t: u64, r: u64, b_lo: &Q, b_hi: &Q) -> Option<bool> {
    if t > EXACT_MAX_T {
        return None;
    }
    let f = factorial(t);
    let (e_lo, e_hi) = e_bounds();
    let r2 = Q::int(r).pow(2);
    let t1 = BigUint::from(t + 1);
    // t!/(t+1) >= c.num/c.den  <=>  t! · c.den >= (t+1) · c.num
    let ge = |c: &Q| &f * &c.den >= &t1 * &c.num;
    if ge(&e_hi.mul(&r2).mul(&b_hi.pow(t + 1))) {
        Some(true)
    } else if !ge(&e_lo.mul(&r2).mul(&b_lo.pow(t + 1))) {
        Some(false)
    } else {
        None
    }
}

/// `ln(t!/(t+1)) - ln(e·r²·B^{t+1})`.
fn log_margin(t: u64, ln_r: f64, ln_b: f64) -> f64 {
    let t = t as f64;
    ln_gamma(t + 1.0) - (t + 1.0).ln() - 1.0 - 2.0 * ln_r - (t + 1.0) * ln_b
}

struct Condition {
    r: u64,
    ln_b: f64,
    b_lo: Q,
    b_hi: Q,
}

impl Condition {
    fn exact(&self, t: u64) -> Option<bool> {
        exact_check(t, self.r, &self.b_lo, &self.b_hi)
    }

    fn holds(&self, t: u64) -> bool {
        self.exact(t)
            .unwrap_or_else(|| log_margin(t, (self.r as f64).ln(), self.ln_b) >= 0.0)
    }

    /// Smallest `t >= 1` satisfying the condition.
    ///
    /// The margin decreases while `(t+1)²/(t+2) < B` and increases after,
    /// starting below zero at `t = 0`, so the satisfying set is an upward
    /// closed interval found by bisection on the increasing branch.
    fn minimal(&self) -> (u64, Boundary) {
        let ln_r = (self.r as f64).ln();
        let rising = |t: u64| 2.0 * ((t + 1) as f64).ln() - ((t + 2) as f64).ln() > self.ln_b;
        let (mut lo, mut hi) = (0u64, 1u64);
        while !rising(hi) {
            hi *= 2;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if rising(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let start = lo.max(1);
        let ok = |t: u64| log_margin(t, ln_r, self.ln_b) >= 0.0;
        let mut hi = start;
        while !ok(hi) {
            hi = start + 2 * (hi - start) + 1;
        }
        let mut lo = start;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let mut t = lo;
        while !self.holds(t) {
            t += 1;
        }
        while t > 1 && self.holds(t - 1) {
            t -= 1;
        }
        let exact = self.exact(t) == Some(true) && self.exact(t - 1) == Some(false);
        (
            t,
            Boundary {
                fails: t - 1,
                holds: t,
                exact,
            },
        )
    }
}

fn check_r(r: u64) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("need r >= 2, got {r}")));
    }
    Ok(())
}

fn check_ratio(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need finite {name} >= 1, got {x}"
        )));
    }
    Ok(())
}

fn general_condition(mu: f64, r: u64) -> Condition {
    let b = Q::from_f64(mu).mul(&Q::int(r));
    Condition {
        r,
        ln_b: mu.ln() + (r as f64).ln(),
        b_lo: b.clone(),
        b_hi: b,
    }
}

/// `L = ln r + 1 + 1/e`.
pub fn girth4_log_term(r: u64) -> f64 {
    (r as f64).ln() + 1.0 + E.recip()
}

fn girth4_condition(eta: f64, r: u64) -> Condition {
    let l = girth4_log_term(r);
    let scaled = l * f64::from(1u32 << 20) * f64::from(1u32 << (L_SCALE_BITS - 20));
    let den = BigUint::one() << L_SCALE_BITS;
    let l_lo = Q {
        num: BigUint::from((scaled.floor() as u64).saturating_sub(1)),
        den: den.clone(),
    };
    let l_hi = Q {
        num: BigUint::from(scaled.ceil() as u64 + 1),
        den,
    };
    let eta_q = Q::from_f64(eta);
    Condition {
        r,
        ln_b: (eta * l).ln(),
        b_lo: eta_q.mul(&l_lo),
        b_hi: eta_q.mul(&l_hi),
    }
}

/// The general condition at `t`, exact when `t <= EXACT_MAX_T`.
pub fn general_condition_holds(mu: f64, r: u64, t: u64) -> bool {
    general_condition(mu, r).holds(t)
}

/// The general condition at `t` in exact arithmetic; `None` beyond [`EXACT_MAX_T`].
pub fn general_condition_exact(mu: f64, r: u64, t: u64) -> Option<bool> {
    general_condition(mu, r).exact(t)
}

/// The girth-four condition at `t`, exact (up to an enclosure of `ln r`) when
/// `t <= EXACT_MAX_T`.
pub fn girth4_condition_holds(eta: f64, r: u64, t: u64) -> bool {
    girth4_condition(eta, r).holds(t)
}

pub fn girth4_condition_exact(eta: f64, r: u64, t: u64) -> Option<bool> {
    girth4_condition(eta, r).exact(t)
}

/// `1 + ⌈eμr·(e²μ²r⁴)^{1/(eμr)}⌉`.
pub fn t_formula_general(mu: f64, r: u64) -> u64 {
    let x = E * mu * r as f64;
    let ln_base = 2.0 + 2.0 * mu.ln() + 4.0 * (r as f64).ln();
    1 + (x * (ln_base / x).exp()).ceil() as u64
}

/// Smallest `t` satisfying the general condition, together with the closed form.
pub fn min_t_general(mu: f64, r: u64) -> Result<MinT> {
    check_ratio("mu", mu)?;
    check_r(r)?;
    let (t, boundary) = general_condition(mu, r).minimal();
    Ok(MinT {
        t,
        closed_form: t_formula_general(mu, r),
        boundary,
    })
}

/// `h(η, r) = W((2/e)·(1/η + ln(ηL)/(ηL)))`.
pub fn h_girth4(eta: f64, r: u64) -> f64 {
    let el = eta * girth4_log_term(r);
    lambert_w(2.0 / E * (1.0 / eta + el.ln() / el)).expect("argument is positive")
}

/// `1 + ⌈e^{1+h(η,r)}·η·L⌉`.
pub fn t_formula_girth4(eta: f64, r: u64) -> u64 {
    let h = h_girth4(eta, r);
    1 + ((1.0 + h).exp() * eta * girth4_log_term(r)).ceil() as u64
}

/// Smallest `t` satisfying the girth-four condition, together with the closed form.
pub fn min_t_girth4(eta: f64, r: u64) -> Result<MinT> {
    check_ratio("eta", eta)?;
    check_r(r)?;
    let (t, boundary) = girth4_condition(eta, r).minimal();
    Ok(MinT {
        t,
        closed_form: t_formula_girth4(eta, r),
        boundary,
    })
}

/// Principal branch of Lambert W on `[-1/e, ∞)` by Halley iteration.
pub fn lambert_w(x: f64) -> Result<f64> {
    let branch = -E.recip();
    if x.is_nan() || x < branch {
        return Err(Error::InvalidArgument(format!(
            "W(x) needs x >= -1/e, got {x}"
        )));
    }
    if x == branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < -0.25 {
        let p = (2.0 * (E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x <= E {
        (1.0 + x).ln() * 0.8
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// `c = e^{1 + W(2/e)}`, the leading constant of the girth-four bound.
pub fn lambert_c() -> f64 {
    (1.0 + lambert_w(2.0 / E).expect("2/e is in the domain")).exp()
}

/// The partition condition `t!/(t+1)·(k/Δ)^t ≥ e·r`, decided conservatively: `true` only
/// when it holds for the upper enclosure of `e`.
pub fn partition_condition_holds(max_delta: u64, r: u64, t: u64, k: u64) -> bool {
    if max_delta == 0 {
        return true;
    }
    let t32 = u32::try_from(t).expect("t fits in u32");
    let (_, e_hi) = e_bounds();
    let lhs = factorial(t) * BigUint::from(k).pow(t32) * &e_hi.den;
    let rhs = BigUint::from(t + 1) * BigUint::from(max_delta).pow(t32) * r * &e_hi.num;
    lhs >= rhs
}

fn check_partition_args(max_delta: u64, r: u64, t: u64) -> Result<()> {
    check_r(r)?;
    if t == 0 || max_delta < t {
        return Err(Error::InvalidArgument(format!(
            "need Delta >= t >= 1, got Delta = {max_delta}, t = {t}"
        )));
    }
    Ok(())
}

/// `k = ⌈(eΔ/t)·((t+1)/√(2πt)·e·r)^{1/t}⌉`, raised if rounding left the
/// partition condition unsatisfied.
pub fn partition_k(max_delta: u64, r: u64, t: u64) -> Result<u64> {
    check_partition_args(max_delta, r, t)?;
    let tf = t as f64;
    let inner = (tf + 1.0) / (2.0 * PI * tf).sqrt() * E * r as f64;
    let mut k = (E * max_delta as f64 / tf * inner.powf(1.0 / tf))
        .ceil()
        .max(1.0) as u64;
    while !partition_condition_holds(max_delta, r, t, k) {
        k += 1;
    }
    Ok(k)
}

/// `⌈(nδ/r)/k⌉` with `k = partition_k(Δ, r, t)`: the largest colour class of
/// the partition lemma has at least this many edges.
pub fn shallow_size_guarantee(n: u64, r: u64, t: u64, delta: u64, max_delta: u64) -> Result<u64> {
    let k = partition_k(max_delta, r, t)?;
    Ok((n * delta).div_ceil(r * k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodegreeThresholds {
    pub k: i64,
    /// `n/k - 1`: the gadgets reach this co-degree without a solution.
    pub uniform_lb: Ratio<i64>,
    /// `n/k`: sufficient for `r`-uniform hosts.
    pub uniform_sufficient: Ratio<i64>,
    pub partite_lb: Ratio<i64>,
    /// `⌈n/k⌉ + 1`: sufficient for `r`-partite hosts with parts of size `n`.
    pub partite_sufficient: Ratio<i64>,
}

pub fn codegree_thresholds(n: u64, r: u64, t: u64) -> Result<CodegreeThresholds> {
    if r < 2 || t < 2 {
        return Err(Error::InvalidArgument(format!(
            "need r >= 2 and t >= 2, got r = {r}, t = {t}"
        )));
    }
    let k = ((r - 1) * t + 1) as i64;
    let nk = Ratio::new(n as i64, k);
    Ok(CodegreeThresholds {
        k,
        uniform_lb: nk - 1,
        uniform_sufficient: nk,
        partite_lb: nk - 1,
        partite_sufficient: nk.ceil() + 1,
    })
}

/// Co-degree threshold for perfect matchings in `r`-uniform hosts on `n`
/// vertices (Rödl, Ruciński and Szemerédi).
pub fn rrs_matching_threshold(n: u64, r: u64) -> Result<i64> {
    if r < 3 || !n.is_multiple_of(r) {
        return Err(Error::InvalidArgument(format!(
            "need r >= 3 and r | n, got n = {n}, r = {r}"
        )));
    }
    let (n, ri) = (n as i64, r as i64);
    // Work in halves so every case stays integral.
    let twice = if r.is_multiple_of(4) && (n / ri) % 2 == 1 {
        n + 6 - 2 * ri
    } else if r % 2 == 1 && n % 2 == 1 && ((n - 1) / 2) % 2 == 1 {
        n + 5 - 2 * ri
    } else if r % 2 == 1 && n % 2 == 1 {
        n + 3 - 2 * ri
    } else {
        n + 4 - 2 * ri
    };
    Ok(twice / 2)
}

/// `|B| ≤ t|A|`, `tδ_A + δ_B ≥ |A|` and `δ_A + tδ_B ≥ |B|`.
pub fn bipartite_sufficient(size_a: u64, size_b: u64, delta_a: u64, delta_b: u64, t: u64) -> bool {
    size_b <= t * size_a && t * delta_a + delta_b >= size_a && delta_a + t * delta_b >= size_b
}

/// A named formula evaluation for display.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub formula: String,
    pub params: BTreeMap<String, String>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied_at: Option<Boundary>,
}

impl BoundReport {
    pub fn new(formula: &str, params: &[(&str, String)], value: impl fmt::Display) -> Self {
        BoundReport {
            formula: formula.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            value: value.to_string(),
            closed_form: None,
            satisfied_at: None,
        }
    }

    pub fn from_min_t(formula: &str, params: &[(&str, String)], m: MinT) -> Self {
        BoundReport {
            closed_form: Some(m.closed_form),
            satisfied_at: Some(m.boundary),
            ..Self::new(formula, params, m.t)
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>();
        writeln!(f, "{:<14}{}", "formula", self.formula)?;
        writeln!(f, "{:<14}{}", "params", params.join(" "))?;
        writeln!(f, "{:<14}{}", "value", self.value)?;
        if let Some(c) = self.closed_form {
            writeln!(f, "{:<14}{c}", "closed_form")?;
        }
        if let Some(b) = self.satisfied_at {
            let how = if b.exact { "exact" } else { "float" };
            writeln!(
                f,
                "{:<14}fails at {}, holds at {} ({how})",
                "boundary", b.fails, b.holds
            )?;
        }
        Ok(())
    }
}

/// Float value of a small rational, for display.
pub fn ratio_to_f64(x: &Ratio<i64>) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_condition_small_case() {
        let m = min_t_general(1.0, 2).unwrap();
        assert_eq!(m.t, 9);
        assert!(m.boundary.exact);
        assert!(m.closed_form >= m.t);
    }

    #[test]
    fn lambert_fixed_points() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(E).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambert_w(-E.recip()).unwrap() + 1.0).abs() < 1e-12);
        assert!(lambert_w(-0.5).is_err());
        assert!((lambert_c() - 4.319).abs() < 1e-3);
    }

    #[test]
    fn factorial_matches_product() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(20), BigUint::from(2_432_902_008_176_640_000u64));
        let direct = (1..=100u32).fold(BigUint::one(), |a, i| a * i);
        assert_eq!(factorial(100), direct);
    }

    #[test]
    fn partition_k_example() {
        assert_eq!(partition_k(3, 3, 1).unwrap(), 54);
        assert!(partition_k(1, 3, 2).is_err());
    }

    #[test]
    fn codegree_threshold_values() {
        let c = codegree_thresholds(15, 3, 2).unwrap();
        assert_eq!((c.k, c.uniform_sufficient), (5, Ratio::from_integer(3)));
        let c = codegree_thresholds(14, 3, 2).unwrap();
        assert_eq!(c.uniform_sufficient, Ratio::new(14, 5));
        let c = codegree_thresholds(10, 2, 2).unwrap();
        assert_eq!(c.partite_sufficient, Ratio::from_integer(5));
    }

    #[test]
    fn rrs_cases() {
        assert_eq!(rrs_matching_threshold(12, 4).unwrap(), 5);
        assert_eq!(rrs_matching_threshold(9, 3).unwrap(), 3);
        assert_eq!(rrs_matching_threshold(12, 6).unwrap(), 2);
        assert_eq!(rrs_matching_threshold(15, 3).unwrap(), 7);
        assert!(rrs_matching_threshold(10, 3).is_err());
    }

    #[test]
    fn bipartite_condition() {
        assert!(bipartite_sufficient(9, 9, 3, 3, 2));
        assert!(!bipartite_sufficient(13, 13, 4, 4, 2));
        assert!(bipartite_sufficient(10, 10, 5, 5, 1));
    }
}
