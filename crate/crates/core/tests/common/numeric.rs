//! Exact rational enclosures of `e`, `1/e` and `ln r`, and interval checks
//! of the threshold inequalities written directly in their original form.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Bits of the fixed-point grid used for `ln r + 1 + 1/e`.
const FP_BITS: usize = 160;

/// `[lo, hi]` containing `e`, from `Σ_{k≤40} 1/k!` plus the tail bound
/// `2/41!`.
pub fn e_interval() -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 1..=41u32 {
        sum += &term;
        term /= BigRational::from_integer(BigInt::from(k));
    }
    let hi = &sum + &term * BigRational::from_integer(2.into());
    (sum, hi)
}

/// `[lo, hi]` containing `2·atanh(y)`, `0 <= y <= 1/3`.
fn two_atanh(y: &BigRational) -> (BigRational, BigRational) {
    let y2 = y * y;
    let mut pow = y.clone();
    let mut sum = BigRational::zero();
    let terms = 60u32;
    for k in 0..terms {
        sum += &pow / BigRational::from_integer(BigInt::from(2 * k + 1));
        pow *= &y2;
    }
    let one = BigRational::one();
    let tail = &pow / (BigRational::from_integer(BigInt::from(2 * terms + 1)) * (&one - &y2));
    let two = BigRational::from_integer(2.into());
    (&sum * &two, (sum + tail) * two)
}

/// `[lo, hi]` containing `ln r`, via `r = 2^a·m` with `m ∈ [1, 2)`.
pub fn ln_interval(r: u64) -> (BigRational, BigRational) {
    assert!(r >= 1);
    let a = 63 - r.leading_zeros() as i64;
    let p = 1u64 << a;
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let (l2_lo, l2_hi) = two_atanh(&q(1, 3));
    let (m_lo, m_hi) = two_atanh(&q(r as i64 - p as i64, r as i64 + p as i64));
    let a = BigRational::from_integer(a.into());
    (&a * l2_lo + m_lo, a * l2_hi + m_hi)
}

fn floor_fp(x: &BigRational) -> BigUint {
    let scaled = x * BigRational::from_integer(BigInt::one() << FP_BITS);
    scaled.floor().to_integer().to_biguint().expect("nonnegative")
}

fn ceil_fp(x: &BigRational) -> BigUint {
    let scaled = x * BigRational::from_integer(BigInt::one() << FP_BITS);
    scaled.ceil().to_integer().to_biguint().expect("nonnegative")
}

fn split(x: &BigRational) -> (BigUint, BigUint) {
    assert!(!x.is_negative());
    (x.numer().to_biguint().unwrap(), x.denom().to_biguint().unwrap())
}

/// Precomputed enclosures shared across many checks.
pub struct Enclosures {
    e_lo: (BigUint, BigUint),
    e_hi: (BigUint, BigUint),
    inv_e: (BigRational, BigRational),
}

impl Enclosures {
    pub fn new() -> Self {
        let (lo, hi) = e_interval();
        let one = BigRational::one();
        let inv_e = (&one / &hi, &one / &lo);
        Enclosures {
            e_lo: split(&lo),
            e_hi: split(&hi),
            inv_e,
        }
    }

    /// `[floor, ceil]` of `(ln r + 1 + 1/e)·2^FP_BITS`.
    pub fn girth_term_fp(&self, r: u64) -> (BigUint, BigUint) {
        let (ln_lo, ln_hi) = ln_interval(r);
        let one = BigRational::one();
        let lo = ln_lo + &one + &self.inv_e.0;
        let hi = ln_hi + &one + &self.inv_e.1;
        (floor_fp(&lo), ceil_fp(&hi))
    }

    /// `t!/(t+1) ≥ e·μ^{t+1}·r^{t+3}`, given `fact = t!`. `None` only if the
    /// enclosure of `e` cannot decide.
    pub fn general(&self, fact: &BigUint, t: u64, mu: u64, r: u64) -> Option<bool> {
        let t32 = t as u32;
        let core = BigUint::from(t + 1) * BigUint::from(mu).pow(t32 + 1) * BigUint::from(r).pow(t32 + 3);
        self.decide(fact, &core, &core, &BigUint::one())
    }

    /// `t!/(t+1) ≥ e·r²·η^{t+1}·(ln r + 1 + 1/e)^{t+1}`.
    pub fn girth4(&self, fact: &BigUint, t: u64, eta: u64, r: u64, l_fp: &(BigUint, BigUint)) -> Option<bool> {
        let t32 = t as u32;
        let base = BigUint::from(t + 1) * BigUint::from(r).pow(2) * BigUint::from(eta).pow(t32 + 1);
        let lo = &base * l_fp.0.pow(t32 + 1);
        let hi = &base * l_fp.1.pow(t32 + 1);
        let scale = BigUint::one() << (FP_BITS * (t as usize + 1));
        self.decide(fact, &lo, &hi, &scale)
    }

    /// Compares `left` with `e·x/scale` for `x ∈ [lo, hi]`.
    fn decide(&self, left: &BigUint, lo: &BigUint, hi: &BigUint, scale: &BigUint) -> Option<bool> {
        let lhs = |den: &BigUint| left * den * scale;
        if lhs(&self.e_hi.1) >= &self.e_hi.0 * hi {
            Some(true)
        } else if lhs(&self.e_lo.1) < &self.e_lo.0 * lo {
            Some(false)
        } else {
            None
        }
    }

    /// `t!/(t+1)·(k/Δ)^t ≥ e·r`.
    pub fn partition(&self, t: u64, max_delta: u64, r: u64, k: u64) -> Option<bool> {
        let fact: BigUint = (1..=t).map(BigUint::from).product();
        let t32 = t as u32;
        let left = fact * BigUint::from(k).pow(t32);
        let core = BigUint::from(t + 1) * BigUint::from(max_delta).pow(t32) * r;
        self.decide(&left, &core, &core, &BigUint::one())
    }
}

/// Float value of a rational, for tolerances.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite")
}
