/// `C(n, k)`, or `None` on `u128` overflow.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(15, 3), Some(455));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!(binomial(200, 100).is_none());
    }
}
