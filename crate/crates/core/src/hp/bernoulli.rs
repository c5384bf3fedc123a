use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

use crate::error::{Result, ZetaError};

// B_0, B_2, B_4, ... grown on demand; never shrinks.
fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Exact even-index Bernoulli number `B_{2k}`, `k >= 1`.
///
/// Uses `sum_{j=0}^{n} C(n+1, j) B_j = 0` restricted to the nonzero terms
/// (`B_1 = -1/2`, odd indices above one vanish).
pub fn bernoulli_even(k: usize) -> Result<Rational> {
    if k == 0 {
        return Err(ZetaError::InvalidInput("bernoulli_even needs k >= 1".into()));
    }
    let mut table = cache().lock().expect("bernoulli cache poisoned");
    while table.len() <= k {
        let next = table.len();
        let n = 2 * next as u32;
        let mut acc = Rational::from(1); // C(n+1,0)·B_0
        acc -= Rational::from((Integer::from(n + 1), 2)); // C(n+1,1)·B_1
        for (i, b) in table.iter().enumerate().skip(1) {
            let j = 2 * i as u32;
            acc += Rational::from(Integer::from(Integer::binomial_u(n + 1, j)) * b);
        }
        let b = -acc / Rational::from(n + 1);
        table.push(b);
    }
    Ok(table[k].clone())
}

/// Pre-populates the cache through `B_{2k}`.
pub fn warm(k: usize) {
    if k > 0 {
        let _ = bernoulli_even(k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_even(1).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli_even(2).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli_even(3).unwrap(), Rational::from((1, 42)));
        assert_eq!(bernoulli_even(6).unwrap(), Rational::from((-691, 2730)));
        assert!(bernoulli_even(0).is_err());
    }

    #[test]
    fn signs_alternate() {
        for k in 1..=40 {
            let b = bernoulli_even(k).unwrap();
            let expected_positive = k % 2 == 1;
            assert_eq!(b > 0, expected_positive, "k = {k}");
        }
    }

    #[test]
    fn concurrent_callers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || bernoulli_even(20 + t).unwrap()))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (t, b) in got.iter().enumerate() {
            assert_eq!(*b, bernoulli_even(20 + t).unwrap());
        }
    }
}
