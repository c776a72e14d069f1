//! Exact combinatorics and polynomial identity checks.
//!
//! Everything here runs on arbitrary-precision integers and rationals
//! (`num-bigint` / `num-rational`), except [`tri_sum`] whose fractional
//! exponents force a floating-point evaluation.

mod kovalevskaya;
mod poly;
mod tri;

pub use kovalevskaya::{kovalevskaya_coeff, kovalevskaya_coeff_recursive, kovalevskaya_ratio};
pub use poly::ExactPoly;
pub use tri::{leibniz_oracle, power_specialization_check, second_part_residual, tri2_rhs, tri_sum, TriSumResult};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("multinomial parts sum to {sum}, which exceeds n = {n}")]
    PartsExceedTotal { n: u64, sum: u64 },
    #[error("tri_sum requires n > 1 and k > 1 (got n = {n}, k = {k})")]
    TriSumDomain { n: u32, k: u32 },
    #[error("at least one factor is required")]
    NoFactors,
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-m+1)` = `n!/(n-m)!`.
pub fn falling_factorial(n: u64, m: u64) -> BigInt {
    if m > n {
        return BigInt::from(0);
    }
    ((n - m + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `n! / (i_1! ... i_k! (n - Σi)!)`.
///
/// The remainder `n - Σi` is an implicit last part, so an empty `parts`
/// list gives 1.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt, ExactError> {
    let sum: u64 = parts.iter().sum();
    if sum > n {
        return Err(ExactError::PartsExceedTotal { n, sum });
    }
    // product of binomials avoids dividing huge factorials
    let mut acc = BigInt::one();
    let mut remaining = n;
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multinomial_by_factorials(n: u64, parts: &[u64]) -> BigInt {
        let rest = n - parts.iter().sum::<u64>();
        let denom = parts.iter().chain(std::iter::once(&rest)).fold(BigInt::one(), |acc, &p| acc * factorial(p));
        factorial(n) / denom
    }

    #[test]
    fn multinomial_small_values() {
        assert_eq!(multinomial(4, &[1, 2]).unwrap(), BigInt::from(12));
        assert_eq!(multinomial(9, &[]).unwrap(), BigInt::one());
        assert_eq!(multinomial(0, &[]).unwrap(), BigInt::one());
        assert_eq!(multinomial(7, &[3, 2, 2]).unwrap(), BigInt::from(210));
        assert_eq!(multinomial(7, &[3, 2, 2]).unwrap(), multinomial_by_factorials(7, &[3, 2, 2]));
    }

    #[test]
    fn multinomial_rejects_overfull_parts() {
        assert_eq!(multinomial(3, &[2, 2]), Err(ExactError::PartsExceedTotal { n: 3, sum: 4 }));
    }

    #[test]
    fn multinomial_matches_factorial_oracle_on_large_inputs() {
        let parts = [11, 7, 0, 13];
        assert_eq!(multinomial(40, &parts).unwrap(), multinomial_by_factorials(40, &parts));
    }

    #[test]
    fn falling_factorial_edges() {
        assert_eq!(falling_factorial(5, 0), BigInt::one());
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(5, 5), BigInt::from(120));
        assert_eq!(falling_factorial(2, 3), BigInt::from(0));
    }

    proptest::proptest! {
        #[test]
        fn multinomial_is_symmetric_under_permutation(
            mut parts in proptest::collection::vec(0u64..6, 0..5),
            extra in 0u64..5,
            rot in 0usize..5,
        ) {
            let n = parts.iter().sum::<u64>() + extra;
            let base = multinomial(n, &parts).unwrap();
            if !parts.is_empty() {
                let r = rot % parts.len();
                parts.rotate_left(r);
            }
            parts.reverse();
            proptest::prop_assert_eq!(multinomial(n, &parts).unwrap(), base);
        }
    }
}
