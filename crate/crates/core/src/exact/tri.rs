//! The weighted multinomial sum bound and the `∂_t^n(t^n f_1⋯f_k)` expansion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{binomial, falling_factorial, multinomial, ExactError, ExactPoly};
use crate::numerics::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriSumResult {
    pub n: u32,
    pub k: u32,
    pub sum: f64,
    /// `sum / n^(n - 2/3)`
    pub bound_ratio: f64,
}

/// Calls `visit` for every tuple of `len` integers in `lo..` whose sum is at
/// most `budget`.
fn for_each_tuple(len: usize, lo: u32, budget: u32, visit: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, len: usize, lo: u32, budget: u32, visit: &mut impl FnMut(&[u32])) {
        if buf.len() == len {
            visit(buf);
            return;
        }
        let mut v = lo;
        while v <= budget {
            buf.push(v);
            rec(buf, len, lo, budget - v, visit);
            buf.pop();
            v += 1;
        }
    }
    let mut buf = Vec::with_capacity(len);
    rec(&mut buf, len, lo, budget, visit);
}

/// `i^(i - 2/3)` for `i ≥ 1`.
fn weight(i: u32) -> f64 {
    let x = f64::from(i);
    x.powf(x - 2.0 / 3.0)
}

/// Enumerates `Σ multinomial(n; i_1..i_k) Π i_m^(i_m-2/3) (n-Σi)^(n-Σi-2/3)`
/// over `i_m > 0`, `Σ i_m < n`.
pub fn tri_sum(n: u32, k: u32) -> Result<TriSumResult, ExactError> {
    if n < 2 || k < 2 {
        return Err(ExactError::TriSumDomain { n, k });
    }
    let mut acc = CompensatedSum::new();
    // every part and the remainder are >= 1, so the k parts sum to <= n - 1
    for_each_tuple(k as usize, 1, n - 1, &mut |parts| {
        let s: u32 = parts.iter().sum();
        let parts64: Vec<u64> = parts.iter().map(|&p| u64::from(p)).collect();
        let coeff = multinomial(u64::from(n), &parts64).expect("parts bounded by n").to_f64().unwrap_or(f64::INFINITY);
        let w: f64 = parts.iter().map(|&p| weight(p)).product::<f64>() * weight(n - s);
        acc.add(coeff * w);
    });
    let sum = acc.value();
    let bound_ratio = sum / f64::from(n).powf(f64::from(n) - 2.0 / 3.0);
    Ok(TriSumResult { n, k, sum, bound_ratio })
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// `∂_t^i (t^i f)`, using `∂^i t^(i+e) = (i+e)!/e! t^e` termwise.
fn weighted_derivative(i: u32, f: &ExactPoly) -> ExactPoly {
    let mut out = ExactPoly::zero();
    for (e, c) in f.terms() {
        let scale = falling_factorial(u64::from(i + e), u64::from(i));
        out = &out + &ExactPoly::monomial(c * rat(scale), e);
    }
    out
}

/// Table `[l][i] = ∂^i(t^i f_l)` for `i ≤ n`.
fn weighted_table(n: u32, factors: &[ExactPoly]) -> Vec<Vec<ExactPoly>> {
    factors.iter().map(|f| (0..=n).map(|i| weighted_derivative(i, f)).collect()).collect()
}

/// Inner multinomial sum shared by the expansion and its specialisations:
/// `Σ_{Σi ≤ rest} multinomial(rest; i) Π_{l<k} D[l][i_l] · D[k-1][rest - Σi]`.
fn multinomial_block(rest: u32, table: &[Vec<ExactPoly>]) -> ExactPoly {
    let k = table.len();
    let mut out = ExactPoly::zero();
    for_each_tuple(k - 1, 0, rest, &mut |idx| {
        let s: u32 = idx.iter().sum();
        let idx64: Vec<u64> = idx.iter().map(|&i| u64::from(i)).collect();
        let c = multinomial(u64::from(rest), &idx64).expect("bounded tuple");
        let mut term = table[k - 1][(rest - s) as usize].scale(&rat(c));
        for (l, &i) in idx.iter().enumerate() {
            term = &term * &table[l][i as usize];
        }
        out = &out + &term;
    });
    out
}

/// Right-hand side of the expansion
/// `∂^n(t^n f_1⋯f_k) = Σ_m (-1)^m n!/(n-m)! C(k-1,m) Σ_i multinomial(n-m; i) Π ∂^{i_l}(t^{i_l} f_l)`.
pub fn tri2_rhs(n: u32, factors: &[ExactPoly]) -> Result<ExactPoly, ExactError> {
    if factors.is_empty() {
        return Err(ExactError::NoFactors);
    }
    let k = factors.len() as u32;
    let table = weighted_table(n, factors);
    let mut out = ExactPoly::zero();
    for m in 0..=(k - 1).min(n) {
        let mut c = falling_factorial(u64::from(n), u64::from(m)) * binomial(u64::from(k - 1), u64::from(m));
        if m % 2 == 1 {
            c = -c;
        }
        let block = multinomial_block(n - m, &table);
        out = &out + &block.scale(&rat(c));
    }
    Ok(out)
}

/// Ground truth for [`tri2_rhs`]: multiply out `t^n Π f_l` and differentiate
/// `n` times.
pub fn leibniz_oracle(n: u32, factors: &[ExactPoly]) -> Result<ExactPoly, ExactError> {
    if factors.is_empty() {
        return Err(ExactError::NoFactors);
    }
    let product = factors.iter().fold(ExactPoly::one(), |acc, f| &acc * f);
    Ok(product.shift(n).nth_derivative(n))
}

/// `LHS - RHS` of the rearranged equal-factor identity with `f = h^k`:
///
/// `k f^{(k-1)/k} ∂^n(t^n f^{1/k}) = ∂^n(t^n f) - Σ_{m≥1} (...) - Σ_{0≤i_l<n, Σi>0} (...)`.
///
/// Zero for every `n ≥ 1`. At `n = 0` the `k` single-index terms collapse
/// into one tuple, so the literal statement is off by `(k-1) h^k`.
pub fn second_part_residual(n: u32, k: u32, h: &ExactPoly) -> ExactPoly {
    assert!(k >= 1, "k must be positive");
    let table = weighted_table(n, &vec![h.clone(); k as usize]);
    let lhs = (&h.pow(k - 1) * &table[0][n as usize]).scale(&rat(BigInt::from(k)));

    let mut rhs = weighted_derivative(n, &h.pow(k));
    for m in 1..=(k - 1).min(n) {
        let mut c = falling_factorial(u64::from(n), u64::from(m)) * binomial(u64::from(k - 1), u64::from(m));
        if m % 2 == 1 {
            c = -c;
        }
        rhs = &rhs - &multinomial_block(n - m, &table).scale(&rat(c));
    }
    if n > 0 {
        let mut tail = ExactPoly::zero();
        for_each_tuple((k - 1) as usize, 0, n, &mut |idx| {
            let s: u32 = idx.iter().sum();
            if s == 0 || idx.iter().any(|&i| i >= n) {
                return;
            }
            let idx64: Vec<u64> = idx.iter().map(|&i| u64::from(i)).collect();
            let c = multinomial(u64::from(n), &idx64).expect("bounded tuple");
            let mut term = table[0][(n - s) as usize].scale(&rat(c));
            for &i in idx {
                term = &term * &table[0][i as usize];
            }
            tail = &tail + &term;
        });
        rhs = &rhs - &tail;
    }
    &lhs - &rhs
}

/// Checks both equal-factor specialisations of the expansion for `h`:
/// the power form `∂^n(t^n h^k)` against the oracle, and the rearranged
/// `f^{1/k}` form with `f = h^k` (meaningful for `n ≥ 1`; vacuous at `n = 0`).
pub fn power_specialization_check(n: u32, k: u32, h: &ExactPoly) -> bool {
    if k == 0 {
        return false;
    }
    let factors = vec![h.clone(); k as usize];
    let first = match (tri2_rhs(n, &factors), leibniz_oracle(n, &factors)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    let second = n == 0 || second_part_residual(n, k, h).is_zero();
    first && second
}
