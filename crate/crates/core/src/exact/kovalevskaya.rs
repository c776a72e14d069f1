//! Double Taylor coefficients of the biharmonic heat flow from `1/(1+x^2)`.
//!
//! With `u = Σ a(m,l) t^m/m! x^l/l!`, the equation `∂_t u = -∂_x^4 u` forces
//! `a(m+1,l) = -a(m,l+4)`, and the datum gives `a(0,2n) = (-1)^n (2n)!`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::factorial;

/// Closed form `a(m,2n) = (-1)^(m+n) (4m+2n)!`; zero for odd `l`.
pub fn kovalevskaya_coeff(m: u64, l: u64) -> BigInt {
    if l % 2 == 1 {
        return BigInt::zero();
    }
    let n = l / 2;
    let mag = factorial(4 * m + l);
    if (m + n) % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// Same coefficient, obtained by walking the recursion back to the datum.
pub fn kovalevskaya_coeff_recursive(m: u64, l: u64) -> BigInt {
    if m == 0 {
        if l % 2 == 1 {
            return BigInt::zero();
        }
        let f = factorial(l);
        return if (l / 2) % 2 == 1 { -f } else { f };
    }
    -kovalevskaya_coeff_recursive(m - 1, l + 4)
}

/// `(8n)! / (n! (4n)!)`, the normalised size of `a(n, 4n)`.
pub fn kovalevskaya_ratio(n: u64) -> BigRational {
    BigRational::new(factorial(8 * n), factorial(n) * factorial(4 * n))
}
