//! Exact rationals and the few combinatorial numbers the engine needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * rat(k as i64))
}

/// Falling factorial `n (n-1) ... (n-k+1)` for integer `n` of either sign.
pub fn falling(n: i64, k: u64) -> Rational {
    (0..k as i64).fold(Rational::one(), |acc, j| acc * rat(n - j))
}

/// Generalized binomial coefficient `C(n, k) = n (n-1) ... (n-k+1) / k!`, valid for negative `n`.
pub fn binomial(n: i64, k: u64) -> Rational {
    falling(n, k) / factorial(k)
}

/// Prints a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_unit(q: &Rational) -> bool {
    q.is_one()
}
