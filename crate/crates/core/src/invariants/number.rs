//! Closed forms for torus knots, continued fractions and Fibonacci numbers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::InvariantError;

/// Crossing number `min{m(q-1), q(m-1)}` of the torus knot or link `T(m,q)`,
/// together with a flag that is set when `m` and `q` are not coprime (the
/// closure is then a torus link with `gcd(m,q)` components).
pub fn torus_crossing_number(m: u64, q: u64) -> Result<(u64, bool), InvariantError> {
    if m < 2 || q < 2 {
        return Err(InvariantError::TorusParameters(m, q));
    }
    let a = m.checked_mul(q - 1).ok_or(InvariantError::Overflow)?;
    let b = q.checked_mul(m - 1).ok_or(InvariantError::Overflow)?;
    Ok((a.min(b), m.gcd(&q) != 1))
}

/// `|Δ(-1)|` for the torus knot `T(m,q)` when exactly one parameter is even:
/// the value is the odd parameter.
pub fn torus_det_minus_one(m: u64, q: u64) -> Result<u64, InvariantError> {
    if m < 2 || q < 2 || m.gcd(&q) != 1 {
        return Err(InvariantError::TorusParameters(m, q));
    }
    match (m % 2, q % 2) {
        (0, 1) => Ok(q),
        (1, 0) => Ok(m),
        _ => Err(InvariantError::BothOdd(m, q)),
    }
}

/// Regular continued fraction of `numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub quotients: Vec<u64>,
    pub numerator: u64,
    pub denominator: u64,
}

impl ContinuedFraction {
    pub fn quotient_sum(&self) -> u64 {
        self.quotients.iter().sum()
    }

    /// Folds the quotients back into a reduced fraction.
    pub fn evaluate(&self) -> (u128, u128) {
        let mut num: u128 = 1;
        let mut den: u128 = 0;
        for &a in self.quotients.iter().rev() {
            (num, den) = (a as u128 * num + den, num);
        }
        (num, den)
    }
}

/// Euclidean expansion of `num/den` for coprime `num > den >= 1`.
pub fn continued_fraction(num: u64, den: u64) -> Result<ContinuedFraction, InvariantError> {
    if den == 0 || num <= den || num.gcd(&den) != 1 {
        return Err(InvariantError::Fraction(num, den));
    }
    let mut quotients = Vec::new();
    let (mut a, mut b) = (num, den);
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
    }
    Ok(ContinuedFraction { quotients, numerator: num, denominator: den })
}

/// Fibonacci numbers indexed with `f(0) = f(1) = 1`.
pub fn fibonacci(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_crossings() {
        assert_eq!(torus_crossing_number(3, 2).unwrap(), (3, false));
        assert_eq!(torus_crossing_number(8, 5).unwrap(), (32, false));
        assert_eq!(torus_crossing_number(2, 7).unwrap(), (7, false));
        assert_eq!(torus_crossing_number(2, 4).unwrap(), (4, true));
        assert!(torus_crossing_number(1, 5).is_err());
    }

    #[test]
    fn torus_determinants() {
        assert_eq!(torus_det_minus_one(2, 3).unwrap(), 3);
        assert_eq!(torus_det_minus_one(8, 5).unwrap(), 5);
        assert_eq!(torus_det_minus_one(3, 5), Err(InvariantError::BothOdd(3, 5)));
        assert!(torus_det_minus_one(2, 4).is_err());
    }

    #[test]
    fn continued_fractions() {
        let cf = continued_fraction(8, 5).unwrap();
        assert_eq!(cf.quotients, vec![1, 1, 1, 2]);
        assert_eq!(cf.quotient_sum(), 5);
        assert_eq!(cf.evaluate(), (8, 5));
        assert_eq!(continued_fraction(3, 1).unwrap().quotients, vec![3]);
        assert_eq!(continued_fraction(3, 2).unwrap().quotients, vec![1, 2]);
        assert!(continued_fraction(4, 2).is_err());
        assert!(continued_fraction(2, 3).is_err());
        assert!(continued_fraction(5, 0).is_err());
    }

    #[test]
    fn fibonacci_indexing() {
        let f: Vec<u32> = (0..8).map(|n| fibonacci(n).try_into().unwrap()).collect();
        assert_eq!(f, vec![1, 1, 2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn fibonacci_quotient_sums() {
        for n in 2..=30u32 {
            let a: u64 = fibonacci(n).try_into().unwrap();
            let b: u64 = fibonacci(n - 1).try_into().unwrap();
            let cf = continued_fraction(a, b).unwrap();
            assert_eq!(cf.quotient_sum(), n as u64, "n = {n}");
            assert_eq!(cf.evaluate(), (a as u128, b as u128));
        }
    }
}
