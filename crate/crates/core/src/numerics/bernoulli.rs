//! Exact coefficients for the power series of the Lobachevsky function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Tangent numbers T_1..T_n (1, 2, 16, 272, ...), by the Brent–Harvey
/// in-place recurrence.
pub fn tangent_numbers(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![];
    }
    let mut t: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    t.remove(0);
    t
}

/// Bernoulli numbers B_2, B_4, ..., B_{2n}.
pub fn bernoulli_even(n: usize) -> Vec<BigRational> {
    tangent_numbers(n)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let k = i + 1;
            let four_k = BigInt::one() << (2 * k);
            let num = BigInt::from(2 * k) * t;
            let den = &four_k * (&four_k - BigInt::one());
            let b = BigRational::new(num, den);
            if k % 2 == 1 {
                b
            } else {
                -b
            }
        })
        .collect()
}

/// Coefficients c_n, n = 1..=count, with
/// Λ(θ) = θ − θ log|2θ| + Σ c_n θ^{2n+1}, c_n = ζ(2n) / (n (2n+1) π^{2n}).
pub fn lobachevsky_coefficients(count: usize) -> Vec<BigRational> {
    let tn = tangent_numbers(count);
    let mut fact = BigInt::one();
    let mut out = Vec::with_capacity(count);
    for (i, t) in tn.into_iter().enumerate() {
        let n = i + 1;
        fact *= BigInt::from((2 * n - 1) * (2 * n));
        let pow4 = BigInt::one() << (2 * n);
        let den = (pow4 - BigInt::one()) * &fact * BigInt::from(2 * n + 1);
        out.push(BigRational::new(t, den));
    }
    out
}

/// ζ(2n) = |B_{2n}| (2π)^{2n} / (2 (2n)!), returned as the rational factor
/// multiplying π^{2n}.
pub fn zeta_even_over_pi_power(n: usize) -> BigRational {
    let b = bernoulli_even(n).pop().unwrap().abs();
    let mut fact = BigInt::one();
    for j in 1..=2 * n {
        fact *= BigInt::from(j);
    }
    b * BigRational::from_integer(BigInt::one() << (2 * n)) / BigRational::from_integer(fact * 2)
}
