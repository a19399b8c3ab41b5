//! Euler polynomials `E_n(x)`, defined by `2 e^{xt} / (e^t + 1) = Σ E_n(x) t^n / n!`,
//! and Euler numbers `E_n = E_n(0)`.
//!
//! These are not the secant numbers: `E_1 = -1/2`, `E_3 = 1/4` and every
//! `E_{2k}` with `k ≥ 1` vanishes.
//!
//! The numbers come from `E_n = -(1/2) Σ_{k<n} binom(n, k) E_k` (the
//! recurrence `E_n(x) = x^n - (1/2) Σ_{k<n} binom(n, k) E_k(x)` at `x = 0`),
//! and the polynomials from `E_n(x) = Σ_j binom(n, j) E_{n-j} x^j`. Both are
//! memoized behind a lock, so they are safe to call from several threads.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::binomial;
use crate::poly::RationalPolynomial;

static NUMBERS: LazyLock<RwLock<Vec<BigRational>>> =
    LazyLock::new(|| RwLock::new(vec![BigRational::one()]));

static POLYNOMIALS: LazyLock<RwLock<HashMap<usize, Arc<RationalPolynomial>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `E_n = E_n(0)`.
pub fn euler_number(n: usize) -> BigRational {
    if let Some(e) = NUMBERS.read().expect("euler cache poisoned").get(n) {
        return e.clone();
    }
    let mut table = NUMBERS.write().expect("euler cache poisoned");
    while table.len() <= n {
        let m = table.len();
        let s: BigRational = table
            .iter()
            .enumerate()
            .map(|(k, e)| e * BigRational::from_integer(binomial(m as u64, k as u64)))
            .sum();
        table.push(-s / BigRational::from_integer(BigInt::from(2)));
    }
    table[n].clone()
}

/// `E_0, ..., E_n`.
pub fn euler_numbers(n: usize) -> Vec<BigRational> {
    euler_number(n);
    NUMBERS.read().expect("euler cache poisoned")[..=n].to_vec()
}

pub fn euler_polynomial(n: usize) -> Arc<RationalPolynomial> {
    if let Some(p) = POLYNOMIALS.read().expect("euler cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let numbers = euler_numbers(n);
    let coeffs = (0..=n)
        .map(|j| &numbers[n - j] * BigRational::from_integer(binomial(n as u64, j as u64)))
        .collect();
    let p = Arc::new(RationalPolynomial::new(coeffs));
    POLYNOMIALS
        .write()
        .expect("euler cache poisoned")
        .entry(n)
        .or_insert(p)
        .clone()
}

/// `E_n(x)` without building the polynomial.
pub fn euler_polynomial_at(n: usize, x: &BigRational) -> BigRational {
    let numbers = euler_numbers(n);
    let mut acc = BigRational::zero();
    let mut x_pow = BigRational::one();
    for j in 0..=n {
        acc += &numbers[n - j] * BigRational::from_integer(binomial(n as u64, j as u64)) * &x_pow;
        x_pow *= x;
    }
    acc
}
