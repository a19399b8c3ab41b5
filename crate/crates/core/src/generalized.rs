//! Generalized Euler numbers `E_{n,χ}` and polynomials `E_{n,χ}(x)`.
//!
//! For a character `χ` of odd modulus `f` and any odd multiple `N` of `f`,
//!
//! ```text
//! E_{n,χ} = N^n Σ_{a=1}^{N} (-1)^a χ(a) E_n(a / N),
//! ```
//!
//! a value in `Q(ζ_d)`, `d` the order of `χ`. The sum starts at `a = 1`, so
//! for the trivial character mod 1 this gives `E_{0,χ} = -1` and
//! `E_{n,χ} = E_n` for `n ≥ 1`.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::binomial;
use crate::character::DirichletCharacter;
use crate::cyclotomic::{CyclotomicElement, RootSum};
use crate::error::{Error, Result};
use crate::euler::euler_numbers;

type Key = (DirichletCharacter, usize, u64);

static CACHE: LazyLock<RwLock<HashMap<Key, CyclotomicElement>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn check(chi: &DirichletCharacter, big_n: u64) -> Result<()> {
    let f = chi.modulus();
    if f % 2 == 0 {
        return Err(Error::domain(format!(
            "generalized Euler numbers need an odd modulus, got {f}"
        )));
    }
    if big_n % 2 == 0 || big_n % f != 0 {
        return Err(Error::domain(format!(
            "N = {big_n} must be an odd multiple of the modulus {f}"
        )));
    }
    Ok(())
}

/// `E_{n,χ}` computed with the period `N`.
pub fn gen_euler_number(chi: &DirichletCharacter, n: usize, big_n: u64) -> Result<CyclotomicElement> {
    check(chi, big_n)?;
    let key = (chi.clone(), n, big_n);
    if let Some(v) = CACHE.read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    // N^n E_n(a/N) = Σ_j binom(n, j) E_{n-j} N^{n-j} a^j
    let e = euler_numbers(n);
    let nn = BigInt::from(big_n);
    let mut n_pow = BigInt::one();
    let mut b = vec![BigRational::zero(); n + 1];
    for j in (0..=n).rev() {
        b[j] = &e[n - j] * BigRational::from_integer(binomial(n as u64, j as u64) * &n_pow);
        n_pow *= &nn;
    }
    // power sums Σ (-1)^a a^j over each class χ(a) = ζ^k
    let d = chi.order() as usize;
    let mut sums = vec![vec![BigInt::zero(); n + 1]; d];
    for a in 1..=big_n {
        let Some(k) = chi.exponent_u(a) else { continue };
        let row = &mut sums[k as usize];
        let ab = BigInt::from(a);
        let mut pw = if a % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for slot in row.iter_mut() {
            *slot += &pw;
            pw *= &ab;
        }
    }
    let mut acc = RootSum::new(chi.order());
    for (k, row) in sums.iter().enumerate() {
        let c: BigRational = row
            .iter()
            .zip(&b)
            .filter(|(s, _)| !s.is_zero())
            .map(|(s, bj)| bj * BigRational::from_integer(s.clone()))
            .sum();
        acc.add(k as u64, &c);
    }
    let value = acc.finish();
    CACHE
        .write()
        .expect("cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}

/// `E_{n,χ}` with `N` equal to the modulus of `χ`.
pub fn gen_euler(chi: &DirichletCharacter, n: usize) -> Result<CyclotomicElement> {
    gen_euler_number(chi, n, chi.modulus())
}

/// `E_{n,χ}(x) = Σ_i binom(n, i) E_{i,χ} x^{n-i}`.
pub fn gen_euler_poly(
    chi: &DirichletCharacter,
    n: usize,
    x: &BigRational,
    big_n: u64,
) -> Result<CyclotomicElement> {
    let mut acc = CyclotomicElement::zero(chi.order());
    let mut x_pow = BigRational::one();
    for i in (0..=n).rev() {
        let c = BigRational::from_integer(binomial(n as u64, i as u64)) * &x_pow;
        acc = &acc + &gen_euler_number(chi, i, big_n)?.scale(&c);
        x_pow *= x;
    }
    Ok(acc)
}

/// `Σ_{r=0}^{N-1} (-1)^r χ(r) (x + r)^n`, summed term by term.
pub fn alt_power_sum(
    chi: &DirichletCharacter,
    n: usize,
    x: &BigRational,
    big_n: u64,
) -> Result<CyclotomicElement> {
    check(chi, big_n)?;
    let mut acc = RootSum::new(chi.order());
    for r in 0..big_n {
        let Some(k) = chi.exponent_u(r) else { continue };
        let base = x + BigRational::from_integer(BigInt::from(r));
        let mut term = num_traits::pow(base, n);
        if r % 2 == 1 {
            term = -term;
        }
        acc.add(k, &term);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::character::characters_mod;
    use crate::euler::{euler_number, euler_polynomial_at};

    fn quad3() -> DirichletCharacter {
        DirichletCharacter::quadratic(3).unwrap()
    }

    /// The defining sum with `E_n(a/N)` evaluated directly.
    fn by_definition(chi: &DirichletCharacter, n: usize, big_n: u64) -> CyclotomicElement {
        let mut acc = RootSum::new(chi.order());
        let scale = num_traits::pow(rat_int(big_n as i64), n);
        for a in 1..=big_n {
            if let Some(k) = chi.exponent_u(a) {
                let v = euler_polynomial_at(n, &rat(a as i64, big_n as i64)) * &scale;
                acc.add(k, &if a % 2 == 0 { v } else { -v });
            }
        }
        acc.finish()
    }

    #[test]
    fn examples() {
        let chi = quad3();
        assert_eq!(gen_euler_number(&chi, 0, 3).unwrap().to_rational(), Some(rat_int(-2)));
        let trivial = &characters_mod(1)[0];
        assert_eq!(gen_euler_number(trivial, 0, 1).unwrap().to_rational(), Some(rat_int(-1)));
        for n in 1..12 {
            assert_eq!(gen_euler(trivial, n).unwrap().to_rational(), Some(euler_number(n)));
        }
        assert_eq!(gen_euler_number(&chi, 2, 3).unwrap(), gen_euler_number(&chi, 2, 9).unwrap());
        assert!(gen_euler_number(&chi, 2, 6).is_err());
        assert!(gen_euler_number(&chi, 2, 5).is_err());
        assert!(gen_euler(&characters_mod(4)[1], 1).is_err());
    }

    #[test]
    fn matches_definition() {
        for f in [3u64, 5, 7, 15] {
            for chi in characters_mod(f) {
                for n in 0..8 {
                    for big_n in [f, 3 * f] {
                        assert_eq!(
                            gen_euler_number(&chi, n, big_n).unwrap(),
                            by_definition(&chi, n, big_n),
                            "f = {f}, n = {n}, N = {big_n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_examples() {
        let chi = quad3();
        let e0 = gen_euler(&chi, 0).unwrap();
        let e1 = gen_euler(&chi, 1).unwrap();
        assert_eq!(gen_euler_poly(&chi, 3, &rat_int(0), 3).unwrap(), gen_euler(&chi, 3).unwrap());
        assert_eq!(gen_euler_poly(&chi, 0, &rat(5, 7), 3).unwrap(), e0);
        assert_eq!(gen_euler_poly(&chi, 1, &rat_int(1), 3).unwrap(), &e1 + &e0);
    }

    #[test]
    fn alternating_power_sum_examples() {
        let chi = quad3();
        assert_eq!(alt_power_sum(&chi, 0, &rat_int(0), 3).unwrap().to_rational(), Some(rat_int(-2)));
        let trivial = &characters_mod(1)[0];
        assert!(alt_power_sum(trivial, 1, &rat_int(0), 1).unwrap().is_zero());
        let half = rat(1, 2);
        let lhs = alt_power_sum(&chi, 3, &half, 9).unwrap();
        let rhs = (&gen_euler_poly(&chi, 3, &half, 9).unwrap()
            + &gen_euler_poly(&chi, 3, &rat(19, 2), 9).unwrap())
            .scale(&half);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn parity_vanishing() {
        for f in [3u64, 5, 7, 9, 15] {
            for chi in characters_mod(f).into_iter().filter(|c| !c.is_trivial()) {
                for n in 0..=12usize {
                    let e = gen_euler(&chi, n).unwrap();
                    let forced = n % 2 != chi.parity() as usize;
                    assert_eq!(e.is_zero(), forced, "f = {f}, χ = {chi}, n = {n}");
                    assert!(e.has_two_power_denominators());
                }
            }
        }
    }
}
