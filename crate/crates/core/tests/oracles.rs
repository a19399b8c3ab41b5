//! Worked examples checked against independent oracles: modular inverses by
//! the extended Euclidean algorithm, brute-force sums over residues, and the
//! Euler recurrence evaluated from scratch.

use eulerlp::arith::{rat, rat_int};
use eulerlp::character::{characters_mod, chi_0m, restricted_alternating_sum, restricted_character_sum, restricted_sum};
use eulerlp::euler::{euler_number, euler_polynomial, euler_polynomial_at};
use eulerlp::fermionic::{integrate_by_partial_sums, integrate_units, integrate_zp, Integrand};
use eulerlp::generalized::{alt_power_sum, gen_euler, gen_euler_number, gen_euler_poly};
use eulerlp::padic::{angle_omega_v, binom_coeff, power_angle, teichmuller};
use eulerlp::zeta::{chi_euler_number, h_series, h_sum, lp_at_one, lp_eval, lp_neg_closed, lp_pos_limit};
use eulerlp::{CyclotomicElement, DirichletCharacter, PadicContext, PadicNumber, RationalPolynomial};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn ctx(p: u64, m: u32) -> PadicContext {
    PadicContext::with_default_guard(p, m).unwrap()
}

/// `a^{-1} mod n` by the extended Euclidean algorithm.
fn inverse_mod(a: i64, n: i64) -> i64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(n));
    assert!(e.gcd.is_one());
    e.x.mod_floor(&BigInt::from(n)).to_i64().unwrap()
}

fn residue(x: &PadicNumber, k: u32) -> u64 {
    x.residue(k).unwrap().to_u64().unwrap()
}

fn quad3() -> DirichletCharacter {
    DirichletCharacter::quadratic(3).unwrap()
}

/// `E_n` by the recurrence `E_n = -(1/2) Σ_{k<n} binom(n,k) E_k`, without caching.
fn euler_by_recurrence(n: usize) -> BigRational {
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut c = BigInt::one();
        for (k, ek) in e.iter().enumerate() {
            acc += ek * BigRational::from_integer(c.clone());
            c = c * BigInt::from(m - k) / BigInt::from(k + 1);
        }
        e.push(-acc / rat_int(2));
    }
    e[n].clone()
}

#[test]
fn padic_embedding_examples() {
    let c = ctx(5, 4);
    let one = PadicNumber::from_rational(&rat_int(1), &c);
    assert_eq!((one.valuation(), residue(&one, 4)), (Some(0), 1));
    let ten = PadicNumber::from_rational(&rat_int(10), &c);
    assert_eq!(ten.valuation(), Some(1));
    assert_eq!(ten.unit().unwrap(), &BigUint::from(2u32));

    let q = PadicNumber::from_rational(&rat(691, 4), &c);
    let modulus = 5i64.pow(4 + c.guard());
    let want = 691 * inverse_mod(4, modulus) % modulus;
    assert_eq!(q.unit().unwrap(), &BigUint::from(want as u64));

    let five = &PadicNumber::from_i64(2, &c) + &PadicNumber::from_i64(3, &c);
    assert_eq!((five.valuation(), five.unit().unwrap().clone()), (Some(1), BigUint::one()));
    let third = PadicNumber::one(&c).checked_div(&PadicNumber::from_i64(3, &c)).unwrap();
    assert_eq!(residue(&third, 4) as i64, inverse_mod(3, 625));
    assert_eq!(inverse_mod(3, 625), 417);
}

#[test]
fn teichmuller_and_angle_examples() {
    let c = PadicContext::new(5, 4, 0).unwrap();
    let w2 = teichmuller(&BigInt::from(2), &c).unwrap();
    assert_eq!(residue(&w2, 4), 182);
    assert_eq!(182u64.pow(2) % 625, 624);
    assert_eq!(182u64.pow(4) % 625, 1);
    for p in [3u64, 5, 7, 11] {
        let c = ctx(p, 5);
        assert_eq!(teichmuller(&BigInt::one(), &c).unwrap(), PadicNumber::one(&c));
        let w = teichmuller(&BigInt::from(p - 1), &c).unwrap();
        assert!(w.is_congruent(&PadicNumber::from_i64(-1, &c), c.cap() as i64));
    }

    let (angle, omega) = angle_omega_v(&rat_int(2), &c).unwrap();
    assert_eq!(residue(&omega, 4), 182);
    assert_eq!(residue(&angle, 4) as i64, 2 * inverse_mod(182, 625) % 625);
    let (a1, w1) = angle_omega_v(&rat_int(1), &c).unwrap();
    assert_eq!((residue(&a1, 4), residue(&w1, 4)), (1, 1));
    let (ap, wp) = angle_omega_v(&rat_int(5), &c).unwrap();
    assert_eq!(residue(&ap, 4), 1);
    assert_eq!(wp, PadicNumber::from_i64(5, &c));
}

#[test]
fn binomial_and_power_examples() {
    let c = ctx(5, 6);
    let s = PadicNumber::from_rational(&rat(7, 3), &c);
    assert_eq!(binom_coeff(&s, 0).unwrap(), PadicNumber::one(&c));
    assert!(binom_coeff(&PadicNumber::from_i64(3, &c), 2).unwrap().is_congruent(&PadicNumber::from_i64(3, &c), 6));
    let half = PadicNumber::from_rational(&rat(1, 2), &c);
    let want = PadicNumber::from_rational(&rat(-1, 8), &c);
    assert!(binom_coeff(&half, 2).unwrap().is_congruent(&want, 6));

    let (base, _) = angle_omega_v(&rat_int(2), &c).unwrap();
    assert!(power_angle(&base, &PadicNumber::zero(&c)).unwrap().is_congruent(&PadicNumber::one(&c), 6));
    let direct = &(&base * &base) * &(&base * &base);
    assert!(power_angle(&base, &PadicNumber::from_i64(4, &c)).unwrap().is_congruent(&direct, 6));
}

#[test]
fn euler_examples() {
    let published = [(0, rat_int(1)), (1, rat(-1, 2)), (3, rat(1, 4)), (5, rat(-1, 2)), (7, rat(17, 8)), (9, rat(-31, 2)), (11, rat(691, 4))];
    for (n, want) in published {
        assert_eq!(euler_number(n), want, "E_{n}");
        assert_eq!(euler_by_recurrence(n), want, "recurrence E_{n}");
    }
    for k in 1..=10 {
        assert!(euler_number(2 * k).is_zero());
    }
    assert_eq!(*euler_polynomial(0), RationalPolynomial::from(vec![1]));
    assert_eq!(*euler_polynomial(1), RationalPolynomial::new(vec![rat(-1, 2), rat_int(1)]));
    assert_eq!(*euler_polynomial(2), RationalPolynomial::from(vec![0, -1, 1]));
    assert!(euler_polynomial_at(1, &rat(1, 2)).is_zero());
    assert_eq!(euler_polynomial_at(0, &rat(-9, 7)), rat_int(1));
    assert_eq!(euler_polynomial_at(9, &rat_int(0)), rat(-31, 2));
}

#[test]
fn character_examples() {
    let one = characters_mod(1);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].eval_rational(0), Some(rat_int(1)));
    let three = characters_mod(3);
    assert_eq!(three.len(), 2);
    assert_eq!(three[1], quad3());
    assert_eq!(quad3().eval_rational(2), Some(rat_int(-1)));
    let mut orders: Vec<u64> = characters_mod(5).iter().map(|c| c.order()).collect();
    orders.sort();
    assert_eq!(orders, [1, 2, 4, 4]);
    for f in [3u64, 5, 9] {
        for chi in characters_mod(f) {
            assert!(chi.eval(f as i64).is_zero());
        }
    }

    assert_eq!(chi_0m(3, 4, 5), 1);
    assert_eq!(chi_0m(5, 15, 5), 0);
    assert_eq!(chi_0m(5, 3, 5), 1);
    assert_eq!(restricted_sum(15, 5, 0u64, |_| 1), 12);
    assert!(restricted_character_sum(&quad3(), 15, 5).is_zero());
    // brute force over the eight units below 15
    let brute: i64 = [1i64, 2, 4, 7, 8, 11, 13, 14]
        .iter()
        .map(|&a| [0, 1, -1][(a % 3) as usize] * if a % 2 == 0 { 1 } else { -1 })
        .sum();
    assert_eq!(brute, -4);
    assert_eq!(restricted_alternating_sum(&quad3(), 15, 5).to_rational(), Some(rat_int(brute)));

    let c = ctx(5, 4);
    assert_eq!(CyclotomicElement::one(1).embed(&c).unwrap(), PadicNumber::one(&c));
    let minus_one = CyclotomicElement::root_of_unity(2, 1).embed(&c).unwrap();
    assert!(minus_one.is_congruent(&PadicNumber::from_i64(-1, &c), 4));
    let i = CyclotomicElement::root_of_unity(4, 1).embed(&PadicContext::new(5, 4, 0).unwrap()).unwrap();
    assert_eq!(residue(&i, 4), 182);

    let trivial = DirichletCharacter::principal(1);
    assert_eq!(trivial.times_omega(0, 5).unwrap().primitive(), trivial);
    let omega = trivial.times_omega(1, 5).unwrap();
    assert_eq!((omega.conductor(), omega.is_odd()), (5, true));
    let twisted = quad3().times_omega(-1, 5).unwrap();
    assert_eq!((twisted.modulus(), twisted.order()), (15, 4));
}

#[test]
fn generalized_examples() {
    let chi = quad3();
    let brute = -[0, 1, -1][1] + [0, 1, -1][2];
    assert_eq!(gen_euler_number(&chi, 0, 3).unwrap().to_rational(), Some(rat_int(brute)));
    assert_eq!(gen_euler_number(&DirichletCharacter::principal(1), 0, 1).unwrap().to_rational(), Some(rat_int(-1)));
    assert_eq!(gen_euler_number(&chi, 2, 3).unwrap(), gen_euler_number(&chi, 2, 9).unwrap());
    assert_eq!(gen_euler_poly(&chi, 4, &rat_int(0), 3).unwrap(), gen_euler(&chi, 4).unwrap());
    assert_eq!(gen_euler_poly(&chi, 0, &rat(3, 11), 3).unwrap(), gen_euler(&chi, 0).unwrap());
    let e0 = gen_euler(&chi, 0).unwrap();
    let e1 = gen_euler(&chi, 1).unwrap();
    assert_eq!(gen_euler_poly(&chi, 1, &rat_int(1), 3).unwrap(), &e1 + &e0);
    assert_eq!(alt_power_sum(&chi, 0, &rat_int(0), 3).unwrap(), &(&e0 + &e0).scale(&rat(1, 2)) + &CyclotomicElement::zero(2));
    assert!(alt_power_sum(&DirichletCharacter::principal(1), 1, &rat_int(0), 1).unwrap().is_zero());
    let lhs = alt_power_sum(&chi, 3, &rat(1, 2), 9).unwrap();
    let rhs = (&gen_euler_poly(&chi, 3, &rat(1, 2), 9).unwrap() + &gen_euler_poly(&chi, 3, &rat(19, 2), 9).unwrap()).scale(&rat(1, 2));
    assert_eq!(lhs, rhs);
}

#[test]
fn fermionic_examples() {
    let c = ctx(5, 6);
    assert_eq!(integrate_zp(&Integrand::power(0), &c).unwrap().value, PadicNumber::one(&c).to_target());
    let e7 = PadicNumber::from_rational(&rat(17, 8), &c);
    assert!(integrate_zp(&Integrand::power(7), &c).unwrap().value.is_congruent(&e7, 6));
    assert!(integrate_by_partial_sums(&Integrand::power(7), &c, false).unwrap().value.is_congruent(&e7, 6));
    let twisted = Integrand::twisted(quad3(), 0, rat_int(0));
    assert!(integrate_zp(&twisted, &c).unwrap().value.is_congruent(&PadicNumber::from_i64(-2, &c), 6));

    let zero = PadicNumber::zero(&c);
    assert!(integrate_units(&Integrand::power(0), &c).unwrap().value.is_congruent(&zero, 6));
    assert!(integrate_by_partial_sums(&Integrand::power(0), &c, true).unwrap().value.is_congruent(&zero, 6));
    assert!(integrate_units(&Integrand::power(2), &c).unwrap().value.is_congruent(&zero, 6));

    let small = ctx(5, 4);
    let omega = DirichletCharacter::omega(5).unwrap();
    for k in 1..=2i64 {
        let integral = integrate_units(&Integrand::twisted(DirichletCharacter::principal(1), -k, rat_int(0)), &small).unwrap();
        let l = lp_eval(&omega.pow(-k), &PadicNumber::from_i64(k + 1, &small)).unwrap();
        assert!(integral.value.is_congruent(&l, 4), "k = {k}");
    }
}

#[test]
fn l_function_examples() {
    let c = ctx(5, 6);
    let chi = quad3();
    let minus_four = PadicNumber::from_i64(-4, &c);
    assert!(lp_eval(&chi, &PadicNumber::one(&c)).unwrap().is_congruent(&minus_four, 6));
    assert!(lp_at_one(&chi, &c).unwrap().is_congruent(&minus_four, 6));
    assert!(lp_eval(&DirichletCharacter::principal(1), &PadicNumber::from_rational(&rat(2, 7), &c)).unwrap().is_exact_zero());
    let even = characters_mod(5).into_iter().find(|x| x.order() == 2).unwrap();
    assert!(lp_at_one(&even, &c).unwrap().is_zero());

    for k in 1..=2u32 {
        let series = lp_eval(&chi, &PadicNumber::from_i64(1 - k as i64, &c)).unwrap();
        assert!(series.is_congruent(&lp_neg_closed(&chi, k, &c).unwrap(), 6), "k = {k}");
    }
    // k = 2: χ_2 = χ, so the value is (1 - 25 χ(5)) E_{2,χ} = 26 E_{2,χ}
    let (e2, _) = chi_euler_number(2, &chi, &c).unwrap();
    let want = gen_euler(&chi, 2).unwrap().scale(&rat_int(26)).embed(&c).unwrap();
    assert!(e2.is_congruent(&want, 6));
    let (odd, _) = chi_euler_number(1, &chi, &c).unwrap();
    assert!(odd.is_zero());

    let limit = lp_pos_limit(&chi, 1, None, &ctx(5, 4)).unwrap();
    let direct = lp_eval(&chi, &PadicNumber::from_i64(2, &ctx(5, 4))).unwrap();
    assert!(limit.value.is_congruent(&direct, 4));

    // eight-term brute force for H_1
    let mut h1 = PadicNumber::zero(&c);
    for a in [1i64, 2, 4, 7, 8, 11, 13, 14] {
        let sign = [0, 1, -1][(a % 3) as usize] * if a % 2 == 0 { 1 } else { -1 };
        h1 = &h1 + &PadicNumber::from_rational(&rat(sign, a), &c);
    }
    assert!(h_sum(1, &chi, &c).unwrap().is_congruent(&h1, 6));
    for k in 1..=2u32 {
        let (value, _) = chi_euler_number(-(k as i64), &chi, &c).unwrap();
        assert!(h_series(k, &chi, &c).unwrap().is_congruent(&value, 5), "k = {k}");
    }
}
