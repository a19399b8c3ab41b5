//! The p-adic Hurwitz-type Euler zeta function on `Q_p \ Z_p`, the p-adic
//! Euler L-function `L_{p,E}(χ, s)` and the p-adic χ-Euler numbers.
//!
//! For `x = a/m` with `v_p(x) < 0`,
//!
//! ```text
//! ζ_{p,E}(s, x) = ⟨x⟩^{1-s} Σ_{i≥0} binom(1-s, i) E_i x^{-i}
//! ```
//!
//! and for a primitive `χ` of odd conductor `f`, with `m = lcm(f, p)`,
//!
//! ```text
//! L_{p,E}(χ, s) = ⟨m⟩^{1-s} Σ'_{0≤a<m} χ(a) (-1)^a ζ_{p,E}(s, a/m)
//!              = Σ'_{0≤a<m} χ(a) (-1)^a ⟨a⟩^{1-s} Σ_i binom(1-s, i) E_i (m/a)^i,
//! ```
//!
//! `Σ'` omitting multiples of `p`. Imprimitive characters are replaced by
//! the primitive character inducing them. The `i`-th series term has
//! valuation at least `i v_p(m)` because `binom(1-s, i) ∈ Z_p` for `s ∈ Z_p`,
//! so the series is cut once `i v_p(m)` reaches the working precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{binomial, lcm, pow_mod, totient};
use crate::character::{restricted_alternating_sum, DirichletCharacter};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::euler::euler_number;
use crate::fermionic::{integrate_by_partial_sums_upto, Integral, Integrand};
use crate::generalized::gen_euler_number;
use crate::padic::{angle, binomial_sequence, power_angle, PadicContext, PadicNumber, PadicSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LRoute {
    Series,
    Closed,
    Limit,
}

/// A point `a/m` of `Q_p \ Z_p`: `p | m` and `p ∤ a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CZpPoint {
    a: i64,
    m: u64,
}

impl CZpPoint {
    pub fn new(a: i64, m: u64, p: u64) -> Result<Self> {
        if m == 0 || m % p != 0 || a.rem_euclid(p as i64) == 0 {
            return Err(Error::domain(format!(
                "{a}/{m} is not in Q_{p} \\ Z_{p} (need p | m and p ∤ a)"
            )));
        }
        Ok(CZpPoint { a, m })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.a), BigInt::from(self.m))
    }
}

fn check_exponent(s: &PadicNumber) -> Result<()> {
    match s.valuation() {
        Some(v) if v < 0 => Err(Error::domain(format!(
            "s = {s} is outside Z_p (valuation {v})"
        ))),
        _ => Ok(()),
    }
}

/// `Σ_i binom(t, i) E_i y^i` for `v_p(y) ≥ 1`.
fn euler_series(t: &PadicNumber, y: &PadicNumber) -> Result<PadicNumber> {
    let ctx = t.context();
    let v = y.valuation().expect("y is nonzero");
    debug_assert!(v >= 1);
    let cap = ctx.cap() as i64;
    let terms = ((cap + v - 1) / v) as usize;
    let mut acc = PadicSum::new(ctx);
    let mut y_pow = PadicNumber::one(ctx);
    for (i, b) in binomial_sequence(t).take(terms).enumerate() {
        let e = euler_number(i);
        if !e.is_zero() {
            acc.add(&(&(&b * &PadicNumber::from_rational(&e, ctx)) * &y_pow));
        }
        y_pow = &y_pow * y;
    }
    Ok(acc.finish().truncate(terms as i64 * v))
}

/// `ζ_{p,E}(s, x)` for `x ∈ Q_p \ Z_p` and `s ∈ Z_p`.
pub fn hurwitz_euler_zeta(s: &PadicNumber, x: &CZpPoint) -> Result<PadicNumber> {
    check_exponent(s)?;
    let ctx = s.context();
    let t = &PadicNumber::one(ctx) - s;
    let xp = PadicNumber::from_rational(&x.value(), ctx);
    let inv = PadicNumber::from_rational(&(BigRational::from_integer(1.into()) / x.value()), ctx);
    Ok(&power_angle(&angle(&xp)?, &t)? * &euler_series(&t, &inv)?)
}

/// The primitive character behind `χ`, checked for use on the p-adic side.
fn prepare(chi: &DirichletCharacter, p: u64) -> Result<DirichletCharacter> {
    if !chi.is_embeddable(p) {
        return Err(Error::NotEmbeddable {
            order: chi.order(),
            p,
        });
    }
    let psi = chi.primitive();
    if psi.conductor() % 2 == 0 {
        return Err(Error::domain(format!(
            "conductor {} is even; only odd conductors are supported",
            psi.conductor()
        )));
    }
    Ok(psi)
}

/// `L_{p,E}(χ, s)` by the series, without the even-character shortcut.
pub fn lp_eval_series(chi: &DirichletCharacter, s: &PadicNumber) -> Result<PadicNumber> {
    check_exponent(s)?;
    let ctx = s.context();
    let p = ctx.p();
    let psi = prepare(chi, p)?;
    let m = lcm(psi.conductor(), p);
    let table = psi.padic_table(ctx)?;
    let t = &PadicNumber::one(ctx) - s;
    let mp = PadicNumber::from_u64(m, ctx);
    let mut acc = PadicSum::new(ctx);
    for a in (0..m).filter(|a| a % p != 0) {
        let c = &table[(a % psi.modulus()) as usize];
        if c.is_exact_zero() {
            continue;
        }
        let ap = PadicNumber::from_u64(a, ctx);
        let series = euler_series(&t, &mp.checked_div(&ap)?)?;
        let mut term = &(c * &power_angle(&angle(&ap)?, &t)?) * &series;
        if a % 2 == 1 {
            term = -&term;
        }
        acc.add(&term);
    }
    Ok(acc.finish().to_target())
}

/// `L_{p,E}(χ, s)`. Even characters give an exact zero once the series
/// confirms the vanishing at the working precision.
pub fn lp_eval(chi: &DirichletCharacter, s: &PadicNumber) -> Result<PadicNumber> {
    let raw = lp_eval_series(chi, s)?;
    if chi.primitive().is_even() && raw.is_congruent(&PadicNumber::zero(s.context()), s.context().precision() as i64) {
        return Ok(PadicNumber::zero(s.context()));
    }
    Ok(raw)
}

/// `L_{p,E}(χ, s)` at a rational `s ∈ Z_p`.
pub fn lp_eval_rational(chi: &DirichletCharacter, s: &BigRational, ctx: &PadicContext) -> Result<PadicNumber> {
    lp_eval(chi, &PadicNumber::from_rational(s, ctx))
}

/// `ψ(p)` embedded, zero when `p` divides the conductor of `ψ`.
fn value_at_p(psi: &DirichletCharacter, ctx: &PadicContext) -> Result<PadicNumber> {
    psi.eval_padic(ctx.p() as i64, ctx)
}

/// `(1 - p^k ψ(p)) E_{k,ψ}` with `ψ` primitive of odd conductor.
fn euler_factor_times(psi: &DirichletCharacter, k: usize, ctx: &PadicContext) -> Result<PadicNumber> {
    debug_assert!(psi.is_primitive());
    let big_n = lcm(psi.conductor(), ctx.p());
    let e = gen_euler_number(psi, k, big_n)?.embed(ctx)?;
    let pk = PadicNumber::from_bigint(&num_traits::pow(BigInt::from(ctx.p()), k), ctx);
    let factor = &PadicNumber::one(ctx) - &(&pk * &value_at_p(psi, ctx)?);
    Ok((&factor * &e).to_target())
}

/// `χ_k = χ ω^{-k}` as a primitive character.
pub fn chi_k(chi: &DirichletCharacter, k: i64, p: u64) -> Result<DirichletCharacter> {
    let psi = prepare(chi, p)?.times_omega(-k, p)?.primitive();
    // conductors divide lcm(f, p), which is odd
    assert!(psi.conductor() % 2 == 1, "twisted conductor must stay odd");
    Ok(psi)
}

/// `L_{p,E}(χ, 1-k) = (1 - p^k χ_k(p)) E_{k,χ_k}` for `k ≥ 1`, `χ` nontrivial.
pub fn lp_neg_closed(chi: &DirichletCharacter, k: u32, ctx: &PadicContext) -> Result<PadicNumber> {
    if k == 0 {
        return Err(Error::domain("the closed form needs k ≥ 1"));
    }
    if chi.is_trivial() {
        return Err(Error::domain("the closed form excludes the trivial character"));
    }
    let psi = chi_k(chi, k as i64, ctx.p())?;
    euler_factor_times(&psi, k as usize, ctx)
}

/// `L_{p,E}(χ, 1) = Σ'_{0≤a<m} χ(a) (-1)^a` exactly, `χ` nontrivial.
pub fn lp_at_one_exact(chi: &DirichletCharacter, p: u64) -> Result<CyclotomicElement> {
    if chi.is_trivial() {
        return Err(Error::domain("L(χ, 1) is stated for nontrivial χ only"));
    }
    let psi = prepare(chi, p)?;
    Ok(restricted_alternating_sum(&psi, lcm(psi.conductor(), p), p))
}

pub fn lp_at_one(chi: &DirichletCharacter, ctx: &PadicContext) -> Result<PadicNumber> {
    Ok(lp_at_one_exact(chi, ctx.p())?.embed(ctx)?.to_target())
}

/// `L_{p,E}(χ, k+1)` as the limit of `Σ'_{0≤n<m p^N} χω^k(n) (-1)^n n^{-k}`.
///
/// `max_level` caps `N`; by default the fermionic engine's bound applies.
pub fn lp_pos_limit(
    chi: &DirichletCharacter,
    k: i64,
    max_level: Option<u32>,
    ctx: &PadicContext,
) -> Result<Integral> {
    if k == 0 {
        return Err(Error::domain("the limit formula needs k ≠ 0"));
    }
    let p = ctx.p();
    let twisted = prepare(chi, p)?.times_omega(k, p)?;
    let m = twisted.modulus();
    debug_assert_eq!(m, lcm(chi.primitive().conductor(), p));
    let integrand = match p.checked_pow(ctx.cap()).filter(|q| *q < 1 << 62) {
        Some(modulus) => {
            let table: Vec<Option<u64>> = twisted
                .padic_table(ctx)?
                .iter()
                .map(|v| {
                    (!v.is_exact_zero()).then(|| {
                        v.residue(ctx.cap())
                            .expect("character values are integral")
                            .to_u64()
                            .expect("below 2^62")
                    })
                })
                .collect();
            let phi = totient(modulus);
            let ctx = ctx.clone();
            Integrand::generic(0, m, move |n, _| {
                let Some(c) = table[(n % m) as usize] else {
                    return Ok(PadicNumber::zero(&ctx));
                };
                let power = if k > 0 {
                    pow_mod(pow_mod(n, phi - 1, modulus), k as u64, modulus)
                } else {
                    pow_mod(n, k.unsigned_abs(), modulus)
                };
                let v = (c as u128 * power as u128 % modulus as u128) as u64;
                Ok(PadicNumber::from_u64(v, &ctx))
            })
        }
        None => Integrand::twisted(twisted, -k, BigRational::zero()),
    };
    integrate_by_partial_sums_upto(&integrand, ctx, true, max_level)
}

/// `H_n = Σ'_{0≤a<m} χ(a) (-1)^a a^{-n}`.
pub fn h_sum(n: u32, chi: &DirichletCharacter, ctx: &PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let psi = prepare(chi, p)?;
    let m = lcm(psi.conductor(), p);
    let table = psi.padic_table(ctx)?;
    let mut acc = PadicSum::new(ctx);
    for a in (0..m).filter(|a| a % p != 0) {
        let c = &table[(a % psi.modulus()) as usize];
        if c.is_exact_zero() {
            continue;
        }
        let mut term = c * &PadicNumber::from_u64(a, ctx).pow(-(n as i64))?;
        if a % 2 == 1 {
            term = -&term;
        }
        acc.add(&term);
    }
    Ok(acc.finish())
}

/// `E_{-k,p,χ} = Σ_i (-1)^i binom(k+i-1, k-1) m^i E_i H_{k+i}` for `k ≥ 1`.
pub fn h_series(k: u32, chi: &DirichletCharacter, ctx: &PadicContext) -> Result<PadicNumber> {
    if k == 0 {
        return Err(Error::domain("the H-series needs k ≥ 1"));
    }
    let p = ctx.p();
    let psi = prepare(chi, p)?;
    let m = lcm(psi.conductor(), p);
    let v = crate::arith::valuation_int(&BigInt::from(m), p) as i64;
    let terms = (ctx.cap() as i64 + v - 1) / v;
    let mut acc = PadicSum::new(ctx);
    for i in 0..terms as u32 {
        let e = euler_number(i as usize);
        if e.is_zero() {
            continue;
        }
        let c = BigRational::from_integer(
            binomial((k + i - 1) as u64, (k - 1) as u64) * num_traits::pow(BigInt::from(m), i as usize),
        ) * e;
        let c = if i % 2 == 1 { -c } else { c };
        acc.add(&(&PadicNumber::from_rational(&c, ctx) * &h_sum(k + i, &psi, ctx)?));
    }
    Ok(acc.finish().truncate(terms * v).to_target())
}

/// `E_{k,p,χ} = L_{p,E}(χω^k, 1-k)`: the closed form `(1 - p^k χ(p)) E_{k,χ}`
/// for `k ≥ 1`, the series for `k ≤ 0`.
pub fn chi_euler_number(k: i64, chi: &DirichletCharacter, ctx: &PadicContext) -> Result<(PadicNumber, LRoute)> {
    let p = ctx.p();
    let psi = prepare(chi, p)?;
    if k >= 1 {
        return Ok((euler_factor_times(&psi, k as usize, ctx)?, LRoute::Closed));
    }
    let twisted = psi.times_omega(k, p)?;
    let s = PadicNumber::from_i64(1 - k, ctx);
    Ok((lp_eval(&twisted, &s)?, LRoute::Series))
}

/// `E_{Φ(p^r)+k,χ}` embedded at full working precision; these converge to
/// `E_{k,p,χ}` as `r` grows.
pub fn chi_euler_limit_term(k: i64, r: u32, chi: &DirichletCharacter, ctx: &PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    let psi = prepare(chi, p)?;
    let n = totient(p.pow(r)) as i64 + k;
    if n < 0 {
        return Err(Error::domain(format!("Φ({p}^{r}) + {k} is negative")));
    }
    gen_euler_number(&psi, n as usize, psi.conductor())?.embed(ctx)
}
