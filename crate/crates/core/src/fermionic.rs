//! The fermionic p-adic integral
//!
//! ```text
//! I(f) = ∫_{Z_p} f dμ = lim_N Σ_{a < L p^N} f(a) (-1)^a
//! ```
//!
//! and its restriction to `Z_p^×` (drop the terms with `p | a`). `L` is the
//! period of the integrand's non-analytic part (1 for polynomials, the
//! modulus of `χ` for twisted powers); it is odd, so `L p^N` runs through the
//! same measure as `p^N`.
//!
//! Polynomials and twisted powers have exact closed forms
//! (`I((x + y)^n) = E_n(x)`, `I(χ(y)(x + y)^k) = E_{k,χ}(x)`); every integrand
//! can also be integrated by partial sums, stopping once two consecutive
//! increments vanish modulo `p^M`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::valuation_rational;
use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::euler::euler_polynomial_at;
use crate::generalized::gen_euler_poly;
use crate::padic::{PadicContext, PadicNumber, PadicSum};
use crate::poly::RationalPolynomial;

/// Integrand evaluator: `(a, N) ↦ f(a)` for a residue `a < L p^N`.
pub type Callback = Arc<dyn Fn(u64, u32) -> Result<PadicNumber> + Send + Sync>;

#[derive(Clone)]
pub enum Integrand {
    /// `y ↦ P(y)`.
    Polynomial(RationalPolynomial),
    /// `y ↦ χ(y) (x + y)^k`; for `k < 0` only units are integrated.
    TwistedPower {
        chi: DirichletCharacter,
        k: i64,
        shift: BigRational,
    },
    /// A black-box function. Inputs congruent mod `p^j` must give outputs
    /// congruent mod `p^{j - contract}`; `period` must be odd.
    Generic {
        eval: Callback,
        contract: u32,
        period: u64,
    },
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::Polynomial(p) => write!(f, "Polynomial({p})"),
            Integrand::TwistedPower { chi, k, shift } => {
                write!(f, "TwistedPower({chi}, k = {k}, shift = {shift})")
            }
            Integrand::Generic {
                contract, period, ..
            } => write!(f, "Generic(contract = {contract}, period = {period})"),
        }
    }
}

impl Integrand {
    /// `y ↦ y^n`.
    pub fn power(n: usize) -> Self {
        Integrand::Polynomial(RationalPolynomial::monomial(BigRational::one(), n))
    }

    pub fn twisted(chi: DirichletCharacter, k: i64, shift: BigRational) -> Self {
        Integrand::TwistedPower { chi, k, shift }
    }

    pub fn generic(
        contract: u32,
        period: u64,
        eval: impl Fn(u64, u32) -> Result<PadicNumber> + Send + Sync + 'static,
    ) -> Self {
        Integrand::Generic {
            eval: Arc::new(eval),
            contract,
            period,
        }
    }

    /// Period `L` of the residues summed over.
    pub fn period(&self) -> u64 {
        match self {
            Integrand::Polynomial(_) => 1,
            Integrand::TwistedPower { chi, .. } => chi.modulus(),
            Integrand::Generic { period, .. } => *period,
        }
    }

    /// Continuity constant `c` (see [`Integrand::Generic`]).
    pub fn contract(&self, p: u64) -> u32 {
        match self {
            Integrand::Polynomial(poly) => poly
                .coeffs()
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| (-valuation_rational(c, p)).max(0) as u32)
                .max()
                .unwrap_or(0),
            Integrand::TwistedPower { k, shift, .. } => {
                let neg = if shift.is_zero() {
                    0
                } else {
                    (-valuation_rational(shift, p)).max(0)
                };
                ((k - 1).unsigned_abs() as i64 * neg) as u32
            }
            Integrand::Generic { contract, .. } => *contract,
        }
    }

    fn check_period(&self) -> Result<()> {
        let l = self.period();
        if l == 0 || l % 2 == 0 {
            return Err(Error::domain(format!("integrand period {l} must be odd")));
        }
        Ok(())
    }

    /// Pointwise evaluator for partial sums.
    fn evaluator(&self, ctx: &PadicContext) -> Result<Box<dyn Fn(u64, u32) -> Result<PadicNumber> + '_>> {
        let ctx = ctx.clone();
        Ok(match self {
            Integrand::Polynomial(poly) => {
                let coeffs: Vec<PadicNumber> = poly
                    .coeffs()
                    .iter()
                    .map(|c| PadicNumber::from_rational(c, &ctx))
                    .collect();
                Box::new(move |a, _| {
                    let x = PadicNumber::from_u64(a, &ctx);
                    Ok(coeffs
                        .iter()
                        .rev()
                        .fold(PadicNumber::zero(&ctx), |acc, c| &(&acc * &x) + c))
                })
            }
            Integrand::TwistedPower { chi, k, shift } => {
                let table = chi.padic_table(&ctx)?;
                let shift = PadicNumber::from_rational(shift, &ctx);
                let k = *k;
                Box::new(move |a, _| {
                    let c = &table[(a % chi.modulus()) as usize];
                    if c.is_exact_zero() {
                        return Ok(c.clone());
                    }
                    let base = &shift + &PadicNumber::from_u64(a, &ctx);
                    Ok(c * &base.pow(k)?)
                })
            }
            Integrand::Generic { eval, .. } => Box::new(move |a, n| eval(a, n)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Exact,
    PartialSums,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub level: u32,
    pub value: PadicNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Integral {
    pub value: PadicNumber,
    pub route: Route,
    pub trace: Vec<TraceStep>,
}

impl Integral {
    fn exact(value: PadicNumber) -> Self {
        Integral {
            value: value.to_target(),
            route: Route::Exact,
            trace: Vec::new(),
        }
    }
}

/// `Σ_{a < L p^N} (-1)^a f(a)`, skipping `p | a` when `units` is set.
pub fn partial_sum(f: &Integrand, ctx: &PadicContext, level: u32, units: bool) -> Result<PadicNumber> {
    f.check_period()?;
    let eval = f.evaluator(ctx)?;
    partial_sum_with(&*eval, f.period(), ctx, level, units)
}

fn partial_sum_with(
    eval: &dyn Fn(u64, u32) -> Result<PadicNumber>,
    period: u64,
    ctx: &PadicContext,
    level: u32,
    units: bool,
) -> Result<PadicNumber> {
    let p = ctx.p();
    let end = p
        .checked_pow(level)
        .and_then(|q| q.checked_mul(period))
        .ok_or_else(|| Error::domain(format!("level {level} is too deep")))?;
    let mut plus = PadicSum::new(ctx);
    let mut minus = PadicSum::new(ctx);
    for a in 0..end {
        if units && a % p == 0 {
            continue;
        }
        let v = eval(a, level)?;
        if a % 2 == 0 {
            plus.add(&v);
        } else {
            minus.add(&v);
        }
    }
    plus.finish().checked_sub(&minus.finish())
}

/// Partial sums for `N = 0, 1, ...` until `S_{N-2} ≡ S_{N-1} ≡ S_N (mod p^M)`,
/// giving up after `N = M + c + 4`.
pub fn integrate_by_partial_sums(f: &Integrand, ctx: &PadicContext, units: bool) -> Result<Integral> {
    integrate_by_partial_sums_upto(f, ctx, units, None)
}

/// As [`integrate_by_partial_sums`], giving up after `max_level` when set.
pub fn integrate_by_partial_sums_upto(
    f: &Integrand,
    ctx: &PadicContext,
    units: bool,
    max_level: Option<u32>,
) -> Result<Integral> {
    f.check_period()?;
    let eval = f.evaluator(ctx)?;
    let m = ctx.precision();
    let max_level = max_level.unwrap_or(m + f.contract(ctx.p()) + 4);
    let mut trace: Vec<TraceStep> = Vec::new();
    let mut agreements = 0;
    for level in 0..=max_level {
        let s = partial_sum_with(&*eval, f.period(), ctx, level, units)?;
        if let Some(prev) = trace.last() {
            if s.is_congruent(&prev.value, m as i64) {
                agreements += 1;
            } else {
                agreements = 0;
            }
        }
        trace.push(TraceStep { level, value: s });
        if agreements >= 2 {
            let value = trace.last().expect("pushed").value.to_target();
            return Ok(Integral {
                value,
                route: Route::PartialSums,
                trace,
            });
        }
    }
    Err(Error::NonConvergence {
        p: ctx.p(),
        precision: m,
        max_level,
    })
}

fn polynomial_integral(poly: &RationalPolynomial, ctx: &PadicContext) -> PadicNumber {
    let zero = BigRational::zero();
    let value: BigRational = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| c * euler_polynomial_at(n, &zero))
        .sum();
    PadicNumber::from_rational(&value, ctx)
}

/// `E_{k,χ}(x)`, with the trivial character mod 1 read as the constant 1.
fn twisted_integral(
    chi: &DirichletCharacter,
    k: usize,
    x: &BigRational,
    ctx: &PadicContext,
) -> Result<PadicNumber> {
    if chi.modulus() == 1 {
        return Ok(PadicNumber::from_rational(&euler_polynomial_at(k, x), ctx));
    }
    gen_euler_poly(chi, k, x, chi.modulus())?.embed(ctx)
}

/// `∫_{Z_p} f dμ`, exactly when a closed form is known.
pub fn integrate_zp(f: &Integrand, ctx: &PadicContext) -> Result<Integral> {
    f.check_period()?;
    match f {
        Integrand::Polynomial(poly) => Ok(Integral::exact(polynomial_integral(poly, ctx))),
        Integrand::TwistedPower { k, .. } if *k < 0 => Err(Error::domain(
            "negative powers are only integrable over the units",
        )),
        Integrand::TwistedPower { chi, k, shift } => {
            Ok(Integral::exact(twisted_integral(chi, *k as usize, shift, ctx)?))
        }
        Integrand::Generic { .. } => integrate_by_partial_sums(f, ctx, false),
    }
}

/// `∫_{Z_p^×} f dμ`. For closed-form integrands this is
/// `I(f) - I(y ↦ f(p y))`, using `(-1)^{p b} = (-1)^b`.
pub fn integrate_units(f: &Integrand, ctx: &PadicContext) -> Result<Integral> {
    f.check_period()?;
    let p = BigRational::from_integer(ctx.p().into());
    match f {
        Integrand::Polynomial(poly) => {
            let scaled = poly.substitute_affine(&p, &BigRational::zero());
            let value = polynomial_integral(poly, ctx).checked_sub(&polynomial_integral(&scaled, ctx))?;
            Ok(Integral::exact(value))
        }
        Integrand::TwistedPower { chi, k, shift } if *k >= 0 => {
            let k = *k as usize;
            let whole = twisted_integral(chi, k, shift, ctx)?;
            // χ(p y)(x + p y)^k = χ(p) p^k χ(y)(x/p + y)^k
            let chi_p = chi.eval_padic(ctx.p() as i64, ctx)?;
            let value = if chi_p.is_exact_zero() {
                whole
            } else {
                let inner = twisted_integral(chi, k, &(shift / &p), ctx)?;
                let pk = PadicNumber::from_rational(&num_traits::pow(p, k), ctx);
                whole.checked_sub(&(&(&chi_p * &pk) * &inner))?
            };
            Ok(Integral::exact(value))
        }
        _ => integrate_by_partial_sums(f, ctx, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow_mod, rat, rat_int};
    use crate::character::characters_mod;
    use crate::euler::euler_number;
    use crate::generalized::gen_euler;

    fn generic_power(n: u32, p: u64, ctx: &PadicContext) -> Integrand {
        let modulus = p.pow(ctx.cap());
        let ctx = ctx.clone();
        Integrand::generic(0, 1, move |a, _| {
            Ok(PadicNumber::from_u64(pow_mod(a, n as u64, modulus), &ctx))
        })
    }

    #[test]
    fn exact_examples() {
        let ctx = PadicContext::with_default_guard(5, 6).unwrap();
        assert_eq!(
            integrate_zp(&Integrand::power(0), &ctx).unwrap().value,
            PadicNumber::one(&ctx).to_target()
        );
        assert_eq!(
            integrate_zp(&Integrand::power(7), &ctx).unwrap().value,
            PadicNumber::from_rational(&rat(17, 8), &ctx).to_target()
        );
        let chi = DirichletCharacter::quadratic(3).unwrap();
        let v = integrate_zp(&Integrand::twisted(chi, 0, rat_int(0)), &ctx).unwrap().value;
        assert!(v.is_congruent(&PadicNumber::from_i64(-2, &ctx), 6));
        assert!(integrate_zp(&Integrand::twisted(characters_mod(1)[0].clone(), -1, rat_int(0)), &ctx).is_err());
    }

    #[test]
    fn partial_sums_reproduce_euler_numbers() {
        for p in [3u64, 5] {
            let ctx = PadicContext::with_default_guard(p, 4).unwrap();
            for n in 0..=6u32 {
                let got = integrate_by_partial_sums(&generic_power(n, p, &ctx), &ctx, false).unwrap();
                let want = PadicNumber::from_rational(&euler_number(n as usize), &ctx);
                assert!(got.value.is_congruent(&want, 4), "p = {p}, n = {n}");
                assert_eq!(got.route, Route::PartialSums);
                // increments shrink at least as fast as p^N
                for w in got.trace.windows(2) {
                    let d = w[1].value.checked_sub(&w[0].value).unwrap();
                    assert!(d.valuation_bound().unwrap() >= w[0].level as i64, "p = {p}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn twisted_powers_by_both_routes() {
        let p = 5;
        let ctx = PadicContext::with_default_guard(p, 3).unwrap();
        for f in [3u64, 5] {
            for chi in characters_mod(f).into_iter().filter(|c| c.is_embeddable(p)) {
                for k in 0..=3i64 {
                    for x in [rat_int(0), rat(1, 2)] {
                        let spec = Integrand::twisted(chi.clone(), k, x.clone());
                        let exact = integrate_zp(&spec, &ctx).unwrap();
                        let sums = integrate_by_partial_sums(&spec, &ctx, false).unwrap();
                        assert!(exact.value.is_congruent(&sums.value, 3), "{chi}, k = {k}, x = {x}");
                        let exact_u = integrate_units(&spec, &ctx).unwrap();
                        let sums_u = integrate_by_partial_sums(&spec, &ctx, true).unwrap();
                        assert!(exact_u.value.is_congruent(&sums_u.value, 3), "units {chi}, k = {k}");
                    }
                }
                let e1 = gen_euler(&chi, 1).unwrap().embed(&ctx).unwrap();
                let direct = integrate_zp(&Integrand::twisted(chi.clone(), 1, rat_int(0)), &ctx).unwrap();
                assert!(direct.value.is_congruent(&e1, 3));
            }
        }
    }

    #[test]
    fn unit_integral_examples() {
        let ctx = PadicContext::with_default_guard(5, 4).unwrap();
        let one = integrate_by_partial_sums(&Integrand::power(0), &ctx, true).unwrap();
        assert!(one.value.is_congruent(&PadicNumber::zero(&ctx), 4));
        assert!(integrate_units(&Integrand::power(0), &ctx).unwrap().value.is_zero());
        let sq = integrate_units(&Integrand::power(2), &ctx).unwrap();
        assert!(sq.value.is_zero());
        for n in 0..6 {
            let exact = integrate_units(&Integrand::power(n), &ctx).unwrap();
            let sums = integrate_by_partial_sums(&Integrand::power(n), &ctx, true).unwrap();
            assert!(exact.value.is_congruent(&sums.value, 4), "n = {n}");
        }
    }

    #[test]
    fn broken_contract_does_not_converge() {
        let ctx = PadicContext::with_default_guard(3, 3).unwrap();
        // depends on the level, not on the point
        let f = Integrand::generic(0, 1, {
            let ctx = ctx.clone();
            move |_, n| Ok(PadicNumber::from_u64(n as u64 % 2, &ctx))
        });
        assert!(matches!(
            integrate_zp(&f, &ctx),
            Err(Error::NonConvergence { .. })
        ));
        assert!(integrate_zp(&Integrand::generic(0, 2, |_, _| unreachable!()), &ctx).is_err());
    }
}
