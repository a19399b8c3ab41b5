//! Capped-precision arithmetic in `Q_p` for an odd prime `p`.
//!
//! A nonzero element is stored as `p^v * u` where `u` is a unit known modulo
//! `p^k`; `k` is the relative precision and never exceeds the context cap
//! `M + G` (target precision plus guard digits). Zero is either exact or an
//! inexact zero `O(p^a)` produced by cancellation, so an exact zero is never
//! confused with a small number.
//!
//! Addition tracks absolute precision (`min(v + k)` over the operands);
//! multiplication and division keep the smaller relative precision.

use std::borrow::Cow;
use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Guard digits used when a caller does not pick their own.
pub const DEFAULT_GUARD: u32 = 3;

struct ContextInner {
    p: u64,
    precision: u32,
    guard: u32,
    p_big: BigUint,
    powers: Vec<BigUint>,
    teichmuller: OnceLock<Vec<BigUint>>,
}

/// Prime, target precision `M` and guard digits `G`; work precision is `M + G`.
#[derive(Clone)]
pub struct PadicContext {
    inner: Arc<ContextInner>,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32, guard: u32) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        let cap = precision + guard;
        let p_big = BigUint::from(p);
        let mut powers = Vec::with_capacity(2 * cap as usize + 2);
        powers.push(BigUint::one());
        for i in 1..=(2 * cap as usize + 1) {
            let next = &powers[i - 1] * &p_big;
            powers.push(next);
        }
        Ok(PadicContext {
            inner: Arc::new(ContextInner {
                p,
                precision,
                guard,
                p_big,
                powers,
                teichmuller: OnceLock::new(),
            }),
        })
    }

    pub fn with_default_guard(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, DEFAULT_GUARD)
    }

    /// Same prime, different target precision and guard.
    pub fn with_precision(&self, precision: u32, guard: u32) -> Result<Self> {
        Self::new(self.p(), precision, guard)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn guard(&self) -> u32 {
        self.inner.guard
    }

    /// Work precision `M + G`.
    pub fn cap(&self) -> u32 {
        self.inner.precision + self.inner.guard
    }

    pub(crate) fn p_big(&self) -> &BigUint {
        &self.inner.p_big
    }

    /// `p^k`, cached for small `k`.
    pub fn pow_p(&self, k: u32) -> Cow<'_, BigUint> {
        match self.inner.powers.get(k as usize) {
            Some(x) => Cow::Borrowed(x),
            None => Cow::Owned(num_traits::pow(self.inner.p_big.clone(), k as usize)),
        }
    }

    /// Teichmüller representatives of `0..p` modulo `p^cap` (entry 0 is 0).
    pub(crate) fn teichmuller_table(&self) -> &[BigUint] {
        self.inner.teichmuller.get_or_init(|| {
            let p = self.p();
            let modulus = self.pow_p(self.cap()).into_owned();
            let exp = BigUint::from(p);
            let mut table = vec![BigUint::zero()];
            for r in 1..p {
                let mut x = BigUint::from(r);
                // x -> x^p gains one p-adic digit per step.
                for _ in 0..=self.cap() {
                    let y = x.modpow(&exp, &modulus);
                    if y == x {
                        break;
                    }
                    x = y;
                }
                table.push(x);
            }
            table
        })
    }
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.p() == other.p()
                && self.precision() == other.precision()
                && self.guard() == other.guard())
    }
}

impl Eq for PadicContext {}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PadicContext")
            .field("p", &self.p())
            .field("precision", &self.precision())
            .field("guard", &self.guard())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Exact zero (`None`) or zero known modulo `p^a`.
    Zero(Option<i64>),
    /// `p^val * unit`, `unit` a unit modulo `p^prec`.
    Nonzero { val: i64, unit: BigUint, prec: u32 },
}

/// Equality is representational: same context, valuation, digits and precision.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    ctx: PadicContext,
    repr: Repr,
}

impl PadicNumber {
    pub fn zero(ctx: &PadicContext) -> Self {
        PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::Zero(None),
        }
    }

    /// Zero known only modulo `p^abs`.
    pub fn zero_mod(ctx: &PadicContext, abs: i64) -> Self {
        PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::Zero(Some(abs)),
        }
    }

    pub fn one(ctx: &PadicContext) -> Self {
        Self::from_u64(1, ctx)
    }

    pub fn from_u64(n: u64, ctx: &PadicContext) -> Self {
        if n == 0 {
            return Self::zero(ctx);
        }
        let p = ctx.p();
        let mut n = n;
        let mut val = 0i64;
        while n % p == 0 {
            n /= p;
            val += 1;
        }
        let cap = ctx.cap();
        let unit = BigUint::from(n) % ctx.pow_p(cap).as_ref();
        PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::Nonzero {
                val,
                unit,
                prec: cap,
            },
        }
    }

    pub fn from_i64(n: i64, ctx: &PadicContext) -> Self {
        let x = Self::from_u64(n.unsigned_abs(), ctx);
        if n < 0 {
            -x
        } else {
            x
        }
    }

    pub fn from_bigint(n: &BigInt, ctx: &PadicContext) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()), ctx)
    }

    /// Canonical embedding `Q -> Q_p` at full work precision.
    pub fn from_rational(q: &BigRational, ctx: &PadicContext) -> Self {
        if q.is_zero() {
            return Self::zero(ctx);
        }
        let p = ctx.p();
        let vn = arith::valuation_int(q.numer(), p);
        let vd = arith::valuation_int(q.denom(), p);
        let pb = BigInt::from(p);
        let n = q.numer() / num_traits::pow(pb.clone(), vn as usize);
        let d = q.denom() / num_traits::pow(pb, vd as usize);
        let cap = ctx.cap();
        let modulus = BigInt::from(ctx.pow_p(cap).into_owned());
        let d_inv = mod_inverse_int(&d, &modulus);
        let unit = (n * d_inv).mod_floor(&modulus);
        PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::Nonzero {
                val: vn as i64 - vd as i64,
                unit: unit.to_biguint().expect("reduced residue is non-negative"),
                prec: cap,
            },
        }
    }

    /// `p^val * x` where `x` is known modulo `p^width`; strips factors of `p`.
    fn normalize(ctx: &PadicContext, val: i64, x: BigUint, width: u32) -> Self {
        let mut x = x % ctx.pow_p(width).as_ref();
        if x.is_zero() {
            return Self::zero_mod(ctx, val + width as i64);
        }
        let p = ctx.p_big();
        let mut t = 0u32;
        loop {
            let (q, r) = x.div_rem(p);
            if !r.is_zero() {
                break;
            }
            x = q;
            t += 1;
        }
        let mut prec = width - t;
        if prec > ctx.cap() {
            prec = ctx.cap();
            x %= ctx.pow_p(prec).as_ref();
        }
        PadicNumber {
            ctx: ctx.clone(),
            repr: Repr::Nonzero {
                val: val + t as i64,
                unit: x,
                prec,
            },
        }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// `None` for zero (exact or inexact).
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Nonzero { val, .. } => Some(val),
            Repr::Zero(_) => None,
        }
    }

    /// Lower bound on the valuation: the valuation itself, the known absolute
    /// precision of an inexact zero, or `None` for an exact zero.
    pub fn valuation_bound(&self) -> Option<i64> {
        match self.repr {
            Repr::Nonzero { val, .. } => Some(val),
            Repr::Zero(abs) => abs,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero(None))
    }

    /// True for an exact zero and for a zero known to some precision.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero(_))
    }

    /// Number of trustworthy unit digits.
    pub fn relative_precision(&self) -> u32 {
        match self.repr {
            Repr::Nonzero { prec, .. } => prec,
            Repr::Zero(_) => 0,
        }
    }

    /// The value is known modulo `p^a`; `None` means exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Nonzero { val, prec, .. } => Some(val + prec as i64),
            Repr::Zero(abs) => abs,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Nonzero { unit, .. } => Some(unit),
            Repr::Zero(_) => None,
        }
    }

    /// Base-`p` digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero(_) => Vec::new(),
            Repr::Nonzero { unit, prec, .. } => {
                let p = self.ctx.p_big();
                let mut x = unit.clone();
                (0..*prec)
                    .map(|_| {
                        let (q, r) = x.div_rem(p);
                        x = q;
                        r.to_u64().expect("digit below p")
                    })
                    .collect()
            }
        }
    }

    /// Drops every digit at or beyond `p^abs`.
    pub fn truncate(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero(None) => self.clone(),
            Repr::Zero(Some(a)) => Self::zero_mod(&self.ctx, min(*a, abs)),
            Repr::Nonzero { val, unit, prec } => {
                if *val >= abs {
                    return Self::zero_mod(&self.ctx, abs);
                }
                let k = min(*prec as i64, abs - val) as u32;
                let unit = if k < *prec {
                    unit % self.ctx.pow_p(k).as_ref()
                } else {
                    unit.clone()
                };
                PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::Nonzero {
                        val: *val,
                        unit,
                        prec: k,
                    },
                }
            }
        }
    }

    /// Truncates to the context's target precision `p^M`.
    pub fn to_target(&self) -> Self {
        self.truncate(self.ctx.precision() as i64)
    }

    /// Residue modulo `p^k` of a `p`-integral number.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        let modulus = self.ctx.pow_p(k);
        match &self.repr {
            Repr::Zero(None) => Ok(BigUint::zero()),
            Repr::Zero(Some(a)) if *a >= k as i64 => Ok(BigUint::zero()),
            Repr::Zero(Some(a)) => Err(Error::PrecisionExhausted(format!(
                "value only known mod p^{a}, requested p^{k}"
            ))),
            Repr::Nonzero { val, unit, prec } => {
                if *val < 0 {
                    return Err(Error::domain("residue of a non-integral p-adic number"));
                }
                if val + (*prec as i64) < k as i64 {
                    return Err(Error::PrecisionExhausted(format!(
                        "value only known mod p^{}, requested p^{k}",
                        val + *prec as i64
                    )));
                }
                if *val >= k as i64 {
                    return Ok(BigUint::zero());
                }
                Ok(unit * self.ctx.pow_p(*val as u32).as_ref() % modulus.as_ref())
            }
        }
    }

    /// True when `self - other` is known to be divisible by `p^k`.
    pub fn is_congruent(&self, other: &PadicNumber, k: i64) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        match (self - other).repr {
            Repr::Zero(None) => true,
            Repr::Zero(Some(a)) => a >= k,
            Repr::Nonzero { val, .. } => val >= k,
        }
    }

    /// Valuation of `self - other`, or the precision to which they agree when
    /// the difference is an inexact zero. `None` means exactly equal.
    pub fn agreement(&self, other: &PadicNumber) -> Option<i64> {
        (self - other).valuation_bound()
    }

    fn check_ctx(&self, other: &PadicNumber) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &PadicNumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_sub(&self, other: &PadicNumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.add_impl(&other.neg_impl()))
    }

    pub fn checked_mul(&self, other: &PadicNumber) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn checked_div(&self, other: &PadicNumber) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (_, Repr::Zero(_)) => Err(Error::DivisionByZero),
            (Repr::Zero(None), _) => Ok(self.clone()),
            (Repr::Zero(Some(a)), Repr::Nonzero { val, .. }) => Ok(Self::zero_mod(ctx, a - val)),
            (
                Repr::Nonzero {
                    val: v1,
                    unit: u1,
                    prec: k1,
                },
                Repr::Nonzero {
                    val: v2,
                    unit: u2,
                    prec: k2,
                },
            ) => {
                let k = min(*k1, *k2);
                let modulus = ctx.pow_p(k);
                let inv = mod_inverse(&(u2 % modulus.as_ref()), modulus.as_ref());
                Ok(PadicNumber {
                    ctx: ctx.clone(),
                    repr: Repr::Nonzero {
                        val: v1 - v2,
                        unit: u1 * inv % modulus.as_ref(),
                        prec: k,
                    },
                })
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(&self.ctx).checked_div(self)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    fn add_impl(&self, other: &PadicNumber) -> Self {
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (Repr::Zero(None), _) => other.clone(),
            (_, Repr::Zero(None)) => self.clone(),
            (Repr::Zero(Some(a)), Repr::Zero(Some(b))) => Self::zero_mod(ctx, min(*a, *b)),
            (Repr::Zero(Some(a)), _) => other.truncate(*a),
            (_, Repr::Zero(Some(b))) => self.truncate(*b),
            (
                Repr::Nonzero {
                    val: v1,
                    unit: u1,
                    prec: k1,
                },
                Repr::Nonzero {
                    val: v2,
                    unit: u2,
                    prec: k2,
                },
            ) => {
                let v = min(*v1, *v2);
                let abs = min(v1 + *k1 as i64, v2 + *k2 as i64);
                let width = (abs - v) as u32;
                let shifted = |u: &BigUint, vi: i64| -> Option<BigUint> {
                    let shift = vi - v;
                    if shift >= width as i64 {
                        None
                    } else if shift == 0 {
                        Some(u.clone())
                    } else {
                        Some(u * ctx.pow_p(shift as u32).as_ref())
                    }
                };
                let x = match (shifted(u1, *v1), shifted(u2, *v2)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => BigUint::zero(),
                };
                Self::normalize(ctx, v, x, width)
            }
        }
    }

    fn neg_impl(&self) -> Self {
        match &self.repr {
            Repr::Zero(_) => self.clone(),
            Repr::Nonzero { val, unit, prec } => PadicNumber {
                ctx: self.ctx.clone(),
                repr: Repr::Nonzero {
                    val: *val,
                    unit: self.ctx.pow_p(*prec).as_ref() - unit,
                    prec: *prec,
                },
            },
        }
    }

    fn mul_impl(&self, other: &PadicNumber) -> Self {
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (Repr::Zero(None), _) | (_, Repr::Zero(None)) => Self::zero(ctx),
            (Repr::Zero(Some(a)), Repr::Zero(Some(b))) => Self::zero_mod(ctx, a + b),
            (Repr::Zero(Some(a)), Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero(Some(a))) => Self::zero_mod(ctx, a + val),
            (
                Repr::Nonzero {
                    val: v1,
                    unit: u1,
                    prec: k1,
                },
                Repr::Nonzero {
                    val: v2,
                    unit: u2,
                    prec: k2,
                },
            ) => {
                let k = min(*k1, *k2);
                PadicNumber {
                    ctx: ctx.clone(),
                    repr: Repr::Nonzero {
                        val: v1 + v2,
                        unit: u1 * u2 % ctx.pow_p(k).as_ref(),
                        prec: k,
                    },
                }
            }
        }
    }
}

fn mod_inverse_int(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = a.mod_floor(modulus).extended_gcd(modulus);
    debug_assert!(e.gcd.is_one(), "inverse of a non-unit");
    e.x.mod_floor(modulus)
}

fn mod_inverse(a: &BigUint, modulus: &BigUint) -> BigUint {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    mod_inverse_int(&a, &m)
        .to_biguint()
        .expect("reduced residue is non-negative")
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a PadicNumber> for &'a PadicNumber {
            type Output = PadicNumber;
            /// Panics when the operands come from different contexts.
            fn $method(self, rhs: &'a PadicNumber) -> PadicNumber {
                assert!(self.ctx == rhs.ctx, "p-adic context mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &PadicNumber, b: &PadicNumber| a.add_impl(b));
forward_binop!(Sub, sub, |a: &PadicNumber, b: &PadicNumber| a
    .add_impl(&b.neg_impl()));
forward_binop!(Mul, mul, |a: &PadicNumber, b: &PadicNumber| a.mul_impl(b));

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber({self})")
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        match &self.repr {
            Repr::Zero(None) => write!(f, "0"),
            Repr::Zero(Some(a)) => write!(f, "O({p}^{a})"),
            Repr::Nonzero { val, unit, prec } => {
                if *val == 0 {
                    write!(f, "{unit}")?;
                } else {
                    write!(f, "{p}^{val} * {unit}")?;
                }
                write!(f, " + O({p}^{})", val + *prec as i64)
            }
        }
    }
}

/// JSON form: `{"digits": [...], "p": p, "precision": k, "valuation": v | "inf"}`.
///
/// An exact zero has valuation `"inf"`; a zero known modulo `p^a` has
/// valuation `a` with no digits.
impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("digits", &self.digits())?;
        map.serialize_entry("p", &self.p())?;
        map.serialize_entry("precision", &self.relative_precision())?;
        match &self.repr {
            Repr::Zero(None) => map.serialize_entry("valuation", "inf")?,
            Repr::Zero(Some(a)) => map.serialize_entry("valuation", a)?,
            Repr::Nonzero { val, .. } => map.serialize_entry("valuation", val)?,
        }
        map.end()
    }
}

/// Running sum that aligns terms on a common power of `p` and normalizes once.
pub struct PadicSum {
    ctx: PadicContext,
    base: Option<i64>,
    acc: BigUint,
    abs: Option<i64>,
    pending: u32,
}

impl PadicSum {
    pub fn new(ctx: &PadicContext) -> Self {
        PadicSum {
            ctx: ctx.clone(),
            base: None,
            acc: BigUint::zero(),
            abs: None,
            pending: 0,
        }
    }

    pub fn add(&mut self, x: &PadicNumber) {
        debug_assert!(x.ctx == self.ctx);
        match &x.repr {
            Repr::Zero(None) => {}
            Repr::Zero(Some(a)) => self.lower_abs(*a),
            Repr::Nonzero { val, unit, prec } => {
                self.lower_abs(val + *prec as i64);
                match self.base {
                    None => {
                        self.base = Some(*val);
                        self.acc = unit.clone();
                    }
                    Some(base) if *val >= base => {
                        let shift = val - base;
                        let width = self.abs.expect("set above") - base;
                        if shift < width {
                            if shift == 0 {
                                self.acc += unit;
                            } else {
                                self.acc += unit * self.ctx.pow_p(shift as u32).as_ref();
                            }
                        }
                    }
                    Some(base) => {
                        self.acc *= self.ctx.pow_p((base - val) as u32).as_ref();
                        self.acc += unit;
                        self.base = Some(*val);
                    }
                }
                self.pending += 1;
                if self.pending >= 64 {
                    self.reduce();
                }
            }
        }
    }

    fn lower_abs(&mut self, a: i64) {
        self.abs = Some(self.abs.map_or(a, |b| min(a, b)));
    }

    fn reduce(&mut self) {
        if let (Some(base), Some(abs)) = (self.base, self.abs) {
            let width = (abs - base).max(0) as u32;
            self.acc %= self.ctx.pow_p(width).as_ref();
        }
        self.pending = 0;
    }

    pub fn finish(self) -> PadicNumber {
        match (self.base, self.abs) {
            (None, None) => PadicNumber::zero(&self.ctx),
            (None, Some(a)) => PadicNumber::zero_mod(&self.ctx, a),
            (Some(base), Some(abs)) if abs <= base => PadicNumber::zero_mod(&self.ctx, abs),
            (Some(base), Some(abs)) => {
                PadicNumber::normalize(&self.ctx, base, self.acc, (abs - base) as u32)
            }
            (Some(_), None) => unreachable!("nonzero terms always carry a precision"),
        }
    }
}

/// Sum of an iterator of p-adic numbers from `ctx`.
pub fn sum<'a>(ctx: &PadicContext, iter: impl IntoIterator<Item = &'a PadicNumber>) -> PadicNumber {
    let mut s = PadicSum::new(ctx);
    for x in iter {
        s.add(x);
    }
    s.finish()
}

/// Teichmüller representative `ω(a)`: the `(p-1)`-th root of unity congruent
/// to `a` modulo `p`.
pub fn teichmuller(a: &BigInt, ctx: &PadicContext) -> Result<PadicNumber> {
    let r = a
        .mod_floor(&BigInt::from(ctx.p()))
        .to_u64()
        .expect("residue below p");
    if r == 0 {
        return Err(Error::NotAUnit(a.to_string()));
    }
    Ok(teichmuller_residue(r, ctx))
}

pub(crate) fn teichmuller_residue(r: u64, ctx: &PadicContext) -> PadicNumber {
    PadicNumber {
        ctx: ctx.clone(),
        repr: Repr::Nonzero {
            val: 0,
            unit: ctx.teichmuller_table()[r as usize].clone(),
            prec: ctx.cap(),
        },
    }
}

/// `ω` of the unit part of a nonzero p-adic number.
fn unit_teichmuller(x: &PadicNumber) -> Result<PadicNumber> {
    match &x.repr {
        Repr::Nonzero { unit, .. } => {
            let r = (unit % x.ctx.p_big()).to_u64().expect("residue below p");
            Ok(teichmuller_residue(r, &x.ctx))
        }
        Repr::Zero(_) => Err(Error::domain("angle of zero is undefined")),
    }
}

/// `⟨x⟩ = x / (p^v ω(x / p^v))`, a unit congruent to 1 modulo `p`.
pub fn angle(x: &PadicNumber) -> Result<PadicNumber> {
    let w = unit_teichmuller(x)?;
    match &x.repr {
        Repr::Nonzero { unit, prec, .. } => {
            let unit_part = PadicNumber {
                ctx: x.ctx.clone(),
                repr: Repr::Nonzero {
                    val: 0,
                    unit: unit.clone(),
                    prec: *prec,
                },
            };
            unit_part.checked_div(&w)
        }
        Repr::Zero(_) => unreachable!(),
    }
}

/// `ω_v(x) = p^v ω(x / p^v)`, so that `x = ω_v(x) ⟨x⟩`.
pub fn omega_v(x: &PadicNumber) -> Result<PadicNumber> {
    let w = unit_teichmuller(x)?;
    let v = x.valuation().expect("nonzero");
    Ok(PadicNumber {
        ctx: x.ctx.clone(),
        repr: Repr::Nonzero {
            val: v,
            unit: w.unit().expect("unit").clone(),
            prec: x.ctx.cap(),
        },
    })
}

/// Both halves of the decomposition `x = ω_v(x) ⟨x⟩` for a nonzero rational.
pub fn angle_omega_v(x: &BigRational, ctx: &PadicContext) -> Result<(PadicNumber, PadicNumber)> {
    if x.is_zero() {
        return Err(Error::domain("angle of zero is undefined"));
    }
    let xp = PadicNumber::from_rational(x, ctx);
    Ok((angle(&xp)?, omega_v(&xp)?))
}

/// `s (s-1) ... (s-i+1) / i!`.
pub fn binom_coeff(s: &PadicNumber, i: u64) -> Result<PadicNumber> {
    let ctx = s.context();
    let mut num = PadicNumber::one(ctx);
    for j in 0..i {
        num = &num * &(s - &PadicNumber::from_u64(j, ctx));
    }
    let fact: BigInt = (1..=i).map(BigInt::from).product();
    let loss = arith::factorial_valuation(i, ctx.p()) as i64;
    if let Repr::Zero(Some(a)) = num.repr {
        if a - loss < 1 && s.valuation_bound().map_or(true, |v| v >= 0) {
            return Err(Error::PrecisionExhausted(format!(
                "binomial coefficient of index {i} needs more than {} digits",
                ctx.cap()
            )));
        }
    }
    num.checked_div(&PadicNumber::from_bigint(&fact, ctx))
}

/// `binom(s, 0), binom(s, 1), ...` computed incrementally.
pub fn binomial_sequence(s: &PadicNumber) -> impl Iterator<Item = PadicNumber> + '_ {
    let ctx = s.context().clone();
    let mut current = PadicNumber::one(&ctx);
    let mut i = 0u64;
    std::iter::from_fn(move || {
        let out = current.clone();
        i += 1;
        let factor = s - &PadicNumber::from_u64(i - 1, &ctx);
        current = (&current * &factor)
            .checked_div(&PadicNumber::from_u64(i, &ctx))
            .expect("i is nonzero");
        Some(out)
    })
}

/// `a^s = Σ binom(s, n) (a - 1)^n` for `a ≡ 1 (mod p)` and `s ∈ Z_p`.
pub fn power_angle(base: &PadicNumber, s: &PadicNumber) -> Result<PadicNumber> {
    if base.context() != s.context() {
        return Err(Error::ContextMismatch);
    }
    let ctx = base.context();
    if base.valuation() != Some(0) {
        return Err(Error::NotAUnit(base.to_string()));
    }
    if let Some(v) = s.valuation() {
        if v < 0 {
            return Err(Error::domain(format!(
                "exponent {s} is outside Z_p (valuation {v})"
            )));
        }
    }
    let one = PadicNumber::one(ctx);
    let d = base - &one;
    let vd = match d.valuation_bound() {
        None => return Ok(one),
        Some(v) if v < 1 => {
            return Err(Error::domain(format!("{base} is not congruent to 1 mod p")))
        }
        Some(v) => v,
    };
    if s.is_exact_zero() {
        return Ok(one);
    }
    // Term n has valuation at least n * v(a - 1) because binom(s, n) ∈ Z_p.
    let cap = ctx.cap() as i64;
    let n_terms = (cap + vd - 1) / vd + 1;
    let mut acc = PadicSum::new(ctx);
    let mut d_pow = one.clone();
    for (n, b) in binomial_sequence(s).enumerate().take(n_terms as usize) {
        if n > 0 {
            d_pow = &d_pow * &d;
        }
        acc.add(&(&b * &d_pow));
    }
    Ok(acc.finish().truncate(n_terms * vd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use proptest::prelude::*;

    fn ctx(p: u64, m: u32, g: u32) -> PadicContext {
        PadicContext::new(p, m, g).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn rejects_bad_contexts() {
        assert_eq!(PadicContext::new(2, 4, 0).unwrap_err(), Error::InvalidPrime(2));
        assert_eq!(PadicContext::new(9, 4, 0).unwrap_err(), Error::InvalidPrime(9));
        assert_eq!(PadicContext::new(5, 0, 2).unwrap_err(), Error::InvalidPrecision);
    }

    #[test]
    fn from_rational_examples() {
        let c = ctx(5, 4, 0);
        let one = PadicNumber::from_rational(&rat_int(1), &c);
        assert_eq!((one.valuation(), one.unit()), (Some(0), Some(&big(1))));
        let ten = PadicNumber::from_rational(&rat_int(10), &c);
        assert_eq!((ten.valuation(), ten.unit()), (Some(1), Some(&big(2))));

        // 691 * 4^{-1} mod 5^6 via the extended-gcd oracle.
        let c = ctx(5, 4, 2);
        let x = PadicNumber::from_rational(&rat(691, 4), &c);
        let m = 15625u64;
        let inv4 = (1..m).find(|i| 4 * i % m == 1).unwrap();
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.unit(), Some(&big(691 * inv4 % m)));
        assert!(PadicNumber::from_rational(&rat_int(0), &c).is_exact_zero());
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx(5, 4, 0);
        let s = PadicNumber::from_i64(2, &c) + PadicNumber::from_i64(3, &c);
        assert_eq!((s.valuation(), s.unit()), (Some(1), Some(&big(1))));
        // Cancellation costs one digit.
        assert_eq!(s.relative_precision(), 3);

        let a = PadicNumber::from_rational(&rat(5 * 2, 1), &c);
        let b = PadicNumber::from_rational(&rat(25 * 3, 1), &c);
        assert_eq!((&a * &b).valuation(), Some(3));

        let q = PadicNumber::one(&c)
            .checked_div(&PadicNumber::from_i64(3, &c))
            .unwrap();
        assert_eq!(q.unit(), Some(&big(417)));

        assert_eq!(
            PadicNumber::one(&c).checked_div(&PadicNumber::zero(&c)),
            Err(Error::DivisionByZero)
        );
        let other = ctx(5, 5, 0);
        assert_eq!(
            PadicNumber::one(&c).checked_add(&PadicNumber::one(&other)),
            Err(Error::ContextMismatch)
        );
    }

    #[test]
    fn exact_and_inexact_zero() {
        let c = ctx(5, 4, 0);
        let z = PadicNumber::zero(&c);
        let x = PadicNumber::from_i64(7, &c);
        assert!((&z * &x).is_exact_zero());
        let d = &x - &x;
        assert!(d.is_zero() && !d.is_exact_zero());
        assert_eq!(d.absolute_precision(), Some(4));
        assert_eq!(x.truncate(2).absolute_precision(), Some(2));
    }

    #[test]
    fn teichmuller_examples() {
        let c = ctx(5, 4, 0);
        let w = teichmuller(&BigInt::from(2), &c).unwrap();
        assert_eq!(w.unit(), Some(&big(182)));
        assert_eq!(182u64 * 182 % 625, 624);
        let one = teichmuller(&BigInt::from(1), &c).unwrap();
        assert_eq!(one.unit(), Some(&big(1)));
        let minus = teichmuller(&BigInt::from(4), &c).unwrap();
        assert_eq!(minus.unit(), Some(&big(624)));
        assert!(matches!(
            teichmuller(&BigInt::from(10), &c),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in [3u64, 5, 7, 11, 13] {
            let c = ctx(p, 6, 2);
            for a in 1..p {
                let w = teichmuller(&BigInt::from(a), &c).unwrap();
                let one = PadicNumber::one(&c);
                assert!(w.pow((p - 1) as i64).unwrap().is_congruent(&one, 8));
                assert!(w.is_congruent(&PadicNumber::from_u64(a, &c), 1));
            }
        }
    }

    #[test]
    fn angle_examples() {
        let c = ctx(5, 4, 0);
        let (a, w) = angle_omega_v(&rat_int(1), &c).unwrap();
        assert_eq!((a.unit(), w.unit()), (Some(&big(1)), Some(&big(1))));
        let (a, w) = angle_omega_v(&rat_int(5), &c).unwrap();
        assert_eq!(a.unit(), Some(&big(1)));
        assert_eq!((w.valuation(), w.unit()), (Some(1), Some(&big(1))));
        let (a, w) = angle_omega_v(&rat_int(2), &c).unwrap();
        assert_eq!(w.unit(), Some(&big(182)));
        let inv182 = (1..625u64).find(|i| 182 * i % 625 == 1).unwrap();
        assert_eq!(a.unit(), Some(&big(2 * inv182 % 625)));
        assert!(angle_omega_v(&rat_int(0), &c).is_err());
    }

    #[test]
    fn binomial_examples() {
        let c = ctx(5, 4, 2);
        let s = PadicNumber::from_rational(&rat(7, 3), &c);
        assert!(binom_coeff(&s, 0).unwrap().is_congruent(&PadicNumber::one(&c), 6));
        let three = PadicNumber::from_i64(3, &c);
        let b = binom_coeff(&three, 2).unwrap();
        assert!(b.is_congruent(&three, 6));
        // binom(1/2, 2) = (1/2)(-1/2)/2 = -1/8.
        let half = PadicNumber::from_rational(&rat(1, 2), &c);
        let b = binom_coeff(&half, 2).unwrap();
        assert!(b.is_congruent(&PadicNumber::from_rational(&rat(-1, 8), &c), 6));
        assert_eq!(b.valuation(), Some(0));
    }

    #[test]
    fn binomial_of_integers_matches_exact() {
        let c = ctx(5, 6, 3);
        for s in 0..30u64 {
            for i in 0..=s {
                let b = binom_coeff(&PadicNumber::from_u64(s, &c), i).unwrap();
                let exact = PadicNumber::from_bigint(&arith::binomial(s, i), &c);
                // At most v_p(i!) digits are lost to the division by i!.
                let loss = arith::factorial_valuation(i, 5) as i64;
                let abs = b.absolute_precision().unwrap();
                assert!(abs >= 9 - loss, "binom({s},{i}) known to {abs}");
                assert!(b.is_congruent(&exact, abs), "binom({s},{i})");
            }
        }
    }

    #[test]
    fn binomial_sequence_matches_direct() {
        let c = ctx(7, 5, 3);
        let s = PadicNumber::from_rational(&rat(-3, 4), &c);
        for (i, b) in binomial_sequence(&s).take(20).enumerate() {
            let direct = binom_coeff(&s, i as u64).unwrap();
            assert!(b.is_congruent(&direct, 5), "index {i}");
        }
    }

    #[test]
    fn power_angle_examples() {
        let c = ctx(5, 4, 2);
        let (a2, _) = angle_omega_v(&rat_int(2), &c).unwrap();
        let one = PadicNumber::one(&c);
        let zero = PadicNumber::zero(&c);
        assert!(power_angle(&a2, &zero).unwrap().is_congruent(&one, 6));
        assert!(power_angle(&a2, &one).unwrap().is_congruent(&a2, 6));
        let four = PadicNumber::from_i64(4, &c);
        let direct = &(&a2 * &a2) * &(&a2 * &a2);
        assert!(power_angle(&a2, &four).unwrap().is_congruent(&direct, 4));
        let minus = PadicNumber::from_i64(-2, &c);
        let inv = (&a2 * &a2).inverse().unwrap();
        assert!(power_angle(&a2, &minus).unwrap().is_congruent(&inv, 4));

        let not_one = PadicNumber::from_i64(2, &c);
        assert!(power_angle(&not_one, &one).is_err());
        let bad_s = PadicNumber::from_rational(&rat(1, 5), &c);
        assert!(matches!(power_angle(&a2, &bad_s), Err(Error::Domain(_))));
    }

    #[test]
    fn digits_and_json() {
        let c = ctx(5, 2, 0);
        let x = PadicNumber::from_u64(7, &c);
        assert_eq!(x.digits(), vec![2, 1]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"digits":[2,1],"p":5,"precision":2,"valuation":0}"#);
        let z = serde_json::to_string(&PadicNumber::zero(&c)).unwrap();
        assert_eq!(z, r#"{"digits":[],"p":5,"precision":0,"valuation":"inf"}"#);
    }

    fn nonzero_rational() -> impl Strategy<Value = BigRational> {
        (-5000i64..5000, 1i64..5000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn valuation_laws(x in nonzero_rational(), y in nonzero_rational()) {
            let c = ctx(5, 6, 2);
            let px = PadicNumber::from_rational(&x, &c);
            let py = PadicNumber::from_rational(&y, &c);
            let (vx, vy) = (px.valuation().unwrap(), py.valuation().unwrap());
            prop_assert_eq!((&px * &py).valuation(), Some(vx + vy));
            let s = &px + &py;
            if vx != vy {
                prop_assert_eq!(s.valuation(), Some(vx.min(vy)));
            } else if let Some(vs) = s.valuation_bound() {
                prop_assert!(vs >= vx.min(vy));
            }
            // Agreement with exact rational arithmetic.
            let exact = PadicNumber::from_rational(&(&x + &y), &c);
            prop_assert!(s.is_congruent(&exact, s.absolute_precision().unwrap()));
        }

        #[test]
        fn angle_reconstruction(x in nonzero_rational(), p in prop::sample::select(vec![3u64, 5, 7])) {
            let c = ctx(p, 6, 2);
            let (a, w) = angle_omega_v(&x, &c).unwrap();
            let back = &a * &w;
            let px = PadicNumber::from_rational(&x, &c);
            prop_assert!(back.is_congruent(&px, px.valuation().unwrap() + 6));
            prop_assert!(a.is_congruent(&PadicNumber::one(&c), 1));
        }

        #[test]
        fn power_angle_is_additive(
            x in nonzero_rational(), s in -200i64..200, t in 1i64..200, u in 1i64..200,
        ) {
            let c = ctx(5, 6, 3);
            let (a, _) = angle_omega_v(&x, &c).unwrap();
            let s = PadicNumber::from_rational(&rat(s, 5 * t + 2), &c);
            let t = PadicNumber::from_rational(&rat(u, 7), &c);
            let lhs = power_angle(&a, &(&s + &t)).unwrap();
            let rhs = &power_angle(&a, &s).unwrap() * &power_angle(&a, &t).unwrap();
            prop_assert!(lhs.is_congruent(&rhs, 6));
        }
    }
}
