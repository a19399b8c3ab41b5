//! Exact arithmetic in `Q(ζ_d) = Q[x] / Φ_d(x)`.
//!
//! Elements are stored in the power basis `1, ζ, ..., ζ^{φ(d)-1}`. Sums of
//! roots of unity are usually accumulated in the group ring `Q[Z/d]` first
//! (see [`RootSum`]) and reduced once, which avoids a polynomial division per
//! term.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::arith::{self, divisors, format_rational, primitive_root, totient};
use crate::error::{Error, Result};
use crate::padic::{teichmuller_residue, PadicContext, PadicNumber, PadicSum};

/// Integer coefficients of `Φ_d`, lowest degree first.
pub fn cyclotomic_polynomial(d: u64) -> Arc<Vec<BigInt>> {
    static CACHE: LazyLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> =
        LazyLock::new(|| RwLock::new(HashMap::new()));
    assert!(d >= 1, "cyclotomic polynomial of order 0");
    if let Some(c) = CACHE.read().expect("cache poisoned").get(&d) {
        return Arc::clone(c);
    }
    // x^d - 1 divided by Φ_e for every proper divisor e.
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = BigInt::from(-1);
    num[d as usize] = BigInt::one();
    for e in divisors(d) {
        if e < d {
            num = exact_divide(&num, &cyclotomic_polynomial(e));
        }
    }
    let out = Arc::new(num);
    CACHE
        .write()
        .expect("cache poisoned")
        .insert(d, Arc::clone(&out));
    out
}

/// Quotient of monic integer polynomials known to divide exactly.
fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, b) in den.iter().enumerate() {
            rem[i + j] -= &c * b;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Power-basis coordinates of `ζ_d^j` for `j = 0..d`.
fn root_table(d: u64) -> Arc<Vec<Vec<BigInt>>> {
    static CACHE: LazyLock<RwLock<HashMap<u64, Arc<Vec<Vec<BigInt>>>>>> =
        LazyLock::new(|| RwLock::new(HashMap::new()));
    if let Some(t) = CACHE.read().expect("cache poisoned").get(&d) {
        return Arc::clone(t);
    }
    let phi = cyclotomic_polynomial(d);
    let deg = phi.len() - 1;
    let mut rows = Vec::with_capacity(d as usize);
    let mut cur = vec![BigInt::zero(); deg];
    cur[0] = BigInt::one();
    for _ in 0..d {
        rows.push(cur.clone());
        // multiply by x and reduce with the monic Φ_d
        let top = cur[deg - 1].clone();
        let mut next = vec![BigInt::zero(); deg];
        for i in (1..deg).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..deg {
                next[i] -= &top * &phi[i];
            }
        }
        cur = next;
    }
    let out = Arc::new(rows);
    CACHE
        .write()
        .expect("cache poisoned")
        .insert(d, Arc::clone(&out));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    pub fn zero(order: u64) -> Self {
        CyclotomicElement {
            order,
            coeffs: vec![BigRational::zero(); totient(order) as usize],
        }
    }

    pub fn from_rational(q: BigRational, order: u64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(BigRational::one(), order)
    }

    /// `ζ_d^j`.
    pub fn root_of_unity(order: u64, j: u64) -> Self {
        let table = root_table(order);
        CyclotomicElement {
            order,
            coeffs: table[(j % order) as usize]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// The same element viewed in `Q(ζ_e)` for a multiple `e` of the order.
    pub fn lift(&self, e: u64) -> Self {
        assert!(e % self.order == 0, "{e} is not a multiple of {}", self.order);
        let step = e / self.order;
        let table = root_table(e);
        let mut out = vec![BigRational::zero(); table[0].len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&table[i * step as usize]) {
                if !r.is_zero() {
                    *o += c * BigRational::from_integer(r.clone());
                }
            }
        }
        CyclotomicElement {
            order: e,
            coeffs: out,
        }
    }

    /// True when every coefficient has a power-of-two denominator.
    pub fn has_two_power_denominators(&self) -> bool {
        self.coeffs.iter().all(arith::has_two_power_denominator)
    }

    /// Image under the canonical embedding `ζ_d ↦ ω(g^{(p-1)/d})`, `g` the
    /// smallest primitive root modulo `p`.
    pub fn embed(&self, ctx: &PadicContext) -> Result<PadicNumber> {
        let zeta = embedded_root(self.order, ctx)?;
        let mut acc = PadicSum::new(ctx);
        let mut power = PadicNumber::one(ctx);
        for c in &self.coeffs {
            if !c.is_zero() {
                acc.add(&(&PadicNumber::from_rational(c, ctx) * &power));
            }
            power = &power * &zeta;
        }
        Ok(acc.finish())
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let e = arith::lcm(self.order, other.order);
        (self.lift(e), other.lift(e))
    }
}

/// Image of `ζ_d` under the canonical embedding.
pub fn embedded_root(d: u64, ctx: &PadicContext) -> Result<PadicNumber> {
    let p = ctx.p();
    if (p - 1) % d != 0 {
        return Err(Error::NotEmbeddable { order: d, p });
    }
    let g = primitive_root(p).expect("primes have primitive roots");
    Ok(teichmuller_residue(
        arith::pow_mod(g, (p - 1) / d, p),
        ctx,
    ))
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        let (a, b) = self.align(rhs);
        CyclotomicElement {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        let (a, b) = self.align(rhs);
        let mut sum = RootSum::new(a.order);
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    sum.add((i + j) as u64, &(x * y));
                }
            }
        }
        sum.finish()
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})*z{}", format_rational(c), self.order)?,
                _ => write!(f, "({})*z{}^{i}", format_rational(c), self.order)?,
            }
        }
        Ok(())
    }
}

/// `{"coeffs": [...], "order": d}` in the power basis of `ζ_d`.
impl Serialize for CyclotomicElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("coeffs", &coeffs)?;
        map.serialize_entry("order", &self.order)?;
        map.end()
    }
}

/// Accumulator for `Σ c_j ζ_d^j` indexed by the exponent `j mod d`.
#[derive(Clone, Debug)]
pub struct RootSum {
    order: u64,
    slots: Vec<BigRational>,
}

impl RootSum {
    pub fn new(order: u64) -> Self {
        RootSum {
            order,
            slots: vec![BigRational::zero(); order as usize],
        }
    }

    pub fn add(&mut self, exponent: u64, c: &BigRational) {
        self.slots[(exponent % self.order) as usize] += c;
    }

    pub fn slots(&self) -> &[BigRational] {
        &self.slots
    }

    pub fn finish(self) -> CyclotomicElement {
        let table = root_table(self.order);
        let mut out = vec![BigRational::zero(); table[0].len()];
        for (c, row) in self.slots.iter().zip(table.iter()) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o += c * BigRational::from_integer(r.clone());
                }
            }
        }
        CyclotomicElement {
            order: self.order,
            coeffs: out,
        }
    }
}
