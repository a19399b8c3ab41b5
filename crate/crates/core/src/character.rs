//! Dirichlet characters with values in `Q(ζ_d)`.
//!
//! A character is stored as a full table over `0..f`: entry `a` is `None`
//! when `gcd(a, f) > 1` and `Some(e)` when `χ(a) = ζ_d^e`, `d` being the
//! order of the character. Modulo 1 every integer is a unit, so the trivial
//! character mod 1 has `χ(0) = 1`.
//!
//! Parity follows the convention `δ_χ = 1` for even characters
//! (`χ(-1) = 1`) and `δ_χ = 0` for odd ones.
//!
//! Enumeration order: `(Z/fZ)^×` is written as a product of cyclic groups
//! generated by, in increasing order of the prime, `-1` and `5` for the
//! 2-part (as far as they exist) and the smallest primitive root modulo
//! `q^e` for each odd prime power, each lifted to `f` by the Chinese
//! remainder theorem. The character sending the `i`-th generator (of order
//! `n_i`) to `ζ_{n_i}^{j_i}` is listed at the position of `(j_1, j_2, ...)`
//! in lexicographic order. Modulo a prime `p` the character at index 1 is
//! the Teichmüller character `ω`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::arith::{factorize, gcd, lcm, pow_mod, primitive_root, totient};
use crate::cyclotomic::{embedded_root, CyclotomicElement};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    conductor: u64,
    values: Vec<Option<u64>>,
}

/// One cyclic factor of `(Z/fZ)^×`: a generator lifted to `f` and its order.
#[derive(Clone, Copy, Debug)]
struct Generator {
    value: u64,
    order: u64,
}

fn generators(f: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for (q, e) in factorize(f) {
        let qe = q.pow(e);
        let rest = f / qe;
        let lift = |g: u64| crt(g % qe, qe, 1 % rest, rest);
        if q == 2 {
            if e >= 2 {
                out.push(Generator {
                    value: lift(qe - 1),
                    order: 2,
                });
            }
            if e >= 3 {
                out.push(Generator {
                    value: lift(5),
                    order: qe / 4,
                });
            }
        } else {
            let g = primitive_root(qe).expect("odd prime powers have primitive roots");
            out.push(Generator {
                value: lift(g),
                order: totient(qe),
            });
        }
    }
    out
}

/// The `x mod m1 n2` with `x ≡ a (mod m1)` and `x ≡ b (mod m2)`, coprime moduli.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    (0..m2)
        .map(|t| a + t * m1)
        .find(|x| x % m2 == b)
        .expect("coprime moduli")
        % m.max(1)
}

/// For every unit `a < f`, its exponent vector with respect to `generators(f)`.
fn discrete_logs(f: u64, gens: &[Generator]) -> Vec<Option<Vec<u64>>> {
    let mut logs = vec![None; f as usize];
    let mut exps = vec![0u64; gens.len()];
    loop {
        let a = gens
            .iter()
            .zip(&exps)
            .fold(1 % f, |acc, (g, &e)| {
                ((acc as u128 * pow_mod(g.value, e, f) as u128) % f as u128) as u64
            });
        logs[a as usize] = Some(exps.clone());
        // odometer increment, last generator fastest
        let mut i = gens.len();
        loop {
            if i == 0 {
                return logs;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < gens[i].order {
                break;
            }
            exps[i] = 0;
        }
    }
}

impl DirichletCharacter {
    /// Builds a character from a table of exponents of `ζ_order`, reducing
    /// to the true order and computing the conductor.
    fn from_table(modulus: u64, order: u64, values: Vec<Option<u64>>) -> Self {
        let g = values
            .iter()
            .flatten()
            .fold(order, |acc, &e| gcd(acc, e % order));
        let true_order = order / g;
        let values: Vec<Option<u64>> = values.iter().map(|v| v.map(|e| (e % order) / g)).collect();
        let mut chi = DirichletCharacter {
            modulus,
            order: true_order,
            conductor: modulus,
            values,
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    fn compute_conductor(&self) -> u64 {
        let f = self.modulus;
        let mut divs: Vec<u64> = (1..=f).filter(|d| f % d == 0).collect();
        divs.sort_unstable();
        for c in divs {
            let trivial_on_kernel = (0..f)
                .filter(|a| a % c == 1 % c)
                .all(|a| self.values[a as usize].map_or(true, |e| e == 0));
            if trivial_on_kernel {
                return c;
            }
        }
        f
    }

    /// The trivial character modulo `f` (principal character when `f > 1`).
    pub fn principal(f: u64) -> Self {
        assert!(f >= 1, "modulus must be positive");
        let values = (0..f).map(|a| (gcd(a, f) == 1).then_some(0)).collect();
        Self::from_table(f, 1, values)
    }

    /// The Teichmüller character modulo `p`: `g^j ↦ ζ_{p-1}^j` for the
    /// smallest primitive root `g`.
    pub fn omega(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) || p == 2 {
            return Err(Error::InvalidPrime(p));
        }
        characters_mod(p)
            .into_iter()
            .nth(1)
            .ok_or(Error::InvalidPrime(p))
    }

    /// The Jacobi symbol `(a / f)` as a character modulo the odd number `f`.
    pub fn quadratic(f: u64) -> Result<Self> {
        if f < 3 || f % 2 == 0 {
            return Err(Error::domain(format!(
                "quadratic character needs an odd modulus above 1, got {f}"
            )));
        }
        let values = (0..f)
            .map(|a| match jacobi(a, f) {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect();
        let chi = Self::from_table(f, 2, values);
        if chi.order == 1 {
            return Err(Error::domain(format!(
                "the Jacobi symbol modulo the square {f} is principal"
            )));
        }
        Ok(chi)
    }

    /// Parses `quad:f`, `f:i` or `omega^k` (the last needs `p`).
    pub fn from_spec(spec: &str, p: Option<u64>) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::Parse(format!("bad character spec {spec:?}"));
        if let Some(f) = spec.strip_prefix("quad:") {
            return Self::quadratic(f.parse().map_err(|_| bad())?);
        }
        if let Some(k) = spec.strip_prefix("omega") {
            let k: i64 = match k.strip_prefix('^') {
                Some(k) => k.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?,
                None if k.is_empty() => 1,
                None => return Err(bad()),
            };
            let p = p.ok_or_else(|| Error::Parse("omega^k needs a prime".into()))?;
            return Ok(Self::omega(p)?.pow(k));
        }
        let (f, i) = spec.split_once(':').ok_or_else(bad)?;
        let f: u64 = f.parse().map_err(|_| bad())?;
        let i: usize = i.parse().map_err(|_| bad())?;
        if f == 0 {
            return Err(bad());
        }
        let count = totient(f) as usize;
        characters_mod(f).into_iter().nth(i).ok_or_else(|| {
            Error::Parse(format!("index {i} out of range: there are {count} characters mod {f}"))
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `δ_χ`: 1 for even characters, 0 for odd ones.
    pub fn parity(&self) -> u8 {
        u8::from(self.is_even())
    }

    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// Trivial on units, i.e. induced from the character modulo 1.
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// `e` with `χ(n) = ζ_d^e`, or `None` when `χ(n) = 0`.
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// Same as [`exponent`](Self::exponent) for a non-negative argument.
    pub fn exponent_u(&self, n: u64) -> Option<u64> {
        self.values[(n % self.modulus) as usize]
    }

    /// The exponent table over `0..f`.
    pub fn table(&self) -> &[Option<u64>] {
        &self.values
    }

    /// `χ(n)` as an element of `Q(ζ_d)`.
    pub fn eval(&self, n: i64) -> CyclotomicElement {
        match self.exponent(n) {
            Some(e) => CyclotomicElement::root_of_unity(self.order, e),
            None => CyclotomicElement::zero(self.order),
        }
    }

    /// `χ(n)` when it is rational (`0` or `±1`).
    pub fn eval_rational(&self, n: i64) -> Option<BigRational> {
        self.eval(n).to_rational()
    }

    /// `χ(n)` under the canonical embedding into `Z_p`.
    pub fn eval_padic(&self, n: i64, ctx: &PadicContext) -> Result<PadicNumber> {
        let zeta = embedded_root(self.order, ctx)?;
        Ok(match self.exponent(n) {
            Some(e) => zeta.pow(e as i64)?,
            None => PadicNumber::zero(ctx),
        })
    }

    /// Embedded values over `0..f`.
    pub fn padic_table(&self, ctx: &PadicContext) -> Result<Vec<PadicNumber>> {
        let zeta = embedded_root(self.order, ctx)?;
        let powers: Vec<PadicNumber> = std::iter::successors(Some(PadicNumber::one(ctx)), |z| {
            Some(z * &zeta)
        })
        .take(self.order as usize)
        .collect();
        Ok(self
            .values
            .iter()
            .map(|v| match v {
                Some(e) => powers[*e as usize].clone(),
                None => PadicNumber::zero(ctx),
            })
            .collect())
    }

    /// True when the values of `χ` lie in `Z_p` under the canonical embedding.
    pub fn is_embeddable(&self, p: u64) -> bool {
        (p - 1) % self.order == 0
    }

    /// The primitive character inducing `χ`.
    pub fn primitive(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        let c = self.conductor;
        let f = self.modulus;
        let values = (0..c)
            .map(|a| {
                if gcd(a, c) != 1 {
                    return None;
                }
                // some b ≡ a (mod c) is a unit mod f
                (0..f / c)
                    .map(|t| a + t * c)
                    .find(|&b| gcd(b, f) == 1)
                    .and_then(|b| self.values[b as usize])
            })
            .collect();
        Self::from_table(c, self.order, values)
    }

    /// The character `a ↦ χ(a)` viewed modulo a multiple `m` of the modulus.
    pub fn induce(&self, m: u64) -> Self {
        assert!(m % self.modulus == 0, "{m} is not a multiple of {}", self.modulus);
        let values = (0..m)
            .map(|a| {
                if gcd(a, m) == 1 {
                    self.exponent_u(a)
                } else {
                    None
                }
            })
            .collect();
        Self::from_table(m, self.order, values)
    }

    /// Product character modulo `lcm` of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let d = lcm(self.order, other.order);
        let (s, t) = (d / self.order, d / other.order);
        let values = (0..m)
            .map(|a| match (self.exponent_u(a), other.exponent_u(a)) {
                (Some(x), Some(y)) if gcd(a, m) == 1 => Some((x * s + y * t) % d),
                _ => None,
            })
            .collect();
        Self::from_table(m, d, values)
    }

    /// `χ^k` for any integer `k`; `χ^{-1}` is the conjugate.
    pub fn pow(&self, k: i64) -> Self {
        let d = self.order as i64;
        let values = self
            .values
            .iter()
            .map(|v| v.map(|e| (e as i64 * k).rem_euclid(d) as u64))
            .collect();
        Self::from_table(self.modulus, self.order, values)
    }

    /// `χ ω^k` modulo `lcm(f, p)`.
    pub fn times_omega(&self, k: i64, p: u64) -> Result<Self> {
        if !self.is_embeddable(p) {
            return Err(Error::NotEmbeddable {
                order: self.order,
                p,
            });
        }
        Ok(self.mul(&Self::omega(p)?.pow(k)))
    }
}

/// All `φ(f)` characters modulo `f` in the enumeration order described in
/// the module documentation.
pub fn characters_mod(f: u64) -> Vec<DirichletCharacter> {
    assert!(f >= 1, "modulus must be positive");
    let gens = generators(f);
    let logs = discrete_logs(f, &gens);
    let exponent = gens.iter().fold(1, |acc, g| lcm(acc, g.order));
    let count: u64 = gens.iter().map(|g| g.order).product();
    (0..count)
        .map(|index| {
            // mixed radix, first generator most significant
            let mut js = vec![0u64; gens.len()];
            let mut rest = index;
            for (i, g) in gens.iter().enumerate().rev() {
                js[i] = rest % g.order;
                rest /= g.order;
            }
            let values = logs
                .iter()
                .map(|log| {
                    log.as_ref().map(|es| {
                        gens.iter()
                            .zip(&js)
                            .zip(es)
                            .map(|((g, &j), &e)| j * e % g.order * (exponent / g.order))
                            .sum::<u64>()
                            % exponent
                    })
                })
                .collect();
            DirichletCharacter::from_table(f, exponent, values)
        })
        .collect()
}

/// `χ(a) = ±1, 0` for the Jacobi symbol `(a / n)`, `n` odd.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// `χ_{0,m}(a)`: 0 when `p` divides both `a` and `m`, 1 otherwise.
pub fn chi_0m(a: i64, m: u64, p: u64) -> u8 {
    let p_divides_a = a.rem_euclid(p as i64) == 0;
    u8::from(!(p_divides_a && m % p == 0))
}

/// `Σ_{0 ≤ a < m, p ∤ a} g(a)`.
pub fn restricted_sum<T>(m: u64, p: u64, init: T, mut g: impl FnMut(u64) -> T) -> T
where
    T: for<'a> std::ops::AddAssign<&'a T>,
{
    let mut acc = init;
    for a in (0..m).filter(|a| a % p != 0) {
        acc += &g(a);
    }
    acc
}

/// `Σ_{0 ≤ a < m, p ∤ a} χ(a)` exactly.
pub fn restricted_character_sum(chi: &DirichletCharacter, m: u64, p: u64) -> CyclotomicElement {
    restricted_sum(m, p, CyclotomicElement::zero(chi.order()), |a| {
        chi.eval(a as i64)
    })
}

/// `Σ_{0 ≤ a < m, p ∤ a} χ(a) (-1)^a` exactly.
pub fn restricted_alternating_sum(
    chi: &DirichletCharacter,
    m: u64,
    p: u64,
) -> CyclotomicElement {
    let mut acc = crate::cyclotomic::RootSum::new(chi.order());
    for a in (0..m).filter(|a| a % p != 0) {
        if let Some(e) = chi.exponent_u(a) {
            let sign = if a % 2 == 0 { 1 } else { -1 };
            acc.add(e, &BigRational::from_integer(BigInt::from(sign)));
        }
    }
    acc.finish()
}

impl std::ops::AddAssign<&CyclotomicElement> for CyclotomicElement {
    fn add_assign(&mut self, rhs: &CyclotomicElement) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "character mod {} (conductor {}, order {}, {})",
            self.modulus,
            self.conductor,
            self.order,
            if self.is_even() { "even" } else { "odd" }
        )
    }
}

/// `{"conductor", "modulus", "order", "parity", "values"}` where `values[a]`
/// is the exponent `e` of `χ(a) = ζ_order^e`, or `null` when `χ(a) = 0`.
impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("conductor", &self.conductor)?;
        map.serialize_entry("modulus", &self.modulus)?;
        map.serialize_entry("order", &self.order)?;
        map.serialize_entry("parity", &self.parity())?;
        map.serialize_entry("values", &self.values)?;
        map.end()
    }
}
