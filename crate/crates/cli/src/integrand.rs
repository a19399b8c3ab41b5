//! Parser for `ferint --integrand`.
//!
//! ```text
//! integrand := "chi(x)" [ "*" power ] | power | polynomial
//! power     := "x^" INT | "(x" ("+" | "-") RATIONAL ")^" INT
//! polynomial:= term { ("+" | "-") term }
//! term      := RATIONAL [ "*" monomial ] | monomial
//! monomial  := "x" [ "^" UINT ]
//! ```
//!
//! Whitespace is ignored. A `chi(x)` factor needs `--char`; a negative
//! power of `x` is only integrable over the units.

use eulerlp::arith::parse_rational;
use eulerlp::fermionic::Integrand;
use eulerlp::{DirichletCharacter, Error, RationalPolynomial, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn parse_integrand(src: &str, chi: Option<&DirichletCharacter>) -> Result<Integrand> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty integrand".into()));
    }
    if let Some(rest) = s.strip_prefix("chi(x)") {
        let chi = chi
            .ok_or_else(|| Error::Parse("chi(x) needs a character (--char)".into()))?
            .clone();
        if rest.is_empty() {
            return Ok(Integrand::twisted(chi, 0, BigRational::zero()));
        }
        let rest = rest
            .strip_prefix('*')
            .ok_or_else(|| Error::Parse(format!("expected '*' after chi(x) in {src:?}")))?;
        let (k, shift) = parse_power(rest)?
            .ok_or_else(|| Error::Parse(format!("chi(x) must multiply x^k or (x+c)^k in {src:?}")))?;
        return Ok(Integrand::twisted(chi, k, shift));
    }
    if let Some((k, shift)) = parse_power(&s)? {
        if k < 0 {
            let trivial = DirichletCharacter::principal(1);
            return Ok(Integrand::twisted(trivial, k, shift));
        }
        let base = RationalPolynomial::new(vec![shift, BigRational::one()]);
        return Ok(Integrand::Polynomial(base.pow(k as u32)));
    }
    parse_polynomial(&s).map(Integrand::Polynomial)
}

/// `x^k` or `(x±c)^k`, as `(k, c)`; `None` when `s` is some other shape.
fn parse_power(s: &str) -> Result<Option<(i64, BigRational)>> {
    let exponent = |k: &str| k.trim_matches(|c| c == '(' || c == ')').parse::<i64>().ok();
    if let Some(k) = s.strip_prefix("x^") {
        return Ok(exponent(k).map(|k| (k, BigRational::zero())));
    }
    if let Some(rest) = s.strip_prefix("(x") {
        let Some((inner, k)) = rest.split_once(")^") else {
            return Ok(None);
        };
        let Some(k) = exponent(k) else {
            return Ok(None);
        };
        let shift = match inner.chars().next() {
            Some('+') => parse_rational(&inner[1..])?,
            Some('-') => -parse_rational(&inner[1..])?,
            _ => return Err(Error::Parse(format!("bad shift {inner:?}"))),
        };
        return Ok(Some((k, shift)));
    }
    Ok(None)
}

fn parse_polynomial(s: &str) -> Result<RationalPolynomial> {
    // split into signed terms, keeping '-' with its term
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > start && !s[..i].ends_with('^') && !s[..i].ends_with('/') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut poly = RationalPolynomial::zero();
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-BigRational::one(), b),
            None => (BigRational::one(), t.strip_prefix('+').unwrap_or(t)),
        };
        let (coeff, mono) = match body.split_once('*') {
            Some((c, m)) => (parse_rational(c)?, m),
            None if body.starts_with('x') => (BigRational::one(), body),
            None => (parse_rational(body)?, ""),
        };
        let degree = match mono {
            "" => 0,
            "x" => 1,
            m => m
                .strip_prefix("x^")
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad monomial {m:?}")))?,
        };
        poly = &poly + &RationalPolynomial::monomial(sign * coeff, degree);
    }
    Ok(poly)
}
