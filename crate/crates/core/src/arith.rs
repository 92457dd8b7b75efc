//! Exact numbers: big integers, reduced rationals, `N`-ary fractions, residues
//! and the small amount of prime arithmetic the depth bounds need.
//!
//! Nothing in here touches floating point. Rationals are always kept in lowest
//! terms with a positive denominator, which `num_rational` guarantees on every
//! constructor and operator.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Integer point in `Z^n`.
pub type Point = Vec<Integer>;

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| Integer::from(c)).collect()
}

fn normalize_minus(text: &str) -> String {
    text.trim().replace('\u{2212}', "-")
}

fn parse_integer(text: &str) -> Result<Integer> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse::<Integer>().map_err(|_| Error::Parse {
        text: text.to_string(),
        reason: "expected an integer".into(),
    })
}

/// Parses `"a"`, `"a/b"` or a decimal literal such as `"-1.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = normalize_minus(text);
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_integer(num)?;
        let den = parse_integer(den)?;
        if den.is_zero() {
            return Err(Error::Parse {
                text: text.to_string(),
                reason: "zero denominator".into(),
            });
        }
        return Ok(Rational::new(num, den));
    }
    if t.contains('.') {
        let frac = NaryFraction::parse(&t, 10).map_err(|_| Error::Parse {
            text: text.to_string(),
            reason: "bad decimal literal".into(),
        })?;
        return Ok(frac.value());
    }
    Ok(Rational::from_integer(parse_integer(&t)?))
}

/// Formats as `"a"` or `"a/b"`, the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least positive `M` with `M * w` integral for every `w`.
pub fn common_denominator<'a, I>(weights: I) -> Integer
where
    I: IntoIterator<Item = &'a Rational>,
{
    weights
        .into_iter()
        .fold(Integer::one(), |acc, w| acc.lcm(w.denom()))
}

/// A rational of the form `z / N^t`.
///
/// Canonical form strips factors of `N` out of `z`, so `t` is minimal. Two
/// fractions compare equal when their values agree and their bases agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NaryFraction {
    base: u64,
    z: Integer,
    t: u32,
}

impl NaryFraction {
    pub fn new(base: u64, z: Integer, t: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be >= 2, got {base}")));
        }
        let mut z = z;
        let mut t = t;
        let n = Integer::from(base);
        if z.is_zero() {
            t = 0;
        }
        while t > 0 && z.is_multiple_of(&n) {
            z /= &n;
            t -= 1;
        }
        Ok(Self { base, z, t })
    }

    /// Converts an exact rational, failing when its reduced denominator has a
    /// prime factor that does not divide the base.
    pub fn from_rational(value: &Rational, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be >= 2, got {base}")));
        }
        let n = Integer::from(base);
        let mut rest = value.denom().clone();
        let mut t = 0u32;
        let mut scale = Integer::one();
        while !rest.is_one() {
            let g = rest.gcd(&n);
            if g.is_one() {
                return Err(Error::NotNary {
                    value: format_rational(value),
                    base,
                });
            }
            rest /= g;
            t += 1;
            scale *= &n;
        }
        // denominator divides base^t now
        let z = value.numer() * (&scale / value.denom());
        Self::new(base, z, t)
    }

    /// Reads `"z/N^t"`, `"a/b"`, `"z"` or a positional base-`N` literal with a
    /// fractional part (digits `0-9a-z`).
    pub fn parse(text: &str, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be >= 2, got {base}")));
        }
        let t = normalize_minus(text);
        let bad = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some((num, den)) = t.split_once('/') {
            let z = parse_integer(num)?;
            if let Some((b, e)) = den.split_once('^') {
                let b = parse_integer(b)?;
                if b != Integer::from(base) {
                    return Err(bad("power base differs from N"));
                }
                let e: u32 = e.trim().parse().map_err(|_| bad("bad exponent"))?;
                return Self::new(base, z, e);
            }
            let den = parse_integer(den)?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Self::from_rational(&Rational::new(z, den), base);
        }
        if base > 36 && t.contains('.') {
            return Err(bad("positional literals need N <= 36"));
        }
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        if !body.contains('.') {
            return Self::new(base, parse_integer(&t)?, 0);
        }
        let (whole, frac) = body.split_once('.').ok_or_else(|| bad("bad literal"))?;
        if whole.is_empty() && frac.is_empty() {
            return Err(bad("no digits"));
        }
        let n = Integer::from(base);
        let mut z = Integer::zero();
        for ch in whole.chars().chain(frac.chars()) {
            let digit = ch
                .to_digit(36)
                .filter(|&d| u64::from(d) < base)
                .ok_or_else(|| bad("digit out of range for base"))?;
            z = z * &n + Integer::from(digit);
        }
        if negative {
            z = -z;
        }
        Self::new(base, z, frac.chars().count() as u32)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn numerator(&self) -> &Integer {
        &self.z
    }

    pub fn exponent(&self) -> u32 {
        self.t
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.z.clone(), Integer::from(self.base).pow(self.t))
    }
}

impl fmt::Display for NaryFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t == 0 {
            write!(f, "{}", self.z)
        } else {
            write!(f, "{}/{}^{}", self.z, self.base, self.t)
        }
    }
}

/// The coset of an integer modulo `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub modulus: u64,
    pub value: u64,
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "adding residues of different moduli");
        let m = u128::from(self.modulus);
        let v = (u128::from(self.value) + u128::from(rhs.value)) % m;
        Residue {
            modulus: self.modulus,
            value: v as u64,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "multiplying residues of different moduli");
        let m = u128::from(self.modulus);
        let v = (u128::from(self.value) * u128::from(rhs.value)) % m;
        Residue {
            modulus: self.modulus,
            value: v as u64,
        }
    }
}

/// Reduces `z` into `[0, m)`.
pub fn mod_reduce(z: &Integer, m: u64) -> Result<Residue> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be >= 2, got {m}")));
    }
    let value = z.mod_floor(&Integer::from(m));
    Ok(Residue {
        modulus: m,
        value: value.to_u64().expect("residue below a u64 modulus"),
    })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The primes in increasing order, by trial division.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&p| is_prime(p))
}

/// `p_i` with `p_1 = 2`.
pub fn nth_prime(i: usize) -> u64 {
    assert!(i >= 1, "primes are indexed from 1");
    primes().nth(i - 1).expect("infinitely many primes")
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least prime that does not divide `n` (`n >= 1`).
pub fn smallest_prime_not_dividing(n: u64) -> u64 {
    assert!(n >= 1, "n must be positive");
    primes().find(|&p| n % p != 0).expect("some prime does not divide n")
}

/// Smallest `k >= 0` with `base^k >= x`, by repeated multiplication.
pub fn ceil_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2, "logarithm base must be >= 2");
    let mut k = 0u32;
    let mut power: u128 = 1;
    while power < u128::from(x) {
        power *= u128::from(base);
        k += 1;
    }
    k
}

/// Largest `k >= 0` with `base^k <= x` (`x >= 1`).
pub fn floor_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2 && x >= 1);
    let mut k = 0u32;
    let mut power: u128 = u128::from(base);
    while power <= u128::from(x) {
        power *= u128::from(base);
        k += 1;
    }
    k
}

/// `Some(t)` when `d = p^t` with `t >= 1`.
pub fn prime_power_exponent(d: u64, p: u64) -> Option<u32> {
    if d < p {
        return None;
    }
    let mut rest = d;
    let mut t = 0;
    while rest % p == 0 {
        rest /= p;
        t += 1;
    }
    (rest == 1).then_some(t)
}

pub fn factorial(n: usize) -> Integer {
    (1..=n).fold(Integer::one(), |acc, k| acc * Integer::from(k))
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * Integer::from(n - i) / Integer::from(i + 1);
    }
    acc
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Integer>>(values: I) -> Integer {
    values
        .into_iter()
        .fold(Integer::zero(), |acc, v| acc.gcd(v))
}

/// Divides a vector by the gcd of its entries; the zero vector is unchanged.
pub fn make_primitive(v: &mut [Integer]) {
    let g = gcd_all(v.iter());
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

pub fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Clears denominators of a rational vector by a positive factor.
pub fn integer_direction(u: &[Rational]) -> Vec<Integer> {
    let m = common_denominator(u.iter());
    u.iter()
        .map(|r| (r * Rational::from_integer(m.clone())).to_integer())
        .collect()
}

pub fn rational_vec(v: &[Integer]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub fn sign(x: &Integer) -> Sign {
    x.sign()
}

pub fn abs(x: &Integer) -> Integer {
    x.abs()
}

pub mod serde_rational {
    //! `Rational` as a decimal string such as `"-7/100"`.
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(de::Error::custom)
    }

    pub(crate) fn from_json(v: &serde_json::Value) -> Result<Rational> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
            other => Err(Error::Parse {
                text: other.to_string(),
                reason: "rationals must be strings or integers, never floats".into(),
            }),
        }
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(serde_rational::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)
    }
}

pub mod serde_rational_matrix {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let strs: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        raw.iter()
            .map(|row| row.iter().map(serde_rational::from_json).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)
    }
}

/// Integers as JSON numbers below 2^53 in magnitude and as decimal strings
/// otherwise.
pub fn integer_to_json(v: &Integer) -> serde_json::Value {
    const LIMIT: i64 = 1 << 53;
    match v.to_i64() {
        Some(x) if x.abs() < LIMIT => serde_json::Value::from(x),
        _ => serde_json::Value::String(v.to_string()),
    }
}

pub fn integer_from_json(v: &serde_json::Value) -> Result<Integer> {
    match v {
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(parse_integer(&n.to_string())?),
        serde_json::Value::String(s) => parse_integer(&normalize_minus(s)),
        other => Err(Error::Parse {
            text: other.to_string(),
            reason: "expected an integer".into(),
        }),
    }
}
