//! Exact rationals, the localization ℤ₍p₎ and p-adic valuations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A small prime `p`, validated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn to_rational(self) -> Rational {
        Rational::from_integer(self.to_bigint())
    }

    /// `p^k` as a rational; `k` may be negative.
    pub fn pow(self, k: i64) -> Rational {
        let base = self.to_bigint();
        let mag = num_traits::pow(base, k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(mag)
        } else {
            Rational::new(BigInt::one(), mag)
        }
    }

    pub(crate) fn check_same(self, other: Prime) -> Result<()> {
        if self != other {
            return Err(Error::PrimeMismatch(self.0, other.0));
        }
        Ok(())
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A valuation, with `Infinite` standing for the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Strips all factors of `p` from `n`, returning the count and the cofactor.
fn split_p(n: &BigInt, p: Prime) -> (i64, BigInt) {
    let pb = p.to_bigint();
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

pub fn vp_int(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(split_p(n, p).0)
}

/// p-adic valuation of a rational.
pub fn vp(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let (a, _) = split_p(x.numer(), p);
    let (b, _) = split_p(x.denom(), p);
    Valuation::Finite(a - b)
}

/// Finite valuation of a nonzero rational; panics on zero.
pub(crate) fn vp_nonzero(x: &Rational, p: Prime) -> i64 {
    vp(x, p).finite().expect("valuation of zero")
}

/// Splits a nonzero rational as `p^v · u` with `u` a p-unit.
pub fn unit_part(x: &Rational, p: Prime) -> (i64, Rational) {
    let v = vp_nonzero(x, p);
    (v, x * p.pow(-v))
}

pub fn is_p_local(x: &Rational, p: Prime) -> bool {
    vp(x, p) >= Valuation::Finite(0)
}

/// Canonical representative of the class of `x` in ℚ / p^k ℤ₍p₎.
///
/// The representative is `p^k · r / p^n` with `0 ≤ r < p^n`, so classes
/// that agree modulo `p^k ℤ₍p₎` map to identical rationals.
pub fn reduce_mod_pk(x: &Rational, p: Prime, k: i64) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let f = x * p.pow(-k);
    let v = vp_nonzero(&f, p);
    if v >= 0 {
        return Rational::zero();
    }
    let n = (-v) as usize;
    let modulus = num_traits::pow(p.to_bigint(), n);
    // f = a / (p^n b), gcd(b, p) = 1
    let a = f.numer().clone();
    let (_, b) = split_p(f.denom(), p);
    let b_inv = mod_inverse(&b, &modulus);
    let r = (a * b_inv).mod_floor(&modulus);
    p.pow(k) * Rational::new(r, modulus)
}

/// Inverse of `b` modulo `m` (`gcd(b, m) = 1`).
fn mod_inverse(b: &BigInt, m: &BigInt) -> BigInt {
    let e = b.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Residue of a p-local rational in 𝔽_p.
pub fn residue_mod_p(x: &Rational, p: Prime) -> u32 {
    debug_assert!(is_p_local(x, p));
    let m = p.to_bigint();
    let inv = mod_inverse(x.denom(), &m);
    (x.numer() * inv).mod_floor(&m).to_u32().unwrap()
}

/// Formats a rational as `"num/den"`, omitting the denominator when it is 1.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of ℤ₍p₎: a rational whose denominator is prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLocal {
    value: Rational,
    p: Prime,
}

impl PLocal {
    pub fn new(value: Rational, p: Prime) -> Result<Self> {
        if !is_p_local(&value, p) {
            return Err(Error::NotPLocal(format_rational(&value), p.get()));
        }
        Ok(PLocal { value, p })
    }

    pub fn from_int(n: i64, p: Prime) -> Self {
        PLocal { value: rat(n), p }
    }

    pub fn parse(s: &str, p: Prime) -> Result<Self> {
        PLocal::new(parse_rational(s)?, p)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn vp(&self) -> Valuation {
        vp(&self.value, self.p)
    }

    pub fn is_unit(&self) -> bool {
        self.vp() == Valuation::Finite(0)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn try_add(&self, rhs: &PLocal) -> Result<PLocal> {
        self.p.check_same(rhs.p)?;
        Ok(PLocal { value: &self.value + &rhs.value, p: self.p })
    }

    pub fn try_sub(&self, rhs: &PLocal) -> Result<PLocal> {
        self.p.check_same(rhs.p)?;
        Ok(PLocal { value: &self.value - &rhs.value, p: self.p })
    }

    pub fn try_mul(&self, rhs: &PLocal) -> Result<PLocal> {
        self.p.check_same(rhs.p)?;
        Ok(PLocal { value: &self.value * &rhs.value, p: self.p })
    }

    /// Exact division; defined only when the divisor is a p-unit.
    pub fn try_div(&self, rhs: &PLocal) -> Result<PLocal> {
        self.p.check_same(rhs.p)?;
        if !rhs.is_unit() {
            return Err(Error::NotInvertible(format_rational(&rhs.value)));
        }
        Ok(PLocal { value: &self.value / &rhs.value, p: self.p })
    }

    pub fn residue(&self) -> u32 {
        residue_mod_p(&self.value, self.p)
    }
}

// Operator forms panic on mixed primes; use the `try_*` methods to get an error instead.
impl Add for &PLocal {
    type Output = PLocal;
    fn add(self, rhs: &PLocal) -> PLocal {
        self.try_add(rhs).expect("p-local addition")
    }
}

impl Sub for &PLocal {
    type Output = PLocal;
    fn sub(self, rhs: &PLocal) -> PLocal {
        self.try_sub(rhs).expect("p-local subtraction")
    }
}

impl Mul for &PLocal {
    type Output = PLocal;
    fn mul(self, rhs: &PLocal) -> PLocal {
        self.try_mul(rhs).expect("p-local multiplication")
    }
}

impl Neg for &PLocal {
    type Output = PLocal;
    fn neg(self) -> PLocal {
        PLocal { value: -&self.value, p: self.p }
    }
}

impl fmt::Display for PLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}
