use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Commutative ring with a partial inverse.
///
/// Field elements and truncated series both implement this, so matrix
/// routines work over either.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn inv(&self) -> Result<Self> {
        self.try_inv().ok_or(Error::DivisionByZero)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Integer power; negative exponents invert first.
    fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq.clone();
            }
            k >>= 1;
            if k > 0 {
                sq = sq.clone() * sq;
            }
        }
        Ok(acc)
    }
}

/// An exact ground-field element.
pub trait Scalar: Ring + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Result<Self>;
    /// Short tag naming the field, recorded in reports.
    fn field_tag() -> String;
    /// Exact `num/den` rendering.
    fn exact_string(&self) -> String;
}

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("not a rational literal: {s}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact_string())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Ring for Rational {
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn zero_like(&self) -> Self {
        <Self as Scalar>::zero()
    }
    fn one_like(&self) -> Self {
        <Self as Scalar>::one()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_rational(r: &BigRational) -> Result<Self> {
        Ok(Rational(r.clone()))
    }
    fn field_tag() -> String {
        "rational".into()
    }
    fn exact_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Residue modulo the prime `P`.
///
/// `P` must be prime and below 2^63; products are reduced through `u128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP<const P: u64>(u64);

impl<const P: u64> ModP<P> {
    pub fn new(v: u64) -> Self {
        ModP(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow_u(self, mut e: u64) -> Self {
        let mut acc = 1u64;
        let mut b = self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod::<P>(acc, b);
            }
            b = mulmod::<P>(b, b);
            e >>= 1;
        }
        ModP(acc)
    }
}

fn mulmod<const P: u64>(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("reduced residue fits in u64")
}

impl<const P: u64> fmt::Debug for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for ModP<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for ModP<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u128 + rhs.0 as u128;
        ModP((s % P as u128) as u64)
    }
}

impl<const P: u64> Sub for ModP<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ModP(if self.0 >= rhs.0 { self.0 - rhs.0 } else { P - (rhs.0 - self.0) })
    }
}

impl<const P: u64> Mul for ModP<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ModP(mulmod::<P>(self.0, rhs.0))
    }
}

impl<const P: u64> Neg for ModP<P> {
    type Output = Self;
    fn neg(self) -> Self {
        ModP(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Ring for ModP<P> {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn zero_like(&self) -> Self {
        ModP(0)
    }
    fn one_like(&self) -> Self {
        ModP(1)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u(P - 2))
        }
    }
}

impl<const P: u64> Scalar for ModP<P> {
    fn zero() -> Self {
        ModP(0)
    }
    fn one() -> Self {
        ModP(1)
    }
    fn from_i64(v: i64) -> Self {
        let r = (v as i128).rem_euclid(P as i128);
        ModP(r as u64)
    }
    fn from_rational(r: &BigRational) -> Result<Self> {
        to_prime_field::<P>(r)
    }
    fn field_tag() -> String {
        format!("prime:{P}")
    }
    fn exact_string(&self) -> String {
        format!("{}/1", self.0)
    }
}

/// Reduce a rational into the prime field modulo `P`.
pub fn to_prime_field<const P: u64>(r: &BigRational) -> Result<ModP<P>> {
    let den = bigint_mod(r.denom(), P);
    if den == 0 {
        return Err(Error::BadPrime { den: r.denom().to_string(), prime: P });
    }
    let num = ModP::<P>(bigint_mod(r.numer(), P));
    Ok(num * ModP::<P>(den).pow_u(P - 2))
}
