//! Exact scalars: odd prime fields `F_p` and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square class")]
    ZeroHasNoClass,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// The base field: `F_p` for an odd prime `p`, or `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u64),
    Rationals,
}

/// Largest modulus accepted, so that products of residues fit in a `u64`.
const MAX_MODULUS: u64 = 1 << 31;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p),
            Field::Rationals => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
            Field::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses `"17"`, `"-3"` or (over `Q`, or as a quotient in `F_p`) `"5/6"`.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = match den {
            Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match *self {
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| x.mod_floor(&m).to_u64().expect("residue fits");
                let n = Scalar::Mod { value: reduce(&num), modulus: p };
                let d = Scalar::Mod { value: reduce(&den), modulus: p };
                n.checked_div(&d)
            }
            Field::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
        }
    }

    /// All elements in residue order. Panics over `Q`.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        let p = self.order().expect("elements() requires a finite field");
        (0..p).map(move |value| Scalar::Mod { value, modulus: p })
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Scalar> {
        self.elements().skip(1)
    }

    /// The smallest integer `ε ≥ 2` that is a non-square mod `p`.
    pub fn canonical_nonsquare(&self) -> Option<Scalar> {
        let p = self.order()?;
        (2..p)
            .map(|v| Scalar::Mod { value: v, modulus: p })
            .find(|a| a.square_class() == Ok(SquareClass::NonSquare))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(Field::Rationals);
        }
        let p: u64 = s.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        Field::prime(p)
    }
}

/// An element of `F_p` (canonical residue) or `Q` (reduced fraction).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, modulus: u64 },
    Rat(BigRational),
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
            Scalar::Rat(_) => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_pow(*value, exp, *modulus),
                modulus: *modulus,
            },
            Scalar::Rat(r) => Scalar::Rat(num_traits::pow(r.clone(), exp as usize)),
        }
    }

    /// Multiplies by a small integer.
    pub fn scale(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    /// Image in `k^×/k^×²`.
    pub fn square_class(&self) -> Result<SquareClass, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroHasNoClass);
        }
        Ok(match self {
            Scalar::Mod { value, modulus } => {
                if mod_pow(*value, (modulus - 1) / 2, *modulus) == 1 {
                    SquareClass::Square
                } else {
                    SquareClass::NonSquare
                }
            }
            Scalar::Rat(r) => SquareClass::Rational(squarefree_part(&(r.numer() * r.denom()))),
        })
    }

    /// A square root, if one exists (finite fields by search, `Q` by integer roots).
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            // smallest residue among the roots
            Scalar::Mod { .. } => self.field().elements().find(|x| &x.square() == self),
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                (&n * &n == *r.numer() && &d * &d == *r.denom())
                    .then(|| Scalar::Rat(BigRational::new(n, d)))
            }
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % modulus,
                modulus: *modulus,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + modulus - b) % modulus,
                modulus: *modulus,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: a * b % modulus,
                modulus: *modulus,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// A class in `k^×/k^×²`.
///
/// Over `F_p` the quotient has two elements. Over `Q` a class is named by its
/// squarefree signed integer representative; `Rational(1)` is the trivial class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SquareClass {
    Square,
    NonSquare,
    Rational(BigInt),
}

impl SquareClass {
    pub fn is_square(&self) -> bool {
        match self {
            SquareClass::Square => true,
            SquareClass::NonSquare => false,
            SquareClass::Rational(r) => r.is_one(),
        }
    }

    /// The trivial class of `field`.
    pub fn trivial(field: Field) -> Self {
        match field {
            Field::Prime(_) => SquareClass::Square,
            Field::Rationals => SquareClass::Rational(BigInt::one()),
        }
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        use SquareClass::*;
        match (self, other) {
            (Rational(a), Rational(b)) => {
                let g = a.gcd(b);
                Rational(a * b / (&g * &g))
            }
            (Rational(_), _) | (_, Rational(_)) => {
                panic!("multiplying square classes of different fields")
            }
            (a, b) => {
                if a.is_square() == b.is_square() {
                    Square
                } else {
                    NonSquare
                }
            }
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Square => write!(f, "square"),
            SquareClass::NonSquare => write!(f, "nonsquare"),
            SquareClass::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for SquareClass {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "square" => Ok(SquareClass::Square),
            "nonsquare" => Ok(SquareClass::NonSquare),
            other => BigInt::from_str(other)
                .map(SquareClass::Rational)
                .map_err(|_| FieldError::Parse(other.to_string())),
        }
    }
}

/// Trial-division bound for squarefree extraction.
const TRIAL_BOUND: u64 = 1 << 20;

/// Squarefree part of a nonzero integer, sign kept.
///
/// Primes below `TRIAL_BOUND` are removed by trial division. A remaining
/// cofactor below `TRIAL_BOUND³` has at most two prime factors, so a
/// perfect-square test finishes it exactly; larger cofactors are only checked
/// for being a perfect square.
fn squarefree_part(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_zero());
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut part = BigInt::one();
    let mut d = 2u64;
    while d < TRIAL_BOUND {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut odd = false;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            odd = !odd;
        }
        if odd {
            part *= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root != rest {
        part *= rest;
    }
    sign * part
}
