//! Exact rational planar geometry: points, canonical integer-coefficient
//! lines, incidence and intersection predicates.
//!
//! Everything here is error-free: no rounding occurs anywhere, so all
//! predicates can be trusted by the combinatorial layers above.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Exact rational scalar. Always stored reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: BigInt, denom: BigInt) -> Rat {
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer, denom))
    }

    pub fn from_int(v: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Rat {
        Rat(BigRational::from_integer(v))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Nearest-value conversion for presentation output only.
    pub fn to_f64(&self) -> f64 {
        let nf = self
            .0
            .numer()
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::NAN);
        let df = self
            .0
            .denom()
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::NAN);
        nf / df
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_int(v)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(std::ops::$trait::$method(self.0, rhs.0))
            }
        }
        impl std::ops::$trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(std::ops::$trait::$method(&self.0, &rhs.0))
            }
        }
        impl std::ops::$trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(std::ops::$trait::$method(self.0, &rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl std::ops::Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::ops::Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl std::ops::AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl std::ops::SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl std::ops::MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Rat, String> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator: {e}"))?;
        let den = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as \"num/den\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        v.parse().map_err(de::Error::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat::from_bigint(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        deserializer.deserialize_any(RatVisitor)
    }
}

/// Affine point in Q^2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point {
            x: Rat::from_int(x),
            y: Rat::from_int(y),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Point, D::Error> {
        let (x, y) = <(Rat, Rat)>::deserialize(deserializer)?;
        Ok(Point { x, y })
    }
}

/// Canonical line: the locus ax + by + c = 0 with integer coefficients,
/// gcd(|a|,|b|,|c|) = 1 and the first nonzero of (a,b,c) positive. Two
/// `Line` values are equal exactly when they denote the same locus, which
/// makes lines usable as set and map keys.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Line {
    /// Canonicalizes the integer triple. Errors when (a, b) = (0, 0).
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Line, Error> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateLine);
        }
        let g = a.abs().gcd(&b.abs()).gcd(&c.abs());
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        let leading_negative = if !a.is_zero() {
            a.is_negative()
        } else {
            b.is_negative()
        };
        if leading_negative {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Line { a, b, c })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Line, Error> {
        Line::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }

    /// Clears denominators of rational coefficients, then canonicalizes.
    pub fn from_rational_coeffs(a: &Rat, b: &Rat, c: &Rat) -> Result<Line, Error> {
        let lcm = a.denom().lcm(b.denom()).lcm(c.denom());
        let scale = |r: &Rat| r.numer() * (&lcm / r.denom());
        Line::new(scale(a), scale(b), scale(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Exact value of ax + by + c at the point.
    pub fn eval_at(&self, p: &Point) -> Rat {
        let ax = &Rat::from_bigint(self.a.clone()) * &p.x;
        let by = &Rat::from_bigint(self.b.clone()) * &p.y;
        &(&ax + &by) + &Rat::from_bigint(self.c.clone())
    }

    pub fn is_parallel_to(&self, other: &Line) -> bool {
        (&self.a * &other.b - &other.a * &self.b).is_zero()
    }

    /// True for lines of the form by + c = 0.
    pub fn is_horizontal(&self) -> bool {
        self.a.is_zero()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.a.to_string(), self.b.to_string(), self.c.to_string()).serialize(serializer)
    }
}

/// Accepts either JSON integers or decimal strings for line coefficients.
struct CoeffVisitor;

impl Visitor<'_> for CoeffVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(de::Error::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }
}

#[derive(Clone)]
struct Coeff(BigInt);

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Coeff, D::Error> {
        deserializer.deserialize_any(CoeffVisitor).map(Coeff)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Line, D::Error> {
        let (a, b, c) = <(Coeff, Coeff, Coeff)>::deserialize(deserializer)?;
        Line::new(a.0, b.0, c.0).map_err(de::Error::custom)
    }
}

/// Result of intersecting two lines: parallel translates and equal lines are
/// collapsed into one variant because the callers only ever care whether a
/// unique intersection point exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    At(Point),
    ParallelOrEqual,
}

impl Intersection {
    pub fn point(self) -> Option<Point> {
        match self {
            Intersection::At(p) => Some(p),
            Intersection::ParallelOrEqual => None,
        }
    }
}

/// The canonical line through two distinct points.
pub fn line_through(p: &Point, q: &Point) -> Result<Line, Error> {
    if p == q {
        return Err(Error::IdenticalPoints { point: p.clone() });
    }
    let a = &p.y - &q.y;
    let b = &q.x - &p.x;
    let c = &(&p.x * &q.y) - &(&q.x * &p.y);
    Line::from_rational_coeffs(&a, &b, &c)
}

/// Unique intersection point of two canonical lines, if any.
pub fn intersect(l1: &Line, l2: &Line) -> Intersection {
    let det = l1.a() * l2.b() - l2.a() * l1.b();
    if det.is_zero() {
        return Intersection::ParallelOrEqual;
    }
    let x = Rat::new(l1.b() * l2.c() - l2.b() * l1.c(), det.clone());
    let y = Rat::new(l2.a() * l1.c() - l1.a() * l2.c(), det);
    Intersection::At(Point::new(x, y))
}

/// Exact incidence test.
pub fn incident(l: &Line, p: &Point) -> bool {
    l.eval_at(p).is_zero()
}

/// Deterministic total order used whenever lines are iterated.
pub fn line_cmp(l1: &Line, l2: &Line) -> Ordering {
    l1.cmp(l2)
}
