//! Points in 3-space and the metrics robots travel under.
//!
//! Travel time equals distance (unit speed), so every function here that
//! returns a length is also a duration.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::Rational;

/// Bits of fractional precision used when approximating Euclidean lengths.
const L2_PRECISION_BITS: usize = 48;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[Rational; 3]", into = "[Rational; 3]")]
pub struct Point3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Point3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Point3 { x, y, z }
    }

    pub fn origin() -> Self {
        Point3::default()
    }

    /// Integer point, mostly for tests and examples.
    pub fn int(x: i64, y: i64, z: i64) -> Self {
        Point3::new(x.into(), y.into(), z.into())
    }

    pub fn coords(&self) -> [&Rational; 3] {
        [&self.x, &self.y, &self.z]
    }
}

impl From<[Rational; 3]> for Point3 {
    fn from([x, y, z]: [Rational; 3]) -> Self {
        Point3 { x, y, z }
    }
}

impl From<Point3> for [Rational; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'b> Add<&'b Point3> for &Point3 {
    type Output = Point3;
    fn add(self, rhs: &'b Point3) -> Point3 {
        Point3::new(&self.x + &rhs.x, &self.y + &rhs.y, &self.z + &rhs.z)
    }
}

impl<'b> Sub<&'b Point3> for &Point3 {
    type Output = Point3;
    fn sub(self, rhs: &'b Point3) -> Point3 {
        Point3::new(&self.x - &rhs.x, &self.y - &rhs.y, &self.z - &rhs.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        &self + &rhs
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        &self - &rhs
    }
}

impl Neg for &Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-&self.x, -&self.y, -&self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    L1,
    Linf,
    L2,
}

impl Metric {
    /// Whether distances under this metric are exact rationals.
    pub fn is_exact(self) -> bool {
        !matches!(self, Metric::L2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::L1 => "L1",
            Metric::Linf => "Linf",
            Metric::L2 => "L2",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L1" => Ok(Metric::L1),
            "Linf" => Ok(Metric::Linf),
            "L2" => Ok(Metric::L2),
            other => Err(format!("unknown metric `{other}` (expected L1, Linf or L2)")),
        }
    }
}

/// A length under some metric.
///
/// `exact` is false only for Euclidean lengths, whose `value` is a rational
/// within `2^-48` of the true square root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distance {
    pub value: Rational,
    pub exact: bool,
}

impl Distance {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// The exact value, or `None` for an approximation.
    pub fn exact_value(&self) -> Option<&Rational> {
        self.exact.then_some(&self.value)
    }

    pub fn into_value(self) -> Rational {
        self.value
    }
}

pub fn l1(a: &Point3, b: &Point3) -> Rational {
    a.coords()
        .into_iter()
        .zip(b.coords())
        .map(|(p, q)| (p - q).abs())
        .sum()
}

pub fn linf(a: &Point3, b: &Point3) -> Rational {
    a.coords()
        .into_iter()
        .zip(b.coords())
        .map(|(p, q)| (p - q).abs())
        .fold(Rational::zero(), Rational::max)
}

/// Euclidean length as a rational within `2^-48` (absolute) of the true value.
///
/// With `s = p/q` the exact squared length, returns
/// `floor(sqrt(p * q * 4^k)) / (q * 2^k)`.
pub fn l2_approx(a: &Point3, b: &Point3) -> Rational {
    let squared: Rational = a
        .coords()
        .into_iter()
        .zip(b.coords())
        .map(|(p, q)| {
            let d = p - q;
            &d * &d
        })
        .sum();
    let s = squared.into_inner();
    let (p, q) = (s.numer().clone(), s.denom().clone());
    let scaled = (&p * &q) << (2 * L2_PRECISION_BITS);
    let root: BigInt = scaled.abs().sqrt();
    let denom = q << L2_PRECISION_BITS;
    BigRational::new(root, denom).into()
}

pub fn distance(metric: Metric, a: &Point3, b: &Point3) -> Distance {
    match metric {
        Metric::L1 => Distance { value: l1(a, b), exact: true },
        Metric::Linf => Distance { value: linf(a, b), exact: true },
        Metric::L2 => Distance { value: l2_approx(a, b), exact: false },
    }
}

/// True iff `via` lies on some L1 shortest path from `a` to `b`, i.e. the
/// detour through `via` costs nothing.
pub fn on_l1_geodesic(a: &Point3, via: &Point3, b: &Point3) -> bool {
    l1(a, via) + l1(via, b) == l1(a, b)
}
