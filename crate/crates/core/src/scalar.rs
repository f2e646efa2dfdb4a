//! Exact rationals and rational-endpoint intervals.
//!
//! [`Rational`] keeps small values inline as a reduced `i64` pair and only
//! promotes to a heap-backed [`BigRational`] when an intermediate result no
//! longer fits. Both representations are canonical, so structural equality and
//! hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone)]
enum Repr {
    /// Reduced, `den > 0`, `num != i64::MIN`.
    Small(i64, i64),
    /// Reduced and never representable as `Small`.
    Big(BigRational),
}

/// Arbitrary-precision rational number in lowest terms with positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    /// Builds from an `i128` fraction; overflowing the small form falls back to big.
    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let negative = (num < 0) != (den < 0);
        let n = num.unsigned_abs();
        let d = den.unsigned_abs();
        let g = gcd_u128(n, d);
        let (n, d) = (n / g, d / g);
        if n <= i64::MAX as u128 && d <= i64::MAX as u128 {
            let n = n as i64;
            Rational(Repr::Small(if negative { -n } else { n }, d as i64))
        } else {
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            Rational(Repr::Big(BigRational::new_raw(
                BigInt::from_biguint(sign, n.into()),
                BigInt::from(d),
            )))
        }
    }

    /// Canonicalises an already-constructed big rational.
    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self * &other.recip())
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_euclid(*d)),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `2^exp` for any sign of `exp`.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Self::from_bigints(p, BigInt::one())
        } else {
            Self::from_bigints(BigInt::one(), p)
        }
    }

    /// Largest multiple of `2^-bits` that is `<= self`.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let scaled = Self::from_big(self.to_big() * BigRational::from_integer(scale.clone()));
        Self::from_bigints(scaled.floor(), scale)
    }

    /// Smallest multiple of `2^-bits` that is `>= self`.
    pub fn ceil_dyadic(&self, bits: u32) -> Self {
        -(-self).floor_dyadic(bits)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering with `digits` significant digits, rounded to nearest
    /// (ties away from zero). For display only.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let negative = self.is_negative();
        let a = self.abs().to_big();
        let ten = BigInt::from(10);
        // Find e with 10^e <= a < 10^(e+1).
        let mut e: i64 = a.to_integer().to_string().len() as i64 - 1;
        if a < BigRational::one() {
            e = -1;
            let mut t = a.clone() * BigRational::from_integer(ten.clone());
            while t < BigRational::one() {
                t *= BigRational::from_integer(ten.clone());
                e -= 1;
            }
        }
        let shift = digits as i64 - 1 - e;
        let scaled = if shift >= 0 {
            a * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            a / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut m = (scaled + half).floor().to_integer();
        let mut shift = shift;
        if m.to_string().len() > digits {
            // Rounding carried into a new digit.
            m = m.div_floor(&ten);
            shift -= 1;
        }
        let s = m.to_string();
        let body = if shift <= 0 {
            let zeros = "0".repeat((-shift) as usize);
            format!("{s}{zeros}")
        } else if (shift as usize) < s.len() {
            let (int, frac) = s.split_at(s.len() - shift as usize);
            format!("{int}.{frac}")
        } else {
            let zeros = "0".repeat(shift as usize - s.len());
            format!("0.{zeros}{s}")
        };
        let body = if body.contains('.') {
            body.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            body
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if b == d {
                Rational::from_i128(*a as i128 + *c as i128, *b as i128)
            } else {
                Rational::from_i128(
                    *a as i128 * *d as i128 + *c as i128 * *b as i128,
                    *b as i128 * *d as i128,
                )
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
        }
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

fn neg_ref(x: &Rational) -> Rational {
    match &x.0 {
        Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
        Repr::Big(r) => Rational::from_big(-r.clone()),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, |x: &Rational, y: &Rational| add_ref(x, &neg_ref(y)));
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, |x: &Rational, y: &Rational| {
    x.checked_div(y).expect("division by zero")
});

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, rhs);
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_ref(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, &neg_ref(rhs));
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = add_ref(self, &neg_ref(&rhs));
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_ref(self, rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q`, with an optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let valid = |t: &str, signed: bool| {
            let t = if signed {
                t.strip_prefix(['-', '+']).unwrap_or(t)
            } else {
                t
            };
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(bad());
        }
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rational::from_bigints(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of a comparison that may be undecidable at the current precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    True,
    False,
    Indeterminate,
}

/// Closed interval `[lo, hi]` with rational endpoints.
///
/// Endpoint arithmetic is exact, so every operation trivially encloses the
/// real result; [`Interval::round_outward`] coarsens endpoints onto a dyadic
/// grid when their size needs to be bounded.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(r: Rational) -> Self {
        Interval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// The exact value when the interval is degenerate.
    pub fn as_point(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        if self.is_point() && other.is_point() {
            return Interval::point(&self.lo + &other.lo);
        }
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        if self.is_point() && other.is_point() {
            return Interval::point(&self.lo * &other.lo);
        }
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Interval {
                lo: &self.lo * &other.lo,
                hi: &self.hi * &other.hi,
            };
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        Interval {
            lo: products.iter().min().cloned().unwrap(),
            hi: products.iter().max().cloned().unwrap(),
        }
    }

    /// Division; fails when the divisor interval contains zero.
    pub fn div(&self, other: &Interval) -> Result<Interval, Error> {
        if other.contains(&Rational::zero()) {
            return Err(Error::InvalidInput(
                "interval division by an interval containing zero".into(),
            ));
        }
        let recip = Interval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        Ok(self.mul(&recip))
    }

    /// Enclosure of `max(self, other)`; needs no comparison to be sound.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// `self <= other`, decided only when the endpoints force it.
    pub fn le(&self, other: &Interval) -> Certainty {
        if self.hi <= other.lo {
            Certainty::True
        } else if self.lo > other.hi {
            Certainty::False
        } else {
            Certainty::Indeterminate
        }
    }

    /// `self < other`, decided only when the endpoints force it.
    pub fn lt(&self, other: &Interval) -> Certainty {
        if self.hi < other.lo {
            Certainty::True
        } else if self.lo >= other.hi {
            Certainty::False
        } else {
            Certainty::Indeterminate
        }
    }

    /// Certified total comparison: `None` unless the order is forced.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.is_point() && other.is_point() {
            return Some(self.lo.cmp(&other.lo));
        }
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Coarsens the endpoints outward to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Interval {
        if self.is_point() && self.lo.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        Interval {
            lo: self.lo.floor_dyadic(bits),
            hi: self.hi.ceil_dyadic(bits),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_prints_lowest_terms() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-6/2").to_string(), "-3");
        assert!("-3/-1".parse::<Rational>().is_err());
        assert_eq!(q("+0/7").to_string(), "0");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rational::from_big(BigRational::from_integer(BigInt::from(i64::MIN)));
        assert_eq!(-&m, Rational::from_big(BigRational::from_integer(-BigInt::from(i64::MIN))));
    }

    #[test]
    fn dyadic_rounding() {
        let third = q("1/3");
        assert_eq!(third.floor_dyadic(2), q("1/4"));
        assert_eq!(third.ceil_dyadic(2), q("1/2"));
        assert_eq!(q("-1/3").floor_dyadic(2), q("-1/2"));
        assert_eq!(q("3/4").floor_dyadic(2), q("3/4"));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("3/2").to_decimal(20), "1.5");
        assert_eq!(q("2/3").to_decimal(5), "0.66667");
        assert_eq!(q("-1/30").to_decimal(3), "-0.0333");
        assert_eq!(q("999/1").to_decimal(2), "1000");
        assert_eq!(q("12345").to_decimal(3), "12300");
    }

    #[test]
    fn interval_comparisons() {
        let a = Interval::new(q("1"), q("2")).unwrap();
        let b = Interval::new(q("2"), q("3")).unwrap();
        let c = Interval::new(q("3/2"), q("5/2")).unwrap();
        assert_eq!(a.le(&b), Certainty::True);
        assert_eq!(a.lt(&b), Certainty::Indeterminate);
        assert_eq!(a.le(&c), Certainty::Indeterminate);
        assert_eq!(a.compare(&c), None);
        assert_eq!(b.le(&a), Certainty::Indeterminate);
        assert_eq!(Interval::point(q("3")).le(&a), Certainty::False);
        assert!(Interval::new(q("2"), q("1")).is_err());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn huge() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn matches_bigrational(a in huge(), b in huge()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }

        #[test]
        fn point_intervals_are_exact(a in small(), b in small()) {
            let (ia, ib) = (Interval::point(a.clone()), Interval::point(b.clone()));
            prop_assert_eq!(ia.add(&ib), Interval::point(&a + &b));
            prop_assert_eq!(ia.sub(&ib), Interval::point(&a - &b));
            prop_assert_eq!(ia.mul(&ib), Interval::point(&a * &b));
            if !b.is_zero() {
                prop_assert_eq!(ia.div(&ib).unwrap(), Interval::point(&a / &b));
            }
        }

        #[test]
        fn interval_ops_enclose(a in small(), w in 0i64..5, b in small(), v in 0i64..5, s in 0i64..=4, t in 0i64..=4) {
            let ia = Interval::new(a.clone(), &a + Rational::from_integer(w)).unwrap();
            let ib = Interval::new(b.clone(), &b + Rational::from_integer(v)).unwrap();
            // sample points inside each interval
            let x = &a + Rational::new(w * s, 4);
            let y = &b + Rational::new(v * t, 4);
            prop_assert!(ia.add(&ib).contains(&(&x + &y)));
            prop_assert!(ia.sub(&ib).contains(&(&x - &y)));
            prop_assert!(ia.mul(&ib).contains(&(&x * &y)));
            prop_assert!(ia.max(&ib).contains(&x.clone().max(y.clone())));
            if let Ok(d) = ia.div(&ib) {
                prop_assert!(d.contains(&(&x / &y)));
            }
            prop_assert!(ia.round_outward(3).contains_interval(&ia));
        }
    }
}
