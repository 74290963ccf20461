//! Exact scalars in `[0, 1]` and the effect-algebra contract shared by every
//! predicate carrier.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in the unit interval, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational01(BigRational);

impl Rational01 {
    pub fn zero() -> Self {
        Rational01(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational01(BigRational::one())
    }

    /// Builds `num/den`, rejecting zero denominators and values outside `[0, 1]`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::OutOfRange("zero denominator".into()));
        }
        Self::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() || r > BigRational::one() {
            return Err(Error::OutOfRange(format!("{r} is not in [0,1]")));
        }
        Ok(Rational01(r))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
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

    /// Partial sum: defined iff `self + other <= 1`.
    pub fn ovee(&self, other: &Self) -> Option<Self> {
        let s = &self.0 + &other.0;
        (s <= BigRational::one()).then_some(Rational01(s))
    }

    pub fn ortho(&self) -> Self {
        Rational01(BigRational::one() - &self.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Rational01(&self.0 * &other.0)
    }

    /// `self / other`, defined when `other != 0` and `self <= other`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() || self.0 > other.0 {
            return None;
        }
        Some(Rational01(&self.0 / &other.0))
    }

    /// Truncated difference `self - other`, defined when `other <= self`.
    pub fn minus(&self, other: &Self) -> Option<Self> {
        (other.0 <= self.0).then(|| Rational01(&self.0 - &other.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational01 {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer (`"0"`, `"1"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Self::from_ratio(BigRational::new(n, d))
    }
}

impl Serialize for Rational01 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational01 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The operations every predicate carrier provides. `self` describes the
/// carrier (e.g. the underlying set), elements are values of `Elem`.
pub trait EffectAlgebra {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Partial sum; `None` when the arguments are not orthogonal.
    fn ovee(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn ortho(&self, a: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// Element equality: structural for exact carriers, tolerance based for
    /// numerical ones.
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Scalar multiplication, for carriers that are effect modules.
    fn scale(&self, _s: &Rational01, _a: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::Unsupported("carrier has no scalar multiplication".into()))
    }

    fn orthogonal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.ovee(a, b).is_some()
    }
}

/// The scalar effect monoid `[0,1] ∩ ℚ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitInterval;

impl EffectAlgebra for UnitInterval {
    type Elem = Rational01;

    fn zero(&self) -> Rational01 {
        Rational01::zero()
    }
    fn one(&self) -> Rational01 {
        Rational01::one()
    }
    fn ovee(&self, a: &Rational01, b: &Rational01) -> Option<Rational01> {
        a.ovee(b)
    }
    fn ortho(&self, a: &Rational01) -> Rational01 {
        a.ortho()
    }
    fn leq(&self, a: &Rational01, b: &Rational01) -> bool {
        a <= b
    }
    fn same(&self, a: &Rational01, b: &Rational01) -> bool {
        a == b
    }
    fn scale(&self, s: &Rational01, a: &Rational01) -> Result<Rational01> {
        Ok(s.mul(a))
    }
}

/// The downset `↓top` of an effect algebra, itself an effect algebra with
/// `top` as unit and orthosupplement `x ↦ (top⊥ ⊎ x)⊥`.
pub struct DownSet<'a, A: EffectAlgebra> {
    base: &'a A,
    top: A::Elem,
}

impl<'a, A: EffectAlgebra> DownSet<'a, A> {
    pub fn new(base: &'a A, top: A::Elem) -> Self {
        DownSet { base, top }
    }

    pub fn contains(&self, x: &A::Elem) -> bool {
        self.base.leq(x, &self.top)
    }
}

impl<A: EffectAlgebra> EffectAlgebra for DownSet<'_, A> {
    type Elem = A::Elem;

    fn zero(&self) -> A::Elem {
        self.base.zero()
    }
    fn one(&self) -> A::Elem {
        self.top.clone()
    }
    fn ovee(&self, a: &A::Elem, b: &A::Elem) -> Option<A::Elem> {
        self.base.ovee(a, b).filter(|s| self.base.leq(s, &self.top))
    }
    fn ortho(&self, a: &A::Elem) -> A::Elem {
        let top_perp = self.base.ortho(&self.top);
        match self.base.ovee(&top_perp, a) {
            Some(s) => self.base.ortho(&s),
            // a is not below top; there is no meaningful complement.
            None => self.base.zero(),
        }
    }
    fn leq(&self, a: &A::Elem, b: &A::Elem) -> bool {
        self.base.leq(a, b)
    }
    fn same(&self, a: &A::Elem, b: &A::Elem) -> bool {
        self.base.same(a, b)
    }
}

/// Scalars as returned by validity: exact rationals in the Boolean and
/// probabilistic instances, doubles in the quantum one.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn ovee(&self, other: &Self) -> Option<Self>;
    fn ortho(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_rational(r: &Rational01) -> Self;
    /// Equality up to `tol`; exact scalars ignore the tolerance.
    fn close(&self, other: &Self, tol: f64) -> bool;
}

impl Scalar for Rational01 {
    fn zero() -> Self {
        Rational01::zero()
    }
    fn one() -> Self {
        Rational01::one()
    }
    fn mul(&self, other: &Self) -> Self {
        Rational01::mul(self, other)
    }
    fn ovee(&self, other: &Self) -> Option<Self> {
        Rational01::ovee(self, other)
    }
    fn ortho(&self) -> Self {
        Rational01::ortho(self)
    }
    fn to_f64(&self) -> f64 {
        Rational01::to_f64(self)
    }
    fn from_rational(r: &Rational01) -> Self {
        r.clone()
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Slack allowed when adding floating-point scalars past 1.
pub const F64_SCALAR_SLACK: f64 = 1e-8;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ovee(&self, other: &Self) -> Option<Self> {
        let s = self + other;
        (s <= 1.0 + F64_SCALAR_SLACK).then_some(s.min(1.0))
    }
    fn ortho(&self) -> Self {
        1.0 - self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(r: &Rational01) -> Self {
        r.to_f64()
    }
    fn close(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational01 {
        Rational01::new(n, d).unwrap()
    }

    #[test]
    fn ovee_examples() {
        assert_eq!(r(1, 3).ovee(&r(1, 3)), Some(r(2, 3)));
        assert_eq!(r(3, 4).ovee(&r(1, 2)), None);
        for n in 0..50 {
            let x = r(n, 49);
            assert_eq!(x.ovee(&Rational01::zero()), Some(x.clone()));
        }
    }

    #[test]
    fn ortho_examples() {
        assert_eq!(Rational01::zero().ortho(), Rational01::one());
        assert_eq!(r(2, 5).ortho(), r(3, 5));
        assert_eq!(r(7, 13).ortho().ortho(), r(7, 13));
    }

    #[test]
    fn leq_and_scale() {
        let u = UnitInterval;
        assert!(u.leq(&r(1, 4), &r(1, 2)));
        assert!(!u.leq(&r(1, 2), &r(1, 4)));
        assert!(u.leq(&r(5, 7), &u.one()));
        assert_eq!(u.scale(&r(1, 2), &r(1, 2)).unwrap(), r(1, 4));
        assert_eq!(u.scale(&Rational01::one(), &r(3, 8)).unwrap(), r(3, 8));
    }

    #[test]
    fn normalizes_and_rejects() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(2, 4).to_string(), "1/2");
        assert!(Rational01::new(3, 2).is_err());
        assert!(Rational01::new(-1, 2).is_err());
        assert!(Rational01::new(1, 0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!("1/3".parse::<Rational01>().unwrap(), r(1, 3));
        assert_eq!("1".parse::<Rational01>().unwrap(), Rational01::one());
        assert_eq!("4/8".parse::<Rational01>().unwrap(), r(1, 2));
        assert!("5/4".parse::<Rational01>().is_err());
        assert!("x/4".parse::<Rational01>().is_err());
        let json = serde_json::to_string(&r(3, 9)).unwrap();
        assert_eq!(json, "\"1/3\"");
        let back: Rational01 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r(1, 3));
    }

    #[test]
    fn downset_ortho() {
        let u = UnitInterval;
        let d = DownSet::new(&u, r(3, 4));
        // ortho_y(x) = (y⊥ ⊎ x)⊥ = 1 - (1/4 + 1/4) = 1/2
        assert_eq!(d.ortho(&r(1, 4)), r(1, 2));
        assert_eq!(d.ovee(&r(1, 2), &r(1, 2)), None);
        assert_eq!(d.ovee(&r(1, 2), &r(1, 4)), Some(r(3, 4)));
        assert!(d.contains(&r(3, 4)));
        assert!(!d.contains(&r(4, 5)));
    }

    #[test]
    fn division() {
        assert_eq!(r(1, 4).div(&r(1, 2)), Some(r(1, 2)));
        assert_eq!(r(1, 2).div(&r(1, 4)), None);
        assert_eq!(r(1, 2).div(&Rational01::zero()), None);
    }
}
