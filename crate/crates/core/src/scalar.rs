//! Scalar traits shared by the polynomial and linear-algebra layers.
//!
//! Polynomials and matrices are generic over their coefficient type. Symbolic
//! paths use [`Rational`](crate::Rational) or [`BigInt`]; the numeric cover
//! model instantiates the same polynomial code with [`Complex64`]; the mod-p
//! smoothness scan uses [`Fp`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

/// Commutative ring element usable as a polynomial coefficient.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Send
        + Sync
{
}

/// A coefficient ring with a field structure.
pub trait Field: Coeff + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Monic gcd of dense univariate polynomials (index = exponent).
    fn poly_gcd(p: &[Self], q: &[Self]) -> Vec<Self> {
        crate::elim::affine::euclid_gcd(p, q)
    }
}

impl Field for BigRational {
    fn poly_gcd(p: &[Self], q: &[Self]) -> Vec<Self> {
        crate::elim::affine::rational_gcd(p, q)
    }
}
impl Field for f64 {}
impl Field for Complex64 {}
impl<const P: u32> Field for Fp<P> {}

/// Integral domain with exact division (the quotient is known to exist).
///
/// This is what fraction-free elimination needs.
pub trait IntegralDomain: Coeff {
    fn exact_div(&self, divisor: &Self) -> Self;
}

impl IntegralDomain for BigInt {
    fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact integer division");
        q
    }
}

impl IntegralDomain for BigRational {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl<const P: u32> IntegralDomain for Fp<P> {
    fn exact_div(&self, divisor: &Self) -> Self {
        *self / *divisor
    }
}

/// Integer conversion used by samplers and fixtures.
pub trait FromInt {
    fn from_int(n: i64) -> Self;
}

impl FromInt for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl FromInt for BigInt {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl FromInt for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl FromInt for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl<const P: u32> FromInt for Fp<P> {
    fn from_int(n: i64) -> Self {
        Fp::new(n)
    }
}

/// Prime field element, `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u32>(u32);

/// The prime used by the probabilistic smoothness scan.
pub const SCAN_PRIME: u32 = 10007;

impl<const P: u32> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Reduce a rational; `None` when the denominator vanishes mod `P`.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let num = q.numer().mod_floor(&p);
        let den = q.denom().mod_floor(&p);
        if den.is_zero() {
            return None;
        }
        let to_u = |b: BigInt| -> i64 { i64::try_from(b).expect("reduced below P") };
        Some(Fp::new(to_u(num)) / Fp::new(to_u(den)))
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp(((self.0 as u64 + o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in F_{P}");
        self * o.pow(P as u64 - 2)
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

/// Format a rational as `"num/den"`, omitting the denominator when it is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Lossy conversion of an exact rational to `f64`.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down both parts to stay in range
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// `q * scale` as an integer; `scale` must clear the denominator of `q`.
pub fn scaled_integer(q: &BigRational, scale: &BigInt) -> BigInt {
    let r = q * BigRational::from_integer(scale.clone());
    debug_assert!(r.is_integer());
    r.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp<SCAN_PRIME>;

    #[test]
    fn fp_field_axioms() {
        let a = F::new(1234);
        let b = F::new(-77);
        assert_eq!(a * a.inv(), F::one());
        assert_eq!((a + b) - b, a);
        assert_eq!(-(-a), a);
        assert_eq!(F::new(SCAN_PRIME as i64), F::zero());
    }

    #[test]
    fn fp_from_rational() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(4));
        let x = F::from_rational(&q).unwrap();
        assert_eq!(x * F::new(4), F::new(3));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(SCAN_PRIME));
        assert!(F::from_rational(&bad).is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-7", "3/4", "-12/5"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
