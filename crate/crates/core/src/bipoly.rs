//! Bihomogeneous polynomials on Q = P1 x P1.
//!
//! A form of bidegree `(a, b)` in `(u0:u1)`, `(v0:v1)` is stored densely as an
//! `(a+1) x (b+1)` array; entry `(i, j)` is the coefficient of
//! `u0^(a-i) u1^i v0^(b-j) v1^j`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{format_rational, parse_rational, Coeff, FromInt};
use crate::{Error, Rational, Result};

/// Bidegree `(a, b)`: degree `a` in `u`, `b` in `v`.
///
/// Negative entries name classes without sections, like `K_Q = (-2,-2)`;
/// such a bidegree is *empty* and `V(a,b) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDegree {
    pub a: i64,
    pub b: i64,
}

impl BiDegree {
    pub const fn new(a: i64, b: i64) -> Self {
        BiDegree { a, b }
    }

    /// Canonical class of the quadric.
    pub const K_Q: BiDegree = BiDegree::new(-2, -2);
    /// `L1 = L2 = (3,2)`.
    pub const L1: BiDegree = BiDegree::new(3, 2);
    pub const L2: BiDegree = BiDegree::new(3, 2);
    /// `L3 = (2,3)`.
    pub const L3: BiDegree = BiDegree::new(2, 3);
    /// `N = 2 K_Q + D1 + D2 + D3 = (4,3)`.
    pub const N: BiDegree = BiDegree::new(4, 3);
    /// Branch curve classes.
    pub const D1: BiDegree = BiDegree::new(2, 3);
    pub const D2: BiDegree = BiDegree::new(2, 3);
    pub const D3: BiDegree = BiDegree::new(4, 1);

    pub fn is_empty(self) -> bool {
        self.a < 0 || self.b < 0
    }

    /// Intersection number `a b' + b a'` of the two classes.
    pub fn intersect(self, other: BiDegree) -> i64 {
        self.a * other.b + self.b * other.a
    }

    /// Swap the two factors of `P1 x P1`.
    pub fn swapped(self) -> BiDegree {
        BiDegree::new(self.b, self.a)
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul<BiDegree> for i64 {
    type Output = BiDegree;
    fn mul(self, d: BiDegree) -> BiDegree {
        BiDegree::new(self * d.a, self * d.b)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// `dim V(a,b) = (a+1)(b+1)`, zero for an empty bidegree.
pub fn dim_v(d: BiDegree) -> usize {
    if d.is_empty() {
        0
    } else {
        ((d.a + 1) * (d.b + 1)) as usize
    }
}

/// Monomials `(i, j) = (u1-exponent, v1-exponent)` of `V(a,b)` in graded-lex
/// order: by `i + j`, then by `i`.
pub fn monomial_basis(d: BiDegree) -> Vec<(usize, usize)> {
    if d.is_empty() {
        return Vec::new();
    }
    let (a, b) = (d.a as usize, d.b as usize);
    let mut out = Vec::with_capacity((a + 1) * (b + 1));
    for total in 0..=(a + b) {
        for i in total.saturating_sub(b)..=total.min(a) {
            out.push((i, total - i));
        }
    }
    out
}

/// One of the four homogeneous coordinates on `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    U0,
    U1,
    V0,
    V1,
}

/// Bihomogeneous form with coefficients in `T`.
#[derive(Clone, PartialEq)]
pub struct BiPoly<T> {
    deg: BiDegree,
    coeffs: Vec<T>,
}

impl<T: Coeff> BiPoly<T> {
    /// The zero form of bidegree `d`.
    ///
    /// # Panics
    /// If `d` is empty.
    pub fn zero(d: BiDegree) -> Self {
        assert!(!d.is_empty(), "no forms of bidegree {d}");
        BiPoly {
            deg: d,
            coeffs: vec![T::zero(); dim_v(d)],
        }
    }

    pub fn constant(c: T) -> Self {
        BiPoly {
            deg: BiDegree::new(0, 0),
            coeffs: vec![c],
        }
    }

    /// `c * u0^(a-i) u1^i v0^(b-j) v1^j`.
    pub fn monomial(d: BiDegree, i: usize, j: usize, c: T) -> Self {
        let mut p = Self::zero(d);
        p.set(i, j, c);
        p
    }

    /// Build from a function of `(i, j)`.
    pub fn from_fn(d: BiDegree, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut p = Self::zero(d);
        let cols = p.cols();
        for (k, c) in p.coeffs.iter_mut().enumerate() {
            *c = f(k / cols, k % cols);
        }
        p
    }

    /// Build from rows `coeffs[i][j]`.
    pub fn from_rows(d: BiDegree, rows: Vec<Vec<T>>) -> Result<Self> {
        let shape_ok = !d.is_empty()
            && rows.len() == d.a as usize + 1
            && rows.iter().all(|r| r.len() == d.b as usize + 1);
        if !shape_ok {
            return Err(Error::BidegreeMismatch {
                expected: d.to_string(),
                found: format!(
                    "{}x{:?} coefficient array",
                    rows.len(),
                    rows.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        Ok(BiPoly {
            deg: d,
            coeffs: rows.into_iter().flatten().collect(),
        })
    }

    pub fn bidegree(&self) -> BiDegree {
        self.deg
    }

    fn rows(&self) -> usize {
        self.deg.a as usize + 1
    }

    fn cols(&self) -> usize {
        self.deg.b as usize + 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> &T {
        &self.coeffs[i * self.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: T) {
        let cols = self.cols();
        self.coeffs[i * cols + j] = c;
    }

    /// Row `i`: the coefficient of `u0^(a-i) u1^i`, a form in `v`.
    pub fn row(&self, i: usize) -> &[T] {
        let cols = self.cols();
        &self.coeffs[i * cols..(i + 1) * cols]
    }

    /// Column `j`: the coefficient of `v0^(b-j) v1^j`, a form in `u`.
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows()).map(|i| self.coeff(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients in the graded-lex monomial order of [`monomial_basis`].
    pub fn coords(&self) -> Vec<T> {
        monomial_basis(self.deg)
            .into_iter()
            .map(|(i, j)| self.coeff(i, j).clone())
            .collect()
    }

    pub fn from_coords(d: BiDegree, coords: &[T]) -> Self {
        let mut p = Self::zero(d);
        for ((i, j), c) in monomial_basis(d).into_iter().zip(coords) {
            p.set(i, j, c.clone());
        }
        p
    }

    pub fn scale(&self, c: &T) -> Self {
        BiPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> BiPoly<U> {
        BiPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Exchange the roles of `u` and `v`.
    pub fn transpose(&self) -> Self {
        let d = self.deg.swapped();
        Self::from_fn(d, |i, j| self.coeff(j, i).clone())
    }

    /// Exact product, bidegrees add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.deg + other.deg);
        let oc = out.cols();
        let (sc, tc) = (self.cols(), other.cols());
        for (k1, c1) in self.coeffs.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            let (i1, j1) = (k1 / sc, k1 % sc);
            for (k2, c2) in other.coeffs.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                let (i2, j2) = (k2 / tc, k2 % tc);
                let slot = &mut out.coeffs[(i1 + i2) * oc + j1 + j2];
                *slot = slot.clone() + c1.clone() * c2.clone();
            }
        }
        out
    }

    /// Homogeneous evaluation at representatives `u = (u0, u1)`, `v = (v0, v1)`.
    pub fn eval(&self, u: &[T; 2], v: &[T; 2]) -> T {
        let pu = powers_pair(u, self.deg.a as usize);
        let pv = powers_pair(v, self.deg.b as usize);
        let cols = self.cols();
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + c.clone() * pu[k / cols].clone() * pv[k % cols].clone();
        }
        acc
    }

    /// Specialize `v`, leaving a binary form in `u` (index = `u1` exponent).
    pub fn at_v(&self, v: &[T; 2]) -> Vec<T> {
        let pv = powers_pair(v, self.deg.b as usize);
        (0..self.rows())
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&pv)
                    .fold(T::zero(), |acc, (c, p)| acc + c.clone() * p.clone())
            })
            .collect()
    }

    /// Specialize `u`, leaving a binary form in `v` (index = `v1` exponent).
    pub fn at_u(&self, u: &[T; 2]) -> Vec<T> {
        self.transpose().at_v(u)
    }

    /// Formal partial derivative; the matching degree drops by one.
    ///
    /// Differentiating in a variable group of degree 0 gives the zero form of
    /// the same bidegree.
    pub fn partial(&self, var: Var) -> Self
    where
        T: FromInt,
    {
        let (a, b) = (self.deg.a as usize, self.deg.b as usize);
        match var {
            Var::U0 | Var::U1 if a == 0 => Self::zero(self.deg),
            Var::V0 | Var::V1 if b == 0 => Self::zero(self.deg),
            Var::U0 => Self::from_fn(BiDegree::new(a as i64 - 1, b as i64), |i, j| {
                self.coeff(i, j).clone() * T::from_int((a - i) as i64)
            }),
            Var::U1 => Self::from_fn(BiDegree::new(a as i64 - 1, b as i64), |i, j| {
                self.coeff(i + 1, j).clone() * T::from_int((i + 1) as i64)
            }),
            Var::V0 => Self::from_fn(BiDegree::new(a as i64, b as i64 - 1), |i, j| {
                self.coeff(i, j).clone() * T::from_int((b - j) as i64)
            }),
            Var::V1 => Self::from_fn(BiDegree::new(a as i64, b as i64 - 1), |i, j| {
                self.coeff(i, j + 1).clone() * T::from_int((j + 1) as i64)
            }),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(
            self.deg, other.deg,
            "adding forms of different bidegrees {} and {}",
            self.deg, other.deg
        );
        BiPoly {
            deg: self.deg,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| f(x, y))
                .collect(),
        }
    }
}

/// `[x0^n, x0^(n-1) x1, ..., x1^n]`.
pub(crate) fn powers_pair<T: Coeff>(x: &[T; 2], n: usize) -> Vec<T> {
    let mut p0 = vec![T::one(); n + 1];
    let mut p1 = vec![T::one(); n + 1];
    for k in 1..=n {
        p0[k] = p0[k - 1].clone() * x[0].clone();
        p1[k] = p1[k - 1].clone() * x[1].clone();
    }
    (0..=n).map(|i| p0[n - i].clone() * p1[i].clone()).collect()
}

impl<T: Coeff> Add for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn add(self, o: &BiPoly<T>) -> BiPoly<T> {
        self.zip_with(o, |x, y| x.clone() + y.clone())
    }
}

impl<T: Coeff> Sub for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn sub(self, o: &BiPoly<T>) -> BiPoly<T> {
        self.zip_with(o, |x, y| x.clone() - y.clone())
    }
}

impl<T: Coeff> Mul for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn mul(self, o: &BiPoly<T>) -> BiPoly<T> {
        BiPoly::mul(self, o)
    }
}

impl<T: Coeff> Neg for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn neg(self) -> BiPoly<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Coeff> fmt::Debug for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly{}{:?}", self.deg, self.rows_vec())
    }
}

impl BiPoly<Rational> {
    /// Integer-coefficient monomial constructor, handy in tests and fixtures.
    pub fn int_monomial(d: BiDegree, i: usize, j: usize, c: i64) -> Self {
        Self::monomial(d, i, j, Rational::from_int(c))
    }

    /// Build from integer rows.
    pub fn from_int_rows(d: BiDegree, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            d,
            rows.iter()
                .map(|r| r.iter().map(|&c| Rational::from_int(c)).collect())
                .collect(),
        )
    }
}

/// Random form with integer coefficients uniform in `[-bound, bound]`.
pub fn random_bipoly<T: Coeff + FromInt, R: Rng + ?Sized>(
    d: BiDegree,
    bound: u32,
    rng: &mut R,
) -> BiPoly<T> {
    let bound = bound.max(1) as i64;
    BiPoly::from_fn(d, |_, _| T::from_int(rng.gen_range(-bound..=bound)))
}

/// Point of `Q` with coordinates normalized so the last nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub u: [Rational; 2],
    pub v: [Rational; 2],
}

impl QPoint {
    pub fn new(u: [Rational; 2], v: [Rational; 2]) -> Result<Self> {
        Ok(QPoint {
            u: normalize_pair(u)?,
            v: normalize_pair(v)?,
        })
    }

    /// Affine point `u = (s : 1)`, `v = (t : 1)`.
    pub fn affine(s: Rational, t: Rational) -> Self {
        QPoint {
            u: [s, Rational::one()],
            v: [t, Rational::one()],
        }
    }
}

fn normalize_pair(x: [Rational; 2]) -> Result<[Rational; 2]> {
    let [x0, x1] = x;
    if !x1.is_zero() {
        Ok([x0 / &x1, Rational::one()])
    } else if !x0.is_zero() {
        Ok([Rational::one(), Rational::zero()])
    } else {
        Err(Error::InvalidArgument("point (0:0) is not in P1".into()))
    }
}

impl BiPoly<Rational> {
    /// Value at the normalized representative of `x`.
    pub fn eval_at(&self, x: &QPoint) -> Rational {
        self.eval(&x.u, &x.v)
    }
}

#[derive(Serialize, Deserialize)]
struct BiPolyJson {
    bidegree: [i64; 2],
    coeffs: Vec<Vec<String>>,
}

impl Serialize for BiPoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiPolyJson {
            bidegree: [self.deg.a, self.deg.b],
            coeffs: self
                .rows_vec()
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BiPolyJson::deserialize(d)?;
        let deg = BiDegree::new(raw.bidegree[0], raw.bidegree[1]);
        let rows = raw
            .coeffs
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        BiPoly::from_rows(deg, rows).map_err(D::Error::custom)
    }
}
