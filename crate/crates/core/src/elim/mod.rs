//! Elimination of one `P1` factor: binary forms, Sylvester resultants, the
//! closed-form resultant of two quadratics, and projective gcd/squarefree
//! tests.

pub mod affine;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bipoly::BiPoly;
use crate::linalg::bareiss_det;
use crate::scalar::{format_rational, parse_rational, Coeff, Field, FromInt, IntegralDomain};
use crate::{Error, Rational, Result};

/// Binary form of a declared degree `d` in `(x0 : x1)`; `coeffs[k]` multiplies
/// `x0^(d-k) x1^k`.
///
/// The declared degree is kept even when extreme coefficients vanish, so roots
/// at `(0:1)` and `(1:0)` are counted projectively.
#[derive(Clone, PartialEq)]
pub struct UniPoly<T> {
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("binary form needs at least one coefficient".into()));
        }
        Ok(UniPoly {
            degree: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn zero_of_degree(d: usize) -> Self {
        UniPoly {
            degree: d,
            coeffs: vec![T::zero(); d + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Homogeneous evaluation at `(x0, x1)`.
    pub fn eval(&self, x: &[T; 2]) -> T {
        crate::bipoly::powers_pair(x, self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .fold(T::zero(), |acc, (p, c)| acc + p * c.clone())
    }

    fn combine(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        if self.is_zero() && other.degree != self.degree {
            return other.map(|c| f(T::zero(), c.clone()));
        }
        if other.is_zero() && other.degree != self.degree {
            return self.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "adding binary forms of different degrees"
        );
        UniPoly {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }
}

impl<T: Field> UniPoly<T> {
    /// Dehomogenize at `x0 = 1`; the result is trimmed.
    pub fn affine(&self) -> Vec<T> {
        affine::trim(self.coeffs.clone())
    }

    /// Rehomogenize an affine polynomial to degree `d`.
    pub fn from_affine(p: &[T], d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d + 1];
        for (k, c) in p.iter().enumerate() {
            assert!(k <= d, "affine polynomial exceeds declared degree");
            coeffs[k] = c.clone();
        }
        UniPoly { degree: d, coeffs }
    }

    /// Multiplicity of the root `(0:1)`, i.e. the power of `x0` dividing the
    /// form. `None` for the zero form.
    pub fn multiplicity_at_infinity(&self) -> Option<usize> {
        affine::degree(&self.coeffs).map(|dd| self.degree - dd)
    }

    /// Normalize so the last nonzero coefficient is 1.
    pub fn monic(&self) -> Self {
        Self::from_affine(&affine::monic(&self.coeffs), self.degree)
    }

    /// Formal derivative with respect to `x1`.
    pub fn derivative_x1(&self) -> Self
    where
        T: FromInt,
    {
        if self.degree == 0 {
            return Self::zero_of_degree(0);
        }
        Self::from_affine(&affine::derivative(&self.affine()), self.degree - 1)
    }
}

impl<T: Coeff> Zero for UniPoly<T> {
    fn zero() -> Self {
        Self::zero_of_degree(0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<T: Coeff> One for UniPoly<T> {
    fn one() -> Self {
        UniPoly {
            degree: 0,
            coeffs: vec![T::one()],
        }
    }
}

impl<T: Coeff> Add for UniPoly<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.combine(&o, |a, b| a + b)
    }
}

impl<T: Coeff> Sub for UniPoly<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.combine(&o, |a, b| a - b)
    }
}

impl<T: Coeff> Neg for UniPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl<T: Coeff> Mul for UniPoly<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut coeffs = vec![T::zero(); self.degree + o.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly {
            degree: self.degree + o.degree,
            coeffs,
        }
    }
}

impl<F: Field> IntegralDomain for UniPoly<F> {
    fn exact_div(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by the zero form");
        let d = self.degree.saturating_sub(divisor.degree);
        if self.is_zero() {
            return Self::zero_of_degree(d);
        }
        let (q, r) = affine::divrem(&self.affine(), &divisor.affine());
        debug_assert!(r.is_empty(), "inexact division of binary forms");
        Self::from_affine(&q, d)
    }
}

impl<T: fmt::Debug> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]{:?}", self.degree, self.coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct UniPolyJson {
    degree: usize,
    coeffs: Vec<String>,
}

impl Serialize for UniPoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniPolyJson {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = UniPolyJson::deserialize(d)?;
        if raw.coeffs.len() != raw.degree + 1 {
            return Err(D::Error::custom(format!(
                "degree {} needs {} coefficients, found {}",
                raw.degree,
                raw.degree + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(UniPoly {
            degree: raw.degree,
            coeffs,
        })
    }
}

/// `u0^2 A(v) + u0 u1 B(v) + u1^2 C(v)` with `A, B, C` of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticInU<T> {
    pub a: UniPoly<T>,
    pub b: UniPoly<T>,
    pub c: UniPoly<T>,
}

impl<T: Coeff> QuadraticInU<T> {
    pub fn recompose(&self) -> BiPoly<T> {
        let d = crate::BiDegree::new(2, self.a.degree as i64);
        BiPoly::from_fn(d, |i, j| {
            [&self.a, &self.b, &self.c][i].coeffs[j].clone()
        })
    }

    /// The six coefficient forms `(A1, B1, C1)` of `self` then `(A2, B2, C2)`.
    fn sextuple<'a>(&'a self, other: &'a Self) -> [&'a UniPoly<T>; 6] {
        [&self.a, &self.b, &self.c, &other.a, &other.b, &other.c]
    }
}

/// Split a form of `u`-degree 2 into its `u`-coefficients.
pub fn decompose_quadratic<T: Coeff>(p: &BiPoly<T>) -> Result<QuadraticInU<T>> {
    let d = p.bidegree();
    if d.a != 2 {
        return Err(Error::BidegreeMismatch {
            expected: format!("(2,{})", d.b),
            found: d.to_string(),
        });
    }
    let row = |i| UniPoly::new(p.row(i).to_vec());
    Ok(QuadraticInU {
        a: row(0)?,
        b: row(1)?,
        c: row(2)?,
    })
}

/// `(A1 C2 - A2 C1)^2 + (B2 C1 - C2 B1)(A1 B2 - A2 B1)`, over any ring.
///
/// This is the resultant of `A1 x^2 + B1 x y + C1 y^2` and
/// `A2 x^2 + B2 x y + C2 y^2`.
pub fn quadratic_resultant<T: Coeff>([a1, b1, c1, a2, b2, c2]: [&T; 6]) -> T {
    let m = |x: &T, y: &T| x.clone() * y.clone();
    let ac = m(a1, c2) - m(a2, c1);
    let bc = m(b2, c1) - m(c2, b1);
    let ab = m(a1, b2) - m(a2, b1);
    ac.clone() * ac + bc * ab
}

/// Closed-form resultant `Res_u` of two quadratics in `u`; degree `4d`.
pub fn closed_form_delta<T: Coeff>(q1: &QuadraticInU<T>, q2: &QuadraticInU<T>) -> Result<UniPoly<T>> {
    let d = q1.a.degree;
    if q1.sextuple(q2).iter().any(|p| p.degree != d) {
        return Err(Error::InvalidArgument(
            "quadratics must share one v-degree".into(),
        ));
    }
    let delta = quadratic_resultant(q1.sextuple(q2));
    Ok(if delta.is_zero() {
        UniPoly::zero_of_degree(4 * d)
    } else {
        delta
    })
}

/// `Res_u(p, q)` as a binary form in `v`, by fraction-free expansion of the
/// Sylvester matrix whose entries are the `u`-coefficients of `p` and `q`.
///
/// The declared degree is `a_q b_p + a_p b_q`.
pub fn sylvester_resultant_u<F: Field>(p: &BiPoly<F>, q: &BiPoly<F>) -> Result<UniPoly<F>> {
    let (dp, dq) = (p.bidegree(), q.bidegree());
    if dp.a == 0 || dq.a == 0 {
        return Err(Error::InvalidArgument(
            "resultant in u needs positive u-degrees".into(),
        ));
    }
    let (ap, aq) = (dp.a as usize, dq.a as usize);
    let n = ap + aq;
    let mut m: Vec<Vec<UniPoly<F>>> = vec![vec![UniPoly::zero(); n]; n];
    for r in 0..aq {
        for i in 0..=ap {
            m[r][r + i] = UniPoly::new(p.row(i).to_vec())?;
        }
    }
    for r in 0..ap {
        for i in 0..=aq {
            m[aq + r][r + i] = UniPoly::new(q.row(i).to_vec())?;
        }
    }
    let declared = (aq as i64 * dp.b + ap as i64 * dq.b) as usize;
    let det = bareiss_det(m);
    if det.is_zero() {
        return Ok(UniPoly::zero_of_degree(declared));
    }
    if det.degree != declared {
        return Err(Error::Internal(format!(
            "resultant degree {} differs from {declared}",
            det.degree
        )));
    }
    Ok(det)
}

/// `Res_v(p, q)` as a binary form in `u`.
pub fn sylvester_resultant_v<F: Field>(p: &BiPoly<F>, q: &BiPoly<F>) -> Result<UniPoly<F>> {
    sylvester_resultant_u(&p.transpose(), &q.transpose())
}

/// Projective gcd of two binary forms, normalized monic.
///
/// Common roots at `(0:1)` are tracked through the declared degrees.
pub fn uni_gcd<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<UniPoly<F>> {
    match (f.multiplicity_at_infinity(), g.multiplicity_at_infinity()) {
        (None, None) => Err(Error::ZeroPolynomial("gcd of two zero forms")),
        (Some(_), None) => Ok(f.monic()),
        (None, Some(_)) => Ok(g.monic()),
        (Some(mf), Some(mg)) => {
            let h = affine::gcd(&f.affine(), &g.affine());
            let dh = affine::degree(&h).unwrap_or(0);
            Ok(UniPoly::from_affine(&h, mf.min(mg) + dh))
        }
    }
}

/// Gcd of several forms; zero forms are skipped, `None` if all vanish.
pub fn uni_gcd_all<F: Field>(forms: &[UniPoly<F>]) -> Option<UniPoly<F>> {
    forms
        .iter()
        .filter(|f| !f.is_zero())
        .try_fold(None::<UniPoly<F>>, |acc, f| {
            Some(Some(match acc {
                None => f.monic(),
                Some(g) => uni_gcd(&g, f).ok()?,
            }))
        })
        .flatten()
}

/// `true` iff the form has `degree` distinct projective roots.
///
/// Checked on both charts: the root `(0:1)` has multiplicity at most one and
/// the dehomogenization is coprime to its derivative.
pub fn is_squarefree<F: Field + FromInt>(f: &UniPoly<F>) -> Result<bool> {
    let m_inf = f
        .multiplicity_at_infinity()
        .ok_or(Error::ZeroPolynomial("squarefree test"))?;
    if m_inf > 1 {
        return Ok(false);
    }
    let a = f.affine();
    let g = affine::gcd(&a, &affine::derivative(&a));
    Ok(affine::degree(&g) == Some(0))
}

/// Product of the distinct irreducible factors (projectively).
pub fn squarefree_part<F: Field + FromInt>(f: &UniPoly<F>) -> Result<UniPoly<F>> {
    let m_inf = f
        .multiplicity_at_infinity()
        .ok_or(Error::ZeroPolynomial("squarefree part"))?;
    let a = f.affine();
    let g = affine::gcd(&a, &affine::derivative(&a));
    let (q, _) = affine::divrem(&a, &g);
    let q = affine::monic(&q);
    let dq = affine::degree(&q).unwrap_or(0);
    Ok(UniPoly::from_affine(&q, dq + m_inf.min(1)))
}

impl UniPoly<Rational> {
    pub fn from_ints(cs: &[i64]) -> Self {
        UniPoly {
            degree: cs.len() - 1,
            coeffs: cs.iter().map(|&c| Rational::from_int(c)).collect(),
        }
    }
}
