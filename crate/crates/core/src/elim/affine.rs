//! Dense affine univariate polynomials over a field, as coefficient vectors
//! indexed by exponent. Vectors are kept trimmed (no trailing zeros); the zero
//! polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{common_denominator, scaled_integer, Field};
use crate::Rational;

pub fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: Field>(p: &[F]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add<F: Field>(p: &[F], q: &[F]) -> Vec<F> {
    let n = p.len().max(q.len());
    trim(
        (0..n)
            .map(|k| {
                let a = p.get(k).cloned().unwrap_or_else(F::zero);
                let b = q.get(k).cloned().unwrap_or_else(F::zero);
                a + b
            })
            .collect(),
    )
}

pub fn sub<F: Field>(p: &[F], q: &[F]) -> Vec<F> {
    let n = p.len().max(q.len());
    trim(
        (0..n)
            .map(|k| {
                let a = p.get(k).cloned().unwrap_or_else(F::zero);
                let b = q.get(k).cloned().unwrap_or_else(F::zero);
                a - b
            })
            .collect(),
    )
}

pub fn mul<F: Field>(p: &[F], q: &[F]) -> Vec<F> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    trim(out)
}

pub fn scale<F: Field>(p: &[F], c: &F) -> Vec<F> {
    trim(p.iter().map(|x| x.clone() * c.clone()).collect())
}

/// Euclidean division `p = quot * d + rem`.
///
/// # Panics
/// If `d` is zero.
pub fn divrem<F: Field>(p: &[F], d: &[F]) -> (Vec<F>, Vec<F>) {
    let d = trim(d.to_vec());
    let dd = degree(&d).expect("division by the zero polynomial");
    let lead_inv = d[dd].inv();
    let mut rem = trim(p.to_vec());
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![F::zero(); rem.len() - dd];
    while let Some(rd) = degree(&rem) {
        if rd < dd {
            break;
        }
        let c = rem[rd].clone() * lead_inv.clone();
        let shift = rd - dd;
        for (k, dk) in d.iter().enumerate() {
            rem[shift + k] = rem[shift + k].clone() - c.clone() * dk.clone();
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn monic<F: Field>(p: &[F]) -> Vec<F> {
    match degree(p) {
        None => Vec::new(),
        Some(d) => scale(p, &p[d].inv()),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd<F: Field>(p: &[F], q: &[F]) -> Vec<F> {
    F::poly_gcd(p, q)
}

/// Plain Euclidean gcd, monic.
pub fn euclid_gcd<F: Field>(p: &[F], q: &[F]) -> Vec<F> {
    let mut a = trim(p.to_vec());
    let mut b = trim(q.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Extended gcd: returns `(g, s)` with `s * p = g (mod q)`, `g` monic.
pub fn gcd_with_cofactor<F: Field>(p: &[F], q: &[F]) -> (Vec<F>, Vec<F>) {
    let (mut r0, mut r1) = (trim(p.to_vec()), trim(q.to_vec()));
    let (mut s0, mut s1) = (vec![F::one()], Vec::new());
    while !r1.is_empty() {
        let (quot, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&quot, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    match degree(&r0) {
        None => (Vec::new(), Vec::new()),
        Some(d) => {
            let c = r0[d].inv();
            (scale(&r0, &c), scale(&s0, &c))
        }
    }
}

fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let c = p.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if c.is_zero() || c.is_one() {
        p
    } else {
        p.into_iter().map(|x| x / &c).collect()
    }
}

fn integer_primitive(p: &[Rational]) -> Vec<BigInt> {
    let p = trim(p.to_vec());
    let den = common_denominator(p.iter());
    primitive(p.iter().map(|q| scaled_integer(q, &den)).collect())
}

/// Gcd over the rationals by a primitive pseudo-remainder sequence, which
/// keeps coefficient growth in check.
pub fn rational_gcd(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut a = integer_primitive(p);
    let mut b = integer_primitive(q);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb = b.last().expect("nonzero").clone();
        let mut r = a;
        while r.len() >= b.len() {
            let lr = r.last().expect("trimmed").clone();
            let shift = r.len() - b.len();
            for x in r.iter_mut() {
                *x *= &lb;
            }
            for (k, bk) in b.iter().enumerate() {
                r[shift + k] -= &lr * bk;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            r = primitive(r);
        }
        a = b;
        b = r;
    }
    monic(&a.into_iter().map(Rational::from_integer).collect::<Vec<_>>())
}

pub fn derivative<F: Field + crate::scalar::FromInt>(p: &[F]) -> Vec<F> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * F::from_int(k as i64))
            .collect(),
    )
}

pub fn eval<F: Field>(p: &[F], x: &F) -> F {
    p.iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FromInt;
    use crate::Rational;

    fn p(cs: &[i64]) -> Vec<Rational> {
        trim(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4, 5]);
        let d = p(&[-1, 0, 2]);
        let (q, r) = divrem(&a, &d);
        assert_eq!(add(&mul(&q, &d), &r), a);
        assert!(degree(&r).is_none_or(|x| x < 2));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = mul(&p(&[1, 1]), &p(&[2, 0, 1]));
        let g = mul(&p(&[1, 1]), &p(&[-3, 1]));
        assert_eq!(gcd(&f, &g), p(&[1, 1]));
        assert_eq!(gcd(&f, &[]), monic(&f));
    }

    #[test]
    fn pseudo_remainder_gcd_matches_euclid() {
        let common = p(&[3, -7, 2]);
        let f = mul(&common, &p(&[5, 0, -4, 9]));
        let g = mul(&common, &mul(&p(&[1, 11]), &p(&[-6, 1, 1])));
        assert_eq!(rational_gcd(&f, &g), euclid_gcd(&f, &g));
        assert_eq!(rational_gcd(&f, &g), monic(&common));
        assert_eq!(rational_gcd(&p(&[2, 1]), &p(&[3, 1])), p(&[1]));
        assert!(rational_gcd(&[], &[]).is_empty());
    }

    #[test]
    fn cofactor_inverts_mod() {
        let m = p(&[-2, 0, 1]);
        let a = p(&[3, 1]);
        let (g, s) = gcd_with_cofactor(&a, &m);
        assert_eq!(g, p(&[1]));
        assert_eq!(divrem(&mul(&s, &a), &m).1, p(&[1]));
    }
}
